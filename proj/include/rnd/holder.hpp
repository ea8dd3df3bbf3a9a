#pragma once

#include <string>
#include <vector>

#include "rnd/diophantine.hpp"
#include "rnd/series.hpp"

namespace rnd {

struct HolderOptions {
    double h_min = 1e-10;
    double h_max = 1e-2;
    int samples_per_decade = 4;
    bool subtract_linear = false;
    SeriesParams params;
    int window = 8;  // neighbouring h pooled into one envelope value
    // Truncation noise of an increment is about noise_constant sqrt|h| / n_max;
    // it must stay below noise_fraction of the envelope.
    double noise_constant = 2.5;
    double noise_fraction = 0.01;
};

struct IncrementRow {
    double h = 0.0;
    double d = 0.0;         // |R(t+h) - R(t) (+ 2 pi i h)|
    double envelope = 0.0;  // max of d over the window around this h
};

struct EnvelopeFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::vector<double> envelope;  // in the order of the sorted input
};

// Sorts by |h| (both signs pooled), takes a moving maximum over window
// neighbours and regresses log envelope on log |h| over the points whose
// window lies inside the range. h and d are reordered.
EnvelopeFit envelope_regression(std::vector<double>& h, std::vector<double>& d, int window);

struct HolderEstimate {
    std::string t_descriptor;
    double alpha_hat = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    bool drift_subtracted = false;
    std::uint64_t n_max = 0;
    std::vector<IncrementRow> rows;
};

// The h grid is h_max 10^{-i / samples_per_decade} down to h_min, both signs.
HolderEstimate estimate_alpha(const RealArg& x0, const RealArg& t, const HolderOptions& options = {},
                              const std::string& t_descriptor = "");

struct SpectrumRow {
    double mu_target = 0.0;
    std::size_t witness = 0;
    double mu_hat = 0.0;
    double alpha_hat = 0.0;
    double prediction = 0.0;  // 1/2 + 1/(2 mu)
    double slope_stderr = 0.0;
    bool flagged = false;     // |alpha_hat - prediction| > 0.1
    std::string t_descriptor;
};

struct SpectrumOptions {
    HolderOptions holder;
    WitnessOptions witness;
    std::size_t depth = 40;
};

// Witness predicate for x0: multiples of 4Q for x0 = P/Q, otherwise q not in 4N.
DenominatorPredicate witness_predicate(const RealArg& x0);

// Witness i uses a_1 = i + 1 ahead of the steered construction.
Witness spectrum_witness(double mu, std::size_t index, const DenominatorPredicate& pred,
                         const SpectrumOptions& options);

std::vector<SpectrumRow> spectrum_scan(const RealArg& x0, const std::vector<double>& mu_list,
                                       std::size_t witnesses_per_mu, const SpectrumOptions& options = {});

}  // namespace rnd
