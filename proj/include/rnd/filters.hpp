#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "rnd/numeric.hpp"
#include "rnd/series.hpp"

namespace rnd {

// Base cutoff phi: smooth, even, 1 on [-1/2, 1/2], 0 outside (-1, 1).
// Built from the smooth step e^{-1/u} / (e^{-1/u} + e^{-1/(1-u)}).
double base_cutoff(double x);

// psi(x) = phi(x / 2) - phi(x), supported on 1/2 < |x| < 2.
double dyadic_cutoff(double x);

// psi_{-1} = phi / norm, psi_k(x) = psi(x / 2^k) / norm for k >= 0, with
// norm(x) = phi(x) + sum_{i >= 0} psi(x / 2^i).
double partition_weights(int k, double x);

enum class BandWeight {
    unit,           // psi_k(n)
    inverse_square, // psi_k(n) / n^2
    rescaled,       // psi_k(n) (2^k / n)^2, so inverse_square = 4^-k rescaled
};

struct FilterOptions {
    std::size_t grid_cap = std::size_t{1} << 24;
    // Relative change between grid doublings accepted for non-even p.
    double refine_tolerance = 1e-4;
};

struct BandSamples {
    int k_first = 0;
    int k_last = 0;
    double N = 0.0;  // 2^k_first
    BandWeight weight = BandWeight::unit;
    // Nonzero coefficients of the polynomial in e^{2 pi i f t}, f = n^2 > 0;
    // n and -n are merged.
    std::vector<std::pair<std::uint64_t, ComplexValue>> coefficients;
    std::uint64_t min_frequency = 0;
    std::uint64_t max_frequency = 0;
    std::size_t grid_size = 0;
    // Values at t_j = j / grid_size, times e^{-2 pi i min_frequency t_j}.
    std::vector<ComplexValue> samples;
};

// Block P_k for k >= 1 on the default grid, the smallest power of two above
// 2 (2^{k+1})^2.
BandSamples synthesize_band(const RealArg& x0, int k, bool weighted, const FilterOptions& options = {});

// Sum of blocks k_first..k_last with the given weights. grid_size 0 picks
// the default for k_last.
BandSamples synthesize_blocks(const RealArg& x0, int k_first, int k_last, BandWeight weight,
                              std::size_t grid_size = 0, const FilterOptions& options = {});

// Truncated high-pass filter P_{>= 2^k} R_{x0}: weighted blocks k..k+1, on the
// smallest power-of-two grid above twice the frequency span.
BandSamples synthesize_highpass(const RealArg& x0, int k, const FilterOptions& options = {});

// L^infinity bound on the discarded part of a truncated high-pass filter.
double highpass_tail_bound(const BandSamples& band);

// Sum of |c|^2 over the coefficients.
double coefficient_l2(const BandSamples& band);

// Mean of |samples|^p, the p-th power of the L^p(0, 1) norm.
double lp_norm(const BandSamples& band, double p, const FilterOptions& options = {});

struct ScaleRow {
    int k = 0;
    double N = 0.0;
    double norm_pow_p = 0.0;
};

struct EtaEstimate {
    double slope = 0.0;
    double r_squared = 0.0;
    std::vector<ScaleRow> rows;
    double eta_hat() const { return -slope; }
};

// Slope of log(norm^p) against log N. Weighted: truncated high-pass filters
// with N = 2^{2k}. Unweighted: single bands with N = 2^k.
EtaEstimate eta_estimate(const RealArg& x0, double p, int k_min, int k_max, bool weighted,
                         const FilterOptions& options = {});

// Fit norm^4 ~ a N^2 log N + b N^2.
TwoTermFit fit_p4(const std::vector<ScaleRow>& rows);

// F_p = ||P||_p^p / ||P||_2^p on the truncated high-pass filter at 2^k.
double flatness(const RealArg& x0, double p, int k, const FilterOptions& options = {});

// eta for rational x0: p/2 + 1 above 4, 3p/4 up to 4.
double exact_rational_eta(double p);

// min over the table of alpha p - eta(p) + 1. The p grid must lie in
// (0, p_max] with p_max >= 8.
double multifractal_inf(const std::vector<std::pair<double, double>>& eta, double alpha);

}  // namespace rnd
