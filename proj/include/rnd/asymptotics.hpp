#pragma once

#include <cstdint>

#include "rnd/gauss.hpp"
#include "rnd/series.hpp"

namespace rnd {

enum class KernelSign { plus, minus };

// F_+ for h > 0, F_- for h < 0.
KernelSign kernel_sign_for(double h);

// F_s(xi) = int (e^{s 2 pi i x^2} - 1) / x^2 e^{2 pi i x xi} dx, absolute error <= 1e-8.
// For |xi| <= 50 both internal routes are evaluated and must agree to 1e-6,
// otherwise convergence_error. Results are memoised per (xi rounded to 1e-12, s).
ComplexValue kernel_F(double xi, KernelSign s);

// 2 pi (-1 +- i) int_1^inf e^{i c v^2} / v^2 dv with c = -+ pi xi^2 / 2.
ComplexValue kernel_F_reduced(double xi, KernelSign s);
// Defining integral on [0, X] by composite Gauss-Legendre plus analytic tails.
ComplexValue kernel_F_direct(double xi, KernelSign s);
// Leading large-xi term 2 (1 +- i) e^{-+ i pi xi^2 / 2} / xi^2.
ComplexValue kernel_F_asymptotic(double xi, KernelSign s);

struct NearestLattice {
    std::int64_t m_q = 0;
    double x_q = 0.0;
    BigRational x_q_exact;
};

// m_q = argmin_m |x0 - m/q| (ties to the smaller m), x_q = x0 - m_q / q.
NearestLattice nearest_lattice(const RealArg& x0, std::int64_t q);

struct LocalExpansion {
    ComplexValue linear_term;  // -2 pi i h
    ComplexValue main_term;    // sqrt|h| / q G(p, m_q, q) F_s(x_q / sqrt|h|)
    double residual_bound_scale = 0.0;  // min(sqrt(q) |h|, q^{3/2} |h|^{3/2})
    GaussSumResult gauss;
    NearestLattice lattice;
    double xi = 0.0;
};

LocalExpansion local_expansion(const RealArg& x0, std::int64_t p, std::int64_t q, const RealArg& h);

struct ResidualOptions {
    // Truncation noise model: noise_constant * sqrt(q |h|) / n_max, plus the
    // base tail 4 / n_max when R(p/q) is not available in closed form.
    double noise_constant = 2.5;
    // Declare insufficient precision above this fraction of the bound scale.
    double noise_fraction = 0.1;
};

struct ResidualCheck {
    double ratio = 0.0;
    double residual = 0.0;
    double scale = 0.0;
    double noise_estimate = 0.0;
    bool exact_base = false;
    LocalExpansion expansion;
};

// |R(p/q + h) - R(p/q) - linear - main| / residual_bound_scale.
ResidualCheck residual_check(const RealArg& x0, std::int64_t p, std::int64_t q, const RealArg& h,
                             const SeriesParams& params, const ResidualOptions& options = {});

// Smallest n_max for which residual_check accepts (q, h) under the noise model.
std::uint64_t residual_n_max(std::int64_t q, double h, const ResidualOptions& options = {});

}  // namespace rnd
