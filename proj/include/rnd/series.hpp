#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rnd/numbers.hpp"
#include "rnd/numeric.hpp"

namespace rnd {

struct SeriesParams {
    std::uint64_t n_max = 1'000'000;
    int precision_bits = HighPrecisionReal::default_bits;
};

struct SeriesValue {
    ComplexValue value;
    double tail_bound = 0.0;
};

// An input point: exact rational, or fixed-point real.
using RealArg = std::variant<BigRational, HighPrecisionReal>;

HighPrecisionReal to_fixed(const RealArg& v, int bits);
double to_double(const RealArg& v);
// x0 - n0 style shifts keep the variant kind when both are rational.
RealArg add(const RealArg& a, const RealArg& b);

// R_{x0}(t) truncated to 0 < |n| <= n_max, with tail bound 4/n_max.
// Rational inputs with denominators below 2^62 use exact residues;
// everything else is reduced mod 1 in fixed point before any rounding.
SeriesValue eval_R(const RealArg& x0, const RealArg& t, const SeriesParams& params);

// Untruncated R_{x0}(t) for rational x0 and t, by summing residue classes
// n mod lcm(den t, den x0) in closed form. Requires that lcm to be <= 2^28.
ComplexValue eval_R_exact(const BigRational& x0, const BigRational& t);
bool exact_available(const BigRational& x0, const BigRational& t);

// phi(t) = 2 pi i t - 2 pi^2 (x0^2 - x0 + 1/6) + R_{x0}(t), for 0 <= x0 < 1.
SeriesValue eval_phi_traj(const RealArg& x0, const RealArg& t, const SeriesParams& params);

struct TrajectoryRow {
    double t;
    double re;
    double im;
};

// Uniform grid t_j = j / (t_count - 1) on [0, 1], sorted by t.
std::vector<TrajectoryRow> trajectory_grid(const RealArg& x0, std::size_t t_count, const SeriesParams& params);

}  // namespace rnd
