#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rnd/errors.hpp"
#include "rnd/series.hpp"

using namespace rnd;
using std::numbers::pi;

namespace {

RealArg q(long a, long b) { return BigRational(a, b); }

SeriesParams params(std::uint64_t n, int bits = 256) { return {n, bits}; }

}  // namespace

TEST_CASE("closed-form values at t = 0") {
    // R_{x0}(0) = 2 pi^2 B_2(x0) with B_2(x) = x^2 - x + 1/6.
    for (auto [a, b] : {std::pair{0L, 1L}, {1L, 2L}, {1L, 3L}, {2L, 7L}}) {
        double x = static_cast<double>(a) / b;
        double want = 2 * pi * pi * (x * x - x + 1.0 / 6.0);
        SeriesValue v = eval_R(q(a, b), q(0, 1), params(1'000'000));
        CHECK(std::abs(v.value - ComplexValue(want, 0.0)) <= v.tail_bound);
        CHECK(v.tail_bound == doctest::Approx(4e-6));
        ComplexValue e = eval_R_exact(BigRational(a, b), BigRational(0));
        CHECK(std::abs(e - ComplexValue(want, 0.0)) < 1e-12);
    }
    CHECK(eval_R(q(0, 1), q(0, 1), params(1'000'000)).value.real() == doctest::Approx(3.28986).epsilon(1e-5));
    CHECK(eval_R(q(1, 2), q(0, 1), params(1'000'000)).value.real() == doctest::Approx(-1.64493).epsilon(1e-5));
}

TEST_CASE("fixed-point kernel matches a 50-digit direct sum") {
    const std::int64_t n = 3000;
    oracle::Float50 x0("0.3819660112501051517954131656343618822796908201942371378645513772947395371");
    oracle::Float50 t("0.1234567890123456789012345678901234567890123456789");
    for (int bits : {128, 256, 512}) {
        auto xf = HighPrecisionReal::from_rational(
            BigRational(BigInt("3819660112501051517954131656343618822796908201942371378645513772947395371"),
                        boost::multiprecision::pow(BigInt(10), 73)),
            bits);
        auto tf = HighPrecisionReal::from_rational(
            BigRational(BigInt("1234567890123456789012345678901234567890123456789"),
                        boost::multiprecision::pow(BigInt(10), 49)),
            bits);
        ComplexValue got = eval_R(RealArg(xf), RealArg(tf), params(n, bits)).value;
        std::complex<double> want = oracle::riemann_direct(x0, t, n);
        CHECK(std::abs(got - want) < 1e-11);
    }
}

TEST_CASE("rational kernel matches the direct sum and the periodic table") {
    const std::int64_t n = 2000;
    for (auto [xa, xb, ta, tb] : {std::array{1L, 3L, 2L, 7L}, {0L, 1L, 5L, 11L}, {3L, 10L, -1L, 9L}}) {
        ComplexValue got = eval_R(q(xa, xb), q(ta, tb), params(n)).value;
        std::complex<double> want = oracle::riemann_direct(oracle::Float50(xa) / xb, oracle::Float50(ta) / tb, n);
        CHECK(std::abs(got - want) < 1e-11);
        // Fixed-point input takes the limb kernel instead of exact residues.
        ComplexValue fixed =
            eval_R(RealArg(HighPrecisionReal::from_rational(BigRational(xa, xb))),
                   RealArg(HighPrecisionReal::from_rational(BigRational(ta, tb))), params(n))
                .value;
        CHECK(std::abs(fixed - want) < 1e-11);
    }
}

TEST_CASE("truncated sums converge to the untruncated rational value") {
    for (auto [xa, xb, ta, tb] : {std::array{1L, 3L, 1L, 4L}, {0L, 1L, 1L, 3L}, {1L, 5L, 2L, 5L}}) {
        ComplexValue exact = eval_R_exact(BigRational(xa, xb), BigRational(ta, tb));
        SeriesValue v = eval_R(q(xa, xb), q(ta, tb), params(200'000));
        CHECK(std::abs(v.value - exact) <= v.tail_bound);
    }
}

TEST_CASE("symmetries: periods in t and x0, conjugation under t -> -t") {
    SeriesParams p = params(20'000);
    ComplexValue a = eval_R(q(2, 7), q(3, 11), p).value;
    CHECK(std::abs(eval_R(q(9, 7), q(3, 11), p).value - a) < 1e-12);
    CHECK(std::abs(eval_R(q(2, 7), q(14, 11), p).value - a) < 1e-12);
    CHECK(std::abs(eval_R(q(2, 7), q(-3, 11), p).value - std::conj(a)) < 1e-12);
    // x0 -> -x0 leaves the sum over n and -n unchanged.
    CHECK(std::abs(eval_R(q(-2, 7), q(3, 11), p).value - a) < 1e-12);
}

TEST_CASE("trajectory starts at 0 and closes at 2 pi i") {
    SeriesParams p = params(400'000);
    for (auto [a, b] : {std::pair{0L, 1L}, {1L, 3L}, {5L, 8L}}) {
        SeriesValue s = eval_phi_traj(q(a, b), q(0, 1), p);
        CHECK(std::abs(s.value) <= s.tail_bound);
        SeriesValue e = eval_phi_traj(q(a, b), q(1, 1), p);
        CHECK(std::abs(e.value - ComplexValue(0.0, 2 * pi)) <= e.tail_bound);
    }
    auto grid = trajectory_grid(q(1, 3), 5, params(10'000));
    REQUIRE(grid.size() == 5);
    CHECK(grid[2].t == 0.5);
    CHECK_THROWS_AS(eval_phi_traj(q(3, 2), q(0, 1), p), domain_error);
}

TEST_CASE("parameter checks") {
    CHECK_THROWS_AS(eval_R(q(0, 1), q(0, 1), params(0)), domain_error);
    CHECK_THROWS_AS(eval_R(q(0, 1), q(0, 1), params(std::uint64_t{1} << 41)), budget_error);
    // 2 log2(n_max) + 64 fractional bits are needed for irrational phases.
    auto t = HighPrecisionReal::from_double(0.1, 64);
    CHECK_THROWS_AS(eval_R(q(0, 1), RealArg(t), params(1'000'000, 64)), precision_error);
    CHECK_THROWS_AS(eval_R_exact(BigRational(1, 1 << 20), BigRational(1, (1 << 20) - 1)), budget_error);
}
