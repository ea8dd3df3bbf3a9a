#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "rnd/errors.hpp"
#include "rnd/filters.hpp"

using namespace rnd;

namespace {

// Mean of |f|^4 from the coefficients: sum over s of |sum_{a + b = s} c_a c_b|^2.
double l4_from_coefficients(const BandSamples& b) {
    std::map<std::uint64_t, ComplexValue> pairs;
    for (const auto& [fa, ca] : b.coefficients)
        for (const auto& [fb, cb] : b.coefficients) pairs[fa + fb] += ca * cb;
    double s = 0.0;
    for (const auto& [f, v] : pairs) s += std::norm(v);
    return s;
}

}  // namespace

TEST_CASE("cutoff shape") {
    CHECK(base_cutoff(0.0) == 1.0);
    CHECK(base_cutoff(0.5) == 1.0);
    CHECK(base_cutoff(-0.5) == 1.0);
    CHECK(base_cutoff(1.0) == 0.0);
    CHECK(base_cutoff(0.75) == doctest::Approx(0.5));
    CHECK(base_cutoff(0.6) == doctest::Approx(base_cutoff(-0.6)));
    CHECK(dyadic_cutoff(0.4) == 0.0);
    CHECK(dyadic_cutoff(2.1) == 0.0);
    CHECK(dyadic_cutoff(1.0) == 1.0);
    for (double x = 0.5; x < 1.0; x += 0.01) CHECK(base_cutoff(x) >= base_cutoff(x + 0.01));
}

TEST_CASE("partition of unity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    for (int i = 0; i < 2000; ++i) {
        double x = std::ldexp(u(rng), static_cast<int>(rng() % 20));
        double s = 0.0;
        for (int k = -1; k <= 40; ++k) s += partition_weights(k, x);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Block k only sees 2^{k-1} < |x| < 2^{k+1}.
    CHECK(partition_weights(3, 3.9) == 0.0);
    CHECK(partition_weights(3, 16.0) == 0.0);
    CHECK(partition_weights(3, 8.0) == doctest::Approx(1.0));
}

TEST_CASE("band coefficients live on squares inside the block") {
    BandSamples b = synthesize_band(BigRational(1, 3), 5, false);
    REQUIRE_FALSE(b.coefficients.empty());
    for (const auto& [f, c] : b.coefficients) {
        auto n = static_cast<std::uint64_t>(std::llround(std::sqrt(double(f))));
        CHECK(n * n == f);
        CHECK(n > 16);
        CHECK(n < 64);
    }
    CHECK(b.grid_size > 2 * 64 * 64);
}

TEST_CASE("Plancherel for the sampled band") {
    for (int k : {3, 6}) {
        for (bool weighted : {false, true}) {
            BandSamples b = synthesize_band(BigRational(2, 7), k, weighted);
            CHECK(lp_norm(b, 2.0) == doctest::Approx(coefficient_l2(b)).epsilon(1e-10));
        }
        BandSamples h = synthesize_highpass(BigRational(1, 3), k);
        CHECK(lp_norm(h, 2.0) == doctest::Approx(coefficient_l2(h)).epsilon(1e-10));
    }
}

TEST_CASE("fourth moment matches the additive-energy sum") {
    for (auto x0 : {BigRational(0), BigRational(1, 3), BigRational(3, 10)}) {
        BandSamples b = synthesize_band(x0, 4, false);
        CHECK(lp_norm(b, 4.0) == doctest::Approx(l4_from_coefficients(b)).epsilon(1e-9));
    }
}

TEST_CASE("odd exponents converge under grid refinement") {
    BandSamples b = synthesize_band(BigRational(1, 3), 5, false);
    double a = lp_norm(b, 3.0);
    FilterOptions tight;
    tight.refine_tolerance = 1e-7;
    CHECK(a == doctest::Approx(lp_norm(b, 3.0, tight)).epsilon(2e-4));
    FilterOptions tiny;
    tiny.grid_cap = 1024;
    CHECK_THROWS_AS(synthesize_band(BigRational(1, 3), 6, false, tiny), budget_error);
}

TEST_CASE("high-pass filter and its tail bound") {
    BandSamples h = synthesize_highpass(BigRational(1, 3), 4);
    CHECK(h.k_first == 4);
    CHECK(h.k_last == 5);
    CHECK(h.min_frequency >= 8 * 8);
    CHECK(highpass_tail_bound(h) == doctest::Approx(2.0 / 32.0));
}

TEST_CASE("exact eta and the multifractal infimum") {
    CHECK(exact_rational_eta(2.0) == doctest::Approx(1.5));
    CHECK(exact_rational_eta(4.0) == doctest::Approx(3.0));
    CHECK(exact_rational_eta(6.0) == doctest::Approx(4.0));
    std::vector<std::pair<double, double>> table;
    for (double p = 0.01; p <= 12.0; p += 0.01) table.push_back({p, exact_rational_eta(p)});
    for (double a = 0.5; a <= 0.751; a += 0.05) CHECK(multifractal_inf(table, a) == doctest::Approx(4 * a - 2).epsilon(1e-3));
    std::vector<std::pair<double, double>> shortp{{1.0, 0.75}, {2.0, 1.5}};
    CHECK_THROWS_AS(multifractal_inf(shortp, 0.6), domain_error);
}

TEST_CASE("eta estimates need four blocks") {
    CHECK_THROWS_AS(eta_estimate(BigRational(1, 3), 6.0, 3, 5, false), domain_error);
    EtaEstimate e = eta_estimate(BigRational(1, 3), 2.0, 3, 6, false);
    CHECK(e.rows.size() == 4);
    CHECK(e.slope == doctest::Approx(1.0).epsilon(0.05));
}
