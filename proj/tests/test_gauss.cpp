#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "rnd/errors.hpp"
#include "rnd/gauss.hpp"

using namespace rnd;

TEST_CASE("single sums match direct summation") {
    for (std::int64_t q = 1; q <= 40; ++q)
        for (std::int64_t p = -q; p <= q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            for (std::int64_t m = -2; m < q + 2; ++m) {
                auto want = oracle::gauss_direct(p, m, q);
                GaussSumResult g = gauss_sum(p, m, q);
                CHECK(std::abs(g.value - std::complex<double>(want)) < 1e-10 * std::sqrt(double(q)) + 1e-12);
            }
        }
}

TEST_CASE("batched sums agree with single sums") {
    for (std::int64_t q : {1, 2, 7, 12, 64, 97, 360}) {
        GaussBatch batch(q);
        for (std::int64_t p = 1; p < q; p += 5) {
            if (std::gcd(p, q) != 1) continue;
            const auto& all = batch.compute(p);
            REQUIRE(all.size() == static_cast<std::size_t>(q));
            for (std::int64_t m = 0; m < q; ++m)
                CHECK(std::abs(all[m] - gauss_sum(p, m, q).value) < 1e-9 * std::sqrt(double(q)));
        }
    }
}

TEST_CASE("classical values") {
    // |G(1, 0, q)| = sqrt q for odd q; G(1, 0, 4) = 2 + 2i; G(1, 0, 2) = 0.
    for (std::int64_t q : {3, 5, 9, 15, 101}) CHECK(std::abs(gauss_sum(1, 0, q).value) == doctest::Approx(std::sqrt(q)));
    CHECK(std::abs(gauss_sum(1, 0, 4).value - ComplexValue(2, 2)) < 1e-12);
    CHECK(gauss_sum(1, 0, 2).magnitude_class == MagnitudeClass::zero);
    CHECK(gauss_sum(1, 1, 2).magnitude_class == MagnitudeClass::sqrt_2q);
}

TEST_CASE("nonzero rule matches the computed class") {
    for (std::int64_t q = 1; q <= 120; ++q)
        for (std::int64_t p = 1; p <= q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            for (std::int64_t m = 0; m < q; ++m) {
                bool nz = std::abs(oracle::gauss_direct(p, m, q)) > 0.5;
                CHECK(gauss_nonzero(p, m, q) == nz);
            }
        }
    CHECK_THROWS_AS(gauss_nonzero(2, 0, 4), domain_error);
}

TEST_CASE("non-differentiability rule agrees with the brute-force oracle") {
    for (std::int64_t Q = 1; Q <= 12; ++Q)
        for (std::int64_t P = 0; P < Q; ++P) {
            if (std::gcd(P, Q) != 1) continue;
            RationalX0 x0{P, Q};
            for (std::int64_t q = 1; q <= 60; ++q)
                for (std::int64_t p = 1; p < q || (q == 1 && p == 1); ++p) {
                    if (std::gcd(p, q) != 1) continue;
                    CHECK(classify_nondifferentiable(x0, q) == nondiff_oracle(x0, p, q));
                }
        }
}

TEST_CASE("worked examples of the rule") {
    CHECK(classify_nondifferentiable({1, 4}, 8));
    CHECK_FALSE(classify_nondifferentiable({1, 4}, 4));
    CHECK(classify_nondifferentiable({1, 2}, 6));
    CHECK(nondiff_oracle({1, 3}, 1, 3));
    CHECK_FALSE(classify_nondifferentiable({1, 3}, 6));
    CHECK_FALSE(classify_nondifferentiable({1, 3}, 5));
    CHECK(nearest_m({1, 3}, 3) == 1);
    CHECK(nearest_m({1, 2}, 1) == 0);  // tie 0 / 1 goes to the smaller m
    CHECK_THROWS_AS(validate({2, 4}), domain_error);
    CHECK_THROWS_AS(validate({5, 4}), domain_error);
}

TEST_CASE("unit tables cover every coprime p with the right sums") {
    for (std::int64_t q = 1; q <= 90; ++q) {
        std::vector<int> seen(q, 0);
        for_each_unit_gauss_table(q, [&](std::int64_t p, const std::vector<ComplexValue>& sums) {
            REQUIRE(std::gcd(p, q) == 1);
            ++seen[p];
            for (std::int64_t m = 0; m < q; ++m)
                CHECK(std::abs(sums[m] - std::complex<double>(oracle::gauss_direct(p, m, q))) < 1e-9 * std::sqrt(double(q)));
        });
        for (std::int64_t p = 0; p < q; ++p) CHECK(seen[p] == (std::gcd(p, q) == 1 ? 1 : 0));
    }
}
