#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "rnd/errors.hpp"
#include "rnd/totient.hpp"

using namespace rnd;

TEST_CASE("sieve values match gcd counting") {
    SieveTable s = totient_sieve(3000);
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        CHECK(s.phi(n) == oracle::phi_naive(n));
        CHECK(phi_single(n) == s.phi(n));
    }
    CHECK(s.mu(1) == 1);
    CHECK(s.mu(6) == 1);
    CHECK(s.mu(12) == 0);
    CHECK(s.mu(30) == -1);
    CHECK(s.primes().size() == 430);
}

TEST_CASE("Mobius sums vanish past 1") {
    SieveTable s = totient_sieve(500);
    for (std::uint64_t n = 2; n <= 500; ++n) {
        int sum = 0;
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) sum += s.mu(d);
        CHECK(sum == 0);
    }
}

TEST_CASE("totient sums") {
    SieveTable s = totient_sieve(100000);
    CHECK(phi_sum(s, 10) == 32);
    CHECK(phi_sum(s, 1) == 1);
    BigInt acc = 0;
    for (std::uint64_t n = 1; n <= 1000; ++n) acc += oracle::phi_naive(6 * n);
    CHECK(phi_sum_mod(s, 6, 1000) == acc);
    for (std::uint64_t q : {1, 4, 12, 30, 97})
        for (std::uint64_t n = 1; n <= 200; ++n) CHECK(phi_of_multiple(s, q, n) == oracle::phi_naive(q * n));
    double ratio = phi_sum(s, 100000).convert_to<double>() / 1e10;
    CHECK(ratio == doctest::Approx(3 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-3));
}

TEST_CASE("coprime interval sums have the closed form") {
    for (std::uint64_t q = 2; q <= 60; ++q)
        for (std::uint64_t k = 1; k <= 6; ++k) CHECK(coprime_interval_sum(q, k) == coprime_interval_closed_form(q, k));
    CHECK(coprime_interval_closed_form(10, 3) == 10 * 4 * 9 / 2);
    CHECK_THROWS_AS(coprime_interval_sum(1, 3), domain_error);
}

TEST_CASE("weighted sums match direct long double summation") {
    const std::uint64_t n_max = 3000;
    SieveTable s = totient_sieve(n_max);
    std::vector<std::uint64_t> phis(n_max + 1);
    for (std::uint64_t n = 1; n <= n_max; ++n) phis[n] = oracle::phi_naive(12 * n);
    for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
        long double direct = 0;
        for (std::uint64_t n = 1; n <= n_max; ++n) direct += phis[n] / std::pow((long double)n, alpha);
        CHECK(weighted_totient_sum(s, 12, alpha, n_max) == doctest::Approx(double(direct)).epsilon(1e-12));
    }
    auto parts = weighted_totient_partial_sums(s, 5, 1.5, {10, 100, 1000});
    REQUIRE(parts.size() == 3);
    CHECK(parts[1] == doctest::Approx(weighted_totient_sum(s, 5, 1.5, 100)));
}

TEST_CASE("sieve cap") {
    CHECK_THROWS_AS(totient_sieve(1000, 100), budget_error);
    SieveTable s = totient_sieve(10);
    CHECK_THROWS_AS(phi_sum(s, 11), domain_error);
}

TEST_CASE("totient sum error term stays within c N log N") {
    SieveTable s = totient_sieve(1'000'000);
    std::vector<double> c;
    for (std::uint64_t n : {1000, 10000, 100000, 1000000}) {
        double dn = static_cast<double>(n);
        double err = phi_sum(s, n).convert_to<double>() - 3 / (std::numbers::pi * std::numbers::pi) * dn * dn;
        c.push_back(std::fabs(err) / (dn * std::log(dn)));
    }
    for (double v : c) CHECK(v < 1.0);
}

TEST_CASE("multiplicativity at primes outside Q") {
    SieveTable s = totient_sieve(10000);
    for (std::uint64_t q : {4, 12, 20, 36})
        for (std::uint32_t p : s.primes()) {
            if (p > 2000) break;
            if (q % p == 0) continue;
            CHECK(phi_single(q * p) == phi_single(q) * (p - 1));
        }
}
