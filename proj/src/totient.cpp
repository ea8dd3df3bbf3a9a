#include "rnd/totient.hpp"

#include <cmath>
#include <numeric>

#include "rnd/errors.hpp"
#include "rnd/numeric.hpp"

namespace rnd {

SieveTable::SieveTable(std::uint64_t n, std::uint64_t cap) : n_(n) {
    if (n < 1) throw domain_error("sieve bound must be >= 1");
    if (n > cap) throw budget_error("sieve bound " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
    phi_.assign(n + 1, 0);
    mu_.assign(n + 1, 0);
    phi_[1] = 1;
    mu_[1] = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (phi_[i] == 0) {
            phi_[i] = static_cast<std::uint32_t>(i - 1);
            mu_[i] = -1;
            primes_.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes_) {
            std::uint64_t ip = i * p;
            if (ip > n) break;
            if (i % p == 0) {
                phi_[ip] = phi_[i] * p;
                mu_[ip] = 0;
                break;
            }
            phi_[ip] = phi_[i] * (p - 1);
            mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
        }
    }
}

SieveTable totient_sieve(std::uint64_t n, std::uint64_t cap) { return SieveTable(n, cap); }

std::uint64_t phi_single(std::uint64_t n) {
    if (n == 0) throw domain_error("phi(0) undefined");
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

void require_cover(const SieveTable& t, std::uint64_t n) {
    if (n > t.limit()) throw domain_error("sieve table does not cover N = " + std::to_string(n));
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        ps.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

}  // namespace

BigInt phi_sum(const SieveTable& table, std::uint64_t n) {
    require_cover(table, n);
    unsigned __int128 s = 0;
    for (std::uint64_t i = 1; i <= n; ++i) s += table.phi(i);
    BigInt hi = static_cast<std::uint64_t>(s >> 64), lo = static_cast<std::uint64_t>(s);
    return BigInt((hi << 64) + lo);
}

std::uint64_t phi_of_multiple(const SieveTable& table, std::uint64_t q, std::uint64_t n) {
    require_cover(table, n);
    std::uint64_t v = q * table.phi(n);
    for (std::uint64_t p : prime_factors(q))
        if (n % p) v = v / p * (p - 1);
    return v;
}

BigInt phi_sum_mod(const SieveTable& table, std::uint64_t q, std::uint64_t n) {
    if (q < 1) throw domain_error("Q must be >= 1");
    require_cover(table, n);
    const auto ps = prime_factors(q);
    unsigned __int128 s = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
        unsigned __int128 v = static_cast<unsigned __int128>(q) * table.phi(i);
        for (std::uint64_t p : ps)
            if (i % p) v = v / p * (p - 1);
        s += v;
    }
    BigInt hi = static_cast<std::uint64_t>(s >> 64), lo = static_cast<std::uint64_t>(s);
    return BigInt((hi << 64) + lo);
}

BigInt coprime_interval_sum(std::uint64_t q, std::uint64_t k) {
    if (q < 2 || k < 1) throw domain_error("coprime_interval_sum requires Q >= 2, k >= 1");
    BigInt s = 0;
    unsigned __int128 acc = 0;
    for (std::uint64_t n = 1; n < k * q; ++n)
        if (std::gcd(n, q) == 1) acc += n;
    BigInt hi = static_cast<std::uint64_t>(acc >> 64), lo = static_cast<std::uint64_t>(acc);
    s = (hi << 64) + lo;
    return s;
}

BigInt coprime_interval_closed_form(std::uint64_t q, std::uint64_t k) {
    BigInt v = BigInt(q) * phi_single(q) * k * k;
    // Q phi(Q) is even for Q >= 2.
    return BigInt(v / 2);
}

std::vector<double> weighted_totient_partial_sums(const SieveTable& table, std::uint64_t q, double alpha,
                                                  const std::vector<std::uint64_t>& cutoffs) {
    if (q < 1) throw domain_error("Q must be >= 1");
    if (cutoffs.empty()) return {};
    if (cutoffs.front() < 1) throw domain_error("cut-offs must be >= 1");
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] < cutoffs[i - 1]) throw domain_error("cut-offs must be ascending");
    require_cover(table, cutoffs.back());
    const auto ps = prime_factors(q);
    auto phi_qn = [&](std::uint64_t i) {
        std::uint64_t v = q * table.phi(i);
        for (std::uint64_t p : ps)
            if (i % p) v = v / p * (p - 1);
        return v;
    };

    std::vector<double> out;
    out.reserve(cutoffs.size());
    std::size_t next = 0;
    const std::uint64_t n_max = cutoffs.back();
    const bool integral = alpha == std::floor(alpha) && alpha >= 0 && alpha <= 3;
    using u128 = unsigned __int128;
    u128 fixed = 0;  // units of 2^-64
    Compensated floating;
    for (std::uint64_t i = 1; i <= n_max; ++i) {
        if (integral) {
            u128 den = 1;
            for (int e = 0; e < static_cast<int>(alpha); ++e) den *= i;
            fixed += (static_cast<u128>(phi_qn(i)) << 64) / den;
        } else {
            floating.add(static_cast<double>(phi_qn(i)) * std::pow(static_cast<double>(i), -alpha));
        }
        while (next < cutoffs.size() && cutoffs[next] == i) {
            out.push_back(integral ? std::ldexp(static_cast<double>(fixed), -64) : floating.value());
            ++next;
        }
    }
    return out;
}

double weighted_totient_sum(const SieveTable& table, std::uint64_t q, double alpha, std::uint64_t n) {
    return weighted_totient_partial_sums(table, q, alpha, {n}).front();
}

}  // namespace rnd
