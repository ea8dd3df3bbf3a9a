#pragma once

#include <cstdint>
#include <vector>

#include "rnd/numbers.hpp"

namespace rnd {

constexpr std::uint64_t kSieveCap = 100'000'000;

// phi(1..N) and mu(1..N) from a linear sieve.
class SieveTable {
public:
    SieveTable() = default;
    explicit SieveTable(std::uint64_t n, std::uint64_t cap = kSieveCap);

    std::uint64_t limit() const { return n_; }
    std::uint32_t phi(std::uint64_t n) const { return phi_[n]; }
    int mu(std::uint64_t n) const { return mu_[n]; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }

private:
    std::uint64_t n_ = 0;
    std::vector<std::uint32_t> phi_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint32_t> primes_;
};

SieveTable totient_sieve(std::uint64_t n, std::uint64_t cap = kSieveCap);

// phi(n) by trial division; for moduli outside a table.
std::uint64_t phi_single(std::uint64_t n);

// Phi(N) = sum_{n<=N} phi(n), exact.
BigInt phi_sum(const SieveTable& table, std::uint64_t n);

// Phi_Q(N) = sum_{n<=N} phi(Q n), exact. The table only needs to cover N.
BigInt phi_sum_mod(const SieveTable& table, std::uint64_t q, std::uint64_t n);

// phi(Q n) from phi(n): Q phi(n) prod_{p | Q, p !| n} (1 - 1/p).
std::uint64_t phi_of_multiple(const SieveTable& table, std::uint64_t q, std::uint64_t n);

// S_{Q,k} = sum of n < kQ with gcd(n, Q) = 1, by enumeration.
BigInt coprime_interval_sum(std::uint64_t q, std::uint64_t k);
// Q phi(Q) k^2 / 2.
BigInt coprime_interval_closed_form(std::uint64_t q, std::uint64_t k);

// sum_{n<=N} phi(Q n) / n^alpha. Integer alpha accumulates exact 2^-64
// fixed-point quotients; other alpha use compensated double summation.
double weighted_totient_sum(const SieveTable& table, std::uint64_t q, double alpha, std::uint64_t n);
// Same sum evaluated at each cut-off in ascending order, in one pass.
std::vector<double> weighted_totient_partial_sums(const SieveTable& table, std::uint64_t q, double alpha,
                                                  const std::vector<std::uint64_t>& cutoffs);

}  // namespace rnd
