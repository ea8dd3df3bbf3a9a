#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rnd/numeric.hpp"

namespace rnd {

enum class MagnitudeClass { zero, sqrt_q, sqrt_2q };

std::string to_string(MagnitudeClass c);

struct GaussSumResult {
    ComplexValue value;
    MagnitudeClass magnitude_class = MagnitudeClass::zero;
};

struct RationalX0 {
    std::int64_t P = 0;
    std::int64_t Q = 1;
};

// Throws domain_error unless Q >= 1, 0 <= P < Q and gcd(P, Q) = 1.
void validate(const RationalX0& x0);

// Nearest class among {0, sqrt(q), sqrt(2q)} within 1e-9 sqrt(q). When
// gcd(p, q) = 1 a value matching none of them throws convergence_error.
MagnitudeClass classify_magnitude(ComplexValue v, std::int64_t q, bool coprime);

// G(p, m, q) = sum_{r<q} e^{2 pi i (p r^2 + m r) / q}, phases as exact residues.
GaussSumResult gauss_sum(std::int64_t p, std::int64_t m, std::int64_t q);

// G(p, m, q) for every m in [0, q) with one length-q DFT of e^{2 pi i p r^2 / q}.
// Reusable per q; not shareable between threads.
class GaussBatch {
public:
    explicit GaussBatch(std::int64_t q);
    ~GaussBatch();
    GaussBatch(const GaussBatch&) = delete;
    GaussBatch& operator=(const GaussBatch&) = delete;

    std::int64_t q() const { return q_; }
    // Returns the sums indexed by m.
    const std::vector<ComplexValue>& compute(std::int64_t p);

private:
    struct Impl;
    std::int64_t q_;
    std::unique_ptr<Impl> impl_;
    std::vector<ComplexValue> out_;
};

// Calls f(p, sums) for every p in [0, q) with gcd(p, q) = 1, where sums[m] =
// G(p, m, q). One DFT per class of p modulo squares of units; the others are
// reindexed exactly through G(p u^2, m, q) = G(p, m u^{-1}, q). q <= 2^31.
void for_each_unit_gauss_table(std::int64_t q,
                               const std::function<void(std::int64_t, const std::vector<ComplexValue>&)>& f);

// q odd, or q even with q/2 = m (mod 2). Requires gcd(p, q) = 1.
bool gauss_nonzero(std::int64_t p, std::int64_t m, std::int64_t q);

// Closed-form rule for non-differentiability of R_{P/Q} at p/q.
bool classify_nondifferentiable(const RationalX0& x0, std::int64_t q);

// m_q minimising |P/Q - m/q| (ties to the smaller m), computed exactly.
std::int64_t nearest_m(const RationalX0& x0, std::int64_t q);

// Brute force: x_q = 0 and G(p, m_q, q) != 0 by direct summation.
bool nondiff_oracle(const RationalX0& x0, std::int64_t p, std::int64_t q);

}  // namespace rnd
