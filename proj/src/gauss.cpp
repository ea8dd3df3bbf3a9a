#include "rnd/gauss.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

#include <fftw3.h>

#include "fftw_lock.hpp"
#include "rnd/errors.hpp"

namespace rnd {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t q) {
    std::int64_t r = a % q;
    return r < 0 ? r + q : r;
}

ComplexValue unit_root(std::int64_t residue, std::int64_t q) {
    double a = 2.0 * std::numbers::pi * static_cast<double>(residue) / static_cast<double>(q);
    return {std::cos(a), std::sin(a)};
}

}  // namespace

std::string to_string(MagnitudeClass c) {
    switch (c) {
        case MagnitudeClass::zero: return "zero";
        case MagnitudeClass::sqrt_q: return "sqrt_q";
        case MagnitudeClass::sqrt_2q: return "sqrt_2q";
    }
    return "?";
}

void validate(const RationalX0& x0) {
    if (x0.Q < 1 || x0.P < 0 || x0.P >= x0.Q || std::gcd(x0.P, x0.Q) != 1)
        throw domain_error("x0 = P/Q needs Q >= 1, 0 <= P < Q, gcd(P, Q) = 1");
}

MagnitudeClass classify_magnitude(ComplexValue v, std::int64_t q, bool coprime) {
    const double sq = std::sqrt(static_cast<double>(q));
    const double tol = 1e-9 * sq;
    const double a = std::abs(v);
    if (a <= tol) return MagnitudeClass::zero;
    if (std::fabs(a - sq) <= tol) return MagnitudeClass::sqrt_q;
    if (std::fabs(a - std::sqrt(2.0) * sq) <= tol) return MagnitudeClass::sqrt_2q;
    if (coprime)
        throw convergence_error("Gauss sum modulus " + std::to_string(a) + " matches no class for q = " +
                                std::to_string(q));
    // Non-coprime p: report the nearest class.
    double d0 = a, d1 = std::fabs(a - sq), d2 = std::fabs(a - std::sqrt(2.0) * sq);
    if (d0 <= d1 && d0 <= d2) return MagnitudeClass::zero;
    return d1 <= d2 ? MagnitudeClass::sqrt_q : MagnitudeClass::sqrt_2q;
}

GaussSumResult gauss_sum(std::int64_t p, std::int64_t m, std::int64_t q) {
    if (q < 1) throw domain_error("gauss_sum requires q >= 1");
    using u128 = unsigned __int128;
    const auto uq = static_cast<std::uint64_t>(q);
    const auto up = static_cast<std::uint64_t>(mod(p, q)), um = static_cast<std::uint64_t>(mod(m, q));
    CompensatedComplex acc;
    for (std::uint64_t r = 0; r < uq; ++r) {
        // r (p r + m) mod q
        std::uint64_t inner = static_cast<std::uint64_t>((static_cast<u128>(up) * r + um) % uq);
        auto res = static_cast<std::int64_t>(static_cast<u128>(inner) * r % uq);
        acc.add(unit_root(res, q));
    }
    GaussSumResult out;
    out.value = acc.value();
    out.magnitude_class = classify_magnitude(out.value, q, std::gcd(mod(p, q), q) == 1);
    return out;
}

struct GaussBatch::Impl {
    std::vector<ComplexValue> roots;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
};

GaussBatch::GaussBatch(std::int64_t q) : q_(q), impl_(std::make_unique<Impl>()) {
    if (q < 1) throw domain_error("GaussBatch requires q >= 1");
    impl_->roots.resize(static_cast<std::size_t>(q));
    for (std::int64_t j = 0; j < q; ++j) impl_->roots[static_cast<std::size_t>(j)] = unit_root(j, q);
    impl_->in = fftw_alloc_complex(static_cast<std::size_t>(q));
    impl_->out = fftw_alloc_complex(static_cast<std::size_t>(q));
    std::lock_guard lock(detail::fftw_planner_mutex());
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(q), impl_->in, impl_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
    out_.resize(static_cast<std::size_t>(q));
}

GaussBatch::~GaussBatch() {
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(impl_->plan);
    }
    fftw_free(impl_->in);
    fftw_free(impl_->out);
}

const std::vector<ComplexValue>& GaussBatch::compute(std::int64_t p) {
    const auto uq = static_cast<std::uint64_t>(q_);
    const auto up = static_cast<std::uint64_t>(mod(p, q_));
    // p r^2 mod q by differences: p (r + 1)^2 - p r^2 = p (2 r + 1); no division in the loop.
    const std::uint64_t two_p = static_cast<std::uint64_t>((static_cast<unsigned __int128>(up) * 2) % uq);
    std::uint64_t res = 0, step = up;
    for (std::uint64_t r = 0; r < uq; ++r) {
        impl_->in[r][0] = impl_->roots[res].real();
        impl_->in[r][1] = impl_->roots[res].imag();
        res = res >= uq - step ? res - (uq - step) : res + step;
        step = step >= uq - two_p ? step - (uq - two_p) : step + two_p;
    }
    fftw_execute(impl_->plan);
    for (std::uint64_t m = 0; m < uq; ++m) out_[m] = {impl_->out[m][0], impl_->out[m][1]};
    return out_;
}

void for_each_unit_gauss_table(std::int64_t q,
                               const std::function<void(std::int64_t, const std::vector<ComplexValue>&)>& f) {
    if (q < 1 || q > (std::int64_t{1} << 31)) throw domain_error("for_each_unit_gauss_table requires 1 <= q <= 2^31");
    const auto uq = static_cast<std::uint64_t>(q);
    GaussBatch batch(q);
    std::vector<char> done(uq, 0);
    std::vector<ComplexValue> sums(uq);
    for (std::uint64_t p0 = 0; p0 < uq; ++p0) {
        if (done[p0] || std::gcd(p0, uq) != 1) continue;
        const std::vector<ComplexValue> base = batch.compute(static_cast<std::int64_t>(p0));
        for (std::uint64_t u = 1; u <= uq; ++u) {
            if (std::gcd(u % uq, uq) != 1) continue;
            const std::uint64_t p = p0 * (u * u % uq) % uq;
            if (done[p]) continue;
            done[p] = 1;
            // u^{-1} mod q from the extended Euclidean algorithm.
            std::int64_t a = static_cast<std::int64_t>(u % uq), b = q, x0 = 1, x1 = 0;
            while (b != 0) {
                std::int64_t t = a / b;
                std::tie(a, b) = std::pair{b, a - t * b};
                std::tie(x0, x1) = std::pair{x1, x0 - t * x1};
            }
            const auto inv = static_cast<std::uint64_t>(mod(x0, q));
            std::uint64_t idx = 0;
            for (std::uint64_t m = 0; m < uq; ++m) {
                sums[m] = base[idx];
                idx = idx >= uq - inv ? idx - (uq - inv) : idx + inv;
            }
            f(static_cast<std::int64_t>(p), sums);
        }
    }
}

bool gauss_nonzero(std::int64_t p, std::int64_t m, std::int64_t q) {
    if (q < 1) throw domain_error("gauss_nonzero requires q >= 1");
    // Callers sweep m for fixed (p, q); the gcd is only recomputed when the pair changes.
    thread_local std::int64_t checked_p = 0, checked_q = 0;
    if (p != checked_p || q != checked_q) {
        if (std::gcd(mod(p, q), q) != 1) throw domain_error("gauss_nonzero requires gcd(p, q) = 1");
        checked_p = p;
        checked_q = q;
    }
    if (q % 2 == 1) return true;
    return mod(q / 2, 2) == mod(m, 2);
}

bool classify_nondifferentiable(const RationalX0& x0, std::int64_t q) {
    validate(x0);
    if (q < 1) throw domain_error("q must be positive");
    const std::int64_t Q = x0.Q;
    if (q % Q != 0) return false;
    const std::int64_t k = q / Q;
    if (Q % 2 == 1) {
        std::int64_t r = k % 4;
        return r == 0 || r == 1 || r == 3;
    }
    if (Q % 4 == 0) return k % 2 == 0;
    return true;  // Q = 2 mod 4
}

std::int64_t nearest_m(const RationalX0& x0, std::int64_t q) {
    validate(x0);
    // m = ceil(q P / Q - 1/2) = ceil((2 q P - Q) / (2 Q)); halves go down.
    __int128 num = 2 * static_cast<__int128>(q) * x0.P - x0.Q, den = 2 * static_cast<__int128>(x0.Q);
    __int128 f = num >= 0 ? (num + den - 1) / den : -((-num) / den);
    return static_cast<std::int64_t>(f);
}

bool nondiff_oracle(const RationalX0& x0, std::int64_t p, std::int64_t q) {
    validate(x0);
    if (q < 1 || std::gcd(mod(p, q), q) != 1) throw domain_error("nondiff_oracle requires gcd(p, q) = 1");
    std::int64_t m = nearest_m(x0, q);
    // x_q = P/Q - m/q vanishes iff q P = m Q.
    if (static_cast<__int128>(q) * x0.P != static_cast<__int128>(m) * x0.Q) return false;
    return gauss_sum(p, m, q).magnitude_class != MagnitudeClass::zero;
}

}  // namespace rnd
