#include "rnd/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "fftw_lock.hpp"
#include "rnd/errors.hpp"

namespace rnd {

namespace {

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

std::size_t next_pow2_above(double v) {
    std::size_t g = 1;
    while (static_cast<double>(g) <= v) g <<= 1;
    return g;
}

// 2 cos(2 pi n x0), exact residues for rational x0.
class CosineFactor {
public:
    explicit CosineFactor(const RealArg& x0) {
        if (auto q = std::get_if<BigRational>(&x0)) {
            BigInt den = boost::multiprecision::denominator(*q);
            if (den < (BigInt(1) << 62)) {
                rational_ = true;
                Q_ = den.convert_to<std::uint64_t>();
                BigInt num = boost::multiprecision::numerator(*q) % den;
                if (num < 0) num += den;
                P_ = num.convert_to<std::uint64_t>();
                return;
            }
        }
        HighPrecisionReal f = to_fixed(x0, 128).frac();
        frac_ = static_cast<long double>(f.to_double());
    }

    double operator()(std::uint64_t n) const {
        long double phase;
        if (rational_) {
            auto r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(n) * P_ % Q_);
            phase = static_cast<long double>(r) / static_cast<long double>(Q_);
        } else {
            long double v = frac_ * static_cast<long double>(n);
            phase = v - std::floor(v);
        }
        return static_cast<double>(2.0L * std::cos(2.0L * std::numbers::pi_v<long double> * phase));
    }

private:
    bool rational_ = false;
    std::uint64_t P_ = 0, Q_ = 1;
    long double frac_ = 0.0L;
};

// Evaluates the coefficient list on grid_size points by one inverse FFT.
void fill_samples(BandSamples& band, std::size_t grid_size, const FilterOptions& options) {
    if (grid_size > options.grid_cap)
        throw budget_error("filter grid " + std::to_string(grid_size) + " exceeds the cap " +
                           std::to_string(options.grid_cap));
    band.grid_size = grid_size;
    band.samples.assign(grid_size, ComplexValue(0.0, 0.0));
    for (const auto& [f, c] : band.coefficients) band.samples[(f - band.min_frequency) % grid_size] += c;
    auto* data = reinterpret_cast<fftw_complex*>(band.samples.data());
    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(grid_size), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

double mean_pow(const std::vector<ComplexValue>& s, double p) {
    Compensated acc;
    const bool square = p == 2.0;
    for (const ComplexValue& z : s) {
        double m2 = z.real() * z.real() + z.imag() * z.imag();
        acc.add(square ? m2 : std::pow(m2, 0.5 * p));
    }
    return acc.value() / static_cast<double>(s.size());
}

BandSamples without_samples(const BandSamples& band) {
    BandSamples out;
    out.k_first = band.k_first;
    out.k_last = band.k_last;
    out.N = band.N;
    out.weight = band.weight;
    out.coefficients = band.coefficients;
    out.min_frequency = band.min_frequency;
    out.max_frequency = band.max_frequency;
    return out;
}

bool is_even_integer(double p) { return p == std::round(p) && std::fmod(p, 2.0) == 0.0; }

}  // namespace

double base_cutoff(double x) {
    double a = std::fabs(x);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    return smooth_step(2.0 - 2.0 * a);
}

double dyadic_cutoff(double x) { return base_cutoff(0.5 * x) - base_cutoff(x); }

double partition_weights(int k, double x) {
    if (k < -1) throw domain_error("partition index must be >= -1");
    double a = std::fabs(x);
    double norm = base_cutoff(a);
    for (int i = 0; std::ldexp(1.0, i - 1) < a; ++i) norm += dyadic_cutoff(std::ldexp(a, -i));
    double num = k == -1 ? base_cutoff(a) : dyadic_cutoff(std::ldexp(a, -k));
    return num / norm;
}

BandSamples synthesize_blocks(const RealArg& x0, int k_first, int k_last, BandWeight weight, std::size_t grid_size,
                              const FilterOptions& options) {
    if (k_first < 1 || k_last < k_first) throw domain_error("blocks require 1 <= k_first <= k_last");
    if (k_last > 28) throw budget_error("block index too large");
    BandSamples band;
    band.k_first = k_first;
    band.k_last = k_last;
    band.N = std::ldexp(1.0, k_first);
    band.weight = weight;
    const CosineFactor cosine(x0);
    const std::uint64_t n_lo = (std::uint64_t{1} << (k_first - 1)) + 1;
    const std::uint64_t n_hi = (std::uint64_t{1} << (k_last + 1)) - 1;
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
        double dn = static_cast<double>(n), w = 0.0;
        for (int k = k_first; k <= k_last; ++k) w += partition_weights(k, dn);
        if (w == 0.0) continue;
        if (weight == BandWeight::inverse_square) w /= dn * dn;
        if (weight == BandWeight::rescaled) w *= (band.N / dn) * (band.N / dn);
        band.coefficients.emplace_back(n * n, ComplexValue(w * cosine(n), 0.0));
    }
    if (band.coefficients.empty()) throw domain_error("empty band");
    band.min_frequency = band.coefficients.front().first;
    band.max_frequency = band.coefficients.back().first;
    if (grid_size == 0) grid_size = next_pow2_above(2.0 * std::ldexp(1.0, 2 * (k_last + 1)));
    fill_samples(band, grid_size, options);
    return band;
}

BandSamples synthesize_band(const RealArg& x0, int k, bool weighted, const FilterOptions& options) {
    return synthesize_blocks(x0, k, k, weighted ? BandWeight::inverse_square : BandWeight::unit, 0, options);
}

BandSamples synthesize_highpass(const RealArg& x0, int k, const FilterOptions& options) {
    if (k < 1) throw domain_error("high-pass filter requires k >= 1");
    // Samples are demodulated, so twice the frequency span suffices.
    const double lo = std::ldexp(1.0, k - 1) + 1.0, hi = std::ldexp(1.0, k + 2) - 1.0;
    return synthesize_blocks(x0, k, k + 1, BandWeight::inverse_square, next_pow2_above(2.0 * (hi * hi - lo * lo)),
                             options);
}

double highpass_tail_bound(const BandSamples& band) {
    // Discarded terms have |n| > 2^k_last: sum 2 / n^2 <= 2 / 2^k_last.
    return 2.0 / std::ldexp(1.0, band.k_last);
}

double coefficient_l2(const BandSamples& band) {
    Compensated acc;
    for (const auto& c : band.coefficients) acc.add(std::norm(c.second));
    return acc.value();
}

double lp_norm(const BandSamples& band, double p, const FilterOptions& options) {
    if (!(p > 1.0)) throw domain_error("lp_norm requires p > 1");
    const double span = static_cast<double>(band.max_frequency - band.min_frequency);
    if (is_even_integer(p)) {
        // |f|^p has frequencies within (p/2) span of zero, so the Riemann sum
        // is exact once the grid exceeds that.
        if (static_cast<double>(band.grid_size) > 0.5 * p * span) return mean_pow(band.samples, p);
        BandSamples fine = without_samples(band);
        fill_samples(fine, next_pow2_above(0.5 * p * span), options);
        return mean_pow(fine.samples, p);
    }
    double prev = mean_pow(band.samples, p);
    BandSamples fine = without_samples(band);
    for (std::size_t g = band.grid_size * 2; g <= options.grid_cap; g *= 2) {
        fill_samples(fine, g, options);
        double cur = mean_pow(fine.samples, p);
        if (std::fabs(cur - prev) <= options.refine_tolerance * std::fabs(cur)) return cur;
        prev = cur;
    }
    throw convergence_error("lp_norm did not settle before the grid cap at p = " + std::to_string(p));
}

EtaEstimate eta_estimate(const RealArg& x0, double p, int k_min, int k_max, bool weighted,
                         const FilterOptions& options) {
    if (k_max - k_min < 3) throw domain_error("eta_estimate requires k_max - k_min >= 3");
    if (k_min < 1) throw domain_error("eta_estimate requires k_min >= 1");
    EtaEstimate out;
    out.rows.resize(static_cast<std::size_t>(k_max - k_min + 1));
    parallel_for(out.rows.size(), [&](std::size_t i) {
        int k = k_min + static_cast<int>(i);
        BandSamples b = weighted ? synthesize_highpass(x0, k, options) : synthesize_band(x0, k, false, options);
        out.rows[i] = {k, weighted ? std::ldexp(1.0, 2 * k) : std::ldexp(1.0, k), lp_norm(b, p, options)};
    });
    std::vector<double> lx, ly;
    for (const ScaleRow& r : out.rows) {
        if (!(r.norm_pow_p > 0.0) || !std::isfinite(r.norm_pow_p))
            throw convergence_error("degenerate norm at k = " + std::to_string(r.k));
        lx.push_back(std::log(r.N));
        ly.push_back(std::log(r.norm_pow_p));
    }
    LinearFit fit = linear_fit(lx, ly);
    out.slope = fit.slope;
    out.r_squared = fit.r_squared;
    return out;
}

TwoTermFit fit_p4(const std::vector<ScaleRow>& rows) {
    std::vector<double> f, g, y;
    for (const ScaleRow& r : rows) {
        f.push_back(r.N * r.N * std::log(r.N));
        g.push_back(r.N * r.N);
        y.push_back(r.norm_pow_p);
    }
    return two_term_fit(f, g, y);
}

double flatness(const RealArg& x0, double p, int k, const FilterOptions& options) {
    if (p < 2.0) throw domain_error("flatness requires p >= 2");
    BandSamples b = synthesize_highpass(x0, k, options);
    double l2 = lp_norm(b, 2.0, options);
    if (p == 2.0) return 1.0;
    return lp_norm(b, p, options) / std::pow(l2, 0.5 * p);
}

double exact_rational_eta(double p) { return p > 4.0 ? 0.5 * p + 1.0 : 0.75 * p; }

double multifractal_inf(const std::vector<std::pair<double, double>>& eta, double alpha) {
    if (eta.empty()) throw domain_error("empty eta table");
    double p_max = 0.0;
    for (const auto& [p, e] : eta) {
        if (!(p > 0.0)) throw domain_error("eta table must lie in p > 0");
        p_max = std::max(p_max, p);
    }
    if (p_max < 8.0) throw domain_error("eta table must reach p >= 8");
    double best = INFINITY;
    for (const auto& [p, e] : eta) best = std::min(best, alpha * p - e + 1.0);
    return best;
}

}  // namespace rnd
