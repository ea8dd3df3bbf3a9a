#include "rnd/holder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rnd/errors.hpp"
#include "rnd/numeric.hpp"

namespace rnd {

namespace {

std::string describe(const RealArg& v) {
    if (auto q = std::get_if<BigRational>(&v)) return to_string(*q);
    return std::get<HighPrecisionReal>(v).to_decimal(20);
}

}  // namespace

EnvelopeFit envelope_regression(std::vector<double>& h, std::vector<double>& d, int window) {
    if (h.size() != d.size()) throw domain_error("envelope regression needs matching h and d");
    if (window < 1) throw domain_error("envelope window must be positive");
    std::vector<std::size_t> order(h.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::fabs(h[a]) < std::fabs(h[b]); });
    std::vector<double> hs, ds;
    for (std::size_t i : order) {
        hs.push_back(h[i]);
        ds.push_back(d[i]);
    }
    h = hs;
    d = ds;
    EnvelopeFit fit;
    const auto n = static_cast<std::ptrdiff_t>(h.size());
    const std::ptrdiff_t lo_off = (window - 1) / 2, hi_off = window / 2;
    std::vector<double> lx, ly;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double m = 0.0;
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - lo_off); j <= std::min(n - 1, i + hi_off); ++j)
            m = std::max(m, d[static_cast<std::size_t>(j)]);
        fit.envelope.push_back(m);
        if (!(m > 0.0) || !std::isfinite(m)) throw convergence_error("degenerate envelope: increment underflow");
        // Clipped windows at the ends would bias the slope; they are not fitted.
        if (i - lo_off < 0 || i + hi_off > n - 1) continue;
        lx.push_back(std::log(std::fabs(h[static_cast<std::size_t>(i)])));
        ly.push_back(std::log(m));
    }
    if (lx.size() < 3) throw domain_error("too few points for the envelope window");
    LinearFit lf = linear_fit(lx, ly);
    fit.slope = lf.slope;
    fit.slope_stderr = lf.slope_stderr;
    fit.r_squared = lf.r_squared;
    return fit;
}

HolderEstimate estimate_alpha(const RealArg& x0, const RealArg& t, const HolderOptions& options,
                              const std::string& t_descriptor) {
    if (!(options.h_max <= 1e-2)) throw domain_error("estimate_alpha requires h_max <= 1e-2");
    if (!(options.h_min > 0.0 && options.h_min < options.h_max)) throw domain_error("need 0 < h_min < h_max");
    if (options.samples_per_decade < 1) throw domain_error("samples_per_decade must be positive");
    const double n = static_cast<double>(options.params.n_max);
    // Increments at h see every frequency up to about 1/sqrt(h).
    if (n < 10.0 / std::sqrt(options.h_min))
        throw precision_error("n_max must be at least 10 / sqrt(h_min) for the requested h range");

    std::vector<double> hs;
    const double decades = std::log10(options.h_max / options.h_min);
    const int steps = static_cast<int>(std::floor(decades * options.samples_per_decade + 1e-9));
    for (int i = 0; i <= steps; ++i) {
        double m = options.h_max * std::pow(10.0, -static_cast<double>(i) / options.samples_per_decade);
        hs.push_back(m);
        hs.push_back(-m);
    }

    const int bits = options.params.precision_bits;
    const HighPrecisionReal tf = to_fixed(t, bits);
    ComplexValue base;
    const auto* tq = std::get_if<BigRational>(&t);
    const auto* xq = std::get_if<BigRational>(&x0);
    if (tq && xq && exact_available(*xq, *tq))
        base = eval_R_exact(*xq, *tq);
    else
        base = eval_R(x0, t, options.params).value;

    std::vector<double> ds(hs.size());
    parallel_for(hs.size(), [&](std::size_t i) {
        HighPrecisionReal moved = tf + HighPrecisionReal::from_double(hs[i], bits);
        ComplexValue inc = eval_R(x0, RealArg(moved), options.params).value - base;
        if (options.subtract_linear) inc += ComplexValue(0.0, 2.0 * std::numbers::pi * hs[i]);
        ds[i] = std::abs(inc);
    });

    std::vector<double> h_sorted = hs, d_sorted = ds;
    EnvelopeFit fit = envelope_regression(h_sorted, d_sorted, options.window);
    for (std::size_t i = 0; i < h_sorted.size(); ++i) {
        double noise = options.noise_constant * std::sqrt(std::fabs(h_sorted[i])) / n;
        if (noise > options.noise_fraction * fit.envelope[i])
            throw precision_error("series truncation noise exceeds " + std::to_string(options.noise_fraction) +
                                  " of the increment envelope at h = " + std::to_string(h_sorted[i]));
    }

    HolderEstimate out;
    out.t_descriptor = t_descriptor.empty() ? describe(t) : t_descriptor;
    out.alpha_hat = fit.slope;
    out.slope_stderr = fit.slope_stderr;
    out.r_squared = fit.r_squared;
    out.h_min = hs.back() < 0 ? -hs.back() : hs.back();
    out.h_max = options.h_max;
    out.drift_subtracted = options.subtract_linear;
    out.n_max = options.params.n_max;
    for (std::size_t i = 0; i < h_sorted.size(); ++i) out.rows.push_back({h_sorted[i], d_sorted[i], fit.envelope[i]});
    return out;
}

DenominatorPredicate witness_predicate(const RealArg& x0) {
    if (auto q = std::get_if<BigRational>(&x0)) {
        BigInt den = boost::multiprecision::denominator(*q);
        if (den > BigInt(1) << 40) throw domain_error("x0 denominator too large for a witness predicate");
        return DenominatorPredicate::multiples_of(4 * den.convert_to<std::uint64_t>());
    }
    return DenominatorPredicate::not_multiples_of_4();
}

Witness spectrum_witness(double mu, std::size_t index, const DenominatorPredicate& pred,
                         const SpectrumOptions& options) {
    WitnessOptions wo = options.witness;
    if (index > 0) wo.prefix.insert(wo.prefix.begin(), BigInt(index + 1));
    return construct_t_with_mu(mu, options.depth, pred, wo);
}

std::vector<SpectrumRow> spectrum_scan(const RealArg& x0, const std::vector<double>& mu_list,
                                       std::size_t witnesses_per_mu, const SpectrumOptions& options) {
    if (witnesses_per_mu < 1) throw domain_error("spectrum_scan needs at least one witness per mu");
    const DenominatorPredicate pred = witness_predicate(x0);
    std::vector<SpectrumRow> rows;
    for (double mu : mu_list) {
        for (std::size_t w = 0; w < witnesses_per_mu; ++w) {
            Witness wit = spectrum_witness(mu, w, pred, options);
            SpectrumRow row;
            row.mu_target = mu;
            row.witness = w;
            row.mu_hat = mu_estimate(wit.cf).value;
            std::string desc = "[0;";
            for (std::size_t i = 1; i < wit.cf.size() && i <= 6; ++i)
                desc += (i > 1 ? "," : "") + wit.cf.partial_quotients[i].str();
            desc += "]";
            if (wit.cf.size() > 7) desc += "+" + std::to_string(wit.cf.size() - 7) + " more";
            HolderEstimate est = estimate_alpha(x0, RealArg(wit.value), options.holder, desc);
            row.alpha_hat = est.alpha_hat;
            row.slope_stderr = est.slope_stderr;
            row.prediction = holder_lower_bound(mu);
            row.flagged = std::fabs(row.alpha_hat - row.prediction) > 0.1;
            row.t_descriptor = desc;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace rnd
