#include "rnd/asymptotics.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <shared_mutex>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gsl/gsl_sf_expint.h>

#include "rnd/errors.hpp"

namespace rnd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCrossCheckLimit = 50.0;
constexpr double kRouteTolerance = 1e-6;

double sgn(KernelSign s) { return s == KernelSign::plus ? 1.0 : -1.0; }

// int_V^inf e^{i c v^2} / v^2 dv by repeated integration by parts; |c| V^2 >= 60.
ComplexValue fresnel_tail(double c, double V) {
    const ComplexValue z(0.0, 2.0 * c * V * V);
    ComplexValue term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= (2.0 * k + 1.0) / z;
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    ComplexValue lead = std::exp(ComplexValue(0.0, c * V * V)) / (ComplexValue(0.0, 2.0 * c) * V * V * V);
    return -lead * sum;
}

// J(c) = int_1^inf e^{i c v^2} / v^2 dv.
ComplexValue fresnel_J(double c) {
    if (c == 0.0) return 1.0;
    const double s = c > 0 ? 1.0 : -1.0, ac = std::fabs(c);
    const double root_half_pi = std::sqrt(kPi / 2.0);
    if (ac < 1e-7) {
        // Small-c expansion with K_s = int_0^inf (e^{i s w^2} - 1) / w^2 dw.
        ComplexValue K(-root_half_pi, s * root_half_pi);
        return 1.0 + std::sqrt(ac) * K - ComplexValue(0.0, s * ac);
    }
    constexpr double kPhaseSwitch = 60.0;
    if (ac >= kPhaseSwitch) return fresnel_tail(c, 1.0);
    // With w = sqrt|c| v: J = 1 - eps/W + eps int_eps^W (e^{i s w^2} - 1)/w^2 dw + tail.
    const double eps = std::sqrt(ac), W = std::sqrt(kPhaseSwitch);
    using boost::math::quadrature::gauss_kronrod;
    auto re = [](double w) {
        double sn = std::sin(0.5 * w * w);
        return -2.0 * sn * sn / (w * w);
    };
    auto im = [s](double w) { return s * std::sin(w * w) / (w * w); };
    double err = 0;
    double ire = gauss_kronrod<double, 31>::integrate(re, eps, W, 12, 1e-13, &err);
    double iim = gauss_kronrod<double, 31>::integrate(im, eps, W, 12, 1e-13, &err);
    return 1.0 - eps / W + eps * ComplexValue(ire, iim) + fresnel_tail(c, W / eps);
}

// (e^{i a x^2} - 1) / x^2 without cancellation.
ComplexValue chirp_quotient(double a, double x) {
    double u = a * x * x;
    if (std::fabs(u) < 1e-4) {
        double x2 = x * x;
        return {-0.5 * a * a * x2 + a * a * a * a * x2 * x2 * x2 / 24.0, a - a * a * a * x2 * x2 / 6.0};
    }
    double sn = std::sin(0.5 * u);
    return {-2.0 * sn * sn / (x * x), std::sin(u) / (x * x)};
}

// int_X^inf e^{i (a x^2 + c x)} / x^2 dx, two integration-by-parts terms.
ComplexValue chirp_tail(double a, double c, double X) {
    const ComplexValue I(0.0, 1.0);
    double dphi = 2.0 * a * X + c;
    double f = 1.0 / (X * X);
    ComplexValue t0 = f / (I * dphi);
    ComplexValue lf = (1.0 / I) * (-2.0 / (X * X * X * dphi) - 2.0 * a / (X * X * dphi * dphi));
    ComplexValue phase = std::exp(I * (a * X * X + c * X));
    return -phase * (t0 - lf / (I * dphi));
}

// int_X^inf cos(b x) / x^2 dx for b >= 0.
double cosine_tail(double b, double X) {
    if (b == 0.0) return 1.0 / X;
    return std::cos(b * X) / X - b * (kPi / 2.0 - gsl_sf_Si(b * X));
}

struct CacheKey {
    std::int64_t xi;
    int sign;
    auto operator<=>(const CacheKey&) const = default;
};

CacheKey make_key(double xi, KernelSign s) {
    std::int64_t k = std::fabs(xi) < 1e6 ? static_cast<std::int64_t>(std::llround(std::fabs(xi) * 1e12))
                                         : std::bit_cast<std::int64_t>(std::fabs(xi));
    return {k, s == KernelSign::plus ? 1 : -1};
}

std::shared_mutex g_cache_mutex;
std::map<CacheKey, ComplexValue> g_cache;

}  // namespace

KernelSign kernel_sign_for(double h) {
    if (h == 0.0) throw domain_error("kernel sign undefined at h = 0");
    return h > 0 ? KernelSign::plus : KernelSign::minus;
}

ComplexValue kernel_F_reduced(double xi, KernelSign s) {
    if (!std::isfinite(xi)) throw domain_error("kernel_F requires finite xi");
    const double sf = sgn(s);
    double c = -sf * kPi * xi * xi / 2.0;
    return 2.0 * kPi * ComplexValue(-1.0, sf) * fresnel_J(c);
}

ComplexValue kernel_F_direct(double xi, KernelSign s) {
    if (!std::isfinite(xi)) throw domain_error("kernel_F requires finite xi");
    const double a = sgn(s) * 2.0 * kPi, b = 2.0 * kPi * std::fabs(xi);
    const double X = 30.0 + std::fabs(xi);
    // Half a period of the fastest local oscillation per 16-point panel.
    const double width = 0.5 / (2.0 * X + std::fabs(xi) + 1.0);
    const auto panels = static_cast<std::size_t>(std::ceil(X / width));
    const double w = X / static_cast<double>(panels);
    using G = boost::math::quadrature::gauss<double, 16>;
    const auto& nodes = G::abscissa();
    const auto& weights = G::weights();
    CompensatedComplex acc;
    for (std::size_t k = 0; k < panels; ++k) {
        double mid = (static_cast<double>(k) + 0.5) * w, half = 0.5 * w;
        ComplexValue panel = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            for (double sg : {-1.0, 1.0}) {
                double x = mid + sg * half * nodes[j];
                panel += weights[j] * chirp_quotient(a, x) * std::cos(b * x);
            }
        }
        acc.add(half * panel);
    }
    ComplexValue head = acc.value();
    ComplexValue tail = chirp_tail(a, b, X) + chirp_tail(a, -b, X) - 2.0 * cosine_tail(b, X);
    return 2.0 * head + tail;
}

ComplexValue kernel_F_asymptotic(double xi, KernelSign s) {
    const double sf = sgn(s);
    return 2.0 * ComplexValue(1.0, sf) * std::exp(ComplexValue(0.0, -sf * kPi * xi * xi / 2.0)) / (xi * xi);
}

ComplexValue kernel_F(double xi, KernelSign s) {
    if (!std::isfinite(xi)) throw domain_error("kernel_F requires finite xi");
    const CacheKey key = make_key(xi, s);
    {
        std::shared_lock lock(g_cache_mutex);
        if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;
    }
    ComplexValue v = kernel_F_reduced(xi, s);
    if (std::fabs(xi) <= kCrossCheckLimit) {
        ComplexValue d = kernel_F_direct(xi, s);
        if (std::abs(v - d) > kRouteTolerance)
            throw convergence_error("kernel_F routes disagree by " + std::to_string(std::abs(v - d)) +
                                    " at xi = " + std::to_string(xi));
    }
    std::unique_lock lock(g_cache_mutex);
    g_cache.emplace(key, v);
    return v;
}

NearestLattice nearest_lattice(const RealArg& x0, std::int64_t q) {
    if (q < 1) throw domain_error("nearest_lattice requires q >= 1");
    BigRational x = std::holds_alternative<BigRational>(x0) ? std::get<BigRational>(x0)
                                                              : std::get<HighPrecisionReal>(x0).to_rational();
    // m = ceil(q x - 1/2), so exact halves go to the smaller m.
    BigRational shifted = BigRational(q) * x - BigRational(1, 2);
    BigInt m = -floor(BigRational(-shifted));
    NearestLattice out;
    out.m_q = m.convert_to<std::int64_t>();
    out.x_q_exact = x - BigRational(m, BigInt(q));
    out.x_q = to_double(out.x_q_exact);
    return out;
}

LocalExpansion local_expansion(const RealArg& x0, std::int64_t p, std::int64_t q, const RealArg& h) {
    if (q < 1) throw domain_error("local_expansion requires q >= 1");
    std::int64_t pm = ((p % q) + q) % q;
    if (std::gcd(pm, q) != 1) throw domain_error("local_expansion requires gcd(p, q) = 1");
    const double hd = to_double(h);
    if (hd == 0.0 || std::fabs(hd) > 0.5) throw domain_error("local_expansion requires 0 < |h| <= 1/2");
    LocalExpansion e;
    const double ah = std::fabs(hd), qd = static_cast<double>(q);
    e.linear_term = ComplexValue(0.0, -2.0 * kPi * hd);
    e.lattice = nearest_lattice(x0, q);
    e.gauss = gauss_sum(p, e.lattice.m_q, q);
    e.xi = e.lattice.x_q / std::sqrt(ah);
    if (e.gauss.magnitude_class != MagnitudeClass::zero)
        e.main_term = std::sqrt(ah) / qd * e.gauss.value * kernel_F(e.xi, kernel_sign_for(hd));
    e.residual_bound_scale = std::min(std::sqrt(qd) * ah, std::pow(qd * ah, 1.5));
    return e;
}

std::uint64_t residual_n_max(std::int64_t q, double h, const ResidualOptions& options) {
    const double qd = static_cast<double>(q), ah = std::fabs(h);
    const double scale = std::min(std::sqrt(qd) * ah, std::pow(qd * ah, 1.5));
    double n = options.noise_constant * std::sqrt(qd * ah) / (options.noise_fraction * scale);
    return static_cast<std::uint64_t>(std::ceil(n));
}

ResidualCheck residual_check(const RealArg& x0, std::int64_t p, std::int64_t q, const RealArg& h,
                             const SeriesParams& params, const ResidualOptions& options) {
    ResidualCheck out;
    out.expansion = local_expansion(x0, p, q, h);
    out.scale = out.expansion.residual_bound_scale;
    const double qd = static_cast<double>(q), ah = std::fabs(to_double(h));
    const double n = static_cast<double>(params.n_max);

    BigRational pq(p, q);
    const BigRational* xr = std::get_if<BigRational>(&x0);
    out.exact_base = xr && exact_available(*xr, pq);
    out.noise_estimate = options.noise_constant * std::sqrt(qd * ah) / n + (out.exact_base ? 0.0 : 4.0 / n);
    if (out.noise_estimate > options.noise_fraction * out.scale)
        throw precision_error("series truncation noise " + std::to_string(out.noise_estimate) +
                              " exceeds " + std::to_string(options.noise_fraction) +
                              " of the residual scale " + std::to_string(out.scale));

    ComplexValue base = out.exact_base ? eval_R_exact(*xr, pq) : eval_R(x0, RealArg(pq), params).value;
    HighPrecisionReal t = to_fixed(RealArg(pq), params.precision_bits) + to_fixed(h, params.precision_bits);
    ComplexValue moved = eval_R(x0, RealArg(t), params).value;
    ComplexValue r = moved - base - out.expansion.linear_term - out.expansion.main_term;
    out.residual = std::abs(r);
    out.ratio = out.residual / out.scale;
    return out;
}

}  // namespace rnd
