#include "rnd/diophantine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <gmp.h>

#include "rnd/numeric.hpp"
#include "rnd/totient.hpp"

namespace rnd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_abs_rational(const BigRational& v) {
    return log_abs(boost::multiprecision::numerator(v)) - log_abs(boost::multiprecision::denominator(v));
}

double log2_of(const BigInt& v) { return log_abs(v) / std::log(2.0); }

// Appends a quotient and extends the convergent recurrence.
void push_quotient(CFExpansion& cf, const BigInt& a) {
    const std::size_t n = cf.size();
    BigInt p_prev2 = n >= 2 ? cf.p[n - 2] : BigInt(n == 1 ? 1 : 0);
    BigInt q_prev2 = n >= 2 ? cf.q[n - 2] : BigInt(n == 1 ? 0 : 1);
    BigInt p_prev = n >= 1 ? cf.p[n - 1] : BigInt(1);
    BigInt q_prev = n >= 1 ? cf.q[n - 1] : BigInt(0);
    cf.partial_quotients.push_back(a);
    cf.p.push_back(a * p_prev + p_prev2);
    cf.q.push_back(a * q_prev + q_prev2);
}

void fill_mu(CFExpansion& cf, const BigRational& x) {
    cf.mu_exponents.assign(cf.size(), kNaN);
    for (std::size_t n = 0; n < cf.size(); ++n) {
        if (cf.q[n] < 2) continue;
        BigRational err = x - cf.convergent(n);
        if (err == 0) continue;
        cf.mu_exponents[n] = -log_abs_rational(err) / log_abs(cf.q[n]);
    }
}

ExponentEstimate tail_max(const CFExpansion& cf, bool skip_multiples_of_4) {
    if (cf.terminated) throw not_applicable_error("exponent of a rational number is not defined");
    if (cf.size() < 5) throw domain_error("exponent estimate needs at least 5 convergents");
    ExponentEstimate out;
    out.depth = cf.size();
    bool any = false;
    double best = -INFINITY;
    for (std::size_t n = cf.size() / 2; n < cf.size(); ++n) {
        double m = cf.mu_exponents[n];
        if (std::isnan(m)) continue;
        if (skip_multiples_of_4 && cf.q[n] % 4 == 0) continue;
        best = std::max(best, m);
        any = true;
    }
    if (!any) throw domain_error("no admissible convergent in the last half of the expansion");
    out.value = best;
    return out;
}

// ceil(q^e / c) for e >= 0 without overflowing a double; exact for integer e
// when 1 / c is an integer.
BigInt scaled_power(const BigInt& q, double e, double c) {
    const double inv = 1.0 / c;
    if (e == std::round(e) && e <= 64 && inv == std::round(inv)) {
        BigInt r = static_cast<std::int64_t>(inv);
        for (int i = 0; i < static_cast<int>(e); ++i) r *= q;
        return r;
    }
    double v = e * log2_of(q) + std::log2(inv);
    if (v < 52) return BigInt(static_cast<std::int64_t>(std::ceil(std::exp2(v))));
    double ip = std::floor(v);
    auto mant = static_cast<std::int64_t>(std::ceil(std::exp2(v - ip + 52)));
    BigInt r(mant);
    r <<= static_cast<unsigned>(ip - 52);
    return r;
}

bool miller_rabin_prime(const BigInt& q) {
    if (q < 2) return false;
    return mpz_probab_prime_p(q.backend().data(), 30) > 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

CFExpansion cf_expand(const RealArg& x, std::size_t depth) {
    if (depth < 1) throw domain_error("cf_expand requires depth >= 1");
    CFExpansion cf;
    if (auto r = std::get_if<BigRational>(&x)) {
        BigRational v = *r;
        while (cf.size() < depth) {
            BigInt a = floor(v);
            push_quotient(cf, a);
            BigRational f = v - BigRational(a);
            if (f == 0) {
                cf.terminated = true;
                break;
            }
            v = 1 / f;
        }
        fill_mu(cf, *r);
        return cf;
    }
    const HighPrecisionReal& h = std::get<HighPrecisionReal>(x);
    const BigRational center = h.to_rational();
    const BigRational ulp = BigRational(BigInt(1), BigInt(BigInt(1) << h.bits()));
    BigRational lo = center - ulp, hi = center + ulp;
    while (cf.size() < depth) {
        BigInt a_lo = floor(lo), a_hi = floor(hi);
        if (a_lo != a_hi) break;
        BigRational flo = lo - BigRational(a_lo), fhi = hi - BigRational(a_hi);
        push_quotient(cf, a_lo);
        if (flo == 0 || fhi == 0) break;
        BigRational next_lo = 1 / fhi, next_hi = 1 / flo;
        lo = next_lo;
        hi = next_hi;
    }
    fill_mu(cf, center);
    if (cf.size() < depth)
        throw cf_precision_error("precision certifies only " + std::to_string(cf.size()) + " partial quotients",
                                 cf);
    return cf;
}

CFExpansion cf_from_quotients(const std::vector<BigInt>& quotients) {
    if (quotients.empty()) throw domain_error("empty quotient list");
    CFExpansion cf;
    for (std::size_t i = 0; i < quotients.size(); ++i) {
        if (i > 0 && quotients[i] < 1) throw domain_error("partial quotients after a0 must be positive");
        push_quotient(cf, quotients[i]);
    }
    fill_mu(cf, cf.convergent(cf.size() - 1));
    return cf;
}

ExponentEstimate mu_estimate(const CFExpansion& cf) { return tail_max(cf, false); }

ExponentEstimate sigma_restricted(const CFExpansion& cf) { return tail_max(cf, true); }

bool DenominatorPredicate::operator()(const BigInt& q) const {
    switch (kind) {
        case Kind::all: return true;
        case Kind::multiples_of: return q % modulus == 0;
        case Kind::not_multiples_of_4: return q % 4 != 0;
        case Kind::primes: return miller_rabin_prime(q);
    }
    return false;
}

DenominatorPredicate parse_predicate(std::string_view text) {
    std::string_view s = trim(text);
    if (s == "all") return DenominatorPredicate::all();
    if (s == "primes") return DenominatorPredicate::primes();
    if (s == "not4" || s == "not_multiples_of_4") return DenominatorPredicate::not_multiples_of_4();
    for (std::string_view prefix : {"multiples_of:", "mult:"}) {
        if (s.substr(0, prefix.size()) == prefix) {
            BigRational m = parse_rational(s.substr(prefix.size()));
            if (boost::multiprecision::denominator(m) != 1 || m < 1 || m > BigRational(BigInt(1) << 62))
                throw parse_error("modulus must be a positive integer: '" + std::string(text) + "'");
            return DenominatorPredicate::multiples_of(boost::multiprecision::numerator(m).convert_to<std::uint64_t>());
        }
    }
    throw parse_error("unknown denominator predicate: '" + std::string(text) + "'");
}

std::string to_string(const DenominatorPredicate& pred) {
    switch (pred.kind) {
        case DenominatorPredicate::Kind::all: return "all";
        case DenominatorPredicate::Kind::multiples_of: return "multiples_of:" + std::to_string(pred.modulus);
        case DenominatorPredicate::Kind::not_multiples_of_4: return "not4";
        case DenominatorPredicate::Kind::primes: return "primes";
    }
    return "";
}

Witness construct_t_with_mu(double mu, std::size_t depth, const DenominatorPredicate& pred,
                            const WitnessOptions& options) {
    if (!(mu >= 2.0) || !std::isfinite(mu)) throw domain_error("construct_t_with_mu requires finite mu >= 2");
    if (depth < 2) throw domain_error("construct_t_with_mu requires depth >= 2");
    if (!(options.c > 0.0 && options.c <= 1.0)) throw domain_error("witness constant must lie in (0, 1]");
    const double q_log2_limit = 0.5 * options.precision_bits - 1.0;
    CFExpansion cf;
    push_quotient(cf, 0);
    for (const BigInt& a : options.prefix) {
        if (a < 1) throw domain_error("prefix quotients must be positive");
        push_quotient(cf, a);
    }
    while (cf.size() < depth) {
        const BigInt& qn = cf.q.back();
        const BigInt q_prev = cf.size() >= 2 ? cf.q[cf.size() - 2] : BigInt(0);
        BigInt a;
        if (pred(qn)) {
            a = std::max(BigInt(1), scaled_power(qn, mu - 2.0, options.c));
        } else {
            // One level: smallest a with pred(a q_n + q_{n-1}).
            for (std::uint64_t c = 1; c <= options.steer_budget && a == 0; ++c)
                if (pred(BigInt(c * qn + q_prev))) a = c;
            // Two levels: smallest a after which some b reaches the predicate.
            for (std::uint64_t c = 1; c <= options.steer_budget && a == 0; ++c) {
                BigInt q1 = c * qn + q_prev;
                for (std::uint64_t b = 1; b <= options.steer_budget; ++b)
                    if (pred(BigInt(b * q1 + qn))) {
                        a = c;
                        break;
                    }
            }
            if (a == 0)
                throw convergence_error("steering failed: no quotient up to " +
                                        std::to_string(options.steer_budget) + " reaches the predicate");
        }
        if (log2_of(BigInt(a * qn + q_prev)) > q_log2_limit) break;
        push_quotient(cf, a);
    }
    if (cf.size() < 2) throw precision_error("precision too small for a single witness level");
    Witness w;
    w.cf = cf_from_quotients(cf.partial_quotients);
    w.exact = w.cf.convergent(w.cf.size() - 1);
    w.value = HighPrecisionReal::from_rational(w.exact, options.precision_bits);
    return w;
}

std::vector<ApproxHit> restricted_approximations(const RealArg& t, double mu, double c,
                                                 const DenominatorPredicate& pred, std::uint64_t q_max) {
    if (q_max < 2) throw domain_error("restricted_approximations requires q_max >= 2");
    if (!(c > 0.0 && c < 1.0)) throw domain_error("restricted_approximations requires 0 < c < 1");
    if (!(mu >= 1.0)) throw domain_error("restricted_approximations requires mu >= 1");
    BigInt num, den;
    if (auto r = std::get_if<BigRational>(&t)) {
        num = boost::multiprecision::numerator(*r);
        den = boost::multiprecision::denominator(*r);
    } else {
        const HighPrecisionReal& h = std::get<HighPrecisionReal>(t);
        if (h.bits() < 2.0 * mu * std::log2(static_cast<double>(q_max)))
            throw precision_error("t needs at least 2 mu log2(q_max) fractional bits");
        num = h.raw();
        den = BigInt(1) << h.bits();
    }
    const double log_den = log_abs(den), log_c = std::log(c);
    constexpr std::uint64_t kChunk = 1 << 16;
    const std::uint64_t chunks = (q_max - 2) / kChunk + 1;
    std::vector<std::vector<ApproxHit>> parts(chunks);
    parallel_for(chunks, [&](std::size_t ci) {
        const std::uint64_t q0 = 2 + ci * kChunk, q1 = std::min(q_max, q0 + kChunk - 1);
        BigInt nq, p, diff, twice_den = den * 2, g;
        for (std::uint64_t q = q0; q <= q1; ++q) {
            if (!pred(q)) continue;
            mpz_mul_ui(nq.backend().data(), num.backend().data(), q);
            // p = floor((2 N q + D) / (2 D))
            mpz_mul_2exp(p.backend().data(), nq.backend().data(), 1);
            mpz_add(p.backend().data(), p.backend().data(), den.backend().data());
            mpz_fdiv_q(p.backend().data(), p.backend().data(), twice_den.backend().data());
            if (mpz_gcd_ui(nullptr, p.backend().data(), q) != 1) continue;
            mpz_submul(nq.backend().data(), p.backend().data(), den.backend().data());
            if (mpz_sgn(nq.backend().data()) == 0) continue;
            const double lq = std::log(static_cast<double>(q));
            const double log_err = log_abs(nq) - log_den - lq;
            if (log_err > log_c - mu * lq) continue;
            ApproxHit hit;
            hit.p = p;
            hit.q = q;
            hit.error = std::exp(log_err);
            hit.mu_local = -log_err / lq;
            parts[ci].push_back(std::move(hit));
        }
    });
    std::vector<ApproxHit> hits;
    for (auto& part : parts)
        for (auto& h : part) hits.push_back(std::move(h));
    return hits;
}

std::string to_string(DSVerdict v) { return v == DSVerdict::diverges ? "diverges" : "converges"; }

std::vector<double> duffin_schaeffer_partial_sums(double mu, std::uint64_t modulus,
                                                  const std::vector<std::uint64_t>& cutoffs) {
    if (modulus < 1) throw domain_error("modulus must be >= 1");
    if (cutoffs.empty()) return {};
    std::vector<std::uint64_t> n_cut;
    for (std::uint64_t N : cutoffs) {
        if (N < modulus) throw domain_error("cut-offs must be >= the modulus");
        if (!n_cut.empty() && N / modulus < n_cut.back()) throw domain_error("cut-offs must ascend");
        n_cut.push_back(N / modulus);
    }
    SieveTable table = totient_sieve(n_cut.back());
    // phi(M n) / (M n)^mu = M^-mu phi(M n) / n^mu
    std::vector<double> sums = weighted_totient_partial_sums(table, modulus, mu, n_cut);
    const double scale = std::pow(static_cast<double>(modulus), -mu);
    for (double& s : sums) s *= scale;
    return sums;
}

DSResult duffin_schaeffer_sum(double mu, std::uint64_t modulus, std::uint64_t n) {
    DSResult r;
    r.partial_sum = duffin_schaeffer_partial_sums(mu, modulus, {n}).front();
    r.verdict = mu <= 2.0 ? DSVerdict::diverges : DSVerdict::converges;
    return r;
}

CoverDiagnostic cover_dimension_diagnostic(double mu, const DenominatorPredicate& pred,
                                           const std::vector<double>& beta_grid,
                                           const std::vector<int>& range_exponents, double c) {
    if (range_exponents.size() < 3) throw domain_error("cover diagnostic needs at least 3 dyadic ranges");
    for (double b : beta_grid)
        if (!(b > 0.0 && b <= 1.0)) throw domain_error("beta grid must lie in (0, 1]");
    for (std::size_t i = 0; i < range_exponents.size(); ++i) {
        if (range_exponents[i] < 0 || range_exponents[i] > 26) throw domain_error("range exponent out of [0, 26]");
        if (i > 0 && range_exponents[i] <= range_exponents[i - 1])
            throw domain_error("range exponents must ascend");
    }
    CoverDiagnostic out;
    out.range_exponents = range_exponents;
    const std::uint64_t q_top = (std::uint64_t{1} << (range_exponents.back() + 1)) - 1;
    SieveTable table = totient_sieve(q_top);
    // Per range: phi(q) and log(2 c q^-mu) for accepted q.
    std::vector<std::vector<std::pair<double, double>>> terms(range_exponents.size());
    for (std::size_t r = 0; r < range_exponents.size(); ++r) {
        const std::uint64_t lo = std::uint64_t{1} << range_exponents[r], hi = 2 * lo - 1;
        for (std::uint64_t q = lo; q <= hi; ++q) {
            bool ok = pred.kind == DenominatorPredicate::Kind::primes ? (q >= 2 && table.phi(q) == q - 1) : pred(q);
            if (ok)
                terms[r].emplace_back(table.phi(q), std::log(2.0 * c) - mu * std::log(static_cast<double>(q)));
        }
    }
    out.rows.resize(beta_grid.size());
    parallel_for(beta_grid.size(), [&](std::size_t i) {
        CoverRow& row = out.rows[i];
        row.beta = beta_grid[i];
        std::vector<double> x, y;
        for (std::size_t r = 0; r < terms.size(); ++r) {
            Compensated acc;
            for (const auto& [phi, l] : terms[r]) acc.add(phi * std::exp(row.beta * l));
            row.range_sums.push_back(acc.value());
            if (acc.value() > 0) {
                x.push_back(range_exponents[r]);
                y.push_back(std::log2(acc.value()));
            }
        }
        row.log2_slope = x.size() >= 2 ? linear_fit(x, y).slope : kNaN;
    });
    // Geometric decay: range sums shrink by a fixed factor, slope below -0.05.
    constexpr double kDecaySlope = -0.05;
    std::vector<std::size_t> order(beta_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return beta_grid[a] < beta_grid[b]; });
    for (std::size_t i : order)
        if (out.rows[i].log2_slope < kDecaySlope) {
            out.beta_star = beta_grid[i];
            break;
        }
    return out;
}

ExclusionScan exclusion_scan(const RealArg& t, double mu, double delta1, double delta2, double c,
                             const DenominatorPredicate& pred, std::uint64_t q_max, std::size_t cf_depth) {
    if (!(delta1 > 0.0) || !(delta2 > 0.0)) throw domain_error("exclusion_scan needs delta1, delta2 > 0");
    if (std::holds_alternative<BigRational>(t)) throw not_applicable_error("exclusion scan needs an irrational t");
    ExclusionScan out;
    out.hits_mu = restricted_approximations(t, mu, c, pred, q_max).size();
    const double q_low = std::sqrt(static_cast<double>(q_max));
    for (const ApproxHit& h : restricted_approximations(t, mu + delta1, c, pred, q_max))
        if (h.q.convert_to<double>() > q_low) ++out.hits_excluded;
    CFExpansion cf;
    try {
        cf = cf_expand(t, cf_depth);
    } catch (const cf_precision_error& e) {
        cf = e.certified;
    }
    out.mu_hat = mu_estimate(cf).value;
    return out;
}

double holder_lower_bound(double mu) {
    if (std::isinf(mu) && mu > 0) return 0.5;
    if (!(mu >= 2.0)) throw domain_error("holder_lower_bound requires mu >= 2");
    return 0.5 + 1.0 / (2.0 * mu);
}

bool looks_like_cf_literal(std::string_view text) {
    std::string_view s = trim(text);
    return !s.empty() && s.front() == '[';
}

CFLiteral parse_cf_literal(std::string_view text) {
    std::string_view s = trim(text);
    if (s.size() < 3 || s.front() != '[' || s.back() != ']')
        throw parse_error("continued fraction literal must look like [a0;a1,a2,...]: '" + std::string(text) + "'");
    s = s.substr(1, s.size() - 2);
    CFLiteral lit;
    auto semi = s.find(';');
    std::string_view head = trim(s.substr(0, semi));
    BigRational a0 = parse_rational(head);
    if (boost::multiprecision::denominator(a0) != 1 || head.find_first_of("./eE") != std::string_view::npos)
        throw parse_error("a0 must be an integer: '" + std::string(text) + "'");
    lit.quotients.push_back(boost::multiprecision::numerator(a0));
    if (semi == std::string_view::npos) return lit;
    std::string_view rest = s.substr(semi + 1);
    while (true) {
        auto comma = rest.find(',');
        std::string_view tok = trim(rest.substr(0, comma));
        if (tok == "..." ) {
            if (comma != std::string_view::npos || lit.quotients.size() < 2)
                throw parse_error("'...' must follow at least one quotient and end the literal");
            lit.periodic = true;
            break;
        }
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
            throw parse_error("partial quotient must be a positive integer: '" + std::string(tok) + "'");
        BigInt a{std::string(tok)};
        if (a < 1) throw parse_error("partial quotients after a0 must be positive");
        lit.quotients.push_back(a);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return lit;
}

std::vector<BigInt> expand_cf_literal(const CFLiteral& lit, std::size_t depth) {
    if (!lit.periodic) {
        if (depth == 0 || depth >= lit.quotients.size()) return lit.quotients;
        return {lit.quotients.begin(), lit.quotients.begin() + static_cast<std::ptrdiff_t>(depth)};
    }
    std::vector<BigInt> out;
    const std::size_t period = lit.quotients.size() - 1;
    for (std::size_t i = 0; i < depth; ++i) out.push_back(i == 0 ? lit.quotients[0] : lit.quotients[1 + (i - 1) % period]);
    return out;
}

RealArg parse_point(std::string_view text, int bits, std::size_t cf_depth, bool* was_decimal) {
    if (was_decimal) *was_decimal = false;
    if (!looks_like_cf_literal(text)) return parse_rational(text, was_decimal);
    CFLiteral lit = parse_cf_literal(text);
    if (!lit.periodic) {
        CFExpansion cf = cf_from_quotients(expand_cf_literal(lit, cf_depth));
        return cf.convergent(cf.size() - 1);
    }
    CFExpansion cf;
    if (cf_depth > 0) {
        cf = cf_from_quotients(expand_cf_literal(lit, cf_depth));
    } else {
        // Expand until 1 / q_n^2 is below 2^-(bits + 2).
        std::size_t d = 2;
        while (true) {
            cf = cf_from_quotients(expand_cf_literal(lit, d));
            if (2.0 * log2_of(cf.q.back()) > bits + 2) break;
            d *= 2;
        }
    }
    return HighPrecisionReal::from_rational(cf.convergent(cf.size() - 1), bits);
}

}  // namespace rnd
