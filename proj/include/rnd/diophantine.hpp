#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rnd/errors.hpp"
#include "rnd/numbers.hpp"
#include "rnd/series.hpp"

namespace rnd {

struct CFExpansion {
    std::vector<BigInt> partial_quotients;  // a_0, a_1, ...
    std::vector<BigInt> p;                  // convergent numerators
    std::vector<BigInt> q;                  // convergent denominators
    // mu_n with |x - p_n/q_n| = q_n^{-mu_n}; NaN where q_n < 2 or x = p_n/q_n.
    std::vector<double> mu_exponents;
    bool terminated = false;  // x is rational and the expansion is complete

    std::size_t size() const { return partial_quotients.size(); }
    BigRational convergent(std::size_t n) const { return BigRational(p[n], q[n]); }
};

// Thrown when fixed-point input cannot certify the next quotient.
struct cf_precision_error : precision_error {
    cf_precision_error(const std::string& what, CFExpansion prefix)
        : precision_error(what), certified(std::move(prefix)) {}
    CFExpansion certified;
};

// Continued fraction to at most depth quotients. A HighPrecisionReal is
// treated as the interval value +- 1 ulp; quotients are emitted only while
// both ends agree.
CFExpansion cf_expand(const RealArg& x, std::size_t depth);

// Expansion from given quotients; mu_n is measured against the last
// convergent, which is then the exact value of the expansion.
CFExpansion cf_from_quotients(const std::vector<BigInt>& quotients);

struct ExponentEstimate {
    double value = 0.0;
    std::size_t depth = 0;  // convergents inspected
};

// Finite-depth limsup proxies: max of mu_n over the last half of the levels.
ExponentEstimate mu_estimate(const CFExpansion& cf);
// Same, restricted to q_n not divisible by 4.
ExponentEstimate sigma_restricted(const CFExpansion& cf);

struct DenominatorPredicate {
    enum class Kind { all, multiples_of, not_multiples_of_4, primes };
    Kind kind = Kind::all;
    std::uint64_t modulus = 1;

    static DenominatorPredicate all() { return {}; }
    static DenominatorPredicate multiples_of(std::uint64_t m) { return {Kind::multiples_of, m}; }
    static DenominatorPredicate not_multiples_of_4() { return {Kind::not_multiples_of_4, 4}; }
    static DenominatorPredicate primes() { return {Kind::primes, 1}; }

    bool operator()(const BigInt& q) const;
    bool operator()(std::uint64_t q) const { return (*this)(BigInt(q)); }
};

DenominatorPredicate parse_predicate(std::string_view text);
std::string to_string(const DenominatorPredicate& pred);

struct WitnessOptions {
    int precision_bits = 1024;      // stop before q_n^2 exceeds 2^precision_bits
    std::uint64_t steer_budget = 64; // largest steering quotient tried
    // Large quotients are q_n^{mu-2} / c, so |t - p_n/q_n| < c q_n^-mu.
    double c = 0.25;
    // Quotients a_1, a_2, ... placed before the construction starts.
    std::vector<BigInt> prefix;
};

struct Witness {
    BigRational exact;        // value of the finite expansion
    HighPrecisionReal value;  // exact rounded to precision_bits
    CFExpansion cf;
};

// Quotients a_{n+1} = ceil(q_n^{mu - 2} / c) after every q_n accepted by the
// predicate; otherwise the smallest a_{n+1} <= steer_budget whose next one
// or two denominators can satisfy it. Stops at depth quotients or at the
// precision limit, whichever comes first.
Witness construct_t_with_mu(double mu, std::size_t depth,
                            const DenominatorPredicate& pred = DenominatorPredicate::all(),
                            const WitnessOptions& options = {});

struct ApproxHit {
    BigInt p;
    BigInt q;
    double error = 0.0;
    double mu_local = 0.0;  // -log|t - p/q| / log q
};

// All q <= q_max accepted by the predicate with p = round(t q) coprime to q
// and 0 < |t - p/q| <= c / q^mu, sorted by q.
std::vector<ApproxHit> restricted_approximations(const RealArg& t, double mu, double c,
                                                 const DenominatorPredicate& pred, std::uint64_t q_max);

// Finite evidence for t in (A_mu \ A_{mu + delta1}) \ U_{eps > 0} A_{2 mu + delta2 + eps}
// with restricted denominators. delta1, delta2 > 0 have no defaults.
struct ExclusionScan {
    std::size_t hits_mu = 0;      // restricted hits at exponent mu
    std::size_t hits_excluded = 0; // restricted hits at mu + delta1 with q > sqrt(q_max)
    double mu_hat = 0.0;          // unrestricted exponent estimate from the expansion
    bool in_a_mu() const { return hits_mu > 0; }
    bool outside_a_mu_delta1() const { return hits_excluded == 0; }
    bool below_upper(double mu, double delta2) const { return mu_hat <= 2 * mu + delta2; }
};

ExclusionScan exclusion_scan(const RealArg& t, double mu, double delta1, double delta2, double c,
                             const DenominatorPredicate& pred, std::uint64_t q_max, std::size_t cf_depth = 200);

enum class DSVerdict { diverges, converges };
std::string to_string(DSVerdict v);

struct DSResult {
    double partial_sum = 0.0;
    DSVerdict verdict = DSVerdict::diverges;
};

// sum_{q <= N, M | q} phi(q) / q^mu with the analytic verdict (diverges iff mu <= 2).
DSResult duffin_schaeffer_sum(double mu, std::uint64_t modulus, std::uint64_t n);
// The same partial sum at each ascending cut-off.
std::vector<double> duffin_schaeffer_partial_sums(double mu, std::uint64_t modulus,
                                                  const std::vector<std::uint64_t>& cutoffs);

struct CoverRow {
    double beta = 0.0;
    std::vector<double> range_sums;  // one per dyadic range
    double log2_slope = 0.0;         // of log2 range_sums against the range index
};

struct CoverDiagnostic {
    std::vector<int> range_exponents;  // range j is [2^j, 2^{j+1})
    std::vector<CoverRow> rows;
    std::optional<double> beta_star;   // smallest beta with geometric decay
};

// Covering sums sum_q phi(q) (2 c q^{-mu})^beta over dyadic ranges.
CoverDiagnostic cover_dimension_diagnostic(double mu, const DenominatorPredicate& pred,
                                           const std::vector<double>& beta_grid,
                                           const std::vector<int>& range_exponents, double c = 0.25);

// 1/2 + 1/(2 mu); mu = infinity gives 1/2.
double holder_lower_bound(double mu);

// "[a0;a1,a2]" or "[a0;a1,a2,...]", where "..." repeats a1.. periodically.
struct CFLiteral {
    std::vector<BigInt> quotients;
    bool periodic = false;
};
CFLiteral parse_cf_literal(std::string_view text);
bool looks_like_cf_literal(std::string_view text);

// Quotients of the literal to the given depth (periodic literals repeat).
std::vector<BigInt> expand_cf_literal(const CFLiteral& lit, std::size_t depth);

// A point given as "P/Q", an integer, a decimal or a CF literal. Finite
// literals are exact; periodic ones are expanded until the convergent is
// within 2^-bits and rounded to bits (depth > 0 fixes the depth instead).
RealArg parse_point(std::string_view text, int bits, std::size_t cf_depth = 0, bool* was_decimal = nullptr);

}  // namespace rnd
