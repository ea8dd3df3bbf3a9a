#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rnd/diophantine.hpp"
#include "rnd/errors.hpp"
#include "rnd/numeric.hpp"

using namespace rnd;

namespace {

// floor(sqrt(n) 2^bits) - offset 2^bits as a fixed-point real.
HighPrecisionReal sqrt_minus(unsigned n, unsigned offset, int bits) {
    BigInt scaled = BigInt(n) << (2 * bits);
    BigInt r = boost::multiprecision::sqrt(scaled);
    return HighPrecisionReal::from_raw(r - (BigInt(offset) << bits), bits);
}

HighPrecisionReal golden_conjugate(int bits) {
    // (sqrt 5 - 1) / 2
    BigInt r = boost::multiprecision::sqrt(BigInt(5) << (2 * bits));
    return HighPrecisionReal::from_raw((r - (BigInt(1) << bits)) >> 1, bits);
}

void check_invariants(const CFExpansion& cf, const BigRational& value) {
    for (std::size_t n = 1; n < cf.size(); ++n) {
        BigInt det = cf.p[n] * cf.q[n - 1] - cf.p[n - 1] * cf.q[n];
        CHECK(det == ((n % 2 == 1) ? 1 : -1));
        CHECK(cf.q[n] >= cf.q[n - 1]);
        CHECK(cf.partial_quotients[n] >= 1);
        BigRational err = value - cf.convergent(n);
        if (err < 0) err = -err;
        CHECK(err * cf.q[n] * cf.q[n] <= 1);
    }
}

}  // namespace

TEST_CASE("rational expansions terminate") {
    CFExpansion cf = cf_expand(BigRational(3, 7), 20);
    CHECK(cf.terminated);
    REQUIRE(cf.size() == 3);
    CHECK(cf.partial_quotients[1] == 2);
    CHECK(cf.partial_quotients[2] == 3);
    CHECK(cf.convergent(2) == BigRational(3, 7));
    CHECK(std::isnan(cf.mu_exponents[2]));
    CHECK_THROWS_AS(mu_estimate(cf), not_applicable_error);
    CFExpansion neg = cf_expand(BigRational(-7, 3), 10);
    CHECK(neg.partial_quotients[0] == -3);
    CHECK(neg.convergent(neg.size() - 1) == BigRational(-7, 3));
}

TEST_CASE("quadratic irrationals have periodic expansions") {
    CFExpansion g = cf_expand(RealArg(golden_conjugate(512)), 60);
    REQUIRE(g.size() == 60);
    for (std::size_t n = 1; n < g.size(); ++n) CHECK(g.partial_quotients[n] == 1);
    CHECK(mu_estimate(g).value == doctest::Approx(2.0).epsilon(0.05));

    CFExpansion s = cf_expand(RealArg(sqrt_minus(2, 1, 512)), 60);
    for (std::size_t n = 1; n < s.size(); ++n) CHECK(s.partial_quotients[n] == 2);
    check_invariants(s, sqrt_minus(2, 1, 512).to_rational());

    CFExpansion r = cf_expand(RealArg(sqrt_minus(7, 2, 512)), 40);
    const int period[] = {1, 1, 1, 4};
    for (std::size_t n = 1; n < r.size(); ++n) CHECK(r.partial_quotients[n] == period[(n - 1) % 4]);
}

TEST_CASE("fixed-point input stops at the certified depth") {
    HighPrecisionReal g = golden_conjugate(128);
    try {
        cf_expand(RealArg(g), 500);
        FAIL("expected cf_precision_error");
    } catch (const cf_precision_error& e) {
        CHECK(e.certified.size() > 50);
        CHECK(e.certified.size() < 100);
        for (std::size_t n = 1; n < e.certified.size(); ++n) CHECK(e.certified.partial_quotients[n] == 1);
    }
}

TEST_CASE("expansion from quotients and literals") {
    CFLiteral lit = parse_cf_literal("[0;1,2,3]");
    CHECK_FALSE(lit.periodic);
    CHECK(lit.quotients.size() == 4);
    CFExpansion cf = cf_from_quotients(lit.quotients);
    CHECK(cf.convergent(3) == BigRational(7, 10));
    CHECK(std::get<BigRational>(parse_point("[0;1,2,3]", 256)) == BigRational(7, 10));
    CFLiteral per = parse_cf_literal("[0;1,2,...]");
    CHECK(per.periodic);
    auto q = expand_cf_literal(per, 7);
    CHECK(q == std::vector<BigInt>{0, 1, 2, 1, 2, 1, 2});
    CHECK(looks_like_cf_literal(" [1;2]"));
    CHECK_FALSE(looks_like_cf_literal("1/2"));
    CHECK_THROWS_AS(parse_cf_literal("[0;1,0,2]"), parse_error);
    CHECK_THROWS_AS(parse_cf_literal("[0;1,2"), parse_error);
    RealArg golden = parse_point("[0;1,...]", 256);
    CHECK(to_double(golden) == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-15));
    bool dec = false;
    parse_point("0.25", 256, 0, &dec);
    CHECK(dec);
}

TEST_CASE("constructed witnesses reach the target exponent") {
    for (double mu : {2.5, 3.0, 4.0}) {
        Witness w = construct_t_with_mu(mu, 12, DenominatorPredicate::all());
        CHECK(mu_estimate(w.cf).value == doctest::Approx(mu).epsilon(0.1));
        check_invariants(w.cf, w.exact);
    }
    Witness m = construct_t_with_mu(4.0, 8, DenominatorPredicate::multiples_of(12));
    int hits = 0;
    for (std::size_t n = 1; n < m.cf.size(); ++n)
        if (m.cf.q[n] % 12 == 0) ++hits;
    CHECK(hits >= 2);
    CHECK_THROWS_AS(construct_t_with_mu(1.5, 5), domain_error);
}

TEST_CASE("restricted search matches brute force on a rational target") {
    BigRational t(355, 1130);  // not in lowest terms on purpose
    const double mu = 2.2, c = 0.5;
    auto pred = DenominatorPredicate::not_multiples_of_4();
    auto hits = restricted_approximations(RealArg(t), mu, c, pred, 400);
    std::vector<std::pair<long, long>> want;
    const double tv = to_double(t);
    for (long q = 2; q <= 400; ++q) {
        if (q % 4 == 0) continue;
        long p = std::lround(tv * q);
        if (std::gcd(p, q) != 1) continue;
        BigRational err = t - BigRational(p, q);
        if (err < 0) err = -err;
        if (err == 0) continue;
        if (to_double(err) <= c * std::pow(double(q), -mu)) want.push_back({p, q});
    }
    REQUIRE(hits.size() == want.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(hits[i].p == want[i].first);
        CHECK(hits[i].q == want[i].second);
    }
}

TEST_CASE("predicates") {
    auto p = parse_predicate("multiples_of:12");
    CHECK(p(24u));
    CHECK_FALSE(p(18u));
    CHECK(parse_predicate("not4")(6u));
    CHECK_FALSE(parse_predicate("not4")(8u));
    CHECK(parse_predicate("primes")(97u));
    CHECK_FALSE(parse_predicate("primes")(91u));
    CHECK(to_string(parse_predicate("mult:5")) == to_string(DenominatorPredicate::multiples_of(5)));
    CHECK_THROWS_AS(parse_predicate("odd"), parse_error);
}

TEST_CASE("Duffin-Schaeffer sums match a direct loop") {
    for (double mu : {2.0, 2.5}) {
        double direct = 0.0;
        for (std::uint64_t q = 12; q <= 12000; q += 12) direct += double(oracle::phi_naive(q)) / std::pow(double(q), mu);
        DSResult r = duffin_schaeffer_sum(mu, 12, 12000);
        CHECK(r.partial_sum == doctest::Approx(direct).epsilon(1e-10));
        CHECK(r.verdict == (mu <= 2.0 ? DSVerdict::diverges : DSVerdict::converges));
    }
    auto sums = duffin_schaeffer_partial_sums(2.0, 12, {1200, 12000});
    CHECK(sums[0] < sums[1]);
}

TEST_CASE("covering sums decay beyond the critical beta") {
    std::vector<double> grid;
    for (int i = 8; i <= 20; ++i) grid.push_back(i * 0.05);
    CoverDiagnostic d = cover_dimension_diagnostic(3.0, DenominatorPredicate::all(), grid, {8, 9, 10, 11, 12, 13, 14});
    REQUIRE(d.beta_star.has_value());
    CHECK(*d.beta_star == doctest::Approx(2.0 / 3.0).epsilon(0.2));
    CHECK(d.rows.front().log2_slope > 0.0);
    CHECK(d.rows.back().log2_slope < 0.0);
}

TEST_CASE("Hölder lower bound") {
    CHECK(holder_lower_bound(2.0) == 0.75);
    CHECK(holder_lower_bound(4.0) == 0.625);
    CHECK(holder_lower_bound(std::numeric_limits<double>::infinity()) == 0.5);
    CHECK_THROWS_AS(holder_lower_bound(1.0), domain_error);
}

TEST_CASE("exclusion scan on a constructed witness") {
    Witness w = construct_t_with_mu(3.0, 12, DenominatorPredicate::all());
    ExclusionScan e = exclusion_scan(RealArg(w.value), 3.0, 0.5, 0.5, 0.25, DenominatorPredicate::all(), 1'000'000);
    CHECK(e.in_a_mu());
    CHECK(e.outside_a_mu_delta1());
    CHECK(e.below_upper(3.0, 0.5));
    CHECK_THROWS_AS(exclusion_scan(RealArg(w.value), 3.0, 0.0, 0.5, 0.25, DenominatorPredicate::all(), 1000),
                    domain_error);
    CHECK_THROWS_AS(exclusion_scan(BigRational(1, 3), 3.0, 0.5, 0.5, 0.25, DenominatorPredicate::all(), 1000),
                    not_applicable_error);
}
