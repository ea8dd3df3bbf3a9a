#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rnd/asymptotics.hpp"
#include "rnd/diophantine.hpp"
#include "rnd/errors.hpp"
#include "rnd/filters.hpp"
#include "rnd/gauss.hpp"
#include "rnd/holder.hpp"
#include "rnd/numeric.hpp"
#include "rnd/series.hpp"
#include "rnd/totient.hpp"
#include "table.hpp"

namespace {

using namespace rnd;
using cli::Cell;
using cli::Table;
using json = nlohmann::ordered_json;

enum ExitCode {
    kOk = 0,
    kGeneric = 1,
    kParse = 2,
    kPrecision = 3,
    kDomain = 4,
    kConvergence = 5,
    kBudget = 6,
    kNotApplicable = 7,
    kIo = 8,
};

struct RunConfig {
    int precision_bits = HighPrecisionReal::default_bits;
    std::uint64_t n_max = 1'000'000;
    std::size_t grid_cap = std::size_t{1} << 24;
    unsigned threads = 1;
    bool deterministic = false;
    std::string format = "csv";
    std::string output;
};

SeriesParams series_params(const RunConfig& c) { return {c.n_max, c.precision_bits}; }

FilterOptions filter_options(const RunConfig& c) {
    FilterOptions o;
    o.grid_cap = c.grid_cap;
    return o;
}

RealArg point(const std::string& text, const RunConfig& c, std::size_t cf_depth = 0) {
    bool decimal = false;
    RealArg v = parse_point(text, c.precision_bits, cf_depth, &decimal);
    if (decimal)
        std::cerr << "warning: decimal input '" << text << "' is read as the exact rational "
                  << to_string(std::get<BigRational>(v)) << "\n";
    return v;
}

std::pair<int, int> parse_k_range(const std::string& text) {
    auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            int k = std::stoi(text);
            return {k, k};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw parse_error("range must look like A..B: '" + text + "'");
    }
}

std::string describe_point(const std::string& text, const RealArg& v) {
    if (std::holds_alternative<BigRational>(v)) return text;
    return text;
}

Cell opt_double(std::optional<double> v) { return v ? Cell(*v) : Cell(""); }

json meta_for(const RunConfig& c, const std::string& command) {
    json m;
    m["command"] = command;
    m["precision_bits"] = c.precision_bits;
    m["n_max"] = c.n_max;
    m["grid_cap"] = c.grid_cap;
    m["threads"] = c.threads;
    m["deterministic"] = c.deterministic;
    return m;
}

void emit(const Table& t, const RunConfig& c, const std::string& command) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!c.output.empty()) {
        file.open(c.output, std::ios::binary);
        if (!file) throw std::ios_base::failure("cannot open output file '" + c.output + "'");
        out = &file;
    }
    if (c.format == "json")
        cli::write_json(*out, t, meta_for(c, command));
    else
        cli::write_csv(*out, t);
    out->flush();
    if (!*out) throw std::ios_base::failure("write failed");
}

// Running least-squares slope of log y against log x, once two points exist.
std::optional<double> running_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) return std::nullopt;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return linear_fit(lx, ly).slope;
}

struct CfRowsOptions {
    bool with_p = true;
};

void cf_rows(Table& t, const CFExpansion& cf) {
    for (std::size_t n = 0; n < cf.size(); ++n)
        t.add({Cell(n), Cell(cf.partial_quotients[n].str()), Cell(cf.p[n].str()), Cell(cf.q[n].str()),
               std::isnan(cf.mu_exponents[n]) ? Cell("") : Cell(cf.mu_exponents[n])});
}

std::optional<double> mu_hat_of(const RealArg& t, std::size_t depth) {
    if (std::holds_alternative<BigRational>(t)) return std::nullopt;
    CFExpansion cf;
    try {
        cf = cf_expand(t, depth);
    } catch (const cf_precision_error& e) {
        cf = e.certified;
    }
    if (cf.size() < 5) return std::nullopt;
    return mu_estimate(cf).value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Riemann function toolkit: series, Gauss sums, filters, Diophantine and Hölder tools"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI configuration file (keys match long option names)");
    RunConfig cfg;
    app.add_option("--precision-bits", cfg.precision_bits, "fixed-point fraction bits for phases")
        ->check(CLI::Range(64, 512));
    app.add_option("--n-max", cfg.n_max, "series truncation 0 < |n| <= n_max")->check(CLI::PositiveNumber);
    app.add_option("--grid-cap", cfg.grid_cap, "largest FFT grid for filter synthesis")->check(CLI::PositiveNumber);
    app.add_option("--threads", cfg.threads, "worker threads (0 = hardware concurrency)");
    app.add_flag("--deterministic", cfg.deterministic, "force a single worker thread");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", cfg.output, "output file (default stdout)");

    std::string cmd_name;
    Table table;

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate R_{x0}(t) or the trajectory phi_{x0}(t)");
    std::string x0_text, t_text;
    std::size_t cf_depth = 0;
    bool phi = false;
    eval->add_option("--x0", x0_text, "x0 as P/Q, decimal or CF literal")->required();
    eval->add_option("--t", t_text, "t as P/Q, decimal or CF literal")->required();
    eval->add_flag("--phi", phi, "evaluate phi_{x0}(t) instead of R_{x0}(t)");
    eval->add_option("--cf-depth", cf_depth, "depth for periodic CF literals (0 = to precision)");

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "phi_{x0} on the uniform grid t = j/(count-1)");
    std::size_t count = 101;
    traj->add_option("--x0", x0_text, "x0 in [0, 1)")->required();
    traj->add_option("--count", count, "grid points")->check(CLI::Range(2, 1000000));

    // gauss
    auto* gauss = app.add_subcommand("gauss", "quadratic Gauss sums G(p, m, q)");
    std::int64_t gp = 1, gq = 1;
    std::optional<std::int64_t> gm;
    gauss->add_option("--p", gp, "p")->required();
    gauss->add_option("--q", gq, "q >= 1")->required();
    gauss->add_option("--m", gm, "m (default: every m in [0, q))");

    // filters / eta / flatness
    std::vector<double> ps{6.0};
    std::string k_range = "5..9";
    bool weighted = false;
    auto* filters = app.add_subcommand("filters", "L^p norms of Littlewood-Paley bands");
    filters->add_option("--x0", x0_text, "x0")->required();
    filters->add_option("--p", ps, "exponents p > 1");
    filters->add_option("--k", k_range, "block range A..B");
    filters->add_flag("--weighted", weighted, "keep the 1/n^2 weights");
    auto* eta = app.add_subcommand("eta", "eta(p) from weighted high-pass filters");
    eta->add_option("--x0", x0_text, "x0")->required();
    eta->add_option("--p", ps, "exponents p > 1");
    eta->add_option("--k", k_range, "block range A..B (at least 4 blocks)");
    auto* flat = app.add_subcommand("flatness", "p-flatness of the high-pass filter at 2^k");
    flat->add_option("--x0", x0_text, "x0")->required();
    flat->add_option("--p", ps, "exponents p >= 2");
    flat->add_option("--k", k_range, "block range A..B");

    // cf
    auto* cf = app.add_subcommand("cf", "continued fraction expansion");
    std::string x_text;
    std::size_t depth = 20;
    bool summary = false;
    cf->add_option("--x", x_text, "value as P/Q, decimal or CF literal")->required();
    cf->add_option("--depth", depth, "partial quotients")->check(CLI::PositiveNumber);
    cf->add_option("--cf-depth", cf_depth, "depth for periodic CF literals (0 = to precision)");
    cf->add_flag("--summary", summary, "print mu and sigma estimates instead of the expansion");

    // dioph
    auto* dioph = app.add_subcommand("dioph", "Diophantine approximation tools");
    dioph->require_subcommand(1);
    dioph->fallthrough();
    double mu = 3.0, c = 0.25;
    std::string pred_text = "all";
    std::uint64_t q_max = 100000, modulus = 1;
    std::vector<std::uint64_t> cutoffs{1000000};
    auto* approx = dioph->add_subcommand("approx", "fractions with |t - p/q| <= c / q^mu");
    approx->add_option("--t", t_text, "t")->required();
    approx->add_option("--cf-depth", cf_depth, "depth for periodic CF literals");
    approx->add_option("--mu", mu, "exponent");
    approx->add_option("--c", c, "constant in (0, 1)");
    approx->add_option("--pred", pred_text, "all | primes | not4 | multiples_of:M");
    approx->add_option("--q-max", q_max, "largest denominator");
    auto* ds = dioph->add_subcommand("ds", "Duffin-Schaeffer partial sums over multiples of M");
    ds->add_option("--mu", mu, "exponent");
    ds->add_option("--modulus", modulus, "M >= 1");
    ds->add_option("--n", cutoffs, "ascending cut-offs N >= M");
    auto* cover = dioph->add_subcommand("cover", "covering-sum dimension diagnostic");
    double beta_min = 0.01, beta_max = 1.0, beta_step = 0.01;
    std::string ranges = "10..19";
    cover->add_option("--mu", mu, "exponent");
    cover->add_option("--pred", pred_text, "denominator predicate");
    cover->add_option("--c", c, "constant");
    cover->add_option("--beta-min", beta_min, "smallest beta");
    cover->add_option("--beta-max", beta_max, "largest beta (<= 1)");
    cover->add_option("--beta-step", beta_step, "beta spacing");
    cover->add_option("--ranges", ranges, "dyadic exponents A..B");
    auto* witness = dioph->add_subcommand("witness", "construct t with irrationality exponent mu");
    witness->add_option("--mu", mu, "exponent >= 2");
    witness->add_option("--depth", depth, "partial quotients");
    witness->add_option("--pred", pred_text, "denominator predicate");
    witness->add_option("--c", c, "constant in (0, 1]");
    auto* exclude = dioph->add_subcommand("exclude", "membership evidence for A_mu minus A_{mu+delta1} and A_{2mu+delta2}");
    double delta1 = 0.0, delta2 = 0.0;
    exclude->add_option("--t", t_text, "t (irrational: CF literal or fixed point)")->required();
    exclude->add_option("--cf-depth", cf_depth, "depth for periodic CF literals");
    exclude->add_option("--mu", mu, "exponent");
    exclude->add_option("--delta1", delta1, "exclusion margin above mu (> 0)")->required();
    exclude->add_option("--delta2", delta2, "margin above 2 mu (> 0)")->required();
    exclude->add_option("--c", c, "constant in (0, 1)");
    exclude->add_option("--pred", pred_text, "denominator predicate");
    exclude->add_option("--q-max", q_max, "largest denominator");
    auto* bound = dioph->add_subcommand("bound", "Hölder lower bound 1/2 + 1/(2 mu)");
    bound->add_option("--mu", mu, "exponent >= 2 or inf")->required();

    // totient
    auto* tot = app.add_subcommand("totient", "totient sums");
    std::vector<std::uint64_t> phi_sum_n, phi_n;
    std::optional<std::uint64_t> mod_q, interval_q, weighted_q, tot_n, tot_k;
    double alpha = 2.0;
    tot->add_option("--phi", phi_n, "phi(n)");
    tot->add_option("--phi-sum", phi_sum_n, "Phi(N) = sum_{n<=N} phi(n)");
    tot->add_option("--phi-sum-mod", mod_q, "Q for Phi_Q(N) = sum_{n<=N} phi(Q n); needs --n");
    tot->add_option("--interval-sum", interval_q, "Q for the coprime interval sum; needs --k");
    tot->add_option("--weighted", weighted_q, "Q for sum phi(Q n)/n^alpha; needs --n");
    tot->add_option("--alpha", alpha, "exponent for --weighted");
    tot->add_option("--n", tot_n, "N");
    tot->add_option("--k", tot_k, "k");

    // holder
    auto* holder = app.add_subcommand("holder", "local Hölder exponent of R_{x0} at t");
    HolderOptions hopt;
    bool increments = false;
    holder->add_option("--x0", x0_text, "x0")->required();
    holder->add_option("--t", t_text, "t (prefer P/Q or a CF literal)")->required();
    holder->add_option("--cf-depth", cf_depth, "depth for periodic CF literals");
    holder->add_option("--h-min", hopt.h_min, "smallest |h|");
    holder->add_option("--h-max", hopt.h_max, "largest |h| (<= 1e-2)");
    holder->add_option("--spd", hopt.samples_per_decade, "h samples per decade");
    holder->add_flag("--subtract-linear", hopt.subtract_linear, "add 2 pi i h to each increment");
    holder->add_flag("--increments", increments, "print the increments instead of the estimate");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Hölder exponents of constructed witnesses");
    std::vector<double> mus{2.0, 3.0, 4.0};
    std::size_t witnesses = 1, wdepth = 40;
    spectrum->add_option("--x0", x0_text, "x0")->required();
    spectrum->add_option("--mu", mus, "target exponents");
    spectrum->add_option("--witnesses", witnesses, "witnesses per mu");
    spectrum->add_option("--depth", wdepth, "witness depth");
    spectrum->add_option("--h-min", hopt.h_min, "smallest |h|");
    spectrum->add_option("--h-max", hopt.h_max, "largest |h|");
    spectrum->add_option("--spd", hopt.samples_per_decade, "h samples per decade");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    try {
        set_thread_count(cfg.deterministic ? 1 : cfg.threads);
        if (!cfg.deterministic && cfg.threads == 0) set_thread_count(0);

        if (eval->parsed()) {
            cmd_name = "eval";
            RealArg x0 = point(x0_text, cfg, cf_depth), t = point(t_text, cfg, cf_depth);
            SeriesValue v = phi ? eval_phi_traj(x0, t, series_params(cfg)) : eval_R(x0, t, series_params(cfg));
            table.columns = {"x0", "t", "function", "re", "im", "tail_bound"};
            table.add({x0_text, t_text, phi ? "phi" : "R", v.value.real(), v.value.imag(), v.tail_bound});
        } else if (traj->parsed()) {
            cmd_name = "trajectory";
            RealArg x0 = point(x0_text, cfg);
            table.columns = {"t", "re", "im"};
            for (const TrajectoryRow& r : trajectory_grid(x0, count, series_params(cfg))) table.add({r.t, r.re, r.im});
        } else if (gauss->parsed()) {
            cmd_name = "gauss";
            if (gq < 1) throw domain_error("q must be >= 1");
            table.columns = {"p", "m", "q", "re", "im", "abs", "class", "nonzero_rule"};
            const bool coprime = std::gcd(((gp % gq) + gq) % gq, gq) == 1;
            auto row = [&](std::int64_t m, ComplexValue v) {
                MagnitudeClass mc = classify_magnitude(v, gq, coprime);
                table.add({gp, m, gq, v.real(), v.imag(), std::abs(v), to_string(mc),
                           coprime ? Cell(gauss_nonzero(gp, m, gq)) : Cell("")});
            };
            if (gm) {
                row(*gm, gauss_sum(gp, *gm, gq).value);
            } else {
                if (gq > 10'000'000) throw budget_error("q too large for a full table");
                GaussBatch batch(gq);
                const auto& vals = batch.compute(gp);
                for (std::int64_t m = 0; m < gq; ++m) row(m, vals[static_cast<std::size_t>(m)]);
            }
        } else if (filters->parsed() || eta->parsed()) {
            const bool is_eta = eta->parsed();
            cmd_name = is_eta ? "eta" : "filters";
            RealArg x0 = point(x0_text, cfg);
            auto [k0, k1] = parse_k_range(k_range);
            if (k0 < 1 || k1 < k0) throw domain_error("need 1 <= A <= B in the k range");
            if (is_eta && k1 - k0 < 3) throw domain_error("eta needs at least 4 blocks");
            const FilterOptions fo = filter_options(cfg);
            table.columns = {"k", "N", "p", "norm_p_pow_p", is_eta ? "eta_so_far" : "slope_so_far"};
            std::vector<std::vector<double>> norms(ps.size());
            std::vector<double> Ns;
            for (int k = k0; k <= k1; ++k) {
                BandSamples b = is_eta ? synthesize_highpass(x0, k, fo) : synthesize_band(x0, k, weighted, fo);
                Ns.push_back(is_eta ? std::ldexp(1.0, 2 * k) : std::ldexp(1.0, k));
                for (std::size_t i = 0; i < ps.size(); ++i) norms[i].push_back(lp_norm(b, ps[i], fo));
            }
            for (std::size_t i = 0; i < ps.size(); ++i) {
                for (std::size_t j = 0; j < Ns.size(); ++j) {
                    std::vector<double> xs(Ns.begin(), Ns.begin() + static_cast<std::ptrdiff_t>(j + 1));
                    std::vector<double> ys(norms[i].begin(), norms[i].begin() + static_cast<std::ptrdiff_t>(j + 1));
                    auto s = running_slope(xs, ys);
                    if (s && is_eta) *s = -*s;
                    table.add({k0 + static_cast<int>(j), Ns[j], ps[i], norms[i][j], opt_double(s)});
                }
                auto s = running_slope(Ns, norms[i]);
                if (s && is_eta) *s = -*s;
                table.add({"fit", "", ps[i], "", opt_double(s)});
            }
        } else if (flat->parsed()) {
            cmd_name = "flatness";
            RealArg x0 = point(x0_text, cfg);
            auto [k0, k1] = parse_k_range(k_range);
            if (k0 < 1 || k1 < k0) throw domain_error("need 1 <= A <= B in the k range");
            const FilterOptions fo = filter_options(cfg);
            table.columns = {"k", "N", "p", "flatness"};
            for (int k = k0; k <= k1; ++k) {
                BandSamples b = synthesize_highpass(x0, k, fo);
                double l2 = lp_norm(b, 2.0, fo);
                for (double p : ps) {
                    if (p < 2.0) throw domain_error("flatness requires p >= 2");
                    double f = p == 2.0 ? 1.0 : lp_norm(b, p, fo) / std::pow(l2, 0.5 * p);
                    table.add({k, std::ldexp(1.0, k), p, f});
                }
            }
        } else if (cf->parsed()) {
            cmd_name = "cf";
            RealArg x = point(x_text, cfg, cf_depth);
            CFExpansion e;
            int status = kOk;
            std::string warning;
            try {
                e = cf_expand(x, depth);
            } catch (const cf_precision_error& err) {
                e = err.certified;
                status = kPrecision;
                warning = err.what();
            }
            if (summary) {
                table.columns = {"depth", "mu_hat", "sigma_hat"};
                table.add({e.size(), mu_estimate(e).value, sigma_restricted(e).value});
            } else {
                table.columns = {"n", "a", "p", "q", "mu_n"};
                cf_rows(table, e);
            }
            emit(table, cfg, cmd_name);
            if (status != kOk) std::cerr << "error: " << warning << "\n";
            return status;
        } else if (dioph->parsed()) {
            if (approx->parsed()) {
                cmd_name = "dioph approx";
                RealArg t = point(t_text, cfg, cf_depth);
                table.columns = {"p", "q", "error", "mu_local"};
                for (const ApproxHit& h : restricted_approximations(t, mu, c, parse_predicate(pred_text), q_max))
                    table.add({h.p.str(), h.q.str(), h.error, h.mu_local});
            } else if (ds->parsed()) {
                cmd_name = "dioph ds";
                table.columns = {"N", "modulus", "mu", "partial_sum", "verdict"};
                std::vector<double> sums = duffin_schaeffer_partial_sums(mu, modulus, cutoffs);
                const std::string verdict = to_string(duffin_schaeffer_sum(mu, modulus, cutoffs.front()).verdict);
                for (std::size_t i = 0; i < sums.size(); ++i) table.add({cutoffs[i], modulus, mu, sums[i], verdict});
            } else if (cover->parsed()) {
                cmd_name = "dioph cover";
                auto [j0, j1] = parse_k_range(ranges);
                std::vector<int> js;
                for (int j = j0; j <= j1; ++j) js.push_back(j);
                std::vector<double> grid;
                if (!(beta_step > 0.0)) throw domain_error("beta step must be positive");
                for (int i = 0;; ++i) {
                    double b = beta_min + i * beta_step;
                    if (b > beta_max + 1e-12) break;
                    grid.push_back(std::min(b, 1.0));
                }
                CoverDiagnostic d = cover_dimension_diagnostic(mu, parse_predicate(pred_text), grid, js, c);
                table.columns = {"beta", "log2_slope", "first_range_sum", "last_range_sum", "beta_star"};
                for (const CoverRow& r : d.rows)
                    table.add({r.beta, r.log2_slope, r.range_sums.front(), r.range_sums.back(),
                               d.beta_star ? Cell(*d.beta_star) : Cell("")});
            } else if (witness->parsed()) {
                cmd_name = "dioph witness";
                WitnessOptions wo;
                wo.c = c;
                Witness w = construct_t_with_mu(mu, depth, parse_predicate(pred_text), wo);
                table.columns = {"n", "a", "p", "q", "mu_n"};
                cf_rows(table, w.cf);
            } else if (exclude->parsed()) {
                cmd_name = "dioph exclude";
                RealArg t = point(t_text, cfg, cf_depth);
                ExclusionScan e = exclusion_scan(t, mu, delta1, delta2, c, parse_predicate(pred_text), q_max);
                table.columns = {"mu", "delta1", "delta2", "hits_mu", "hits_mu_delta1", "mu_hat", "in_A_mu",
                                 "outside_A_mu_delta1", "below_2mu_delta2"};
                table.add({mu, delta1, delta2, e.hits_mu, e.hits_excluded, e.mu_hat, e.in_a_mu(),
                           e.outside_a_mu_delta1(), e.below_upper(mu, delta2)});
            } else if (bound->parsed()) {
                cmd_name = "dioph bound";
                table.columns = {"mu", "alpha_lower"};
                table.add({mu, holder_lower_bound(mu)});
            }
        } else if (tot->parsed()) {
            cmd_name = "totient";
            std::uint64_t top = 1;
            for (auto n : phi_sum_n) top = std::max(top, n);
            for (auto n : phi_n) top = std::max(top, n);
            if (tot_n) top = std::max(top, *tot_n);
            if (!phi_sum_n.empty()) {
                SieveTable s = totient_sieve(top);
                table.columns = {"N", "Phi", "Phi_over_N2"};
                for (auto n : phi_sum_n) {
                    BigInt v = phi_sum(s, n);
                    table.add({n, v.str(), v.convert_to<double>() / (static_cast<double>(n) * static_cast<double>(n))});
                }
            } else if (!phi_n.empty()) {
                SieveTable s = totient_sieve(top);
                table.columns = {"n", "phi"};
                for (auto n : phi_n) {
                    if (n < 1) throw domain_error("phi needs n >= 1");
                    table.add({n, s.phi(n)});
                }
            } else if (mod_q) {
                if (!tot_n) throw domain_error("--phi-sum-mod needs --n");
                SieveTable s = totient_sieve(*tot_n);
                BigInt v = phi_sum_mod(s, *mod_q, *tot_n);
                double n2 = static_cast<double>(*tot_n) * static_cast<double>(*tot_n);
                table.columns = {"Q", "N", "Phi_Q", "Phi_Q_over_N2"};
                table.add({*mod_q, *tot_n, v.str(), v.convert_to<double>() / n2});
            } else if (interval_q) {
                if (!tot_k) throw domain_error("--interval-sum needs --k");
                BigInt s = coprime_interval_sum(*interval_q, *tot_k), f = coprime_interval_closed_form(*interval_q, *tot_k);
                table.columns = {"Q", "k", "S", "closed_form", "equal"};
                table.add({*interval_q, *tot_k, s.str(), f.str(), s == f});
            } else if (weighted_q) {
                if (!tot_n) throw domain_error("--weighted needs --n");
                SieveTable s = totient_sieve(*tot_n);
                table.columns = {"Q", "alpha", "N", "sum"};
                table.add({*weighted_q, alpha, *tot_n, weighted_totient_sum(s, *weighted_q, alpha, *tot_n)});
            } else {
                throw domain_error("totient needs one of --phi, --phi-sum, --phi-sum-mod, --interval-sum, --weighted");
            }
        } else if (holder->parsed()) {
            cmd_name = "holder";
            RealArg x0 = point(x0_text, cfg), t = point(t_text, cfg, cf_depth);
            hopt.params = series_params(cfg);
            HolderEstimate est = estimate_alpha(x0, t, hopt, describe_point(t_text, t));
            if (increments) {
                table.columns = {"h", "d", "envelope"};
                for (const IncrementRow& r : est.rows) table.add({r.h, r.d, r.envelope});
            } else {
                std::optional<double> m = mu_hat_of(t, 400);
                table.columns = {"t_descriptor", "mu_hat", "alpha_hat", "prediction", "stderr"};
                table.add({est.t_descriptor, opt_double(m), est.alpha_hat,
                           m && *m >= 2.0 ? Cell(holder_lower_bound(*m)) : Cell(""), est.slope_stderr});
            }
        } else if (spectrum->parsed()) {
            cmd_name = "spectrum";
            RealArg x0 = point(x0_text, cfg);
            SpectrumOptions so;
            so.holder = hopt;
            so.holder.params = series_params(cfg);
            so.depth = wdepth;
            table.columns = {"mu_target", "witness", "t_descriptor", "mu_hat", "alpha_hat", "prediction", "stderr",
                             "flagged"};
            for (const SpectrumRow& r : spectrum_scan(x0, mus, witnesses, so))
                table.add({r.mu_target, r.witness, r.t_descriptor, r.mu_hat, r.alpha_hat, r.prediction,
                           r.slope_stderr, r.flagged});
        }
        emit(table, cfg, cmd_name);
        return kOk;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return kPrecision;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kConvergence;
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kBudget;
    } catch (const not_applicable_error& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kNotApplicable;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGeneric;
    }
}
