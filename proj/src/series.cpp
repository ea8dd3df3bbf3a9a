#include "rnd/series.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <x86intrin.h>

#include "rnd/errors.hpp"

namespace rnd {

namespace {

using u128 = unsigned __int128;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTwoPow64 = 18446744073709551616.0;
constexpr std::uint64_t kChunk = 1u << 16;
constexpr std::uint64_t kMaxNMax = std::uint64_t{1} << 40;

// e^{2 pi i f / 2^64} from the top 10 bits, the next 10 bits, and a cubic
// Taylor step on the remaining 44 bits (angle below 2 pi 2^-20).
struct ExpTables {
    std::array<double, 1024> c1, s1, c2, s2;
    ExpTables() {
        const long double tau = 2.0L * std::numbers::pi_v<long double>;
        for (int j = 0; j < 1024; ++j) {
            long double a = tau * j / 1024.0L, b = tau * j / 1048576.0L;
            c1[j] = static_cast<double>(std::cos(a));
            s1[j] = static_cast<double>(std::sin(a));
            c2[j] = static_cast<double>(std::cos(b));
            s2[j] = static_cast<double>(std::sin(b));
        }
    }
};

const ExpTables& tables() {
    static const ExpTables tb;
    return tb;
}

struct Cx {
    double re, im;
};

inline Cx expi_frac(std::uint64_t f, const ExpTables& tb) {
    unsigned i1 = static_cast<unsigned>(f >> 54), i2 = static_cast<unsigned>((f >> 44) & 1023u);
    double r = static_cast<double>(f & ((std::uint64_t{1} << 44) - 1)) * (kTwoPi / kTwoPow64);
    double r2 = r * r;
    double cr = 1.0 - 0.5 * r2, ci = r * (1.0 - r2 * (1.0 / 6.0));
    double ar = tb.c1[i1] * tb.c2[i2] - tb.s1[i1] * tb.s2[i2];
    double ai = tb.c1[i1] * tb.s2[i2] + tb.s1[i1] * tb.c2[i2];
    return {ar * cr - ai * ci, ar * ci + ai * cr};
}

// Branch-free compensated sum (Knuth two-sum per step).
struct Neumaier2 {
    double s_re = 0, c_re = 0, s_im = 0, c_im = 0;
    static inline void step(double& s, double& c, double x) {
        double t = s + x;
        double z = t - s;
        c += (s - (t - z)) + (x - z);
        s = t;
    }
    inline void add(double re, double im) {
        step(s_re, c_re, re);
        step(s_im, c_im, im);
    }
    ComplexValue value() const { return {s_re + c_re, s_im + c_im}; }
};

// Limbs are most significant first and represent a value in [0, 1).
template <int L>
inline void add_mod1(std::uint64_t* a, const std::uint64_t* b) {
    unsigned char carry = 0;
    for (int i = L - 1; i >= 0; --i) {
        unsigned long long out;
        carry = _addcarry_u64(carry, a[i], b[i], &out);
        a[i] = out;
    }
}

template <int L>
inline void add_at(std::uint64_t* le, int pos, u128 v) {
    for (int j = pos; j < L && v != 0; ++j) {
        u128 s = static_cast<u128>(le[j]) + static_cast<std::uint64_t>(v);
        le[j] = static_cast<std::uint64_t>(s);
        v = (v >> 64) + (s >> 64);
    }
}

// out = (f * k) mod 1.
template <int L>
void mul_mod1(const std::uint64_t* f, u128 k, std::uint64_t* out) {
    std::uint64_t le[L], res[L];
    for (int i = 0; i < L; ++i) {
        le[i] = f[L - 1 - i];
        res[i] = 0;
    }
    auto klo = static_cast<std::uint64_t>(k), khi = static_cast<std::uint64_t>(k >> 64);
    for (int i = 0; i < L; ++i) {
        add_at<L>(res, i, static_cast<u128>(le[i]) * klo);
        if (i + 1 < L && khi) add_at<L>(res, i + 1, static_cast<u128>(le[i]) * khi);
    }
    for (int i = 0; i < L; ++i) out[L - 1 - i] = res[i];
}

// Cosine factor 2 cos(2 pi n x0): a periodic table for rational x0 with a
// small denominator, otherwise the fixed-point phase n x0 mod 1.
struct CosineSource {
    const std::vector<double>* table = nullptr;  // 2 cos(2 pi j / Q), j < Q
    bool has_x = false;
};

// Pairs n and -n give 2 cos(2 pi n x0) e^{2 pi i n^2 t} / n^2. Terms are
// added plainly in blocks of 32 and the block sums are compensated.
template <int L>
ComplexValue chunk_fixed(const std::uint64_t* tf, const std::uint64_t* xf, const CosineSource& cs,
                         std::uint64_t n0, std::uint64_t n1) {
    const ExpTables& tb = tables();
    std::uint64_t A[L], D[L], T2[L], X[L];
    mul_mod1<L>(tf, static_cast<u128>(n0) * n0, A);
    mul_mod1<L>(tf, 2 * static_cast<u128>(n0) + 1, D);
    mul_mod1<L>(tf, 2, T2);
    mul_mod1<L>(xf, n0, X);
    const std::size_t period = cs.table ? cs.table->size() : 1;
    std::size_t idx = cs.table ? static_cast<std::size_t>(n0 % period) : 0;
    Neumaier2 acc;
    std::uint64_t n = n0;
    while (n <= n1) {
        std::uint64_t stop = std::min(n1, n + 31);
        double bre = 0, bim = 0;
        for (; n <= stop; ++n) {
            Cx e = expi_frac(A[0], tb);
            double dn = static_cast<double>(n);
            double w = 1.0 / (dn * dn);
            if (cs.table) {
                w *= (*cs.table)[idx];
                if (++idx == period) idx = 0;
            } else if (cs.has_x) {
                w *= 2.0 * expi_frac(X[0], tb).re;
                add_mod1<L>(X, xf);
            } else {
                w *= 2.0;
            }
            bre += w * e.re;
            bim += w * e.im;
            add_mod1<L>(A, D);
            add_mod1<L>(D, T2);
        }
        acc.add(bre, bim);
    }
    return acc.value();
}

struct Residue {
    std::uint64_t num;  // in [0, den)
    std::uint64_t den;
};

ComplexValue chunk_rational(Residue t, Residue x, std::uint64_t n0, std::uint64_t n1) {
    const ExpTables& tb = tables();
    const std::uint64_t b = t.den, d = x.den;
    const long double inv_b = 1.0L / b, inv_d = 1.0L / d;
    auto mulmod = [](std::uint64_t u, std::uint64_t v, std::uint64_t m) {
        return static_cast<std::uint64_t>(static_cast<u128>(u) * v % m);
    };
    auto to_frac = [](std::uint64_t r, long double inv) {
        long double f = static_cast<long double>(r) * inv * 18446744073709551616.0L;
        return f >= 18446744073709551615.0L ? ~std::uint64_t{0} : static_cast<std::uint64_t>(f);
    };
    std::uint64_t nb = n0 % b;
    std::uint64_t A = mulmod(mulmod(nb, nb, b), t.num, b);
    std::uint64_t D = mulmod((2 * static_cast<u128>(n0) + 1) % b, t.num, b);
    std::uint64_t T2 = mulmod(2, t.num, b);
    std::uint64_t X = mulmod(n0 % d, x.num, d);
    const bool has_x = x.num != 0;
    Neumaier2 acc;
    for (std::uint64_t n = n0; n <= n1; ++n) {
        Cx e = expi_frac(to_frac(A, inv_b), tb);
        double dn = static_cast<double>(n);
        double w = 2.0 / (dn * dn);
        if (has_x) {
            w *= expi_frac(to_frac(X, inv_d), tb).re;
            X += x.num;
            if (X >= d) X -= d;
        }
        acc.add(w * e.re, w * e.im);
        A += D;
        if (A >= b) A -= b;
        D += T2;
        if (D >= b) D -= b;
    }
    return acc.value();
}

template <typename ChunkFn>
ComplexValue sum_chunks(std::uint64_t n_max, ChunkFn fn) {
    std::uint64_t chunks = (n_max + kChunk - 1) / kChunk;
    std::vector<ComplexValue> parts(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        std::uint64_t n0 = 1 + c * kChunk;
        std::uint64_t n1 = std::min(n_max, (c + 1) * kChunk);
        parts[c] = fn(n0, n1);
    });
    CompensatedComplex total;
    for (const auto& p : parts) total.add(p);
    return total.value();
}

template <int L>
ComplexValue eval_fixed_impl(const HighPrecisionReal& x0, const HighPrecisionReal& t, const std::vector<double>* table,
                             std::uint64_t n_max) {
    std::uint64_t tf[L], xf[L];
    t.frac_limbs(tf, L);
    x0.frac_limbs(xf, L);
    CosineSource cs{table, false};
    for (int i = 0; i < L; ++i) cs.has_x |= xf[i] != 0;
    return sum_chunks(n_max, [&](std::uint64_t n0, std::uint64_t n1) {
        return chunk_fixed<L>(tf, xf, cs, n0, n1);
    });
}

ComplexValue eval_fixed(const HighPrecisionReal& x0, const HighPrecisionReal& t, const std::vector<double>* table,
                        std::uint64_t n_max, int bits) {
    switch ((bits + 63) / 64) {
        case 1: return eval_fixed_impl<1>(x0, t, table, n_max);
        case 2: return eval_fixed_impl<2>(x0, t, table, n_max);
        case 3: return eval_fixed_impl<3>(x0, t, table, n_max);
        case 4: return eval_fixed_impl<4>(x0, t, table, n_max);
        case 5: return eval_fixed_impl<5>(x0, t, table, n_max);
        case 6: return eval_fixed_impl<6>(x0, t, table, n_max);
        case 7: return eval_fixed_impl<7>(x0, t, table, n_max);
        case 8: return eval_fixed_impl<8>(x0, t, table, n_max);
        default: throw domain_error("series kernel supports at most 512 fractional bits");
    }
}

constexpr std::uint64_t kCosineTableLimit = 1u << 16;

// 2 cos(2 pi j P / Q) for j < Q, from exact residues.
std::vector<double> cosine_table(const BigRational& x0) {
    BigInt num = boost::multiprecision::numerator(x0), den = boost::multiprecision::denominator(x0);
    auto Q = den.convert_to<std::uint64_t>();
    BigInt r;
    mpz_fdiv_r(r.backend().data(), num.backend().data(), den.backend().data());
    auto P = r.convert_to<std::uint64_t>();
    std::vector<double> tab(Q);
    const long double tau = 2.0L * std::numbers::pi_v<long double>;
    for (std::uint64_t j = 0; j < Q; ++j)
        tab[j] = static_cast<double>(2.0L * std::cos(tau * static_cast<long double>(j * P % Q) / Q));
    return tab;
}

constexpr std::uint64_t kResidueLimit = std::uint64_t{1} << 62;

bool small_residue(const BigRational& v, Residue& out) {
    BigInt den = boost::multiprecision::denominator(v);
    if (den >= kResidueLimit) return false;
    BigInt num = boost::multiprecision::numerator(v);
    BigInt r;
    mpz_fdiv_r(r.backend().data(), num.backend().data(), den.backend().data());
    out.num = r.convert_to<std::uint64_t>();
    out.den = den.convert_to<std::uint64_t>();
    return true;
}

void check_params(const SeriesParams& p) {
    if (p.n_max < 1) throw domain_error("n_max must be >= 1");
    if (p.n_max > kMaxNMax) throw budget_error("n_max above 2^40 is not supported");
    if (p.precision_bits < 1 || p.precision_bits > 512) throw domain_error("precision_bits must be in [1, 512]");
}

void check_phase_precision(const SeriesParams& p) {
    // Rounding t to 2^-bits moves n^2 t by n_max^2 2^-bits; keep that below 2^-64.
    double need = 2.0 * std::log2(static_cast<double>(p.n_max)) + 64.0;
    if (need > p.precision_bits)
        throw precision_error("n_max^2 * t exceeds the fixed-point phase range at " +
                              std::to_string(p.precision_bits) + " fractional bits");
}

}  // namespace

HighPrecisionReal to_fixed(const RealArg& v, int bits) {
    if (auto q = std::get_if<BigRational>(&v)) return HighPrecisionReal::from_rational(*q, bits);
    const auto& h = std::get<HighPrecisionReal>(v);
    return h.bits() == bits ? h : h.with_bits(bits);
}

double to_double(const RealArg& v) {
    if (auto q = std::get_if<BigRational>(&v)) return to_double(*q);
    return std::get<HighPrecisionReal>(v).to_double();
}

RealArg add(const RealArg& a, const RealArg& b) {
    auto qa = std::get_if<BigRational>(&a);
    auto qb = std::get_if<BigRational>(&b);
    if (qa && qb) return BigRational(*qa + *qb);
    int bits = std::max(qa ? 0 : std::get<HighPrecisionReal>(a).bits(), qb ? 0 : std::get<HighPrecisionReal>(b).bits());
    return to_fixed(a, bits) + to_fixed(b, bits);
}

SeriesValue eval_R(const RealArg& x0, const RealArg& t, const SeriesParams& params) {
    check_params(params);
    SeriesValue out;
    out.tail_bound = 4.0 / static_cast<double>(params.n_max);
    auto qx = std::get_if<BigRational>(&x0);
    auto qt = std::get_if<BigRational>(&t);
    Residue rx{}, rt{};
    if (qx && qt && small_residue(*qx, rx) && small_residue(*qt, rt)) {
        out.value = sum_chunks(params.n_max, [&](std::uint64_t n0, std::uint64_t n1) {
            return chunk_rational(rt, rx, n0, n1);
        });
        return out;
    }
    check_phase_precision(params);
    std::vector<double> table;
    if (qx && boost::multiprecision::denominator(*qx) <= kCosineTableLimit) table = cosine_table(*qx);
    out.value = eval_fixed(to_fixed(x0, params.precision_bits), to_fixed(t, params.precision_bits),
                           table.empty() ? nullptr : &table, params.n_max, params.precision_bits);
    return out;
}

namespace {
constexpr std::uint64_t kExactPeriodLimit = std::uint64_t{1} << 28;

bool exact_period(const BigRational& x0, const BigRational& t, std::uint64_t& period) {
    BigInt b = boost::multiprecision::denominator(t), d = boost::multiprecision::denominator(x0);
    BigInt l = boost::multiprecision::lcm(b, d);
    if (l > kExactPeriodLimit) return false;
    period = l.convert_to<std::uint64_t>();
    return true;
}
}  // namespace

bool exact_available(const BigRational& x0, const BigRational& t) {
    std::uint64_t p = 0;
    return exact_period(x0, t, p);
}

ComplexValue eval_R_exact(const BigRational& x0, const BigRational& t) {
    std::uint64_t L = 0;
    if (!exact_period(x0, t, L)) throw budget_error("eval_R_exact: period lcm(den t, den x0) exceeds 2^28");
    Residue rt{}, rx{};
    small_residue(t, rt);
    small_residue(x0, rx);
    // Sum over n = r + kL, k in Z, of 1/n^2 is pi^2 / (L^2 sin^2(pi r / L)).
    const double pi = std::numbers::pi;
    const double scale = pi * pi / (static_cast<double>(L) * static_cast<double>(L));
    auto phase = [&](std::uint64_t r, bool neg) {
        std::uint64_t rb = r % rt.den;
        auto q = static_cast<std::uint64_t>(static_cast<u128>(rb) * rb % rt.den * rt.num % rt.den);
        std::uint64_t xr = static_cast<std::uint64_t>(static_cast<u128>(r % rx.den) * rx.num % rx.den);
        if (neg && xr) xr = rx.den - xr;
        long double f = static_cast<long double>(q) / rt.den + static_cast<long double>(xr) / rx.den;
        f -= std::floor(f);
        double a = static_cast<double>(2.0L * std::numbers::pi_v<long double> * f);
        return ComplexValue(std::cos(a), std::sin(a));
    };
    CompensatedComplex acc;
    acc.add(scale / 3.0);
    for (std::uint64_t r = 1; 2 * r <= L; ++r) {
        double s = std::sin(pi * static_cast<double>(r) / static_cast<double>(L));
        double w = scale / (s * s);
        if (2 * r == L) {
            acc.add(w * phase(r, false));
        } else {
            // Residue classes r and L - r, i.e. n and -n.
            acc.add(w * (phase(r, false) + phase(r, true)));
        }
    }
    return acc.value();
}

SeriesValue eval_phi_traj(const RealArg& x0, const RealArg& t, const SeriesParams& params) {
    double xd = to_double(x0);
    if (!(xd >= 0.0 && xd < 1.0)) throw domain_error("eval_phi_traj requires 0 <= x0 < 1");
    SeriesValue r = eval_R(x0, t, params);
    const double pi = std::numbers::pi;
    double td = to_double(t);
    r.value += ComplexValue(-2.0 * pi * pi * (xd * xd - xd + 1.0 / 6.0), 2.0 * pi * td);
    return r;
}

std::vector<TrajectoryRow> trajectory_grid(const RealArg& x0, std::size_t t_count, const SeriesParams& params) {
    if (t_count < 2) throw domain_error("trajectory_grid requires t_count >= 2");
    std::vector<TrajectoryRow> rows(t_count);
    // Parallelism lives inside eval_R; the grid itself is assembled in order.
    for (std::size_t j = 0; j < t_count; ++j) {
        BigRational tj(static_cast<long long>(j), static_cast<long long>(t_count - 1));
        SeriesValue v = eval_phi_traj(x0, RealArg(tj), params);
        rows[j] = {to_double(tj), v.value.real(), v.value.imag()};
    }
    return rows;
}

}  // namespace rnd
