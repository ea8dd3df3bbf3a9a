#include "rnd/numbers.hpp"

#include <cctype>
#include <cmath>

#include <gmp.h>

#include "rnd/errors.hpp"

namespace rnd {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// The string constructor reads a leading 0 as an octal prefix.
BigInt from_digits(std::string_view d) {
    while (d.size() > 1 && d.front() == '0') d.remove_prefix(1);
    if (d.empty()) return BigInt(0);
    return BigInt{std::string(d)};
}

BigInt parse_integer(std::string_view s) {
    std::string_view body = s;
    bool neg = false;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
        neg = body.front() == '-';
        body.remove_prefix(1);
    }
    if (!all_digits(body)) throw parse_error("not an integer: '" + std::string(s) + "'");
    BigInt v = from_digits(body);
    return neg ? BigInt(-v) : v;
}

BigInt pow10(unsigned e) {
    BigInt r;
    mpz_ui_pow_ui(r.backend().data(), 10, e);
    return r;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

BigRational parse_rational(std::string_view text, bool* was_decimal) {
    std::string_view s = trim(text);
    if (was_decimal) *was_decimal = false;
    if (s.empty()) throw parse_error("empty number");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(trim(s.substr(0, slash)));
        std::string_view den_text = trim(s.substr(slash + 1));
        if (!den_text.empty() && den_text.front() == '+') den_text.remove_prefix(1);
        BigInt den = parse_integer(den_text);
        if (den == 0) throw parse_error("zero denominator: '" + std::string(s) + "'");
        return BigRational(num, den);
    }

    std::string_view mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mant = s.substr(0, e);
        std::string_view ex = s.substr(e + 1);
        BigInt ev = parse_integer(ex);
        if (ev > 100000 || ev < -100000) throw parse_error("exponent out of range: '" + std::string(s) + "'");
        exp10 = ev.convert_to<long>();
        if (was_decimal) *was_decimal = true;
    }
    bool neg = false;
    if (!mant.empty() && (mant.front() == '+' || mant.front() == '-')) {
        neg = mant.front() == '-';
        mant.remove_prefix(1);
    }
    std::string digits;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
        std::string_view ip = mant.substr(0, dot), fp = mant.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
            throw parse_error("not a number: '" + std::string(s) + "'");
        digits = std::string(ip) + std::string(fp);
        exp10 -= static_cast<long>(fp.size());
        if (was_decimal) *was_decimal = true;
    } else {
        if (!all_digits(mant)) throw parse_error("not a number: '" + std::string(s) + "'");
        digits = std::string(mant);
    }
    BigInt num = from_digits(digits);
    if (neg) num = -num;
    if (exp10 >= 0) return BigRational(BigInt(num * pow10(static_cast<unsigned>(exp10))));
    return BigRational(num, pow10(static_cast<unsigned>(-exp10)));
}

std::string to_string(const BigInt& v) { return v.str(); }

std::string to_string(const BigRational& v) {
    BigInt n = boost::multiprecision::numerator(v), d = boost::multiprecision::denominator(v);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

double to_double(const BigRational& v) { return v.convert_to<double>(); }

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.backend().data(), a.backend().data(), b.backend().data());
    return q;
}

BigInt floor(const BigRational& v) {
    return floor_div(boost::multiprecision::numerator(v), boost::multiprecision::denominator(v));
}

BigRational frac(const BigRational& v) { return v - BigRational(floor(v)); }

BigInt round_nearest(const BigRational& v) { return floor(v + BigRational(1, 2)); }

double log_abs(const BigInt& v) {
    if (v == 0) return -INFINITY;
    long e = 0;
    double d = mpz_get_d_2exp(&e, v.backend().data());
    return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
}

HighPrecisionReal HighPrecisionReal::from_rational(const BigRational& v, int bits) {
    if (bits < 1 || bits > max_bits) throw domain_error("precision bits out of range");
    BigInt num = boost::multiprecision::numerator(v), den = boost::multiprecision::denominator(v);
    num <<= bits + 1;
    HighPrecisionReal r;
    r.bits_ = bits;
    r.raw_ = floor_div(num + den, BigInt(den * 2));
    r.check_range();
    return r;
}

HighPrecisionReal HighPrecisionReal::from_double(double v, int bits) {
    if (!std::isfinite(v)) throw domain_error("non-finite value");
    int e = 0;
    double m = std::frexp(v, &e);
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    BigRational q(mant);
    int shift = e - 53;
    BigInt p2 = 1;
    p2 <<= std::abs(shift);
    q = shift >= 0 ? q * BigRational(p2) : q / BigRational(p2);
    return from_rational(q, bits);
}

HighPrecisionReal HighPrecisionReal::from_raw(BigInt raw, int bits) {
    if (bits < 1 || bits > max_bits) throw domain_error("precision bits out of range");
    HighPrecisionReal r;
    r.raw_ = std::move(raw);
    r.bits_ = bits;
    r.check_range();
    return r;
}

void HighPrecisionReal::check_range() const {
    if (raw_ != 0 && static_cast<long>(mpz_sizeinbase(raw_.backend().data(), 2)) > bits_ + range_log2)
        throw precision_error("value outside the fixed-point range [-2^64, 2^64]");
}

double HighPrecisionReal::to_double() const {
    if (raw_ == 0) return 0.0;
    long e = 0;
    double d = mpz_get_d_2exp(&e, raw_.backend().data());
    return std::ldexp(d, static_cast<int>(e - bits_));
}

BigRational HighPrecisionReal::to_rational() const {
    BigInt den = 1;
    den <<= bits_;
    return BigRational(raw_, den);
}

HighPrecisionReal HighPrecisionReal::with_bits(int bits) const {
    if (bits < 1 || bits > max_bits) throw domain_error("precision bits out of range");
    if (bits >= bits_) return from_raw(BigInt(raw_ << (bits - bits_)), bits);
    return from_rational(to_rational(), bits);
}

HighPrecisionReal HighPrecisionReal::frac() const {
    BigInt r;
    mpz_fdiv_r_2exp(r.backend().data(), raw_.backend().data(), static_cast<mp_bitcnt_t>(bits_));
    return from_raw(r, bits_);
}

void HighPrecisionReal::frac_limbs(std::uint64_t* out, int limbs) const {
    static_assert(sizeof(mp_limb_t) == 8, "64-bit GMP limbs expected");
    BigInt r;
    mpz_fdiv_r_2exp(r.backend().data(), raw_.backend().data(), static_cast<mp_bitcnt_t>(bits_));
    int target = 64 * limbs;
    if (bits_ > target)
        r >>= bits_ - target;
    else
        r <<= target - bits_;
    for (int i = 0; i < limbs; ++i)
        out[limbs - 1 - i] = mpz_getlimbn(r.backend().data(), i);
}

std::string HighPrecisionReal::to_decimal(int digits) const {
    BigRational v = to_rational();
    bool neg = v < 0;
    if (neg) v = -v;
    BigInt ip = floor(v);
    BigInt scaled = round_nearest((v - BigRational(ip)) * BigRational(pow10(static_cast<unsigned>(digits))));
    BigInt lim = pow10(static_cast<unsigned>(digits));
    if (scaled >= lim) {
        scaled -= lim;
        ip += 1;
    }
    std::string fs = scaled.str();
    fs.insert(0, static_cast<std::size_t>(digits) - fs.size(), '0');
    return (neg ? "-" : "") + ip.str() + "." + fs;
}

HighPrecisionReal HighPrecisionReal::operator-() const { return from_raw(BigInt(-raw_), bits_); }

HighPrecisionReal operator+(const HighPrecisionReal& a, const HighPrecisionReal& b) {
    int bits = std::max(a.bits_, b.bits_);
    BigInt ra = a.raw_ << (bits - a.bits_), rb = b.raw_ << (bits - b.bits_);
    return HighPrecisionReal::from_raw(BigInt(ra + rb), bits);
}

HighPrecisionReal operator-(const HighPrecisionReal& a, const HighPrecisionReal& b) { return a + (-b); }

bool operator==(const HighPrecisionReal& a, const HighPrecisionReal& b) { return a.to_rational() == b.to_rational(); }

bool operator<(const HighPrecisionReal& a, const HighPrecisionReal& b) { return a.to_rational() < b.to_rational(); }

}  // namespace rnd
