#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace rnd {

using BigInt = boost::multiprecision::mpz_int;
// GMP rationals are kept in lowest terms with a positive denominator.
using BigRational = boost::multiprecision::mpq_rational;

// Accepts "P/Q", integers and decimals with optional exponent ("-1.25e-3").
// Decimal input is converted exactly; *was_decimal reports whether it was one.
BigRational parse_rational(std::string_view text, bool* was_decimal = nullptr);

std::string to_string(const BigInt& v);
std::string to_string(const BigRational& v);
double to_double(const BigRational& v);

BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt floor(const BigRational& v);
// v - floor(v), in [0, 1).
BigRational frac(const BigRational& v);
BigInt round_nearest(const BigRational& v);

// ln|v| for a nonzero big integer without overflow.
double log_abs(const BigInt& v);

// Fixed-point real raw * 2^-bits.
class HighPrecisionReal {
public:
    static constexpr int default_bits = 256;
    static constexpr int max_bits = 1024;
    static constexpr int range_log2 = 64;

    HighPrecisionReal() = default;

    static HighPrecisionReal from_rational(const BigRational& v, int bits = default_bits);
    static HighPrecisionReal from_double(double v, int bits = default_bits);
    static HighPrecisionReal from_raw(BigInt raw, int bits);

    int bits() const { return bits_; }
    const BigInt& raw() const { return raw_; }

    double to_double() const;
    BigRational to_rational() const;
    HighPrecisionReal with_bits(int bits) const;
    // Value mod 1, in [0, 1).
    HighPrecisionReal frac() const;
    // Value mod 1 as limbs of 64 bits, most significant first, truncated.
    void frac_limbs(std::uint64_t* out, int limbs) const;
    std::string to_decimal(int digits = 40) const;

    HighPrecisionReal operator-() const;
    friend HighPrecisionReal operator+(const HighPrecisionReal& a, const HighPrecisionReal& b);
    friend HighPrecisionReal operator-(const HighPrecisionReal& a, const HighPrecisionReal& b);
    friend bool operator==(const HighPrecisionReal& a, const HighPrecisionReal& b);
    friend bool operator<(const HighPrecisionReal& a, const HighPrecisionReal& b);

private:
    void check_range() const;

    BigInt raw_{0};
    int bits_ = default_bits;
};

}  // namespace rnd
