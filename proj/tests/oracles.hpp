#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

// Independent reference computations shared by the unit tests.
namespace oracle {

using Float50 = boost::multiprecision::cpp_bin_float_50;

inline constexpr double kPi = 3.14159265358979323846;

// G(p, m, q) by direct summation with residues reduced in integers.
inline std::complex<long double> gauss_direct(std::int64_t p, std::int64_t m, std::int64_t q) {
    std::complex<long double> s = 0;
    for (std::int64_t r = 0; r < q; ++r) {
        std::int64_t e = ((p % q + q) % q * ((r * r) % q) % q + (m % q + q) % q * r) % q;
        long double ang = 2.0L * 3.14159265358979323846264338327950288L * e / q;
        s += std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

// Truncated R_{x0}(t) in 50-digit binary floating point.
inline std::complex<double> riemann_direct(const Float50& x0, const Float50& t, std::int64_t n_max) {
    const Float50 two_pi = 2 * boost::math::constants::pi<Float50>();
    Float50 re = 0, im = 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        Float50 nn = n;
        Float50 base = two_pi * nn * nn * t;
        Float50 shift = two_pi * nn * x0;
        // n and -n together: e^{i a}(e^{i b} + e^{-i b}) / n^2
        Float50 w = 2 * cos(shift) / (nn * nn);
        re += w * cos(base);
        im += w * sin(base);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

inline std::uint64_t phi_naive(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1) ++c;
    return c;
}

}  // namespace oracle
