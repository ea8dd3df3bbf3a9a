#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace rnd {

using ComplexValue = std::complex<double>;

// Neumaier compensated sum.
class Compensated {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplex {
public:
    void add(ComplexValue z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    ComplexValue value() const { return {re_.value(), im_.value()}; }

private:
    Compensated re_, im_;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
};

// Ordinary least squares y ~ slope * x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Least squares y ~ a * f + b * g (no intercept); returns {a, b, r_squared}.
struct TwoTermFit {
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;
};
TwoTermFit two_term_fit(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& y);

// Worker count used by every parallel loop in the library; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, count). Each index is handled exactly once;
// callers write to per-index slots so the result does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rnd
