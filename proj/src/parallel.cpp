#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rnd/errors.hpp"
#include "rnd/numeric.hpp"

namespace rnd {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads = n; }

unsigned thread_count() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw domain_error("linear_fit needs at least two paired points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw domain_error("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
    }
    f.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
    f.slope_stderr = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    return f;
}

TwoTermFit two_term_fit(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 3 || f.size() != n || g.size() != n) throw domain_error("two_term_fit needs at least three points");
    double ff = 0, fg = 0, gg = 0, fy = 0, gy = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ff += f[i] * f[i];
        fg += f[i] * g[i];
        gg += g[i] * g[i];
        fy += f[i] * y[i];
        gy += g[i] * y[i];
        my += y[i];
    }
    my /= static_cast<double>(n);
    double det = ff * gg - fg * fg;
    if (det == 0) throw domain_error("two_term_fit: singular system");
    TwoTermFit r;
    r.a = (fy * gg - gy * fg) / det;
    r.b = (gy * ff - fy * fg) / det;
    double sse = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - r.a * f[i] - r.b * g[i];
        sse += e * e;
        syy += (y[i] - my) * (y[i] - my);
    }
    r.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
    return r;
}

}  // namespace rnd
