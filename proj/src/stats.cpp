#include "levelset/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "levelset/rng.hpp"

namespace levelset {

namespace {
std::atomic<int> g_threads{1};
}

MomentEstimate estimate_moment(std::span<const double> values, int p, std::uint64_t seed, int resamples) {
    if (values.empty()) throw std::invalid_argument("moment estimate needs at least one value");
    if (p < 1) throw std::invalid_argument("moment order must be >= 1");
    const std::size_t n = values.size();
    std::vector<double> powered(n);
    for (std::size_t i = 0; i < n; ++i) powered[i] = std::pow(values[i], p);

    MomentEstimate e;
    e.n = static_cast<long long>(n);
    e.p = p;
    const bool constant = std::all_of(powered.begin(), powered.end(), [&](double v) { return v == powered[0]; });
    double mean = 0.0;
    for (double v : powered) mean += v;
    mean = constant ? powered[0] : mean / static_cast<double>(n);
    double ss = 0.0;
    if (!constant)
        for (double v : powered) ss += (v - mean) * (v - mean);
    e.point_estimate = mean;
    e.std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;

    if (ss == 0.0 || n == 1 || resamples < 2) {
        e.ci_low = e.ci_high = mean;
        return e;
    }
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += powered[pick(rng)];
        m = s / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const double f = pos - static_cast<double>(i);
        return i + 1 < means.size() ? means[i] * (1.0 - f) + means[i + 1] * f : means[i];
    };
    e.ci_low = std::min(quantile(0.025), mean);
    e.ci_high = std::max(quantile(0.975), mean);
    return e;
}

int thread_count() { return g_threads.load(); }

void set_thread_count(int threads) {
    if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
    g_threads.store(threads);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace levelset
