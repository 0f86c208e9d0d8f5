#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace levelset {

/// Empirical mean of x^p with a 95% percentile-bootstrap interval.
struct MomentEstimate {
    double point_estimate = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long long n = 0;
    int p = 1;

    double ci_width() const { return ci_high - ci_low; }
};

inline constexpr int kBootstrapResamples = 500;

/// Mean of values^p. The bootstrap resampler is seeded by `seed`; the
/// interval is widened if needed so it contains the point estimate.
MomentEstimate estimate_moment(std::span<const double> values, int p, std::uint64_t seed,
                               int resamples = kBootstrapResamples);

/// Number of worker threads used by parallel loops (>= 1).
int thread_count();
void set_thread_count(int threads);

/// Calls body(i) for i in [0, n) on thread_count() workers. Each index is
/// visited exactly once; callers store results by index so the outcome does
/// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Shortest round-trip decimal form ("%.17g"); "inf"/"-inf"/"nan" spelled out.
std::string format_real(double x);

}  // namespace levelset
