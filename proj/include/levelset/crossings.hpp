#pragma once

#include <span>
#include <vector>

#include "levelset/field.hpp"
#include "levelset/simulate.hpp"

namespace levelset {

struct CrossingCount {
    long long count = 0;
    std::vector<double> refined_roots;
    double resolution = 0.0;
    /// Two roots closer than twice the grid step, or a cell that could not be
    /// cleared after full subdivision: some pair of roots may be missing.
    bool undercount_flag = false;
    /// X - u vanishes along the whole probe; nothing is counted.
    bool degenerate = false;
};

struct CountingParams {
    double base_step = 1e-3;
    double refine_tol = 1e-10;
};

/// Number of t in [lo, hi] with X(t) = u, by sign changes on a grid of step
/// at most base_step, adaptive subdivision of cells that cannot be cleared
/// from the endpoint values and slopes, and bisection to refine_tol.
/// Touch points without a sign change are not counted. A root exactly at an
/// endpoint is counted once. With `periodic`, [lo, hi) is a circle.
CrossingCount count_crossings(const Path& path, double lo, double hi, double u, double base_step, double refine_tol,
                              bool periodic = false);

inline CrossingCount count_crossings(const Path& path, double lo, double hi, double u, const CountingParams& p,
                                     bool periodic = false) {
    return count_crossings(path, lo, hi, u, p.base_step, p.refine_tol, periodic);
}

struct SupNorm {
    double value = 0.0;
    /// True when the next derivative was available to bound the grid error.
    bool certified = false;
};

/// Grid max of |X^(order)|, plus (step/2) max |X^(order+1)| when available.
SupNorm sup_norm_derivative(const PathSample& sample, int order);

/// (1/2 delta) int_I |X'(t)| 1{|X(t) - u| <= delta} dt. Each cell of width at
/// most quad_step is split at interior critical points and the integral over
/// each monotone piece is the length of its image inside [u - delta, u + delta].
double kac_counter(const Path& path, double lo, double hi, double u, double delta, double quad_step);

/// Crossings along the chord y + t v of the ball of radius a, |t| <= sqrt(a^2 - |y|^2).
CrossingCount crossings_along_line(const Field& field, std::span<const double> v, std::span<const double> y, double a,
                                   double u, double base_step, double refine_tol);

/// Crossings of theta -> X(cos(theta) e1 + sin(theta) e2) on the full circle.
CrossingCount crossings_along_great_circle(const Field& field, std::span<const double> e1, std::span<const double> e2,
                                           double u, double base_step, double refine_tol);

}  // namespace levelset
