#pragma once

#include <cstdint>
#include <vector>

#include "levelset/bounds.hpp"
#include "levelset/crossings.hpp"
#include "levelset/field.hpp"
#include "levelset/stats.hpp"

namespace levelset {

/// Random probes for a Crofton estimate: chords of the ball D_a or great
/// circles of S^d.
struct CroftonPlan {
    long long n_probes = 10000;
    std::uint64_t seed = 0;
    bounds::Domain domain = bounds::Ball{2, 1.0};
    double base_step = 1e-2;
    double refine_tol = 1e-10;

    void validate() const;
    int dimension() const;
};

struct CroftonResult {
    /// c * (mean crossing count per probe), over non-degenerate probes.
    MomentEstimate estimate;
    long long degenerate_probes = 0;
    long long flagged_probes = 0;
    /// Crossing count of every probe in index order (-1 for degenerate).
    std::vector<long long> counts;
};

/// One chord of D_a: v uniform on S^(d-1), y uniform on the (d-1)-ball v^perp cap D_a.
struct LineProbe {
    std::vector<double> v, y;
};
LineProbe draw_line_probe(int d, double a, std::uint64_t seed);

/// Orthonormal pair spanning a uniform random 2-plane of R^(d+1).
struct PlaneProbe {
    std::vector<double> e1, e2;
};
PlaneProbe draw_plane_probe(int ambient, std::uint64_t seed);

CroftonResult estimate_level_measure_ball(const Field& field, double u, const CroftonPlan& plan);
CroftonResult estimate_level_measure_sphere(const Field& field, double u, const CroftonPlan& plan);
/// Dispatches on plan.domain.
CroftonResult estimate_level_measure(const Field& field, double u, const CroftonPlan& plan);

struct MeasureMoment {
    /// Mean of (per-field estimate)^p.
    MomentEstimate moment;
    /// c^p * mean of count^p over all probes of all fields; dominates the
    /// moment by Jensen's inequality.
    double jensen_proxy = 0.0;
    std::vector<double> per_field;
    /// Largest inner relative standard error; above 0.1 the outer moment is
    /// dominated by probe noise.
    double max_inner_relative_error = 0.0;
    bool inner_error_warning = false;
};

/// Outer Monte Carlo over n_fields realizations; field i uses seed
/// mix64(plan.seed, i) and its probes are seeded from that.
MeasureMoment estimate_measure_pth_moment(const FieldSpec& spec, double u, int p, long long n_fields,
                                          const CroftonPlan& plan);

}  // namespace levelset
