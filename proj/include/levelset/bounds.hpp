#pragma once

#include <optional>
#include <variant>

namespace levelset::bounds {

/// Moment order of the highest derivative: a finite integer or "arbitrarily
/// large" (the Gaussian situation, where every moment of the sup-norm exists).
struct MomentOrder {
    static MomentOrder finite(int m) { return MomentOrder{m, false}; }
    static MomentOrder infinite() { return MomentOrder{0, true}; }

    int value = 1;
    bool is_infinite = false;
};

/// Inputs of the explicit crossing-moment bound.
///
/// k: paths are C^k (k >= 2). h: number of derivatives in the bounded joint
/// density (0 <= h <= k). m: moment order of |X^(k)|_inf, bounded by d_m.
/// c: joint density bound. domain_size: interval length (or ball radius for
/// the ball variant; ignored on the unit sphere). alpha: optional exponent;
/// the midpoint of the admissible window is used when absent.
struct BoundParams {
    int k = 2;
    int h = 0;
    int m = 1;
    int p = 1;
    double c = 0.0;
    double d_m = 0.0;
    double domain_size = 1.0;
    std::optional<double> alpha;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Partial sum of a positive series with a certified bracket:
/// the true value lies in [value, value + tail_bound].
struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
    long long terms_used = 0;
};

struct OpenInterval {
    double lo = 0.0;
    double hi = 0.0;
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo < x && x < hi; }
};

/// Largest integer p satisfying the strict finiteness condition
///   p < (k - h/2 - 1/(1+h)) / (1/m + 1/(1+h)),
/// or p < (k - h/2)(h+1) - 1 for infinite m. Exact rational arithmetic.
/// Empty when no p >= 1 qualifies.
std::optional<int> feasible_p_max(int k, int h, MomentOrder m);

/// True iff p satisfies the strict condition above.
bool is_feasible(int k, int h, MomentOrder m, int p);

/// Window (p/m, k - h/2 - (1+p)/(1+h)) for the exponent alpha.
/// Throws InfeasibleError when the window is empty.
OpenInterval alpha_interval(int k, int h, int m, int p);

/// p (k-1)^(p-1) * sum_{a>=1} (a+1)^(p-1) a^(-m alpha).
/// Throws InfeasibleError if m alpha - (p-1) <= 1, NumericError if the
/// tolerance is not reachable within max_terms terms.
SeriesValue series_e(double alpha, int k, int m, int p, double tol, long long max_terms = 10'000'000);

/// 2^((h+1)(1+h/2-k)) / (k! (k-h)!) * sum_{a>=1} (a+1)^(p-1) a^(1-(h+1)(k-h/2-alpha)).
SeriesValue series_d(double alpha, int k, int h, int p, double tol, long long max_terms = 10'000'000);

/// Resolved alpha for params: the explicit value (validated against the
/// window) or the window midpoint.
double resolve_alpha(const BoundParams& params);

/// Breakdown of the three summands of the bound.
struct BoundBreakdown {
    double alpha = 0.0;
    SeriesValue e;
    SeriesValue d;
    double base = 0.0;        // (k-1)^p
    double moment_term = 0.0; // D_m * E
    double density_term = 0.0;// C * L^((h+1)(k-h/2)) * D
    double scale = 1.0;       // c^p or beta^p for balls and spheres
    double total = 0.0;
};

/// (k-1)^p + D_m E + C |I|^((h+1)(k-h/2)) D, evaluated with the upper end of
/// each series bracket so the result is an upper bound.
double moment_bound_interval(const BoundParams& params, double tol = 1e-10);
BoundBreakdown moment_bound_interval_breakdown(const BoundParams& params, double tol = 1e-10);

struct Ball {
    int d = 2;
    double a = 1.0;
};
struct Sphere {
    int d = 2;
};
using Domain = std::variant<Ball, Sphere>;

/// pi^(d/2)/Gamma(d/2) a^(d-1) for the ball (half the area of its boundary
/// sphere); pi^(d/2)/Gamma(d/2) for great-circle probes of S^d.
double crofton_constant(const Domain& domain);

/// c_{d-1}(a)^p times the interval bound with |I| = 2a.
double moment_bound_ball(const BoundParams& params, int d, double a, double tol = 1e-10);
BoundBreakdown moment_bound_ball_breakdown(const BoundParams& params, int d, double a, double tol = 1e-10);

/// beta_{2,d+1}^p times the interval bound with |I| = 2 pi.
double moment_bound_sphere(const BoundParams& params, int d, double tol = 1e-10);
BoundBreakdown moment_bound_sphere_breakdown(const BoundParams& params, int d, double tol = 1e-10);

}  // namespace levelset::bounds
