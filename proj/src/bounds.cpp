#include "levelset/bounds.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "levelset/errors.hpp"

namespace levelset::bounds {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int j) {
    double b = 1.0;
    for (int i = 1; i <= j; ++i) b = b * (n - j + i) / i;
    return b;
}

void check_kh(int k, int h) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (h < 0 || h > k) throw std::invalid_argument("h must satisfy 0 <= h <= k");
}

// Term (a+1)^(p-1) a^(-s) of the generic series; nonincreasing in a >= 1
// whenever s > p - 1.
double term(double a, int p, double s) { return std::pow(a + 1.0, p - 1) * std::pow(a, -s); }

// Integral of (x+1)^(p-1) x^(-s) over [x0, inf), binomial expansion; needs s > p.
double tail_integral(double x0, int p, double s) {
    double total = 0.0;
    for (int j = 0; j <= p - 1; ++j) total += binomial(p - 1, j) * std::pow(x0, j - s + 1.0) / (s - j - 1.0);
    return total;
}

// sum_{a>=1} (a+1)^(p-1) a^(-s) scaled by `prefactor`, bracketed to `tol`.
//
// With f nonincreasing, S_A + int_{A+1}^inf f <= S <= S_A + int_A^inf f, and
// the bracket width int_A^{A+1} f is at most f(A). The cutoff A is the
// smallest integer with prefactor * f(A) <= tol / 2.
SeriesValue bracketed_series(double prefactor, int p, double s, double tol, long long max_terms) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const double target = 0.5 * tol / prefactor;
    if (term(1.0, p, s) > target) {
        long long hi = 2;
        while (term(static_cast<double>(hi), p, s) > target) {
            if (hi > max_terms) {
                std::ostringstream os;
                os << "series tolerance " << tol << " not reachable within " << max_terms << " terms";
                throw NumericError(os.str());
            }
            hi *= 2;
        }
        long long lo = hi / 2;
        while (hi - lo > 1) {
            const long long mid = lo + (hi - lo) / 2;
            if (term(static_cast<double>(mid), p, s) > target) lo = mid;
            else hi = mid;
        }
        if (hi > max_terms) {
            std::ostringstream os;
            os << "series tolerance " << tol << " needs " << hi << " terms, budget is " << max_terms;
            throw NumericError(os.str());
        }
        const long long cutoff = hi;
        // Smallest terms first, Kahan-compensated.
        double sum = 0.0, comp = 0.0;
        for (long long a = cutoff; a >= 1; --a) {
            const double y = term(static_cast<double>(a), p, s) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        const double lower_tail = tail_integral(static_cast<double>(cutoff) + 1.0, p, s);
        const double raw = sum + lower_tail;
        const double roundoff = 16.0 * DBL_EPSILON * raw;
        SeriesValue out;
        out.value = prefactor * (raw - roundoff);
        out.tail_bound = prefactor * (term(static_cast<double>(cutoff), p, s) + 2.0 * roundoff);
        out.terms_used = cutoff;
        return out;
    }
    // First term already below target: only a = 1 is summed.
    const double lower_tail = tail_integral(2.0, p, s);
    const double raw = term(1.0, p, s) + lower_tail;
    const double roundoff = 16.0 * DBL_EPSILON * raw;
    return SeriesValue{prefactor * (raw - roundoff), prefactor * (term(1.0, p, s) + 2.0 * roundoff), 1};
}

}  // namespace

void BoundParams::validate() const {
    check_kh(k, h);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    if (!(c >= 0.0)) throw std::invalid_argument("density bound C must be >= 0");
    if (!(d_m >= 0.0)) throw std::invalid_argument("D_m must be >= 0");
    if (!(domain_size > 0.0)) throw std::invalid_argument("domain size must be > 0");
}

bool is_feasible(int k, int h, MomentOrder m, int p) {
    check_kh(k, h);
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    // Condition scaled by 2(1+h)(1+h+m)/m (or 2 for infinite m):
    // 2 p (1+h+m) < m (2k(1+h) - h(1+h) - 2).
    const long long core = 2LL * k * (1 + h) - static_cast<long long>(h) * (1 + h) - 2;
    if (m.is_infinite) return 2LL * p < core;
    if (m.value < 1) throw std::invalid_argument("m must be >= 1");
    return 2LL * p * (1 + h + m.value) < static_cast<long long>(m.value) * core;
}

std::optional<int> feasible_p_max(int k, int h, MomentOrder m) {
    check_kh(k, h);
    const long long core = 2LL * k * (1 + h) - static_cast<long long>(h) * (1 + h) - 2;
    long long num = 0, den = 0;
    if (m.is_infinite) {
        num = core;
        den = 2;
    } else {
        if (m.value < 1) throw std::invalid_argument("m must be >= 1");
        num = static_cast<long long>(m.value) * core;
        den = 2LL * (1 + h + m.value);
    }
    // Largest p with p * den < num.
    if (num <= den) return std::nullopt;
    return static_cast<int>((num - 1) / den);
}

OpenInterval alpha_interval(int k, int h, int m, int p) {
    check_kh(k, h);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    OpenInterval w{static_cast<double>(p) / m, k - 0.5 * h - static_cast<double>(1 + p) / (1 + h)};
    if (!(w.lo < w.hi) || !is_feasible(k, h, MomentOrder::finite(m), p)) {
        std::ostringstream os;
        os << "empty alpha window: need p/m < k - h/2 - (1+p)/(1+h), got " << w.lo << " >= " << w.hi
           << " (equivalently p < (k - h/2 - 1/(1+h)) / (1/m + 1/(1+h)) fails for k=" << k << ", h=" << h
           << ", m=" << m << ", p=" << p << ")";
        throw InfeasibleError(os.str());
    }
    return w;
}

SeriesValue series_e(double alpha, int k, int m, int p, double tol, long long max_terms) {
    if (k < 2 || m < 1 || p < 1) throw std::invalid_argument("series_e: k >= 2, m >= 1, p >= 1 required");
    const double s = m * alpha;
    if (!(s - (p - 1) > 1.0)) {
        std::ostringstream os;
        os << "series E diverges: need m*alpha - (p-1) > 1, got " << s - (p - 1);
        throw InfeasibleError(os.str());
    }
    const double prefactor = p * std::pow(k - 1.0, p - 1);
    return bracketed_series(prefactor, p, s, tol, max_terms);
}

SeriesValue series_d(double alpha, int k, int h, int p, double tol, long long max_terms) {
    check_kh(k, h);
    if (p < 1) throw std::invalid_argument("series_d: p >= 1 required");
    const double s = (h + 1) * (k - 0.5 * h - alpha) - 1.0;
    if (!(s - (p - 1) > 1.0)) {
        std::ostringstream os;
        os << "series D diverges: need (h+1)(k-h/2-alpha) - 1 - (p-1) > 1, got " << s - (p - 1);
        throw InfeasibleError(os.str());
    }
    const double prefactor = std::pow(2.0, (h + 1) * (1.0 + 0.5 * h - k)) / (factorial(k) * factorial(k - h));
    return bracketed_series(prefactor, p, s, tol, max_terms);
}

double resolve_alpha(const BoundParams& params) {
    params.validate();
    const OpenInterval w = alpha_interval(params.k, params.h, params.m, params.p);
    if (!params.alpha) return w.midpoint();
    if (!w.contains(*params.alpha)) {
        std::ostringstream os;
        os << "alpha=" << *params.alpha << " outside the admissible window (" << w.lo << ", " << w.hi << ")";
        throw InfeasibleError(os.str());
    }
    return *params.alpha;
}

namespace {

BoundBreakdown assemble(const BoundParams& params, double length, double scale, double tol) {
    BoundBreakdown b;
    b.alpha = resolve_alpha(params);
    b.e = series_e(b.alpha, params.k, params.m, params.p, tol);
    b.d = series_d(b.alpha, params.k, params.h, params.p, tol);
    b.base = std::pow(params.k - 1.0, params.p);
    b.moment_term = params.d_m * (b.e.value + b.e.tail_bound);
    const double exponent = (params.h + 1) * (params.k - 0.5 * params.h);
    b.density_term = params.c * std::pow(length, exponent) * (b.d.value + b.d.tail_bound);
    b.scale = scale;
    b.total = scale * (b.base + b.moment_term + b.density_term);
    return b;
}

}  // namespace

BoundBreakdown moment_bound_interval_breakdown(const BoundParams& params, double tol) {
    return assemble(params, params.domain_size, 1.0, tol);
}

double moment_bound_interval(const BoundParams& params, double tol) {
    return moment_bound_interval_breakdown(params, tol).total;
}

double crofton_constant(const Domain& domain) {
    if (const auto* ball = std::get_if<Ball>(&domain)) {
        if (ball->d < 2) throw std::invalid_argument("ball dimension must be >= 2");
        if (!(ball->a > 0.0)) throw std::invalid_argument("ball radius must be > 0");
        return std::pow(std::numbers::pi, 0.5 * ball->d) / std::tgamma(0.5 * ball->d) * std::pow(ball->a, ball->d - 1);
    }
    const auto& sphere = std::get<Sphere>(domain);
    if (sphere.d < 2) throw std::invalid_argument("sphere dimension must be >= 2");
    return std::pow(std::numbers::pi, 0.5 * sphere.d) / std::tgamma(0.5 * sphere.d);
}

BoundBreakdown moment_bound_ball_breakdown(const BoundParams& params, int d, double a, double tol) {
    const double c = crofton_constant(Ball{d, a});
    return assemble(params, 2.0 * a, std::pow(c, params.p), tol);
}

double moment_bound_ball(const BoundParams& params, int d, double a, double tol) {
    return moment_bound_ball_breakdown(params, d, a, tol).total;
}

BoundBreakdown moment_bound_sphere_breakdown(const BoundParams& params, int d, double tol) {
    const double beta = crofton_constant(Sphere{d});
    return assemble(params, 2.0 * std::numbers::pi, std::pow(beta, params.p), tol);
}

double moment_bound_sphere(const BoundParams& params, int d, double tol) {
    return moment_bound_sphere_breakdown(params, d, tol).total;
}

}  // namespace levelset::bounds
