#include "levelset/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levelset {

namespace {

constexpr int kMaxDepth = 8;

struct Node {
    double t;
    double g;  // X(t) - u
    double s;  // X'(t)
};

int sign_of(double g) { return g > 0.0 ? 1 : (g < 0.0 ? -1 : 0); }

class Scanner {
  public:
    Scanner(const Path& path, double u, double tol) : path_(path), u_(u), tol_(tol) {}

    Node eval(double t) const {
        const auto [x, s] = path_.value_slope(t);
        return {t, x - u_, s};
    }

    // Root of X - u in [a, b] given that the left end carries effective sign
    // `left` and the right end the opposite one.
    double bisect(double a, double b, int left) const {
        for (int it = 0; it < 200 && b - a > tol_; ++it) {
            const double mid = 0.5 * (a + b);
            const int sm = sign_of(path_.derivative(0, mid) - u_);
            if (sm == 0) return mid;
            if (sm == left) a = mid;
            else b = mid;
        }
        return 0.5 * (a + b);
    }

    // Zero of X' in [a, b] where the slope changes sign.
    Node critical_point(Node a, Node b) const {
        const int left = sign_of(a.s);
        for (int it = 0; it < 200 && b.t - a.t > tol_; ++it) {
            const Node m = eval(0.5 * (a.t + b.t));
            const int sm = sign_of(m.s);
            if (sm == 0) return m;
            if (sm == left) a = m;
            else b = m;
        }
        return eval(0.5 * (a.t + b.t));
    }

    // A cell whose endpoints share the effective sign `sigma`: look for a
    // hidden pair of roots.
    void scan(const Node& a, const Node& b, int sigma, int depth) {
        const double w = b.t - a.t;
        const double lip = std::max(std::abs(a.s), std::abs(b.s));
        const double gap = std::abs(a.g) + std::abs(b.g);
        if (gap > 2.0 * lip * w) return;
        const double sa = sigma * a.s, sb = sigma * b.s;
        if (sa >= 0.0 && sb <= 0.0) return;  // moving away from the level at both ends
        if (sa < 0.0 && sb > 0.0) {
            // A single extremum toward the level: check its value.
            const Node c = critical_point(a, b);
            const int sc = sign_of(c.g);
            if (sc != 0 && sc != sigma) {
                roots.push_back(bisect(a.t, c.t, sigma));
                roots.push_back(bisect(c.t, b.t, -sigma));
            }
            return;
        }
        if (depth >= kMaxDepth) {
            if (gap <= lip * w) undercount = true;
            return;
        }
        const Node m = eval(0.5 * (a.t + b.t));
        const int sm = sign_of(m.g);
        if (sm != 0 && sm != sigma) {
            roots.push_back(bisect(a.t, m.t, sigma));
            roots.push_back(bisect(m.t, b.t, -sigma));
            return;
        }
        scan(a, m, sigma, depth + 1);
        scan(m, b, sigma, depth + 1);
    }

    std::vector<double> roots;
    bool undercount = false;

  private:
    const Path& path_;
    double u_;
    double tol_;
};

double band_overlap(double y0, double y1, double lo, double hi) {
    const double a = std::min(y0, y1), b = std::max(y0, y1);
    return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

}  // namespace

CrossingCount count_crossings(const Path& path, double lo, double hi, double u, double base_step, double refine_tol,
                              bool periodic) {
    if (!(hi > lo)) throw std::invalid_argument("count_crossings needs lo < hi");
    if (!(base_step > 0.0) || !(refine_tol > 0.0))
        throw std::invalid_argument("base_step and refine_tol must be positive");
    const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / base_step - 1e-9)));
    const double h = (hi - lo) / static_cast<double>(cells);

    Scanner scanner(path, u, refine_tol);
    std::vector<Node> nodes(cells + 1);
    double gmax = 0.0;
    for (std::size_t i = 0; i <= cells; ++i) {
        const double t = i == cells ? hi : lo + static_cast<double>(i) * h;
        if (periodic && i == cells) {
            nodes[i] = nodes[0];
            nodes[i].t = hi;
        } else {
            nodes[i] = scanner.eval(t);
        }
        gmax = std::max(gmax, std::abs(nodes[i].g));
    }

    CrossingCount out;
    out.resolution = h;
    if (gmax <= 1e-12 * std::max(1.0, std::abs(u))) {
        out.degenerate = true;
        return out;
    }

    // Effective signs: exact zeros inherit the previous nonzero sign.
    int initial = 0;
    if (periodic) {
        for (std::size_t i = cells; i-- > 0 && initial == 0;) initial = sign_of(nodes[i].g);
    } else {
        for (std::size_t i = 0; i <= cells && initial == 0; ++i) initial = sign_of(nodes[i].g);
        if (nodes.front().g == 0.0) scanner.roots.push_back(lo);
    }
    std::vector<int> eff(cells + 1);
    int prev = initial;
    for (std::size_t i = 0; i <= cells; ++i) {
        const int s = sign_of(nodes[i].g);
        eff[i] = s == 0 ? prev : s;
        prev = eff[i];
    }

    for (std::size_t i = 0; i < cells; ++i) {
        const Node& a = nodes[i];
        const Node& b = nodes[i + 1];
        if (eff[i] != eff[i + 1]) scanner.roots.push_back(scanner.bisect(a.t, b.t, eff[i]));
        else scanner.scan(a, b, eff[i], 0);
    }
    // A trailing zero run never shows a sign change; the endpoint is the root.
    if (!periodic && nodes.back().g == 0.0) scanner.roots.push_back(hi);

    auto& roots = scanner.roots;
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    for (std::size_t i = 1; i < roots.size(); ++i)
        if (roots[i] - roots[i - 1] < 2.0 * h) scanner.undercount = true;
    if (periodic && roots.size() >= 2 && roots.front() + (hi - lo) - roots.back() < 2.0 * h) scanner.undercount = true;

    out.count = static_cast<long long>(roots.size());
    out.refined_roots = std::move(roots);
    out.undercount_flag = scanner.undercount;
    return out;
}

SupNorm sup_norm_derivative(const PathSample& sample, int order) {
    if (order < 0 || order > sample.order()) throw std::invalid_argument("sample does not hold the requested order");
    SupNorm out;
    for (double v : sample.derivatives[static_cast<std::size_t>(order)]) out.value = std::max(out.value, std::abs(v));
    if (order + 1 <= sample.order()) {
        double next = 0.0;
        for (double v : sample.derivatives[static_cast<std::size_t>(order + 1)]) next = std::max(next, std::abs(v));
        out.value += 0.5 * sample.grid.step() * next;
        out.certified = true;
    }
    return out;
}

double kac_counter(const Path& path, double lo, double hi, double u, double delta, double quad_step) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (!(quad_step > 0.0) || quad_step > 0.25 * delta * (1.0 + 1e-12))
        throw std::invalid_argument("quad_step must be positive and at most delta/4");
    if (!(hi > lo)) throw std::invalid_argument("kac_counter needs lo < hi");
    const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / quad_step - 1e-9)));
    const double h = (hi - lo) / static_cast<double>(cells);
    const double band_lo = u - delta, band_hi = u + delta;

    Scanner scanner(path, u, 1e-15 * std::max(1.0, std::abs(hi) + std::abs(lo)));
    Node a = scanner.eval(lo);
    double total = 0.0;
    for (std::size_t i = 1; i <= cells; ++i) {
        const Node b = scanner.eval(i == cells ? hi : lo + static_cast<double>(i) * h);
        const double ya = a.g + u, yb = b.g + u;
        if (sign_of(a.s) * sign_of(b.s) < 0) {
            const Node c = scanner.critical_point(a, b);
            const double yc = c.g + u;
            total += band_overlap(ya, yc, band_lo, band_hi) + band_overlap(yc, yb, band_lo, band_hi);
        } else {
            total += band_overlap(ya, yb, band_lo, band_hi);
        }
        a = b;
    }
    return total / (2.0 * delta);
}

CrossingCount crossings_along_line(const Field& field, std::span<const double> v, std::span<const double> y, double a,
                                   double u, double base_step, double refine_tol) {
    if (field.on_sphere()) throw std::invalid_argument("line probes need a field on R^d");
    const double r2 = dot(y, y);
    if (!(r2 < a * a)) throw std::invalid_argument("chord offset must satisfy |y| < a");
    if (std::abs(norm(v) - 1.0) > 1e-9) throw std::invalid_argument("line direction must be a unit vector");
    const double half = std::sqrt(a * a - r2);
    LinePath path(field, std::vector<double>(y.begin(), y.end()), std::vector<double>(v.begin(), v.end()));
    return count_crossings(path, -half, half, u, base_step, refine_tol);
}

CrossingCount crossings_along_great_circle(const Field& field, std::span<const double> e1, std::span<const double> e2,
                                           double u, double base_step, double refine_tol) {
    if (!field.on_sphere()) throw std::invalid_argument("great-circle probes need a field on the sphere");
    if (std::abs(norm(e1) - 1.0) > 1e-9 || std::abs(norm(e2) - 1.0) > 1e-9 || std::abs(dot(e1, e2)) > 1e-9)
        throw std::invalid_argument("great-circle plane needs an orthonormal pair");
    GreatCirclePath path(field, std::vector<double>(e1.begin(), e1.end()), std::vector<double>(e2.begin(), e2.end()));
    return count_crossings(path, 0.0, 2.0 * std::numbers::pi, u, base_step, refine_tol, true);
}

}  // namespace levelset
