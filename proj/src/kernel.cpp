#include "levelset/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace levelset {

namespace {

constexpr int kInfinitelySmooth = 1000;
constexpr int kTableCells = 4096;
constexpr int kScanSteps = 20000;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Physicists' Hermite polynomial H_n(t).
double hermite(int n, double t) {
    if (n == 0) return 1.0;
    double prev = 1.0, cur = 2.0 * t;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * t * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Polynomials P_j with d^j/dx^j sech(x) = sech(x) P_j(tanh(x)).
std::vector<std::vector<double>> sech_polynomials(int max_order) {
    std::vector<std::vector<double>> polys{{1.0}};
    for (int j = 0; j < max_order; ++j) {
        const auto& p = polys.back();
        std::vector<double> next(p.size() + 1, 0.0);
        // -y P(y) + (1 - y^2) P'(y)
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i + 1] -= p[i];
            if (i >= 1) {
                next[i - 1] += static_cast<double>(i) * p[i];
                next[i + 1] -= static_cast<double>(i) * p[i];
            }
        }
        polys.push_back(std::move(next));
    }
    return polys;
}

}  // namespace

Kernel::Kernel(Definition def) : def_(std::make_shared<const Definition>(std::move(def))) {
    const int orders = std::clamp(def_->smoothness, 2, 8);
    auto tables = std::make_shared<std::vector<Table>>();
    for (int j = 0; j <= orders; ++j) {
        Table t;
        t.threshold = monotone_threshold(j);
        if (t.threshold > 0.0) {
            t.step = t.threshold / kTableCells;
            std::vector<double> vals(kTableCells + 1);
            double lipschitz = 0.0;
            for (int i = 0; i <= kTableCells; ++i) {
                const double s = i * t.step;
                vals[static_cast<std::size_t>(i)] = pointwise(j, s);
                lipschitz = std::max(lipschitz, pointwise(j + 1, s));
                if (i < kTableCells) lipschitz = std::max(lipschitz, pointwise(j + 1, s + 0.5 * t.step));
            }
            const double allowance = 0.5 * t.step * 1.5 * lipschitz;
            t.hull.assign(kTableCells, 0.0);
            double run = vals[kTableCells];
            for (int i = kTableCells - 1; i >= 0; --i) {
                run = std::max(run, vals[static_cast<std::size_t>(i)]);
                t.hull[static_cast<std::size_t>(i)] = run + allowance;
            }
        }
        tables->push_back(std::move(t));
    }
    tables_ = std::move(tables);
}

double Kernel::pointwise(int order, double s) const {
    return std::max(std::abs(def_->eval(order, s)), std::abs(def_->eval(order, -s)));
}

double Kernel::monotone_threshold(int order) const {
    if (def_->threshold) return def_->threshold(order);
    // Last sign change of g^(order+1) on either side within the scan range.
    const double step = def_->scan_range / kScanSteps;
    double last = -1.0;
    for (int side = -1; side <= 1; side += 2) {
        double prev = def_->eval(order + 1, side * step);
        for (int i = 2; i <= kScanSteps; ++i) {
            const double s = i * step;
            const double cur = def_->eval(order + 1, side * s);
            if ((prev > 0.0 && cur < 0.0) || (prev < 0.0 && cur > 0.0)) last = std::max(last, s);
            if (cur != 0.0) prev = cur;
        }
    }
    return last < 0.0 ? 0.0 : last + 2.0 * step;
}

double Kernel::envelope(int order, double distance) const {
    if (order < 0 || order > max_envelope_order())
        throw std::out_of_range("kernel envelope not tabulated for this order");
    const double s = std::abs(distance);
    const Table& t = (*tables_)[static_cast<std::size_t>(order)];
    if (s >= t.threshold) return pointwise(order, s);
    const auto i = static_cast<std::size_t>(std::floor(s / t.step));
    return t.hull[std::min(i, t.hull.size() - 1)];
}

double Kernel::tail_beyond(int order, double L) const {
    if (order == 0) return def_->tail0(L);
    // Beyond the threshold g^(order) keeps one sign on each side, so its
    // integral telescopes to the value of g^(order-1).
    return std::abs(def_->eval(order - 1, L)) + std::abs(def_->eval(order - 1, -L));
}

double Kernel::envelope_tail(int order, double L) const {
    if (order < 0 || order > max_envelope_order())
        throw std::out_of_range("kernel envelope not tabulated for this order");
    L = std::max(L, 0.0);
    const Table& t = (*tables_)[static_cast<std::size_t>(order)];
    if (L >= t.threshold) return tail_beyond(order, L);
    const double beyond = tail_beyond(order, t.threshold);
    if (!std::isfinite(beyond)) return beyond;
    double sum = 0.0;
    for (auto i = static_cast<std::size_t>(std::floor(L / t.step)); i < t.hull.size(); ++i) sum += t.hull[i] * t.step;
    return sum + beyond;
}

Kernel Kernel::gaussian_bump() {
    Definition d;
    d.name = "gaussian";
    d.eval = [](int j, double t) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        return sign * hermite(j, t) * std::exp(-t * t);
    };
    d.smoothness = kInfinitelySmooth;
    d.tail0 = [](double L) { return 0.5 * std::sqrt(std::numbers::pi) * std::erfc(L); };
    d.integral = std::sqrt(std::numbers::pi);
    // Largest zero of H_(j+1) is below sqrt(2j+3).
    d.threshold = [](int j) { return std::sqrt(2.0 * j + 3.0) + 0.25; };
    return Kernel(std::move(d));
}

Kernel Kernel::one_sided_exponential() {
    Definition d;
    d.name = "one_sided_exp";
    d.eval = [](int j, double t) { return t >= 0.0 ? ((j % 2 == 0) ? 1.0 : -1.0) * std::exp(-t) : 0.0; };
    d.smoothness = 0;
    d.tail0 = [](double L) { return std::exp(-L); };
    d.integral = 1.0;
    d.threshold = [](int) { return 0.0; };
    return Kernel(std::move(d));
}

Kernel Kernel::laplace() {
    Definition d;
    d.name = "laplace";
    d.eval = [](int j, double t) { return t >= 0.0 ? ((j % 2 == 0) ? 1.0 : -1.0) * std::exp(-t) : std::exp(t); };
    d.smoothness = 0;
    d.tail0 = [](double L) { return std::exp(-L); };
    d.integral = 2.0;
    d.threshold = [](int) { return 0.0; };
    return Kernel(std::move(d));
}

Kernel Kernel::sech(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("sech kernel rate must be positive");
    auto polys = std::make_shared<const std::vector<std::vector<double>>>(sech_polynomials(12));
    Definition d;
    d.name = "sech";
    d.eval = [rate, polys](int j, double t) {
        if (j < 0 || j >= static_cast<int>(polys->size())) throw std::out_of_range("sech kernel order");
        const double x = rate * t;
        const double y = std::tanh(x);
        const auto& p = (*polys)[static_cast<std::size_t>(j)];
        double acc = 0.0;
        for (std::size_t i = p.size(); i-- > 0;) acc = acc * y + p[i];
        return std::pow(rate, j) * acc / std::cosh(x);
    };
    d.smoothness = kInfinitelySmooth;
    d.tail0 = [rate](double L) { return 2.0 / rate * std::atan(std::exp(-rate * L)); };
    d.integral = std::numbers::pi / rate;
    d.scan_range = 40.0 / rate;
    return Kernel(std::move(d));
}

Kernel Kernel::gamma(int n) {
    if (n < 1) throw std::invalid_argument("gamma kernel needs n >= 1");
    Definition d;
    d.name = "gamma" + std::to_string(n);
    d.eval = [n](int j, double t) {
        if (t < 0.0) return 0.0;
        double acc = 0.0;
        double binom = 1.0;
        for (int l = 0; l <= std::min(j, n); ++l) {
            if (l > 0) binom = binom * (j - l + 1) / l;
            const double falling = factorial(n) / factorial(n - l);
            const double sign = ((j - l) % 2 == 0) ? 1.0 : -1.0;
            acc += binom * falling * std::pow(t, n - l) * sign;
        }
        return acc * std::exp(-t);
    };
    d.smoothness = n - 1;
    d.tail0 = [n](double L) { return boost::math::tgamma(n + 1.0, L); };
    d.integral = factorial(n);
    d.scan_range = 40.0 + 2.0 * n;
    return Kernel(std::move(d));
}

Kernel Kernel::power_tail() {
    Definition d;
    d.name = "power_tail";
    d.eval = [](int j, double t) {
        if (t >= 0.0) return ((j % 2 == 0) ? 1.0 : -1.0) * factorial(j) / std::pow(1.0 + t, j + 1);
        return factorial(j) / std::pow(1.0 - t, j + 1);
    };
    d.smoothness = 0;
    d.tail0 = [](double) { return std::numeric_limits<double>::infinity(); };
    d.threshold = [](int) { return 0.0; };
    return Kernel(std::move(d));
}

}  // namespace levelset
