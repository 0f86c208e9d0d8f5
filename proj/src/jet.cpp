#include "levelset/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levelset {

Jet::Jet(double value, int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) { c_[0] = value; }

Jet::Jet(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    if (c_.empty()) throw std::invalid_argument("jet needs at least one coefficient");
}

Jet Jet::variable(double value, double slope, int order) {
    Jet j(value, order);
    if (order >= 1) j.c_[1] = slope;
    return j;
}

double Jet::derivative(int j) const {
    double f = 1.0;
    for (int i = 2; i <= j; ++i) f *= i;
    return c_[static_cast<std::size_t>(j)] * f;
}

std::vector<double> Jet::derivatives() const {
    std::vector<double> out(c_.size());
    double f = 1.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i >= 2) f *= static_cast<double>(i);
        out[i] = c_[i] * f;
    }
    return out;
}

Jet& Jet::operator+=(const Jet& o) {
    const std::size_t n = std::min(c_.size(), o.c_.size());
    c_.resize(n);
    for (std::size_t i = 0; i < n; ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    const std::size_t n = std::min(c_.size(), o.c_.size());
    c_.resize(n);
    for (std::size_t i = 0; i < n; ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Jet(std::move(out));
}

Jet operator/(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    if (b.c_[0] == 0.0) throw std::domain_error("jet division by a series with zero constant term");
    std::vector<double> q(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = a.c_[k];
        for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * q[k - j];
        q[k] = s / b.c_[0];
    }
    return Jet(std::move(q));
}

Jet compose(std::span<const double> outer_derivatives, const Jet& inner) {
    const int order = inner.order();
    if (static_cast<int>(outer_derivatives.size()) < order + 1)
        throw std::invalid_argument("compose: not enough outer derivatives");
    // f(g0 + h) = sum_n f^(n)(g0)/n! h^n with h = inner - g0 (no constant term).
    Jet h = inner;
    h[0] = 0.0;
    Jet result(outer_derivatives[0], order);
    Jet power(1.0, order);
    double inv_fact = 1.0;
    for (int n = 1; n <= order; ++n) {
        power = power * h;
        inv_fact /= n;
        result += power * (outer_derivatives[static_cast<std::size_t>(n)] * inv_fact);
    }
    return result;
}

Jet exp(const Jet& x) {
    const double e = std::exp(x[0]);
    std::vector<double> d(static_cast<std::size_t>(x.order()) + 1, e);
    return compose(d, x);
}

Jet sin(const Jet& x) {
    std::vector<double> d(static_cast<std::size_t>(x.order()) + 1);
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    for (std::size_t n = 0; n < d.size(); ++n) {
        switch (n % 4) {
            case 0: d[n] = s; break;
            case 1: d[n] = c; break;
            case 2: d[n] = -s; break;
            default: d[n] = -c; break;
        }
    }
    return compose(d, x);
}

Jet cos(const Jet& x) {
    std::vector<double> d(static_cast<std::size_t>(x.order()) + 1);
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    for (std::size_t n = 0; n < d.size(); ++n) {
        switch (n % 4) {
            case 0: d[n] = c; break;
            case 1: d[n] = -s; break;
            case 2: d[n] = -c; break;
            default: d[n] = s; break;
        }
    }
    return compose(d, x);
}

Jet sqrt(const Jet& x) {
    if (!(x[0] > 0.0)) throw std::domain_error("jet sqrt needs a positive constant term");
    std::vector<double> d(static_cast<std::size_t>(x.order()) + 1);
    // d^n/dx^n x^(1/2) = (1/2)(1/2 - 1)...(1/2 - n + 1) x^(1/2 - n)
    double coef = 1.0;
    for (std::size_t n = 0; n < d.size(); ++n) {
        d[n] = coef * std::pow(x[0], 0.5 - static_cast<double>(n));
        coef *= 0.5 - static_cast<double>(n);
    }
    return compose(d, x);
}

Jet pow(const Jet& x, int q) {
    if (q < 0) throw std::invalid_argument("jet pow needs q >= 0");
    Jet result(1.0, x.order());
    for (int i = 0; i < q; ++i) result = result * x;
    return result;
}

Jet atan2(const Jet& y, const Jet& x) {
    const int order = std::min(x.order(), y.order());
    Jet out(std::atan2(y[0], x[0]), order);
    if (order == 0) return out;
    // theta' = (x y' - y x') / (x^2 + y^2), integrated term by term.
    auto diff = [](const Jet& j) {
        std::vector<double> c(static_cast<std::size_t>(std::max(j.order(), 1)), 0.0);
        for (int i = 1; i <= j.order(); ++i) c[static_cast<std::size_t>(i - 1)] = i * j[static_cast<std::size_t>(i)];
        return Jet(std::move(c));
    };
    // Work one order lower for the derivative series.
    auto truncate = [](const Jet& j, int n) {
        std::vector<double> c(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(i)] = j[static_cast<std::size_t>(i)];
        return Jet(std::move(c));
    };
    const Jet xs = truncate(x, order - 1), ys = truncate(y, order - 1);
    const Jet dx = diff(truncate(x, order)), dy = diff(truncate(y, order));
    const Jet q = (xs * dy - ys * dx) / (xs * xs + ys * ys);
    for (int i = 1; i <= order; ++i) out[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(i - 1)] / i;
    return out;
}

}  // namespace levelset
