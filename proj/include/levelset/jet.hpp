#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levelset {

/// Truncated Taylor series c_0 + c_1 z + ... + c_K z^K of a function of one
/// variable around z = 0. Arithmetic propagates coefficients exactly up to
/// order K, which gives derivatives of compositions without symbolic work:
/// the j-th derivative is j! * c_j.
class Jet {
  public:
    Jet() = default;
    /// Constant jet of the given order.
    Jet(double value, int order);
    /// Jet from explicit Taylor coefficients.
    explicit Jet(std::vector<double> coefficients);

    /// z -> value + slope * z, truncated at `order`.
    static Jet variable(double value, double slope, int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    std::span<const double> coefficients() const { return c_; }

    /// j-th derivative at z = 0.
    double derivative(int j) const;
    /// All derivatives 0..order.
    std::vector<double> derivatives() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);
    Jet& operator+=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator-(Jet a) { return a *= -1.0; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

  private:
    std::vector<double> c_;
};

/// f(g(z)) given the derivatives f(g0), f'(g0), ..., f^(K)(g0) at g0 = g[0].
Jet compose(std::span<const double> outer_derivatives, const Jet& inner);

Jet exp(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet sqrt(const Jet& x);
/// x^q for integer q >= 0.
Jet pow(const Jet& x, int q);
/// atan2(y, x) with the branch fixed by the constant terms.
Jet atan2(const Jet& y, const Jet& x);

}  // namespace levelset
