#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "levelset/process.hpp"
#include "levelset/simulate.hpp"

namespace levelset {

/// A realized smooth random field on R^d (restricted to a ball) or on the
/// sphere S^d, embedded in R^(d+1).
class Field {
  public:
    virtual ~Field() = default;

    /// Dimension of the coordinates passed to value() and gradient().
    virtual int ambient_dim() const = 0;
    virtual bool on_sphere() const = 0;

    virtual double value(std::span<const double> x) const = 0;
    /// Gradient of a smooth extension to the ambient space. On the sphere
    /// only its tangential part is meaningful.
    virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
    /// Expected sup-norm error from truncating the point process; 0 if exact.
    virtual double truncation_error() const { return 0.0; }

    /// Value and derivative along `direction` at x.
    std::pair<double, double> value_slope(std::span<const double> x, std::span<const double> direction) const;
};

/// Field restricted to the line t -> y + t v.
class LinePath final : public Path {
  public:
    LinePath(const Field& field, std::vector<double> y, std::vector<double> v);
    double derivative(int order, double t) const override;
    int max_order() const override { return 1; }
    std::pair<double, double> value_slope(double t) const override;

  private:
    const Field& field_;
    std::vector<double> y_, v_;
    mutable std::vector<double> x_;
};

/// Field restricted to the great circle theta -> cos(theta) e1 + sin(theta) e2.
class GreatCirclePath final : public Path {
  public:
    GreatCirclePath(const Field& field, std::vector<double> e1, std::vector<double> e2);
    double derivative(int order, double t) const override;
    int max_order() const override { return 1; }
    std::pair<double, double> value_slope(double t) const override;

  private:
    const Field& field_;
    std::vector<double> e1_, e2_;
    mutable std::vector<double> x_, w_;
};

class DeterministicField final : public Field {
  public:
    explicit DeterministicField(DeterministicFieldSpec spec);
    int ambient_dim() const override { return spec_.ambient_dim(); }
    bool on_sphere() const override { return spec_.on_sphere; }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> out) const override;

  private:
    DeterministicFieldSpec spec_;
};

/// sum_i beta_i psi(|t - tau_i|^2) with Poisson points on the ball of radius
/// radius + pad.
class BallShotNoiseField final : public Field {
  public:
    BallShotNoiseField(ShotNoiseBallSpec spec, std::vector<std::vector<double>> points, std::vector<double> impulses);
    int ambient_dim() const override { return spec_.d; }
    bool on_sphere() const override { return false; }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> out) const override;
    double truncation_error() const override;

    const std::vector<std::vector<double>>& points() const { return points_; }

  private:
    ShotNoiseBallSpec spec_;
    std::vector<std::vector<double>> points_;
    std::vector<double> impulses_;
};

/// sum_i beta_i g(dist(x, T_i)^2) with Poisson points uniform on S^d.
class SphereShotNoiseField final : public Field {
  public:
    SphereShotNoiseField(SphereShotNoiseSpec spec, std::vector<std::vector<double>> points,
                         std::vector<double> impulses);
    int ambient_dim() const override { return spec_.d + 1; }
    bool on_sphere() const override { return true; }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> out) const override;

    const std::vector<std::vector<double>>& points() const { return points_; }

  private:
    SphereShotNoiseSpec spec_;
    std::vector<std::vector<double>> points_;
    std::vector<double> impulses_;
};

/// H_d measure of the unit sphere S^d.
double sphere_area(int d);

/// One realization of the field; deterministic specs ignore the seed.
std::unique_ptr<Field> sample_field(const FieldSpec& spec, std::uint64_t seed);

}  // namespace levelset
