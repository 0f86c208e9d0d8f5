#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "levelset/process.hpp"

namespace levelset {

/// Uniformly spaced points start, ..., stop (inclusive).
struct Grid {
    double start = 0.0;
    double stop = 1.0;
    std::size_t points = 2;

    /// Grid of spacing at most `step` covering [start, stop].
    static Grid with_step(double start, double stop, double step);

    double step() const { return points > 1 ? (stop - start) / static_cast<double>(points - 1) : 0.0; }
    double at(std::size_t i) const { return i + 1 == points ? stop : start + static_cast<double>(i) * step(); }
};

/// A realized smooth path t -> X(t) with derivative access.
class Path {
  public:
    virtual ~Path() = default;
    /// order-th derivative at t; order 0 is the value.
    virtual double derivative(int order, double t) const = 0;
    /// Highest order for which derivative() is meaningful.
    virtual int max_order() const = 0;
    /// Value and first derivative together; overridden where one pass is cheaper.
    virtual std::pair<double, double> value_slope(double t) const { return {derivative(0, t), derivative(1, t)}; }

    double operator()(double t) const { return derivative(0, t); }
};

/// Path from a closure; used for deterministic test paths.
class FunctionPath final : public Path {
  public:
    using Eval = std::function<double(int, double)>;
    FunctionPath(Eval eval, int max_order) : eval_(std::move(eval)), max_order_(max_order) {}
    double derivative(int order, double t) const override { return eval_(order, t); }
    int max_order() const override { return max_order_; }

  private:
    Eval eval_;
    int max_order_;
};

/// A trajectory tabulated on a grid. derivatives[0] holds the values.
struct PathSample {
    Grid grid;
    std::vector<std::vector<double>> derivatives;
    std::uint64_t seed = 0;
    /// Bound on the expected sup-norm error from window truncation (shot
    /// noise); zero for exact constructions.
    double truncation_error = 0.0;

    const std::vector<double>& values() const { return derivatives.front(); }
    int order() const { return static_cast<int>(derivatives.size()) - 1; }

    /// Columns t, x, dx1, ..., dxr; 17 significant digits.
    void write_csv(std::ostream& os) const;
};

/// Tabulate derivatives 0..order of `path` on `grid`.
PathSample tabulate(const Path& path, const Grid& grid, int order, std::uint64_t seed = 0, double truncation_error = 0.0);

// ---------------------------------------------------------------------------
// Conditional sine-cosine process  amplitude * cos(omega t - theta)

class SineCosinePath final : public Path {
  public:
    SineCosinePath(double omega, double theta, double amplitude)
        : omega_(omega), theta_(theta), amplitude_(amplitude) {}
    double derivative(int order, double t) const override;
    int max_order() const override { return 64; }

    double omega() const { return omega_; }
    double theta() const { return theta_; }
    double amplitude() const { return amplitude_; }

  private:
    double omega_, theta_, amplitude_;
};

/// Draws omega from the frequency law and xi_1, xi_2 standard normal;
/// xi_1 sin(omega t) + xi_2 cos(omega t) = amplitude cos(omega t - theta).
SineCosinePath draw_sine_cosine(const SineCosineSpec& spec, std::uint64_t seed);

struct SineCosineSample {
    PathSample sample;
    double omega = 0.0;
    double theta = 0.0;
    double amplitude = 0.0;
};

/// Grid must lie inside [0, 2 pi].
SineCosineSample sample_sine_cosine(const SineCosineSpec& spec, std::uint64_t seed, const Grid& grid, int order);

/// Number of t in [0, 2 pi] with cos(omega t - theta) = 0.
long long exact_zero_count_sine_cosine(double omega, double theta);

// ---------------------------------------------------------------------------
// Stationary Gaussian process as a finite spectral mixture

class SpectralPath final : public Path {
  public:
    SpectralPath(std::vector<SpectralAtom> atoms, std::vector<double> xi, std::vector<double> eta);
    double derivative(int order, double t) const override;
    int max_order() const override { return 64; }

  private:
    std::vector<SpectralAtom> atoms_;
    std::vector<double> xi_, eta_, sigma_;
};

SpectralPath draw_spectral_gaussian(const SpectralGaussianSpec& spec, std::uint64_t seed);
PathSample sample_spectral_gaussian(const SpectralGaussianSpec& spec, std::uint64_t seed, const Grid& grid, int order);

// ---------------------------------------------------------------------------
// Chi-square process Y = sum_i X_i^2

class ChiSquarePath final : public Path {
  public:
    explicit ChiSquarePath(std::vector<SpectralPath> components) : components_(std::move(components)) {}
    double derivative(int order, double t) const override;
    int max_order() const override { return 64; }

  private:
    std::vector<SpectralPath> components_;
};

ChiSquarePath draw_chi_square(const ChiSquareSpec& spec, std::uint64_t seed);
PathSample sample_chi_square(const ChiSquareSpec& spec, std::uint64_t seed, const Grid& grid, int order);

// ---------------------------------------------------------------------------
// Shot noise sum_i beta_i g(t - tau_i) observed on an interval

class ShotNoisePath final : public Path {
  public:
    ShotNoisePath(Kernel kernel, std::vector<double> points, std::vector<double> impulses, double truncation_error);
    double derivative(int order, double t) const override;
    int max_order() const override { return kernel_.smoothness(); }

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& impulses() const { return impulses_; }
    double truncation_error() const { return truncation_error_; }

  private:
    Kernel kernel_;
    std::vector<double> points_, impulses_;
    double truncation_error_;
};

/// Smallest padding (to 1%) whose certified truncation error is below
/// 1e-8 * lambda * E|beta| for every order up to max_order.
/// Throws NumericError if the envelope tail is not integrable.
double default_window_pad(const ShotNoise1DSpec& spec, int max_order);

/// 2 lambda E|beta| max_{j<=max_order} int_L^inf envelope(j, s) ds.
double shot_noise_truncation_error(const ShotNoise1DSpec& spec, double pad, int max_order);

/// Poisson(lambda (|I| + 2L)) points uniform on [lo - L, hi + L].
ShotNoisePath draw_shot_noise_1d(const ShotNoise1DSpec& spec, std::uint64_t seed, double lo, double hi, int max_order);
PathSample sample_shot_noise_1d(const ShotNoise1DSpec& spec, std::uint64_t seed, double lo, double hi, const Grid& grid,
                                int order);

// ---------------------------------------------------------------------------
// Regularized diffusion X_Psi = Psi * X

/// Psi(x) = c exp(-1/(1-x^2)) on (-1, 1), unit integral.
struct Bump {
    static double normalization();
    static double derivative(int order, double x);
    /// int |Psi^(order)|.
    static double l1_norm(int order);
};

class DiffusionPath final : public Path {
  public:
    DiffusionPath(std::vector<double> euler_values, double step, double valid_lo, double valid_hi);
    double derivative(int order, double t) const override;
    int max_order() const override { return 16; }

    const std::vector<double>& euler_values() const { return values_; }
    double euler_step() const { return step_; }
    double valid_lo() const { return valid_lo_; }
    double valid_hi() const { return valid_hi_; }

  private:
    std::vector<double> values_;
    double step_, valid_lo_, valid_hi_;
};

/// Euler-Maruyama on [0, T], smoothed by the bump; valid on [a, T-1].
DiffusionPath draw_regularized_diffusion(const RegularizedDiffusionSpec& spec, std::uint64_t seed);
PathSample sample_regularized_diffusion(const RegularizedDiffusionSpec& spec, std::uint64_t seed, const Grid& grid,
                                        int order);

// ---------------------------------------------------------------------------

/// Natural observation interval of a process family.
std::pair<double, double> default_interval(const ProcessSpec& spec);

/// Draw any process family as a Path on [lo, hi] with derivatives up to
/// max_order.
std::unique_ptr<Path> draw_path(const ProcessSpec& spec, std::uint64_t seed, double lo, double hi, int max_order);

}  // namespace levelset
