#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levelset/kernel.hpp"
#include "levelset/rng.hpp"

namespace levelset {

/// Law of the i.i.d. shot-noise impulses.
struct Impulse {
    enum class Kind { constant, exponential, uniform, normal, gamma };

    static Impulse constant(double value) { return {Kind::constant, value, 0.0}; }
    static Impulse exponential(double rate) { return {Kind::exponential, rate, 0.0}; }
    static Impulse uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
    static Impulse normal(double mean, double sd) { return {Kind::normal, mean, sd}; }
    /// Gamma(shape, rate).
    static Impulse gamma(double shape, double rate) { return {Kind::gamma, shape, rate}; }

    Kind kind = Kind::constant;
    double a = 1.0;
    double b = 0.0;

    void validate() const;
    double sample(Rng& rng) const;
    double mean() const;
    double mean_abs() const;
    /// E(1/|beta|), closed form for every family; +inf where it diverges.
    double mean_inverse_abs() const;
    /// Sup of the density; empty for the atomic (constant) law.
    std::optional<double> density_bound() const;
    std::string describe() const;
};

/// Law of the random frequency of the sine-cosine process: either a fixed
/// value or a Pareto law with density shape * w^-(shape+1) on [1, inf),
/// optionally conditioned on [1, upper].
struct FrequencyLaw {
    static FrequencyLaw fixed(double omega) { return {true, omega, 0.0, std::nullopt}; }
    static FrequencyLaw pareto(double shape, std::optional<double> upper = std::nullopt) {
        return {false, 0.0, shape, upper};
    }

    bool is_fixed = false;
    double value = 1.0;
    double shape = 4.0;
    std::optional<double> upper;

    void validate() const;
    double sample(Rng& rng) const;
    /// E(omega^j), +inf when it diverges.
    double moment(double j) const;
};

struct SineCosineSpec {
    FrequencyLaw omega = FrequencyLaw::pareto(4.0);
};

struct SpectralAtom {
    double weight = 1.0;     // sigma_j^2 > 0
    double frequency = 1.0;  // lambda_j >= 0
};

/// Stationary Gaussian process as a finite spectral mixture
/// sum_j sigma_j (xi_j cos(lambda_j t) + eta_j sin(lambda_j t)).
struct SpectralGaussianSpec {
    std::vector<SpectralAtom> atoms{{1.0, 1.0}};

    void validate() const;
    double lambda0() const;
    double lambda2() const;
};

struct ChiSquareSpec {
    int n = 2;
    SpectralGaussianSpec base;
};

struct ShotNoise1DSpec {
    double lambda = 1.0;
    Kernel kernel = Kernel::gaussian_bump();
    Impulse impulse = Impulse::constant(1.0);
    /// Window padding L; chosen automatically when absent.
    std::optional<double> window_pad;
};

/// Radial kernel exp(-|t|^(2q)) written as psi(|t|^2), psi(rho) = exp(-rho^q).
struct RadialKernel {
    int q = 1;
    double psi(double rho) const;
    /// int over R^d of exp(-|t|^(2q)) dt.
    double integral(int d) const;
};

struct ShotNoiseBallSpec {
    int d = 2;
    double radius = 1.0;  // the ball D_a on which the field is observed
    double lambda = 1.0;
    RadialKernel kernel;
    Impulse impulse = Impulse::constant(1.0);
    double pad = 4.0;
};

/// Kernel of the sphere shot noise as a function of the squared geodesic
/// distance: g(s) = exp(-s / width) on [0, pi^2].
struct SphereKernel {
    double width = 0.5;
};

struct SphereShotNoiseSpec {
    int d = 2;
    double lambda = 1.0;  // mean point count is lambda * H_d(S^d)
    SphereKernel kernel;
    Impulse impulse = Impulse::constant(1.0);
};

/// dX = b(s, X) ds + sigma(s, X) dW with b = drift0 + drift1 x and
/// sigma = vol0 + vol1 sin(x) (strictly positive when vol0 > |vol1|).
struct RegularizedDiffusionSpec {
    double drift0 = 0.0;
    double drift1 = 0.0;
    double vol0 = 1.0;
    double vol1 = 0.0;
    double x0 = 0.0;
    double horizon = 10.0;
    double euler_step = 1e-3;
    double burn_in = 1.0;  // a >= 1: output grid must lie in [a, T-1]

    void validate() const;
    double drift(double s, double x) const;
    double volatility(double s, double x) const;
};

/// Closed-form fields used as a test corpus.
struct DeterministicFieldSpec {
    enum class Kind {
        shell,       // |t|^2 - r^2 on R^d
        coordinate,  // t_index on R^d (or restricted to S^d)
        constant,    // c
    };
    Kind kind = Kind::shell;
    int d = 2;             // R^d, or S^d when on_sphere (ambient d+1)
    bool on_sphere = false;
    double r = 0.5;
    int index = 0;
    double c = 0.0;
    /// Optional orthogonal matrix (row-major, ambient x ambient) applied to
    /// the argument: X(t) = f(R t).
    std::vector<double> rotation;

    int ambient_dim() const { return on_sphere ? d + 1 : d; }
};

using ProcessSpec = std::variant<SineCosineSpec, SpectralGaussianSpec, ChiSquareSpec, ShotNoise1DSpec,
                                 RegularizedDiffusionSpec>;
using FieldSpec = std::variant<ShotNoiseBallSpec, SphereShotNoiseSpec, DeterministicFieldSpec>;

std::string family_name(const ProcessSpec& spec);
std::string family_name(const FieldSpec& spec);

}  // namespace levelset
