#include "levelset/process.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace levelset {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void Impulse::validate() const {
    switch (kind) {
        case Kind::constant:
            if (!std::isfinite(a)) throw std::invalid_argument("constant impulse must be finite");
            break;
        case Kind::exponential:
            if (!(a > 0.0)) throw std::invalid_argument("exponential impulse rate must be positive");
            break;
        case Kind::uniform:
            if (!(a < b)) throw std::invalid_argument("uniform impulse needs lo < hi");
            break;
        case Kind::normal:
            if (!(b > 0.0)) throw std::invalid_argument("normal impulse sd must be positive");
            break;
        case Kind::gamma:
            if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("gamma impulse needs shape, rate > 0");
            break;
    }
}

double Impulse::sample(Rng& rng) const {
    switch (kind) {
        case Kind::constant: return a;
        case Kind::exponential: return std::exponential_distribution<double>(a)(rng);
        case Kind::uniform: return a + (b - a) * uniform01(rng);
        case Kind::normal: return a + b * standard_normal(rng);
        case Kind::gamma: return std::gamma_distribution<double>(a, 1.0 / b)(rng);
    }
    return 0.0;
}

double Impulse::mean() const {
    switch (kind) {
        case Kind::constant: return a;
        case Kind::exponential: return 1.0 / a;
        case Kind::uniform: return 0.5 * (a + b);
        case Kind::normal: return a;
        case Kind::gamma: return a / b;
    }
    return 0.0;
}

double Impulse::mean_abs() const {
    switch (kind) {
        case Kind::constant: return std::abs(a);
        case Kind::exponential: return 1.0 / a;
        case Kind::uniform:
            if (a >= 0.0 || b <= 0.0) return std::abs(0.5 * (a + b));
            return (a * a + b * b) / (2.0 * (b - a));
        case Kind::normal: {
            const double z = a / b;
            return b * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * z * z) + a * std::erf(z / std::sqrt(2.0));
        }
        case Kind::gamma: return a / b;
    }
    return 0.0;
}

double Impulse::mean_inverse_abs() const {
    switch (kind) {
        case Kind::constant: return a == 0.0 ? kInf : 1.0 / std::abs(a);
        case Kind::exponential: return kInf;
        case Kind::uniform:
            if (a > 0.0) return std::log(b / a) / (b - a);
            if (b < 0.0) return std::log(a / b) / (b - a);
            return kInf;
        case Kind::normal: return kInf;
        case Kind::gamma: return a > 1.0 ? b / (a - 1.0) : kInf;
    }
    return kInf;
}

std::optional<double> Impulse::density_bound() const {
    switch (kind) {
        case Kind::constant: return std::nullopt;
        case Kind::exponential: return a;
        case Kind::uniform: return 1.0 / (b - a);
        case Kind::normal: return 1.0 / (b * std::sqrt(2.0 * std::numbers::pi));
        case Kind::gamma: {
            if (a < 1.0) return std::nullopt;
            if (a == 1.0) return b;
            const double mode = (a - 1.0) / b;
            return std::exp(a * std::log(b) + (a - 1.0) * std::log(mode) - b * mode - std::lgamma(a));
        }
    }
    return std::nullopt;
}

std::string Impulse::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::constant: os << "constant(" << a << ")"; break;
        case Kind::exponential: os << "exponential(" << a << ")"; break;
        case Kind::uniform: os << "uniform(" << a << "," << b << ")"; break;
        case Kind::normal: os << "normal(" << a << "," << b << ")"; break;
        case Kind::gamma: os << "gamma(" << a << "," << b << ")"; break;
    }
    return os.str();
}

void FrequencyLaw::validate() const {
    if (is_fixed) {
        if (!(value > 0.0)) throw std::invalid_argument("fixed frequency must be positive");
        return;
    }
    if (!(shape > 0.0)) throw std::invalid_argument("Pareto shape must be positive");
    if (upper && !(*upper > 1.0)) throw std::invalid_argument("Pareto truncation must exceed 1");
}

double FrequencyLaw::sample(Rng& rng) const {
    if (is_fixed) return value;
    // Inverse CDF of the (possibly truncated) Pareto law with scale 1.
    const double mass = upper ? 1.0 - std::pow(*upper, -shape) : 1.0;
    const double u = uniform01(rng);
    return std::pow(1.0 - u * mass, -1.0 / shape);
}

double FrequencyLaw::moment(double j) const {
    if (is_fixed) return std::pow(value, j);
    if (!upper) return j < shape ? shape / (shape - j) : kInf;
    const double U = *upper;
    const double mass = 1.0 - std::pow(U, -shape);
    if (std::abs(j - shape) < 1e-12) return shape * std::log(U) / mass;
    return shape / (shape - j) * (1.0 - std::pow(U, j - shape)) / mass;
}

void SpectralGaussianSpec::validate() const {
    if (atoms.empty()) throw std::invalid_argument("spectral mixture needs at least one atom");
    for (const auto& a : atoms) {
        if (!(a.weight > 0.0)) throw std::invalid_argument("spectral weights must be positive");
        if (!(a.frequency >= 0.0)) throw std::invalid_argument("spectral frequencies must be >= 0");
    }
}

double SpectralGaussianSpec::lambda0() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

double SpectralGaussianSpec::lambda2() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight * a.frequency * a.frequency;
    return s;
}

double RadialKernel::psi(double rho) const { return std::exp(-std::pow(rho, q)); }

double RadialKernel::integral(int d) const {
    // int_{R^d} exp(-|t|^(2q)) dt = |S^(d-1)| Gamma(d/(2q)) / (2q)
    const double sphere_area = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    return sphere_area * std::tgamma(d / (2.0 * q)) / (2.0 * q);
}

void RegularizedDiffusionSpec::validate() const {
    if (!(vol0 > std::abs(vol1))) throw std::invalid_argument("volatility must stay strictly positive: vol0 > |vol1|");
    if (!(euler_step > 0.0)) throw std::invalid_argument("euler step must be positive");
    if (!(burn_in >= 1.0)) throw std::invalid_argument("burn-in a must be >= 1");
    if (!(horizon > burn_in + 1.0)) throw std::invalid_argument("horizon must exceed a + 1");
}

double RegularizedDiffusionSpec::drift(double, double x) const { return drift0 + drift1 * x; }

double RegularizedDiffusionSpec::volatility(double, double x) const { return vol0 + vol1 * std::sin(x); }

std::string family_name(const ProcessSpec& spec) {
    struct V {
        std::string operator()(const SineCosineSpec&) const { return "sine_cosine"; }
        std::string operator()(const SpectralGaussianSpec&) const { return "spectral_gaussian"; }
        std::string operator()(const ChiSquareSpec&) const { return "chi_square"; }
        std::string operator()(const ShotNoise1DSpec&) const { return "shot_noise"; }
        std::string operator()(const RegularizedDiffusionSpec&) const { return "regularized_diffusion"; }
    };
    return std::visit(V{}, spec);
}

std::string family_name(const FieldSpec& spec) {
    struct V {
        std::string operator()(const ShotNoiseBallSpec&) const { return "shot_noise_ball"; }
        std::string operator()(const SphereShotNoiseSpec&) const { return "sphere_shot_noise"; }
        std::string operator()(const DeterministicFieldSpec&) const { return "deterministic"; }
    };
    return std::visit(V{}, spec);
}

}  // namespace levelset
