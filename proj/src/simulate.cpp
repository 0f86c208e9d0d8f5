#include "levelset/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levelset/errors.hpp"
#include "levelset/jet.hpp"

namespace levelset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

void check_grid_inside(const Grid& grid, double lo, double hi, const char* what) {
    const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
    if (grid.start < lo - slack || grid.stop > hi + slack || grid.start > grid.stop) {
        throw std::invalid_argument(std::string(what) + ": grid must lie inside the admissible interval");
    }
}

}  // namespace

Grid Grid::with_step(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop > start)) throw std::invalid_argument("grid needs start < stop and step > 0");
    const auto cells = static_cast<std::size_t>(std::ceil((stop - start) / step - 1e-9));
    return Grid{start, stop, std::max<std::size_t>(cells, 1) + 1};
}

void PathSample::write_csv(std::ostream& os) const {
    os << "t,x";
    for (int j = 1; j <= order(); ++j) os << ",dx" << j;
    os << "\n";
    char buf[64];
    for (std::size_t i = 0; i < grid.points; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", grid.at(i));
        os << buf;
        for (const auto& col : derivatives) {
            std::snprintf(buf, sizeof buf, ",%.17g", col[i]);
            os << buf;
        }
        os << "\n";
    }
}

PathSample tabulate(const Path& path, const Grid& grid, int order, std::uint64_t seed, double truncation_error) {
    if (order < 0 || order > path.max_order()) throw std::invalid_argument("requested derivative order exceeds path smoothness");
    PathSample s;
    s.grid = grid;
    s.seed = seed;
    s.truncation_error = truncation_error;
    s.derivatives.assign(static_cast<std::size_t>(order) + 1, std::vector<double>(grid.points));
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double t = grid.at(i);
        for (int j = 0; j <= order; ++j) s.derivatives[static_cast<std::size_t>(j)][i] = path.derivative(j, t);
    }
    return s;
}

// --- sine-cosine -----------------------------------------------------------

double SineCosinePath::derivative(int order, double t) const {
    return amplitude_ * std::pow(omega_, order) * std::cos(omega_ * t - theta_ + order * 0.5 * std::numbers::pi);
}

SineCosinePath draw_sine_cosine(const SineCosineSpec& spec, std::uint64_t seed) {
    spec.omega.validate();
    Rng rng = make_rng(seed);
    const double omega = spec.omega.sample(rng);
    const double xi1 = standard_normal(rng);
    const double xi2 = standard_normal(rng);
    return SineCosinePath(omega, std::atan2(xi1, xi2), std::hypot(xi1, xi2));
}

SineCosineSample sample_sine_cosine(const SineCosineSpec& spec, std::uint64_t seed, const Grid& grid, int order) {
    check_grid_inside(grid, 0.0, kTwoPi, "sine-cosine");
    const SineCosinePath path = draw_sine_cosine(spec, seed);
    return SineCosineSample{tabulate(path, grid, order, seed), path.omega(), path.theta(), path.amplitude()};
}

long long exact_zero_count_sine_cosine(double omega, double theta) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    // Roots t_j = (theta + pi/2 + j pi) / omega, kept when inside [0, 2 pi].
    const double pi = std::numbers::pi;
    const auto lo = static_cast<long long>(std::ceil((-theta - 0.5 * pi) / pi));
    const auto hi = static_cast<long long>(std::floor((kTwoPi * omega - theta - 0.5 * pi) / pi));
    return std::max(0LL, hi - lo + 1);
}

// --- spectral Gaussian -------------------------------------------------------

SpectralPath::SpectralPath(std::vector<SpectralAtom> atoms, std::vector<double> xi, std::vector<double> eta)
    : atoms_(std::move(atoms)), xi_(std::move(xi)), eta_(std::move(eta)) {
    sigma_.reserve(atoms_.size());
    for (const auto& a : atoms_) sigma_.push_back(std::sqrt(a.weight));
}

double SpectralPath::derivative(int order, double t) const {
    const double shift = order * 0.5 * std::numbers::pi;
    double s = 0.0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
        const double lam = atoms_[j].frequency;
        const double phase = lam * t + shift;
        s += sigma_[j] * std::pow(lam, order) * (xi_[j] * std::cos(phase) + eta_[j] * std::sin(phase));
    }
    return s;
}

SpectralPath draw_spectral_gaussian(const SpectralGaussianSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng = make_rng(seed);
    std::vector<double> xi(spec.atoms.size()), eta(spec.atoms.size());
    for (std::size_t j = 0; j < spec.atoms.size(); ++j) {
        xi[j] = standard_normal(rng);
        eta[j] = standard_normal(rng);
    }
    return SpectralPath(spec.atoms, std::move(xi), std::move(eta));
}

PathSample sample_spectral_gaussian(const SpectralGaussianSpec& spec, std::uint64_t seed, const Grid& grid, int order) {
    return tabulate(draw_spectral_gaussian(spec, seed), grid, order, seed);
}

// --- chi-square ------------------------------------------------------------

double ChiSquarePath::derivative(int order, double t) const {
    double s = 0.0;
    for (const auto& x : components_) {
        for (int l = 0; l <= order; ++l) s += binomial(order, l) * x.derivative(l, t) * x.derivative(order - l, t);
    }
    return s;
}

ChiSquarePath draw_chi_square(const ChiSquareSpec& spec, std::uint64_t seed) {
    if (spec.n < 1) throw std::invalid_argument("chi-square needs n >= 1");
    std::vector<SpectralPath> comps;
    comps.reserve(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) comps.push_back(draw_spectral_gaussian(spec.base, mix64(seed, static_cast<std::uint64_t>(i))));
    return ChiSquarePath(std::move(comps));
}

PathSample sample_chi_square(const ChiSquareSpec& spec, std::uint64_t seed, const Grid& grid, int order) {
    return tabulate(draw_chi_square(spec, seed), grid, order, seed);
}

// --- shot noise ------------------------------------------------------------

ShotNoisePath::ShotNoisePath(Kernel kernel, std::vector<double> points, std::vector<double> impulses,
                             double truncation_error)
    : kernel_(std::move(kernel)),
      points_(std::move(points)),
      impulses_(std::move(impulses)),
      truncation_error_(truncation_error) {}

double ShotNoisePath::derivative(int order, double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) s += impulses_[i] * kernel_.eval(order, t - points_[i]);
    return s;
}

double shot_noise_truncation_error(const ShotNoise1DSpec& spec, double pad, int max_order) {
    double worst = 0.0;
    for (int j = 0; j <= max_order; ++j) worst = std::max(worst, spec.kernel.envelope_tail(j, pad));
    return 2.0 * spec.lambda * spec.impulse.mean_abs() * worst;
}

double default_window_pad(const ShotNoise1DSpec& spec, int max_order) {
    auto relative = [&](double L) {
        double worst = 0.0;
        for (int j = 0; j <= max_order; ++j) worst = std::max(worst, spec.kernel.envelope_tail(j, L));
        return 2.0 * worst;
    };
    constexpr double target = 1e-8;
    double hi = 1.0;
    while (!(relative(hi) < target)) {
        hi *= 2.0;
        if (hi > 1e7) throw NumericError("kernel envelope tail is not integrable or decays too slowly for an automatic window pad");
    }
    double lo = hi / 2.0;
    if (relative(lo) < target) return lo;
    while (hi - lo > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (relative(mid) < target) hi = mid;
        else lo = mid;
    }
    return hi;
}

ShotNoisePath draw_shot_noise_1d(const ShotNoise1DSpec& spec, std::uint64_t seed, double lo, double hi, int max_order) {
    if (!(spec.lambda > 0.0)) throw std::invalid_argument("shot noise intensity must be positive");
    if (!(hi > lo)) throw std::invalid_argument("shot noise interval must have positive length");
    if (max_order > spec.kernel.smoothness())
        throw std::invalid_argument("requested derivative order exceeds kernel smoothness");
    spec.impulse.validate();
    const double pad = spec.window_pad ? *spec.window_pad : default_window_pad(spec, max_order);
    if (!(pad > 0.0)) throw std::invalid_argument("window pad must be positive");
    const double trunc = shot_noise_truncation_error(spec, pad, max_order);
    if (!std::isfinite(trunc)) throw NumericError("kernel envelope is not integrable at a requested order");

    Rng rng = make_rng(seed);
    const double a = lo - pad, b = hi + pad;
    const auto n = std::poisson_distribution<long long>(spec.lambda * (b - a))(rng);
    std::vector<double> points(static_cast<std::size_t>(n)), impulses(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        points[static_cast<std::size_t>(i)] = a + (b - a) * uniform01(rng);
        impulses[static_cast<std::size_t>(i)] = spec.impulse.sample(rng);
    }
    return ShotNoisePath(spec.kernel, std::move(points), std::move(impulses), trunc);
}

PathSample sample_shot_noise_1d(const ShotNoise1DSpec& spec, std::uint64_t seed, double lo, double hi, const Grid& grid,
                                int order) {
    check_grid_inside(grid, lo, hi, "shot noise");
    const ShotNoisePath path = draw_shot_noise_1d(spec, seed, lo, hi, order);
    return tabulate(path, grid, order, seed, path.truncation_error());
}

// --- regularized diffusion ---------------------------------------------------

double Bump::normalization() {
    static const double c = [] {
        boost::math::quadrature::tanh_sinh<double> integrator;
        const double mass = integrator.integrate([](double x) { return std::exp(-1.0 / (1.0 - x * x)); }, -1.0, 1.0);
        return 1.0 / mass;
    }();
    return c;
}

double Bump::derivative(int order, double x) {
    if (!(std::abs(x) < 1.0)) return 0.0;
    const double c = normalization();
    const double w = 1.0 - x * x;
    const double psi = c * std::exp(-1.0 / w);
    if (order == 0) return psi;
    const double q1 = -2.0 * x / (w * w);
    if (order == 1) return psi * q1;
    if (order == 2) {
        const double q2 = -2.0 * (1.0 + 3.0 * x * x) / (w * w * w);
        return psi * (q1 * q1 + q2);
    }
    const Jet z = Jet::variable(x, 1.0, order);
    const Jet inner = Jet(-1.0, order) / (Jet(1.0, order) - z * z);
    return (exp(inner) * c).derivative(order);
}

double Bump::l1_norm(int order) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate([order](double x) { return std::abs(Bump::derivative(order, x)); }, -1.0, 1.0);
}

DiffusionPath::DiffusionPath(std::vector<double> euler_values, double step, double valid_lo, double valid_hi)
    : values_(std::move(euler_values)), step_(step), valid_lo_(valid_lo), valid_hi_(valid_hi) {}

double DiffusionPath::derivative(int order, double t) const {
    const double slack = 1e-9;
    if (t < valid_lo_ - slack || t > valid_hi_ + slack)
        throw std::out_of_range("regularized diffusion evaluated outside [a, T-1]");
    const auto first = static_cast<long long>(std::ceil((t - 1.0) / step_));
    const auto last = std::min(static_cast<long long>(std::floor((t + 1.0) / step_)),
                               static_cast<long long>(values_.size()) - 1);
    double s = 0.0;
    for (long long i = std::max(first, 0LL); i <= last; ++i) {
        s += Bump::derivative(order, t - static_cast<double>(i) * step_) * values_[static_cast<std::size_t>(i)];
    }
    return s * step_;
}

DiffusionPath draw_regularized_diffusion(const RegularizedDiffusionSpec& spec, std::uint64_t seed) {
    spec.validate();
    const auto n = static_cast<std::size_t>(std::llround(spec.horizon / spec.euler_step));
    const double dt = spec.horizon / static_cast<double>(n);
    const double sqdt = std::sqrt(dt);
    Rng rng = make_rng(seed);
    std::vector<double> x(n + 1);
    x[0] = spec.x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) * dt;
        x[i + 1] = x[i] + spec.drift(s, x[i]) * dt + spec.volatility(s, x[i]) * sqdt * standard_normal(rng);
    }
    return DiffusionPath(std::move(x), dt, spec.burn_in, spec.horizon - 1.0);
}

PathSample sample_regularized_diffusion(const RegularizedDiffusionSpec& spec, std::uint64_t seed, const Grid& grid,
                                        int order) {
    spec.validate();
    if (grid.start < spec.burn_in - 1e-12) throw std::invalid_argument("output grid extends below the burn-in a");
    if (grid.stop > spec.horizon - 1.0 + 1e-12) throw std::invalid_argument("output grid extends beyond T - 1");
    return tabulate(draw_regularized_diffusion(spec, seed), grid, order, seed);
}

// --- generic -----------------------------------------------------------------

std::pair<double, double> default_interval(const ProcessSpec& spec) {
    if (const auto* d = std::get_if<RegularizedDiffusionSpec>(&spec)) return {d->burn_in, d->horizon - 1.0};
    return {0.0, kTwoPi};
}

std::unique_ptr<Path> draw_path(const ProcessSpec& spec, std::uint64_t seed, double lo, double hi, int max_order) {
    struct Visitor {
        std::uint64_t seed;
        double lo, hi;
        int max_order;
        std::unique_ptr<Path> operator()(const SineCosineSpec& s) const {
            return std::make_unique<SineCosinePath>(draw_sine_cosine(s, seed));
        }
        std::unique_ptr<Path> operator()(const SpectralGaussianSpec& s) const {
            return std::make_unique<SpectralPath>(draw_spectral_gaussian(s, seed));
        }
        std::unique_ptr<Path> operator()(const ChiSquareSpec& s) const {
            return std::make_unique<ChiSquarePath>(draw_chi_square(s, seed));
        }
        std::unique_ptr<Path> operator()(const ShotNoise1DSpec& s) const {
            return std::make_unique<ShotNoisePath>(draw_shot_noise_1d(s, seed, lo, hi, max_order));
        }
        std::unique_ptr<Path> operator()(const RegularizedDiffusionSpec& s) const {
            auto p = std::make_unique<DiffusionPath>(draw_regularized_diffusion(s, seed));
            if (lo < p->valid_lo() - 1e-12 || hi > p->valid_hi() + 1e-12)
                throw std::invalid_argument("regularized diffusion interval must lie in [a, T-1]");
            return p;
        }
    };
    return std::visit(Visitor{seed, lo, hi, max_order}, spec);
}

}  // namespace levelset
