#include "levelset/field.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace levelset {

namespace {

constexpr int kMaxDim = 16;
using Buffer = std::array<double, kMaxDim>;

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("field dimension must be in [1, 16]");
}

// out = R x (row-major), or x when R is empty.
void apply(const std::vector<double>& r, std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    if (r.empty()) {
        for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += r[i * n + j] * x[j];
        out[i] = s;
    }
}

// out = R^T x.
void apply_transpose(const std::vector<double>& r, std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    if (r.empty()) {
        for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
        return;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += r[i * n + j] * x[i];
        out[j] = s;
    }
}

}  // namespace

std::pair<double, double> Field::value_slope(std::span<const double> x, std::span<const double> direction) const {
    Buffer g{};
    const auto n = static_cast<std::size_t>(ambient_dim());
    gradient(x, std::span<double>(g.data(), n));
    return {value(x), dot(std::span<const double>(g.data(), n), direction)};
}

// --- restrictions ------------------------------------------------------------

LinePath::LinePath(const Field& field, std::vector<double> y, std::vector<double> v)
    : field_(field), y_(std::move(y)), v_(std::move(v)), x_(y_.size()) {
    if (y_.size() != v_.size() || static_cast<int>(y_.size()) != field.ambient_dim())
        throw std::invalid_argument("line dimension does not match the field");
}

std::pair<double, double> LinePath::value_slope(double t) const {
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = y_[i] + t * v_[i];
    return field_.value_slope(x_, v_);
}

double LinePath::derivative(int order, double t) const {
    if (order == 0) {
        for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = y_[i] + t * v_[i];
        return field_.value(x_);
    }
    if (order == 1) return value_slope(t).second;
    throw std::out_of_range("line restriction provides derivatives up to order 1");
}

GreatCirclePath::GreatCirclePath(const Field& field, std::vector<double> e1, std::vector<double> e2)
    : field_(field), e1_(std::move(e1)), e2_(std::move(e2)), x_(e1_.size()), w_(e1_.size()) {
    if (e1_.size() != e2_.size() || static_cast<int>(e1_.size()) != field.ambient_dim())
        throw std::invalid_argument("plane dimension does not match the field");
}

std::pair<double, double> GreatCirclePath::value_slope(double t) const {
    const double c = std::cos(t), s = std::sin(t);
    for (std::size_t i = 0; i < x_.size(); ++i) {
        x_[i] = c * e1_[i] + s * e2_[i];
        w_[i] = -s * e1_[i] + c * e2_[i];
    }
    return field_.value_slope(x_, w_);
}

double GreatCirclePath::derivative(int order, double t) const {
    if (order == 0) {
        const double c = std::cos(t), s = std::sin(t);
        for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = c * e1_[i] + s * e2_[i];
        return field_.value(x_);
    }
    if (order == 1) return value_slope(t).second;
    throw std::out_of_range("great-circle restriction provides derivatives up to order 1");
}

// --- deterministic -----------------------------------------------------------

DeterministicField::DeterministicField(DeterministicFieldSpec spec) : spec_(std::move(spec)) {
    if (spec_.d < 1) throw std::invalid_argument("deterministic field needs d >= 1");
    const int n = spec_.ambient_dim();
    check_dim(n);
    if (spec_.kind == DeterministicFieldSpec::Kind::coordinate && (spec_.index < 0 || spec_.index >= n))
        throw std::invalid_argument("coordinate index out of range");
    if (!spec_.rotation.empty()) {
        if (spec_.rotation.size() != static_cast<std::size_t>(n * n))
            throw std::invalid_argument("rotation must be an ambient x ambient matrix");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += spec_.rotation[static_cast<std::size_t>(i * n + l)] *
                                                 spec_.rotation[static_cast<std::size_t>(j * n + l)];
                if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-9) throw std::invalid_argument("rotation is not orthogonal");
            }
    }
}

double DeterministicField::value(std::span<const double> x) const {
    using K = DeterministicFieldSpec::Kind;
    if (spec_.kind == K::constant) return spec_.c;
    Buffer r{};
    std::span<double> rx(r.data(), x.size());
    apply(spec_.rotation, x, rx);
    if (spec_.kind == K::coordinate) return rx[static_cast<std::size_t>(spec_.index)];
    double s = 0.0;
    for (double v : rx) s += v * v;
    return s - spec_.r * spec_.r;
}

void DeterministicField::gradient(std::span<const double> x, std::span<double> out) const {
    using K = DeterministicFieldSpec::Kind;
    Buffer g{};
    std::span<double> gs(g.data(), x.size());
    switch (spec_.kind) {
        case K::constant: break;
        case K::coordinate: gs[static_cast<std::size_t>(spec_.index)] = 1.0; break;
        case K::shell: {
            Buffer r{};
            std::span<double> rx(r.data(), x.size());
            apply(spec_.rotation, x, rx);
            for (std::size_t i = 0; i < x.size(); ++i) gs[i] = 2.0 * rx[i];
            break;
        }
    }
    apply_transpose(spec_.rotation, gs, out);
}

// --- ball shot noise ---------------------------------------------------------

BallShotNoiseField::BallShotNoiseField(ShotNoiseBallSpec spec, std::vector<std::vector<double>> points,
                                       std::vector<double> impulses)
    : spec_(std::move(spec)), points_(std::move(points)), impulses_(std::move(impulses)) {}

double BallShotNoiseField::value(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double rho = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double dj = x[j] - points_[i][j];
            rho += dj * dj;
        }
        s += impulses_[i] * spec_.kernel.psi(rho);
    }
    return s;
}

void BallShotNoiseField::gradient(std::span<const double> x, std::span<double> out) const {
    const int q = spec_.kernel.q;
    for (auto& o : out) o = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double rho = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double dj = x[j] - points_[i][j];
            rho += dj * dj;
        }
        // d/dx psi(|x - tau|^2) = psi'(rho) 2 (x - tau), psi'(rho) = -q rho^(q-1) psi(rho)
        const double dpsi = -q * (q == 1 ? 1.0 : std::pow(rho, q - 1)) * spec_.kernel.psi(rho);
        const double f = 2.0 * impulses_[i] * dpsi;
        for (std::size_t j = 0; j < x.size(); ++j) out[j] += f * (x[j] - points_[i][j]);
    }
}

double BallShotNoiseField::truncation_error() const {
    // lambda E|beta| int_{|s| > pad} exp(-|s|^(2q)) ds
    const int d = spec_.d;
    const double two_q = 2.0 * spec_.kernel.q;
    const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    const double tail = area / two_q * boost::math::tgamma(d / two_q, std::pow(spec_.pad, two_q));
    return spec_.lambda * spec_.impulse.mean_abs() * tail;
}

// --- sphere shot noise -------------------------------------------------------

SphereShotNoiseField::SphereShotNoiseField(SphereShotNoiseSpec spec, std::vector<std::vector<double>> points,
                                           std::vector<double> impulses)
    : spec_(std::move(spec)), points_(std::move(points)), impulses_(std::move(impulses)) {}

double SphereShotNoiseField::value(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double c = dot(x, points_[i]);
        double perp2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double r = x[j] - c * points_[i][j];
            perp2 += r * r;
        }
        const double angle = std::atan2(std::sqrt(perp2), c);
        s += impulses_[i] * std::exp(-angle * angle / spec_.kernel.width);
    }
    return s;
}

void SphereShotNoiseField::gradient(std::span<const double> x, std::span<double> out) const {
    for (auto& o : out) o = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        const double c = dot(x, p);
        double perp2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double r = x[j] - c * p[j];
            perp2 += r * r;
        }
        const double s = std::sqrt(perp2);
        const double angle = std::atan2(s, c);
        // The squared distance is not differentiable at the antipode; its
        // weight there is exp(-pi^2 / width) and is dropped.
        if (angle > std::numbers::pi - 1e-6) continue;
        // Along a tangent w: d angle = -(w . p) / sin(angle).
        const double ratio = s < 1e-8 ? 1.0 : angle / s;
        const double g = std::exp(-angle * angle / spec_.kernel.width);
        const double f = impulses_[i] * g * (-1.0 / spec_.kernel.width) * (-2.0 * ratio);
        for (std::size_t j = 0; j < x.size(); ++j) out[j] += f * p[j];
    }
}

double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

// --- sampling ----------------------------------------------------------------

std::unique_ptr<Field> sample_field(const FieldSpec& spec, std::uint64_t seed) {
    struct Visitor {
        std::uint64_t seed;
        std::unique_ptr<Field> operator()(const DeterministicFieldSpec& s) const {
            return std::make_unique<DeterministicField>(s);
        }
        std::unique_ptr<Field> operator()(const ShotNoiseBallSpec& s) const {
            if (s.d < 2) throw std::invalid_argument("ball shot noise needs d >= 2");
            check_dim(s.d);
            if (!(s.radius > 0.0 && s.lambda > 0.0 && s.pad >= 0.0))
                throw std::invalid_argument("ball shot noise needs radius > 0, lambda > 0, pad >= 0");
            if (s.kernel.q < 1) throw std::invalid_argument("radial kernel needs q >= 1");
            s.impulse.validate();
            Rng rng = make_rng(seed);
            const double big = s.radius + s.pad;
            const double volume = std::pow(std::numbers::pi, 0.5 * s.d) / std::tgamma(1.0 + 0.5 * s.d) * std::pow(big, s.d);
            const auto n = std::poisson_distribution<long long>(s.lambda * volume)(rng);
            std::vector<std::vector<double>> pts;
            std::vector<double> betas;
            pts.reserve(static_cast<std::size_t>(n));
            for (long long i = 0; i < n; ++i) {
                auto dir = uniform_direction(rng, s.d);
                const double r = big * std::pow(uniform01(rng), 1.0 / s.d);
                for (auto& v : dir) v *= r;
                pts.push_back(std::move(dir));
                betas.push_back(s.impulse.sample(rng));
            }
            return std::make_unique<BallShotNoiseField>(s, std::move(pts), std::move(betas));
        }
        std::unique_ptr<Field> operator()(const SphereShotNoiseSpec& s) const {
            if (s.d < 1) throw std::invalid_argument("sphere shot noise needs d >= 1");
            check_dim(s.d + 1);
            if (!(s.lambda > 0.0 && s.kernel.width > 0.0))
                throw std::invalid_argument("sphere shot noise needs lambda > 0 and width > 0");
            s.impulse.validate();
            Rng rng = make_rng(seed);
            const auto n = std::poisson_distribution<long long>(s.lambda * sphere_area(s.d))(rng);
            std::vector<std::vector<double>> pts;
            std::vector<double> betas;
            for (long long i = 0; i < n; ++i) {
                pts.push_back(uniform_direction(rng, s.d + 1));
                betas.push_back(s.impulse.sample(rng));
            }
            return std::make_unique<SphereShotNoiseField>(s, std::move(pts), std::move(betas));
        }
    };
    return std::visit(Visitor{seed}, spec);
}

}  // namespace levelset
