#include "levelset/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "levelset/simulate.hpp"

namespace levelset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int counting_order(const ProcessSpec& spec) {
    if (const auto* s = std::get_if<ShotNoise1DSpec>(&spec)) return std::min(1, s->kernel.smoothness());
    return 1;
}

// Composite 20-point Gauss-Legendre over `panels` equal panels of [0, T].
template <class F>
double composite(F&& f, double T, int panels) {
    const double w = T / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) s += boost::math::quadrature::gauss<double, 20>::integrate(f, i * w, (i + 1) * w);
    return s;
}

struct HalfLine {
    double value = kInf;
    double coarse = kInf;
    double rate = 0.0;
    double tail = 0.0;
    bool finite = false;
};

// int_0^inf f on [0, T] by quadrature, the tail by the log-growth rate of f
// on [T, 2T]: a nonnegative rate means the integral diverges.
template <class F>
HalfLine improper_integral(F&& f, double T) {
    HalfLine h;
    const double fT = f(T), f2T = f(2.0 * T);
    if (!std::isfinite(fT) || !std::isfinite(f2T)) return h;
    if (fT > 0.0 && f2T > 0.0) h.rate = (std::log(f2T) - std::log(fT)) / T;
    else if (fT > 0.0) h.rate = -kInf;
    if (h.rate >= 0.0) return h;
    const double fine = composite(f, T, 400);
    h.coarse = composite(f, T, 200);
    if (!std::isfinite(fine)) return h;
    h.tail = fT > 0.0 ? fT / -h.rate : 0.0;
    h.value = fine + h.tail;
    h.finite = true;
    return h;
}

std::string describe(const HalfLine& h) {
    std::ostringstream os;
    os.precision(10);
    if (!h.finite) {
        os << "divergent (log-growth rate " << h.rate << " >= 0 or non-finite integrand)";
    } else {
        os << "value " << h.value << ", coarse quadrature " << h.coarse << ", tail estimate " << h.tail
           << ", log-growth rate " << h.rate;
    }
    return os.str();
}

ConditionReport make_report(std::string name, double value, std::string detail) {
    ConditionReport r;
    r.condition_name = std::move(name);
    r.converged = std::isfinite(value);
    r.value = r.converged ? value : kInf;
    r.detail = std::move(detail);
    return r;
}

}  // namespace

CrossingMoments estimate_crossing_moments(const ProcessSpec& spec, double u, const std::vector<int>& p_list,
                                          long long n_replicates, std::uint64_t seed, const CountingParams& counting,
                                          std::optional<std::pair<double, double>> interval) {
    if (n_replicates < 100) throw std::invalid_argument("estimate_crossing_moments needs at least 100 replicates");
    if (p_list.empty()) throw std::invalid_argument("p_list must not be empty");
    const auto [lo, hi] = interval ? *interval : default_interval(spec);
    const int order = counting_order(spec);
    const auto n = static_cast<std::size_t>(n_replicates);
    std::vector<CrossingCount> counts(n);
    parallel_for(n, [&](std::size_t i) {
        const auto path = draw_path(spec, mix64(seed, i), lo, hi, order);
        counts[i] = count_crossings(*path, lo, hi, u, counting);
    });
    CrossingMoments out;
    out.counts.reserve(n);
    for (const auto& c : counts) {
        out.counts.push_back(static_cast<double>(c.count));
        if (c.undercount_flag) ++out.flagged_replicates;
    }
    for (int p : p_list) out.moments.push_back(estimate_moment(out.counts, p, mix64(mix64(seed, 0xB007ULL), p)));
    return out;
}

BoundComparison compare_bound(const MomentEstimate& estimate, double bound) {
    if (std::isinf(bound) && bound > 0) return {true, kInf};
    return {estimate.ci_high <= bound, bound - estimate.point_estimate};
}

TailIndex tail_index(const std::vector<double>& samples, double top_fraction, std::uint64_t seed) {
    if (samples.size() < 1000) throw std::invalid_argument("tail_index needs at least 1000 samples");
    if (!(top_fraction > 0.0 && top_fraction <= 0.5)) throw std::invalid_argument("top_fraction must be in (0, 0.5]");
    std::vector<double> x = samples;
    const bool integral = std::all_of(x.begin(), x.end(), [](double v) { return v == std::round(v); });
    if (integral) {
        Rng rng = make_rng(seed);
        for (auto& v : x) v += uniform01(rng) - 0.5;
    }
    const auto k = static_cast<std::size_t>(std::floor(top_fraction * static_cast<double>(x.size())));
    if (k < 2) throw std::invalid_argument("top fraction keeps fewer than two order statistics");
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end(), std::greater<>());
    const double threshold = x[k];
    if (!(threshold > 0.0)) throw std::invalid_argument("tail_index needs positive upper order statistics");
    double h = 0.0;
    for (std::size_t i = 0; i < k; ++i) h += std::log(x[i] / threshold);
    h /= static_cast<double>(k);
    TailIndex t;
    t.index_estimate = h > 0.0 ? 1.0 / h : kInf;
    if (t.index_estimate < kTailIndexAll) t.finite_moment_guess = std::max(0, static_cast<int>(std::floor(t.index_estimate - 0.1)));
    return t;
}

std::string ConditionReport::to_json() const {
    nlohmann::ordered_json j;
    j["condition_name"] = condition_name;
    if (std::isfinite(value)) j["value"] = value;
    else j["value"] = "inf";
    j["converged"] = converged;
    j["detail"] = detail;
    return j.dump(2);
}

std::vector<double> shotnoise_dkn(const Kernel& kernel, int k, int n_max) {
    if (k < 0 || k > kernel.smoothness()) throw std::invalid_argument("kernel is not smooth enough for this k");
    if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
    std::vector<double> d;
    for (int n = 1; n <= n_max; ++n) {
        // t - s ranges over [-2, 2] for n = 1 and |t - s| in [n-2, n+1] otherwise.
        const double lo = n == 1 ? 0.0 : n - 2.0;
        const double hi = n == 1 ? 2.0 : n + 1.0;
        const int steps = 1000;
        const double h = (hi - lo) / steps;
        double m = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double r = lo + i * h;
            m = std::max({m, std::abs(kernel.eval(k, r)), std::abs(kernel.eval(k, -r))});
        }
        d.push_back(m);
    }
    return d;
}

ConditionReport check_shotnoise_H2(const Kernel& kernel, int k, int n_max) {
    if (k > kernel.max_envelope_order()) throw std::invalid_argument("no envelope for this derivative order");
    const auto d = shotnoise_dkn(kernel, k, n_max);
    double partial = 0.0;
    for (double v : d) partial += v;
    // sum_{n > n_max} d_{k,n} <= env(n_max - 1) + int_{n_max - 1}^inf env
    const double start = n_max - 1.0;
    const double tail = kernel.envelope(k, start) + kernel.envelope_tail(k, start);
    std::ostringstream os;
    os.precision(10);
    os << "kernel " << kernel.name() << ", k = " << k << ", sum of d_{k,n} for n <= " << n_max << ": " << partial
       << ", envelope tail bound: " << tail << "; d_{k,1..3} = " << d[0] << ", " << d[1];
    if (d.size() > 2) os << ", " << d[2];
    return make_report("H2_shotnoise", std::isfinite(tail) ? partial + tail : kInf, os.str());
}

ConditionReport check_density_condition(DensityCondition kind, const Kernel& kernel, double lambda,
                                        const Impulse& impulse) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    impulse.validate();
    const double T = 30.0 / lambda;

    if (kind == DensityCondition::A) {
        const auto bound = impulse.density_bound();
        if (!bound) return make_report("density_A", kInf, "impulse " + impulse.describe() + " has no bounded density");
        auto side = [&](double sign) {
            return improper_integral([&](double t) { return lambda * std::exp(-lambda * t) / std::abs(kernel(sign * t)); },
                                     T);
        };
        const HalfLine minus = side(-1.0), plus = side(1.0);
        const double value = std::min(minus.value, plus.value);
        std::ostringstream os;
        os << "E(1/|g(-T)|): " << describe(minus) << "; E(1/|g(T)|): " << describe(plus) << "; impulse density bound "
           << *bound;
        if (std::isfinite(value)) os << "; density of X(0) bounded by " << *bound * value;
        return make_report("density_A", value, os.str());
    }

    const bool b1 = kind == DensityCondition::B1;
    const std::string name = b1 ? "density_B1" : "density_B2";
    const double inv_beta = impulse.mean_inverse_abs();
    if (!std::isfinite(inv_beta)) return make_report(name, kInf, "E(1/|beta|) is infinite for " + impulse.describe());
    if (kernel.smoothness() < 0) throw std::invalid_argument("kernel must be differentiable");
    const double sign = b1 ? 1.0 : -1.0;
    // Derivative of x -> g(sign x) is sign g'(sign x); it must stay negative.
    const int grid = 20000;
    const double h = 2.0 * T / grid;
    std::vector<double> running(grid + 1);
    double inf_so_far = kInf;
    for (int i = 0; i <= grid; ++i) {
        const double s = i * h;
        const double slope = sign * kernel.eval(1, sign * s);
        if (i > 0 && !(slope < 0.0)) {
            std::ostringstream os;
            os << "g" << (b1 ? "(x)" : "(-x)") << " is not strictly decreasing on (0, inf): derivative " << slope
               << " at x = " << s;
            return make_report(name, kInf, os.str());
        }
        inf_so_far = std::min(inf_so_far, std::abs(slope));
        running[static_cast<std::size_t>(i)] = inf_so_far;
    }
    auto g_star = [&](double t) {
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(t / h), grid);
        return std::min(running[i], std::abs(kernel.eval(1, sign * t)));
    };
    const HalfLine r = improper_integral([&](double t) { return lambda * std::exp(-lambda * t) / g_star(t); }, T);
    std::ostringstream os;
    os << "E(1/g_*(T)): " << describe(r) << "; E(1/|beta|) = " << inv_beta;
    if (running[0] == 0.0) os << "; g'(0) = 0, so g_* vanishes at the origin";
    if (r.finite) os << "; density of X(0) bounded by " << lambda * inv_beta * r.value;
    return make_report(name, r.value, os.str());
}

ConditionReport check_density_condition_radial(int d, int q, double lambda) {
    if (d < 2 || q < 1) throw std::invalid_argument("radial check needs d >= 2 and q >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double kd = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(1.0 + 0.5 * d);
    const double lk = lambda * kd;
    const bool converges = 2 * q < d || (2 * q == d && lk > 1.0);
    std::ostringstream os;
    os.precision(12);
    os << "d = " << d << ", q = " << q << ", lambda k_d = " << lk;
    if (!converges) {
        os << "; integrand grows: requires 2q < d, or 2q = d and lambda k_d > 1";
        return make_report("density_radial_G", kInf, os.str());
    }
    auto log_f = [&](double r) {
        return std::pow(r, 2 * q) - lk * std::pow(r, d) + (2.0 * d - 2.0 * q - 1.0) * std::log(r) + std::log(d * lk);
    };
    double R = 1.0;
    while (log_f(R) > -60.0 && R < 1e4) R *= 1.25;
    auto f = [&](double r) { return r > 0.0 ? std::exp(log_f(r)) : 0.0; };
    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, R, 20, 1e-13, &err);
    os << "; quadrature on [0, " << R << "], error estimate " << err;
    return make_report("density_radial_G", value, os.str());
}

}  // namespace levelset
