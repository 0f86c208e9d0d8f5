#include "levelset/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace levelset {

void CroftonPlan::validate() const {
    if (n_probes < 1) throw std::invalid_argument("n_probes must be >= 1");
    if (dimension() < 2) throw std::invalid_argument("Crofton domain needs d >= 2");
    if (const auto* b = std::get_if<bounds::Ball>(&domain); b && !(b->a > 0.0))
        throw std::invalid_argument("ball radius must be positive");
    if (!(base_step > 0.0) || !(refine_tol > 0.0)) throw std::invalid_argument("base_step and refine_tol must be positive");
}

int CroftonPlan::dimension() const {
    return std::visit([](const auto& d) { return d.d; }, domain);
}

LineProbe draw_line_probe(int d, double a, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    LineProbe p;
    p.v = uniform_direction(rng, d);
    std::vector<double> w;
    double n2 = 0.0;
    do {
        w = uniform_direction(rng, d);
        const double c = dot(w, p.v);
        for (int i = 0; i < d; ++i) w[static_cast<std::size_t>(i)] -= c * p.v[static_cast<std::size_t>(i)];
        n2 = dot(w, w);
    } while (n2 < 1e-12);
    const double r = a * std::pow(uniform01(rng), 1.0 / (d - 1)) / std::sqrt(n2);
    for (auto& x : w) x *= r;
    p.y = std::move(w);
    return p;
}

PlaneProbe draw_plane_probe(int ambient, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    const auto n = static_cast<std::size_t>(ambient);
    for (;;) {
        std::vector<double> g1(n), g2(n);
        for (auto& x : g1) x = standard_normal(rng);
        for (auto& x : g2) x = standard_normal(rng);
        // Condition number of [g1 g2] from its 2x2 Gram matrix.
        const double a = dot(g1, g1), b = dot(g1, g2), c = dot(g2, g2);
        const double tr = 0.5 * (a + c), disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        const double lmin = tr - disc, lmax = tr + disc;
        if (!(lmin > 0.0) || std::sqrt(lmax / lmin) > 1e8) continue;
        PlaneProbe p;
        const double n1 = std::sqrt(a);
        for (auto& x : g1) x /= n1;
        const double proj = dot(g1, g2);
        for (std::size_t i = 0; i < n; ++i) g2[i] -= proj * g1[i];
        const double n2 = norm(g2);
        for (auto& x : g2) x /= n2;
        p.e1 = std::move(g1);
        p.e2 = std::move(g2);
        return p;
    }
}

namespace {

template <class Probe>
CroftonResult crofton(double constant, const CroftonPlan& plan, Probe&& probe) {
    const auto n = static_cast<std::size_t>(plan.n_probes);
    std::vector<CrossingCount> counts(n);
    parallel_for(n, [&](std::size_t i) { counts[i] = probe(mix64(plan.seed, i)); });

    CroftonResult r;
    r.counts.reserve(n);
    std::vector<double> values;
    values.reserve(n);
    for (const auto& c : counts) {
        if (c.degenerate) {
            ++r.degenerate_probes;
            r.counts.push_back(-1);
            continue;
        }
        if (c.undercount_flag) ++r.flagged_probes;
        r.counts.push_back(c.count);
        values.push_back(constant * static_cast<double>(c.count));
    }
    if (values.empty()) {
        r.estimate.n = 0;
        return r;
    }
    r.estimate = estimate_moment(values, 1, mix64(plan.seed, ~0ULL));
    return r;
}

}  // namespace

CroftonResult estimate_level_measure_ball(const Field& field, double u, const CroftonPlan& plan) {
    plan.validate();
    const auto* ball = std::get_if<bounds::Ball>(&plan.domain);
    if (!ball) throw std::invalid_argument("plan domain is not a ball");
    if (field.on_sphere() || field.ambient_dim() != ball->d)
        throw std::invalid_argument("field dimension does not match the ball");
    const double c = bounds::crofton_constant(plan.domain);
    return crofton(c, plan, [&](std::uint64_t seed) {
        const LineProbe p = draw_line_probe(ball->d, ball->a, seed);
        return crossings_along_line(field, p.v, p.y, ball->a, u, plan.base_step, plan.refine_tol);
    });
}

CroftonResult estimate_level_measure_sphere(const Field& field, double u, const CroftonPlan& plan) {
    plan.validate();
    const auto* sphere = std::get_if<bounds::Sphere>(&plan.domain);
    if (!sphere) throw std::invalid_argument("plan domain is not a sphere");
    if (!field.on_sphere() || field.ambient_dim() != sphere->d + 1)
        throw std::invalid_argument("field dimension does not match the sphere");
    const double c = bounds::crofton_constant(plan.domain);
    return crofton(c, plan, [&](std::uint64_t seed) {
        const PlaneProbe p = draw_plane_probe(sphere->d + 1, seed);
        return crossings_along_great_circle(field, p.e1, p.e2, u, plan.base_step, plan.refine_tol);
    });
}

CroftonResult estimate_level_measure(const Field& field, double u, const CroftonPlan& plan) {
    if (std::holds_alternative<bounds::Ball>(plan.domain)) return estimate_level_measure_ball(field, u, plan);
    return estimate_level_measure_sphere(field, u, plan);
}

MeasureMoment estimate_measure_pth_moment(const FieldSpec& spec, double u, int p, long long n_fields,
                                          const CroftonPlan& plan) {
    plan.validate();
    if (n_fields < 1) throw std::invalid_argument("n_fields must be >= 1");
    if (p < 1) throw std::invalid_argument("moment order must be >= 1");
    const double c = bounds::crofton_constant(plan.domain);

    MeasureMoment out;
    double pooled = 0.0;
    long long pooled_n = 0;
    for (long long i = 0; i < n_fields; ++i) {
        const std::uint64_t field_seed = mix64(plan.seed, static_cast<std::uint64_t>(i));
        const auto field = sample_field(spec, field_seed);
        CroftonPlan inner = plan;
        inner.seed = mix64(field_seed, 1);
        const CroftonResult r = estimate_level_measure(*field, u, inner);
        out.per_field.push_back(r.estimate.point_estimate);
        if (r.estimate.point_estimate > 0.0)
            out.max_inner_relative_error =
                std::max(out.max_inner_relative_error, r.estimate.std_error / r.estimate.point_estimate);
        for (long long k : r.counts) {
            if (k < 0) continue;
            pooled += std::pow(static_cast<double>(k), p);
            ++pooled_n;
        }
    }
    out.inner_error_warning = out.max_inner_relative_error > 0.1;
    out.moment = estimate_moment(out.per_field, p, mix64(plan.seed, ~1ULL));
    out.jensen_proxy = pooled_n > 0 ? std::pow(c, p) * pooled / static_cast<double>(pooled_n) : 0.0;
    return out;
}

}  // namespace levelset
