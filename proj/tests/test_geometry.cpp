#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "levelset/geometry.hpp"

using namespace levelset;

namespace {

constexpr double kPi = std::numbers::pi;

DeterministicField shell(double r, int d = 2) {
    DeterministicFieldSpec s;
    s.kind = DeterministicFieldSpec::Kind::shell;
    s.d = d;
    s.r = r;
    return DeterministicField(s);
}

CroftonPlan ball_plan(long long n, std::uint64_t seed, int d = 2, double a = 1.0, double step = 1e-2) {
    CroftonPlan p;
    p.n_probes = n;
    p.seed = seed;
    p.domain = bounds::Ball{d, a};
    p.base_step = step;
    return p;
}

struct ThreadSetup {
    ThreadSetup() { set_thread_count(static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))); }
} const thread_setup;

}  // namespace

TEST_CASE("probe laws") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto lp = draw_line_probe(3, 2.0, s);
        CHECK(norm(lp.v) == doctest::Approx(1.0));
        CHECK(std::abs(dot(lp.v, lp.y)) < 1e-12);
        CHECK(norm(lp.y) < 2.0);
        const auto pp = draw_plane_probe(4, s);
        CHECK(norm(pp.e1) == doctest::Approx(1.0));
        CHECK(norm(pp.e2) == doctest::Approx(1.0));
        CHECK(std::abs(dot(pp.e1, pp.e2)) < 1e-12);
    }
    // |y| for d = 3: radius a U^(1/2), so E|y|^2 = a^2 / 2
    double m = 0.0;
    const int n = 20000;
    for (int s = 0; s < n; ++s) {
        const auto lp = draw_line_probe(3, 1.0, static_cast<std::uint64_t>(s));
        m += dot(lp.y, lp.y);
    }
    CHECK(m / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("circle, diameter and constant fields on the disk") {
    const auto circle = estimate_level_measure_ball(shell(0.5), 0.0, ball_plan(100000, 1));
    CHECK(std::abs(circle.estimate.point_estimate - kPi) / kPi < 0.01);
    CHECK(circle.estimate.ci_low <= kPi);
    CHECK(circle.estimate.ci_high >= kPi);

    DeterministicFieldSpec c;
    c.kind = DeterministicFieldSpec::Kind::coordinate;
    const auto diam = estimate_level_measure_ball(DeterministicField(c), 0.0, ball_plan(100000, 2));
    CHECK(std::abs(diam.estimate.point_estimate - 2.0) < 4 * diam.estimate.std_error + 1e-12);

    DeterministicFieldSpec k;
    k.kind = DeterministicFieldSpec::Kind::constant;
    k.c = 1.0;
    const auto zero = estimate_level_measure_ball(DeterministicField(k), 0.0, ball_plan(1000, 3));
    CHECK(zero.estimate.point_estimate == 0.0);
    CHECK(zero.estimate.std_error == 0.0);
    CHECK(zero.degenerate_probes == 0);
}

TEST_CASE("sphere in three dimensions") {
    // |t|^2 - r^2 on the unit ball of R^3: area 4 pi r^2
    const auto s = estimate_level_measure_ball(shell(0.5, 3), 0.0, ball_plan(50000, 4, 3));
    CHECK(std::abs(s.estimate.point_estimate - kPi) < 4 * s.estimate.std_error);
}

TEST_CASE("great-circle estimator on S^2") {
    DeterministicFieldSpec h;
    h.kind = DeterministicFieldSpec::Kind::coordinate;
    h.on_sphere = true;
    h.d = 2;
    h.index = 2;
    const DeterministicField height(h);
    CroftonPlan p;
    p.n_probes = 20000;
    p.seed = 5;
    p.domain = bounds::Sphere{2};
    const auto eq = estimate_level_measure_sphere(height, 0.0, p);
    CHECK(eq.estimate.point_estimate == doctest::Approx(2 * kPi).epsilon(1e-12));
    CHECK(eq.estimate.std_error == 0.0);

    const auto lat = estimate_level_measure_sphere(height, 0.5, p);
    const double truth = 2 * kPi * std::sqrt(0.75);
    CHECK(std::abs(lat.estimate.point_estimate - truth) < 4 * lat.estimate.std_error);

    h.kind = DeterministicFieldSpec::Kind::constant;
    h.c = 3.0;
    CHECK(estimate_level_measure(DeterministicField(h), 0.0, p).estimate.point_estimate == 0.0);
}

TEST_CASE("estimator error decays like n^-1/2") {
    const auto f = shell(0.5);
    std::vector<double> logn, logerr;
    for (long long n : {100LL, 1000LL, 10000LL, 100000LL}) {
        double sq = 0.0;
        const int seeds = 20;
        for (int s = 0; s < seeds; ++s) {
            const auto r = estimate_level_measure_ball(f, 0.0, ball_plan(n, 1000 + static_cast<std::uint64_t>(s), 2, 1.0, 0.05));
            sq += std::pow(r.estimate.point_estimate - kPi, 2);
        }
        logn.push_back(std::log(static_cast<double>(n)));
        logerr.push_back(0.5 * std::log(sq / seeds));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < logn.size(); ++i) {
        mx += logn[i];
        my += logerr[i];
    }
    mx /= static_cast<double>(logn.size());
    my /= static_cast<double>(logn.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < logn.size(); ++i) {
        sxy += (logn[i] - mx) * (logerr[i] - my);
        sxx += (logn[i] - mx) * (logn[i] - mx);
    }
    const double slope = sxy / sxx;
    CHECK(slope > -0.6);
    CHECK(slope < -0.4);
}

TEST_CASE("estimate is linear in the circle radius") {
    std::vector<double> rs, est;
    for (int i = 1; i <= 9; ++i) {
        const double r = 0.1 * i;
        rs.push_back(r);
        est.push_back(estimate_level_measure_ball(shell(r), 0.0, ball_plan(40000, 50 + static_cast<std::uint64_t>(i), 2, 1.0, 0.05))
                          .estimate.point_estimate);
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        sxy += rs[i] * est[i];
        sxx += rs[i] * rs[i];
    }
    CHECK(sxy / sxx == doctest::Approx(2 * kPi).epsilon(0.02));
}

TEST_CASE("rotation invariance") {
    DeterministicFieldSpec c;
    c.kind = DeterministicFieldSpec::Kind::coordinate;
    const double a = 0.7;
    DeterministicFieldSpec rot = c;
    rot.rotation = {std::cos(a), -std::sin(a), std::sin(a), std::cos(a)};
    const auto r1 = estimate_level_measure_ball(DeterministicField(c), 0.0, ball_plan(50000, 60));
    const auto r2 = estimate_level_measure_ball(DeterministicField(rot), 0.0, ball_plan(50000, 61));
    const double se = std::hypot(r1.estimate.std_error, r2.estimate.std_error);
    CHECK(std::abs(r1.estimate.point_estimate - r2.estimate.point_estimate) < 3 * se);
}

TEST_CASE("moments of the level-set measure") {
    DeterministicFieldSpec s;
    s.kind = DeterministicFieldSpec::Kind::shell;
    s.r = 0.5;
    const auto det = estimate_measure_pth_moment(s, 0.0, 2, 5, ball_plan(20000, 70));
    CHECK(det.moment.point_estimate == doctest::Approx(kPi * kPi).epsilon(0.03));
    CHECK_FALSE(det.inner_error_warning);
    CHECK(det.jensen_proxy >= det.moment.point_estimate);

    // p = 1 equals the mean of the per-field Crofton estimates
    ShotNoiseBallSpec sn;
    sn.d = 2;
    sn.lambda = 1.0;
    sn.pad = 2.5;
    const auto plan = ball_plan(400, 71, 2, 1.0, 0.05);
    const auto m1 = estimate_measure_pth_moment(sn, 1.0, 1, 20, plan);
    double mean = 0.0;
    for (long long i = 0; i < 20; ++i) {
        const auto seed = mix64(plan.seed, static_cast<std::uint64_t>(i));
        const auto field = sample_field(sn, seed);
        CroftonPlan inner = plan;
        inner.seed = mix64(seed, 1);
        mean += estimate_level_measure(*field, 1.0, inner).estimate.point_estimate;
    }
    CHECK(m1.moment.point_estimate == doctest::Approx(mean / 20).epsilon(1e-12));

    const auto m2 = estimate_measure_pth_moment(sn, 1.0, 2, 30, plan);
    CHECK(m2.jensen_proxy >= m2.moment.point_estimate - 3 * m2.moment.ci_width());
}

TEST_CASE("shot-noise fields") {
    // Campbell: E X(0) = lambda E beta pi^(d/2) for exp(-|t|^2)
    ShotNoiseBallSpec sn;
    sn.d = 3;
    sn.lambda = 0.5;
    sn.pad = 4.0;
    sn.impulse = Impulse::exponential(2.0);
    const int n = 4000;
    double s = 0, s2 = 0;
    const std::vector<double> origin(3, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto f = sample_field(sn, static_cast<std::uint64_t>(i));
        const double x = f->value(origin);
        s += x;
        s2 += x * x;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5 * 0.5 * std::pow(kPi, 1.5)) < 5 * std::sqrt(var / n));

    // sphere field with no points is identically zero
    SphereShotNoiseSpec sp;
    sp.lambda = 1e-12;
    const auto z = sample_field(sp, 1);
    const std::vector<double> north{0.0, 0.0, 1.0};
    CHECK(z->value(north) == 0.0);

    // analytic gradient against finite differences
    sp.lambda = 1.0;
    const auto g = sample_field(sp, 3);
    std::vector<double> x{0.3, -0.4, std::sqrt(1 - 0.25)}, grad(3);
    g->gradient(x, grad);
    const std::vector<double> t{0.4 * 0.866, 0.3 * 0.866, 0.0};  // not tangent in general; project
    std::vector<double> dir(3);
    const double xt = dot(x, t);
    for (int i = 0; i < 3; ++i) dir[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)] - xt * x[static_cast<std::size_t>(i)];
    const double nd = norm(dir);
    for (auto& v : dir) v /= nd;
    const double h = 1e-6;
    auto at = [&](double s) {
        std::vector<double> y(3);
        for (int i = 0; i < 3; ++i)
            y[static_cast<std::size_t>(i)] = std::cos(s) * x[static_cast<std::size_t>(i)] + std::sin(s) * dir[static_cast<std::size_t>(i)];
        return g->value(y);
    };
    CHECK(dot(grad, dir) == doctest::Approx((at(h) - at(-h)) / (2 * h)).epsilon(1e-5));
}
