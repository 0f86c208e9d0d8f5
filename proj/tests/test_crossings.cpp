#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "levelset/crossings.hpp"
#include "levelset/field.hpp"

using namespace levelset;

namespace {

constexpr double kPi = std::numbers::pi;

FunctionPath cos_path() {
    return FunctionPath(
        [](int j, double t) {
            switch (j % 4) {
                case 0: return std::cos(t);
                case 1: return -std::sin(t);
                case 2: return -std::cos(t);
                default: return std::sin(t);
            }
        },
        8);
}

FunctionPath poly_path(std::vector<double> c) {  // coefficients, lowest first
    return FunctionPath(
        [c](int j, double t) {
            double s = 0.0;
            for (std::size_t i = static_cast<std::size_t>(j); i < c.size(); ++i) {
                double f = 1.0;
                for (std::size_t q = 0; q < static_cast<std::size_t>(j); ++q) f *= static_cast<double>(i - q);
                s += f * c[i] * std::pow(t, static_cast<double>(i) - j);
            }
            return s;
        },
        static_cast<int>(c.size()));
}

// Coefficients of a * prod (t - r_i).
std::vector<double> from_roots(const std::vector<double>& roots, double a) {
    std::vector<double> c{a};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = next;
    }
    return c;
}

FunctionPath wiggle() {
    return FunctionPath(
        [](int j, double t) {
            // sin(3t) + 0.3 cos(7t)
            const double a = std::pow(3.0, j), b = 0.3 * std::pow(7.0, j);
            const double s3 = std::sin(3 * t + j * kPi / 2), c7 = std::cos(7 * t + j * kPi / 2);
            return a * s3 + b * c7;
        },
        8);
}

}  // namespace

TEST_CASE("elementary crossing counts") {
    const auto c = count_crossings(cos_path(), 0.0, 2 * kPi, 0.0, 1e-3, 1e-12);
    REQUIRE(c.count == 2);
    CHECK(c.refined_roots[0] == doctest::Approx(kPi / 2).epsilon(1e-10));
    CHECK(c.refined_roots[1] == doctest::Approx(3 * kPi / 2).epsilon(1e-10));
    CHECK_FALSE(c.undercount_flag);

    const auto q = count_crossings(poly_path({-0.25, 0.0, 1.0}), -1.0, 1.0, 0.0, 1e-3, 1e-12);
    REQUIRE(q.count == 2);
    CHECK(q.refined_roots[0] == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(q.refined_roots[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("tangency is not a crossing, endpoint root counted once") {
    CHECK(count_crossings(poly_path({0.0, 0.0, 1.0}), -1.0, 1.0, 0.0, 1e-3, 1e-12).count == 0);
    CHECK(count_crossings(poly_path({0.0, 1.0}), 0.0, 1.0, 0.0, 1e-3, 1e-12).count == 1);
    CHECK(count_crossings(poly_path({0.0, 1.0}), -1.0, 0.0, 0.0, 1e-3, 1e-12).count == 1);
    // root exactly on a grid node inside the interval
    CHECK(count_crossings(poly_path({0.0, 1.0}), -1.0, 1.0, 0.0, 0.25, 1e-12).count == 1);
}

TEST_CASE("hidden pair inside one cell is found by subdivision") {
    // two roots 0.004 apart inside a single cell of width 0.1
    const auto p = poly_path(from_roots({0.302, 0.306}, 1.0));
    const auto c = count_crossings(p, 0.0, 1.0, 0.0, 0.1, 1e-12);
    CHECK(c.count == 2);
    CHECK(c.undercount_flag);  // separation below twice the grid step
}

TEST_CASE("sine-cosine counts match the exact enumeration") {
    const SineCosineSpec spec{FrequencyLaw::pareto(3.0)};
    for (std::uint64_t s = 0; s < 300; ++s) {
        const SineCosinePath p = draw_sine_cosine(spec, s);
        const auto c = count_crossings(p, 0.0, 2 * kPi, 0.0, 1e-3, 1e-10);
        CHECK(c.count == exact_zero_count_sine_cosine(p.omega(), p.theta()));
        CHECK(c.refined_roots.size() == static_cast<std::size_t>(c.count));
        CHECK(std::is_sorted(c.refined_roots.begin(), c.refined_roots.end()));
    }
}

TEST_CASE("symmetry and additivity on random paths") {
    const SpectralGaussianSpec spec{{{1.0, 1.0}, {0.5, 4.0}, {0.2, 9.0}}};
    for (std::uint64_t s = 0; s < 100; ++s) {
        const SpectralPath p = draw_spectral_gaussian(spec, s);
        const FunctionPath neg([&p](int j, double t) { return -p.derivative(j, t); }, 8);
        const double u = 0.3;
        const auto a = count_crossings(p, 0.0, 2 * kPi, u, 1e-3, 1e-10);
        const auto b = count_crossings(neg, 0.0, 2 * kPi, -u, 1e-3, 1e-10);
        CHECK(a.count == b.count);
        // split at a point away from all roots
        double cut = 3.0;
        for (double r : a.refined_roots)
            if (std::abs(r - cut) < 1e-3) cut += 0.01;
        const auto l = count_crossings(p, 0.0, cut, u, 1e-3, 1e-10);
        const auto r = count_crossings(p, cut, 2 * kPi, u, 1e-3, 1e-10);
        CHECK(l.count + r.count == a.count);
    }
}

TEST_CASE("kac counter examples") {
    CHECK(kac_counter(poly_path({0.0, 1.0}), -1.0, 1.0, 0.0, 0.1, 0.0125) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kac_counter(cos_path(), 0.0, 2 * kPi, 0.0, 0.5, 0.0625) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(kac_counter(poly_path({0.0, 0.0, 1.0}), -1.0, 1.0, 0.25, 0.01, 0.00125) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS(kac_counter(cos_path(), 0.0, 1.0, 0.0, 0.1, 0.05));

    // fine midpoint quadrature of the defining integral as an independent check
    const auto w = wiggle();
    const double delta = 0.2, u = 0.1;
    double mid = 0.0;
    const int n = 2'000'000;
    const double h = 2 * kPi / n;
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) * h;
        if (std::abs(w(t) - u) <= delta) mid += std::abs(w.derivative(1, t)) * h;
    }
    mid /= 2 * delta;
    CHECK(kac_counter(w, 0.0, 2 * kPi, u, delta, delta / 8) == doctest::Approx(mid).epsilon(1e-4));
}

TEST_CASE("kac limit on transversal paths") {
    const auto w = wiggle();
    for (double u : {0.1, -0.7, 0.95}) {
        const auto c = count_crossings(w, 0.0, 2 * kPi, u, 1e-3, 1e-12);
        double err = 0.0;
        for (double delta : {0.1, 0.01, 0.001}) err = std::abs(kac_counter(w, 0.0, 2 * kPi, u, delta, delta / 8) - c.count);
        CHECK(err < 1e-6);
    }
}

TEST_CASE("sup norm of derivatives") {
    const auto s = tabulate(cos_path(), Grid::with_step(0.0, 2 * kPi, 1e-3), 2);
    const auto n = sup_norm_derivative(s, 1);
    CHECK(n.certified);
    CHECK(n.value >= 1.0);
    CHECK(n.value <= 1.0 + s.grid.step());
    CHECK_FALSE(sup_norm_derivative(s, 2).certified);

    const auto lin = tabulate(poly_path({0.0, 3.0}), Grid{0.0, 1.0, 11}, 2);
    CHECK(sup_norm_derivative(lin, 1).value == 3.0);

    const SineCosineSpec spec;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = sample_sine_cosine(spec, seed, Grid::with_step(0.0, 2 * kPi, 1e-3), 3);
        const auto b = sup_norm_derivative(r.sample, 2);
        const double exact = r.omega * r.omega * r.amplitude;
        CHECK(b.value >= exact * (1 - 1e-12) - 0.0);  // certified upper bound
        CHECK(b.value <= exact + r.sample.grid.step() * std::pow(r.omega, 3) * r.amplitude);
    }
}

TEST_CASE("crossings along lines") {
    DeterministicFieldSpec lin;
    lin.kind = DeterministicFieldSpec::Kind::coordinate;
    lin.d = 2;
    const DeterministicField f(lin);
    DeterministicFieldSpec sh;
    sh.kind = DeterministicFieldSpec::Kind::shell;
    sh.r = 0.5;
    const DeterministicField shell(sh);
    DeterministicFieldSpec cs;
    cs.kind = DeterministicFieldSpec::Kind::constant;
    cs.c = 2.0;
    const DeterministicField con(cs);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi), off(-0.99, 0.99);
    for (int i = 0; i < 500; ++i) {
        const double phi = ang(rng);
        const std::vector<double> v{std::cos(phi), std::sin(phi)};
        const double o = off(rng);
        const std::vector<double> y{-o * v[1], o * v[0]};
        // the chord meets {t1 = 0} at parameter -y1/v1
        const double half = std::sqrt(1.0 - o * o), hit = std::abs(y[0] / v[0]);
        if (std::abs(hit - half) > 1e-6) CHECK(crossings_along_line(f, v, y, 1.0, 0.0, 1e-3, 1e-10).count == (hit < half ? 1 : 0));
        const std::vector<double> centre{0.0, 0.0};
        if (std::abs(v[0]) > 1e-3) CHECK(crossings_along_line(f, v, centre, 1.0, 0.0, 1e-3, 1e-10).count == 1);
        if (std::abs(std::abs(o) - 0.5) > 1e-6)
            CHECK(crossings_along_line(shell, v, y, 1.0, 0.0, 1e-3, 1e-10).count == (std::abs(o) < 0.5 ? 2 : 0));
        CHECK(crossings_along_line(con, v, y, 1.0, 0.0, 1e-3, 1e-10).count == 0);
    }
    const std::vector<double> v{1.0, 0.0}, far{0.0, 1.0};
    CHECK_THROWS(crossings_along_line(f, v, far, 1.0, 0.0, 1e-3, 1e-10));
    const std::vector<double> notunit{2.0, 0.0}, y0{0.0, 0.0};
    CHECK_THROWS(crossings_along_line(f, notunit, y0, 1.0, 0.0, 1e-3, 1e-10));
}

TEST_CASE("crossings along great circles") {
    DeterministicFieldSpec h;
    h.kind = DeterministicFieldSpec::Kind::coordinate;
    h.d = 2;
    h.on_sphere = true;
    h.index = 2;
    const DeterministicField height(h);

    const std::vector<double> e1{1.0, 0.0, 0.0}, e2{0.0, 1.0, 0.0}, e3{0.0, 0.0, 1.0};
    CHECK(crossings_along_great_circle(height, e1, e3, 0.0, 1e-3, 1e-10).count == 2);
    const auto eq = crossings_along_great_circle(height, e1, e2, 0.0, 1e-3, 1e-10);
    CHECK(eq.degenerate);
    CHECK(eq.count == 0);
    CHECK_THROWS(crossings_along_great_circle(height, e1, e1, 0.0, 1e-3, 1e-10));

    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        auto a = uniform_direction(rng, 3);
        auto b = uniform_direction(rng, 3);
        const double ab = dot(a, b);
        for (int q = 0; q < 3; ++q) b[static_cast<std::size_t>(q)] -= ab * a[static_cast<std::size_t>(q)];
        const double nb = norm(b);
        for (auto& x : b) x /= nb;
        const double n3 = a[0] * b[1] - a[1] * b[0];  // third component of the normal
        if (std::abs(n3 * n3 - 0.75) < 1e-4) continue;
        CHECK(crossings_along_great_circle(height, a, b, 0.5, 1e-3, 1e-10).count == (n3 * n3 < 0.75 ? 2 : 0));
    }
}

TEST_CASE("interpolation remainder bound on polynomials with real roots") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0), scale(-3.0, 3.0);
    std::uniform_int_distribution<int> deg(2, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = deg(rng);
        const double lo = scale(rng), len = 0.2 + 2 * unit(rng), hi = lo + len;
        std::vector<double> roots;
        for (int i = 0; i < k; ++i) roots.push_back(lo + len * unit(rng));
        const double a = scale(rng) + (trial % 2 ? 0.5 : -0.5);
        const auto p = poly_path(from_roots(roots, a));
        const double mid = 0.5 * (lo + hi);
        const double top = std::abs(a) * std::tgamma(k + 1.0);  // |f^(k)|
        for (int j = 0; j < k; ++j) {
            // f^(j) has k - j roots in I (Rolle); at most that many crossings are seen
            const FunctionPath dj([&p, j](int o, double t) { return p.derivative(o + j, t); }, k - j);
            const auto c = count_crossings(dj, lo, hi, 0.0, len / 2000, 1e-13);
            CHECK(c.count <= k - j);
            const double bound = top / std::tgamma(k - j + 1.0) * std::pow(len / 2, k - j);
            CHECK(std::abs(p.derivative(j, mid)) <= bound * (1 + 1e-9));
        }
    }
}

TEST_CASE("moment of an integer variable via tail sums") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::poisson_distribution<int> pois(0.5 + trial * 0.1);
        std::map<int, double> pmf;
        const int n = 5000;
        for (int i = 0; i < n; ++i) pmf[pois(rng)] += 1.0 / n;
        const int zmax = pmf.rbegin()->first;
        for (int p = 1; p <= 4; ++p) {
            double lhs = 0.0;
            for (auto [z, w] : pmf) lhs += std::pow(z, p) * w;
            double rhs = 0.0;
            for (int l = 1; l <= zmax; ++l) {
                double tail = 0.0;
                for (auto [z, w] : pmf)
                    if (z >= l) tail += w;
                rhs += std::pow(l, p - 1) * tail;
            }
            CHECK(lhs <= p * rhs * (1 + 1e-12));
        }
    }
}
