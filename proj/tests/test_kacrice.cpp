#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levelset/kacrice.hpp"

using namespace levelset;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("rice closed form") {
    CHECK(rice_closed_form_gaussian(1.0, 1.0, 0.0, 2 * kPi) == doctest::Approx(2.0));
    CHECK(rice_closed_form_gaussian(1.0, 4.0, 0.0, 2 * kPi) == doctest::Approx(4.0));
    double prev = rice_closed_form_gaussian(2.0, 3.0, 0.0, 1.0);
    for (double u = 0.5; u < 20; u += 0.5) {
        const double v = rice_closed_form_gaussian(2.0, 3.0, u, 1.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-20);
}

TEST_CASE("single atom: kac means equal the crossing mean") {
    const SpectralGaussianSpec spec{{{1.0, 1.0}}};
    const auto r = verify_kac_rice(spec, 0.0, {0.5, 0.1, 0.02}, 2000, 5);
    REQUIRE(r.closed_form.has_value());
    CHECK(*r.closed_form == doctest::Approx(2.0));
    CHECK(r.crossing_estimate.point_estimate == doctest::Approx(2.0));
    // delta = 0.5 is left out: amplitudes below delta bias that window
    for (std::size_t i = 1; i < r.deltas.size(); ++i) {
        const auto& k = r.kac_estimates[i];
        CHECK(std::abs(k.point_estimate - 2.0) <= 3 * k.ci_width() + 1e-9);
    }
}

TEST_CASE("deterministic cosine through the sine-cosine family") {
    const SineCosineSpec spec{FrequencyLaw::fixed(1.0)};
    KacParams params;
    const auto r = verify_kac_rice(spec, 0.0, {0.5, 0.1, 0.02}, 100, 1, params);
    CHECK_FALSE(r.closed_form.has_value());
    // the amplitude is random; the count is not
    CHECK(r.crossing_estimate.point_estimate == 2.0);
    CHECK(r.crossing_estimate.std_error == 0.0);
    CHECK(r.kac_estimates[2].point_estimate == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("chi-square stabilization") {
    const ChiSquareSpec spec{2, SpectralGaussianSpec{{{1.0, 1.0}}}};
    const auto r = verify_kac_rice(spec, 1.0, default_deltas(), 1500, 7);
    const auto& last = r.kac_estimates.back();
    const double gap = std::abs(last.point_estimate - r.crossing_estimate.point_estimate);
    CHECK(gap <= last.ci_width() + r.crossing_estimate.ci_width());
    for (std::size_t i = 1; i < r.deltas.size(); ++i) {
        const double gi = std::abs(r.kac_estimates[i].point_estimate - r.crossing_estimate.point_estimate);
        const double gp = std::abs(r.kac_estimates[i - 1].point_estimate - r.crossing_estimate.point_estimate);
        CHECK(gi <= gp + r.kac_estimates[i].ci_width());
    }
}

TEST_CASE("report serialization and validation") {
    const auto r = verify_kac_rice(SpectralGaussianSpec{{{1.0, 2.0}}}, 0.0, {0.1, 0.05}, 100, 2);
    const std::string csv = r.to_csv("atom2");
    CHECK(csv.rfind("spec_id,u,delta,mean,stderr\n", 0) == 0);
    CHECK(csv.find("atom2,0,0.10000000000000001,") != std::string::npos);
    CHECK(r.to_json().find("\"closed_form\"") != std::string::npos);
    CHECK_THROWS(verify_kac_rice(SpectralGaussianSpec{}, 0.0, {0.1, 0.2}, 100, 2));
    CHECK(default_deltas() == std::vector<double>{0.5, 0.2, 0.1, 0.05, 0.02});
}

TEST_CASE("R profile of the single atom") {
    const SpectralGaussianSpec spec{{{1.0, 1.0}}};
    const auto p = estimate_R_profile(spec, 0.0, 0.5, 5, 0.02, 2000, 11);
    REQUIRE(p.points.size() == 5);
    for (const auto& pt : p.points) {
        const double truth = 2.0 * std::exp(-pt.v * pt.v / 2);
        CHECK(std::abs(pt.estimate.point_estimate - truth) <= 3 * pt.estimate.ci_width() + 1e-3);
    }
    CHECK(p.points[2].v == doctest::Approx(0.0).epsilon(1e-12));
    // the window average targets the mean of R over (u - eps, u + eps), which
    // for eps = 0.5 sits below R(0) = 2
    const double window_truth = 2.0 * std::sqrt(2 * kPi) * std::erf(0.5 / std::sqrt(2.0));
    CHECK(std::abs(p.window_average - window_truth) <= 3 * p.window_std_error + 1e-3);
    const auto narrow = estimate_R_profile(spec, 0.0, 0.05, 5, 0.004, 2000, 12);
    CHECK(std::abs(narrow.window_average - narrow.crossing_estimate.point_estimate) <=
          3 * (narrow.window_std_error + narrow.crossing_estimate.std_error) + 1e-3);
    CHECK_THROWS(estimate_R_profile(spec, 0.0, 0.5, 5, 0.2, 200, 11));
}

TEST_CASE("area formula on a deterministic path") {
    // N^delta = (1/2 delta) int N_v dv over the band; sin(3t) + 0.3 cos(7t)
    const FunctionPath w(
        [](int j, double t) {
            return std::pow(3.0, j) * std::sin(3 * t + j * kPi / 2) + 0.3 * std::pow(7.0, j) * std::cos(7 * t + j * kPi / 2);
        },
        8);
    for (double u : {0.0, 0.6, 1.1}) {
        const double delta = 0.15;
        const double lhs = kac_counter(w, 0.0, 2 * kPi, u, delta, delta / 8);
        const int levels = 3000;
        double rhs = 0.0;
        for (int i = 0; i < levels; ++i) {
            const double v = u - delta + (i + 0.5) * 2 * delta / levels;
            rhs += static_cast<double>(count_crossings(w, 0.0, 2 * kPi, v, 1e-3, 1e-12).count);
        }
        rhs /= levels;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
    }
}
