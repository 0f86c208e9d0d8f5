#include "levelset/kacrice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "levelset/simulate.hpp"

namespace levelset {

namespace {

nlohmann::ordered_json estimate_json(const MomentEstimate& e) {
    return {{"point_estimate", e.point_estimate}, {"std_error", e.std_error}, {"ci_low", e.ci_low},
            {"ci_high", e.ci_high},               {"n", e.n},                 {"p", e.p}};
}

int path_order(const ProcessSpec& spec) {
    if (const auto* s = std::get_if<ShotNoise1DSpec>(&spec)) return std::min(1, s->kernel.smoothness());
    return 1;
}

}  // namespace

double rice_closed_form_gaussian(double lambda0, double lambda2, double u, double interval_length) {
    if (!(lambda0 > 0.0 && lambda2 > 0.0)) throw std::invalid_argument("spectral moments must be positive");
    if (!(interval_length > 0.0)) throw std::invalid_argument("interval length must be positive");
    return interval_length / std::numbers::pi * std::sqrt(lambda2 / lambda0) * std::exp(-u * u / (2.0 * lambda0));
}

std::vector<double> default_deltas() { return {0.5, 0.2, 0.1, 0.05, 0.02}; }

KacRiceReport verify_kac_rice(const ProcessSpec& spec, double u, const std::vector<double>& deltas,
                              long long n_replicates, std::uint64_t seed, const KacParams& params) {
    if (deltas.empty()) throw std::invalid_argument("need at least one delta");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw std::invalid_argument("deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw std::invalid_argument("deltas must be strictly decreasing");
    }
    if (n_replicates < 1) throw std::invalid_argument("n_replicates must be >= 1");
    if (!(params.quad_fraction > 0.0 && params.quad_fraction <= 0.25))
        throw std::invalid_argument("quad_fraction must be in (0, 1/4]");
    const auto [lo, hi] = params.interval ? *params.interval : default_interval(spec);
    const int order = path_order(spec);
    const auto n = static_cast<std::size_t>(n_replicates);
    const std::size_t m = deltas.size();

    std::vector<double> crossings(n), kac(n * m);
    parallel_for(n, [&](std::size_t i) {
        const auto path = draw_path(spec, mix64(seed, i), lo, hi, order);
        crossings[i] = static_cast<double>(count_crossings(*path, lo, hi, u, params.counting).count);
        for (std::size_t j = 0; j < m; ++j)
            kac[i * m + j] = kac_counter(*path, lo, hi, u, deltas[j], deltas[j] * params.quad_fraction);
    });

    KacRiceReport r;
    r.u = u;
    r.deltas = deltas;
    r.crossing_estimate = estimate_moment(crossings, 1, mix64(seed, ~0ULL));
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = kac[i * m + j];
        r.kac_estimates.push_back(estimate_moment(col, 1, mix64(seed, ~(j + 1))));
    }
    if (const auto* g = std::get_if<SpectralGaussianSpec>(&spec))
        r.closed_form = rice_closed_form_gaussian(g->lambda0(), g->lambda2(), u, hi - lo);
    return r;
}

RProfile estimate_R_profile(const ProcessSpec& spec, double u, double epsilon, int n_levels, double delta,
                            long long n_replicates, std::uint64_t seed, const KacParams& params) {
    if (!(epsilon > 0.0) || n_levels < 1) throw std::invalid_argument("need epsilon > 0 and n_levels >= 1");
    if (!(delta > 0.0) || delta > epsilon / (2.0 * n_levels) * (1.0 + 1e-12))
        throw std::invalid_argument("delta must be positive and at most epsilon / (2 n_levels)");
    if (n_replicates < 1) throw std::invalid_argument("n_replicates must be >= 1");
    const auto [lo, hi] = params.interval ? *params.interval : default_interval(spec);
    const int order = path_order(spec);
    const auto n = static_cast<std::size_t>(n_replicates);
    const auto L = static_cast<std::size_t>(n_levels);

    RProfile out;
    out.u = u;
    out.epsilon = epsilon;
    out.delta = delta;
    std::vector<double> levels(L);
    for (std::size_t j = 0; j < L; ++j)
        levels[j] = u - epsilon + (static_cast<double>(j) + 0.5) * 2.0 * epsilon / static_cast<double>(L);

    std::vector<double> crossings(n), values(n * L);
    parallel_for(n, [&](std::size_t i) {
        const auto path = draw_path(spec, mix64(seed, i), lo, hi, order);
        crossings[i] = static_cast<double>(count_crossings(*path, lo, hi, u, params.counting).count);
        for (std::size_t j = 0; j < L; ++j)
            values[i * L + j] = kac_counter(*path, lo, hi, levels[j], delta, delta * params.quad_fraction);
    });

    std::vector<double> averages(n, 0.0);
    for (std::size_t j = 0; j < L; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = values[i * L + j];
            averages[i] += col[i] / static_cast<double>(L);
        }
        out.points.push_back({levels[j], estimate_moment(col, 1, mix64(seed, ~(j + 1)))});
    }
    const MomentEstimate avg = estimate_moment(averages, 1, mix64(seed, ~0ULL - 1));
    out.window_average = avg.point_estimate;
    out.window_std_error = avg.std_error;
    out.crossing_estimate = estimate_moment(crossings, 1, mix64(seed, ~0ULL));
    return out;
}

std::string KacRiceReport::to_json() const {
    nlohmann::ordered_json j;
    j["u"] = u;
    j["deltas"] = deltas;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : kac_estimates) arr.push_back(estimate_json(e));
    j["kac_estimates"] = arr;
    j["crossing_estimate"] = estimate_json(crossing_estimate);
    j["closed_form"] = closed_form ? nlohmann::ordered_json(*closed_form) : nlohmann::ordered_json(nullptr);
    if (R_profile) {
        auto pts = nlohmann::ordered_json::array();
        for (const auto& p : R_profile->points) pts.push_back({{"v", p.v}, {"estimate", estimate_json(p.estimate)}});
        j["R_profile"] = {{"epsilon", R_profile->epsilon},
                          {"delta", R_profile->delta},
                          {"points", pts},
                          {"window_average", R_profile->window_average},
                          {"window_std_error", R_profile->window_std_error},
                          {"crossing_estimate", estimate_json(R_profile->crossing_estimate)}};
    } else {
        j["R_profile"] = nullptr;
    }
    return j.dump(2);
}

std::string KacRiceReport::to_csv(const std::string& spec_id) const {
    std::ostringstream os;
    os << "spec_id,u,delta,mean,stderr\n";
    for (std::size_t i = 0; i < deltas.size(); ++i)
        os << spec_id << ',' << format_real(u) << ',' << format_real(deltas[i]) << ','
           << format_real(kac_estimates[i].point_estimate) << ',' << format_real(kac_estimates[i].std_error) << '\n';
    return os.str();
}

}  // namespace levelset
