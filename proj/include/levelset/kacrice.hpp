#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levelset/crossings.hpp"
#include "levelset/process.hpp"
#include "levelset/stats.hpp"

namespace levelset {

/// E(N_u) for a stationary Gaussian process on an interval of the given length:
/// (|I| / pi) sqrt(lambda2 / lambda0) exp(-u^2 / (2 lambda0)).
double rice_closed_form_gaussian(double lambda0, double lambda2, double u, double interval_length);

struct KacParams {
    CountingParams counting;
    /// quad_step = delta * quad_fraction; must be <= 1/4.
    double quad_fraction = 0.125;
    std::optional<std::pair<double, double>> interval;
};

struct RProfilePoint {
    double v = 0.0;
    MomentEstimate estimate;
};

struct RProfile {
    double u = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<RProfilePoint> points;
    /// Average of the profile over the window.
    double window_average = 0.0;
    /// Standard error of that average across replicates.
    double window_std_error = 0.0;
    MomentEstimate crossing_estimate;
};

struct KacRiceReport {
    double u = 0.0;
    std::vector<double> deltas;
    std::vector<MomentEstimate> kac_estimates;
    MomentEstimate crossing_estimate;
    std::optional<double> closed_form;
    std::optional<RProfile> R_profile;

    std::string to_json() const;
    /// Rows spec_id,u,delta,mean,stderr (header included).
    std::string to_csv(const std::string& spec_id) const;
};

/// Default delta ladder.
std::vector<double> default_deltas();

/// Replicate i draws one path with seed mix64(seed, i); N_u and every N_u^delta
/// are computed from that same path.
KacRiceReport verify_kac_rice(const ProcessSpec& spec, double u, const std::vector<double>& deltas,
                              long long n_replicates, std::uint64_t seed, const KacParams& params = {});

/// R(v) by the delta-window estimator at n_levels equispaced levels in
/// (u - epsilon, u + epsilon), plus the crossing mean at u.
RProfile estimate_R_profile(const ProcessSpec& spec, double u, double epsilon, int n_levels, double delta,
                            long long n_replicates, std::uint64_t seed, const KacParams& params = {});

}  // namespace levelset
