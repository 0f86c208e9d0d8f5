#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelset/crossings.hpp"
#include "levelset/kernel.hpp"
#include "levelset/process.hpp"
#include "levelset/stats.hpp"

namespace levelset {

struct CrossingMoments {
    std::vector<MomentEstimate> moments;  // one per requested p
    std::vector<double> counts;           // N_u per replicate, index order
    long long flagged_replicates = 0;
};

/// Replicate i draws its path with seed mix64(seed, i) on [lo, hi] (the
/// family's natural interval when absent) and counts crossings of u.
CrossingMoments estimate_crossing_moments(const ProcessSpec& spec, double u, const std::vector<int>& p_list,
                                          long long n_replicates, std::uint64_t seed, const CountingParams& counting,
                                          std::optional<std::pair<double, double>> interval = std::nullopt);

struct BoundComparison {
    bool satisfied = false;
    double margin = 0.0;
};

/// satisfied iff ci_high <= bound; margin = bound - point estimate.
BoundComparison compare_bound(const MomentEstimate& estimate, double bound);

struct TailIndex {
    double index_estimate = 0.0;
    /// Largest moment order believed finite; empty means "all".
    std::optional<int> finite_moment_guess;
};

/// Indices at or above this are reported as "all moments finite".
inline constexpr double kTailIndexAll = 20.0;

/// Hill estimator over the top `top_fraction` order statistics. Integer
/// valued samples are first spread by independent U(-1/2, 1/2) noise drawn
/// from `seed`, which removes the bias that ties cause at the threshold.
TailIndex tail_index(const std::vector<double>& samples, double top_fraction, std::uint64_t seed = 0);

struct ConditionReport {
    std::string condition_name;
    double value = 0.0;  // +inf when divergent
    bool converged = false;
    std::string detail;

    std::string to_json() const;
};

/// d_{k,n} = sup over t in [-1,1], s in I_n of |g^(k)(t - s)| on a grid, and
/// D_k = sum_n d_{k,n} with an envelope bound for n > n_max.
ConditionReport check_shotnoise_H2(const Kernel& kernel, int k, int n_max);
/// The individual d_{k,n}, n = 1..n_max.
std::vector<double> shotnoise_dkn(const Kernel& kernel, int k, int n_max);

enum class DensityCondition { A, B1, B2 };

/// (A): min over the two sides of E(1/|g(-+T)|), T ~ Exp(lambda), with the
/// impulse density bound in the detail. (B1)/(B2): E(1/g_*(T)) with g_* the
/// running infimum of |g'| on the positive (negative) half line.
ConditionReport check_density_condition(DensityCondition kind, const Kernel& kernel, double lambda,
                                        const Impulse& impulse);

/// E G_*(|T_1|) for the radial kernel exp(-|t|^(2q)) in R^d, intensity lambda.
ConditionReport check_density_condition_radial(int d, int q, double lambda);

}  // namespace levelset
