#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace levelset {

/// One-dimensional shot-noise kernel g with derivative access and a monotone
/// tail envelope.
///
/// envelope(j, s) dominates max(|g^(j)(s)|, |g^(j)(-s)|) and is nonincreasing
/// in s >= 0. Near the origin it is a suffix maximum of a dense table plus a
/// Lipschitz allowance; beyond a per-order threshold, where |g^(j)| is already
/// monotone on both sides, it is the pointwise value.
class Kernel {
  public:
    using Eval = std::function<double(int order, double t)>;

    struct Definition {
        std::string name;
        Eval eval;
        /// Paths are C^smoothness; derivatives beyond are piecewise only.
        int smoothness = 0;
        /// int_L^inf max(|g(s)|, |g(-s)|) ds; +inf when not integrable.
        std::function<double(double)> tail0;
        /// Integral of g over the real line, when finite and known.
        std::optional<double> integral;
        /// Range scanned for the monotone threshold; |g^(j)| must be monotone
        /// beyond it on both sides.
        double scan_range = 20.0;
        /// Known thresholds per order; when empty they are located numerically.
        std::function<double(int)> threshold;
    };

    explicit Kernel(Definition def);

    /// exp(-t^2).
    static Kernel gaussian_bump();
    /// exp(-t) for t >= 0, 0 otherwise. Right-continuous at 0.
    static Kernel one_sided_exponential();
    /// exp(-|t|).
    static Kernel laplace();
    /// sech(rate t): smooth, all derivatives ~ poly * exp(-rate |t|).
    static Kernel sech(double rate);
    /// t^n exp(-t) for t >= 0 (C^(n-1)).
    static Kernel gamma(int n);
    /// 1 / (1 + |t|): envelope not integrable.
    static Kernel power_tail();

    const std::string& name() const { return def_->name; }
    int smoothness() const { return def_->smoothness; }
    /// Highest order with an envelope table.
    int max_envelope_order() const { return static_cast<int>(tables_->size()) - 1; }

    double eval(int order, double t) const { return def_->eval(order, t); }
    double operator()(double t) const { return def_->eval(0, t); }

    double envelope(int order, double distance) const;
    /// Upper bound on int_L^inf envelope(order, s) ds; +inf if not integrable.
    double envelope_tail(int order, double L) const;
    /// Distance beyond which |g^(order)| is monotone on both sides.
    double monotone_threshold(int order) const;

    std::optional<double> integral() const { return def_->integral; }

  private:
    struct Table {
        double threshold = 0.0;
        double step = 0.0;
        std::vector<double> hull;  // hull[i] >= sup over [i*step, inf)
    };

    double pointwise(int order, double s) const;
    double tail_beyond(int order, double L) const;

    std::shared_ptr<const Definition> def_;
    std::shared_ptr<const std::vector<Table>> tables_;
};

}  // namespace levelset
