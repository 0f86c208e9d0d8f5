#include "levelset/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "levelset/bounds.hpp"
#include "levelset/crossings.hpp"
#include "levelset/diagnostics.hpp"
#include "levelset/errors.hpp"
#include "levelset/field.hpp"
#include "levelset/geometry.hpp"
#include "levelset/kacrice.hpp"
#include "levelset/simulate.hpp"
#include "levelset/stats.hpp"

namespace levelset {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string fmt(double x) { return format_real(x); }
std::string fmt(long long x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

// JSON value for a table cell: numbers stay numbers, "inf" and text stay strings.
ordered_json cell_json(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(x)) {
        if (s.find_first_of(".eE") == std::string::npos) {
            try {
                return std::stoll(s);
            } catch (...) {
            }
        }
        return x;
    }
    return s;
}

struct Common {
    std::uint64_t seed = 0;
    std::string spec_id;
};

CountingParams read_counting(const Config& cfg) {
    CountingParams c;
    c.base_step = cfg.get_double("counting.base_step", 1e-3);
    c.refine_tol = cfg.get_double("counting.refine_tol", 1e-10);
    if (!(c.base_step > 0.0)) throw ConfigError("key 'counting.base_step': must be positive");
    if (!(c.refine_tol > 0.0)) throw ConfigError("key 'counting.refine_tol': must be positive");
    return c;
}

std::pair<double, double> read_interval(const Config& cfg, const ProcessSpec& spec) {
    auto iv = default_interval(spec);
    iv.first = cfg.get_double("interval.lo", iv.first);
    iv.second = cfg.get_double("interval.hi", iv.second);
    if (!(iv.second > iv.first)) throw ConfigError("key 'interval.hi': must exceed interval.lo");
    return iv;
}

long long read_replicates(const Config& cfg, long long fallback, long long minimum = 1) {
    const long long n = cfg.get_int("replicates", fallback);
    if (n < minimum) throw ConfigError("key 'replicates': must be >= " + std::to_string(minimum));
    return n;
}

bounds::MomentOrder read_m(const Config& cfg) {
    const std::string m = cfg.get_string("bound.m");
    if (m == "inf") return bounds::MomentOrder::infinite();
    const long long v = cfg.get_int("bound.m");
    if (v < 1) throw ConfigError("key 'bound.m': must be >= 1 or inf");
    return bounds::MomentOrder::finite(static_cast<int>(v));
}

// Bound parameters for a fixed p from the bound.* keys.
bounds::BoundParams read_bound_params(const Config& cfg, int p, double length) {
    bounds::BoundParams b;
    b.k = static_cast<int>(cfg.get_int("bound.k"));
    b.h = static_cast<int>(cfg.get_int("bound.h", 0));
    const auto m = read_m(cfg);
    if (m.is_infinite) throw ConfigError("key 'bound.m': the explicit bound needs a finite m");
    b.m = m.value;
    b.p = p;
    b.c = cfg.get_double("bound.c");
    b.d_m = cfg.get_double("bound.d_m");
    b.domain_size = cfg.get_double("bound.length", length);
    b.alpha = cfg.get_optional_double("bound.alpha");
    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bound parameters: ") + e.what());
    }
    return b;
}

Table moment_table(const std::string& name, const std::string& spec_id, double u, const std::vector<MomentEstimate>& ms) {
    Table t{name, {"spec_id", "u", "p", "n", "estimate", "stderr", "ci_low", "ci_high"}, {}};
    for (const auto& m : ms)
        t.rows.push_back({spec_id, fmt(u), fmt(m.p), fmt(m.n), fmt(m.point_estimate), fmt(m.std_error), fmt(m.ci_low),
                          fmt(m.ci_high)});
    return t;
}

// --- commands --------------------------------------------------------------------

RunResult cmd_bound(const Config& cfg) {
    RunResult r;
    const int k = static_cast<int>(cfg.get_int("bound.k"));
    const int h = static_cast<int>(cfg.get_int("bound.h", 0));
    const auto m = read_m(cfg);
    if (k < 2 || h < 0 || h > k) throw ConfigError("keys 'bound.k', 'bound.h': need k >= 2 and 0 <= h <= k");
    const auto pmax = bounds::feasible_p_max(k, h, m);
    const std::string m_text = m.is_infinite ? "inf" : std::to_string(m.value);

    Table feas{"feasibility", {"k", "h", "m", "p_max"}, {}};
    feas.rows.push_back({fmt(k), fmt(h), m_text, pmax ? fmt(*pmax) : "none"});
    r.tables.push_back(feas);
    std::ostringstream msg;
    msg << "k=" << k << " h=" << h << " m=" << m_text << ": max p = " << (pmax ? std::to_string(*pmax) : "none");
    r.messages.push_back(msg.str());

    std::vector<int> ps;
    if (cfg.has("bound.p")) {
        const int p = static_cast<int>(cfg.get_int("bound.p"));
        if (p < 1) throw ConfigError("key 'bound.p': must be >= 1");
        if (!bounds::is_feasible(k, h, m, p)) {
            std::ostringstream os;
            os << "p=" << p << " violates 2p(1+h+m) < m(2k(1+h) - h(1+h) - 2)";
            if (m.is_infinite) os.str("p=" + std::to_string(p) + " violates 2p < 2k(1+h) - h(1+h) - 2");
            os << " for k=" << k << ", h=" << h << ", m=" << m_text;
            throw InfeasibleError(os.str());
        }
        ps.push_back(p);
    } else if (pmax) {
        for (int p = 1; p <= *pmax; ++p) ps.push_back(p);
    }

    Table rows{"bounds", {"k", "h", "m", "p", "alpha", "E_value", "D_value", "bound"}, {}};
    const bool explicit_bound = !m.is_infinite && cfg.has("bound.c") && cfg.has("bound.d_m");
    if (explicit_bound) {
        const std::string domain = cfg.get_string("bound.domain", "interval");
        const double tol = cfg.get_double("bound.tol", 1e-10);
        for (int p : ps) {
            bounds::BoundBreakdown b;
            if (domain == "interval") {
                b = bounds::moment_bound_interval_breakdown(read_bound_params(cfg, p, 1.0), tol);
            } else if (domain == "ball") {
                const int d = static_cast<int>(cfg.get_int("bound.d", 2));
                const double a = cfg.get_double("bound.a", 1.0);
                b = bounds::moment_bound_ball_breakdown(read_bound_params(cfg, p, 2.0 * a), d, a, tol);
            } else if (domain == "sphere") {
                const int d = static_cast<int>(cfg.get_int("bound.d", 2));
                b = bounds::moment_bound_sphere_breakdown(read_bound_params(cfg, p, 1.0), d, tol);
            } else {
                throw ConfigError("key 'bound.domain': expected interval, ball or sphere");
            }
            rows.rows.push_back({fmt(k), fmt(h), m_text, fmt(p), fmt(b.alpha), fmt(b.e.value + b.e.tail_bound),
                                 fmt(b.d.value + b.d.tail_bound), fmt(b.total)});
        }
    }
    r.tables.push_back(rows);
    return r;
}

RunResult cmd_simulate(const Config& cfg, const Common& common) {
    RunResult r;
    const ProcessSpec spec = parse_process(cfg);
    const auto [lo, hi] = default_interval(spec);
    const double start = cfg.get_double("grid.start", lo);
    const double stop = cfg.get_double("grid.stop", hi);
    const int order = static_cast<int>(cfg.get_int("simulate.order", 1));
    const long long reps = read_replicates(cfg, 1);
    Grid grid;
    try {
        grid = cfg.has("grid.step") ? Grid::with_step(start, stop, cfg.get_double("grid.step"))
                                    : Grid{start, stop, static_cast<std::size_t>(cfg.get_int("grid.points", 1001))};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    if (grid.points < 2 || !(stop > start)) throw ConfigError("key 'grid.points': need at least 2 points on start < stop");
    if (order < 0) throw ConfigError("key 'simulate.order': must be >= 0");

    std::vector<PathSample> samples(static_cast<std::size_t>(reps));
    parallel_for(samples.size(), [&](std::size_t i) {
        const std::uint64_t seed = mix64(common.seed, i);
        if (const auto* s = std::get_if<ShotNoise1DSpec>(&spec)) {
            samples[i] = sample_shot_noise_1d(*s, seed, start, stop, grid, order);
        } else {
            const auto path = draw_path(spec, seed, start, stop, order);
            samples[i] = tabulate(*path, grid, order, seed);
        }
    });
    for (std::size_t i = 0; i < samples.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "path_%04zu", i);
        Table t{name, {"t", "x"}, {}};
        for (int j = 1; j <= order; ++j) t.header.push_back("dx" + std::to_string(j));
        const auto& s = samples[i];
        for (std::size_t g = 0; g < s.grid.points; ++g) {
            std::vector<std::string> row{fmt(s.grid.at(g))};
            for (const auto& col : s.derivatives) row.push_back(fmt(col[g]));
            t.rows.push_back(std::move(row));
        }
        r.tables.push_back(std::move(t));
    }
    return r;
}

RunResult cmd_count(const Config& cfg, const Common& common) {
    RunResult r;
    const ProcessSpec spec = parse_process(cfg);
    const auto [lo, hi] = read_interval(cfg, spec);
    const double u = cfg.get_double("u", 0.0);
    const CountingParams counting = read_counting(cfg);
    const long long reps = read_replicates(cfg, 100);
    const int order = std::holds_alternative<ShotNoise1DSpec>(spec)
                          ? std::min(1, std::get<ShotNoise1DSpec>(spec).kernel.smoothness())
                          : 1;
    std::vector<CrossingCount> counts(static_cast<std::size_t>(reps));
    parallel_for(counts.size(), [&](std::size_t i) {
        const auto path = draw_path(spec, mix64(common.seed, i), lo, hi, order);
        counts[i] = count_crossings(*path, lo, hi, u, counting);
    });
    Table t{"counts", {"spec_id", "replicate", "u", "count", "undercount_flag"}, {}};
    for (std::size_t i = 0; i < counts.size(); ++i)
        t.rows.push_back({common.spec_id, fmt(static_cast<long long>(i)), fmt(u), fmt(counts[i].count),
                          counts[i].undercount_flag ? "true" : "false"});
    r.tables.push_back(std::move(t));
    return r;
}

RunResult cmd_moments(const Config& cfg, const Common& common) {
    RunResult r;
    const ProcessSpec spec = parse_process(cfg);
    const auto interval = read_interval(cfg, spec);
    const double u = cfg.get_double("u", 0.0);
    const std::vector<int> p_list = cfg.has("p_list") ? cfg.get_ints("p_list") : std::vector<int>{1};
    for (int p : p_list)
        if (p < 1) throw ConfigError("key 'p_list': orders must be >= 1");
    const CountingParams counting = read_counting(cfg);
    const long long reps = read_replicates(cfg, 1000, 100);
    const std::optional<double> tail_fraction = cfg.get_optional_double("moments.tail_fraction");
    const bool with_bound = cfg.has("bound.k");
    std::vector<bounds::BoundParams> bound_params;
    if (with_bound)
        for (int p : p_list) bound_params.push_back(read_bound_params(cfg, p, interval.second - interval.first));

    const CrossingMoments cm = estimate_crossing_moments(spec, u, p_list, reps, common.seed, counting, interval);
    r.tables.push_back(moment_table("moments", common.spec_id, u, cm.moments));
    if (cm.flagged_replicates > 0)
        r.messages.push_back(std::to_string(cm.flagged_replicates) + " replicates carry the undercount flag");

    if (with_bound) {
        Table t{"moment_bounds", {"spec_id", "u", "p", "bound", "satisfied", "margin"}, {}};
        for (std::size_t i = 0; i < p_list.size(); ++i) {
            const double b = bounds::moment_bound_interval(bound_params[i]);
            const BoundComparison c = compare_bound(cm.moments[i], b);
            t.rows.push_back({common.spec_id, fmt(u), fmt(p_list[i]), fmt(b), c.satisfied ? "true" : "false", fmt(c.margin)});
        }
        r.tables.push_back(std::move(t));
    }
    if (tail_fraction) {
        const TailIndex ti = tail_index(cm.counts, *tail_fraction, mix64(common.seed, 0x7A11ULL));
        Table t{"tail", {"spec_id", "u", "top_fraction", "index_estimate", "finite_moment_guess"}, {}};
        t.rows.push_back({common.spec_id, fmt(u), fmt(*tail_fraction), fmt(ti.index_estimate),
                          ti.finite_moment_guess ? fmt(*ti.finite_moment_guess) : "all"});
        r.tables.push_back(std::move(t));
    }
    return r;
}

RunResult cmd_crofton(const Config& cfg, const Common& common) {
    RunResult r;
    const FieldSpec spec = parse_field(cfg);
    const double u = cfg.get_double("u", 0.0);
    const auto probe_field = sample_field(spec, mix64(common.seed, 0));
    CroftonPlan plan;
    plan.n_probes = cfg.get_int("crofton.probes", 10000);
    plan.seed = mix64(common.seed, 1);
    plan.base_step = cfg.get_double("crofton.base_step", 1e-2);
    plan.refine_tol = cfg.get_double("crofton.refine_tol", 1e-10);
    const std::string domain = cfg.get_string("crofton.domain", probe_field->on_sphere() ? "sphere" : "ball");
    if (domain == "ball") {
        double a_default = 1.0;
        if (const auto* b = std::get_if<ShotNoiseBallSpec>(&spec)) a_default = b->radius;
        plan.domain = bounds::Ball{static_cast<int>(cfg.get_int("crofton.d", probe_field->ambient_dim())),
                                   cfg.get_double("crofton.a", a_default)};
    } else if (domain == "sphere") {
        plan.domain = bounds::Sphere{static_cast<int>(cfg.get_int("crofton.d", probe_field->ambient_dim() - 1))};
    } else {
        throw ConfigError("key 'crofton.domain': expected ball or sphere");
    }
    try {
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("crofton plan: ") + e.what());
    }
    const bool moments = cfg.has("crofton.fields");
    const long long n_fields = cfg.get_int("crofton.fields", 1);
    const std::vector<int> p_list = cfg.has("p_list") ? cfg.get_ints("p_list") : std::vector<int>{1};
    if (n_fields < 1) throw ConfigError("key 'crofton.fields': must be >= 1");

    const CroftonResult cr = estimate_level_measure(*probe_field, u, plan);
    Table t{"crofton", {"spec_id", "u", "n_probes", "estimate", "stderr", "ci_low", "ci_high", "degenerate_probes"}, {}};
    t.rows.push_back({common.spec_id, fmt(u), fmt(plan.n_probes), fmt(cr.estimate.point_estimate),
                      fmt(cr.estimate.std_error), fmt(cr.estimate.ci_low), fmt(cr.estimate.ci_high),
                      fmt(cr.degenerate_probes)});
    r.tables.push_back(std::move(t));

    if (moments) {
        Table mt{"crofton_moments",
                 {"spec_id", "u", "p", "n", "estimate", "stderr", "ci_low", "ci_high", "jensen_proxy"},
                 {}};
        for (int p : p_list) {
            if (p < 1) throw ConfigError("key 'p_list': orders must be >= 1");
            CroftonPlan outer = plan;
            outer.seed = mix64(common.seed, 2);
            const MeasureMoment mm = estimate_measure_pth_moment(spec, u, p, n_fields, outer);
            const auto& m = mm.moment;
            mt.rows.push_back({common.spec_id, fmt(u), fmt(p), fmt(m.n), fmt(m.point_estimate), fmt(m.std_error),
                               fmt(m.ci_low), fmt(m.ci_high), fmt(mm.jensen_proxy)});
            if (mm.inner_error_warning)
                r.messages.push_back("warning: inner Crofton relative error above 10% (max " +
                                     fmt(mm.max_inner_relative_error) + "); increase crofton.probes");
        }
        r.tables.push_back(std::move(mt));
    }
    return r;
}

RunResult cmd_kacrice(const Config& cfg, const Common& common) {
    RunResult r;
    const ProcessSpec spec = parse_process(cfg);
    KacParams params;
    params.counting = read_counting(cfg);
    params.interval = read_interval(cfg, spec);
    params.quad_fraction = cfg.get_double("kacrice.quad_fraction", 0.125);
    if (!(params.quad_fraction > 0.0 && params.quad_fraction <= 0.25))
        throw ConfigError("key 'kacrice.quad_fraction': must be in (0, 0.25]");
    const double u = cfg.get_double("u", 0.0);
    const std::vector<double> deltas = cfg.has("kacrice.deltas") ? cfg.get_doubles("kacrice.deltas") : default_deltas();
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
            throw ConfigError("key 'kacrice.deltas': must be positive and strictly decreasing");
    const long long reps = read_replicates(cfg, 1000);
    const bool profile = cfg.has("kacrice.epsilon");
    double eps = 0.0, pdelta = 0.0;
    int levels = 0;
    if (profile) {
        eps = cfg.get_double("kacrice.epsilon");
        levels = static_cast<int>(cfg.get_int("kacrice.levels", 10));
        pdelta = cfg.get_double("kacrice.profile_delta", eps / (2.0 * levels));
        if (!(eps > 0.0) || levels < 1 || !(pdelta > 0.0) || pdelta > eps / (2.0 * levels) * (1 + 1e-12))
            throw ConfigError("keys 'kacrice.epsilon', 'kacrice.levels', 'kacrice.profile_delta': need delta <= epsilon/(2 levels)");
    }
    KacRiceReport rep = verify_kac_rice(spec, u, deltas, reps, common.seed, params);
    if (profile) rep.R_profile = estimate_R_profile(spec, u, eps, levels, pdelta, reps, mix64(common.seed, 3), params);

    Table t{"kacrice", {"spec_id", "u", "delta", "mean", "stderr"}, {}};
    for (std::size_t i = 0; i < deltas.size(); ++i)
        t.rows.push_back({common.spec_id, fmt(u), fmt(deltas[i]), fmt(rep.kac_estimates[i].point_estimate),
                          fmt(rep.kac_estimates[i].std_error)});
    r.tables.push_back(std::move(t));
    r.documents.emplace_back("kacrice_report", rep.to_json());
    r.messages.push_back("crossing mean " + fmt(rep.crossing_estimate.point_estimate) +
                         (rep.closed_form ? ", closed form " + fmt(*rep.closed_form) : std::string()));
    return r;
}

RunResult cmd_diagnose(const Config& cfg) {
    RunResult r;
    const std::string cond = cfg.get_string("diagnose.condition");
    ConditionReport rep;
    if (cond == "H2_shotnoise") {
        const Kernel kernel = parse_kernel(cfg, "diagnose.kernel");
        rep = check_shotnoise_H2(kernel, static_cast<int>(cfg.get_int("diagnose.k", 1)),
                                 static_cast<int>(cfg.get_int("diagnose.n_max", 50)));
    } else if (cond == "density_A" || cond == "density_B1" || cond == "density_B2") {
        const Kernel kernel = parse_kernel(cfg, "diagnose.kernel");
        const Impulse impulse = parse_impulse(cfg, "diagnose.impulse");
        const double lambda = cfg.get_double("diagnose.lambda");
        if (!(lambda > 0.0)) throw ConfigError("key 'diagnose.lambda': must be positive");
        const DensityCondition kind = cond == "density_A"    ? DensityCondition::A
                                      : cond == "density_B1" ? DensityCondition::B1
                                                             : DensityCondition::B2;
        rep = check_density_condition(kind, kernel, lambda, impulse);
    } else if (cond == "density_radial_G") {
        rep = check_density_condition_radial(static_cast<int>(cfg.get_int("diagnose.d")),
                                             static_cast<int>(cfg.get_int("diagnose.q", 1)),
                                             cfg.get_double("diagnose.lambda"));
    } else {
        throw ConfigError("key 'diagnose.condition': unknown condition '" + cond + "'");
    }
    Table t{"conditions", {"condition_name", "value", "converged", "detail"}, {}};
    t.rows.push_back({rep.condition_name, fmt(rep.value), rep.converged ? "true" : "false", rep.detail});
    r.tables.push_back(std::move(t));
    r.documents.emplace_back("condition_report", rep.to_json());
    return r;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& file) {
    std::ifstream in(file);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        rows.push_back(std::move(cells));
    }
    return rows;
}

RunResult cmd_report(const Config& cfg) {
    RunResult r;
    std::vector<std::string> inputs;
    if (cfg.has("report.inputs")) {
        std::stringstream ss(cfg.get_string("report.inputs"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(' ');
            if (b == std::string::npos) continue;
            inputs.push_back(item.substr(b, item.find_last_not_of(' ') - b + 1));
        }
    }
    Table t{"report", {"source", "spec_id", "u", "p", "n", "estimate", "ci_low", "ci_high", "bound", "satisfied", "margin"}, {}};
    t.both_formats = true;
    for (const auto& dir : inputs) {
        const fs::path manifest = fs::path(dir) / "manifest.json";
        std::ifstream in(manifest);
        if (!in) throw ConfigError("key 'report.inputs': no manifest.json in '" + dir + "'");
        ordered_json m;
        try {
            m = ordered_json::parse(in);
        } catch (const std::exception&) {
            throw ConfigError("key 'report.inputs': unreadable manifest in '" + dir + "'");
        }
        if (m.value("tool", "") != "levelset") throw ConfigError("key 'report.inputs': manifest mismatch in '" + dir + "'");
        const fs::path moments = fs::path(dir) / "moments.csv";
        if (!fs::exists(moments)) continue;
        std::map<std::pair<std::string, std::string>, double> bound_for;  // (spec_id|u, p) -> bound
        const fs::path bfile = fs::path(dir) / "moment_bounds.csv";
        if (fs::exists(bfile))
            for (const auto& row : read_csv_rows(bfile))
                if (row.size() >= 4) bound_for[{row[0] + "|" + row[1], row[2]}] = std::strtod(row[3].c_str(), nullptr);
        for (const auto& row : read_csv_rows(moments)) {
            if (row.size() < 8) throw ConfigError("key 'report.inputs': malformed moments.csv in '" + dir + "'");
            MomentEstimate e;
            e.point_estimate = std::strtod(row[4].c_str(), nullptr);
            e.ci_low = std::strtod(row[6].c_str(), nullptr);
            e.ci_high = std::strtod(row[7].c_str(), nullptr);
            const auto it = bound_for.find({row[0] + "|" + row[1], row[2]});
            const double bound = it == bound_for.end() ? std::numeric_limits<double>::infinity() : it->second;
            const BoundComparison c = compare_bound(e, bound);
            t.rows.push_back({dir, row[0], row[1], row[2], row[3], row[4], row[6], row[7], fmt(bound),
                              c.satisfied ? "true" : "false", fmt(c.margin)});
        }
    }
    r.tables.push_back(std::move(t));
    return r;
}

}  // namespace

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string Table::to_json() const {
    auto arr = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < header.size() && i < row.size(); ++i) obj[header[i]] = cell_json(row[i]);
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

RunResult execute(const Config& cfg, const RunOptions& options) {
    const std::string command = cfg.get_string("command");
    cfg.get_string("output.dir", "");
    Common common;
    if (options.seed) {
        common.seed = *options.seed;
        if (cfg.has("seed")) cfg.get_u64("seed");
    } else if (command != "bound" && command != "diagnose" && command != "report") {
        common.seed = cfg.get_u64("seed");
    } else if (cfg.has("seed")) {
        common.seed = cfg.get_u64("seed");
    }

    RunResult r;
    auto with_spec_id = [&](const std::string& family) {
        common.spec_id = cfg.get_string("spec_id", family);
        if (common.spec_id.find_first_of(",\"\n") != std::string::npos)
            throw ConfigError("key 'spec_id': must not contain commas or quotes");
    };
    if (command == "bound") {
        r = cmd_bound(cfg);
    } else if (command == "diagnose") {
        r = cmd_diagnose(cfg);
    } else if (command == "report") {
        r = cmd_report(cfg);
    } else if (command == "crofton") {
        with_spec_id(family_name(parse_field(cfg)));
        r = cmd_crofton(cfg, common);
    } else if (command == "simulate" || command == "count" || command == "moments" || command == "kacrice") {
        with_spec_id(family_name(parse_process(cfg)));
        if (command == "simulate") r = cmd_simulate(cfg, common);
        else if (command == "count") r = cmd_count(cfg, common);
        else if (command == "moments") r = cmd_moments(cfg, common);
        else r = cmd_kacrice(cfg, common);
    } else {
        throw ConfigError("key 'command': unknown command '" + command + "'");
    }
    cfg.check_all_used();
    return r;
}

int run(const std::string& config_path, const RunOptions& options, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    try {
        if (options.format != "csv" && options.format != "json")
            throw ConfigError("--format must be csv or json, got '" + options.format + "'");
        if (options.threads < 1) throw ConfigError("--threads must be >= 1");
        Config cfg = Config::load(config_path);
        if (options.seed) cfg.set("seed", std::to_string(*options.seed));
        set_thread_count(options.threads);

        RunResult result;
        try {
            result = execute(cfg, options);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }

        std::string dir = options.out_dir;
        if (dir.empty()) dir = cfg.get_string("output.dir", "out");
        fs::create_directories(dir);
        std::vector<std::string> written;
        auto write = [&](const std::string& name, const std::string& text) {
            std::ofstream f(fs::path(dir) / name, std::ios::binary);
            f << text;
            if (!f) throw NumericError("failed to write " + (fs::path(dir) / name).string());
            written.push_back(name);
        };
        for (const auto& t : result.tables) {
            if (options.format == "csv" || t.both_formats) write(t.name + ".csv", t.to_csv());
            if (options.format == "json" || t.both_formats) write(t.name + ".json", t.to_json());
        }
        for (const auto& [name, text] : result.documents) write(name + ".json", text + "\n");

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        ordered_json m;
        m["tool"] = "levelset";
        m["version"] = kVersion;
        m["command"] = cfg.get_string("command");
        m["config_path"] = config_path;
        m["config_hash"] = cfg.hash();
        m["seed"] = cfg.has("seed") ? cfg.get_u64("seed") : 0;
        m["threads"] = options.threads;
        m["format"] = options.format;
        m["wall_time_seconds"] = wall;
        m["outputs"] = written;
        std::ofstream(fs::path(dir) / "manifest.json") << m.dump(2) << "\n";

        for (const auto& line : result.messages) out << line << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace levelset
