#include "levelset/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "levelset/errors.hpp"

namespace levelset {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    return std::all_of(k.begin(), k.end(), [](char c) {
        return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
               c == '.';
    });
}

double to_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError(where + ": malformed key '" + key + "'");
        if (value.empty()) throw ConfigError(where + ": key '" + key + "' has an empty value");
        if (!c.entries_.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return c;
}

Config Config::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    return parse(in, path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

const std::string& Config::raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw(key) : fallback;
}

double Config::get_double(const std::string& key) const { return to_double(key, raw(key)); }

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::optional<double> Config::get_optional_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key);
}

long long Config::get_int(const std::string& key) const { return to_int(key, raw(key)); }

long long Config::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key) const {
    const std::string& v = raw(key);
    std::uint64_t x = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end)
        throw ConfigError("key '" + key + "': expected an unsigned 64-bit integer, got '" + v + "'");
    return x;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(raw(key))) out.push_back(to_double(key, item));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<int> Config::get_ints(const std::string& key) const {
    std::vector<int> out;
    for (const auto& item : split_list(raw(key))) out.push_back(static_cast<int>(to_int(key, item)));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

void Config::check_all_used() const {
    for (const auto& [k, v] : entries_)
        if (!used_.count(k)) throw ConfigError("unknown key '" + k + "' for this command");
}

std::string Config::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : entries_) {
        for (char c : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- specs ---------------------------------------------------------------------

Kernel parse_kernel(const Config& cfg, const std::string& prefix) {
    const std::string name = cfg.get_string(prefix, "gaussian");
    if (name == "gaussian") return Kernel::gaussian_bump();
    if (name == "laplace") return Kernel::laplace();
    if (name == "one_sided_exp") return Kernel::one_sided_exponential();
    if (name == "sech") return Kernel::sech(cfg.get_double(prefix + ".rate", 1.0));
    if (name == "gamma") return Kernel::gamma(static_cast<int>(cfg.get_int(prefix + ".n", 3)));
    if (name == "power_tail") return Kernel::power_tail();
    throw ConfigError("key '" + prefix + "': unknown kernel '" + name + "'");
}

Impulse parse_impulse(const Config& cfg, const std::string& prefix) {
    const std::string name = cfg.get_string(prefix, "constant");
    Impulse imp;
    if (name == "constant") imp = Impulse::constant(cfg.get_double(prefix + ".a", 1.0));
    else if (name == "exponential") imp = Impulse::exponential(cfg.get_double(prefix + ".a", 1.0));
    else if (name == "uniform") imp = Impulse::uniform(cfg.get_double(prefix + ".a", 0.0), cfg.get_double(prefix + ".b", 1.0));
    else if (name == "normal") imp = Impulse::normal(cfg.get_double(prefix + ".a", 0.0), cfg.get_double(prefix + ".b", 1.0));
    else if (name == "gamma") imp = Impulse::gamma(cfg.get_double(prefix + ".a", 2.0), cfg.get_double(prefix + ".b", 1.0));
    else throw ConfigError("key '" + prefix + "': unknown impulse law '" + name + "'");
    try {
        imp.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("key '" + prefix + "': " + e.what());
    }
    return imp;
}

namespace {

SpectralGaussianSpec parse_spectral(const Config& cfg) {
    SpectralGaussianSpec s;
    const auto weights = cfg.has("process.weights") ? cfg.get_doubles("process.weights") : std::vector<double>{1.0};
    const auto freqs = cfg.has("process.frequencies") ? cfg.get_doubles("process.frequencies") : std::vector<double>{1.0};
    if (weights.size() != freqs.size())
        throw ConfigError("key 'process.frequencies': length differs from process.weights");
    s.atoms.clear();
    for (std::size_t i = 0; i < weights.size(); ++i) s.atoms.push_back({weights[i], freqs[i]});
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("key 'process.weights': ") + e.what());
    }
    return s;
}

}  // namespace

ProcessSpec parse_process(const Config& cfg) {
    const std::string kind = cfg.get_string("process.kind");
    if (kind == "sine_cosine") {
        SineCosineSpec s;
        const std::string law = cfg.get_string("process.omega", "pareto");
        if (law == "fixed") {
            s.omega = FrequencyLaw::fixed(cfg.get_double("process.omega.value"));
        } else if (law == "pareto") {
            std::optional<double> upper;
            if (cfg.has("process.omega.upper")) upper = cfg.get_double("process.omega.upper");
            s.omega = FrequencyLaw::pareto(cfg.get_double("process.omega.shape", 4.0), upper);
        } else {
            throw ConfigError("key 'process.omega': unknown frequency law '" + law + "'");
        }
        try {
            s.omega.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("key 'process.omega': ") + e.what());
        }
        return s;
    }
    if (kind == "spectral_gaussian") return parse_spectral(cfg);
    if (kind == "chi_square") {
        ChiSquareSpec s;
        s.n = static_cast<int>(cfg.get_int("process.n", 2));
        if (s.n < 1) throw ConfigError("key 'process.n': must be >= 1");
        s.base = parse_spectral(cfg);
        return s;
    }
    if (kind == "shot_noise") {
        ShotNoise1DSpec s;
        s.lambda = cfg.get_double("process.lambda", 1.0);
        if (!(s.lambda > 0.0)) throw ConfigError("key 'process.lambda': must be positive");
        s.kernel = parse_kernel(cfg, "process.kernel");
        s.impulse = parse_impulse(cfg, "process.impulse");
        if (cfg.has("process.window_pad")) s.window_pad = cfg.get_double("process.window_pad");
        return s;
    }
    if (kind == "regularized_diffusion") {
        RegularizedDiffusionSpec s;
        s.drift0 = cfg.get_double("process.drift0", s.drift0);
        s.drift1 = cfg.get_double("process.drift1", s.drift1);
        s.vol0 = cfg.get_double("process.vol0", s.vol0);
        s.vol1 = cfg.get_double("process.vol1", s.vol1);
        s.x0 = cfg.get_double("process.x0", s.x0);
        s.horizon = cfg.get_double("process.horizon", s.horizon);
        s.euler_step = cfg.get_double("process.euler_step", s.euler_step);
        s.burn_in = cfg.get_double("process.burn_in", s.burn_in);
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("process (regularized_diffusion): ") + e.what());
        }
        return s;
    }
    throw ConfigError("key 'process.kind': unknown process family '" + kind + "'");
}

FieldSpec parse_field(const Config& cfg) {
    const std::string kind = cfg.get_string("field.kind");
    if (kind == "shell" || kind == "coordinate" || kind == "constant") {
        DeterministicFieldSpec s;
        s.kind = kind == "shell" ? DeterministicFieldSpec::Kind::shell
                 : kind == "coordinate" ? DeterministicFieldSpec::Kind::coordinate
                                        : DeterministicFieldSpec::Kind::constant;
        s.d = static_cast<int>(cfg.get_int("field.d", 2));
        s.on_sphere = cfg.get_bool("field.on_sphere", false);
        s.r = cfg.get_double("field.r", s.r);
        s.index = static_cast<int>(cfg.get_int("field.index", 0));
        s.c = cfg.get_double("field.c", 0.0);
        if (cfg.has("field.rotation")) s.rotation = cfg.get_doubles("field.rotation");
        if (s.d < 1 || s.ambient_dim() > 16) throw ConfigError("key 'field.d': out of range");
        if (s.kind == DeterministicFieldSpec::Kind::coordinate && (s.index < 0 || s.index >= s.ambient_dim()))
            throw ConfigError("key 'field.index': out of range");
        return s;
    }
    if (kind == "shot_noise_ball") {
        ShotNoiseBallSpec s;
        s.d = static_cast<int>(cfg.get_int("field.d", 2));
        s.radius = cfg.get_double("field.radius", 1.0);
        s.lambda = cfg.get_double("field.lambda", 1.0);
        s.kernel.q = static_cast<int>(cfg.get_int("field.q", 1));
        s.pad = cfg.get_double("field.pad", s.pad);
        s.impulse = parse_impulse(cfg, "field.impulse");
        if (s.d < 2 || s.d > 16) throw ConfigError("key 'field.d': must be in [2, 16]");
        if (!(s.radius > 0.0)) throw ConfigError("key 'field.radius': must be positive");
        if (!(s.lambda > 0.0)) throw ConfigError("key 'field.lambda': must be positive");
        if (s.kernel.q < 1) throw ConfigError("key 'field.q': must be >= 1");
        return s;
    }
    if (kind == "sphere_shot_noise") {
        SphereShotNoiseSpec s;
        s.d = static_cast<int>(cfg.get_int("field.d", 2));
        s.lambda = cfg.get_double("field.lambda", 1.0);
        s.kernel.width = cfg.get_double("field.width", s.kernel.width);
        s.impulse = parse_impulse(cfg, "field.impulse");
        if (s.d < 1 || s.d > 15) throw ConfigError("key 'field.d': must be in [1, 15]");
        if (!(s.lambda > 0.0)) throw ConfigError("key 'field.lambda': must be positive");
        if (!(s.kernel.width > 0.0)) throw ConfigError("key 'field.width': must be positive");
        return s;
    }
    throw ConfigError("key 'field.kind': unknown field '" + kind + "'");
}

}  // namespace levelset
