#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "levelset/process.hpp"

namespace levelset {

/// Line-oriented `key = value` configuration. Keys are lowercase dotted
/// paths (process.kind, counting.base_step); `#` starts a comment. Every key
/// must be consumed by the command that runs, so typos surface as errors.
class Config {
  public:
    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config parse_string(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::optional<double> get_optional_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<int> get_ints(const std::string& key) const;

    /// Throws ConfigError naming the first key never read.
    void check_all_used() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    /// FNV-1a 64 of the sorted `key=value` lines, as 16 hex digits.
    std::string hash() const;

  private:
    const std::string& raw(const std::string& key) const;

    std::map<std::string, std::string> entries_;
    mutable std::set<std::string> used_;
};

Kernel parse_kernel(const Config& cfg, const std::string& prefix);
Impulse parse_impulse(const Config& cfg, const std::string& prefix);
/// From process.kind and its parameters.
ProcessSpec parse_process(const Config& cfg);
/// From field.kind and its parameters.
FieldSpec parse_field(const Config& cfg);

}  // namespace levelset
