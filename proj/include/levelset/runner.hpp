#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levelset/config.hpp"

namespace levelset {

inline constexpr const char* kVersion = "1.0.0";

struct RunOptions {
    /// Output directory; config key output.dir, then "out", when empty.
    std::string out_dir;
    int threads = 1;
    /// "csv" or "json".
    std::string format = "csv";
    /// Overrides the config's seed.
    std::optional<std::uint64_t> seed;
};

/// Row-oriented result written as CSV (header first) or as a JSON array.
struct Table {
    std::string name;  // file stem, e.g. "moments"
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// Written as both CSV and JSON regardless of the requested format.
    bool both_formats = false;

    std::string to_csv() const;
    std::string to_json() const;
};

struct RunResult {
    std::vector<Table> tables;
    /// Extra JSON documents (file stem -> text), always written as .json.
    std::vector<std::pair<std::string, std::string>> documents;
    /// Human-readable summary lines for stdout.
    std::vector<std::string> messages;
};

/// Runs the command named by the config's `command` key entirely in memory.
/// Throws ConfigError, InfeasibleError or NumericError; nothing is written.
RunResult execute(const Config& cfg, const RunOptions& options);

/// Parses, executes and writes results plus manifest.json. Returns the
/// process exit status: 0 ok, 1 config error, 2 infeasible, 3 numeric failure.
int run(const std::string& config_path, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace levelset
