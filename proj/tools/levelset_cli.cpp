// levelset: batch runner for level-crossing and level-set experiments.
//
//   levelset --config exp.cfg [--seed N] [--threads N] [--out DIR] [--format csv|json]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "levelset/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification toolkit for level sets of smooth random processes"};
    app.set_version_flag("--version", std::string(levelset::kVersion));

    std::string config;
    std::optional<std::uint64_t> seed;
    levelset::RunOptions options;
    app.add_option("--config", config, "Experiment config (key = value lines)")->required();
    app.add_option("--seed", seed, "Master seed; overrides the config");
    app.add_option("--threads", options.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    app.add_option("--out", options.out_dir, "Output directory (default: output.dir or ./out)");
    app.add_option("--format", options.format, "Table format")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    options.seed = seed;
    return levelset::run(config, options, std::cout, std::cerr);
}
