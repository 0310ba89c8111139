// SPDX-License-Identifier: Apache-2.0
// lab --config <path> [--out <path>] [--format csv|json] [--seed-override <u64>] [--threads <n>]
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "freelab/errors.hpp"
#include "freelab/lab/config.hpp"
#include "freelab/lab/emit.hpp"
#include "freelab/lab/experiments.hpp"
#include "freelab/montecarlo.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw freelab::IoError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seeded random-matrix and free-probability experiments"};
    std::string config_path, out_path, format;
    std::uint64_t seed_override = 0;
    int threads = 0;
    app.add_option("--config", config_path, "experiment config (key = value lines or JSON)")->required();
    app.add_option("--out", out_path, "output file; stdout when omitted");
    auto* format_opt = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed-override", seed_override, "replace master_seed");
    app.add_option("--threads", threads, "worker count")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto cfg = freelab::lab::parse_config(read_file(config_path));
        if (*seed_opt) cfg.master_seed = seed_override;
        if (!out_path.empty()) cfg.out_path = out_path;
        if (*format_opt) cfg.format = format == "json" ? freelab::lab::OutputFormat::json : freelab::lab::OutputFormat::csv;
        if (threads > 0) freelab::set_worker_count(threads);
        const auto result = freelab::lab::run_experiment(cfg);
        freelab::lab::emit_results(result, cfg.format, cfg.out_path);
    } catch (const freelab::Error& e) {
        std::cerr << "lab: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "lab: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
