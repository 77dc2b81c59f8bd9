#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/pipelines.hpp"
#include "blowup/report.hpp"

using namespace blowup;

namespace {

constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_runtime = 3;

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    CLI::App app{"Numerical checks for bubble-tower blow-up of the almost critical biharmonic Navier problem",
                 "blowup-lab"};
    app.set_version_flag("--version", tool_version);

    std::string sub, config_path, out, formats, variant, method, log_variant, deltas;
    int dim = 0;
    std::uint64_t seed = 0, samples = 0;
    double depth = 0.0;
    bool timing = false;

    std::string names;
    for (const auto& n : subcommand_names()) names += (names.empty() ? "" : ", ") + n;
    app.add_option("subcommand", sub, "one of: " + names)->required();
    app.add_option("--config", config_path, "INI configuration file");
    app.add_option("--dim", dim, "override domain.dim");
    app.add_option("--seed", seed, "override quadrature.seed");
    app.add_option("--samples", samples, "override quadrature.samples");
    app.add_option("--out", out, "output directory (beats BLOWUP_LAB_OUT and output.dir)");
    app.add_option("--format", formats, "comma list of json,csv");
    app.add_option("--variant", variant, "gamma3 variant: without | with_extra_alpha_factor");
    app.add_option("--method", method, "quadrature method: closed_form | radial_gauss | monte_carlo");
    app.add_option("--log-variant", log_variant, "F2 log term: plain | a_homogeneous");
    app.add_option("--depth", depth, "override projection.depth");
    app.add_option("--deltas", deltas, "override projection.deltas");
    app.add_flag("--timing", timing, "record wall-clock time (breaks byte identity)");
    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (dim) cfg.dim = dim;
        if (app.count("--seed")) cfg.seed = seed;
        if (samples) cfg.samples = samples;
        if (const char* env = std::getenv("BLOWUP_LAB_OUT"); env && *env) cfg.out_dir = env;
        if (!out.empty()) cfg.out_dir = out;
        if (!formats.empty()) {
            cfg.formats.clear();
            std::string item;
            for (char ch : formats + ",") {
                if (ch == ',') {
                    if (!item.empty()) cfg.formats.push_back(item);
                    item.clear();
                } else if (ch != ' ') {
                    item += ch;
                }
            }
        }
        if (!variant.empty()) cfg.gamma3 = parse_gamma3_variant(variant);
        if (!method.empty()) cfg.method = parse_quad_method(method);
        if (!log_variant.empty()) cfg.log_variant = parse_log_variant(log_variant);
        if (app.count("--depth")) cfg.depth = depth;
        if (!deltas.empty()) cfg.deltas = parse_list("--deltas", deltas);
        cfg.validate();
    } catch (const Error& e) {
        std::cerr << "blowup-lab: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        ReportEnvelope env = run_subcommand(sub, cfg);
        if (timing) env.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto files = emit_reports(env, cfg.out_dir, cfg.formats);
        for (const auto& c : env.checks)
            std::printf("%-9s %s%s%s\n", to_string(c.status).c_str(), c.id.c_str(), c.detail.empty() ? "" : "  ",
                        c.detail.c_str());
        for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
        return env.passed() ? 0 : exit_check_failed;
    } catch (const Error& e) {
        std::cerr << "blowup-lab: " << e.what() << "\n";
        return e.code() == ErrorCode::unknown_subcommand || e.code() == ErrorCode::config ? exit_usage : exit_runtime;
    }
}
