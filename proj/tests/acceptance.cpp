// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/pipelines.hpp"
#include "blowup/report.hpp"

#ifndef BLOWUP_CONFIG_DIR
#define BLOWUP_CONFIG_DIR "configs"
#endif

using namespace blowup;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;
};

// Every listed check present and passing.
void require(Outcome& o, const ReportEnvelope& env, const std::vector<std::string>& ids, const std::string& tag = {}) {
    for (const auto& id : ids) {
        const Check* found = nullptr;
        for (const auto& c : env.checks)
            if (c.id == id) found = &c;
        if (!found) {
            o.ok = false;
            o.note += " " + tag + id + "=missing";
            continue;
        }
        const bool passed = found->status == CheckStatus::pass;
        if (!passed) o.ok = false;
        std::string extra;
        for (const auto& q : found->payload)
            if (q.name == "slope" || q.name == "max_z" || q.name == "max_rel_error" || q.name == "measured" ||
                q.name == "coefficient")
                extra = "(" + q.name + " " + cell(q.value) + ")";
        if (passed && extra.empty()) continue;
        o.note += " " + tag + id + "=" + to_string(found->status) + extra;
    }
}

RunConfig from_file(const std::string& name) { return load_config(std::string(BLOWUP_CONFIG_DIR) + "/" + name); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void within(Outcome& o, double elapsed, double limit) {
    o.note += " time " + cell(elapsed) + "s/" + cell(limit) + "s";
    if (elapsed >= limit) o.ok = false;
}

Outcome check_constants() {
    Outcome o;
    o.note = " N=5..12 gamma1/gamma2 gauss and monte_carlo";
    const auto t0 = std::chrono::steady_clock::now();
    for (int N = 5; N <= 12; ++N) {
        RunConfig cfg;
        cfg.dim = N;
        cfg.method = QuadMethod::monte_carlo;
        cfg.seed = 1;
        cfg.samples = 100000;
        require(o, run_subcommand("constants", cfg),
                {"gamma1.radial_gauss", "gamma2.radial_gauss", "gamma1.monte_carlo", "gamma2.monte_carlo"},
                "N" + std::to_string(N) + ":");
    }
    within(o, seconds_since(t0), 5.0);
    return o;
}

Outcome check_bubble_residual() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    for (int N : {5, 6, 7}) {
        RunConfig cfg;
        cfg.dim = N;
        cfg.seed = 1;
        require(o, run_subcommand("bubble-check", cfg), {"residual.order"}, "N" + std::to_string(N) + ":");
    }
    within(o, seconds_since(t0), 10.0);
    return o;
}

Outcome check_kernel() {
    Outcome o;
    for (int N : {5, 6, 7}) {
        RunConfig cfg;
        cfg.dim = N;
        cfg.seed = 1;
        require(o, run_subcommand("bubble-check", cfg), {"kernel.fd"}, "N" + std::to_string(N) + ":");
    }
    return o;
}

Outcome check_green() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    require(o, run_subcommand("green-check", from_file("green.ini")),
            {"manufactured", "symmetry.H", "symmetry.G", "lah.slopes"});
    within(o, seconds_since(t0), 600.0);
    return o;
}

Outcome check_projection() {
    Outcome o;
    RunConfig cfg = from_file("scans.ini");
    require(o, run_subcommand("projection-scan", cfg), {"pu.sandwich", "remainder.slope"}, "N5:");
    cfg.dim = 6;
    cfg.g.clear();
    require(o, run_subcommand("projection-scan", cfg), {"remainder.slope"}, "N6:");
    return o;
}

Outcome check_asymptotics() {
    Outcome o;
    require(o, run_subcommand("asymptotics", from_file("theorem2.ini")),
            {"self_energy.coefficient", "correction.coefficient", "interaction.coefficient", "log_integral.slope"});
    return o;
}

Outcome check_reduced_energy() {
    Outcome o;
    require(o, run_subcommand("critical-points", from_file("theorem2.ini")),
            {"f1.critical.0", "f1.reference", "f2.minimize", "f2.grid_basin"});
    return o;
}

Outcome check_error_norm() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    require(o, run_subcommand("residual-scan", from_file("scans.ini")),
            {"sigma1.slope", "sigma2.slope", "misscaled.smaller"});
    within(o, seconds_since(t0), 1800.0);
    return o;
}

Outcome check_energy() {
    Outcome o;
    require(o, run_subcommand("energy-check", from_file("theorem2.ini")), {"residual.monotone", "coefficient"});
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome check_determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "blowup_acceptance_determinism";
    fs::remove_all(root);
    RunConfig cfg = from_file("scans.ini");
    cfg.samples = 10000;
    cfg.out_dir = root.string();
    int files = 0;
    for (const auto& sub : subcommand_names()) {
        std::vector<std::string> first;
        const auto written = emit_reports(run_subcommand(sub, cfg), cfg.out_dir, cfg.formats);
        for (const auto& f : written) first.push_back(slurp(f));
        const auto again = emit_reports(run_subcommand(sub, cfg), cfg.out_dir, cfg.formats);
        if (again != written) {
            o.ok = false;
            o.note += " " + sub + "=file_set";
            continue;
        }
        for (std::size_t i = 0; i < again.size(); ++i) {
            ++files;
            if (slurp(again[i]) != first[i]) {
                o.ok = false;
                o.note += " " + fs::path(again[i]).filename().string() + "=differs";
            }
        }
    }
    o.note += " " + std::to_string(files) + " files compared";
    fs::remove_all(root);
    return o;
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"constants", check_constants},
        {"bubble residual order", check_bubble_residual},
        {"kernel derivatives", check_kernel},
        {"green function", check_green},
        {"projection", check_projection},
        {"asymptotic integrals", check_asymptotics},
        {"reduced energy", check_reduced_energy},
        {"error-norm scaling", check_error_norm},
        {"energy expansion", check_energy},
        {"determinism", check_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.note = std::string(" error: ") + e.what();
        }
        if (!o.ok) ++failed;
        std::printf("%s %2zu %-22s [%.1fs]%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    seconds_since(t0), o.note.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
