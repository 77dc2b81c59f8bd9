#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blowup/config.hpp"
#include "blowup/pipelines.hpp"
#include "blowup/report.hpp"
#include "support.hpp"

using namespace blowup;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config takes the defaults") {
    const RunConfig c = parse_config("[domain]\ndim = 5\n");
    CHECK(c.dim == 5);
    CHECK(c.radius == 1.0);
    CHECK(c.epsilon == std::vector<double>{0.04, 0.02, 0.01, 0.005});
    CHECK(c.family == "pair");
    CHECK(c.method == QuadMethod::closed_form);
    CHECK_FALSE(c.seed.has_value());
    CHECK(c.anchor()[0] == -1.0);
    CHECK(c.weight().g[0] == 1.0);
}

TEST_CASE("full config") {
    const RunConfig c = parse_config(R"(
[domain]
dim = 6
radius = 2
center = 1, 0, 0, 0, 0, 0
[weight]
kind = affine_plus_bump
a0 = 3
g = 0, 1, 0, 0, 0, 0
bump_center = 1, 0, 0, 0, 0, 0
bump_amplitude = 0.2
bump_width = 0.5
[anchor]
points = -1, 0, 0, 0, 0, 0 ; 3, 0, 0, 0, 0, 0
signs = 0, 1
[sigma]
family = single
solve = false
d = 0.1, 0.2
t = 0.3, 0.4
[epsilon]
values = 0.1, 0.05, 0.01
[quadrature]
method = monte_carlo
samples = 5000
seed = 42
gamma3 = with_extra_alpha_factor
log_variant = plain
[output]
dir = somewhere
formats = json
)");
    CHECK(c.dim == 6);
    CHECK(c.radius == 2.0);
    CHECK(c.anchor_list().size() == 2);
    CHECK(c.signs == std::vector<int>{0, 1});
    CHECK(c.weight().kind == WeightKind::affine_plus_bump);
    CHECK(c.sigma.d == std::vector<double>{0.1, 0.2});
    CHECK(*c.seed == 42);
    CHECK(c.gamma3 == Gamma3Variant::with_extra_alpha_factor);
    CHECK(c.log_variant == LogVariant::plain);
    CHECK(c.formats == std::vector<std::string>{"json"});
}

TEST_CASE("config errors name the offending key") {
    CHECK(config_error("[domain]\ndim = 4\n").find("domain.dim") != std::string::npos);
    CHECK(error_of([] { parse_config("[domain]\ndim = 4\n"); }) == ErrorCode::dimension_out_of_range);
    CHECK(config_error("[epsilon]\nvalues = 0.01, 0.02\n").find("strictly decreasing") != std::string::npos);
    CHECK(config_error("[epsilon]\nvalues = 0.02, -0.01\n").find("epsilon.values") != std::string::npos);
    CHECK(config_error("[domain]\ndimension = 5\n").find("domain.dimension: unknown key") != std::string::npos);
    CHECK(config_error("[weight]\ng = 1, 0\n").find("weight.g") != std::string::npos);
    CHECK(config_error("[domain]\nradius = abc\n").find("domain.radius") != std::string::npos);
    CHECK(config_error("[quadrature]\nmethod = monte_carlo\n").find("quadrature.seed") != std::string::npos);
    CHECK(config_error("[sigma]\nsolve = false\nd = 1, 1\nt = 2, 1\n").find("sigma.t") != std::string::npos);
    CHECK(config_error("[output]\nformats = xml\n").find("output.formats") != std::string::npos);
    CHECK(error_of([] { load_config("/nonexistent/run.ini"); }) == ErrorCode::io);
}

TEST_CASE("bundled configs parse") {
    for (const char* name : {"theorem1.ini", "theorem2.ini", "fixed_pair.ini", "scans.ini", "green.ini"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_config(std::string(BLOWUP_CONFIG_DIR) + "/" + name));
    }
}

TEST_CASE("report envelope") {
    ReportEnvelope env;
    env.subcommand = "demo";
    env.add("ok", true, "fine").payload = {Quantity::closed("x", 1.5), Quantity::est("y", 2.0, 0.1)};
    env.checks.push_back({"skipped", CheckStatus::excluded, "not applicable", {}});
    CHECK(env.passed());
    env.tables.push_back({"rows", {"a", "b"}, {{cell(0.1), cell(true)}}});

    const auto j = to_json(env);
    CHECK(j["schema_version"] == schema_version);
    CHECK(j["tool_version"] == tool_version);
    CHECK(j["wall_clock_s"].is_null());
    CHECK(j["status"] == "pass");
    CHECK(j["checks"][1]["status"] == "excluded");
    CHECK(j["checks"][0]["payload"][0]["tag"] == "closed_form");
    CHECK_FALSE(j["checks"][0]["payload"][0].contains("err"));
    CHECK(j["checks"][0]["payload"][1]["err"] == 0.1);
    CHECK(to_csv(env.tables[0]) == "a,b\n0.1,true\n");

    env.add("bad", false);
    CHECK_FALSE(env.passed());
    CHECK(to_json(env)["status"] == "fail");

    Table broken{"broken", {"a"}, {{"1", "2"}}};
    CHECK(error_of([&] { to_csv(broken); }) == ErrorCode::invalid_argument);
}

TEST_CASE("subcommand dispatch") {
    RunConfig cfg;
    CHECK(error_of([&] { run_subcommand("nope", cfg); }) == ErrorCode::unknown_subcommand);
    try {
        run_subcommand("asymptotics", cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
        CHECK(std::string(e.what()).find("asymptotics") != std::string::npos);
        CHECK(std::string(e.what()).find("quadrature.seed") != std::string::npos);
    }
    const ReportEnvelope env = run_subcommand("critical-points", cfg);
    CHECK(env.subcommand == "critical-points");
    CHECK(env.passed());
    CHECK(env.config["domain"]["dim"] == 5);
}

TEST_CASE("reports are byte identical across runs") {
    const fs::path root = fs::temp_directory_path() / "blowup_report_identity";
    fs::remove_all(root);
    RunConfig cfg;
    cfg.seed = 3;
    cfg.samples = 2000;
    for (const char* sub : {"constants", "bubble-check", "critical-points", "energy-check"}) {
        const auto a = emit_reports(run_subcommand(sub, cfg), (root / "a").string(), cfg.formats);
        const auto b = emit_reports(run_subcommand(sub, cfg), (root / "b").string(), cfg.formats);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(slurp(a[i]) == slurp(b[i]));
    }
    cfg.seed = 4;
    const auto c = emit_reports(run_subcommand("energy-check", cfg), (root / "c").string(), cfg.formats);
    CHECK(slurp(c[0]) != slurp(root / "a" / "energy-check.json"));
    fs::remove_all(root);
}
