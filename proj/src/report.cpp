#include "blowup/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "blowup/errors.hpp"

namespace blowup {

using nlohmann::ordered_json;

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::excluded: return "excluded";
    }
    return "fail";
}

Check& ReportEnvelope::add(std::string id, bool ok, std::string detail) {
    checks.push_back({std::move(id), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail), {}});
    return checks.back();
}

bool ReportEnvelope::passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) return false;
    return true;
}

namespace {

ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    const BallDomain dom = c.domain();
    const WeightField a = c.weight();
    auto vec = [](const Point& p) {
        ordered_json arr = ordered_json::array();
        for (Eigen::Index i = 0; i < p.size(); ++i) arr.push_back(p[i]);
        return arr;
    };
    j["domain"] = {{"dim", c.dim}, {"radius", dom.radius}, {"center", vec(dom.center)}};
    j["weight"] = {{"kind", c.weight_kind}, {"a0", a.a0}, {"g", vec(a.g)}};
    if (c.weight_kind == "affine_plus_bump") {
        j["weight"]["bump_center"] = vec(a.bump_center);
        j["weight"]["bump_amplitude"] = a.bump_amplitude;
        j["weight"]["bump_width"] = a.bump_width;
    }
    ordered_json anchors = ordered_json::array();
    for (const auto& p : c.anchor_list()) anchors.push_back(vec(p));
    j["anchor"] = {{"zeta0", vec(c.anchor())}, {"points", anchors}, {"signs", c.signs}};
    j["sigma"] = {{"family", c.family}, {"solve", c.sigma.solve}, {"d", c.sigma.d}, {"t", c.sigma.t}};
    j["epsilon"] = {{"values", c.epsilon}};
    j["projection"] = {{"depth", c.depth}, {"deltas", c.deltas}, {"points", c.sandwich_points}};
    j["quadrature"] = {{"method", to_string(c.method)},
                       {"samples", c.samples},
                       {"seed", c.seed ? ordered_json(*c.seed) : ordered_json(nullptr)},
                       {"gamma3", to_string(c.gamma3)},
                       {"log_variant", to_string(c.log_variant)}};
    j["output"] = {{"dir", c.out_dir}, {"formats", c.formats}};
    return j;
}

ordered_json to_json(const ReportEnvelope& env) {
    ordered_json j;
    j["schema_version"] = schema_version;
    j["tool_version"] = tool_version;
    j["subcommand"] = env.subcommand;
    j["config"] = env.config;
    j["wall_clock_s"] = env.wall_clock_s ? ordered_json(*env.wall_clock_s) : ordered_json(nullptr);
    j["status"] = env.passed() ? "pass" : "fail";
    ordered_json checks = ordered_json::array();
    for (const auto& c : env.checks) {
        ordered_json cj;
        cj["id"] = c.id;
        cj["status"] = to_string(c.status);
        cj["detail"] = c.detail;
        ordered_json payload = ordered_json::array();
        for (const auto& q : c.payload) {
            ordered_json qj;
            qj["name"] = q.name;
            qj["value"] = number(q.value);
            qj["tag"] = q.tag;
            if (q.err) qj["err"] = number(*q.err);
            payload.push_back(qj);
        }
        cj["payload"] = payload;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    ordered_json tables = ordered_json::array();
    for (const auto& t : env.tables) tables.push_back({{"name", t.name}, {"header", t.header}, {"rows", t.rows.size()}});
    j["tables"] = tables;
    return j;
}

std::string cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string cell(bool v) { return v ? "true" : "false"; }

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
    out += "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size())
            throw Error(ErrorCode::invalid_argument, t.name + ": row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw Error(ErrorCode::io, path.string() + ": write failed");
}

}  // namespace

std::vector<std::string> emit_reports(const ReportEnvelope& env, const std::string& dir,
                                      const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, dir + ": " + ec.message());
    std::vector<std::string> written;
    const fs::path json_path = fs::path(dir) / (env.subcommand + ".json");
    write_file(json_path, to_json(env).dump(2) + "\n");
    written.push_back(json_path.string());
    if (std::find(formats.begin(), formats.end(), "csv") != formats.end()) {
        for (const auto& t : env.tables) {
            const fs::path p = fs::path(dir) / (env.subcommand + "_" + t.name + ".csv");
            write_file(p, to_csv(t));
            written.push_back(p.string());
        }
    }
    return written;
}

}  // namespace blowup
