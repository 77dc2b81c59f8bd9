#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blowup/config.hpp"
#include "blowup/mc.hpp"

namespace blowup {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr int schema_version = 1;

enum class CheckStatus { pass, fail, excluded };
std::string to_string(CheckStatus s);

// A reported number is either tagged closed_form / deterministic or carries an error bar.
struct Quantity {
    std::string name;
    double value = 0.0;
    std::optional<double> err;
    std::string tag;  // closed_form | deterministic | estimate

    static Quantity closed(std::string name, double v) { return {std::move(name), v, std::nullopt, "closed_form"}; }
    static Quantity det(std::string name, double v) { return {std::move(name), v, std::nullopt, "deterministic"}; }
    static Quantity est(std::string name, double v, double e) { return {std::move(name), v, e, "estimate"}; }
    static Quantity est(std::string name, const Estimate& e) { return {std::move(name), e.value, e.err, "estimate"}; }
};

struct Check {
    std::string id;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
    std::vector<Quantity> payload;
};

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct ReportEnvelope {
    std::string subcommand;
    nlohmann::ordered_json config;
    std::optional<double> wall_clock_s;
    std::vector<Check> checks;
    std::vector<Table> tables;

    Check& add(std::string id, bool ok, std::string detail = {});
    bool passed() const;
};

nlohmann::ordered_json config_json(const RunConfig& c);
nlohmann::ordered_json to_json(const ReportEnvelope& env);
std::string to_csv(const Table& t);

// Fixed-format number for CSV cells.
std::string cell(double v);
std::string cell(bool v);

// Writes <dir>/<subcommand>.json and, when requested, <dir>/<subcommand>_<table>.csv.
std::vector<std::string> emit_reports(const ReportEnvelope& env, const std::string& dir,
                                      const std::vector<std::string>& formats);

}  // namespace blowup
