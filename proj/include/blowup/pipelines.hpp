#pragma once

#include <string>
#include <vector>

#include "blowup/config.hpp"
#include "blowup/report.hpp"

namespace blowup {

const std::vector<std::string>& subcommand_names();

// Runs one module pipeline. Module errors are rethrown with the subcommand name prepended.
ReportEnvelope run_subcommand(const std::string& name, const RunConfig& cfg);

// Critical parameters of the configured family: F2 minimizer for pairs, F1 block critical points per anchor.
ConfigPair resolve_pair(const RunConfig& cfg, const UniversalConstants& c);
ConfigK resolve_single(const RunConfig& cfg, const UniversalConstants& c);

}  // namespace blowup
