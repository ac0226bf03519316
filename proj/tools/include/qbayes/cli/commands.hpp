#pragma once

#include <string_view>
#include <vector>

#include "qbayes/cli/report.hpp"

namespace qbayes::cli {

/// Subcommand names in the order `all` runs them.
const std::vector<std::string_view>& command_names();

/// Run one subcommand (or `all`) and collect its checks. Timing fields are
/// filled by the caller.
Report run_command(const RunConfig& config);

}  // namespace qbayes::cli
