#include "qbayes/cli/run.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbayes/cli/commands.hpp"
#include "qbayes/error.hpp"

namespace qbayes::cli {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

bool parse_tolerance(const std::string& text, RunConfig& config) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  try {
    std::size_t used = 0;
    const double value = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) return false;
    config.tolerances[text.substr(0, eq)] = value;
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::vector<std::string> tolerances;
  std::vector<std::string> names{"all"};
  for (auto n : command_names()) names.emplace_back(n);

  CLI::App app{"Numerical checks for quantum-Bayesian measurement and update rules", "qbayes"};
  app.add_option("command", config.command, "Subcommand to run")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--dim", config.dim, "Hilbert-space dimension")->check(CLI::Range(2, 64));
  app.add_option("--seed", config.seed, "Base seed; trial t uses seed ^ t");
  app.add_option("--trials", config.trials, "Random trials per sweep")->check(CLI::PositiveNumber);
  std::string format = "json";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", config.output, "Write the report to PATH instead of stdout");
  app.add_option("--tol", tolerances, "Override a check threshold, NAME=VALUE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "qbayes: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  config.format = format == "csv" ? Format::Csv : format == "text" ? Format::Text : Format::Json;
  for (const auto& t : tolerances) {
    if (!parse_tolerance(t, config)) {
      err << "qbayes: --tol expects NAME=VALUE, got '" << t << "'\n";
      return kExitUsage;
    }
  }

  Report report;
  const auto start = std::chrono::steady_clock::now();
  try {
    report = run_command(config);
  } catch (const Error& e) {
    err << "qbayes: " << e.what() << '\n';
    const bool usage = e.kind() == ErrorKind::InvalidArgument ||
                       e.kind() == ErrorKind::DimensionBudgetExceeded;
    return usage ? kExitUsage : kExitCheckFailure;
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.timestamp = utc_timestamp();

  const std::string text = serialize(report);
  if (config.output.empty()) {
    out << text;
  } else {
    std::ofstream file(config.output);
    if (!file) {
      err << "qbayes: cannot write " << config.output << '\n';
      return kExitUsage;
    }
    file << text;
  }
  return report.pass ? kExitPass : kExitCheckFailure;
}

}  // namespace qbayes::cli
