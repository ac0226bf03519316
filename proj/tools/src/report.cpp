#include "qbayes/cli/report.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

#ifndef QBAYES_VERSION
#define QBAYES_VERSION "0.0.0"
#endif

namespace qbayes::cli {
namespace {

using Json = nlohmann::ordered_json;

Json config_json(const RunConfig& c) {
  Json tolerances = Json::object();
  for (const auto& [name, value] : c.tolerances) tolerances[name] = value;
  return Json{{"command", c.command},        {"dim", c.dim},
              {"seed", c.seed},              {"trials", c.trials},
              {"format", to_string(c.format)}, {"tolerances", tolerances},
              {"rng", "xoshiro256**/splitmix64/box-muller"}};
}

std::string number(double v, int precision = 17) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

}  // namespace

std::string_view to_string(Format format) {
  switch (format) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Text: return "text";
  }
  return "json";
}

std::string to_json(const Report& report, bool timing) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"op", c.op},
                          {"pass", c.pass}});
  }
  Json j{{"tool", "qbayes"},
         {"version", QBAYES_VERSION},
         {"command", report.command},
         {"config", config_json(report.config)},
         {"checks", checks},
         {"pass", report.pass}};
  if (timing) {
    j["timestamp"] = report.timestamp;
    j["wall_time_s"] = report.wall_time_s;
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
  std::ostringstream s;
  s << "name,value,threshold,op,pass\n";
  for (const auto& c : report.checks) {
    s << c.name << ',' << number(c.value) << ',' << number(c.threshold) << ',' << c.op << ','
      << (c.pass ? "true" : "false") << '\n';
  }
  return s.str();
}

std::string to_text(const Report& report) {
  std::ostringstream s;
  s << "qbayes " << QBAYES_VERSION << "  " << report.command << "  dim=" << report.config.dim
    << " seed=" << report.config.seed << " trials=" << report.config.trials << '\n';
  for (const auto& c : report.checks) {
    s << (c.pass ? "  PASS  " : "  FAIL  ") << std::left << std::setw(44) << c.name << ' '
      << number(c.value, 10) << ' ' << c.op << ' ' << number(c.threshold, 10) << '\n';
  }
  s << (report.pass ? "PASS" : "FAIL") << "  (" << std::fixed << std::setprecision(3)
    << report.wall_time_s << " s)\n";
  return s.str();
}

std::string serialize(const Report& report) {
  switch (report.config.format) {
    case Format::Json: return to_json(report);
    case Format::Csv: return to_csv(report);
    case Format::Text: return to_text(report);
  }
  return to_json(report);
}

}  // namespace qbayes::cli
