#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qbayes::cli {

enum class Format { Json, Csv, Text };

struct RunConfig {
  std::string command;
  std::size_t dim = 2;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::map<std::string, double> tolerances;  // --tol NAME=VALUE overrides
  std::string output;                        // empty means stdout
  Format format = Format::Json;
};

struct CheckRecord {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string op;  // value <op> threshold: one of <=, <, >=, >
  bool pass = false;
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<CheckRecord> checks;
  bool pass = false;
  std::string timestamp;  // ISO-8601 UTC
  double wall_time_s = 0.0;
};

std::string_view to_string(Format format);

/// Keys appear in a fixed order so equal reports serialize identically.
/// Timing fields (timestamp, wall_time_s) are omitted when `timing` is false.
std::string to_json(const Report& report, bool timing = true);
std::string to_csv(const Report& report);
std::string to_text(const Report& report);
std::string serialize(const Report& report);

}  // namespace qbayes::cli
