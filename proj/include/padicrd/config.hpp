#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "padicrd/errors.hpp"
#include "padicrd/kinetics.hpp"
#include "padicrd/simulate.hpp"

namespace padicrd {

// Value of a TOML-subset document: numbers, booleans, strings and flat arrays.
struct ConfigValue {
  std::variant<double, bool, std::string, std::vector<ConfigValue>> data;
  int line = 0;
};

// Flattened document: "section.key" -> value.
using ConfigTable = std::map<std::string, ConfigValue>;

// Supports [section] headers, dotted keys, "strings", numbers, true/false,
// single-line arrays and # comments. Duplicate keys are an error.
ConfigTable parse_toml(const std::string& text);

struct RunConfig {
  std::optional<std::string> graph;
  std::optional<unsigned> p;
  std::optional<unsigned> N;
  std::string model = "brusselator";
  std::map<std::string, double> params;
  std::string f_text, g_text;
  std::optional<std::pair<double, double>> guess;
  std::optional<ValidityBox> box;
  double eps = 1.0;
  double d = 1.0;
  std::vector<unsigned> levels;
  bool include_infinity = true;
  SimConfig sim;
  std::vector<double> replica_times = {0.1, 0.5, 1.0, 2.0};
  std::string out;  // empty: no files written
};

// Every key must be known; type mismatches and out-of-range values raise ConfigError.
RunConfig run_config_from_table(const ConfigTable& table);
RunConfig load_run_config(const std::string& path);

// Builds the kinetics named by the config, with defaults A=2, B=4.5 (brusselator)
// and A=10, B=2, C=1 (cima) when parameters are absent.
KineticsModel make_model(const RunConfig& config);

std::vector<unsigned> parse_level_list(const std::string& text);

}  // namespace padicrd
