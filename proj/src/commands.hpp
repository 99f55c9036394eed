#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "locreg/harness.hpp"

namespace locreg::cmd {

using json = nlohmann::ordered_json;

// Parses the declarative experiment config (single flat JSON object).
json parse_config_text(const std::string& text);

// Applies one "key=value" override; values are parsed as JSON scalars/arrays
// when possible, comma lists become arrays, everything else stays a string.
void apply_override(json& cfg, const std::string& key_value);

ExperimentSpec experiment_from_config(const json& cfg);
ProcessSpec process_from_config(const json& cfg);
GridSpec grid_from_config(const json& cfg);

struct RunResult {
  bool pass = true;  // gate verdict when one was requested
  std::string summary;
};

RunResult simulate(const json& cfg, const std::string& out_dir);
RunResult estimate(const json& cfg, const std::string& out_dir, bool check_identities);
RunResult converge(const json& cfg, const std::string& out_dir, bool no_timings, bool selftest);
RunResult as_converge(const json& cfg, const std::string& out_dir, bool no_timings);
std::string report_summary(const std::vector<std::string>& report_files);

// Static log-log error chart.
void write_loglog_svg(const std::string& file, const std::vector<double>& eps,
                      const std::vector<double>& errors, const std::string& title);

// Continuous piecewise-linear hat on [-1, 1] and its antiderivative, the
// built-in test function for the weak pairing.
double hat_function(double x);
double hat_antiderivative(double x);

}  // namespace locreg::cmd
