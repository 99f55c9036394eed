#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "locreg/errors.hpp"
#include "locreg/harness.hpp"

namespace locreg {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json fit_to_json(const std::optional<RateFit>& fit) {
  if (!fit) return nullptr;
  return ordered_json{{"slope", fit->slope},
                      {"intercept", fit->intercept},
                      {"r_squared", fit->r_squared}};
}

std::optional<RateFit> fit_from_json(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  RateFit fit;
  fit.slope = j.at("slope").get<double>();
  fit.intercept = j.at("intercept").get<double>();
  fit.r_squared = j.at("r_squared").get<double>();
  return fit;
}

ordered_json flags_to_json(const PassFlags& flags) {
  ordered_json j;
  j["errors_strictly_decreasing"] = flags.errors_strictly_decreasing;
  j["rate_in_window"] = flags.rate_in_window ? ordered_json(*flags.rate_in_window) : nullptr;
  j["terminal_error_below"] =
      flags.terminal_error_below ? ordered_json(*flags.terminal_error_below) : nullptr;
  j["all"] = flags.all();
  return j;
}

PassFlags flags_from_json(const ordered_json& j) {
  PassFlags flags;
  flags.errors_strictly_decreasing = j.at("errors_strictly_decreasing").get<bool>();
  if (!j.at("rate_in_window").is_null()) flags.rate_in_window = j.at("rate_in_window").get<bool>();
  if (!j.at("terminal_error_below").is_null())
    flags.terminal_error_below = j.at("terminal_error_below").get<bool>();
  return flags;
}

ordered_json convergence_to_json(const ConvergenceReport& r) {
  ordered_json j;
  j["kind"] = "convergence";
  j["scheme"] = r.scheme;
  j["target"] = r.target;
  j["process"] = r.process;
  j["level"] = r.level;
  j["horizon"] = r.horizon;
  j["num_steps"] = r.num_steps;
  j["num_paths"] = r.num_paths;
  j["master_seed"] = r.master_seed;
  j["oracle_refine"] = r.oracle_refine;
  j["holder_delta"] = r.holder_delta;
  // The sup-error summary is the L2 norm over paths of sup_t |estimate -
  // target|, a stricter summary than convergence in probability.
  j["error_metric"] = "L2_of_sup";
  ordered_json rungs = ordered_json::array();
  for (const auto& s : r.rungs) {
    ordered_json rj;
    rj["eps"] = s.eps;
    rj["lag"] = s.lag;
    rj["mean_sup_error"] = s.mean_sup_error;
    rj["std_error"] = s.std_error;
    rj["mean_estimator_terminal"] = s.mean_estimator_terminal;
    rj["mean_target_terminal"] = s.mean_target_terminal;
    if (!s.per_path_sup.empty()) rj["per_path_sup"] = s.per_path_sup;
    rungs.push_back(std::move(rj));
  }
  j["rungs"] = std::move(rungs);
  j["fit"] = fit_to_json(r.fit);
  j["envelope_constant"] = r.envelope_constant;
  j["flags"] = flags_to_json(r.flags);
  if (r.wall_seconds) j["wall_seconds"] = *r.wall_seconds;
  return j;
}

ConvergenceReport convergence_from_json(const ordered_json& j) {
  ConvergenceReport r;
  r.scheme = j.at("scheme").get<std::string>();
  r.target = j.at("target").get<std::string>();
  r.process = j.at("process").get<std::string>();
  r.level = j.at("level").get<double>();
  r.horizon = j.at("horizon").get<double>();
  r.num_steps = j.at("num_steps").get<std::int64_t>();
  r.num_paths = j.at("num_paths").get<std::int64_t>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.oracle_refine = j.at("oracle_refine").get<int>();
  r.holder_delta = j.at("holder_delta").get<double>();
  for (const auto& rj : j.at("rungs")) {
    RungStats s;
    s.eps = rj.at("eps").get<double>();
    s.lag = rj.at("lag").get<std::int64_t>();
    s.mean_sup_error = rj.at("mean_sup_error").get<double>();
    s.std_error = rj.at("std_error").get<double>();
    s.mean_estimator_terminal = rj.at("mean_estimator_terminal").get<double>();
    s.mean_target_terminal = rj.at("mean_target_terminal").get<double>();
    if (rj.contains("per_path_sup")) s.per_path_sup = rj.at("per_path_sup").get<std::vector<double>>();
    r.rungs.push_back(std::move(s));
  }
  r.fit = fit_from_json(j.at("fit"));
  r.envelope_constant = j.at("envelope_constant").get<double>();
  r.flags = flags_from_json(j.at("flags"));
  if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

ordered_json parse_text(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw io_error("malformed report JSON");
  return j;
}

}  // namespace

std::string ConvergenceReport::to_json(int indent) const {
  return convergence_to_json(*this).dump(indent) + "\n";
}

ConvergenceReport ConvergenceReport::from_json(const std::string& text) {
  return convergence_from_json(parse_text(text));
}

void ConvergenceReport::write_rungs_csv(const std::string& file) const {
  std::ofstream out(file);
  if (!out) throw io_error("cannot open " + file + " for writing");
  out << "eps,mean_sup_error,std_error\n";
  char line[120];
  for (const auto& s : rungs) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g", s.eps, s.mean_sup_error, s.std_error);
    out << line << "\n";
  }
  if (!out) throw io_error("failed writing " + file);
}

std::string AsConvergenceReport::to_json(int indent) const {
  ordered_json j;
  j["kind"] = "as_convergence";
  j["scheme"] = scheme;
  j["target"] = target;
  j["process"] = process;
  j["level"] = level;
  j["horizon"] = horizon;
  j["num_steps"] = num_steps;
  j["num_paths"] = num_paths;
  j["master_seed"] = master_seed;
  j["max_ratio"] = max_ratio;
  j["eps"] = eps;
  j["fraction_decreasing"] = fraction_decreasing;
  j["trajectories"] = trajectories;
  if (wall_seconds) j["wall_seconds"] = *wall_seconds;
  return j.dump(indent) + "\n";
}

AsConvergenceReport AsConvergenceReport::from_json(const std::string& text) {
  const ordered_json j = parse_text(text);
  AsConvergenceReport r;
  r.scheme = j.at("scheme").get<std::string>();
  r.target = j.at("target").get<std::string>();
  r.process = j.at("process").get<std::string>();
  r.level = j.at("level").get<double>();
  r.horizon = j.at("horizon").get<double>();
  r.num_steps = j.at("num_steps").get<std::int64_t>();
  r.num_paths = j.at("num_paths").get<std::int64_t>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.max_ratio = j.at("max_ratio").get<double>();
  r.eps = j.at("eps").get<std::vector<double>>();
  r.fraction_decreasing = j.at("fraction_decreasing").get<double>();
  r.trajectories = j.at("trajectories").get<std::vector<std::vector<double>>>();
  if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

std::string ReversalReport::to_json(int indent) const {
  ordered_json j;
  j["kind"] = "reversal";
  j["j_report"] = parse_text(j_report.to_json(indent));
  j["identity_residual_max"] = identity_residual_max;
  j["boundary_mean_sup"] = boundary_mean_sup;
  j["boundary_fit"] = fit_to_json(boundary_fit);
  j["boundary_envelope_constant"] = boundary_envelope_constant;
  return j.dump(indent) + "\n";
}

}  // namespace locreg
