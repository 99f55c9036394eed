#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "locreg/errors.hpp"
#include "locreg/estimators.hpp"
#include "locreg/oracle.hpp"
#include "locreg/paths.hpp"

namespace locreg::cmd {

namespace fs = std::filesystem;

double hat_function(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 1.0 - a : 0.0;
}

double hat_antiderivative(double x) {
  if (x >= 1.0) return 0.5;
  if (x <= -1.0) return -0.5;
  return x - 0.5 * x * std::abs(x);
}

json parse_config_text(const std::string& text) {
  json cfg = json::parse(text, nullptr, false);
  if (cfg.is_discarded() || !cfg.is_object())
    throw config_error("config must be a JSON object");
  return cfg;
}

void apply_override(json& cfg, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw config_error("override must look like key=value, got '" + key_value + "'");
  const std::string key = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  json parsed = json::parse(value, nullptr, false);
  if (!parsed.is_discarded()) {
    cfg[key] = parsed;
    return;
  }
  if (value.find(',') != std::string::npos) {
    json arr = json::array();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      json elem = json::parse(item, nullptr, false);
      arr.push_back(elem.is_discarded() ? json(item) : elem);
    }
    cfg[key] = arr;
    return;
  }
  cfg[key] = value;
}

namespace {

template <class T>
T get_or(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(std::string("config key '") + key + "' has the wrong type");
  }
}

void ensure_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw io_error("cannot create directory " + out_dir);
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw io_error("cannot open " + file + " for writing");
  out << text;
  if (!out) throw io_error("failed writing " + file);
}

std::string read_text(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot open " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

GridSpec grid_from_config(const json& cfg) {
  GridSpec grid;
  grid.horizon = get_or(cfg, "horizon", 1.0);
  if (cfg.contains("num_steps")) {
    grid.num_steps = cfg.at("num_steps").get<std::int64_t>();
  } else {
    const int log2n = get_or(cfg, "grid_log2", 16);
    if (log2n < 0 || log2n > 30) throw config_error("grid_log2 must lie in [0, 30]");
    grid.num_steps = std::int64_t{1} << log2n;
  }
  grid.origin = get_or(cfg, "x0", 0.0);
  grid.validate();
  return grid;
}

ProcessSpec process_from_config(const json& cfg) {
  const std::string name = get_or<std::string>(cfg, "process", "brownian");
  const double x0 = get_or(cfg, "x0", 0.0);
  if (name == "brownian") return ProcessSpec::brownian(x0);
  if (name == "ou")
    return ProcessSpec::ou(get_or(cfg, "ou_theta", 1.0), get_or(cfg, "ou_sigma", 1.0), x0);
  if (name == "linear") return ProcessSpec::linear(get_or(cfg, "lin_slope", 1.0), x0);
  if (name == "constant") return ProcessSpec::constant(cfg.contains("x0") ? x0 : 1.0);
  throw config_error("unknown process '" + name + "'");
}

ExperimentSpec experiment_from_config(const json& cfg) {
  ExperimentSpec spec;
  spec.grid = grid_from_config(cfg);
  spec.process = process_from_config(cfg);
  spec.scheme = parse_scheme(get_or<std::string>(cfg, "scheme", "J"));
  spec.level = get_or(cfg, "level", 0.0);
  if (!cfg.contains("ladder")) throw config_error("config needs a 'ladder' array of eps values");
  spec.ladder = EpsilonLadder::from_eps_list(spec.grid, cfg.at("ladder").get<std::vector<double>>());
  spec.num_paths = get_or<std::int64_t>(cfg, "num_paths", 256);
  spec.master_seed = get_or<std::uint64_t>(cfg, "master_seed", 0);
  spec.target = cfg.contains("target") ? parse_target(cfg.at("target").get<std::string>())
                                       : default_target(spec.scheme);
  spec.threads = get_or(cfg, "threads", 0);
  spec.oracle_refine = get_or(cfg, "oracle_refine", 1);
  spec.holder_delta = get_or(cfg, "holder_delta", 0.49);
  if (cfg.contains("rate_window")) {
    const auto w = cfg.at("rate_window").get<std::vector<double>>();
    if (w.size() != 2) throw config_error("rate_window must be [low, high]");
    spec.rate_window = std::make_pair(w[0], w[1]);
  }
  if (cfg.contains("terminal_error_max"))
    spec.terminal_error_max = cfg.at("terminal_error_max").get<double>();
  spec.include_per_path = get_or(cfg, "include_per_path", false);
  return spec;
}

RunResult simulate(const json& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const GridSpec grid = grid_from_config(cfg);
  const ProcessSpec process = process_from_config(cfg);
  const auto num_paths = get_or<std::int64_t>(cfg, "num_paths", 1);
  const auto master_seed = get_or<std::uint64_t>(cfg, "master_seed", 0);
  if (num_paths < 1) throw config_error("num_paths must be positive");
  for (std::int64_t k = 0; k < num_paths; ++k) {
    const Path p = process.sample(grid, SeedSpec{master_seed, static_cast<std::uint64_t>(k)});
    char name[48];
    std::snprintf(name, sizeof(name), "path_%03lld.csv", static_cast<long long>(k));
    write_path_csv(p, (fs::path(out_dir) / name).string());
  }
  RunResult res;
  res.summary = "wrote " + std::to_string(num_paths) + " path file(s) to " + out_dir + "\n";
  return res;
}

namespace {

Path estimate_input_path(const json& cfg) {
  if (cfg.contains("path_csv")) return read_path_csv(cfg.at("path_csv").get<std::string>());
  const GridSpec grid = grid_from_config(cfg);
  return process_from_config(cfg).sample(
      grid, SeedSpec{get_or<std::uint64_t>(cfg, "master_seed", 0), 0});
}

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

RunResult estimate(const json& cfg, const std::string& out_dir, bool check_identities) {
  ensure_dir(out_dir);
  const Path p = estimate_input_path(cfg);
  if (!cfg.contains("eps")) throw config_error("estimate needs an 'eps' value");
  const Epsilon eps = Epsilon::from_eps(p.grid(), cfg.at("eps").get<double>());
  const double level = get_or(cfg, "level", 0.0);

  std::vector<std::string> tags;
  if (cfg.contains("schemes"))
    tags = cfg.at("schemes").get<std::vector<std::string>>();
  else
    tags.push_back(get_or<std::string>(cfg, "scheme", "J"));

  std::map<std::string, Curve> written;
  for (const auto& tag : tags) {
    const SchemeId scheme = parse_scheme(tag);
    if (scheme == SchemeId::COV) {
      if (!cfg.contains("covariate_csv"))
        throw config_error("COV needs a 'covariate_csv' second path");
      const Path q = read_path_csv(cfg.at("covariate_csv").get<std::string>());
      written[tag] = covariation_eps(p, q, eps);
    } else if (scheme == SchemeId::WEAK_PAIR) {
      auto [lhs, rhs] = weak_pairing(p, hat_function, hat_antiderivative, eps);
      written[tag + "_lhs"] = std::move(lhs);
      written[tag + "_rhs"] = std::move(rhs);
      written.erase(tag);
    } else {
      written[tag] = locreg::estimate(p, scheme, level, eps);
    }
  }
  for (const auto& [name, curve] : written)
    write_curve_csv(curve, (fs::path(out_dir) / ("curve_" + name + ".csv")).string());

  RunResult res;
  res.summary = "wrote " + std::to_string(written.size()) + " curve file(s) to " + out_dir + "\n";

  if (check_identities) {
    auto load = [&](const std::string& name) {
      return read_curve_csv((fs::path(out_dir) / ("curve_" + name + ".csv")).string()).values;
    };
    auto have = [&](std::initializer_list<const char*> names) {
      return std::all_of(names.begin(), names.end(), [&](const char* n) {
        return written.count(n) > 0;
      });
    };
    constexpr double tol = 1e-9;
    bool ok = true;
    std::ostringstream checks;
    if (have({"J", "I1", "I2"})) {
      auto j = load("J"), i1 = load("I1"), i2 = load("I2");
      for (std::size_t i = 0; i < j.size(); ++i) j[i] -= -i1[i] + i2[i];
      const double r = sup_abs(j);
      ok &= r <= tol;
      checks << "J == -I1 + I2: residual " << r << "\n";
    }
    if (have({"I3", "I31", "I32", "R3"})) {
      auto lhs = load("I3"), a = load("I31"), b = load("I32"), c = load("R3");
      for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= a[i] + b[i] + c[i];
      const double r = sup_abs(lhs);
      ok &= r <= tol;
      checks << "I3 == I31 + I32 + R3: residual " << r << "\n";
    }
    if (have({"I4", "I41", "I42", "R4"})) {
      auto lhs = load("I4"), a = load("I41"), b = load("I42"), c = load("R4");
      for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= a[i] + b[i] + c[i];
      const double r = sup_abs(lhs);
      ok &= r <= tol;
      checks << "I4 == I41 + I42 + R4: residual " << r << "\n";
    }
    if (have({"J", "I3", "I4", "R_EPS"})) {
      auto lhs = load("J"), a = load("I3"), b = load("I4"), c = load("R_EPS");
      for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= a[i] + b[i] + c[i];
      const double r = sup_abs(lhs);
      ok &= r <= tol;
      checks << "J == I3 + I4 + R_EPS: residual " << r << "\n";
    }
    res.pass = ok;
    res.summary += checks.str();
    res.summary += ok ? "identities hold\n" : "identity check FAILED\n";
  }
  return res;
}

RunResult converge(const json& cfg, const std::string& out_dir, bool no_timings, bool selftest) {
  ensure_dir(out_dir);
  RunResult res;

  if (selftest) {
    // Synthetic power law: the fitted slope must come back exactly.
    const GridSpec grid{1.0, 1 << 10, 0.0};
    const EpsilonLadder ladder =
        EpsilonLadder::from_eps_list(grid, {0.25, 0.125, 0.0625, 0.03125});
    std::vector<double> errors;
    for (const auto& r : ladder.rungs) errors.push_back(0.7 * std::pow(r.eps, 0.25));
    const RateFit fit = fit_rate(errors, ladder);
    json j;
    j["kind"] = "selftest";
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    write_text((fs::path(out_dir) / "selftest.json").string(), j.dump(2) + "\n");
    res.pass = std::abs(fit.slope - 0.25) < 1e-12;
    std::ostringstream ss;
    ss << "selftest slope " << fit.slope << (res.pass ? " (ok)" : " (FAILED)") << "\n";
    res.summary = ss.str();
    return res;
  }

  ExperimentSpec spec = experiment_from_config(cfg);
  spec.with_timings = !no_timings;
  const std::string experiment = get_or<std::string>(cfg, "experiment", "standard");

  std::vector<double> eps, errors;
  if (experiment == "reversal") {
    const ReversalReport report = run_reversal_experiment(spec);
    write_text((fs::path(out_dir) / "report.json").string(), report.to_json());
    report.j_report.write_rungs_csv((fs::path(out_dir) / "rungs.csv").string());
    for (const auto& r : report.j_report.rungs) {
      eps.push_back(r.eps);
      errors.push_back(r.mean_sup_error);
    }
    res.pass = report.j_report.flags.all();
    res.summary = "reversal experiment written to " + out_dir + "\n";
  } else if (experiment == "standard") {
    const ConvergenceReport report = run_experiment(spec);
    write_text((fs::path(out_dir) / "report.json").string(), report.to_json());
    report.write_rungs_csv((fs::path(out_dir) / "rungs.csv").string());
    for (const auto& r : report.rungs) {
      eps.push_back(r.eps);
      errors.push_back(r.mean_sup_error);
    }
    res.pass = report.flags.all();
    std::ostringstream ss;
    ss << "scheme " << report.scheme << " vs " << report.target << ": terminal error "
       << errors.back();
    if (report.fit) ss << ", fitted rate " << report.fit->slope;
    ss << "\n";
    res.summary = ss.str();
  } else {
    throw config_error("experiment must be 'standard' or 'reversal'");
  }

  if (get_or(cfg, "svg", true) &&
      std::all_of(errors.begin(), errors.end(), [](double e) { return e > 0.0; })) {
    write_loglog_svg((fs::path(out_dir) / "errors.svg").string(), eps, errors,
                     "mean sup error vs eps");
  }
  return res;
}

RunResult as_converge(const json& cfg, const std::string& out_dir, bool no_timings) {
  ensure_dir(out_dir);
  ExperimentSpec spec = experiment_from_config(cfg);
  spec.with_timings = !no_timings;
  const AsConvergenceReport report = run_as_convergence(spec);
  write_text((fs::path(out_dir) / "as_report.json").string(), report.to_json());
  RunResult res;
  if (cfg.contains("fraction_decreasing_min"))
    res.pass = report.fraction_decreasing >= cfg.at("fraction_decreasing_min").get<double>();
  std::ostringstream ss;
  ss << "fraction of paths with decreasing sup error: " << report.fraction_decreasing << "\n";
  res.summary = ss.str();
  return res;
}

std::string report_summary(const std::vector<std::string>& report_files) {
  struct Row {
    std::string scheme, process, target, terminal, rate, verdict;
  };
  std::vector<Row> rows;
  for (const auto& file : report_files) {
    const json j = json::parse(read_text(file), nullptr, false);
    if (j.is_discarded() || !j.contains("kind")) throw io_error(file + ": not a report");
    const std::string kind = j.at("kind").get<std::string>();
    char buf[64];
    auto fmt = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.4g", v);
      return std::string(buf);
    };
    if (kind == "convergence" || kind == "reversal") {
      const json& c = kind == "reversal" ? j.at("j_report") : j;
      Row row;
      row.scheme = c.at("scheme").get<std::string>();
      row.process = c.at("process").get<std::string>();
      row.target = c.at("target").get<std::string>();
      row.terminal = fmt(c.at("rungs").back().at("mean_sup_error").get<double>());
      row.rate = c.at("fit").is_null() ? "-" : fmt(c.at("fit").at("slope").get<double>());
      row.verdict = c.at("flags").at("all").get<bool>() ? "pass" : "fail";
      rows.push_back(std::move(row));
    } else if (kind == "as_convergence") {
      Row row;
      row.scheme = j.at("scheme").get<std::string>();
      row.process = j.at("process").get<std::string>();
      row.target = j.at("target").get<std::string>();
      double mean_last = 0.0;
      const auto traj = j.at("trajectories").get<std::vector<std::vector<double>>>();
      for (const auto& t : traj) mean_last += t.back();
      row.terminal = traj.empty() ? "-" : fmt(mean_last / static_cast<double>(traj.size()));
      row.rate = "-";
      row.verdict = "frac_dec=" + fmt(j.at("fraction_decreasing").get<double>());
      rows.push_back(std::move(row));
    } else {
      throw io_error(file + ": unknown report kind '" + kind + "'");
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.scheme < b.scheme; });
  std::ostringstream out;
  out << "| scheme | process | target | terminal_error | fitted_rate | verdict |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& r : rows)
    out << "| " << r.scheme << " | " << r.process << " | " << r.target << " | " << r.terminal
        << " | " << r.rate << " | " << r.verdict << " |\n";
  return out.str();
}

}  // namespace locreg::cmd
