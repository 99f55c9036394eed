#include "locreg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "locreg/errors.hpp"
#include "locreg/oracle.hpp"
#include "parallel.hpp"

namespace locreg {

EpsilonLadder EpsilonLadder::from_eps_list(const GridSpec& grid, const std::vector<double>& eps) {
  EpsilonLadder ladder;
  ladder.rungs.reserve(eps.size());
  for (double e : eps) ladder.rungs.push_back(Epsilon::from_eps(grid, e));
  ladder.validate(grid);
  return ladder;
}

EpsilonLadder EpsilonLadder::geometric(const GridSpec& grid, double eps0, double ratio,
                                       int count) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw config_error("ladder ratio must lie in (0, 1)");
  std::vector<double> eps;
  double e = eps0;
  for (int k = 0; k < count; ++k, e *= ratio) eps.push_back(e);
  return from_eps_list(grid, eps);
}

void EpsilonLadder::validate(const GridSpec& grid) const {
  if (rungs.empty()) throw config_error("ladder must have at least one rung");
  for (const auto& r : rungs) r.check_grid(grid);
  for (std::size_t k = 0; k + 1 < rungs.size(); ++k)
    if (!(rungs[k + 1].eps < rungs[k].eps))
      throw config_error("ladder must be strictly decreasing");
}

double EpsilonLadder::max_ratio() const {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < rungs.size(); ++k)
    worst = std::max(worst, rungs[k + 1].eps / rungs[k].eps);
  return worst;
}

const char* target_name(Target t) {
  switch (t) {
    case Target::L: return "L";
    case Target::HALF_L: return "HALF_L";
    case Target::QUARTER_L: return "QUARTER_L";
    case Target::ZERO: return "ZERO";
    case Target::STOCH_INT: return "STOCH_INT";
    case Target::QV_T: return "QV_T";
  }
  return "?";
}

Target parse_target(const std::string& tag) {
  if (tag == "L") return Target::L;
  if (tag == "HALF_L") return Target::HALF_L;
  if (tag == "QUARTER_L") return Target::QUARTER_L;
  if (tag == "ZERO") return Target::ZERO;
  if (tag == "STOCH_INT") return Target::STOCH_INT;
  if (tag == "QV_T") return Target::QV_T;
  throw config_error("unknown target tag '" + tag + "'");
}

Target default_target(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::J: return Target::L;
    case SchemeId::I1: return Target::STOCH_INT;
    case SchemeId::I3:
    case SchemeId::I4: return Target::HALF_L;
    case SchemeId::I31:
    case SchemeId::I32:
    case SchemeId::I41:
    case SchemeId::I42: return Target::QUARTER_L;
    case SchemeId::R_EPS:
    case SchemeId::R3:
    case SchemeId::R4: return Target::ZERO;
    case SchemeId::QV: return Target::QV_T;
    default:
      throw config_error(std::string("scheme ") + scheme_name(scheme) +
                         " has no limit binding for convergence runs");
  }
}

ProcessSpec ProcessSpec::brownian(double x0) {
  ProcessSpec s;
  s.kind = ProcessKind::BROWNIAN;
  s.x0 = x0;
  return s;
}

ProcessSpec ProcessSpec::ou(double theta, double sigma, double x0) {
  ProcessSpec s;
  s.kind = ProcessKind::OU;
  s.ou_theta = theta;
  s.ou_sigma = sigma;
  s.x0 = x0;
  return s;
}

ProcessSpec ProcessSpec::linear(double slope, double x0) {
  ProcessSpec s;
  s.kind = ProcessKind::LINEAR;
  s.lin_slope = slope;
  s.x0 = x0;
  return s;
}

ProcessSpec ProcessSpec::constant(double x0) {
  ProcessSpec s;
  s.kind = ProcessKind::CONSTANT;
  s.x0 = x0;
  return s;
}

std::string ProcessSpec::name() const {
  switch (kind) {
    case ProcessKind::BROWNIAN: return "brownian";
    case ProcessKind::OU: return "ou";
    case ProcessKind::LINEAR: return "linear";
    case ProcessKind::CONSTANT: return "constant";
    case ProcessKind::CUSTOM: return "custom";
  }
  return "?";
}

Path ProcessSpec::sample(const GridSpec& grid, SeedSpec seed) const {
  GridSpec g = grid;
  g.origin = x0;
  switch (kind) {
    case ProcessKind::BROWNIAN: return gen_brownian(g, seed);
    case ProcessKind::OU: {
      DiffusionSpec d;
      const double theta = ou_theta, s = ou_sigma;
      d.drift = [theta](double, double x) { return -theta * x; };
      d.sigma = [s](double, double) { return s; };
      return gen_diffusion(g, d, seed);
    }
    case ProcessKind::LINEAR: {
      DiffusionSpec d;
      const double slope = lin_slope;
      d.drift = [slope](double, double) { return slope; };
      d.sigma = [](double, double) { return 0.0; };
      return gen_diffusion(g, d, seed);
    }
    case ProcessKind::CONSTANT: {
      DiffusionSpec d;
      d.drift = [](double, double) { return 0.0; };
      d.sigma = [](double, double) { return 0.0; };
      return gen_diffusion(g, d, seed);
    }
    case ProcessKind::CUSTOM: return gen_diffusion(g, custom, seed);
  }
  throw config_error("unknown process kind");
}

void ExperimentSpec::validate() const {
  grid.validate();
  ladder.validate(grid);
  if (num_paths < 1) throw config_error("num_paths must be positive");
  if (!std::isfinite(level)) throw config_error("level must be finite");
  if (threads < 0) throw config_error("threads must be non-negative");
  if (oracle_refine < 1) throw config_error("oracle_refine must be >= 1");
  if (!(holder_delta > 0.0 && holder_delta < 0.5))
    throw config_error("holder_delta must lie in (0, 1/2)");
  if (target != Target::ZERO && target != default_target(scheme))
    throw config_error(std::string("target ") + target_name(target) +
                       " is not the limit of scheme " + scheme_name(scheme));
}

RateFit fit_rate(const std::vector<double>& errors, const EpsilonLadder& ladder) {
  if (ladder.size() < 3) throw config_error("rate fit needs at least three rungs");
  if (errors.size() != ladder.size())
    throw config_error("rate fit needs one error per rung");
  for (double e : errors)
    if (!(e > 0.0)) throw config_error("rate fit needs strictly positive errors");

  const std::size_t n = errors.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] = std::log(ladder.rungs[k].eps);
    ys[k] = std::log(errors[k]);
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

namespace {

// Per-path target curve sampled on the estimator grid. With oracle_refine > 1
// the reference is computed on the fine grid and read at the coarse points.
std::vector<double> target_on_coarse(const Path& fine, double level, Target target,
                                     std::int64_t stride, std::int64_t coarse_steps) {
  std::vector<double> out(static_cast<std::size_t>(coarse_steps) + 1, 0.0);
  if (target == Target::ZERO) return out;

  Curve ref;
  double factor = 1.0;
  switch (target) {
    case Target::L: ref = tanaka_local_time(fine, level); break;
    case Target::HALF_L:
      ref = tanaka_local_time(fine, level);
      factor = 0.5;
      break;
    case Target::QUARTER_L:
      ref = tanaka_local_time(fine, level);
      factor = 0.25;
      break;
    case Target::STOCH_INT: {
      const auto& x = fine.values();
      ref.grid = fine.grid();
      ref.values.assign(x.size(), 0.0);
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (x[i] - level > 0.0) acc += x[i + 1] - x[i];
        ref.values[i + 1] = acc;
      }
      break;
    }
    case Target::QV_T: ref = realized_quadratic_variation(fine); break;
    case Target::ZERO: break;
  }
  for (std::int64_t j = 0; j <= coarse_steps; ++j)
    out[j] = factor * ref.values[static_cast<std::size_t>(j * stride)];
  return out;
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, std::abs(a[i] - b[i]));
  return sup;
}

struct PathResult {
  std::vector<double> sup;        // per rung
  std::vector<double> terminal;   // per rung
  double target_terminal = 0.0;
};

PathResult evaluate_path(const ExperimentSpec& spec, std::int64_t k) {
  GridSpec fine_grid = spec.grid;
  fine_grid.num_steps *= spec.oracle_refine;
  const Path fine = spec.process.sample(fine_grid, SeedSpec{spec.master_seed,
                                                            static_cast<std::uint64_t>(k)});
  const Path coarse = spec.oracle_refine > 1 ? subsample(fine, spec.oracle_refine) : fine;
  const std::vector<double> target =
      target_on_coarse(fine, spec.level, spec.target, spec.oracle_refine, spec.grid.num_steps);

  PathResult res;
  res.sup.reserve(spec.ladder.size());
  res.terminal.reserve(spec.ladder.size());
  res.target_terminal = target.back();
  for (const auto& rung : spec.ladder.rungs) {
    const Curve est = estimate(coarse, spec.scheme, spec.level, rung);
    res.sup.push_back(sup_abs_diff(est.values, target));
    res.terminal.push_back(est.values.back());
  }
  return res;
}

}  // namespace

ConvergenceReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<PathResult> results(static_cast<std::size_t>(spec.num_paths));
  parallel_for(spec.num_paths, spec.threads,
               [&](std::int64_t k) { results[static_cast<std::size_t>(k)] = evaluate_path(spec, k); });

  ConvergenceReport report;
  report.scheme = scheme_name(spec.scheme);
  report.target = target_name(spec.target);
  report.process = spec.process.name();
  report.level = spec.level;
  report.horizon = spec.grid.horizon;
  report.num_steps = spec.grid.num_steps;
  report.num_paths = spec.num_paths;
  report.master_seed = spec.master_seed;
  report.oracle_refine = spec.oracle_refine;
  report.holder_delta = spec.holder_delta;

  const double n = static_cast<double>(spec.num_paths);
  for (std::size_t r = 0; r < spec.ladder.size(); ++r) {
    RungStats stats;
    stats.eps = spec.ladder.rungs[r].eps;
    stats.lag = spec.ladder.rungs[r].lag;
    double sum_sq = 0.0, sum = 0.0, sum_term = 0.0, sum_target = 0.0;
    for (const auto& pr : results) {
      sum_sq += pr.sup[r] * pr.sup[r];
      sum += pr.sup[r];
      sum_term += pr.terminal[r];
      sum_target += pr.target_terminal;
    }
    stats.mean_sup_error = std::sqrt(sum_sq / n);
    const double mean_sup = sum / n;
    double var = 0.0;
    for (const auto& pr : results) var += (pr.sup[r] - mean_sup) * (pr.sup[r] - mean_sup);
    stats.std_error = spec.num_paths > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    stats.mean_estimator_terminal = sum_term / n;
    stats.mean_target_terminal = sum_target / n;
    if (spec.include_per_path) {
      stats.per_path_sup.reserve(results.size());
      for (const auto& pr : results) stats.per_path_sup.push_back(pr.sup[r]);
    }
    report.rungs.push_back(std::move(stats));
  }

  std::vector<double> errors;
  errors.reserve(report.rungs.size());
  for (const auto& r : report.rungs) errors.push_back(r.mean_sup_error);

  const bool fittable = report.rungs.size() >= 3 &&
                        std::all_of(errors.begin(), errors.end(), [](double e) { return e > 0.0; });
  if (fittable) report.fit = fit_rate(errors, spec.ladder);

  report.envelope_constant = 0.0;
  for (std::size_t r = 0; r < errors.size(); ++r)
    report.envelope_constant = std::max(
        report.envelope_constant,
        errors[r] / std::pow(spec.ladder.rungs[r].eps, 0.5 * spec.holder_delta));

  report.flags.errors_strictly_decreasing = true;
  for (std::size_t r = 0; r + 1 < errors.size(); ++r)
    if (!(errors[r + 1] < errors[r])) report.flags.errors_strictly_decreasing = false;
  if (spec.rate_window) {
    report.flags.rate_in_window =
        report.fit && report.fit->slope >= spec.rate_window->first &&
        report.fit->slope <= spec.rate_window->second;
  }
  if (spec.terminal_error_max)
    report.flags.terminal_error_below = errors.back() < *spec.terminal_error_max;

  if (spec.with_timings) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report.wall_seconds = std::chrono::duration<double>(elapsed).count();
  }
  return report;
}

double AsConvergenceReport::fraction_below(double threshold, std::size_t rung) const {
  if (trajectories.empty()) return 0.0;
  std::size_t count = 0;
  for (const auto& traj : trajectories)
    if (traj[rung] < threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(trajectories.size());
}

AsConvergenceReport run_as_convergence(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.ladder.size() < 2)
    throw config_error("fixed-path convergence needs at least two rungs");
  const double ratio = spec.ladder.max_ratio();
  if (!(ratio < 1.0))
    throw config_error("ladder fails the summability check: successive ratio must stay below 1");
  const auto start = std::chrono::steady_clock::now();

  std::vector<PathResult> results(static_cast<std::size_t>(spec.num_paths));
  parallel_for(spec.num_paths, spec.threads,
               [&](std::int64_t k) { results[static_cast<std::size_t>(k)] = evaluate_path(spec, k); });

  AsConvergenceReport report;
  report.scheme = scheme_name(spec.scheme);
  report.target = target_name(spec.target);
  report.process = spec.process.name();
  report.level = spec.level;
  report.horizon = spec.grid.horizon;
  report.num_steps = spec.grid.num_steps;
  report.num_paths = spec.num_paths;
  report.master_seed = spec.master_seed;
  report.max_ratio = ratio;
  for (const auto& r : spec.ladder.rungs) report.eps.push_back(r.eps);

  std::size_t decreasing = 0;
  for (const auto& pr : results) {
    const bool all_zero =
        std::all_of(pr.sup.begin(), pr.sup.end(), [](double s) { return s == 0.0; });
    if (all_zero || pr.sup.back() < pr.sup.front()) ++decreasing;
    report.trajectories.push_back(pr.sup);
  }
  report.fraction_decreasing =
      static_cast<double>(decreasing) / static_cast<double>(spec.num_paths);

  if (spec.with_timings) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report.wall_seconds = std::chrono::duration<double>(elapsed).count();
  }
  return report;
}

}  // namespace locreg
