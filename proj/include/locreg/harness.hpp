#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locreg/estimators.hpp"
#include "locreg/grid.hpp"
#include "locreg/paths.hpp"
#include "locreg/rng.hpp"

namespace locreg {

// Strictly decreasing family of grid-aligned widths, typically geometric.
struct EpsilonLadder {
  std::vector<Epsilon> rungs;

  static EpsilonLadder from_eps_list(const GridSpec& grid, const std::vector<double>& eps);
  static EpsilonLadder geometric(const GridSpec& grid, double eps0, double ratio, int count);

  void validate(const GridSpec& grid) const;
  // Largest successive ratio; < 1 is the structural stand-in for the
  // summability of sqrt(eps_n) along an infinite geometric extension.
  double max_ratio() const;
  std::size_t size() const { return rungs.size(); }
};

// Limit a scheme is tested against.
enum class Target {
  L,          // local time at the level (Tanaka oracle)
  HALF_L,     // half the local time
  QUARTER_L,  // a quarter of the local time
  ZERO,       // identically zero (remainder diagnostics, degenerate fixtures)
  STOCH_INT,  // forward stochastic integral of 1{X > level}
  QV_T        // realized quadratic variation
};

const char* target_name(Target t);
Target parse_target(const std::string& tag);
// The scheme -> limit bindings; ZERO is additionally allowed for any scheme
// as a degenerate-fixture diagnostic.
Target default_target(SchemeId scheme);

enum class ProcessKind { BROWNIAN, OU, LINEAR, CONSTANT, CUSTOM };

struct ProcessSpec {
  ProcessKind kind = ProcessKind::BROWNIAN;
  double x0 = 0.0;
  double ou_theta = 1.0;  // drift -theta * x
  double ou_sigma = 1.0;
  double lin_slope = 1.0;  // drift slope, zero diffusion
  DiffusionSpec custom;    // CUSTOM only

  static ProcessSpec brownian(double x0 = 0.0);
  static ProcessSpec ou(double theta = 1.0, double sigma = 1.0, double x0 = 0.0);
  static ProcessSpec linear(double slope = 1.0, double x0 = 0.0);
  static ProcessSpec constant(double x0 = 1.0);

  std::string name() const;
  bool is_diffusion() const { return kind != ProcessKind::BROWNIAN; }
  Path sample(const GridSpec& grid, SeedSpec seed) const;
};

struct ExperimentSpec {
  SchemeId scheme = SchemeId::J;
  double level = 0.0;
  ProcessSpec process;
  GridSpec grid;
  EpsilonLadder ladder;
  std::int64_t num_paths = 1;
  std::uint64_t master_seed = 0;
  Target target = Target::L;

  int threads = 0;         // 0: hardware concurrency
  int oracle_refine = 1;   // oracle grid num_steps multiplier; >1 subsamples
  double holder_delta = 0.49;
  std::optional<std::pair<double, double>> rate_window;
  std::optional<double> terminal_error_max;
  bool include_per_path = false;
  bool with_timings = true;

  void validate() const;
};

struct RungStats {
  double eps = 0.0;
  std::int64_t lag = 0;
  // sqrt of the Monte Carlo mean of sup_t |estimate - target| squared, the
  // L2(Omega) norm of the sup deviation.
  double mean_sup_error = 0.0;
  // Sample standard deviation of the per-path sup deviations.
  double std_error = 0.0;
  double mean_estimator_terminal = 0.0;
  double mean_target_terminal = 0.0;
  std::vector<double> per_path_sup;  // kept only when requested
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares on (log eps, log error). Requires at least three
// rungs and strictly positive errors; throws config_error otherwise.
RateFit fit_rate(const std::vector<double>& errors, const EpsilonLadder& ladder);

struct PassFlags {
  bool errors_strictly_decreasing = false;
  std::optional<bool> rate_in_window;
  std::optional<bool> terminal_error_below;

  bool all() const {
    return errors_strictly_decreasing && rate_in_window.value_or(true) &&
           terminal_error_below.value_or(true);
  }
};

struct ConvergenceReport {
  std::string scheme;
  std::string target;
  std::string process;
  double level = 0.0;
  double horizon = 1.0;
  std::int64_t num_steps = 0;
  std::int64_t num_paths = 0;
  std::uint64_t master_seed = 0;
  int oracle_refine = 1;
  double holder_delta = 0.49;

  std::vector<RungStats> rungs;
  std::optional<RateFit> fit;  // absent when the fit is degenerate (zero errors or < 3 rungs)
  // Fitted envelope constant: max over rungs of error / eps^(delta/2). The
  // empirical stand-in for the non-explicit constants of the L2 rate bounds.
  double envelope_constant = 0.0;
  PassFlags flags;
  std::optional<double> wall_seconds;

  std::string to_json(int indent = 2) const;
  static ConvergenceReport from_json(const std::string& text);
  void write_rungs_csv(const std::string& file) const;  // eps,mean_sup_error,std_error
};

ConvergenceReport run_experiment(const ExperimentSpec& spec);

struct AsConvergenceReport {
  std::string scheme;
  std::string target;
  std::string process;
  double level = 0.0;
  double horizon = 1.0;
  std::int64_t num_steps = 0;
  std::int64_t num_paths = 0;
  std::uint64_t master_seed = 0;
  double max_ratio = 0.0;

  std::vector<double> eps;                       // the sequence used
  std::vector<std::vector<double>> trajectories; // [path][rung] sup errors
  double fraction_decreasing = 0.0;              // terminal < initial (all-zero counts)
  std::optional<double> wall_seconds;

  double fraction_below(double threshold, std::size_t rung) const;

  std::string to_json(int indent = 2) const;
  static AsConvergenceReport from_json(const std::string& text);
};

// Fixed-path error trajectories along the ladder, which must pass the
// geometric summability check (max successive ratio < 1).
AsConvergenceReport run_as_convergence(const ExperimentSpec& spec);

struct ReversalReport {
  ConvergenceReport j_report;  // J against the Tanaka oracle on the diffusion
  // sup over paths and times of |I2 - (reversed-path functional + boundary term)|
  double identity_residual_max = 0.0;
  std::vector<double> boundary_mean_sup;  // per rung, mean sup of the boundary term
  std::optional<RateFit> boundary_fit;
  double boundary_envelope_constant = 0.0;  // at exponent 0.4

  std::string to_json(int indent = 2) const;
};

// Time-reversal experiment for diffusions: J vs the local-time oracle, plus
// the exact rearrangement of I2 through the reversed path, whose boundary
// term must decay along the ladder.
ReversalReport run_reversal_experiment(const ExperimentSpec& spec);

}  // namespace locreg
