#include <algorithm>
#include <cmath>
#include <vector>

#include "locreg/errors.hpp"
#include "locreg/harness.hpp"
#include "parallel.hpp"

namespace locreg {

namespace {

struct ReversalPathStats {
  double residual_sup = 0.0;               // worst rung
  std::vector<double> boundary_sup;        // per rung
};

// I2 rearranged through the reversed path. With Y the reversed (level
// shifted) path, the head of the sum is an increment functional of Y and the
// leftover is a boundary window of at most lag terms near t:
//   I2(t_j) = -scale * sum_{k in [n-j+1, n-lag]} (Y[k+m]-Y[k]) 1{Y[k]>0}  +  boundary(t_j).
// The residual of this identity checks reverse_path and the I2 kernel against
// each other; the boundary term must decay along the ladder.
ReversalPathStats reversal_identity(const Path& p, double level, const EpsilonLadder& ladder) {
  const Path shifted = shift_level(p, level);
  const Path reversed = reverse_path(shifted);
  const auto& y = shifted.values();
  const auto& rev = reversed.values();
  const std::int64_t n = shifted.num_steps();
  const double h = shifted.grid().step();

  ReversalPathStats out;
  out.boundary_sup.reserve(ladder.size());
  for (const auto& rung : ladder.rungs) {
    const std::int64_t m = rung.lag;
    const double scale = h / rung.eps;

    // prefix of the clamped I2 terms over the original path
    std::vector<double> pw(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::int64_t r = std::min(i + m, n);
      pw[i + 1] = pw[i] + (y[r] > 0.0 ? y[r] - y[i] : 0.0);
    }
    // prefix of the increment terms over the reversed path
    std::vector<double> pb(static_cast<std::size_t>(n - m) + 2, 0.0);
    for (std::int64_t k = 0; k <= n - m; ++k)
      pb[k + 1] = pb[k] + (rev[k] > 0.0 ? rev[k + m] - rev[k] : 0.0);

    double residual_sup = 0.0;
    double boundary_sup = 0.0;
    for (std::int64_t j = 1; j <= n; ++j) {
      const std::int64_t b = std::max<std::int64_t>(0, j - m);
      const double i2 = scale * pw[j];
      const double boundary = scale * (pw[j] - pw[b]);
      double head = 0.0;
      if (j >= m + 1) head = -scale * (pb[n - m + 1] - pb[n - j + 1]);
      residual_sup = std::max(residual_sup, std::abs(i2 - head - boundary));
      boundary_sup = std::max(boundary_sup, std::abs(boundary));
    }
    out.residual_sup = std::max(out.residual_sup, residual_sup);
    out.boundary_sup.push_back(boundary_sup);
  }
  return out;
}

}  // namespace

ReversalReport run_reversal_experiment(const ExperimentSpec& spec) {
  if (!spec.process.is_diffusion())
    throw config_error("the reversal experiment expects a diffusion process");
  ExperimentSpec j_spec = spec;
  j_spec.scheme = SchemeId::J;
  j_spec.target = Target::L;
  j_spec.validate();

  ReversalReport report;
  report.j_report = run_experiment(j_spec);

  std::vector<ReversalPathStats> stats(static_cast<std::size_t>(spec.num_paths));
  parallel_for(spec.num_paths, spec.threads, [&](std::int64_t k) {
    const Path p = spec.process.sample(spec.grid, SeedSpec{spec.master_seed,
                                                           static_cast<std::uint64_t>(k)});
    stats[static_cast<std::size_t>(k)] = reversal_identity(p, spec.level, spec.ladder);
  });

  report.boundary_mean_sup.assign(spec.ladder.size(), 0.0);
  for (const auto& s : stats) {
    report.identity_residual_max = std::max(report.identity_residual_max, s.residual_sup);
    for (std::size_t r = 0; r < s.boundary_sup.size(); ++r)
      report.boundary_mean_sup[r] += s.boundary_sup[r];
  }
  for (auto& v : report.boundary_mean_sup) v /= static_cast<double>(spec.num_paths);

  const bool fittable =
      spec.ladder.size() >= 3 &&
      std::all_of(report.boundary_mean_sup.begin(), report.boundary_mean_sup.end(),
                  [](double e) { return e > 0.0; });
  if (fittable) report.boundary_fit = fit_rate(report.boundary_mean_sup, spec.ladder);

  report.boundary_envelope_constant = 0.0;
  for (std::size_t r = 0; r < report.boundary_mean_sup.size(); ++r)
    report.boundary_envelope_constant =
        std::max(report.boundary_envelope_constant,
                 report.boundary_mean_sup[r] / std::pow(spec.ladder.rungs[r].eps, 0.4));
  return report;
}

}  // namespace locreg
