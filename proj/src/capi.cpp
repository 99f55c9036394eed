#include "locreg.h"

#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"
#include "locreg/errors.hpp"
#include "locreg/estimators.hpp"
#include "locreg/harness.hpp"
#include "locreg/oracle.hpp"
#include "locreg/paths.hpp"

struct lr_path {
  locreg::Path impl;
};

struct lr_curve {
  locreg::Curve impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const locreg::alignment_error& e) {
    set_error(e.what());
    return LR_ERR_ALIGN;
  } catch (const locreg::config_error& e) {
    set_error(e.what());
    return LR_ERR_CONFIG;
  } catch (const locreg::io_error& e) {
    set_error(e.what());
    return LR_ERR_IO;
  } catch (const locreg::numeric_error& e) {
    set_error(e.what());
    return LR_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return LR_ERR;
  } catch (...) {
    set_error("unknown failure");
    return LR_ERR;
  }
}

int require(bool cond, const char* msg) {
  if (cond) return LR_OK;
  set_error(msg);
  return LR_ERR_CONFIG;
}

locreg::cmd::json merged_config(const char* config_json, const char* const* overrides,
                                int num_overrides) {
  locreg::cmd::json cfg =
      locreg::cmd::parse_config_text(config_json && *config_json ? config_json : "{}");
  for (int i = 0; i < num_overrides; ++i) locreg::cmd::apply_override(cfg, overrides[i]);
  return cfg;
}

int run_report_json(const char* config_json, const char* const* overrides, int num_overrides,
                    char** report_json, int which) {
  if (int rc = require(report_json != nullptr, "report_json out-parameter is required")) return rc;
  return guarded([&]() {
    const auto cfg = merged_config(config_json, overrides, num_overrides);
    locreg::ExperimentSpec spec = locreg::cmd::experiment_from_config(cfg);
    std::string text;
    if (which == 0) {
      text = locreg::run_experiment(spec).to_json();
    } else if (which == 1) {
      text = locreg::run_as_convergence(spec).to_json();
    } else {
      text = locreg::run_reversal_experiment(spec).to_json();
    }
    *report_json = dup_string(text);
    return LR_OK;
  });
}

unsigned has_flag(unsigned flags, lr_flags bit) { return flags & static_cast<unsigned>(bit); }

int run_command(const char* config_json, const char* const* overrides, int num_overrides,
                const char* out_dir, unsigned flags, char** summary, int verb) {
  if (int rc = require(out_dir != nullptr, "out_dir is required")) return rc;
  return guarded([&]() {
    const auto cfg = merged_config(config_json, overrides, num_overrides);
    locreg::cmd::RunResult res;
    switch (verb) {
      case 0: res = locreg::cmd::simulate(cfg, out_dir); break;
      case 1:
        res = locreg::cmd::estimate(cfg, out_dir, has_flag(flags, LR_FLAG_CHECK_IDENTITIES));
        break;
      case 2:
        res = locreg::cmd::converge(cfg, out_dir, has_flag(flags, LR_FLAG_NO_TIMINGS),
                                    has_flag(flags, LR_FLAG_SELFTEST));
        break;
      default:
        res = locreg::cmd::as_converge(cfg, out_dir, has_flag(flags, LR_FLAG_NO_TIMINGS));
        break;
    }
    if (summary) *summary = dup_string(res.summary);
    const bool gated = has_flag(flags, LR_FLAG_ENFORCE) ||
                       has_flag(flags, LR_FLAG_CHECK_IDENTITIES) ||
                       has_flag(flags, LR_FLAG_SELFTEST);
    if (gated && !res.pass) {
      set_error("requested gate failed");
      return LR_ERR_GATE;
    }
    return LR_OK;
  });
}

}  // namespace

extern "C" {

const char* lr_version(void) { return "0.1.0"; }

const char* lr_last_error(void) { return g_last_error.c_str(); }

void lr_string_free(char* s) { delete[] s; }

int lr_path_brownian(double horizon, int64_t num_steps, double origin, uint64_t master_seed,
                     uint64_t stream_index, lr_path** out) {
  if (int rc = require(out != nullptr, "out is required")) return rc;
  return guarded([&]() {
    locreg::GridSpec grid{horizon, num_steps, origin};
    *out = new lr_path{locreg::gen_brownian(grid, {master_seed, stream_index})};
    return LR_OK;
  });
}

int lr_path_diffusion(double horizon, int64_t num_steps, double origin, lr_coeff_fn drift,
                      void* drift_ctx, lr_coeff_fn sigma, void* sigma_ctx, uint64_t master_seed,
                      uint64_t stream_index, lr_path** out) {
  if (int rc = require(out && drift && sigma, "out, drift and sigma are required")) return rc;
  return guarded([&]() {
    locreg::GridSpec grid{horizon, num_steps, origin};
    locreg::DiffusionSpec spec;
    spec.drift = [drift, drift_ctx](double t, double x) { return drift(t, x, drift_ctx); };
    spec.sigma = [sigma, sigma_ctx](double t, double x) { return sigma(t, x, sigma_ctx); };
    *out = new lr_path{locreg::gen_diffusion(grid, spec, {master_seed, stream_index})};
    return LR_OK;
  });
}

int lr_path_from_values(double horizon, int64_t num_steps, const double* values, lr_path** out) {
  if (int rc = require(out && values, "out and values are required")) return rc;
  if (int rc = require(num_steps >= 1, "num_steps must be positive")) return rc;
  return guarded([&]() {
    std::vector<double> v(values, values + num_steps + 1);
    locreg::GridSpec grid{horizon, num_steps, v.empty() ? 0.0 : v.front()};
    *out = new lr_path{locreg::Path(grid, std::move(v))};
    return LR_OK;
  });
}

int lr_path_reverse(const lr_path* p, lr_path** out) {
  if (int rc = require(p && out, "p and out are required")) return rc;
  return guarded([&]() {
    *out = new lr_path{locreg::reverse_path(p->impl)};
    return LR_OK;
  });
}

int lr_path_shift_level(const lr_path* p, double level, lr_path** out) {
  if (int rc = require(p && out, "p and out are required")) return rc;
  return guarded([&]() {
    *out = new lr_path{locreg::shift_level(p->impl, level)};
    return LR_OK;
  });
}

int lr_path_subsample(const lr_path* p, int64_t stride, lr_path** out) {
  if (int rc = require(p && out, "p and out are required")) return rc;
  return guarded([&]() {
    *out = new lr_path{locreg::subsample(p->impl, stride)};
    return LR_OK;
  });
}

int64_t lr_path_num_steps(const lr_path* p) { return p ? p->impl.num_steps() : -1; }

double lr_path_horizon(const lr_path* p) { return p ? p->impl.grid().horizon : 0.0; }

const double* lr_path_values(const lr_path* p) { return p ? p->impl.values().data() : nullptr; }

int lr_path_save_csv(const lr_path* p, const char* file) {
  if (int rc = require(p && file, "p and file are required")) return rc;
  return guarded([&]() {
    locreg::write_path_csv(p->impl, file);
    return LR_OK;
  });
}

int lr_path_load_csv(const char* file, lr_path** out) {
  if (int rc = require(file && out, "file and out are required")) return rc;
  return guarded([&]() {
    *out = new lr_path{locreg::read_path_csv(file)};
    return LR_OK;
  });
}

void lr_path_free(lr_path* p) { delete p; }

int64_t lr_curve_size(const lr_curve* c) {
  return c ? static_cast<int64_t>(c->impl.values.size()) : -1;
}

const double* lr_curve_values(const lr_curve* c) { return c ? c->impl.values.data() : nullptr; }

int lr_curve_save_csv(const lr_curve* c, const char* file) {
  if (int rc = require(c && file, "c and file are required")) return rc;
  return guarded([&]() {
    locreg::write_curve_csv(c->impl, file);
    return LR_OK;
  });
}

void lr_curve_free(lr_curve* c) { delete c; }

int lr_estimate(const lr_path* p, const char* scheme_tag, double level, int64_t lag_steps,
                lr_curve** out) {
  if (int rc = require(p && scheme_tag && out, "p, scheme_tag and out are required")) return rc;
  return guarded([&]() {
    const locreg::SchemeId scheme = locreg::parse_scheme(scheme_tag);
    const locreg::Epsilon eps = locreg::Epsilon::from_lag(p->impl.grid(), lag_steps);
    *out = new lr_curve{locreg::estimate(p->impl, scheme, level, eps)};
    return LR_OK;
  });
}

int lr_covariation(const lr_path* p, const lr_path* q, int64_t lag_steps, lr_curve** out) {
  if (int rc = require(p && q && out, "p, q and out are required")) return rc;
  return guarded([&]() {
    const locreg::Epsilon eps = locreg::Epsilon::from_lag(p->impl.grid(), lag_steps);
    *out = new lr_curve{locreg::covariation_eps(p->impl, q->impl, eps)};
    return LR_OK;
  });
}

int lr_weak_pairing(const lr_path* p, lr_fn f, void* f_ctx, lr_fn antiderivative,
                    void* antiderivative_ctx, int64_t lag_steps, lr_curve** lhs, lr_curve** rhs) {
  if (int rc = require(p && f && antiderivative && lhs && rhs,
                       "p, f, antiderivative, lhs and rhs are required"))
    return rc;
  return guarded([&]() {
    const locreg::Epsilon eps = locreg::Epsilon::from_lag(p->impl.grid(), lag_steps);
    auto [l, r] = locreg::weak_pairing(
        p->impl, [f, f_ctx](double x) { return f(x, f_ctx); },
        [antiderivative, antiderivative_ctx](double x) {
          return antiderivative(x, antiderivative_ctx);
        },
        eps);
    *lhs = new lr_curve{std::move(l)};
    *rhs = new lr_curve{std::move(r)};
    return LR_OK;
  });
}

int lr_weak_pairing_hat(const lr_path* p, int64_t lag_steps, lr_curve** lhs, lr_curve** rhs) {
  if (int rc = require(p && lhs && rhs, "p, lhs and rhs are required")) return rc;
  return guarded([&]() {
    const locreg::Epsilon eps = locreg::Epsilon::from_lag(p->impl.grid(), lag_steps);
    auto [l, r] = locreg::weak_pairing(p->impl, locreg::cmd::hat_function,
                                       locreg::cmd::hat_antiderivative, eps);
    *lhs = new lr_curve{std::move(l)};
    *rhs = new lr_curve{std::move(r)};
    return LR_OK;
  });
}

const char* lr_scheme_catalog(void) {
  static const std::string catalog = locreg::scheme_catalog();
  return catalog.c_str();
}

int lr_oracle(const lr_path* p, const char* oracle_tag, double level, double width,
              lr_curve** out) {
  if (int rc = require(p && oracle_tag && out, "p, oracle_tag and out are required")) return rc;
  return guarded([&]() {
    const locreg::OracleId id = locreg::parse_oracle(oracle_tag);
    locreg::Curve c;
    switch (id) {
      case locreg::OracleId::TANAKA: c = locreg::tanaka_local_time(p->impl, level); break;
      case locreg::OracleId::OCCUPATION:
        c = locreg::occupation_density(p->impl, level, width);
        break;
      case locreg::OracleId::DOWNCROSS:
        c = locreg::downcrossing_estimate(p->impl, level, width);
        break;
    }
    *out = new lr_curve{std::move(c)};
    return LR_OK;
  });
}

double lr_downcrossing_factor(void) { return locreg::downcrossing_local_time_factor; }

int lr_run_experiment(const char* config_json, const char* const* overrides, int num_overrides,
                      char** report_json) {
  return run_report_json(config_json, overrides, num_overrides, report_json, 0);
}

int lr_run_as_convergence(const char* config_json, const char* const* overrides,
                          int num_overrides, char** report_json) {
  return run_report_json(config_json, overrides, num_overrides, report_json, 1);
}

int lr_run_reversal(const char* config_json, const char* const* overrides, int num_overrides,
                    char** report_json) {
  return run_report_json(config_json, overrides, num_overrides, report_json, 2);
}

int lr_fit_rate(const double* eps, const double* errors, int64_t count, double* slope,
                double* intercept, double* r_squared) {
  if (int rc = require(eps && errors && slope && intercept && r_squared,
                       "all parameters are required"))
    return rc;
  return guarded([&]() {
    locreg::GridSpec grid{1.0, 1 << 20, 0.0};
    // Rebuild an aligned ladder only to reuse the validated fit; the grid is
    // a formality here, so snap each eps to it.
    locreg::EpsilonLadder ladder;
    for (int64_t i = 0; i < count; ++i) {
      locreg::Epsilon e;
      e.eps = eps[i];
      e.lag = 1;
      ladder.rungs.push_back(e);
    }
    for (std::size_t k = 0; k + 1 < ladder.rungs.size(); ++k)
      if (!(ladder.rungs[k + 1].eps < ladder.rungs[k].eps))
        throw locreg::config_error("eps values must be strictly decreasing");
    const locreg::RateFit fit =
        locreg::fit_rate(std::vector<double>(errors, errors + count), ladder);
    *slope = fit.slope;
    *intercept = fit.intercept;
    *r_squared = fit.r_squared;
    return LR_OK;
  });
}

int lr_cmd_simulate(const char* config_json, const char* const* overrides, int num_overrides,
                    const char* out_dir, char** summary) {
  return run_command(config_json, overrides, num_overrides, out_dir, 0, summary, 0);
}

int lr_cmd_estimate(const char* config_json, const char* const* overrides, int num_overrides,
                    const char* out_dir, unsigned flags, char** summary) {
  return run_command(config_json, overrides, num_overrides, out_dir, flags, summary, 1);
}

int lr_cmd_converge(const char* config_json, const char* const* overrides, int num_overrides,
                    const char* out_dir, unsigned flags, char** summary) {
  return run_command(config_json, overrides, num_overrides, out_dir, flags, summary, 2);
}

int lr_cmd_as_converge(const char* config_json, const char* const* overrides, int num_overrides,
                       const char* out_dir, unsigned flags, char** summary) {
  return run_command(config_json, overrides, num_overrides, out_dir, flags, summary, 3);
}

int lr_cmd_report(const char* const* report_files, int num_files, char** markdown) {
  if (int rc = require(markdown != nullptr && (num_files == 0 || report_files != nullptr),
                       "markdown out-parameter is required"))
    return rc;
  return guarded([&]() {
    std::vector<std::string> files(report_files, report_files + num_files);
    *markdown = dup_string(locreg::cmd::report_summary(files));
    return LR_OK;
  });
}

}  // extern "C"
