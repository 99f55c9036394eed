#pragma once

// Brute-force reference implementations used as the independent oracle route
// in tests. Each curve is computed by a literal double loop over the defining
// sum, recomputed from scratch for every grid time. O(n^2) and proud of it;
// never used outside the test suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "locreg/grid.hpp"

namespace ref {

inline double pos(double a) { return a > 0.0 ? a : 0.0; }
inline double neg(double a) { return a < 0.0 ? -a : 0.0; }

using Values = std::vector<double>;

inline Values shifted(const locreg::Path& p, double level) {
  Values y(p.values().size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.values()[i] - level;
  return y;
}

// term(i, r) summed over i < j with the clamped read r = min(i+m, n)
inline Values clamped_sum(const locreg::Path& p, std::int64_t m,
                          const std::function<double(double, double)>& term, double level) {
  const Values y = shifted(p, level);
  const std::int64_t n = p.num_steps();
  const double scale = p.grid().step() / (static_cast<double>(m) * p.grid().step());
  Values out(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < j; ++i) acc += term(y[i], y[std::min(i + m, n)]);
    out[j] = scale * acc;
  }
  return out;
}

// term(i, r) summed over i < j with the truncated read r = min(i+m, j)
inline Values truncated_sum(const locreg::Path& p, std::int64_t m,
                            const std::function<double(double, double)>& term, double level) {
  const Values y = shifted(p, level);
  const std::int64_t n = p.num_steps();
  const double scale = p.grid().step() / (static_cast<double>(m) * p.grid().step());
  Values out(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < j; ++i) acc += term(y[i], y[std::min(i + m, j)]);
    out[j] = scale * acc;
  }
  return out;
}

inline Values j_curve(const locreg::Path& p, double level, std::int64_t m) {
  return clamped_sum(p, m, [](double yi, double yr) {
    return ((yr > 0.0 ? 1.0 : 0.0) - (yi > 0.0 ? 1.0 : 0.0)) * (yr - yi);
  }, level);
}

inline Values i1_curve(const locreg::Path& p, double level, std::int64_t m) {
  return clamped_sum(p, m, [](double yi, double yr) { return (yi > 0.0) * (yr - yi); }, level);
}

inline Values i2_curve(const locreg::Path& p, double level, std::int64_t m) {
  return clamped_sum(p, m, [](double yi, double yr) { return (yr > 0.0) * (yr - yi); }, level);
}

inline Values i3_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m, [](double yi, double yr) {
    return pos(yr) * (yi <= 0.0) + neg(yr) * (yi > 0.0);
  }, level);
}

inline Values i4_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m, [](double yi, double yr) {
    return neg(yi) * (yr > 0.0) + pos(yi) * (yr <= 0.0);
  }, level);
}

inline Values i31_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m,
                       [](double yi, double yr) { return neg(yr) * (yi > 0.0); }, level);
}

inline Values i32_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m,
                       [](double yi, double yr) { return pos(yr) * (yi < 0.0); }, level);
}

inline Values i41_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m,
                       [](double yi, double yr) { return neg(yi) * (yr > 0.0); }, level);
}

inline Values i42_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m,
                       [](double yi, double yr) { return pos(yi) * (yr < 0.0); }, level);
}

inline Values r3_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m,
                       [](double yi, double yr) { return pos(yr) * (yi == 0.0); }, level);
}

inline Values r4_curve(const locreg::Path& p, double level, std::int64_t m) {
  return truncated_sum(p, m,
                       [](double yi, double yr) { return pos(yi) * (yr == 0.0); }, level);
}

// Boundary remainder: over the window [(t-eps)^+, t), the J term (clamped to
// the grid end) minus the same indicator-increment product taken against y_j.
inline Values r_eps_curve(const locreg::Path& p, double level, std::int64_t m) {
  const Values y = shifted(p, level);
  const std::int64_t n = p.num_steps();
  const double scale = 1.0 / static_cast<double>(m);
  Values out(static_cast<std::size_t>(n) + 1, 0.0);
  auto ind = [](double a) { return a > 0.0 ? 1.0 : 0.0; };
  for (std::int64_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::int64_t i = std::max<std::int64_t>(0, j - m); i < j; ++i) {
      const double yr = y[std::min(i + m, n)];
      acc += (ind(yr) - ind(y[i])) * (yr - y[i]) - (ind(y[j]) - ind(y[i])) * (y[j] - y[i]);
    }
    out[j] = scale * acc;
  }
  return out;
}

inline Values qv_curve(const locreg::Path& p, std::int64_t m) {
  return clamped_sum(p, m, [](double yi, double yr) { return (yr - yi) * (yr - yi); }, 0.0);
}

inline Values cov_curve(const locreg::Path& p, const locreg::Path& q, std::int64_t m) {
  const std::int64_t n = p.num_steps();
  const double scale = 1.0 / static_cast<double>(m);
  Values out(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < j; ++i) {
      const std::int64_t r = std::min(i + m, n);
      acc += (p.values()[r] - p.values()[i]) * (q.values()[r] - q.values()[i]);
    }
    out[j] = scale * acc;
  }
  return out;
}

inline Values tanaka_curve(const locreg::Path& p, double level) {
  const Values y = shifted(p, level);
  const std::int64_t n = p.num_steps();
  Values out(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) {
    double integral = 0.0;
    for (std::int64_t i = 0; i < j; ++i)
      if (y[i] > 0.0) integral += y[i + 1] - y[i];
    out[j] = 2.0 * (pos(y[j]) - pos(y[0]) - integral);
  }
  return out;
}

// Forward stochastic integral of 1{X > level}, the limit of I1.
inline Values forward_indicator_integral(const locreg::Path& p, double level) {
  const Values y = shifted(p, level);
  const std::int64_t n = p.num_steps();
  Values out(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < j; ++i)
      if (y[i] > 0.0) acc += y[i + 1] - y[i];
    out[j] = acc;
  }
  return out;
}

inline double sup_diff(const Values& a, const Values& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

inline double sup_abs(const Values& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace ref
