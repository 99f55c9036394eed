#include "locreg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "locreg/errors.hpp"

namespace locreg {

Epsilon Epsilon::from_lag(const GridSpec& grid, std::int64_t lag) {
  grid.validate();
  if (lag < 1 || lag > grid.num_steps)
    throw alignment_error("lag must lie in [1, num_steps], got " + std::to_string(lag));
  return Epsilon{static_cast<double>(lag) * grid.step(), lag};
}

Epsilon Epsilon::from_eps(const GridSpec& grid, double eps) {
  grid.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw alignment_error("eps must be positive");
  const double h = grid.step();
  const auto lag = static_cast<std::int64_t>(std::llround(eps / h));
  if (lag < 1 || lag > grid.num_steps ||
      std::abs(static_cast<double>(lag) * h - eps) > 1e-9 * eps)
    throw alignment_error("eps is not an integer multiple of the grid step");
  return from_lag(grid, lag);
}

void Epsilon::check_grid(const GridSpec& grid) const {
  if (lag < 1 || lag > grid.num_steps ||
      std::abs(static_cast<double>(lag) * grid.step() - eps) > 1e-9 * eps)
    throw alignment_error("eps is not aligned to this grid");
}

namespace {

inline double pos_part(double a) { return a > 0.0 ? a : 0.0; }
inline double neg_part(double a) { return a < 0.0 ? -a : 0.0; }

std::vector<double> shifted_values(const Path& p, double level) {
  if (!std::isfinite(level)) throw config_error("level must be finite");
  std::vector<double> y(p.values().size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.values()[i] - level;
  return y;
}

Curve zero_curve(const GridSpec& grid) {
  return Curve{grid, std::vector<double>(static_cast<std::size_t>(grid.num_steps) + 1, 0.0)};
}

// Left-endpoint sum with the forward read clamped to the last grid value:
// curve(t_j) = (h/eps) * sum_{i<j} term(y_i, y_{min(i+lag, n)}).
template <class Term>
Curve clamped_curve(const GridSpec& grid, const std::vector<double>& y, const Epsilon& e,
                    Term term) {
  const std::int64_t n = grid.num_steps;
  const double scale = grid.step() / e.eps;
  Curve c = zero_curve(grid);
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t r = std::min(i + e.lag, n);
    acc += term(y[i], y[r]);
    c.values[i + 1] = scale * acc;
  }
  return c;
}

enum class TruncKind { I3, I31, I32, R3, I4, I41, I42, R4 };

// The adapted family reads X((u+eps) ^ t): curve(t_j) sums term(y_i, y_min(i+lag, j)).
// Split into the untruncated head (i <= j - lag, plain prefix sum) and a tail
// window where the forward read collapses to y_j, recovered from prefix
// counts / positive-part sums. O(n) per curve.
Curve truncated_curve(const GridSpec& grid, const std::vector<double>& y, const Epsilon& e,
                      TruncKind kind) {
  const std::int64_t n = grid.num_steps;
  const std::int64_t m = e.lag;
  const double scale = grid.step() / e.eps;

  const bool head_family = kind == TruncKind::I3 || kind == TruncKind::I31 ||
                           kind == TruncKind::I32 || kind == TruncKind::R3;

  // Prefix of the untruncated terms d_i = term(y_i, y_{i+lag}), i = 0..n-lag.
  std::vector<double> head(static_cast<std::size_t>(n - m) + 2, 0.0);
  for (std::int64_t i = 0; i <= n - m; ++i) {
    const double yi = y[i];
    const double yr = y[i + m];
    double d = 0.0;
    switch (kind) {
      case TruncKind::I3: d = (yi <= 0.0 ? pos_part(yr) : neg_part(yr)); break;
      case TruncKind::I31: d = yi > 0.0 ? neg_part(yr) : 0.0; break;
      case TruncKind::I32: d = yi < 0.0 ? pos_part(yr) : 0.0; break;
      case TruncKind::R3: d = yi == 0.0 ? pos_part(yr) : 0.0; break;
      case TruncKind::I4: d = (yr > 0.0 ? neg_part(yi) : pos_part(yi)); break;
      case TruncKind::I41: d = yr > 0.0 ? neg_part(yi) : 0.0; break;
      case TruncKind::I42: d = yr < 0.0 ? pos_part(yi) : 0.0; break;
      case TruncKind::R4: d = yr == 0.0 ? pos_part(yi) : 0.0; break;
    }
    head[i + 1] = head[i] + d;
  }

  // Prefix sign counts (head family) or positive/negative-part sums (the rest)
  // over i < k, for the tail windows.
  std::vector<std::int64_t> cnt_pos, cnt_neg, cnt_zero;
  std::vector<double> sum_pos, sum_neg;
  if (head_family) {
    cnt_pos.assign(static_cast<std::size_t>(n) + 1, 0);
    cnt_neg.assign(static_cast<std::size_t>(n) + 1, 0);
    cnt_zero.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::int64_t i = 0; i < n; ++i) {
      cnt_pos[i + 1] = cnt_pos[i] + (y[i] > 0.0 ? 1 : 0);
      cnt_neg[i + 1] = cnt_neg[i] + (y[i] < 0.0 ? 1 : 0);
      cnt_zero[i + 1] = cnt_zero[i] + (y[i] == 0.0 ? 1 : 0);
    }
  } else {
    sum_pos.assign(static_cast<std::size_t>(n) + 1, 0.0);
    sum_neg.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
      sum_pos[i + 1] = sum_pos[i] + pos_part(y[i]);
      sum_neg[i + 1] = sum_neg[i] + neg_part(y[i]);
    }
  }

  Curve c = zero_curve(grid);
  for (std::int64_t j = 1; j <= n; ++j) {
    const double head_sum = j >= m ? head[j - m + 1] : 0.0;
    const std::int64_t a = std::max<std::int64_t>(0, j - m + 1);  // tail window [a, j)
    double tail = 0.0;
    const double yj = y[j];
    switch (kind) {
      case TruncKind::I3:
        tail = pos_part(yj) * static_cast<double>((cnt_neg[j] - cnt_neg[a]) +
                                                  (cnt_zero[j] - cnt_zero[a])) +
               neg_part(yj) * static_cast<double>(cnt_pos[j] - cnt_pos[a]);
        break;
      case TruncKind::I31:
        tail = neg_part(yj) * static_cast<double>(cnt_pos[j] - cnt_pos[a]);
        break;
      case TruncKind::I32:
        tail = pos_part(yj) * static_cast<double>(cnt_neg[j] - cnt_neg[a]);
        break;
      case TruncKind::R3:
        tail = pos_part(yj) * static_cast<double>(cnt_zero[j] - cnt_zero[a]);
        break;
      case TruncKind::I4:
        tail = yj > 0.0 ? sum_neg[j] - sum_neg[a] : sum_pos[j] - sum_pos[a];
        break;
      case TruncKind::I41:
        tail = yj > 0.0 ? sum_neg[j] - sum_neg[a] : 0.0;
        break;
      case TruncKind::I42:
        tail = yj < 0.0 ? sum_pos[j] - sum_pos[a] : 0.0;
        break;
      case TruncKind::R4:
        tail = yj == 0.0 ? sum_pos[j] - sum_pos[a] : 0.0;
        break;
    }
    c.values[j] = scale * (head_sum + tail);
  }
  return c;
}

// Boundary remainder making J == I3 + I4 + R_EPS on the grid: over the last
// lag indices before t, the clamped-at-the-end J term minus the same term
// with the forward read collapsed to y_j.
Curve r_eps_curve(const GridSpec& grid, const std::vector<double>& y, const Epsilon& e) {
  const std::int64_t n = grid.num_steps;
  const std::int64_t m = e.lag;
  const double scale = grid.step() / e.eps;

  std::vector<double> j_term(static_cast<std::size_t>(n) + 1, 0.0);   // prefix of J terms
  std::vector<double> sum_x(static_cast<std::size_t>(n) + 1, 0.0);    // prefix of y_i
  std::vector<double> sum_xpos(static_cast<std::size_t>(n) + 1, 0.0); // prefix of y_i^+
  std::vector<std::int64_t> cnt_pos(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t r = std::min(i + m, n);
    const double ind = (y[r] > 0.0 ? 1.0 : 0.0) - (y[i] > 0.0 ? 1.0 : 0.0);
    j_term[i + 1] = j_term[i] + ind * (y[r] - y[i]);
    sum_x[i + 1] = sum_x[i] + y[i];
    sum_xpos[i + 1] = sum_xpos[i] + pos_part(y[i]);
    cnt_pos[i + 1] = cnt_pos[i] + (y[i] > 0.0 ? 1 : 0);
  }

  Curve c = zero_curve(grid);
  for (std::int64_t j = 1; j <= n; ++j) {
    const std::int64_t b = std::max<std::int64_t>(0, j - m);  // window [b, j)
    const double w1 = j_term[j] - j_term[b];
    const double cnt = static_cast<double>(j - b);
    const double aj = y[j] > 0.0 ? 1.0 : 0.0;
    const double sx = sum_x[j] - sum_x[b];
    const double sa = static_cast<double>(cnt_pos[j] - cnt_pos[b]);
    const double sax = sum_xpos[j] - sum_xpos[b];
    // sum over the window of (a_j - a_i) * (y_j - y_i)
    const double w2 = cnt * aj * y[j] - aj * sx - y[j] * sa + sax;
    c.values[j] = scale * (w1 - w2);
  }
  return c;
}

}  // namespace

Curve j_eps(const Path& p, double level, const Epsilon& eps) {
  eps.check_grid(p.grid());
  const auto y = shifted_values(p, level);
  return clamped_curve(p.grid(), y, eps, [](double yi, double yr) {
    const double ind = (yr > 0.0 ? 1.0 : 0.0) - (yi > 0.0 ? 1.0 : 0.0);
    return ind * (yr - yi);
  });
}

Curve i1_eps(const Path& p, double level, const Epsilon& eps) {
  eps.check_grid(p.grid());
  const auto y = shifted_values(p, level);
  return clamped_curve(p.grid(), y, eps,
                       [](double yi, double yr) { return yi > 0.0 ? yr - yi : 0.0; });
}

Curve i2_eps(const Path& p, double level, const Epsilon& eps) {
  eps.check_grid(p.grid());
  const auto y = shifted_values(p, level);
  return clamped_curve(p.grid(), y, eps,
                       [](double yi, double yr) { return yr > 0.0 ? yr - yi : 0.0; });
}

Curve i3_eps(const Path& p, double level, const Epsilon& eps) {
  eps.check_grid(p.grid());
  const auto y = shifted_values(p, level);
  return truncated_curve(p.grid(), y, eps, TruncKind::I3);
}

Curve i4_eps(const Path& p, double level, const Epsilon& eps) {
  eps.check_grid(p.grid());
  const auto y = shifted_values(p, level);
  return truncated_curve(p.grid(), y, eps, TruncKind::I4);
}

Curve i_sub(const Path& p, double level, const Epsilon& eps, SchemeId which) {
  eps.check_grid(p.grid());
  const auto y = shifted_values(p, level);
  switch (which) {
    case SchemeId::I31: return truncated_curve(p.grid(), y, eps, TruncKind::I31);
    case SchemeId::I32: return truncated_curve(p.grid(), y, eps, TruncKind::I32);
    case SchemeId::I41: return truncated_curve(p.grid(), y, eps, TruncKind::I41);
    case SchemeId::I42: return truncated_curve(p.grid(), y, eps, TruncKind::I42);
    default: throw config_error("i_sub expects one of I31, I32, I41, I42");
  }
}

Curve r_terms(const Path& p, double level, const Epsilon& eps, SchemeId which) {
  eps.check_grid(p.grid());
  const auto y = shifted_values(p, level);
  switch (which) {
    case SchemeId::R_EPS: return r_eps_curve(p.grid(), y, eps);
    case SchemeId::R3: return truncated_curve(p.grid(), y, eps, TruncKind::R3);
    case SchemeId::R4: return truncated_curve(p.grid(), y, eps, TruncKind::R4);
    default: throw config_error("r_terms expects one of R_EPS, R3, R4");
  }
}

Curve quadratic_variation_eps(const Path& p, const Epsilon& eps) {
  eps.check_grid(p.grid());
  return clamped_curve(p.grid(), p.values(), eps, [](double yi, double yr) {
    const double d = yr - yi;
    return d * d;
  });
}

Curve covariation_eps(const Path& p, const Path& q, const Epsilon& eps) {
  if (!p.grid().same_grid(q.grid())) throw config_error("covariation needs a shared grid");
  eps.check_grid(p.grid());
  const std::int64_t n = p.num_steps();
  const double scale = p.grid().step() / eps.eps;
  Curve c = zero_curve(p.grid());
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t r = std::min(i + eps.lag, n);
    acc += (p.values()[r] - p.values()[i]) * (q.values()[r] - q.values()[i]);
    c.values[i + 1] = scale * acc;
  }
  return c;
}

namespace {

// The (f, F) pair is caller-supplied; probe F' = f by central differences at
// a handful of path values before trusting it. Kinks in f cost O(step), so
// the tolerance stays loose.
void spot_check_antiderivative(const std::vector<double>& values,
                               const std::function<double(double)>& f,
                               const std::function<double(double)>& antiderivative) {
  constexpr double step = 1e-5;
  const std::size_t stride = std::max<std::size_t>(1, values.size() / 8);
  for (std::size_t i = 0; i < values.size(); i += stride) {
    const double x = values[i];
    const double fd = (antiderivative(x + step) - antiderivative(x - step)) / (2.0 * step);
    if (std::abs(fd - f(x)) > 1e-3 * (1.0 + std::abs(f(x))))
      throw config_error("antiderivative does not match f near x = " + std::to_string(x));
  }
}

}  // namespace

std::pair<Curve, Curve> weak_pairing(const Path& p, const std::function<double(double)>& f,
                                     const std::function<double(double)>& antiderivative,
                                     const Epsilon& eps) {
  if (!f || !antiderivative) throw config_error("weak pairing needs f and its antiderivative");
  eps.check_grid(p.grid());
  spot_check_antiderivative(p.values(), f, antiderivative);
  const auto& x = p.values();
  Curve lhs = clamped_curve(p.grid(), x, eps, [&](double yi, double yr) {
    return (antiderivative(yr) - antiderivative(yi)) * (yr - yi);
  });
  Curve rhs = zero_curve(p.grid());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d = x[i + 1] - x[i];
    acc += f(x[i]) * d * d;
    rhs.values[i + 1] = acc;
  }
  return {std::move(lhs), std::move(rhs)};
}

Curve estimate(const Path& p, SchemeId scheme, double level, const Epsilon& eps) {
  switch (scheme) {
    case SchemeId::J: return j_eps(p, level, eps);
    case SchemeId::I1: return i1_eps(p, level, eps);
    case SchemeId::I2: return i2_eps(p, level, eps);
    case SchemeId::I3: return i3_eps(p, level, eps);
    case SchemeId::I4: return i4_eps(p, level, eps);
    case SchemeId::I31:
    case SchemeId::I32:
    case SchemeId::I41:
    case SchemeId::I42: return i_sub(p, level, eps, scheme);
    case SchemeId::R_EPS:
    case SchemeId::R3:
    case SchemeId::R4: return r_terms(p, level, eps, scheme);
    case SchemeId::QV: return quadratic_variation_eps(p, eps);
    case SchemeId::COV: throw config_error("COV needs two paths; use covariation_eps");
    case SchemeId::WEAK_PAIR: throw config_error("WEAK_PAIR returns two curves; use weak_pairing");
  }
  throw config_error("unknown scheme");
}

namespace {

struct SchemeRow {
  SchemeId id;
  const char* tag;
  const char* formula;
  const char* limit;
};

constexpr SchemeRow kSchemes[] = {
    {SchemeId::J, "J",
     "(1/e) int_0^t (1{y<X(s+e)} - 1{y<X(s)}) (X(s+e) - X(s)) ds",
     "local time L_t^y (reversible diffusions)"},
    {SchemeId::I1, "I1", "(1/e) int_0^t (X(s+e) - X(s)) 1{X(s)>y} ds",
     "int_0^t 1{X>y} dX"},
    {SchemeId::I2, "I2", "(1/e) int_0^t (X(s+e) - X(s)) 1{X(s+e)>y} ds",
     "(X_t-y)+ - (X_0-y)+ + L_t^y / 2"},
    {SchemeId::I3, "I3",
     "(1/e) int_0^t [X'((u+e)^t)+ 1{X'(u)<=0} + X'((u+e)^t)- 1{X'(u)>0}] du, X' = X - y",
     "L_t^y / 2 (semimartingales)"},
    {SchemeId::I4, "I4",
     "(1/e) int_0^t [X'(u)- 1{X'((u+e)^t)>0} + X'(u)+ 1{X'((u+e)^t)<=0}] du, X' = X - y",
     "L_t^y / 2 (reversible diffusions)"},
    {SchemeId::I31, "I31", "(1/e) int_0^t X'((u+e)^t)- 1{X'(u)>0} du", "L_t^y / 4 (Brownian)"},
    {SchemeId::I32, "I32", "(1/e) int_0^t X'((u+e)^t)+ 1{X'(u)<0} du", "L_t^y / 4 (Brownian)"},
    {SchemeId::I41, "I41", "(1/e) int_0^t X'(u)- 1{X'((u+e)^t)>0} du", "L_t^y / 4 (Brownian)"},
    {SchemeId::I42, "I42", "(1/e) int_0^t X'(u)+ 1{X'((u+e)^t)<0} du", "L_t^y / 4 (Brownian)"},
    {SchemeId::R_EPS, "R_EPS", "J - I3 - I4 (boundary window near t)", "0"},
    {SchemeId::R3, "R3", "(1/e) int_0^t X'((u+e)^t)+ 1{X'(u)=0} du", "0"},
    {SchemeId::R4, "R4", "(1/e) int_0^t X'(u)+ 1{X'((u+e)^t)=0} du", "0"},
    {SchemeId::QV, "QV", "(1/e) int_0^t (X(s+e) - X(s))^2 ds", "[X]_t"},
    {SchemeId::COV, "COV", "(1/e) int_0^t (Y(s+e) - Y(s)) (Z(s+e) - Z(s)) ds", "[Y,Z]_t"},
    {SchemeId::WEAK_PAIR, "WEAK_PAIR",
     "(1/e) int_0^t (F(X(s+e)) - F(X(s))) (X(s+e) - X(s)) ds, F' = f",
     "int_0^t f(X) d[X]"},
};

}  // namespace

const char* scheme_name(SchemeId id) {
  for (const auto& row : kSchemes)
    if (row.id == id) return row.tag;
  return "?";
}

SchemeId parse_scheme(const std::string& tag) {
  for (const auto& row : kSchemes)
    if (tag == row.tag) return row.id;
  throw config_error("unknown scheme tag '" + tag + "'");
}

std::string scheme_catalog() {
  std::ostringstream out;
  out << "| scheme | formula | limit |\n|---|---|---|\n";
  for (const auto& row : kSchemes)
    out << "| " << row.tag << " | `" << row.formula << "` | " << row.limit << " |\n";
  return out.str();
}

}  // namespace locreg
