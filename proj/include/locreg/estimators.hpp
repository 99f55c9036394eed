#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "locreg/grid.hpp"

namespace locreg {

// Regularization width, pinned to the grid: eps == lag * h exactly, so the
// forward shift s -> s + eps is an exact index shift. No interpolation.
struct Epsilon {
  double eps = 0.0;
  std::int64_t lag = 0;

  static Epsilon from_lag(const GridSpec& grid, std::int64_t lag);
  static Epsilon from_eps(const GridSpec& grid, double eps);

  // Throws alignment_error when this width does not sit on the given grid.
  void check_grid(const GridSpec& grid) const;
};

// Every approximation scheme computed by this module. The catalog below maps
// each tag to its defining formula.
enum class SchemeId {
  J,         // (1/e) int_0^t (1{y < X(s+e)} - 1{y < X(s)}) (X(s+e) - X(s)) ds
  I1,        // (1/e) int_0^t (X(s+e) - X(s)) 1{X(s) > y} ds
  I2,        // (1/e) int_0^t (X(s+e) - X(s)) 1{X(s+e) > y} ds
  I3,        // (1/e) int_0^t [ (X((u+e)^t) - y)+ 1{X(u) <= y} + (X((u+e)^t) - y)- 1{X(u) > y} ] du
  I4,        // (1/e) int_0^t [ (X(u) - y)- 1{X((u+e)^t) > y} + (X(u) - y)+ 1{X((u+e)^t) <= y} ] du
  I31,       // (1/e) int_0^t (X((u+e)^t) - y)- 1{X(u) > y} du
  I32,       // (1/e) int_0^t (X((u+e)^t) - y)+ 1{X(u) < y} du
  I41,       // (1/e) int_0^t (X(u) - y)- 1{X((u+e)^t) > y} du
  I42,       // (1/e) int_0^t (X(u) - y)+ 1{X((u+e)^t) < y} du
  R_EPS,     // boundary remainder making J == I3 + I4 + R_EPS
  R3,        // (1/e) int_0^t (X((u+e)^t) - y)+ 1{X(u) == y} du
  R4,        // (1/e) int_0^t (X(u) - y)+ 1{X((u+e)^t) == y} du
  QV,        // (1/e) int_0^t (X(s+e) - X(s))^2 ds
  COV,       // (1/e) int_0^t (Y(s+e) - Y(s)) (Z(s+e) - Z(s)) ds
  WEAK_PAIR  // (1/e) int_0^t (F(X(s+e)) - F(X(s))) (X(s+e) - X(s)) ds vs int_0^t f(X) d[X]
};

const char* scheme_name(SchemeId id);
SchemeId parse_scheme(const std::string& tag);
// Markdown table SchemeId -> defining formula and limit.
std::string scheme_catalog();

// Discretization convention shared by every operation: integrals become
// left-endpoint sums (1/eps) * h * sum over grid points strictly before t.
// Forward reads use X((u+eps) ^ t), an exact truncated index shift, for the
// I3/I4 family; J, I1, I2, QV, COV and the weak pairing read X(s+eps) clamped
// to the last grid value when s+eps overruns the grid. R_EPS carries the
// induced boundary discrepancy.

Curve j_eps(const Path& p, double level, const Epsilon& eps);
Curve i1_eps(const Path& p, double level, const Epsilon& eps);
Curve i2_eps(const Path& p, double level, const Epsilon& eps);
Curve i3_eps(const Path& p, double level, const Epsilon& eps);
Curve i4_eps(const Path& p, double level, const Epsilon& eps);

// which: one of I31, I32, I41, I42. The strict inequalities in I32/I42 are
// deliberate; the mass sitting exactly on the level is isolated in R3/R4.
Curve i_sub(const Path& p, double level, const Epsilon& eps, SchemeId which);

// which: one of R_EPS, R3, R4. Diagnostic remainders.
Curve r_terms(const Path& p, double level, const Epsilon& eps, SchemeId which);

Curve quadratic_variation_eps(const Path& p, const Epsilon& eps);
Curve covariation_eps(const Path& p, const Path& q, const Epsilon& eps);

// lhs pairs the increment with F(X(s+e)) - F(X(s)) where F' = f; rhs is the
// Riemann sum of f(X) against squared grid increments. The pair (f, F) is the
// caller's responsibility (spot-check it; see tests).
std::pair<Curve, Curve> weak_pairing(const Path& p, const std::function<double(double)>& f,
                                     const std::function<double(double)>& antiderivative,
                                     const Epsilon& eps);

// Dispatch by tag for the single-path, level-based schemes (everything except
// COV and WEAK_PAIR).
Curve estimate(const Path& p, SchemeId scheme, double level, const Epsilon& eps);

}  // namespace locreg
