#include "locreg/oracle.hpp"

#include <cmath>
#include <vector>

#include "locreg/errors.hpp"

namespace locreg {

const char* oracle_name(OracleId id) {
  switch (id) {
    case OracleId::TANAKA: return "TANAKA";
    case OracleId::OCCUPATION: return "OCCUPATION";
    case OracleId::DOWNCROSS: return "DOWNCROSS";
  }
  return "?";
}

OracleId parse_oracle(const std::string& tag) {
  if (tag == "TANAKA") return OracleId::TANAKA;
  if (tag == "OCCUPATION") return OracleId::OCCUPATION;
  if (tag == "DOWNCROSS") return OracleId::DOWNCROSS;
  throw config_error("unknown oracle tag '" + tag + "'");
}

namespace {

std::vector<double> shifted(const Path& p, double level) {
  if (!std::isfinite(level)) throw config_error("level must be finite");
  std::vector<double> y(p.values().size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.values()[i] - level;
  return y;
}

inline double pos_part(double a) { return a > 0.0 ? a : 0.0; }

}  // namespace

Curve tanaka_local_time(const Path& p, double level) {
  const auto y = shifted(p, level);
  const std::size_t n = y.size() - 1;
  Curve c{p.grid(), std::vector<double>(n + 1)};
  double integral = 0.0;  // forward-Euler integral of 1{y > 0} dy
  c.values[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] > 0.0) integral += y[i + 1] - y[i];
    c.values[i + 1] = 2.0 * (pos_part(y[i + 1]) - pos_part(y[0]) - integral);
  }
  return c;
}

Curve occupation_density(const Path& p, double level, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw config_error("width must be positive");
  const auto y = shifted(p, level);
  const std::size_t n = y.size() - 1;
  Curve c{p.grid(), std::vector<double>(n + 1)};
  double acc = 0.0;
  c.values[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] >= 0.0 && y[i] <= width) {
      const double d = y[i + 1] - y[i];
      acc += d * d;
    }
    c.values[i + 1] = acc / width;
  }
  return c;
}

Curve downcrossing_estimate(const Path& p, double level, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw config_error("width must be positive");
  const auto y = shifted(p, level);
  const std::size_t n = y.size() - 1;
  Curve c{p.grid(), std::vector<double>(n + 1)};
  enum class Side { Unset, Above, Below };
  Side side = Side::Unset;
  std::int64_t crossings = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (y[i] >= width) {
      side = Side::Above;
    } else if (y[i] <= 0.0) {
      if (side == Side::Above) ++crossings;
      side = Side::Below;
    }
    c.values[i] = width * static_cast<double>(crossings);
  }
  return c;
}

}  // namespace locreg
