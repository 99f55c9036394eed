#pragma once

#include <cstdint>
#include <vector>

#include "locreg/grid.hpp"
#include "locreg/paths.hpp"

namespace testutil {

// X at time u equals u - 1/2: crosses the level 0 exactly in the middle, and
// hits it exactly at the midpoint grid index when n is even.
inline locreg::Path linear_crossing(std::int64_t n) {
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i)
    values[i] = static_cast<double>(i - n / 2) * h;
  const double origin = values.front();
  return locreg::Path(locreg::GridSpec{1.0, n, origin}, std::move(values));
}

inline locreg::Path constant_path(std::int64_t n, double c) {
  return locreg::Path(locreg::GridSpec{1.0, n, c},
                      std::vector<double>(static_cast<std::size_t>(n) + 1, c));
}

inline locreg::Path brownian_fixture(std::uint64_t seed, std::int64_t n, double x0 = 0.0) {
  return locreg::gen_brownian(locreg::GridSpec{1.0, n, x0}, locreg::SeedSpec{seed, 0});
}

inline locreg::Path negate(const locreg::Path& p) {
  std::vector<double> values(p.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = -p.values()[i];
  locreg::GridSpec grid = p.grid();
  grid.origin = values.front();
  return locreg::Path(grid, std::move(values));
}

inline locreg::Path combine(const locreg::Path& p, const locreg::Path& q, double sign) {
  std::vector<double> values(p.values().size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = p.values()[i] + sign * q.values()[i];
  locreg::GridSpec grid = p.grid();
  grid.origin = values.front();
  return locreg::Path(grid, std::move(values));
}

inline bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace testutil
