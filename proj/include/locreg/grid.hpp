#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "locreg/errors.hpp"

namespace locreg {

// Uniform time grid on [0, horizon] with num_steps steps of size horizon/num_steps.
struct GridSpec {
  double horizon = 1.0;
  std::int64_t num_steps = 1;
  double origin = 0.0;

  double step() const { return horizon / static_cast<double>(num_steps); }

  double time_at(std::int64_t i) const {
    return horizon * (static_cast<double>(i) / static_cast<double>(num_steps));
  }

  void validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
      throw config_error("grid horizon must be positive and finite");
    if (num_steps < 1) throw config_error("grid must have at least one step");
    if (!std::isfinite(origin)) throw config_error("grid origin must be finite");
  }

  bool same_grid(const GridSpec& other) const {
    return horizon == other.horizon && num_steps == other.num_steps;
  }
};

// A sample path on a uniform grid: values[i] = X at time i*h, i = 0..num_steps.
class Path {
public:
  Path(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (static_cast<std::int64_t>(values_.size()) != grid_.num_steps + 1)
      throw config_error("path must hold num_steps + 1 values");
    for (double v : values_)
      if (!std::isfinite(v)) throw config_error("path values must be finite");
    grid_.origin = values_.front();
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::int64_t num_steps() const { return grid_.num_steps; }

private:
  GridSpec grid_;
  std::vector<double> values_;
};

// A time-indexed estimate on the same grid as the path it came from.
struct Curve {
  GridSpec grid;
  std::vector<double> values;

  double at_end() const { return values.back(); }
};

}  // namespace locreg
