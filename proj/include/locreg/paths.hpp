#pragma once

#include <functional>
#include <optional>
#include <string>

#include "locreg/grid.hpp"
#include "locreg/rng.hpp"

namespace locreg {

// Time-inhomogeneous one-dimensional diffusion dX = b(t,X) dt + sigma(t,X) dB.
// The user asserts the regularity needed for a density and for time reversal;
// none of that is machine-checkable from coefficients alone.
struct DiffusionSpec {
  std::function<double(double, double)> drift;
  std::function<double(double, double)> sigma;
  // Drift of the time-reversed process, when known in closed form. Carried as
  // documentation; the engine reverses sample paths directly.
  std::optional<std::function<double(double, double)>> reversed_drift;
};

// Standard Brownian motion started at grid.origin: i.i.d. N(0, h) increments.
Path gen_brownian(const GridSpec& grid, SeedSpec seed);

// Euler-Maruyama discretization of the diffusion. Throws numeric_error with
// the step index if the iteration leaves the finite range.
Path gen_diffusion(const GridSpec& grid, const DiffusionSpec& spec, SeedSpec seed);

// X~ on the same grid with X~ at time u equal to X at time T - u.
Path reverse_path(const Path& p);

// Subtracts x from every value; reduces level-x problems to level 0. All
// estimators read shifted paths on [0, T] only; a value before time zero,
// were one ever needed, is taken to be zero.
Path shift_level(const Path& p, double x);

// Keeps every stride-th grid point (num_steps must be divisible by stride).
// Exact coupling of a coarse path to the fine path it came from.
Path subsample(const Path& p, std::int64_t stride);

// Sum of squared increments up to each grid time (the grid quadratic
// variation used as d<X> everywhere).
Curve realized_quadratic_variation(const Path& p);

// CSV with header "t,x", one row per grid point, 17 significant digits.
void write_path_csv(const Path& p, const std::string& file);
Path read_path_csv(const std::string& file);

// CSV with header "t,value".
void write_curve_csv(const Curve& c, const std::string& file);
Curve read_curve_csv(const std::string& file);

}  // namespace locreg
