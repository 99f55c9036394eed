#pragma once

#include <string>

#include "locreg/grid.hpp"

namespace locreg {

enum class OracleId { TANAKA, OCCUPATION, DOWNCROSS };

const char* oracle_name(OracleId id);
OracleId parse_oracle(const std::string& tag);

// Primary local-time oracle: twice the residual of the forward-Euler
// stochastic integral in X(t)+ = X(0)+ + int 1{X > level} dX + L/2,
//   L(t) = 2 * ( (X(t)-level)+ - (X(0)-level)+ - sum_{i: t_i < t} 1{X(t_i) > level} dX_i ).
// Pathwise values may dip slightly negative at finite step; they are reported
// raw, never clipped.
Curve tanaka_local_time(const Path& p, double level);

// Occupation-density oracle: (1/width) * sum of squared increments taken while
// the path sits in [level, level + width].
Curve occupation_density(const Path& p, double level, double width);

// Band-crossing oracle: width * D(t) where D counts completed downcrossings of
// [level, level + width]. Multiply by downcrossing_local_time_factor to
// estimate the local time itself.
Curve downcrossing_estimate(const Path& p, double level, double width);

// Calibrated against the Tanaka oracle on Brownian ensembles at the reference
// resolution (num_steps 2^16, width 2^-6, 512 paths, several seed sets; fitted
// ratio 2.63..2.65). Counting transits of a sampled path misses excursions
// shorter than the step, so the constant sits above the width->0 value 2.
inline constexpr double downcrossing_local_time_factor = 2.64;

}  // namespace locreg
