#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "locreg/errors.hpp"
#include "locreg/oracle.hpp"
#include "reference.hpp"

using namespace locreg;
using testutil::bitwise_equal;

TEST_SUITE("oracle") {

TEST_CASE("tanaka vanishes exactly on strictly positive paths") {
  std::vector<double> values{1.0, 0.5, 2.0, 0.25, 3.0};
  const Path p(GridSpec{1.0, 4, 1.0}, std::move(values));
  const Curve c = tanaka_local_time(p, 0.0);
  for (double v : c.values) CHECK(v == 0.0);
}

TEST_CASE("tanaka telescopes on the linear crossing at n = 16") {
  const Path p = testutil::linear_crossing(16);
  const Curve c = tanaka_local_time(p, 0.0);
  // expand the telescoped sum by hand: all increments above the level cancel
  // against the positive part, leaving the single crossing cell
  const auto& y = p.values();
  for (std::int64_t j = 1; j <= 16; ++j) {
    double integral = 0.0;
    for (std::int64_t i = 0; i < j; ++i)
      if (y[i] > 0.0) integral += y[i + 1] - y[i];
    const double expected = 2.0 * (std::max(y[j], 0.0) - std::max(y[0], 0.0) - integral);
    CHECK(c.values[j] == expected);
  }
  // one grid cell of slope 1: |L| at the end is 2h
  CHECK(std::abs(c.at_end()) <= 2.0 * p.grid().step() + 1e-15);
  CHECK(ref::sup_diff(c.values, ref::tanaka_curve(p, 0.0)) == 0.0);
}

TEST_CASE("tanaka is additive under time restriction") {
  const Path p = testutil::brownian_fixture(71, 256);
  const Curve full = tanaka_local_time(p, 0.0);
  const std::int64_t cut = 100;
  GridSpec sub_grid{p.grid().horizon * (static_cast<double>(cut) / 256.0), cut, p.values()[0]};
  std::vector<double> head(p.values().begin(), p.values().begin() + cut + 1);
  const Curve partial = tanaka_local_time(Path(sub_grid, std::move(head)), 0.0);
  for (std::int64_t j = 0; j <= cut; ++j) CHECK(partial.values[j] == full.values[j]);
}

TEST_CASE("oracles shift levels exactly") {
  const Path p = testutil::brownian_fixture(73, 512);
  const double level = -0.21;
  const Path shifted = shift_level(p, level);
  CHECK(bitwise_equal(tanaka_local_time(p, level).values,
                      tanaka_local_time(shifted, 0.0).values));
  CHECK(bitwise_equal(occupation_density(p, level, 0.05).values,
                      occupation_density(shifted, 0.0, 0.05).values));
  CHECK(bitwise_equal(downcrossing_estimate(p, level, 0.05).values,
                      downcrossing_estimate(shifted, 0.0, 0.05).values));
}

TEST_CASE("occupation density trivial cases") {
  const Path above(GridSpec{1.0, 3, 5.0}, {5.0, 6.0, 7.0, 8.0});
  CHECK(ref::sup_abs(occupation_density(above, 0.0, 0.5).values) == 0.0);
  const Path inside = testutil::constant_path(8, 0.25);
  CHECK(ref::sup_abs(occupation_density(inside, 0.0, 0.5).values) == 0.0);
  CHECK_THROWS_AS(occupation_density(inside, 0.0, 0.0), config_error);
}

TEST_CASE("downcrossings count completed band transits") {
  // monotone: at most one transit
  std::vector<double> rising{-1.0, -0.5, 0.5, 1.0, 2.0};
  CHECK(downcrossing_estimate(Path(GridSpec{1.0, 4, -1.0}, rising), 0.0, 1.0).at_end() == 0.0);
  std::vector<double> falling{2.0, 1.5, 0.5, -0.5, -1.0};
  CHECK(downcrossing_estimate(Path(GridSpec{1.0, 4, 2.0}, falling), 0.0, 1.0).at_end() == 1.0);

  // deterministic oscillation: k completed downcrossings give width * k
  const int k = 5;
  std::vector<double> osc;
  osc.push_back(1.0);
  for (int i = 0; i < k; ++i) {
    osc.push_back(-0.25);  // below the band
    osc.push_back(1.25);   // back above
  }
  const auto n = static_cast<std::int64_t>(osc.size()) - 1;
  const Curve d = downcrossing_estimate(Path(GridSpec{1.0, n, 1.0}, osc), 0.0, 1.0);
  CHECK(d.at_end() == 1.0 * k);
  // the curve is a running count: nondecreasing
  for (std::size_t i = 1; i < d.values.size(); ++i) CHECK(d.values[i] >= d.values[i - 1]);
}

TEST_CASE("tanaka mean is unbiased for the expected local time") {
  // E L(1) at level 0 equals E|B(1)| = sqrt(2/pi); the telescoped estimator
  // has mean 2 E B(1)+ = sqrt(2/pi) at any step size, so only Monte Carlo
  // noise enters: sd ~ 0.603 / sqrt(N).
  const int num_paths = 4000;
  double sum = 0.0;
  for (int k = 0; k < num_paths; ++k)
    sum += tanaka_local_time(testutil::brownian_fixture(1000 + k, 1 << 8), 0.0).at_end();
  const double mean = sum / num_paths;
  const double expected = std::sqrt(2.0 / M_PI);
  CHECK(std::abs(mean - expected) < 5.0 * 0.603 / std::sqrt(static_cast<double>(num_paths)));
}

TEST_CASE("oracle cross agreement at the calibration resolution") {
  // the downcrossing factor is fitted at num_steps 2^16 and width 2^-6, so
  // the cross-check runs there (smaller ensemble than the acceptance run)
  const std::int64_t n = 1 << 16;
  const int num_paths = 128;
  const double width = 1.0 / 64.0;
  double tanaka_mean = 0.0, occupation_mean = 0.0, downcross_mean = 0.0;
  for (int k = 0; k < num_paths; ++k) {
    const Path b = gen_brownian(GridSpec{1.0, n, 0.0}, SeedSpec{610, static_cast<std::uint64_t>(k)});
    tanaka_mean += tanaka_local_time(b, 0.0).at_end();
    occupation_mean += occupation_density(b, 0.0, width).at_end();
    downcross_mean +=
        downcrossing_local_time_factor * downcrossing_estimate(b, 0.0, width).at_end();
  }
  tanaka_mean /= num_paths;
  occupation_mean /= num_paths;
  downcross_mean /= num_paths;
  CHECK(occupation_mean == doctest::Approx(tanaka_mean).epsilon(0.10));
  CHECK(downcross_mean == doctest::Approx(tanaka_mean).epsilon(0.10));
}

TEST_CASE("oracle tags round-trip") {
  for (OracleId id : {OracleId::TANAKA, OracleId::OCCUPATION, OracleId::DOWNCROSS})
    CHECK(parse_oracle(oracle_name(id)) == id);
  CHECK_THROWS_AS(parse_oracle("none"), config_error);
}

}  // TEST_SUITE
