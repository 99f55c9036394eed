#include "locreg/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "locreg/errors.hpp"

namespace locreg {

Path gen_brownian(const GridSpec& grid, SeedSpec seed) {
  grid.validate();
  GaussianStream stream(seed);
  const double sqrt_h = std::sqrt(grid.step());
  std::vector<double> values(static_cast<std::size_t>(grid.num_steps) + 1);
  values[0] = grid.origin;
  for (std::int64_t i = 0; i < grid.num_steps; ++i)
    values[i + 1] = values[i] + sqrt_h * stream.next();
  return Path(grid, std::move(values));
}

Path gen_diffusion(const GridSpec& grid, const DiffusionSpec& spec, SeedSpec seed) {
  grid.validate();
  if (!spec.drift || !spec.sigma) throw config_error("diffusion needs drift and sigma");
  GaussianStream stream(seed);
  const double h = grid.step();
  const double sqrt_h = std::sqrt(h);
  std::vector<double> values(static_cast<std::size_t>(grid.num_steps) + 1);
  values[0] = grid.origin;
  for (std::int64_t i = 0; i < grid.num_steps; ++i) {
    const double t = grid.time_at(i);
    const double x = values[i];
    const double dB = sqrt_h * stream.next();
    const double next = x + spec.drift(t, x) * h + spec.sigma(t, x) * dB;
    if (!std::isfinite(next)) throw numeric_error("diffusion step left the finite range", i);
    values[i + 1] = next;
  }
  return Path(grid, std::move(values));
}

Path reverse_path(const Path& p) {
  std::vector<double> values(p.values().rbegin(), p.values().rend());
  GridSpec grid = p.grid();
  grid.origin = values.front();
  return Path(grid, std::move(values));
}

Path shift_level(const Path& p, double x) {
  if (!std::isfinite(x)) throw config_error("shift level must be finite");
  std::vector<double> values(p.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = p.values()[i] - x;
  GridSpec grid = p.grid();
  grid.origin = values.front();
  return Path(grid, std::move(values));
}

Path subsample(const Path& p, std::int64_t stride) {
  if (stride < 1) throw config_error("subsample stride must be positive");
  if (p.num_steps() % stride != 0)
    throw alignment_error("subsample stride must divide the number of steps");
  GridSpec grid = p.grid();
  grid.num_steps = p.num_steps() / stride;
  std::vector<double> values(static_cast<std::size_t>(grid.num_steps) + 1);
  for (std::int64_t i = 0; i <= grid.num_steps; ++i)
    values[i] = p.values()[static_cast<std::size_t>(i * stride)];
  return Path(grid, std::move(values));
}

Curve realized_quadratic_variation(const Path& p) {
  const auto& x = p.values();
  std::vector<double> qv(x.size());
  qv[0] = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d = x[i + 1] - x[i];
    qv[i + 1] = qv[i] + d * d;
  }
  return Curve{p.grid(), std::move(qv)};
}

namespace {

void write_two_column_csv(const std::string& file, const char* header, const GridSpec& grid,
                          const std::vector<double>& values) {
  std::ofstream out(file);
  if (!out) throw io_error("cannot open " + file + " for writing");
  out << header << "\n";
  char line[80];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g", grid.time_at(static_cast<std::int64_t>(i)),
                  values[i]);
    out << line << "\n";
  }
  if (!out) throw io_error("failed writing " + file);
}

std::pair<GridSpec, std::vector<double>> read_two_column_csv(const std::string& file,
                                                             const std::string& header) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot open " + file);
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty file " + file);
  if (line != header) throw io_error(file + ": expected header '" + header + "'");
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw io_error(file + ": malformed row '" + line + "'");
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw io_error(file + ": malformed row '" + line + "'");
    }
  }
  if (times.size() < 2) throw io_error(file + ": needs at least two rows");
  GridSpec grid;
  grid.horizon = times.back();
  grid.num_steps = static_cast<std::int64_t>(times.size()) - 1;
  grid.origin = values.front();
  return {grid, std::move(values)};
}

}  // namespace

void write_path_csv(const Path& p, const std::string& file) {
  write_two_column_csv(file, "t,x", p.grid(), p.values());
}

Path read_path_csv(const std::string& file) {
  auto [grid, values] = read_two_column_csv(file, "t,x");
  return Path(grid, std::move(values));
}

void write_curve_csv(const Curve& c, const std::string& file) {
  write_two_column_csv(file, "t,value", c.grid, c.values);
}

Curve read_curve_csv(const std::string& file) {
  auto [grid, values] = read_two_column_csv(file, "t,value");
  return Curve{grid, std::move(values)};
}

}  // namespace locreg
