#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "commands.hpp"
#include "locreg/errors.hpp"

namespace locreg::cmd {

namespace {

struct Axis {
  double lo, hi;
  double map(double v, double pix_lo, double pix_hi) const {
    const double t = (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

Axis padded_log_axis(const std::vector<double>& values) {
  double lo = std::log10(*std::min_element(values.begin(), values.end()));
  double hi = std::log10(*std::max_element(values.begin(), values.end()));
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return Axis{lo - pad, hi + pad};
}

}  // namespace

void write_loglog_svg(const std::string& file, const std::vector<double>& eps,
                      const std::vector<double>& errors, const std::string& title) {
  if (eps.empty() || eps.size() != errors.size())
    throw config_error("svg chart needs matching non-empty series");
  const double width = 560, height = 420;
  const double left = 70, right = width - 20, top = 40, bottom = height - 50;
  const Axis xa = padded_log_axis(eps);
  const Axis ya = padded_log_axis(errors);

  std::ofstream out(file);
  if (!out) throw io_error("cannot open " + file + " for writing");
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";

  // axes
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left,
                bottom, right, bottom);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, top,
                left, bottom);
  out << buf;

  // decade ticks
  for (int d = static_cast<int>(std::ceil(xa.lo)); d <= static_cast<int>(std::floor(xa.hi)); ++d) {
    const double x = xa.map(d, left, right);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#999\"/>"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"11\">1e%d</text>\n",
                  x, bottom, x, bottom + 5, x, bottom + 20, d);
    out << buf;
  }
  for (int d = static_cast<int>(std::ceil(ya.lo)); d <= static_cast<int>(std::floor(ya.hi)); ++d) {
    const double y = ya.map(d, bottom, top);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#999\"/>"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"11\">1e%d</text>\n",
                  left - 5, y, left, y, left - 8, y + 4, d);
    out << buf;
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">eps</text>\n";
  out << "<text x=\"16\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << (top + bottom) / 2 << ")\">error</text>\n";

  // polyline + points
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%g,%g ", xa.map(std::log10(eps[i]), left, right),
                  ya.map(std::log10(errors[i]), bottom, top));
    out << buf;
  }
  out << "\"/>\n";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "<circle cx=\"%g\" cy=\"%g\" r=\"3\" fill=\"#1f77b4\"/>\n",
                  xa.map(std::log10(eps[i]), left, right),
                  ya.map(std::log10(errors[i]), bottom, top));
    out << buf;
  }
  out << "</svg>\n";
  if (!out) throw io_error("failed writing " + file);
}

}  // namespace locreg::cmd
