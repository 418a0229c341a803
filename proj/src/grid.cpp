#include "kgrs/grid.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kgrs/errors.hpp"

namespace kgrs {

Grid::Grid(double half_width, int point_count)
    : half_width(half_width), point_count(point_count) {
  if (half_width <= 0.0) throw ConfigError("Grid: half width must be positive");
  if (point_count <= 0 || point_count % 2 != 0)
    throw ConfigError("Grid: point count must be positive and even");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(point_count);
  for (int k = 0; k < point_count; ++k) xs[k] = node(k);
  return xs;
}

GridFunction::GridFunction(Grid grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (static_cast<int>(samples_.size()) != grid_.point_count)
    throw ConfigError("GridFunction: sample count does not match grid");
  for (const Complex& v : samples_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error("GridFunction: non-finite sample");
}

GridFunction GridFunction::zero(const Grid& grid) {
  return GridFunction(grid, std::vector<Complex>(grid.point_count, Complex(0.0)));
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<Complex(double)>& f) {
  std::vector<Complex> v(grid.point_count);
  for (int k = 0; k < grid.point_count; ++k) v[k] = f(grid.node(k));
  return GridFunction(grid, std::move(v));
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_grid(*this, other);
  for (int k = 0; k < size(); ++k) samples_[k] += other.samples_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_grid(*this, other);
  for (int k = 0; k < size(); ++k) samples_[k] -= other.samples_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(Complex scale) {
  for (Complex& v : samples_) v *= scale;
  return *this;
}

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid()))
    throw GridMismatch("grid mismatch: functions live on different grids");
}

void write_csv(const GridFunction& f, std::ostream& out) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# grid L=%.17g M=%d\n", f.grid().half_width,
                f.grid().point_count);
  out << buf;
  for (int k = 0; k < f.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", f.grid().node(k), f[k].real(),
                  f[k].imag());
    out << buf;
  }
}

GridFunction read_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error("GridFunction CSV: empty input");
  double L = 0.0;
  int M = 0;
  if (std::sscanf(header.c_str(), "# grid L=%lf M=%d", &L, &M) != 2)
    throw Error("GridFunction CSV: malformed header '" + header + "'");
  Grid grid(L, M);
  std::vector<Complex> samples;
  samples.reserve(M);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x = 0.0, re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
      throw Error("GridFunction CSV: malformed row '" + line + "'");
    samples.emplace_back(re, im);
  }
  return GridFunction(grid, std::move(samples));
}

}  // namespace kgrs
