#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace kgrs {

using Complex = std::complex<double>;

// Symmetric uniform grid with midpoint node layout,
//   x_k = (k - M/2 + 1/2) h,  h = 2L/M,  k = 0..M-1,
// so that -x_k = x_{M-1-k} exactly and parity is an index permutation.
struct Grid {
  double half_width = 0.0;  // L
  int point_count = 0;      // M, positive and even

  Grid() = default;
  Grid(double half_width, int point_count);

  double spacing() const { return 2.0 * half_width / point_count; }
  double node(int k) const { return (k - 0.5 * point_count + 0.5) * spacing(); }
  std::vector<double> nodes() const;

  bool operator==(const Grid& other) const = default;
};

// Immutable complex-valued samples on a Grid.
class GridFunction {
public:
  GridFunction(Grid grid, std::vector<Complex> samples);

  static GridFunction zero(const Grid& grid);
  static GridFunction sample(const Grid& grid, const std::function<Complex(double)>& f);

  const Grid& grid() const { return grid_; }
  int size() const { return grid_.point_count; }
  std::span<const Complex> samples() const { return samples_; }
  const Complex& operator[](int k) const { return samples_[k]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(Complex scale);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(GridFunction a, Complex c) { return a *= c; }
  friend GridFunction operator*(Complex c, GridFunction a) { return a *= c; }

private:
  Grid grid_;
  std::vector<Complex> samples_;
};

void require_same_grid(const GridFunction& f, const GridFunction& g);

// CSV serialization: header line "# grid L=<L> M=<M>", then rows x,re,im.
void write_csv(const GridFunction& f, std::ostream& out);
GridFunction read_csv(std::istream& in);

}  // namespace kgrs
