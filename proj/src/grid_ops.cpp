#include "kgrs/grid_ops.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "kgrs/errors.hpp"
#include "kgrs/specfun.hpp"

namespace kgrs {

namespace {

// Cached FFTW plans per (size, sign). Planning is not thread-safe and is
// serialized; execution with the new-array interface is. Plans are created
// with FFTW_UNALIGNED so any buffer may be used.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  void execute(std::vector<Complex>& data, int sign) {
    fftw_plan plan = nullptr;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto key = std::make_pair(data.size(), sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        std::vector<Complex> scratch(data.size());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()),
                                reinterpret_cast<fftw_complex*>(scratch.data()),
                                reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw Error("fftw planning failed");
        plans_.emplace(key, plan);
      } else {
        plan = it->second;
      }
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
  }

private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

}  // namespace

Complex inner(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  Complex acc = 0.0;
  for (int k = 0; k < f.size(); ++k) acc += f[k] * std::conj(g[k]);
  return f.grid().spacing() * acc;
}

double norm(const GridFunction& f) { return std::sqrt(std::abs(inner(f, f))); }

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (int k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
  return m;
}

GridFunction parity_apply(const GridFunction& f) {
  std::vector<Complex> v(f.samples().rbegin(), f.samples().rend());
  return GridFunction(f.grid(), std::move(v));
}

std::vector<double> frequencies(const Grid& grid) {
  const int M = grid.point_count;
  const double dxi = 2.0 * std::numbers::pi / (M * grid.spacing());
  std::vector<double> xi(M);
  for (int j = 0; j < M; ++j) xi[j] = (j - M / 2) * dxi;
  return xi;
}

std::vector<Complex> forward_transform(const GridFunction& f) {
  const int M = f.size();
  std::vector<Complex> data(f.samples().begin(), f.samples().end());
  PlanCache::instance().execute(data, FFTW_FORWARD);
  // reorder to signed frequencies and apply the node-offset phase
  const double scale = f.grid().spacing() / std::sqrt(2.0 * std::numbers::pi);
  std::vector<Complex> out(M);
  for (int j = 0; j < M; ++j) {
    const int js = j - M / 2;  // signed index
    const double phase = std::numbers::pi * js * (M - 1.0) / M;
    out[j] = scale * std::polar(1.0, phase) * data[(js + M) % M];
  }
  return out;
}

GridFunction inverse_transform(const Grid& grid, std::span<const Complex> spectrum) {
  const int M = grid.point_count;
  if (static_cast<int>(spectrum.size()) != M)
    throw ConfigError("inverse_transform: spectrum length does not match grid");
  std::vector<Complex> data(M);
  for (int j = 0; j < M; ++j) {
    const int js = j - M / 2;
    const double phase = -std::numbers::pi * js * (M - 1.0) / M;
    data[(js + M) % M] = std::polar(1.0, phase) * spectrum[j];
  }
  PlanCache::instance().execute(data, FFTW_BACKWARD);
  const double dxi = 2.0 * std::numbers::pi / (M * grid.spacing());
  const double scale = dxi / std::sqrt(2.0 * std::numbers::pi);
  std::vector<Complex> out(M);
  for (int k = 0; k < M; ++k) out[k] = scale * data[k];
  return GridFunction(grid, std::move(out));
}

GridFunction fourier_multiplier_apply(const GridFunction& f,
                                      const std::function<Complex(double)>& symbol,
                                      double spectral_floor) {
  std::vector<Complex> spec = forward_transform(f);
  if (spectral_floor > 0.0) {
    double peak = 0.0;
    for (const Complex& v : spec) peak = std::max(peak, std::abs(v));
    const double cut = spectral_floor * peak;
    for (Complex& v : spec) {
      if (std::abs(v) < cut) v = 0.0;
    }
  }
  const std::vector<double> xi = frequencies(f.grid());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const Complex s = symbol(xi[j]);
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw Error("fourier_multiplier_apply: symbol not finite at xi = " + std::to_string(xi[j]));
    spec[j] *= s;
  }
  return inverse_transform(f.grid(), spec);
}

GridFunction multiply_apply(const GridFunction& f, const std::function<Complex(double)>& weight) {
  std::vector<Complex> v(f.samples().begin(), f.samples().end());
  for (int k = 0; k < f.size(); ++k) {
    const Complex w = weight(f.grid().node(k));
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      throw Error("multiply_apply: weight not finite at x = " + std::to_string(f.grid().node(k)));
    v[k] *= w;
  }
  return GridFunction(f.grid(), std::move(v));
}

GridFunction hermite_sample(int n, const Grid& grid, double imag_shift) {
  std::vector<Complex> v(grid.point_count);
  for (int k = 0; k < grid.point_count; ++k)
    v[k] = specfun::hermite_function(n, Complex(grid.node(k), imag_shift));
  return GridFunction(grid, std::move(v));
}

}  // namespace kgrs
