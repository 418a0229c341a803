#include "kgrs/hamiltonians.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kgrs/errors.hpp"
#include "kgrs/grid_ops.hpp"
#include "kgrs/span_basis.hpp"

namespace kgrs {

GridFunction shifted_oscillator_apply(double a, const GridFunction& f) {
  GridFunction out = fourier_multiplier_apply(f, [](double xi) { return Complex(xi * xi); });
  out += multiply_apply(f, [a](double x) { return Complex(x * x, 2.0 * a * x); });
  return out;
}

GridFunction example1_apply(const GridFunction& f) {
  const GridFunction fp = fourier_multiplier_apply(f, [](double xi) { return Complex(0.0, xi); });
  GridFunction out = fourier_multiplier_apply(f, [](double xi) { return Complex(xi * xi); });
  out -= multiply_apply(fp, [](double x) { return Complex(x); });
  out += multiply_apply(f, [](double x) { return Complex(0.5 * (1.5 * x * x - 1.0)); });
  out *= 0.5;
  return out;
}

GridFunction example1_adjoint_apply(const GridFunction& f) {
  const GridFunction fp = fourier_multiplier_apply(f, [](double xi) { return Complex(0.0, xi); });
  GridFunction out = fourier_multiplier_apply(f, [](double xi) { return Complex(xi * xi); });
  out += multiply_apply(fp, [](double x) { return Complex(x); });
  out += multiply_apply(f, [](double x) { return Complex(0.5 * (1.5 * x * x + 1.0)); });
  out *= 0.5;
  return out;
}

namespace {

// Kinetic matrix of -d^2/dx^2 on the midpoint grid. The node-offset phases of
// the forward and inverse transforms cancel in the composition, leaving the
// real symmetric Toeplitz form
//   K(j,k) = (1/M) sum_m xi_m^2 e^{2 pi i m (j-k)/M},
// where the unpaired m = -M/2 term contributes xi^2 (-1)^{j-k} / M.
Eigen::MatrixXd kinetic_matrix(const Grid& grid) {
  const int M = grid.point_count;
  const double dxi = 2.0 * std::numbers::pi / (M * grid.spacing());
  std::vector<double> row(M, 0.0);
  for (int d = 0; d < M; ++d) {
    double acc = 0.0;
    for (int m = 1; m < M / 2; ++m) {
      const double xi = m * dxi;
      acc += 2.0 * xi * xi * std::cos(2.0 * std::numbers::pi * m * d / M);
    }
    const double xi_edge = (M / 2) * dxi;
    acc += xi_edge * xi_edge * ((d % 2 == 0) ? 1.0 : -1.0);
    row[d] = acc / M;
  }
  Eigen::MatrixXd k(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) k(i, j) = row[std::abs(i - j)];
  return k;
}

int nodal_count(std::span<const Complex> v) {
  double peak = 0.0;
  for (const Complex& s : v) peak = std::max(peak, std::abs(s));
  const double floor = 1e-8 * peak;
  int changes = 0;
  double last = 0.0;
  for (const Complex& s : v) {
    const double r = s.real();
    if (std::abs(r) < floor) continue;
    if (last != 0.0 && r * last < 0.0) ++changes;
    last = r;
  }
  return changes;
}

}  // namespace

std::vector<AnharmonicMode> anharmonic_basis(double beta, int count, const Grid& grid) {
  if (count < 1 || count > 40)
    throw ConfigError("anharmonic_basis: count must be in [1, 40], got " + std::to_string(count));
  if (beta < 2.0)
    throw ConfigError("anharmonic_basis: beta must be >= 2, got " + std::to_string(beta));
  const int M = grid.point_count;

  Eigen::MatrixXd h = kinetic_matrix(grid);
  for (int k = 0; k < M; ++k) h(k, k) += std::pow(std::abs(grid.node(k)), beta);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  if (eig.info() != Eigen::Success) throw Error("anharmonic_basis: eigensolver failed");

  const double hstep = grid.spacing();
  std::vector<AnharmonicMode> modes;
  modes.reserve(count);
  for (int n = 0; n < count; ++n) {
    const int parity = (n % 2 == 0) ? 1 : -1;
    std::vector<Complex> v(M);
    for (int k = 0; k < M; ++k) v[k] = eig.eigenvectors()(k, n) / std::sqrt(hstep);
    GridFunction raw(grid, std::move(v));

    GridFunction reflected = parity_apply(raw);
    const GridFunction symmetrized = 0.5 * (raw + static_cast<double>(parity) * reflected);
    const double defect =
        0.5 * norm(raw - static_cast<double>(parity) * reflected) / std::max(norm(raw), 1e-300);
    if (defect > 1e-8)
      throw Error("anharmonic_basis: mode " + std::to_string(n) + " parity defect " +
                  std::to_string(defect) + " exceeds 1e-8 (possible eigenvalue clustering)");

    GridFunction fn = (1.0 / norm(symmetrized)) * symmetrized;
    // deterministic sign: positive sample just right of the origin
    if (fn[M / 2].real() < 0.0) fn *= -1.0;

    if (nodal_count(fn.samples()) != n)
      throw Error("anharmonic_basis: grid does not resolve mode " + std::to_string(n) +
                  " (nodal count mismatch)");
    modes.push_back(AnharmonicMode{eig.eigenvalues()(n), std::move(fn), parity});
  }
  return modes;
}

GridFunction ne1_apply(const BiorthogonalSystem& system, std::span<const Complex> lambdas,
                       const GridFunction& f) {
  if (static_cast<int>(lambdas.size()) != system.size())
    throw Error("ne1_apply: lambda list length does not match system");
  GridFunction out = GridFunction::zero(f.grid());
  for (int n = 0; n < system.size(); ++n)
    out += lambdas[n] * inner(f, system.psi[n]) * system.phi[n];
  return out;
}

namespace {

SpectrumReport spectrum_of_pair(const std::string& label, const BiorthogonalSystem& system,
                                std::span<const GridFunction> phi,
                                std::span<const GridFunction> psi,
                                std::span<const Complex> lambdas) {
  const int n = static_cast<int>(phi.size());
  // orthonormal coordinates of span{phi}
  BiorthogonalSystem view;
  view.grid = system.grid;
  view.family = system.family;
  view.phi.assign(phi.begin(), phi.end());
  view.psi.assign(psi.begin(), psi.end());
  const SpanBasis span = orthonormalize_span(view);

  // H in span coordinates: phi_coords * diag(lambda) * T^adjoint * W with
  // T(i,j) = <psi_j, phi_i>; exact biorthogonality makes this similar to
  // diag(lambda).
  const Eigen::MatrixXcd t = pairing_matrix(phi, psi);
  Eigen::VectorXcd lam(n);
  for (int i = 0; i < n; ++i) lam(i) = lambdas[i];
  const Eigen::MatrixXcd h_span =
      span.phi_coords * lam.asDiagonal() * t.adjoint() * span.transform;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(h_span);
  if (eig.info() != Eigen::Success) throw Error("build_truncated_ne1: eigensolver failed");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Complex va = eig.eigenvalues()(a), vb = eig.eigenvalues()(b);
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });

  SpectrumReport report;
  report.label = label;
  report.truncation = n;
  report.grid = system.grid;
  report.eigenvalues.reserve(n);
  report.residuals.reserve(n);
  for (int idx : order) {
    const Complex value = eig.eigenvalues()(idx);
    // grid-side residual of the recovered eigenpair
    std::vector<Complex> b_coords(n);
    for (int k = 0; k < n; ++k) b_coords[k] = eig.eigenvectors()(k, idx);
    GridFunction vec = linear_combination(span.onb, b_coords);
    GridFunction hv = GridFunction::zero(system.grid);
    for (int m = 0; m < n; ++m) hv += lambdas[m] * inner(vec, psi[m]) * phi[m];
    report.eigenvalues.push_back(value);
    report.residuals.push_back(norm(hv - value * vec) / norm(vec));
  }
  return report;
}

}  // namespace

Ne1Report build_truncated_ne1(const BiorthogonalSystem& system, std::span<const Complex> lambdas) {
  if (static_cast<int>(lambdas.size()) != system.size())
    throw Error("build_truncated_ne1: lambda list length " + std::to_string(lambdas.size()) +
                " does not match system size " + std::to_string(system.size()));
  Ne1Report report;
  report.h_phi_psi = spectrum_of_pair("H_phi_psi", system, system.phi, system.psi, lambdas);
  report.h_psi_phi = spectrum_of_pair("H_psi_phi", system, system.psi, system.phi, lambdas);
  return report;
}

}  // namespace kgrs
