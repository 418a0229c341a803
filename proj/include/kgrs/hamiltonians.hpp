#pragma once

#include <span>
#include <string>
#include <vector>

#include "kgrs/grid.hpp"
#include "kgrs/krein.hpp"

namespace kgrs {

// H = -d^2/dx^2 + x^2 + 2iax; the second derivative is spectral
// (multiplier xi^2), the potentials act pointwise.
GridFunction shifted_oscillator_apply(double a, const GridFunction& f);

// H = (1/2)( -d^2/dx^2 - x d/dx + (1/2)(3x^2/2 - 1) )
GridFunction example1_apply(const GridFunction& f);

// H* = (1/2)( -d^2/dx^2 + x d/dx + (1/2)(3x^2/2 + 1) )
GridFunction example1_adjoint_apply(const GridFunction& f);

struct AnharmonicMode {
  double eigenvalue = 0.0;
  GridFunction function;  // unit grid norm, parity-symmetrized
  int parity = 0;         // +1 even, -1 odd (alternates with the mode index)
};

// Lowest `count` eigenpairs of H_beta = -d^2/dx^2 + |x|^beta from the dense
// symmetric spectral discretization (kinetic Toeplitz block plus diagonal
// potential). |x|^beta is evaluated pointwise; the midpoint grid never places
// a node at x = 0. Eigenfunctions are parity eigenvectors; each mode is
// symmetrized and rejected if its parity defect exceeds 1e-8 or its nodal
// count does not match the mode index (grid resolution check).
// Requires count <= 40 and beta >= 2 (beta = 2 is the harmonic sanity case;
// family builders require beta > 2).
std::vector<AnharmonicMode> anharmonic_basis(double beta, int count, const Grid& grid);

struct SpectrumReport {
  std::string label;
  int truncation = 0;
  std::vector<Complex> eigenvalues;  // sorted by real part, then imaginary
  std::vector<double> residuals;     // grid-side ||H v - lambda v|| / ||v||
  Grid grid;
};

struct Ne1Report {
  SpectrumReport h_phi_psi;  // H f = sum lambda_n <f, psi_n> phi_n
  SpectrumReport h_psi_phi;  // H g = sum lambda_n <g, phi_n> psi_n
};

// Assembles both truncated operators of the dual pair, diagonalizes them in
// orthonormal span coordinates, and reports recovered eigenvalues with
// grid-side eigen residuals.
Ne1Report build_truncated_ne1(const BiorthogonalSystem& system, std::span<const Complex> lambdas);

// One application of H_{phi,psi} restricted to the stored rank:
// f -> sum_n lambda_n <f, psi_n> phi_n.
GridFunction ne1_apply(const BiorthogonalSystem& system, std::span<const Complex> lambdas,
                       const GridFunction& f);

}  // namespace kgrs
