#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgrs/grid.hpp"
#include "kgrs/grid_ops.hpp"

namespace kgrs {

// Fundamental symmetry J: a self-adjoint involution on grid functions.
// The default is the parity operator, which is an exact index permutation
// on the midpoint grid, so J^2 = I holds bit-exactly.
class KreinStructure {
public:
  using Action = std::function<GridFunction(const GridFunction&)>;

  KreinStructure(Action action, std::string label)
      : action_(std::move(action)), label_(std::move(label)) {}

  static KreinStructure parity() {
    return KreinStructure([](const GridFunction& f) { return parity_apply(f); }, "parity");
  }

  GridFunction apply(const GridFunction& f) const { return action_(f); }
  const std::string& label() const { return label_; }

private:
  Action action_;
  std::string label_;
};

// [f, g] = <Jf, g>
Complex indefinite_inner(const KreinStructure& J, const GridFunction& f, const GridFunction& g);

struct BiorthogonalSystem {
  Grid grid;
  std::string family;  // provenance tag
  std::vector<GridFunction> phi;
  std::vector<GridFunction> psi;
  std::vector<int> signs;  // delta_n in {+1,-1}; empty until certified
  double certification_tol = 0.0;
  double biorth_defect = 0.0;  // recorded max |<phi_n,psi_m> - delta_nm|
  // Eigenvalues of the family Hamiltonian (shifted: 2n+1+a^2, Example 1:
  // n+1/2, anharmonic: computed E_n(beta)); the default lambda list for the
  // truncated operators of the dual pair.
  std::vector<double> default_lambdas;
  // Optional second construction path kept for cross-checks (shifted family:
  // the Fourier-multiplier route next to the direct complex-argument one).
  std::vector<GridFunction> phi_cross;

  int size() const { return static_cast<int>(phi.size()); }
  bool signs_certified() const { return !signs.empty(); }
};

double biorthogonality_defect(std::span<const GridFunction> phi, std::span<const GridFunction> psi);

struct JOrthonormalityCheck {
  std::vector<Complex> diag;   // [phi_n, phi_n]
  double max_diag_deviation;   // max_n | |[phi_n,phi_n]| - 1 |
  double max_offdiag;          // max_{n != m} |[phi_n, phi_m]|
  double max_diag_imag;
  int worst_index;             // argmax of the diagonal deviation
};
JOrthonormalityCheck j_orthonormality_check(std::span<const GridFunction> phi,
                                            const KreinStructure& J);

struct PartnerResult {
  std::vector<GridFunction> psi;  // psi_n = delta_n J phi_n
  std::vector<int> signs;
  double biorth_defect;
  double max_diag_imag;  // above 1e-8 indicates noisy quadrature data
};

// psi_n = [phi_n, phi_n] J phi_n for a J-orthonormal family. Throws
// NotJOrthonormal (reporting the offending index and value) if some
// |[phi_n, phi_n]| deviates from 1 by more than tol.
PartnerResult biorthogonal_partner(const KreinStructure& J, std::span<const GridFunction> phi,
                                   double tol = 1e-6);

// Measures [phi_n, phi_n], sets system.signs = sign(Re [phi_n, phi_n]).
// Throws NotJOrthonormal on deviation beyond tol.
void certify_signs(BiorthogonalSystem& system, const KreinStructure& J, double tol = 1e-6);

// Partition of 0..N-1 by the certified signs: (positive, negative).
std::pair<std::vector<int>, std::vector<int>> sign_split(const BiorthogonalSystem& system);

// Finite-rank C_N f = sum_n delta_n <f, psi_n> phi_n. Stored as the function
// lists plus signs, never as a dense M x M matrix (rank N << M).
class CSymmetryOperator {
public:
  explicit CSymmetryOperator(const BiorthogonalSystem& system);

  GridFunction apply(const GridFunction& f) const;
  int rank() const { return static_cast<int>(phi_.size()); }
  std::span<const int> signs() const { return signs_; }

private:
  std::vector<GridFunction> phi_;
  std::vector<GridFunction> psi_;
  std::vector<int> signs_;
};

CSymmetryOperator c_symmetry_build(const BiorthogonalSystem& system);

// <f,g>_{-Q} in coefficient space: sum_n c_n conj(d_n), exact because
// <phi_n, phi_m>_{-Q} = delta_nm. Lengths must match and not exceed N.
Complex metric_inner_minus_q(const BiorthogonalSystem& system, std::span<const Complex> c,
                             std::span<const Complex> d);

// Grid-side evaluation [C_N f, g] of the same inner product, for cross-checks.
Complex metric_inner_minus_q_grid(const BiorthogonalSystem& system, const KreinStructure& J,
                                  std::span<const Complex> c, std::span<const Complex> d);

struct GramReport {
  std::string family;
  int truncation = 0;
  double tolerance = 0.0;
  std::vector<Complex> gram;  // row-major N x N
  double max_offdiag = 0.0;
  std::vector<int> diag_signs;
};

GramReport indefinite_gram_report(const BiorthogonalSystem& system, const KreinStructure& J,
                                  double tolerance);
GramReport ordinary_gram_report(const BiorthogonalSystem& system, double tolerance);

}  // namespace kgrs
