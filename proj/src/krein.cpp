#include "kgrs/krein.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kgrs/errors.hpp"
#include "kgrs/parallel.hpp"
#include "kgrs/span_basis.hpp"

namespace kgrs {

Complex indefinite_inner(const KreinStructure& J, const GridFunction& f, const GridFunction& g) {
  return inner(J.apply(f), g);
}

double biorthogonality_defect(std::span<const GridFunction> phi,
                              std::span<const GridFunction> psi) {
  const int n = static_cast<int>(phi.size());
  std::vector<double> row_max(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const Complex v = inner(phi[i], psi[j]);
      const double target = (static_cast<int>(i) == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(v - target));
    }
    row_max[i] = worst;
  });
  double defect = 0.0;
  for (double v : row_max) defect = std::max(defect, v);
  return defect;
}

JOrthonormalityCheck j_orthonormality_check(std::span<const GridFunction> phi,
                                            const KreinStructure& J) {
  const int n = static_cast<int>(phi.size());
  JOrthonormalityCheck check;
  check.diag.resize(n);
  std::vector<double> row_offdiag(n, 0.0);
  std::vector<GridFunction> jphi;
  jphi.reserve(n);
  for (int i = 0; i < n; ++i) jphi.push_back(J.apply(phi[i]));
  parallel_for(n, [&](std::size_t i) {
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const Complex v = inner(jphi[i], phi[j]);
      if (static_cast<int>(i) == j)
        check.diag[i] = v;
      else
        worst = std::max(worst, std::abs(v));
    }
    row_offdiag[i] = worst;
  });
  check.max_diag_deviation = 0.0;
  check.max_offdiag = 0.0;
  check.max_diag_imag = 0.0;
  check.worst_index = 0;
  for (int i = 0; i < n; ++i) {
    const double dev = std::abs(std::abs(check.diag[i]) - 1.0);
    if (dev > check.max_diag_deviation) {
      check.max_diag_deviation = dev;
      check.worst_index = i;
    }
    check.max_offdiag = std::max(check.max_offdiag, row_offdiag[i]);
    check.max_diag_imag = std::max(check.max_diag_imag, std::abs(check.diag[i].imag()));
  }
  return check;
}

PartnerResult biorthogonal_partner(const KreinStructure& J, std::span<const GridFunction> phi,
                                   double tol) {
  const int n = static_cast<int>(phi.size());
  PartnerResult result;
  result.signs.resize(n);
  result.max_diag_imag = 0.0;
  result.psi.reserve(n);
  for (int i = 0; i < n; ++i) {
    GridFunction jp = J.apply(phi[i]);
    const Complex d = inner(jp, phi[i]);  // [phi_i, phi_i]
    if (std::abs(std::abs(d) - 1.0) > tol)
      throw NotJOrthonormal(i, d.real(),
                            "biorthogonal_partner: |[phi_" + std::to_string(i) +
                                ", phi_" + std::to_string(i) + "]| = " +
                                std::to_string(std::abs(d)) + " is not 1 within " +
                                std::to_string(tol));
    result.max_diag_imag = std::max(result.max_diag_imag, std::abs(d.imag()));
    const int sign = d.real() >= 0.0 ? 1 : -1;
    result.signs[i] = sign;
    jp *= Complex(static_cast<double>(sign));
    result.psi.push_back(std::move(jp));
  }
  result.biorth_defect = biorthogonality_defect(phi, result.psi);
  return result;
}

void certify_signs(BiorthogonalSystem& system, const KreinStructure& J, double tol) {
  const JOrthonormalityCheck check = j_orthonormality_check(system.phi, J);
  if (check.max_diag_deviation > tol) {
    const int i = check.worst_index;
    throw NotJOrthonormal(i, check.diag[i].real(),
                          "certify_signs: |[phi_" + std::to_string(i) + ", phi_" +
                              std::to_string(i) + "]| = " +
                              std::to_string(std::abs(check.diag[i])) + " is not 1 within " +
                              std::to_string(tol));
  }
  system.signs.resize(system.size());
  for (int i = 0; i < system.size(); ++i)
    system.signs[i] = check.diag[i].real() >= 0.0 ? 1 : -1;
}

std::pair<std::vector<int>, std::vector<int>> sign_split(const BiorthogonalSystem& system) {
  if (!system.signs_certified()) throw Error("sign_split: signs not certified");
  std::pair<std::vector<int>, std::vector<int>> split;
  for (int i = 0; i < system.size(); ++i) {
    if (system.signs[i] > 0)
      split.first.push_back(i);
    else
      split.second.push_back(i);
  }
  return split;
}

CSymmetryOperator::CSymmetryOperator(const BiorthogonalSystem& system)
    : phi_(system.phi), psi_(system.psi), signs_(system.signs) {
  if (!system.signs_certified()) throw Error("CSymmetryOperator: signs not certified");
}

GridFunction CSymmetryOperator::apply(const GridFunction& f) const {
  GridFunction out = GridFunction::zero(f.grid());
  for (std::size_t n = 0; n < phi_.size(); ++n) {
    const Complex c = static_cast<double>(signs_[n]) * inner(f, psi_[n]);
    out += c * phi_[n];
  }
  return out;
}

CSymmetryOperator c_symmetry_build(const BiorthogonalSystem& system) {
  return CSymmetryOperator(system);
}

Complex metric_inner_minus_q(const BiorthogonalSystem& system, std::span<const Complex> c,
                             std::span<const Complex> d) {
  if (c.size() != d.size()) throw Error("metric_inner_minus_q: coefficient length mismatch");
  if (static_cast<int>(c.size()) > system.size())
    throw Error("metric_inner_minus_q: more coefficients than system modes");
  Complex acc = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) acc += c[n] * std::conj(d[n]);
  return acc;
}

Complex metric_inner_minus_q_grid(const BiorthogonalSystem& system, const KreinStructure& J,
                                  std::span<const Complex> c, std::span<const Complex> d) {
  if (c.size() != d.size()) throw Error("metric_inner_minus_q_grid: coefficient length mismatch");
  if (static_cast<int>(c.size()) > system.size())
    throw Error("metric_inner_minus_q_grid: more coefficients than system modes");
  GridFunction f = GridFunction::zero(system.grid);
  GridFunction g = GridFunction::zero(system.grid);
  for (std::size_t n = 0; n < c.size(); ++n) {
    f += c[n] * system.phi[n];
    g += d[n] * system.phi[n];
  }
  const CSymmetryOperator c_op(system);
  return indefinite_inner(J, c_op.apply(f), g);
}

namespace {

GramReport gram_report_from(const BiorthogonalSystem& system, double tolerance,
                            const std::function<Complex(int, int)>& entry) {
  const int n = system.size();
  GramReport report;
  report.family = system.family;
  report.truncation = n;
  report.tolerance = tolerance;
  report.gram.assign(static_cast<std::size_t>(n) * n, Complex(0.0));
  parallel_for(n, [&](std::size_t i) {
    for (int j = 0; j < n; ++j) report.gram[i * n + j] = entry(static_cast<int>(i), j);
  });
  report.max_offdiag = 0.0;
  report.diag_signs.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (i != j) report.max_offdiag = std::max(report.max_offdiag, std::abs(report.gram[i * n + j]));
    report.diag_signs[i] = report.gram[i * n + i].real() >= 0.0 ? 1 : -1;
  }
  return report;
}

}  // namespace

GramReport indefinite_gram_report(const BiorthogonalSystem& system, const KreinStructure& J,
                                  double tolerance) {
  std::vector<GridFunction> jphi;
  jphi.reserve(system.size());
  for (const GridFunction& p : system.phi) jphi.push_back(J.apply(p));
  return gram_report_from(system, tolerance,
                          [&](int i, int j) { return inner(jphi[i], system.phi[j]); });
}

GramReport ordinary_gram_report(const BiorthogonalSystem& system, double tolerance) {
  return gram_report_from(system, tolerance,
                          [&](int i, int j) { return inner(system.phi[i], system.phi[j]); });
}

Eigen::MatrixXcd pairing_matrix(std::span<const GridFunction> a, std::span<const GridFunction> b) {
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(b.size());
  Eigen::MatrixXcd m(rows, cols);
  parallel_for(rows, [&](std::size_t i) {
    for (int j = 0; j < cols; ++j) m(static_cast<int>(i), j) = inner(b[j], a[i]);
  });
  return m;
}

GridFunction linear_combination(std::span<const GridFunction> basis,
                                std::span<const Complex> coeffs) {
  if (basis.empty()) throw Error("linear_combination: empty basis");
  if (coeffs.size() > basis.size())
    throw Error("linear_combination: more coefficients than basis functions");
  GridFunction out = GridFunction::zero(basis[0].grid());
  for (std::size_t n = 0; n < coeffs.size(); ++n) out += coeffs[n] * basis[n];
  return out;
}

SpanBasis orthonormalize_span(const BiorthogonalSystem& system, double cond_limit) {
  const int n = system.size();
  const Eigen::MatrixXcd gram = pairing_matrix(system.phi, system.phi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  if (eig.info() != Eigen::Success)
    throw Error("orthonormalize_span: eigendecomposition failed");
  SpanBasis span;
  span.gram_eigenvalues = eig.eigenvalues();
  const double lo = span.gram_eigenvalues(0);
  const double hi = span.gram_eigenvalues(n - 1);
  span.condition = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  if (lo <= 0.0 || span.condition > cond_limit)
    throw RankDeficientSpan(span.condition,
                            "orthonormalize_span: phi Gram matrix is numerically rank deficient "
                            "(condition " + std::to_string(span.condition) + ")");
  const Eigen::VectorXd inv_sqrt = span.gram_eigenvalues.cwiseSqrt().cwiseInverse();
  span.transform = eig.eigenvectors() * inv_sqrt.asDiagonal();
  span.phi_coords = span.gram_eigenvalues.cwiseSqrt().asDiagonal() *
                    eig.eigenvectors().adjoint();
  span.onb.reserve(n);
  for (int k = 0; k < n; ++k) {
    std::vector<Complex> coeffs(n);
    for (int j = 0; j < n; ++j) coeffs[j] = span.transform(j, k);
    span.onb.push_back(linear_combination(system.phi, coeffs));
  }
  return span;
}

}  // namespace kgrs
