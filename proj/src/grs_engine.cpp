#include "kgrs/grs_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "kgrs/errors.hpp"
#include "kgrs/grid_ops.hpp"
#include "kgrs/hamiltonians.hpp"
#include "kgrs/parallel.hpp"

namespace kgrs {

AnharmonicDeformation default_anharmonic(double beta) {
  AnharmonicDeformation def;
  def.beta = beta;
  def.p = [](double x) { return 0.3 * x * std::exp(-0.5 * x * x); };
  def.p_label = "default";
  return def;
}

std::string family_name(const FamilySpec& spec) {
  char buf[96];
  if (std::holds_alternative<ShiftedOscillator>(spec.kind)) {
    std::snprintf(buf, sizeof(buf), "shifted(a=%g)", std::get<ShiftedOscillator>(spec.kind).shift);
    return buf;
  }
  if (std::holds_alternative<GaussianDeformation>(spec.kind)) return "example1";
  const auto& anh = std::get<AnharmonicDeformation>(spec.kind);
  std::snprintf(buf, sizeof(buf), "anharmonic(beta=%g,p=%s)", anh.beta, anh.p_label.c_str());
  return buf;
}

namespace {

// The grid must contain the orthonormal modes: |e_n| below 1e-12 at the
// boundary (phi and psi inherit pairwise integrability from that).
void check_boundary_tail(const std::vector<GridFunction>& onb, const Grid& grid, int truncation) {
  double tail = 0.0;
  for (const GridFunction& f : onb) {
    tail = std::max(tail, std::abs(f[0]));
    tail = std::max(tail, std::abs(f[f.size() - 1]));
  }
  if (tail > 1e-12) {
    const double suggested =
        std::max(std::ceil(std::sqrt(2.0 * truncation + 1.0) + 8.0), grid.half_width + 2.0);
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "build_family: basis mode tail %.3g at |x| = %g exceeds 1e-12; suggest L >= %g",
                  tail, grid.half_width, suggested);
    throw GridTooSmall(suggested, msg);
  }
}

}  // namespace

BiorthogonalSystem build_family(const FamilySpec& spec, double certification_tol) {
  if (spec.truncation < 1) throw ConfigError("build_family: truncation must be >= 1");
  const int n = spec.truncation;
  BiorthogonalSystem system;
  system.grid = spec.grid;
  system.family = family_name(spec);
  system.certification_tol = certification_tol;
  system.phi.reserve(n);
  system.psi.reserve(n);
  system.default_lambdas.reserve(n);

  if (const auto* shifted = std::get_if<ShiftedOscillator>(&spec.kind)) {
    const double a = shifted->shift;
    if (a == 0.0) throw ConfigError("build_family: shifted oscillator requires a != 0");
    std::vector<GridFunction> base;
    base.reserve(n);
    for (int k = 0; k < n; ++k) base.push_back(hermite_sample(k, spec.grid));
    check_boundary_tail(base, spec.grid, n);
    for (int k = 0; k < n; ++k) {
      system.phi.push_back(hermite_sample(k, spec.grid, a));
      system.psi.push_back(hermite_sample(k, spec.grid, -a));
      system.default_lambdas.push_back(2.0 * k + 1.0 + a * a);
    }
    system.phi_cross.reserve(n);
    for (int k = 0; k < n; ++k) {
      system.phi_cross.push_back(fourier_multiplier_apply(
          base[k], [a](double xi) { return Complex(std::exp(-a * xi)); }));
    }
  } else if (std::holds_alternative<GaussianDeformation>(spec.kind)) {
    std::vector<GridFunction> base;
    base.reserve(n);
    for (int k = 0; k < n; ++k) base.push_back(hermite_sample(k, spec.grid));
    check_boundary_tail(base, spec.grid, n);
    for (int k = 0; k < n; ++k) {
      system.phi.push_back(
          multiply_apply(base[k], [](double x) { return Complex(std::exp(-0.25 * x * x)); }));
      system.psi.push_back(
          multiply_apply(base[k], [](double x) { return Complex(std::exp(0.25 * x * x)); }));
      system.default_lambdas.push_back(k + 0.5);
    }
  } else {
    const auto& anh = std::get<AnharmonicDeformation>(spec.kind);
    if (!(anh.beta > 2.0))
      throw ConfigError("build_family: anharmonic deformation requires beta > 2");
    if (!anh.p) throw ConfigError("build_family: anharmonic deformation requires p");
    double odd_defect = 0.0;
    for (int k = 0; k < spec.grid.point_count; ++k) {
      const double x = spec.grid.node(k);
      odd_defect = std::max(odd_defect, std::abs(anh.p(x) + anh.p(-x)));
    }
    if (odd_defect > 1e-12)
      throw ConfigError("build_family: p is not odd on the nodes (defect " +
                        std::to_string(odd_defect) + ")");
    const std::vector<AnharmonicMode> modes = anharmonic_basis(anh.beta, n, spec.grid);
    std::vector<GridFunction> base;
    base.reserve(n);
    for (const AnharmonicMode& mode : modes) base.push_back(mode.function);
    check_boundary_tail(base, spec.grid, n);
    for (const AnharmonicMode& mode : modes) {
      system.phi.push_back(
          multiply_apply(mode.function, [&](double x) { return Complex(std::exp(anh.p(x))); }));
      system.psi.push_back(
          multiply_apply(mode.function, [&](double x) { return Complex(std::exp(-anh.p(x))); }));
      system.default_lambdas.push_back(mode.eigenvalue);
    }
  }

  system.biorth_defect = biorthogonality_defect(system.phi, system.psi);
  return system;
}

QReconstruction reconstruct_q(const BiorthogonalSystem& system, double cond_limit) {
  const int n = system.size();
  QReconstruction recon;
  recon.span = orthonormalize_span(system, cond_limit);

  const Eigen::MatrixXcd t = pairing_matrix(system.phi, system.psi);
  const Eigen::MatrixXcd g0 =
      recon.span.transform.adjoint() * t * recon.span.transform;
  recon.asymmetry_norm = (g0 - g0.adjoint()).cwiseAbs().maxCoeff();
  recon.g_matrix = 0.5 * (g0 + g0.adjoint());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(recon.g_matrix);
  if (eig.info() != Eigen::Success) throw Error("reconstruct_q: eigendecomposition failed");
  const Eigen::VectorXd mu = eig.eigenvalues();
  if (mu(0) <= 0.0)
    throw NonPositiveSection(mu(0), "reconstruct_q: finite section of G has eigenvalue " +
                                         std::to_string(mu(0)) + " <= 0");
  const Eigen::MatrixXcd v = eig.eigenvectors();
  recon.q_matrix = -(v * mu.array().log().matrix().asDiagonal() * v.adjoint());
  const Eigen::MatrixXcd g_half = v * mu.cwiseSqrt().asDiagonal() * v.adjoint();

  recon.e_coords = g_half * recon.span.phi_coords;
  recon.q_e_basis = recon.e_coords.adjoint() * recon.q_matrix * recon.e_coords;
  recon.e_orthonormality_defect =
      (recon.e_coords.adjoint() * recon.e_coords - Eigen::MatrixXcd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();

  recon.e_estimates.reserve(n);
  for (int k = 0; k < n; ++k) {
    std::vector<Complex> coeffs(n);
    for (int j = 0; j < n; ++j) coeffs[j] = recon.e_coords(j, k);
    recon.e_estimates.push_back(linear_combination(recon.span.onb, coeffs));
  }
  return recon;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::FirstTypeEvidence: return "FirstTypeEvidence";
    case Verdict::NotJOrthonormal: return "NotJOrthonormal";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ClassificationReport classify(const BiorthogonalSystem& system, const KreinStructure& J,
                              ClassifyOptions options) {
  const int n = system.size();
  const int n_report =
      (options.report_count > 0) ? std::min(options.report_count, n) : n;

  ClassificationReport report;
  report.truncation = n_report;
  report.working_modes = n;
  report.tolerances = options;

  const JOrthonormalityCheck check = j_orthonormality_check(system.phi, J);
  report.max_diag_deviation = check.max_diag_deviation;
  report.max_offdiag = check.max_offdiag;
  report.indefinite_diag.resize(n_report);
  for (int i = 0; i < n_report; ++i) report.indefinite_diag[i] = check.diag[i].real();

  if (check.max_diag_deviation > options.certification_tol ||
      check.max_offdiag > options.certification_tol) {
    report.verdict = Verdict::NotJOrthonormal;
    return report;
  }

  const QReconstruction recon = reconstruct_q(system);

  // J compressed to the e-estimates and the anticommutator with Q there.
  Eigen::MatrixXcd j_e(n, n);
  std::vector<GridFunction> j_of_e;
  j_of_e.reserve(n);
  for (int k = 0; k < n; ++k) j_of_e.push_back(J.apply(recon.e_estimates[k]));
  parallel_for(n, [&](std::size_t m) {
    for (int k = 0; k < n; ++k)
      j_e(static_cast<int>(m), k) = inner(j_of_e[k], recon.e_estimates[m]);
  });
  const Eigen::MatrixXcd anti = j_e * recon.q_e_basis + recon.q_e_basis * j_e;
  report.anticommutator_residual =
      anti.topLeftCorner(n_report, n_report).jacobiSvd().singularValues()(0);

  report.j_eigen_residuals.resize(n_report);
  report.predicted_parities.resize(n_report);
  for (int k = 0; k < n_report; ++k) {
    const GridFunction& e = recon.e_estimates[k];
    const double nrm = norm(e);
    const double plus = norm(j_of_e[k] - e) / nrm;
    const double minus = norm(j_of_e[k] + e) / nrm;
    report.j_eigen_residuals[k] = std::min(plus, minus);
    report.predicted_parities[k] = plus <= minus ? 1 : -1;
  }

  const bool anticommutes = report.anticommutator_residual <= options.anticommutator_tol;
  const bool eigenvectors = std::all_of(report.j_eigen_residuals.begin(),
                                        report.j_eigen_residuals.end(),
                                        [&](double r) { return r <= options.j_eigen_tol; });
  report.verdict =
      (anticommutes && eigenvectors) ? Verdict::FirstTypeEvidence : Verdict::Inconclusive;
  return report;
}

QuasiBasisResiduals quasi_basis_residual(const BiorthogonalSystem& system, const GridFunction& f,
                                         const GridFunction& g, int upto) {
  if (upto < 0 || upto > system.size())
    throw ConfigError("quasi_basis_residual: upto must be in [0, N]");
  const Complex target = inner(f, g);
  QuasiBasisResiduals residuals;
  residuals.phi_first.reserve(upto + 1);
  residuals.psi_first.reserve(upto + 1);
  Complex sum_phi = 0.0;
  Complex sum_psi = 0.0;
  residuals.phi_first.push_back(std::abs(target));
  residuals.psi_first.push_back(std::abs(target));
  for (int k = 0; k < upto; ++k) {
    sum_phi += inner(f, system.phi[k]) * inner(system.psi[k], g);
    sum_psi += inner(f, system.psi[k]) * inner(system.phi[k], g);
    residuals.phi_first.push_back(std::abs(target - sum_phi));
    residuals.psi_first.push_back(std::abs(target - sum_psi));
  }
  return residuals;
}

ExpansionDiagnostics expansion_minus_q(const BiorthogonalSystem& system, const KreinStructure& J,
                                       std::span<const Complex> coeffs, int upto) {
  if (!system.signs_certified()) throw Error("expansion_minus_q: signs not certified");
  if (static_cast<int>(coeffs.size()) > system.size())
    throw Error("expansion_minus_q: more coefficients than system modes");
  if (upto < 0 || upto > system.size())
    throw ConfigError("expansion_minus_q: upto must be in [0, N]");

  const GridFunction f = coeffs.empty() ? GridFunction::zero(system.grid)
                                        : linear_combination(system.phi, coeffs);
  const GridFunction jf = J.apply(f);

  ExpansionDiagnostics diag;
  const int n_terms = upto;
  std::vector<Complex> grid_coeffs(n_terms);
  for (int k = 0; k < n_terms; ++k) {
    grid_coeffs[k] =
        static_cast<double>(system.signs[k]) * inner(jf, system.phi[k]);  // delta_k [f, phi_k]
    const Complex ck = (k < static_cast<int>(coeffs.size())) ? coeffs[k] : Complex(0.0);
    diag.max_coefficient_defect =
        std::max(diag.max_coefficient_defect, std::abs(grid_coeffs[k] - ck));
  }

  // ||f - sum_{n<k} gamma_n phi_n||_{-Q}^2 in coefficient space:
  // matched modes contribute |c_n - gamma_n|^2, unexpanded ones |c_n|^2.
  diag.distances.resize(upto + 1);
  for (int k = 0; k <= upto; ++k) {
    double acc = 0.0;
    for (int m = 0; m < static_cast<int>(std::max<std::size_t>(coeffs.size(), n_terms)); ++m) {
      const Complex cm = (m < static_cast<int>(coeffs.size())) ? coeffs[m] : Complex(0.0);
      if (m < k)
        acc += std::norm(cm - grid_coeffs[m]);
      else
        acc += std::norm(cm);
    }
    diag.distances[k] = std::sqrt(acc);
  }
  return diag;
}

double extremality_quotient(const QReconstruction& recon, std::span<const Complex> g_phi_coords) {
  const int n = static_cast<int>(recon.span.transform.rows());
  if (static_cast<int>(g_phi_coords.size()) != n)
    throw ConfigError("extremality_quotient: coefficient length must equal N");
  Eigen::VectorXcd g(n);
  for (int i = 0; i < n; ++i) g(i) = g_phi_coords[i];
  if (g.norm() == 0.0) throw ConfigError("extremality_quotient: g must be nonzero");
  // g enters through the span functional it represents; normalizing it makes
  // the quotient invariant under rescaling of g and comparable across N
  const Eigen::VectorXcd g_onb = recon.span.phi_coords * g;
  const Eigen::LLT<Eigen::MatrixXcd> llt(recon.g_matrix);
  if (llt.info() != Eigen::Success)
    throw NonPositiveSection(0.0, "extremality_quotient: finite section of G not positive");
  const double quad = std::real(g_onb.dot(llt.solve(g_onb)));
  return g_onb.squaredNorm() / quad;
}

double extremality_quotient(const BiorthogonalSystem& system,
                            std::span<const Complex> g_phi_coords) {
  return extremality_quotient(reconstruct_q(system), g_phi_coords);
}

}  // namespace kgrs
