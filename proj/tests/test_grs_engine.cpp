#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "kgrs/errors.hpp"
#include "kgrs/grid_ops.hpp"
#include "kgrs/grs_engine.hpp"
#include "kgrs/krein.hpp"
#include "test_util.hpp"

using namespace kgrs;
using kgrs_test::default_grid;

namespace {

// exact Hermite-basis matrix of -x^2/2 (ladder algebra): diagonal -(2n+1)/4,
// |dn| = 2 entries -sqrt((n+1)(n+2))/4
Eigen::MatrixXd exact_q_example1(int n) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    q(k, k) = -(2.0 * k + 1.0) / 4.0;
    if (k + 2 < n) q(k, k + 2) = q(k + 2, k) = -std::sqrt((k + 1.0) * (k + 2.0)) / 4.0;
  }
  return q;
}

BiorthogonalSystem identity_system(int n, const Grid& grid) {
  BiorthogonalSystem system;
  system.grid = grid;
  system.family = "identity";
  for (int k = 0; k < n; ++k) {
    system.phi.push_back(hermite_sample(k, grid));
    system.psi.push_back(hermite_sample(k, grid));
  }
  system.biorth_defect = biorthogonality_defect(system.phi, system.psi);
  return system;
}

}  // namespace

TEST_CASE("family builders certify biorthogonality") {
  for (double a : {0.25, 0.5, 1.0}) {
    const BiorthogonalSystem system = build_family(kgrs_test::shifted_spec(a, 16));
    CHECK(system.biorth_defect < 1e-8);
    REQUIRE(system.phi_cross.size() == 16);
  }
  const BiorthogonalSystem gauss = build_family(kgrs_test::example1_spec(10));
  CHECK(gauss.biorth_defect < 1e-10);
  const BiorthogonalSystem anh = build_family(kgrs_test::anharmonic_spec(4.0, 10));
  CHECK(anh.biorth_defect < 1e-8);
  CHECK(anh.default_lambdas[0] == doctest::Approx(1.0603620904).epsilon(1e-6));
}

TEST_CASE("shifted family: direct and fourier construction paths agree") {
  for (double a : {0.25, 0.5, 1.0}) {
    const BiorthogonalSystem system = build_family(kgrs_test::shifted_spec(a, 16));
    for (int n = 0; n < 16; ++n)
      CHECK(kgrs_test::interior_sup_diff(system.phi[n], system.phi_cross[n]) < 1e-8);
  }
}

TEST_CASE("family builder guards") {
  CHECK_THROWS_AS(build_family(kgrs_test::shifted_spec(0.0, 4)), ConfigError);
  CHECK_THROWS_AS(build_family(kgrs_test::shifted_spec(0.5, 0)), ConfigError);

  try {
    build_family(kgrs_test::shifted_spec(0.5, 10, Grid(4.0, 128)));
    FAIL("expected GridTooSmall");
  } catch (const GridTooSmall& e) {
    CHECK(e.suggested_half_width >= std::sqrt(21.0));
  }

  FamilySpec bad_p = kgrs_test::anharmonic_spec(4.0, 4);
  std::get<AnharmonicDeformation>(bad_p.kind).p = [](double x) { return x * x; };
  CHECK_THROWS_AS(build_family(bad_p), ConfigError);

  FamilySpec bad_beta = kgrs_test::anharmonic_spec(2.0, 4);
  CHECK_THROWS_AS(build_family(bad_beta), ConfigError);
}

TEST_CASE("reconstruction of the identity system is trivial") {
  const BiorthogonalSystem system = identity_system(8, default_grid());
  const QReconstruction recon = reconstruct_q(system);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(8, 8);
  CHECK((recon.g_matrix - eye).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(recon.q_matrix.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(recon.asymmetry_norm < 1e-12);
  CHECK(recon.e_orthonormality_defect < 1e-12);
  for (int n = 0; n < 8; ++n) CHECK(norm(recon.e_estimates[n] - system.phi[n]) < 1e-10);
}

TEST_CASE("gaussian deformation reconstructs the metric generator") {
  const BiorthogonalSystem system = build_family(kgrs_test::example1_spec(12));
  const QReconstruction recon = reconstruct_q(system);
  CHECK(recon.asymmetry_norm < 1e-10);
  CHECK(recon.e_orthonormality_defect < 1e-9);

  // the reconstructed Q converges to the Hermite-basis matrix of -x^2/2 on
  // the leading half of the section
  const Eigen::MatrixXd q_exact = exact_q_example1(12);
  const double err6 =
      (recon.q_e_basis.topLeftCorner(6, 6) - q_exact.topLeftCorner(6, 6)).cwiseAbs().maxCoeff();
  CHECK(err6 < 2e-2);
}

TEST_CASE("shifted reconstruction recovers hermite functions in the interior") {
  const BiorthogonalSystem n12 = build_family(kgrs_test::shifted_spec(0.5, 12));
  const QReconstruction recon12 = reconstruct_q(n12);
  for (int n = 0; n <= 1; ++n)
    CHECK(norm(recon12.e_estimates[n] - hermite_sample(n, n12.grid)) < 1e-6);

  // deeper sections converge on more modes (truncation corner decays inward)
  const BiorthogonalSystem n20 = build_family(kgrs_test::shifted_spec(0.5, 20));
  const QReconstruction recon20 = reconstruct_q(n20);
  for (int n = 0; n <= 6; ++n)
    CHECK(norm(recon20.e_estimates[n] - hermite_sample(n, n20.grid)) < 1e-6);
}

TEST_CASE("reconstruction round trip expm(Q/2) e_n = phi_n") {
  const BiorthogonalSystem system = build_family(kgrs_test::shifted_spec(0.5, 10));
  const QReconstruction recon = reconstruct_q(system);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(recon.q_matrix);
  const Eigen::MatrixXcd exp_half = eig.eigenvectors() *
                                    (0.5 * eig.eigenvalues().array()).exp().matrix().asDiagonal() *
                                    eig.eigenvectors().adjoint();
  const Eigen::MatrixXcd back = exp_half * recon.e_coords;  // span coordinates of exp(Q/2) e_n
  CHECK((back - recon.span.phi_coords).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("reconstruction failure modes") {
  BiorthogonalSystem degenerate;
  degenerate.grid = default_grid();
  degenerate.family = "degenerate";
  degenerate.phi.push_back(hermite_sample(0, degenerate.grid));
  degenerate.phi.push_back(hermite_sample(0, degenerate.grid));  // repeated vector
  degenerate.psi = degenerate.phi;
  CHECK_THROWS_AS(reconstruct_q(degenerate), RankDeficientSpan);

  BiorthogonalSystem flipped;
  flipped.grid = default_grid();
  flipped.family = "flipped";
  flipped.phi.push_back(hermite_sample(0, flipped.grid));
  flipped.psi.push_back(hermite_sample(0, flipped.grid) * Complex(-1.0));
  CHECK_THROWS_AS(reconstruct_q(flipped), NonPositiveSection);
}

TEST_CASE("classification verdicts match the three families") {
  const KreinStructure parity = KreinStructure::parity();

  ClassifyOptions options;
  options.report_count = 15;
  const BiorthogonalSystem shifted =
      build_family(kgrs_test::shifted_spec(0.5, 15 + kClassificationPadding));
  const ClassificationReport first = classify(shifted, parity, options);
  CHECK(first.verdict == Verdict::FirstTypeEvidence);
  CHECK(first.anticommutator_residual < 1e-4);
  REQUIRE(static_cast<int>(first.predicted_parities.size()) == 15);
  for (int n = 0; n < 15; ++n) {
    CHECK(first.predicted_parities[n] == (n % 2 == 0 ? 1 : -1));
    CHECK(first.j_eigen_residuals[n] < 1e-5);
  }

  // predicted parities coincide with the certified signs
  BiorthogonalSystem certified = shifted;
  certify_signs(certified, parity);
  for (int n = 0; n < 15; ++n) CHECK(first.predicted_parities[n] == certified.signs[n]);

  const BiorthogonalSystem gauss = build_family(kgrs_test::example1_spec(12));
  const ClassificationReport not_j = classify(gauss, parity);
  CHECK(not_j.verdict == Verdict::NotJOrthonormal);
  CHECK(not_j.indefinite_diag[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-8));

  ClassifyOptions anh_options;
  anh_options.report_count = 12;
  const BiorthogonalSystem anharmonic =
      build_family(kgrs_test::anharmonic_spec(4.0, 12 + kClassificationPadding));
  const ClassificationReport anh = classify(anharmonic, parity, anh_options);
  CHECK(anh.verdict == Verdict::FirstTypeEvidence);
}

TEST_CASE("quasi-basis residuals for the gaussian family") {
  const BiorthogonalSystem system = build_family(kgrs_test::example1_spec(44));
  const GridFunction e0 = hermite_sample(0, system.grid);
  const QuasiBasisResiduals res = quasi_basis_residual(system, e0, e0, 40);
  REQUIRE(res.phi_first.size() == 41);
  CHECK(res.phi_first[0] == doctest::Approx(std::abs(inner(e0, e0))));
  CHECK(res.phi_first[40] < 1e-6);
  CHECK(res.psi_first[40] < 1e-6);
  for (int k = 0; k < 40; ++k) {
    CHECK(res.phi_first[k + 1] <= res.phi_first[k] + 1e-14);
  }

  const GridFunction e1 = hermite_sample(1, system.grid);
  const QuasiBasisResiduals odd = quasi_basis_residual(system, e0, e1, 40);
  for (double r : odd.phi_first) CHECK(r < 1e-10);

  // both orderings reach the same limit for a non-symmetric pair
  const GridFunction f =
      GridFunction::sample(system.grid, [](double x) { return Complex(std::exp(-0.5 * x * x)); });
  const GridFunction g =
      GridFunction::sample(system.grid, [](double x) { return Complex(std::exp(-x * x)); });
  const QuasiBasisResiduals mixed = quasi_basis_residual(system, f, g, 44);
  CHECK(mixed.phi_first[44] < 1e-6);
  CHECK(mixed.psi_first[44] < 1e-6);
  CHECK(std::abs(mixed.phi_first[44] - mixed.psi_first[44]) < 1e-6);

  CHECK_THROWS_AS(quasi_basis_residual(system, e0, e0, 45), ConfigError);
}

TEST_CASE("expansion in the -Q norm") {
  BiorthogonalSystem system = build_family(kgrs_test::shifted_spec(0.5, 10));
  const KreinStructure parity = KreinStructure::parity();
  certify_signs(system, parity);

  std::vector<Complex> unit(10, 0.0);
  unit[2] = 1.0;
  const ExpansionDiagnostics unit_diag = expansion_minus_q(system, parity, unit, 10);
  CHECK(unit_diag.max_coefficient_defect < 1e-7);
  for (int k = 3; k <= 10; ++k) CHECK(unit_diag.distances[k] < 1e-7);
  CHECK(unit_diag.distances[0] == doctest::Approx(1.0));

  const std::vector<Complex> zeros(10, 0.0);
  const ExpansionDiagnostics zero_diag = expansion_minus_q(system, parity, zeros, 6);
  for (double d : zero_diag.distances) CHECK(d == 0.0);

  std::mt19937 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> coeffs(10);
  for (Complex& c : coeffs) c = Complex(gauss(rng), gauss(rng));
  const ExpansionDiagnostics rand_diag = expansion_minus_q(system, parity, coeffs, 10);
  for (int k = 0; k < 10; ++k)
    CHECK(rand_diag.distances[k + 1] <= rand_diag.distances[k] + 1e-9);

  system.signs.clear();
  CHECK_THROWS_AS(expansion_minus_q(system, parity, coeffs, 10), Error);
}

TEST_CASE("extremality quotient") {
  const BiorthogonalSystem identity = identity_system(6, default_grid());
  std::vector<Complex> g(6, 0.0);
  g[0] = 1.0;
  CHECK(extremality_quotient(identity, g) == doctest::Approx(1.0).epsilon(1e-10));

  // scale invariance
  const BiorthogonalSystem gauss8 = build_family(kgrs_test::example1_spec(8));
  const QReconstruction recon8 = reconstruct_q(gauss8);
  std::vector<Complex> g8(8, 0.0);
  g8[7] = 1.0;
  const double base = extremality_quotient(recon8, g8);
  std::vector<Complex> scaled(8, 0.0);
  scaled[7] = Complex(0.0, 3.7);
  CHECK(extremality_quotient(recon8, scaled) == doctest::Approx(base).epsilon(1e-12));

  // oracle: the quotient is a variational minimum over the span (with the
  // g functional normalized); random span elements give upper bounds and the
  // minimizer c = G^{-1} g attains it
  std::mt19937 rng(53);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXcd g_onb = recon8.span.phi_coords * Eigen::VectorXcd::Unit(8, 7);
  const double g_scale = g_onb.squaredNorm();
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXcd c(8);
    for (int i = 0; i < 8; ++i) c(i) = Complex(dist(rng), dist(rng));
    const Complex overlap = g_onb.dot(c);  // <phi, g> in span coordinates
    if (std::abs(overlap) < 1e-9) continue;
    const double quotient =
        g_scale * std::real(c.dot(recon8.g_matrix * c)) / std::norm(overlap);
    CHECK(quotient >= base - 1e-9);
  }
  const Eigen::VectorXcd minimizer = recon8.g_matrix.llt().solve(g_onb);
  const double attained = g_scale * std::real(minimizer.dot(recon8.g_matrix * minimizer)) /
                          std::norm(g_onb.dot(minimizer));
  CHECK(attained == doctest::Approx(base).epsilon(1e-9));

  // nonincreasing under span enlargement, g fixed as the phi_7 functional
  double previous = std::numeric_limits<double>::infinity();
  for (int n : {8, 16, 24}) {
    const BiorthogonalSystem sys = build_family(kgrs_test::example1_spec(n));
    std::vector<Complex> gn(n, 0.0);
    gn[7] = 1.0;
    const double value = extremality_quotient(sys, gn);
    CHECK(value <= previous + 1e-10);
    previous = value;
  }

  const std::vector<Complex> zero(8, 0.0);
  CHECK_THROWS_AS(extremality_quotient(recon8, zero), ConfigError);
}
