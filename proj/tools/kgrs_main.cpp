// kgrs: constructs biorthogonal function systems in Hilbert and Krein spaces,
// reconstructs their metric operators, classifies them, and verifies the
// defining identities at finite truncation. Reports are deterministic:
// identical configs produce byte-identical files.

#include <CLI11.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kgrs/errors.hpp"
#include "kgrs/grid_ops.hpp"
#include "kgrs/grs_engine.hpp"
#include "kgrs/hamiltonians.hpp"
#include "kgrs/krein.hpp"
#include "kgrs/report_io.hpp"

namespace {

using kgrs::Complex;

struct RunConfig {
  std::string command;
  std::string family = "shifted";
  double a = 0.5;
  double beta = 4.0;
  std::string p_preset = "default";
  int n = 12;
  double grid_l = 0.0;  // 0: family default (shifted/example1: 14, anharmonic: 10)
  int grid_m = 0;       // 0: family default (shifted/example1: 1024, anharmonic: 512)
  double tol_cert = 1e-8;
  double tol_class = 1e-4;
  int buffer = kgrs::kClassificationPadding;
  std::string out_dir = ".";
  std::string lambdas_file;
  bool check_j = false;
  bool dump_reconstruction = false;
};

void resolve_defaults(RunConfig& config) {
  const bool anharmonic = config.family == "anharmonic";
  if (config.grid_l == 0.0) config.grid_l = anharmonic ? 10.0 : 14.0;
  if (config.grid_m == 0) config.grid_m = anharmonic ? 512 : 1024;
}

void validate(const RunConfig& config) {
  if (config.n < 1) throw kgrs::ConfigError("--n must be >= 1");
  if (config.grid_m < 2 || config.grid_m % 2 != 0)
    throw kgrs::ConfigError("--grid-m must be positive and even");
  if (config.grid_l <= 0.0) throw kgrs::ConfigError("--grid-l must be positive");
  if (config.tol_cert <= 0.0 || config.tol_class <= 0.0)
    throw kgrs::ConfigError("tolerances must be positive");
  if (config.buffer < 0) throw kgrs::ConfigError("--buffer must be >= 0");
  if (config.family != "shifted" && config.family != "example1" &&
      config.family != "anharmonic")
    throw kgrs::ConfigError("--family must be shifted, example1 or anharmonic");
  if (config.family == "shifted" && config.a == 0.0)
    throw kgrs::ConfigError("--a must be nonzero for the shifted family");
  if (config.family == "anharmonic" && !(config.beta > 2.0))
    throw kgrs::ConfigError("--beta must be > 2");
  if (config.family == "anharmonic" && config.p_preset != "default")
    throw kgrs::ConfigError("unknown p preset '" + config.p_preset + "'");
}

kgrs::FamilySpec make_spec(const RunConfig& config, int truncation) {
  kgrs::FamilySpec spec;
  spec.truncation = truncation;
  spec.grid = kgrs::Grid(config.grid_l, config.grid_m);
  if (config.family == "shifted")
    spec.kind = kgrs::ShiftedOscillator{config.a};
  else if (config.family == "example1")
    spec.kind = kgrs::GaussianDeformation{};
  else
    spec.kind = kgrs::default_anharmonic(config.beta);
  return spec;
}

void echo_config(kgrs::io::JsonWriter& json, const RunConfig& config) {
  json.key("config").begin_object();
  json.key("command").value(config.command);
  json.key("family").value(config.family);
  if (config.family == "shifted") json.key("a").value(config.a);
  if (config.family == "anharmonic") {
    json.key("beta").value(config.beta);
    json.key("p").value(config.p_preset);
  }
  json.key("n").value(config.n);
  json.key("grid_l").value(config.grid_l);
  json.key("grid_m").value(config.grid_m);
  json.key("tol_cert").value(config.tol_cert);
  json.key("tol_class").value(config.tol_class);
  if (config.command == "classify") {
    json.key("buffer").value(config.buffer);
    json.key("dump_reconstruction").value(config.dump_reconstruction);
  }
  if (config.command == "verify") json.key("check_j").value(config.check_j);
  if (!config.lambdas_file.empty()) json.key("lambdas").value(config.lambdas_file);
  json.end_object();
}

void write_gram_json(const std::filesystem::path& path, const RunConfig& config,
                     const kgrs::GramReport& report) {
  kgrs::io::JsonWriter json;
  json.begin_object();
  echo_config(json, config);
  json.key("family").value(report.family);
  json.key("N").value(report.truncation);
  json.key("tolerance").value(report.tolerance);
  json.key("gram").begin_array();
  for (const Complex& v : report.gram) json.complex_value(v);
  json.end_array();
  json.key("max_offdiag").value(report.max_offdiag);
  json.key("diag_signs").begin_array();
  for (int s : report.diag_signs) json.value(s);
  json.end_array();
  json.end_object();
  kgrs::io::write_file_atomic(path, json.take() + "\n");
}

void write_gram_csv(const std::filesystem::path& path, const kgrs::GramReport& report) {
  std::string out = "# n,m,re,im\n";
  const int n = report.truncation;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex v = report.gram[static_cast<std::size_t>(i) * n + j];
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             kgrs::io::format_double(v.real()) + "," + kgrs::io::format_double(v.imag()) + "\n";
    }
  kgrs::io::write_file_atomic(path, out);
}

std::vector<Complex> load_lambdas(const std::string& file, int expected) {
  std::ifstream in(file);
  if (!in) throw kgrs::ConfigError("cannot open lambda file '" + file + "'");
  std::vector<Complex> lambdas;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double re = 0.0, im = 0.0;
    const int got = std::sscanf(line.c_str(), "%lf,%lf", &re, &im);
    if (got < 1) throw kgrs::ConfigError("malformed lambda row '" + line + "'");
    lambdas.emplace_back(re, got == 2 ? im : 0.0);
  }
  if (static_cast<int>(lambdas.size()) != expected)
    throw kgrs::ConfigError("lambda file has " + std::to_string(lambdas.size()) +
                            " entries, expected " + std::to_string(expected));
  return lambdas;
}

int cmd_verify(RunConfig config) {
  config.command = "verify";
  resolve_defaults(config);
  validate(config);
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  const kgrs::BiorthogonalSystem system =
      kgrs::build_family(make_spec(config, config.n), config.tol_cert);
  const kgrs::KreinStructure parity = kgrs::KreinStructure::parity();

  bool certified = system.biorth_defect <= config.tol_cert;

  const kgrs::GramReport gram = kgrs::ordinary_gram_report(system, config.tol_cert);
  const kgrs::GramReport indefinite = kgrs::indefinite_gram_report(system, parity, config.tol_cert);
  write_gram_json(out_dir / "gram.json", config, gram);
  write_gram_csv(out_dir / "gram.csv", gram);
  write_gram_json(out_dir / "indefinite_gram.json", config, indefinite);
  write_gram_csv(out_dir / "indefinite_gram.csv", indefinite);

  double j_diag_deviation = 0.0;
  if (config.check_j) {
    const kgrs::JOrthonormalityCheck check = kgrs::j_orthonormality_check(system.phi, parity);
    j_diag_deviation = check.max_diag_deviation;
    if (check.max_diag_deviation > config.tol_cert || check.max_offdiag > config.tol_cert)
      certified = false;
  }

  {
    kgrs::io::JsonWriter json;
    json.begin_object();
    echo_config(json, config);
    json.key("family").value(system.family);
    json.key("N").value(system.size());
    json.key("biorthogonality_defect").value(system.biorth_defect);
    json.key("tolerance").value(config.tol_cert);
    if (config.check_j) json.key("j_diag_deviation").value(j_diag_deviation);
    json.key("certified").value(certified);
    json.end_object();
    kgrs::io::write_file_atomic(out_dir / "biorthogonality.json", json.take() + "\n");
  }

  {
    const kgrs::GridFunction probe = kgrs::hermite_sample(0, system.grid);
    const kgrs::QuasiBasisResiduals residuals =
        kgrs::quasi_basis_residual(system, probe, probe, system.size());
    std::string csv = "# k,r_phi_psi,r_psi_phi\n";
    for (std::size_t k = 0; k < residuals.phi_first.size(); ++k)
      csv += std::to_string(k) + "," + kgrs::io::format_double(residuals.phi_first[k]) + "," +
             kgrs::io::format_double(residuals.psi_first[k]) + "\n";
    kgrs::io::write_file_atomic(out_dir / "quasi_basis.csv", csv);
  }

  return certified ? 0 : 2;
}

void write_matrix(kgrs::io::JsonWriter& json, const Eigen::MatrixXcd& m) {
  json.begin_array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) json.complex_value(m(i, j));
  json.end_array();
}

void write_reconstruction_json(const std::filesystem::path& path, const RunConfig& config,
                               const kgrs::BiorthogonalSystem& system,
                               const kgrs::QReconstruction& recon) {
  kgrs::io::JsonWriter json;
  json.begin_object();
  echo_config(json, config);
  json.key("family").value(system.family);
  json.key("N").value(system.size());
  json.key("L").value(config.grid_l);
  json.key("M").value(config.grid_m);
  json.key("gram_condition").value(recon.span.condition);
  json.key("asymmetry_norm").value(recon.asymmetry_norm);
  json.key("e_orthonormality_defect").value(recon.e_orthonormality_defect);
  json.key("g_matrix");
  write_matrix(json, recon.g_matrix);
  json.key("q_matrix");
  write_matrix(json, recon.q_matrix);
  json.end_object();
  kgrs::io::write_file_atomic(path, json.take() + "\n");
}

int cmd_classify(RunConfig config) {
  config.command = "classify";
  resolve_defaults(config);
  validate(config);
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  const kgrs::BiorthogonalSystem system =
      kgrs::build_family(make_spec(config, config.n + config.buffer), config.tol_cert);
  kgrs::ClassifyOptions options;
  options.certification_tol = config.tol_cert;
  options.anticommutator_tol = config.tol_class;
  options.j_eigen_tol = config.tol_class / 10.0;
  options.report_count = config.n;
  const kgrs::ClassificationReport report =
      kgrs::classify(system, kgrs::KreinStructure::parity(), options);

  if (config.dump_reconstruction && report.verdict != kgrs::Verdict::NotJOrthonormal)
    write_reconstruction_json(out_dir / "reconstruction.json", config, system,
                              kgrs::reconstruct_q(system));

  kgrs::io::JsonWriter json;
  json.begin_object();
  echo_config(json, config);
  json.key("family").value(system.family);
  json.key("N").value(report.truncation);
  json.key("working_modes").value(report.working_modes);
  json.key("L").value(config.grid_l);
  json.key("M").value(config.grid_m);
  json.key("verdict").value(kgrs::to_string(report.verdict));
  json.key("anticommutator_residual").value(report.anticommutator_residual);
  json.key("j_eigen_residuals").begin_array();
  for (double r : report.j_eigen_residuals) json.value(r);
  json.end_array();
  json.key("parities").begin_array();
  for (int p : report.predicted_parities) json.value(p);
  json.end_array();
  json.key("indefinite_diag").begin_array();
  for (double d : report.indefinite_diag) json.value(d);
  json.end_array();
  json.key("max_diag_deviation").value(report.max_diag_deviation);
  json.key("max_offdiag").value(report.max_offdiag);
  json.key("tolerances").begin_object();
  json.key("certification").value(options.certification_tol);
  json.key("anticommutator").value(options.anticommutator_tol);
  json.key("j_eigen").value(options.j_eigen_tol);
  json.end_object();
  json.end_object();
  kgrs::io::write_file_atomic(out_dir / "classification.json", json.take() + "\n");

  switch (report.verdict) {
    case kgrs::Verdict::FirstTypeEvidence: return 0;
    case kgrs::Verdict::NotJOrthonormal: return 3;
    case kgrs::Verdict::Inconclusive: return 4;
  }
  return 4;
}

void write_spectrum_section(kgrs::io::JsonWriter& json, const kgrs::SpectrumReport& report) {
  json.begin_object();
  json.key("label").value(report.label);
  json.key("N").value(report.truncation);
  json.key("eigenvalues").begin_array();
  for (const Complex& v : report.eigenvalues) json.complex_value(v);
  json.end_array();
  json.key("residuals").begin_array();
  for (double r : report.residuals) json.value(r);
  json.end_array();
  json.key("grid").begin_object();
  json.key("L").value(report.grid.half_width);
  json.key("M").value(report.grid.point_count);
  json.end_object();
  json.end_object();
}

int cmd_spectrum(RunConfig config) {
  config.command = "spectrum";
  resolve_defaults(config);
  validate(config);
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  const kgrs::BiorthogonalSystem system =
      kgrs::build_family(make_spec(config, config.n), config.tol_cert);
  const bool certified = system.biorth_defect <= config.tol_cert;

  std::vector<Complex> lambdas;
  if (!config.lambdas_file.empty()) {
    lambdas = load_lambdas(config.lambdas_file, system.size());
  } else {
    lambdas.reserve(system.size());
    for (double v : system.default_lambdas) lambdas.emplace_back(v, 0.0);
  }

  const kgrs::Ne1Report report = kgrs::build_truncated_ne1(system, lambdas);

  kgrs::io::JsonWriter json;
  json.begin_object();
  echo_config(json, config);
  json.key("family").value(system.family);
  json.key("biorthogonality_defect").value(system.biorth_defect);
  json.key("certified").value(certified);
  json.key("lambda_source").value(config.lambdas_file.empty() ? "paper-default" : "explicit");
  json.key("lambdas").begin_array();
  for (const Complex& v : lambdas) json.complex_value(v);
  json.end_array();
  json.key("h_phi_psi");
  write_spectrum_section(json, report.h_phi_psi);
  json.key("h_psi_phi");
  write_spectrum_section(json, report.h_psi_phi);
  json.end_object();
  kgrs::io::write_file_atomic(out_dir / "spectrum.json", json.take() + "\n");

  return certified ? 0 : 2;
}

void add_common_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--family", config.family, "shifted | example1 | anharmonic");
  cmd->add_option("--a", config.a, "shift parameter of the shifted oscillator");
  cmd->add_option("--beta", config.beta, "anharmonic exponent (> 2)");
  cmd->add_option("--p", config.p_preset, "deformation preset for the anharmonic family");
  cmd->add_option("--n", config.n, "truncation order N");
  cmd->add_option("--grid-l", config.grid_l, "grid half width L");
  cmd->add_option("--grid-m", config.grid_m, "grid point count M (even)");
  cmd->add_option("--tol-cert", config.tol_cert, "certification tolerance");
  cmd->add_option("--tol-class", config.tol_class,
                  "classification threshold (anticommutator norm; per-mode threshold is 1/10 of it)");
  cmd->add_option("--out", config.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biorthogonal function systems in Krein spaces: certification, metric-operator "
               "reconstruction, classification and truncated spectra"};
  app.set_config("--config", "", "flat key=value config file; flags override");
  app.require_subcommand(1);

  RunConfig config;
  CLI::App* verify = app.add_subcommand("verify", "biorthogonality and Gram certification");
  add_common_options(verify, config);
  verify->add_flag("--check-j", config.check_j, "also require J-orthonormality");

  CLI::App* classify = app.add_subcommand("classify", "first/second type classification");
  add_common_options(classify, config);
  classify->add_option("--buffer", config.buffer,
                       "extra working modes beyond N for converged diagnostics");
  classify->add_flag("--dump-reconstruction", config.dump_reconstruction,
                     "write the finite-section G and Q matrices (reconstruction.json)");

  CLI::App* spectrum = app.add_subcommand("spectrum", "truncated dual-pair operator spectra");
  add_common_options(spectrum, config);
  spectrum->add_option("--lambdas", config.lambdas_file,
                       "CSV file of eigenvalues re[,im]; default is the family list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return cmd_verify(config);
    if (classify->parsed()) return cmd_classify(config);
    if (spectrum->parsed()) return cmd_spectrum(config);
  } catch (const kgrs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const kgrs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
