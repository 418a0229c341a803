#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KGRS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("kgrs_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("verify certifies the shifted family") {
  TempDir dir("verify_shifted");
  CHECK(run_cli("verify --family shifted --a 0.5 --n 12 --out " + dir.path.string()) == 0);
  const std::string biorth = slurp(dir.path / "biorthogonality.json");
  CHECK(biorth.find("\"certified\":true") != std::string::npos);
  CHECK(fs::exists(dir.path / "gram.json"));
  CHECK(fs::exists(dir.path / "gram.csv"));
  CHECK(fs::exists(dir.path / "indefinite_gram.json"));
  CHECK(fs::exists(dir.path / "quasi_basis.csv"));
}

TEST_CASE("verify flags the example-1 family when the J check is requested") {
  TempDir dir("verify_ex1");
  CHECK(run_cli("verify --family example1 --n 12 --check-j --out " + dir.path.string()) == 2);
  // reports are still written and show |[phi_0, phi_0]| = sqrt(2/3)
  const std::string gram = slurp(dir.path / "indefinite_gram.json");
  CHECK(gram.find("0.8164965809277") != std::string::npos);
  const std::string biorth = slurp(dir.path / "biorthogonality.json");
  CHECK(biorth.find("\"certified\":false") != std::string::npos);
}

TEST_CASE("config errors exit with status 1") {
  TempDir dir("bad_config");
  CHECK(run_cli("verify --family shifted --n 0 --out " + dir.path.string()) == 1);
  CHECK(run_cli("verify --family nosuch --n 4 --out " + dir.path.string()) == 1);
  CHECK(run_cli("classify --family shifted --grid-m 101 --n 4 --out " + dir.path.string()) == 1);
  CHECK(run_cli("spectrum --family shifted --a 0 --n 4 --out " + dir.path.string()) == 1);
}

TEST_CASE("classify exit codes follow the verdicts") {
  TempDir dir("classify");
  CHECK(run_cli("classify --family shifted --a 0.5 --n 8 --out " + dir.path.string()) == 0);
  std::string report = slurp(dir.path / "classification.json");
  CHECK(report.find("\"verdict\":\"FirstTypeEvidence\"") != std::string::npos);
  CHECK(report.find("\"parities\":[1,-1,1,-1,1,-1,1,-1]") != std::string::npos);

  CHECK(run_cli("classify --family example1 --n 8 --out " + dir.path.string()) == 3);
  report = slurp(dir.path / "classification.json");
  CHECK(report.find("\"verdict\":\"NotJOrthonormal\"") != std::string::npos);

  CHECK(run_cli("classify --family anharmonic --beta 4 --n 6 --out " + dir.path.string()) == 0);
  report = slurp(dir.path / "classification.json");
  CHECK(report.find("\"verdict\":\"FirstTypeEvidence\"") != std::string::npos);

  // an unpadded section cannot support the first-type diagnostics
  CHECK(run_cli("classify --family shifted --a 0.5 --n 15 --buffer 0 --out " +
                dir.path.string()) == 4);
  report = slurp(dir.path / "classification.json");
  CHECK(report.find("\"verdict\":\"Inconclusive\"") != std::string::npos);
}

TEST_CASE("verify certifies the anharmonic family") {
  TempDir dir("verify_anh");
  CHECK(run_cli("verify --family anharmonic --beta 4 --n 8 --out " + dir.path.string()) == 0);
  const std::string biorth = slurp(dir.path / "biorthogonality.json");
  CHECK(biorth.find("\"certified\":true") != std::string::npos);
}

TEST_CASE("classify can dump the finite-section reconstruction") {
  TempDir dir("dump_recon");
  CHECK(run_cli("classify --family shifted --a 0.5 --n 4 --dump-reconstruction --out " +
                dir.path.string()) == 0);
  const std::string recon = slurp(dir.path / "reconstruction.json");
  CHECK(recon.find("\"g_matrix\":[[") != std::string::npos);
  CHECK(recon.find("\"q_matrix\":[[") != std::string::npos);
  CHECK(recon.find("\"gram_condition\":") != std::string::npos);
}

TEST_CASE("spectrum recovers the family eigenvalues") {
  TempDir dir("spectrum");
  CHECK(run_cli("spectrum --family example1 --n 6 --out " + dir.path.string()) == 0);
  const std::string report = slurp(dir.path / "spectrum.json");
  CHECK(report.find("\"lambda_source\":\"paper-default\"") != std::string::npos);
  CHECK(report.find("[0.5,0]") != std::string::npos);
  CHECK(report.find("[5.5,0]") != std::string::npos);
  CHECK(report.find("\"h_psi_phi\"") != std::string::npos);
}

TEST_CASE("spectrum accepts an explicit lambda file") {
  TempDir dir("spectrum_explicit");
  const fs::path lambdas = dir.path / "lambdas.csv";
  {
    std::ofstream out(lambdas);
    for (int i = 0; i < 6; ++i) out << "0\n";
  }
  CHECK(run_cli("spectrum --family example1 --n 6 --lambdas " + lambdas.string() + " --out " +
                dir.path.string()) == 0);
  const std::string report = slurp(dir.path / "spectrum.json");
  CHECK(report.find("\"lambda_source\":\"explicit\"") != std::string::npos);
  CHECK(report.find("\"eigenvalues\":[[0,") != std::string::npos);

  // wrong length is a config error
  CHECK(run_cli("spectrum --family example1 --n 5 --lambdas " + lambdas.string() + " --out " +
                dir.path.string()) == 1);
}

TEST_CASE("identical configs produce byte-identical reports") {
  TempDir dir_a("det_a");
  TempDir dir_b("det_b");
  const std::string args = "verify --family shifted --a 0.5 --n 10 --out ";
  REQUIRE(run_cli(args + dir_a.path.string()) == 0);
  REQUIRE(run_cli(args + dir_b.path.string()) == 0);
  for (const char* name :
       {"biorthogonality.json", "gram.json", "gram.csv", "indefinite_gram.json",
        "indefinite_gram.csv", "quasi_basis.csv"}) {
    CHECK(slurp(dir_a.path / name) == slurp(dir_b.path / name));
  }
}

TEST_CASE("config file values are picked up and flags override") {
  TempDir dir("config_file");
  const fs::path cfg = dir.path / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "[verify]\n";
    out << "family=example1\n";
    out << "n=6\n";
  }
  CHECK(run_cli("--config " + cfg.string() + " verify --out " + dir.path.string()) == 0);
  const std::string gram = slurp(dir.path / "gram.json");
  CHECK(gram.find("\"family\":\"example1\"") != std::string::npos);
  CHECK(gram.find("\"n\":6") != std::string::npos);

  // command line wins over the config file
  CHECK(run_cli("--config " + cfg.string() + " verify --n 4 --out " + dir.path.string()) == 0);
  const std::string gram2 = slurp(dir.path / "gram.json");
  CHECK(gram2.find("\"n\":4") != std::string::npos);
}
