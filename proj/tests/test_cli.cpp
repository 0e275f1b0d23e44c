#include "fhg/cli.hpp"
#include "fhg/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fhg;
namespace fs = std::filesystem;

namespace {

fs::path unique_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("fhg_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path path = dir / "run.cfg";
  std::ofstream out(path);
  out << body;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Pulls one named column out of a CSV document.
std::vector<std::string> csv_column(const std::string& text, const std::string& column) {
  std::istringstream is(text);
  std::string line;
  REQUIRE(std::getline(is, line));
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header.push_back(cell);
  }
  int idx = -1;
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) idx = static_cast<int>(i);
  REQUIRE(idx >= 0);
  std::vector<std::string> out;
  while (std::getline(is, line)) {
    std::istringstream r(line);
    std::string cell;
    for (int i = 0; i <= idx; ++i) std::getline(r, cell, ',');
    out.push_back(cell);
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto dir = unique_dir("config");
  SUBCASE("valid config resolves with defaults") {
    const auto cfg_path = write_config(dir,
                                       "# sample\n"
                                       "ts = [-0.6, 0.8]\n"
                                       "gammas = [0.5, 1.5]\n");
    const RunConfig cfg = load_config(cfg_path.string(), {});
    CHECK(cfg.ts.size() == 2);
    CHECK(cfg.precision_bits == 256);
    CHECK(cfg.n_max == 12);
    CHECK(cfg.suite == "all");
    CHECK(cfg.quad_tol == Real("1e-30"));
  }
  SUBCASE("overrides win") {
    const auto cfg_path = write_config(dir, "ts = [0.0]\ngammas = [1.0]\nn_max = 9\n");
    const RunConfig cfg = load_config(cfg_path.string(), {"n_max=4"});
    CHECK(cfg.n_max == 4);
  }
  SUBCASE("garbage is rejected") {
    const auto cfg_path = write_config(dir, "ts = [0.0\ngammas = [1.0]\n");
    CHECK_THROWS_AS(load_config(cfg_path.string(), {}), BadConfig);
    const auto cfg2 = write_config(dir, "ts = [0.0]\ngammas = [oops]\n");
    CHECK_THROWS_AS(load_config(cfg2.string(), {}), BadConfig);
    const auto cfg3 = write_config(dir, "ts = [0.0]\ngammas = [-2.0]\n");
    CHECK_THROWS_AS(load_config(cfg3.string(), {}), ExponentOutOfRange);
  }
  SUBCASE("grid must keep singularities ordered") {
    const auto cfg_path = write_config(dir,
                                       "ts = [-0.6, 0.8]\ngammas = [1, 1]\n"
                                       "grid_t1 = [0.5, 1.5, 3]\n");
    const RunConfig cfg = load_config(cfg_path.string(), {});
    CHECK_THROWS_AS(run_cli({"compute", "--config", cfg_path.string(), "--out", dir.string()}),
                    BadConfig);
  }
}

TEST_CASE("compute command") {
  const auto dir = unique_dir("compute");
  SUBCASE("gaussian reduction emits beta = n/2") {
    const auto cfg = write_config(dir,
                                  "ts = [0.0]\ngammas = [0.0]\nn_max = 6\nformat = csv\n");
    const int rc = run_cli({"compute", "--config", cfg.string(), "--out", dir.string()});
    REQUIRE(rc == 0);
    const std::string text = slurp(dir / "compute.csv");
    const auto beta = csv_column(text, "beta");
    const auto n_col = csv_column(text, "n");
    REQUIRE(beta.size() == 7);  // single point, n = 0..6
    set_working_precision(256);
    for (size_t i = 0; i < beta.size(); ++i) {
      const Real expected = Real(std::stoi(n_col[i])) / 2;
      CHECK(abs(Real(beta[i]) - expected) < Real("1e-25") * max(expected, Real(1)));
    }
  }
  SUBCASE("grid sweep emits one block per point") {
    const auto cfg = write_config(dir,
                                  "ts = [0.0]\ngammas = [1.0]\nn_max = 2\nformat = csv\n"
                                  "grid_t1 = [-0.5, 0.5, 3]\n");
    REQUIRE(run_cli({"compute", "--config", cfg.string(), "--out", dir.string()}) == 0);
    const auto points = csv_column(slurp(dir / "compute.csv"), "point");
    CHECK(points.size() == 9);  // 3 grid points x (n_max + 1)
  }
  SUBCASE("malformed config exits 1") {
    const auto cfg = write_config(dir, "nonsense\n");
    CHECK(run_cli({"compute", "--config", cfg.string()}) == 1);
    CHECK(run_cli({"compute", "--config", (dir / "missing.cfg").string()}) == 1);
  }
}

TEST_CASE("verify command") {
  const auto dir = unique_dir("verify");
  SUBCASE("suite filtering and success") {
    const auto cfg = write_config(dir,
                                  "ts = [0.5]\ngammas = [1.0]\nn_max = 4\nsuite = orthopoly\n");
    REQUIRE(run_cli({"verify", "--config", cfg.string(), "--out", dir.string()}) == 0);
    const std::string text = slurp(dir / "verify.json");
    CHECK(text.find("\"orthogonality\"") != std::string::npos);
    CHECK(text.find("\"lowering\"") == std::string::npos);  // ladder suite not selected
    CHECK(text.find("\"all_pass\": true") != std::string::npos);
  }
  SUBCASE("zero report tolerance forces failure with exit 2") {
    const auto cfg = write_config(dir,
                                  "ts = [0.5]\ngammas = [1.0]\nn_max = 3\nsuite = orthopoly\n"
                                  "report_tol = 0\n");
    CHECK(run_cli({"verify", "--config", cfg.string(), "--out", dir.string()}) == 2);
    CHECK(slurp(dir / "verify.json").find("\"all_pass\": false") != std::string::npos);
  }
  SUBCASE("byte-identical reruns") {
    const auto cfg = write_config(dir,
                                  "ts = [-0.6, 0.8]\ngammas = [0.5, 1.5]\nn_max = 3\n"
                                  "suite = orthopoly\n");
    const auto d1 = unique_dir("verify_run1");
    const auto d2 = unique_dir("verify_run2");
    REQUIRE(run_cli({"verify", "--config", cfg.string(), "--out", d1.string()}) == 0);
    REQUIRE(run_cli({"verify", "--config", cfg.string(), "--out", d2.string()}) == 0);
    CHECK(slurp(d1 / "verify.json") == slurp(d2 / "verify.json"));
  }
}

TEST_CASE("iterate command") {
  const auto dir = unique_dir("iterate");
  const auto cfg = write_config(dir, "ts = [0.5]\ngammas = [1.0]\nn_max = 6\nformat = csv\n");
  REQUIRE(run_cli({"iterate", "--config", cfg.string(), "--out", dir.string()}) == 0);
  const auto devs = csv_column(slurp(dir / "iterate.csv"), "R_reldev");
  REQUIRE(devs.size() == 7);
  set_working_precision(256);
  for (const auto& d : devs) CHECK(Real(d) <= Real("1e-12"));
}

TEST_CASE("cli surface") {
  CHECK(run_cli({}) == 1);                   // missing subcommand
  CHECK(run_cli({"frobnicate"}) == 1);       // unknown subcommand
  CHECK(run_cli({"verify"}) == 1);           // missing --config
}
