// End-to-end checks of the gsbp binary: golden rows, formats, exit codes,
// config precedence, reproducibility.  The binary path comes in through
// GSBP_CLI_PATH at compile time.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

int g_counter = 0;

std::string temp_path(const std::string& suffix) {
  return "/tmp/gsbp_cli_" + std::to_string(::getpid()) + "_" +
         std::to_string(g_counter++) + suffix;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out = temp_path(".out");
  const std::string err = temp_path(".err");
  std::string cmd;
  if (!env.empty()) cmd += "env " + env + " ";
  cmd += std::string(GSBP_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  std::remove(out.c_str());
  std::remove(err.c_str());
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int column_of(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TEST_CASE("weights prints the golden geometric rows") {
  const RunResult r = run_cli("weights --family 2 --p 0.5 --count 3");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  const int wcol = column_of(rows[0], "weight");
  const int tcol = column_of(rows[0], "tail");
  const int ccol = column_of(rows[0], "total_check");
  REQUIRE(wcol >= 0);
  CHECK(std::stod(rows[1][wcol]) == 0.5);
  CHECK(std::stod(rows[2][wcol]) == 0.25);
  CHECK(std::stod(rows[3][wcol]) == 0.125);
  // tail comes from exp(J log1p(-p)), exact only to rounding
  CHECK(std::stod(rows[3][tcol]) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(std::stod(rows[3][ccol]) == 1.0);
}

TEST_CASE("weights handles the three-rod family") {
  const RunResult r = run_cli("weights --family 3 --p 0.5 --count 2");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  const int wcol = column_of(rows[0], "weight");
  CHECK(std::stod(rows[1][wcol]) == 0.375);
  CHECK(std::stod(rows[2][wcol]) == 0.25);
}

TEST_CASE("weights total_check stays at one across rows") {
  const RunResult r = run_cli("weights --family 4 --p 0.3 --count 25");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 26);
  const int ccol = column_of(rows[0], "total_check");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][ccol]) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("doubles render with seventeen significant digits") {
  const RunResult r = run_cli("weights --family 2 --p 0.3333333333333333 --count 1");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  const int wcol = column_of(rows[0], "weight");
  CHECK(rows[1][wcol] == "0.33333333333333331");
}

TEST_CASE("json output parses and matches the csv values") {
  const RunResult r =
      run_cli("weights --family 3 --p 0.25 --count 4 --format json");
  REQUIRE(r.exit_code == 0);
  const auto arr = nlohmann::json::parse(r.out);
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 4);
  CHECK(arr[0]["j"].get<long long>() == 1);
  CHECK(arr[0]["weight"].get<double>() == doctest::Approx(0.15625).epsilon(1e-15));
  CHECK(arr[3].contains("tail"));
}

TEST_CASE("expect respects the Poissonization bound and exits zero") {
  const RunResult r =
      run_cli("expect --family 2 --p 0.5 --n-grid 10,100,1000 --eps 1e-9");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  const int scol = column_of(rows[0], "within_bound");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][scol] == "pass");
}

TEST_CASE("expect averages over a prior") {
  const RunResult r =
      run_cli("expect --family 3 --prior loggamma:1 --n-grid 50 --eps 1e-7");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  const int ecol = column_of(rows[0], "expected_Kn");
  CHECK(std::stod(rows[1][ecol]) > 1.0);
}

TEST_CASE("expand emits labeled terms and a normalized residual") {
  const RunResult r =
      run_cli("expand --proposition fixed-p --p 0.5 --n-grid 1000 --eps 1e-9");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(column_of(rows[0], "predicted_total") >= 0);
  CHECK(column_of(rows[0], "normalized_residual") >= 0);
  CHECK(column_of(rows[0], "method") >= 0);
}

TEST_CASE("expand covers the tail and mean routes") {
  const RunResult tail = run_cli("expand --proposition uniform-s2 --x-grid 1e-6");
  REQUIRE(tail.exit_code == 0);
  const RunResult mean =
      run_cli("expand --proposition loggamma-m --m 1 --t-grid 1e8 --eps 1e-7");
  REQUIRE(mean.exit_code == 0);
  const auto rows = parse_csv(mean.out);
  REQUIRE(rows.size() == 2);
  const int mcol = column_of(rows[0], "method");
  CHECK(rows[1][mcol] == "poissonized-quadrature");
}

TEST_CASE("mc agrees with quadrature and reproduces bit for bit") {
  const std::string f1 = temp_path(".csv");
  const std::string f2 = temp_path(".csv");
  const std::string f3 = temp_path(".csv");
  const std::string args =
      "mc --prior uniform --family 2 --n 200 --reps 400 --eps 1e-7";
  const RunResult r1 = run_cli(args + " --seed 7 --out " + f1);
  const RunResult r2 = run_cli(args + " --seed 7 --out " + f2);
  const RunResult r3 = run_cli(args + " --seed 8 --out " + f3);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  REQUIRE(r3.exit_code == 0);
  const std::string c1 = slurp(f1);
  CHECK(c1 == slurp(f2));
  CHECK(c1 != slurp(f3));
  const auto rows = parse_csv(c1);
  REQUIRE(rows.size() == 2);
  const int scol = column_of(rows[0], "within_three_se");
  CHECK(rows[1][scol] == "pass");
  std::remove(f1.c_str());
  std::remove(f2.c_str());
  std::remove(f3.c_str());
}

TEST_CASE("verify passes at unit tolerance scale") {
  const RunResult r = run_cli("verify", "NO_COLOR=1");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() > 5);
  const int scol = column_of(rows[0], "status");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][scol] == "pass");
  CHECK(r.err.find("all checks passed") != std::string::npos);
  CHECK(r.err.find('\x1b') == std::string::npos);
}

TEST_CASE("verify with zero tolerance scale names the failing check") {
  const RunResult r = run_cli("verify --tol-scale 0", "NO_COLOR=1");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("FAILED: gamma-identity") != std::string::npos);
  CHECK(r.err.find('\x1b') == std::string::npos);
  CHECK(r.out.find("fail") != std::string::npos);
}

TEST_CASE("usage errors exit with code two") {
  CHECK(run_cli("weights --p 0.5 --no-such-flag 3").exit_code == 2);
  CHECK(run_cli("weights").exit_code == 2);  // --p is required
  CHECK(run_cli("").exit_code == 2);         // subcommand is required
  CHECK(run_cli("expand --proposition bogus --t-grid 10").exit_code == 2);
  CHECK(run_cli("expect --family 2 --p 0.5 --n-grid 100,10").exit_code == 2);
}

TEST_CASE("config file supplies defaults and the command line wins") {
  const std::string cfg = temp_path(".ini");
  spit(cfg, "[weights]\np=0.25\ncount=2\n");
  const RunResult base = run_cli("--config " + cfg + " weights");
  REQUIRE(base.exit_code == 0);
  auto rows = parse_csv(base.out);
  REQUIRE(rows.size() == 3);
  const int wcol = column_of(rows[0], "weight");
  CHECK(std::stod(rows[1][wcol]) == 0.25);

  const RunResult over = run_cli("--config " + cfg + " weights --p 0.5");
  REQUIRE(over.exit_code == 0);
  rows = parse_csv(over.out);
  REQUIRE(rows.size() == 3);  // count still comes from the file
  CHECK(std::stod(rows[1][wcol]) == 0.5);
  std::remove(cfg.c_str());
}
