#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "replilearn/cli.hpp"
#include "replilearn/config.hpp"
#include "replilearn/experiments.hpp"

using namespace replilearn;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::size_t start = 0;
  for (;;) {
    auto c = line.find(',', start);
    v.push_back(line.substr(start, c == std::string::npos ? std::string::npos : c - start));
    if (c == std::string::npos) return v;
    start = c + 1;
  }
}

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/replilearn_test_" + name;
  std::ofstream(path) << text;
  return path;
}

const std::string kHeader =
    "experiment_id,subcommand,d,alpha,beta,rho,gamma,n_trials,seed,samples_labeled,samples_shared,"
    "est_exact_repl,est_approx_repl,est_pointwise_max,excess_err_p90,opt,ci_lo,ci_hi";
}  // namespace

TEST_CASE("config: parsing rules") {
  auto c = Config::parse("# comment\n a = 1.5 \n\nb=x # trailing\nlist = 1, 2,3\nn=12\na=2\n");
  CHECK(c.num("a", 0) == 2.0);
  CHECK(c.str("b", "") == "x");
  CHECK(c.list("list", {}) == std::vector<double>{1, 2, 3});
  CHECK(c.count("n", 0) == 12);
  CHECK(c.num("missing", 7) == 7);
  CHECK_THROWS_AS(Config::parse("novalue\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("=3\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("a=zz\n").num("a", 0), ConfigError);
  CHECK_THROWS_AS(Config::parse("a=-3\n").count("a", 0), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
  CHECK_THROWS_AS(constants_from(Config::parse("const.nope=1\n")), ConfigError);
  CHECK(constants_from(Config::parse("const.c_T=9\n")).c_T == 9.0);
}

TEST_CASE("csv: stable header, empty fields for missing values, %.17g numbers") {
  CHECK(csv_header() == kHeader);
  CsvRow r;
  r.experiment_id = "x";
  r.subcommand = "pointwise";
  r.rho = 0.2;
  r.n_trials = 10;
  r.seed = 3;
  CHECK(csv_line(r) == "x,pointwise,,,,0.20000000000000001,,10,3,,,,,,,,,");
  CHECK(fields(csv_line(r)).size() == 18);
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("cli: usage and config errors exit 2") {
  auto a = cli({"frobnicate"});
  CHECK(a.code == 2);
  CHECK(a.err.find("Usage") != std::string::npos);
  CHECK(cli({}).code == 2);
  CHECK(cli({"pointwise", "--config", "/nonexistent.cfg"}).code == 2);
  CHECK(cli({"pointwise", "--config", temp_file("bad.cfg", "mode=sideways\n")}).code == 2);
  CHECK(cli({"pointwise", "--config", temp_file("bad2.cfg", "rho=abc\n")}).code == 2);
  CHECK(cli({"pointwise", "--seed", "-4"}).code == 2);
  CHECK(cli({"pointwise", "--set", "rho=0"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli: pointwise d=4 reference config passes its own check and is deterministic across workers") {
  const auto cfg = temp_file("p4.cfg", "mode = basic\nd = 4\np = 0.4\nalpha = 0.1\nbeta = 0.1\nrho = 0.2\nn_trials = 300\n");
  auto a = cli({"pointwise", "--config", cfg, "--seed", "11", "--workers", "1"});
  auto b = cli({"pointwise", "--config", cfg, "--seed", "11", "--workers", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto rows = lines(a.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == kHeader);
  auto f = fields(rows[1]);
  REQUIRE(f.size() == 18);
  const double est = std::stod(f[13]), rho = std::stod(f[5]);
  const double n = std::stod(f[7]);
  CHECK(f[8] == "11");
  CHECK(est <= rho + 3 * std::sqrt(est * (1 - est) / n));
}

TEST_CASE("cli: grid emits one row per cell; --out writes the file") {
  const auto cfg = temp_file("g.cfg", "axis.rho = 0.4, 0.2\naxis.d = 2, 3, 4\nn_trials = 20\np = 0.4\n");
  const std::string out = "/tmp/replilearn_test_grid.csv";
  std::remove(out.c_str());
  auto r = cli({"grid", "--config", cfg, "--seed", "7", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  auto rows = lines(ss.str());
  REQUIRE(rows.size() == 1 + 6);
  // Last axis (rho) varies fastest within the configured axis order d, rho.
  CHECK(fields(rows[1])[2] == "2");
  CHECK(fields(rows[1])[5] == "0.40000000000000002");
  CHECK(fields(rows[2])[5] == "0.20000000000000001");
  CHECK(fields(rows[3])[2] == "3");
}

TEST_CASE("cli: REPLILEARN_SEED overrides --seed") {
  const auto cfg = temp_file("p.cfg", "mode = basic\nn_trials = 20\n");
  ::setenv("REPLILEARN_SEED", "99", 1);
  auto a = cli({"pointwise", "--config", cfg, "--seed", "1"});
  auto b = cli({"pointwise", "--config", cfg, "--seed", "99"});
  ::setenv("REPLILEARN_SEED", "x1", 1);
  auto bad = cli({"pointwise", "--config", cfg});
  ::unsetenv("REPLILEARN_SEED");
  auto c = cli({"pointwise", "--config", cfg, "--seed", "1"});
  CHECK(a.out == b.out);
  CHECK(fields(lines(a.out)[1])[8] == "99");
  CHECK(a.out != c.out);
  CHECK(bad.code == 2);
}

TEST_CASE("cli binary: exit codes through the process boundary") {
  const char* bin = std::getenv("REPLILEARN_CLI");
  if (!bin) {
    MESSAGE("REPLILEARN_CLI not set; skipped");
    return;
  }
  auto status = [&](const std::string& args) {
    int s = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("frobnicate") == 2);
  CHECK(status("pointwise --config /nonexistent.cfg") == 2);
  CHECK(status("pointwise --set n_trials=5 --quick") == 0);
}
