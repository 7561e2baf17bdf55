#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gardner/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gardner");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = gardner::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const std::string& name) { return std::string(GARDNER_SCENARIO_DIR) + "/" + name; }

}  // namespace

TEST_CASE("verify-symmetry on subcase 2.1 passes") {
  Run r = cli({"verify-symmetry", "--case", "2.1", "--params", "k=1,k1=1,k3=1,k2=0,k4=0,b0=1,c0=1,a0=1,beta0=0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("double-reduce prints the reduced ODE") {
  Run r = cli({"double-reduce", "--c", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("-2*w + 4*w*w_rr - w^2 + 2*w^3 + w^4 - 2*w_r^2 + 2*w_rr = 0") != std::string::npos);
}

TEST_CASE("multiplier 1 fails when Q is nonzero and shows the residual") {
  Run r = cli({"multiplier", "--scenario", scenario("constQ.json"), "--lambda", "1"});
  CHECK(r.code == 1);
  CHECK(r.out.find("residual: q0") != std::string::npos);
  Run z = cli({"multiplier", "--scenario", scenario("gardner_unit.json"), "--lambda", "1"});
  CHECK(z.code == 0);
}

TEST_CASE("adjoint of the abstract family") {
  Run r = cli({"adjoint", "--scenario", scenario("abstract.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("F* = -A*u*v_x - B*v_xxx - C*u^2*v_x + Q*v - v_t") != std::string::npos);
}

TEST_CASE("flux of a non-conserved density exits 1") {
  CHECK(cli({"flux", "--density", "u^2/2", "--scenario", scenario("gardner_unit.json")}).code == 0);
  CHECK(cli({"flux", "--density", "u^3", "--scenario", scenario("gardner_unit.json")}).code == 1);
}

TEST_CASE("input errors exit 2 with a message") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"bogus"},
           {"multiplier", "--scenario", scenario("missing.json"), "--lambda", "1"},
           {"multiplier", "--scenario", scenario("constQ.json"), "--lambda", "1+"},
           {"verify-symmetry", "--case", "9.9"},
           {"associate", "--scenario", scenario("example.json"), "--generator", "1;0", "--vector", "u;u"},
       }) {
    Run r = cli(args);
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("scenario files reject unknown keys and zero coefficients") {
  std::string dir = std::string(GARDNER_BINARY_DIR);
  {
    std::ofstream(dir + "/bad_key.json") << R"({"equation": {"A": "1", "B": "1", "C": "1", "Q": "0"}, "colour": 1})";
    CHECK(cli({"adjoint", "--scenario", dir + "/bad_key.json"}).code == 2);
  }
  {
    std::ofstream(dir + "/zero_b.json") << R"({"equation": {"A": "1", "B": "0", "C": "1", "Q": "0"}})";
    CHECK(cli({"adjoint", "--scenario", dir + "/zero_b.json"}).code == 2);
  }
}

TEST_CASE("paper-suite reports are byte-identical for a fixed seed") {
  Run a = cli({"paper-suite", "--skip-numerics", "--no-timings", "--seed", "11", "--report", "json"});
  Run b = cli({"paper-suite", "--skip-numerics", "--no-timings", "--seed", "11", "--report", "json"});
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"anchor\"") != std::string::npos);
}

TEST_CASE("report file holds the JSON report") {
  std::string path = std::string(GARDNER_BINARY_DIR) + "/report.json";
  Run r = cli({"density", "--lambda", "u", "--report-file", path, "--no-timings"});
  CHECK(r.code == 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("\"status\": \"PASS\"") != std::string::npos);
  CHECK(text.str().find("1/2*u^2") != std::string::npos);
}
