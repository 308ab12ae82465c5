#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const auto path = std::filesystem::temp_directory_path() /
                    ("tvl_cli_test_" + std::to_string(std::hash<std::string>{}(args)) + ".txt");
  const std::string cmd = env + " " + std::string(TVL_CLI_PATH) + " " + args + " > " + path.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove(path);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("spectrum json carries the schema tag") {
    const auto r = run("spectrum --l 1 --kappa 1 --format json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("schema") == "1");
  }

  TEST_CASE("spectrum from the Cayley parameters") {
    CHECK(run("spectrum --l 2 --a 2.5 --rho 1 --format json").code == 0);
  }

  TEST_CASE("tabulate csv has a header and dot decimals") {
    const auto r = run("tabulate --l 1 --kappa 1 --table eigenfunction --grid-min 0.5 --grid-max 2 --grid-n 4 --format csv");
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "r,re,im");
    CHECK(r.out.find("0.5,") != std::string::npos);
    const auto k = run("tabulate --l 2 --kappa -1 --table resolvent --z-mod 0.5 --z-arg 1.0 --grid-n 3 --format csv");
    REQUIRE(k.code == 0);
    CHECK(first_line(k.out) == "r,s,re,im");
  }

  TEST_CASE("verify passes and reports json") {
    const auto r = run("verify --l 1 --kappa 1 --skip-completeness --format json");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("schema") == "1");
    CHECK(j.at("pass") == true);
  }

  TEST_CASE("a perturbed counterterm makes verify fail") {
    CHECK(run("verify --l 1 --kappa 1 --skip-completeness --counterterm-l1 1.3 --format json").code == 1);
    CHECK(run("verify --l 2 --kappa 1 --skip-completeness --literal-counterterms --format csv").code == 1);
  }

  TEST_CASE("quadform and resolvent") {
    const auto q = run("quadform --l 1 --kappa 1 --format json");
    REQUIRE(q.code == 0);
    const auto j = nlohmann::json::parse(q.out);
    CHECK(j.at("schema") == "1");
    const auto r = run("resolvent --l 1 --kappa 0 --z-mod 1 --z-arg 0.7 --format json");
    CHECK(r.code == 0);
  }

  TEST_CASE("configuration errors exit with 2") {
    CHECK(run("spectrum --l 3 --kappa 1").code == 2);
    CHECK(run("spectrum --l 1 --kappa 1 --a 1 --rho 1").code == 2);
    CHECK(run("resolvent --l 1 --kappa 1 --z-mod 1 --z-arg 2").code == 2);
    CHECK(run("resolvent --l 1 --kappa 1 --z-mod 1 --z-arg 0.7853981633974483").code == 2);
    CHECK(run("verify --tol -1").code == 2);
    CHECK(run("spectrum --l 1 --kappa 1 --format xml").code == 2);
    CHECK(run("nosuchcommand").code == 2);
    CHECK(run("spectrum --l 1 --kappa 1", "SPECTRAL_THREADS=0").code == 2);
    CHECK(run("spectrum --l 1 --kappa 1", "SPECTRAL_THREADS=abc").code == 2);
    CHECK(run("spectrum --l 1 --kappa 1", "SPECTRAL_THREADS=2").code == 0);
    CHECK(run("spectrum --kappa 1").code == 2);
  }

  TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "tvl_cli_out.json";
    REQUIRE(run("spectrum --l 1 --kappa 2 --format json --out " + path.string()).code == 0);
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    CHECK(j.at("schema") == "1");
    std::filesystem::remove(path);
  }
}
