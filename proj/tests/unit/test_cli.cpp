#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "boundary_lab/config.hpp"
#include "boundary_lab/experiments.hpp"

using namespace boundary_lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("boundary-lab-unit-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args) {
  int status = std::system((std::string(BOUNDARY_LAB_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config parsing") {
  RunConfig c = RunConfig::from_json(nlohmann::json::parse(R"({"model": {"rank": 2, "weights": [1, 2]}, "seed": 4})"));
  CHECK(c.model.weights == std::vector<double>{1, 2});
  CHECK(c.seed == 4);
  CHECK_THROWS(RunConfig::from_json(nlohmann::json::parse(R"({"sede": 4})")));
  CHECK_THROWS(RunConfig::from_json(nlohmann::json::parse(R"({"seed": "four"})")));
  CHECK_THROWS(RunConfig::from_json(nlohmann::json::parse(R"({"cap": 0})")));
  // The echo round-trips.
  RunConfig back = RunConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(back.to_json() == c.to_json());
}

TEST_CASE("exponent report") {
  fs::path out = scratch("exponent");
  CHECK(run("exponent", RunConfig{}, out, std::cerr) == kExitOk);
  nlohmann::json j = read_json(out / "exponent.json");
  CHECK(std::abs(j["summary"]["h"].get<double>() - std::log(3.0)) < 1e-9);
  CHECK(j["version"] == kVersion);
  CHECK(j.contains("config"));
  CHECK(fs::exists(out / "exponent.csv"));
}

TEST_CASE("shadow report through the binary") {
  fs::path out = scratch("shadow");
  CHECK(cli("shadow --out " + out.string()) == 0);
  nlohmann::json j = read_json(out / "shadow.json");
  CHECK(j["summary"]["min_ratio"].get<double>() == doctest::Approx(0.75));
  CHECK(j["summary"]["max_ratio"].get<double>() == doctest::Approx(2.25));
}

TEST_CASE("exit codes") {
  fs::path out = scratch("exit");
  CHECK(cli("no-such-thing --out " + out.string()) == 1);
  {
    std::ofstream(out / "big-eps.json") << R"({"epsilon": 2.0})";
  }
  CHECK(cli("growth --config " + (out / "big-eps.json").string() + " --out " + out.string()) == 2);
  {
    std::ofstream(out / "tiny-cap.json") << R"({"cap": 10})";
  }
  CHECK(cli("growth --config " + (out / "tiny-cap.json").string() + " --out " + out.string()) == 3);
  CHECK(cli("growth --config " + (out / "missing.json").string()) == 2);
}

TEST_CASE("reruns are byte-identical") {
  fs::path a = scratch("det-a");
  fs::path b = scratch("det-b");
  RunConfig c;
  c.samples = 200;
  CHECK(run("ahlfors", c, a, std::cerr) == kExitOk);
  CHECK(run("ahlfors", c, b, std::cerr) == kExitOk);
  CHECK(slurp(a / "ahlfors.csv") == slurp(b / "ahlfors.csv"));
}
