#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "harper/cli_runner.hpp"
#include "harper/config.hpp"

using namespace harper;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("harper_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const TempDir& dir, const Json& j, const std::string& name = "cfg.json") {
  const fs::path p = dir.path / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

int run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"harper"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json flux_config(const std::string& flux) {
  Json j;
  j["seed"] = 42;
  j["group"] = {{"family", "lattice"}, {"dim", 2}};
  j["multiplier"] = {{"kind", "magnetic_z2"}, {"flux", flux}};
  j["operator"] = {{"name", "harper"}, {"d", 1}};
  return j;
}

}  // namespace

TEST_CASE("check-cocycle writes a clean report") {
  TempDir dir("cocycle");
  Json j;
  j["seed"] = 7;
  j["group"] = {{"family", "lattice"}, {"dim", 2}};
  j["multiplier"] = {{"kind", "magnetic_z2"}, {"alpha1", 0.3}, {"alpha2", 1.1}};
  const auto cfg = write_config(dir, j);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "check-cocycle"}) == 0);
  const Json rep = Json::parse(slurp(dir.path / "out" / "cocycle_report.json"));
  CHECK(rep.at("max_cocycle_residual").get<double>() <= 1e-12);
  CHECK(rep.at("samples_used").get<int>() == 1000);
}

TEST_CASE("moments prints the exact value") {
  TempDir dir("moments");
  const auto cfg = write_config(dir, flux_config("0/1"));
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "moments", "--k",
             "4"}) == 0);
  const Json m = Json::parse(slurp(dir.path / "out" / "moments.json"));
  CHECK(m.at("moment").at(0).get<double>() == 36.0);
  CHECK(m.at("moment").at(1).get<double>() == 0.0);
  CHECK(m.at("walk_oracle").at(0).get<double>() == 36.0);
}

TEST_CASE("butterfly: header, qmax row counts, determinism") {
  TempDir dir("butterfly");
  Json j = flux_config("0/1");
  j["spectra"] = {{"levels", {3}}};
  const auto cfg = write_config(dir, j);

  SUBCASE("qmax 1 has only the flux-0 row") {
    CHECK(run({"--config", cfg.string(), "--out", (dir.path / "a").string(), "butterfly", "--qmax",
               "1"}) == 0);
    const std::string csv = slurp(dir.path / "a" / "butterfly.csv");
    CHECK(csv.rfind("q,p,eig_index,eigenvalue\n", 0) == 0);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      CHECK(line.rfind("1,0,", 0) == 0);
      ++rows;
    }
    CHECK(rows == 49);
  }

  SUBCASE("qmax 5 has 10 flux rows; identical bytes across runs and job counts") {
    setenv("HARPER_CACHE_DIR", (dir.path / "cache1").string().c_str(), 1);
    CHECK(run({"--config", cfg.string(), "--out", (dir.path / "r1").string(), "--jobs", "1",
               "butterfly", "--qmax", "5"}) == 0);
    setenv("HARPER_CACHE_DIR", (dir.path / "cache2").string().c_str(), 1);
    CHECK(run({"--config", cfg.string(), "--out", (dir.path / "r2").string(), "--jobs", "2",
               "butterfly", "--qmax", "5"}) == 0);
    unsetenv("HARPER_CACHE_DIR");
    const std::string a = slurp(dir.path / "r1" / "butterfly.csv");
    const std::string b = slurp(dir.path / "r2" / "butterfly.csv");
    CHECK(a == b);
    std::set<std::string> fluxes;
    std::istringstream in(a);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) fluxes.insert(line.substr(0, line.find(',', line.find(',') + 1)));
    CHECK(fluxes.size() == 10);
  }
}

TEST_CASE("ids output and cache round trip") {
  TempDir dir("ids");
  Json j = flux_config("0/1");
  j["spectra"] = {{"levels", {2, 4}}, {"kappa", 1}, {"grid", {{"min", -5}, {"max", 5}, {"points", 11}}}};
  const auto cfg = write_config(dir, j);
  setenv("HARPER_CACHE_DIR", (dir.path / "cache").string().c_str(), 1);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "o1").string(), "ids"}) == 0);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "o2").string(), "ids"}) == 0);
  unsetenv("HARPER_CACHE_DIR");
  const std::string a = slurp(dir.path / "o1" / "ids.csv");
  CHECK(a == slurp(dir.path / "o2" / "ids.csv"));
  CHECK(a.rfind("level,lambda,F,D\n", 0) == 0);
  // total mass d at the top of the grid
  CHECK(a.find("4,5,1,0\n") != std::string::npos);
}

TEST_CASE("gaps command flags the region beyond the norm bound") {
  TempDir dir("gaps");
  Json j = flux_config("0/1");
  j["spectra"] = {{"levels", {2, 4}},
                  {"kappa", 1},
                  {"epsilon", 1e-3},
                  {"grid", {{"min", -6}, {"max", 6}, {"points", 25}}}};
  const auto cfg = write_config(dir, j);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "gaps"}) == 0);
  const std::string csv = slurp(dir.path / "out" / "gaps.csv");
  CHECK(csv.rfind("lambda1,lambda2,level,mass\n", 0) == 0);
  CHECK(csv.find("5.5,6,") != std::string::npos);   // above the norm bound
  CHECK(csv.find("\n-0.5,0,") == std::string::npos);  // bulk is never flagged
}

TEST_CASE("lamplighter-dims emits the exact table") {
  TempDir dir("lampdims");
  Json j;
  j["seed"] = 1;
  j["lamplighter_dims"] = {{"n_min", 2}, {"n_max", 4}, {"lambdas", {"0", "2"}}};
  const auto cfg = write_config(dir, j);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "lamplighter-dims"}) ==
        0);
  const std::string csv = slurp(dir.path / "out" / "lamplighter_dims.csv");
  CHECK(csv.find("2,0,2,8,0.25\n") != std::string::npos);
  CHECK(csv.find("3,0,9,24,0.375\n") != std::string::npos);
  CHECK(csv.find("4,0,22,64,0.34375\n") != std::string::npos);
  CHECK(csv.find("4,2,8,64,0.125\n") != std::string::npos);
}

TEST_CASE("lift-compare reports tiny spectral distances") {
  TempDir dir("lift");
  Json j;
  j["seed"] = 3;
  j["lift"] = {{"flux", "1/2"}, {"torus", 4}};
  const auto cfg = write_config(dir, j);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "lift-compare"}) == 0);
  std::istringstream in(slurp(dir.path / "out" / "lift_compare.csv"));
  std::string line;
  std::getline(in, line);
  double worst = 0.0;
  while (std::getline(in, line)) {
    const auto last = line.rfind(',');
    worst = std::max(worst, std::stod(line.substr(last + 1)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("minpoly command recovers x - 2 on the 3-cycle quotient") {
  TempDir dir("minpoly");
  Json j;
  j["seed"] = 9;
  j["identify"] = {{"precision", 256},
                   {"max_degree", 8},
                   {"max_height", 1000000},
                   {"targets", Json::array({Json{{"cycle", 3}, {"lambda0", 2.0}}})}};
  const auto cfg = write_config(dir, j);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "minpoly"}) == 0);
  const Json rep = Json::parse(slurp(dir.path / "out" / "minpoly.json"));
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].at("status").get<std::string>() == "found");
  CHECK(rep[0].at("poly_coeffs") == Json::array({"-2", "1"}));
  CHECK(rep[0].at("residual").get<double>() <= std::pow(2.0, -200));
}

TEST_CASE("group quotient accepts the nested spelling") {
  TempDir dir("quotient");
  Json j;
  j["seed"] = 4;
  j["group"] = {{"family", "lattice"}, {"dim", 2}, {"quotient", {{"moduli", {4, 4}}}}};
  j["operator"] = {{"name", "harper"}, {"d", 1}};
  const auto cfg = write_config(dir, j);
  CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "moments", "--k",
             "2"}) == 0);
  const Json m = Json::parse(slurp(dir.path / "out" / "moments.json"));
  CHECK(m.at("moment").at(0).get<double>() == 4.0);
}

TEST_CASE("config validation and exit codes") {
  TempDir dir("errors");
  SUBCASE("unknown keys are rejected (exit 1)") {
    Json j = flux_config("0/1");
    j["grouo"] = Json::object();
    const auto cfg = write_config(dir, j);
    CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "moments"}) == 1);
  }
  SUBCASE("missing seed is rejected (exit 1)") {
    Json j = flux_config("0/1");
    j.erase("seed");
    const auto cfg = write_config(dir, j);
    CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "moments"}) == 1);
  }
  SUBCASE("dimension cap yields the resource exit code (exit 2)") {
    Json j = flux_config("0/1");
    j["spectra"] = {{"levels", {4, 8}}};
    const auto cfg = write_config(dir, j);
    CHECK(run({"--config", cfg.string(), "--out", (dir.path / "out").string(), "--cap-dim", "10",
               "ids"}) == 2);
  }
}
