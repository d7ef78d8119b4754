#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using warpgap::cli::run;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run call(std::vector<std::string> args) {
  args.insert(args.begin(), "warpgap");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("warpgap_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("series writes the geometric sum") {
  const fs::path dir = scratch("series");
  const Run r = call({"series", "--out", dir.string()});
  CHECK(r.code == 0);
  const nlohmann::json j = read_json(dir / "series.json");
  const double e = std::numbers::e;
  CHECK(std::exp(j["coarse"][0]["closed_form_log"].get<double>()) == doctest::Approx(e / (e - 1.0)).epsilon(1e-14));
  CHECK(j["sharp_below_coarse"] == true);
  CHECK(j["coarse"][2]["classification"] == "divergent");
}

TEST_CASE("profile metadata") {
  const fs::path dir = scratch("profile");
  Run r = call({"profile", "--n", "3", "--T", "5", "--h", "0.01", "--m-max", "1000", "--out", dir.string()});
  CHECK(r.code == 0);
  nlohmann::json j = read_json(dir / "profile.json");
  CHECK(j["two_plus"].get<double>() == doctest::Approx(2.15).epsilon(1e-15));
  CHECK(j["n"] == 3);

  r = call({"profile", "--T", "5", "--h", "0.01", "--m-max", "1000", "--out", dir.string()});
  CHECK(r.code == 0);
  j = read_json(dir / "profile.json");
  CHECK(j["t0"].get<double>() == doctest::Approx(std::pow(2.2, 1.0 / 2.1)).epsilon(1e-14));
  const std::string csv = slurp(dir / "profile.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1002);
}

TEST_CASE("usage errors exit with 2") {
  const fs::path dir = scratch("usage");
  CHECK(call({"profile", "--epsilon", "-0.1", "--out", dir.string()}).code == 2);
  CHECK(call({"profile", "--epsilon", "0", "--out", dir.string()}).code == 2);
  CHECK(call({"profile", "--bogus", "--out", dir.string()}).code == 2);
  CHECK(call({"profile", "--n", "1", "--out", dir.string()}).code == 2);
  CHECK(call({"profile", "--T", "5,x", "--out", dir.string()}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({}).code == 2);
  // h does not divide T
  CHECK(call({"profile", "--T", "5", "--h", "0.3", "--out", dir.string()}).code == 2);
  {
    std::ofstream bad(dir / "bad.ini");
    bad << "n = 3\nno_such_key = 4\n";
  }
  CHECK(call({"profile", "--config", (dir / "bad.ini").string()}).code == 2);
  CHECK(call({"profile", "--config", (dir / "missing.ini").string()}).code == 2);
}

TEST_CASE("config file") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "n = 3\nm-max = 500\nh = 0.01\nT = \"2,4\"\nout = \"" << dir.string() << "\"\n";
  }
  const Run r = call({"profile", "--config", (dir / "run.ini").string()});
  CHECK(r.code == 0);
  const nlohmann::json j = read_json(dir / "profile.json");
  CHECK(j["n"] == 3);
  CHECK(j["m_max"] == 500);
  const std::string csv = slurp(dir / "profile.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 802);
}

TEST_CASE("flat curvature") {
  const fs::path dir = scratch("curv");
  const Run r = call({"curvature", "--flat", "--n", "3", "--curvature-T", "2", "--out", dir.string()});
  CHECK(r.code == 0);
  const nlohmann::json j = read_json(dir / "curvature.json");
  CHECK(j["max_abs_K_rad"].get<double>() == 0.0);
  CHECK(j["violation_found"] == false);
  const std::string csv = slurp(dir / "curvature.csv");
  CHECK(csv.rfind("t,", 0) == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const fs::path& d : {a, b}) {
    CHECK(call({"minimize", "--T", "3", "--h", "0.01", "--m-max", "2000", "--out", d.string()}).code == 0);
    CHECK(call({"curvature", "--curvature-T", "5", "--m-max", "2000", "--out", d.string()}).code == 0);
  }
  for (const char* f : {"minimize.json", "minimizer.csv", "curvature.json", "curvature.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("flat audit detects the missing gap") {
  const fs::path dir = scratch("flat_audit");
  const Run r = call({"audit", "--flat", "--surfaces", "0", "--out", dir.string()});
  CHECK(r.code == 0);
  const nlohmann::json j = read_json(dir / "audit.json");
  CHECK(j.contains("items"));
}

TEST_CASE("help") {
  const Run r = call({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("certificate") != std::string::npos);
}
