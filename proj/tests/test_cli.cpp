#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using chiplet::cli::run;

namespace {

const std::string kSpec = std::string(CHIPLETDSE_DATA_DIR) + "/infotainment.json";

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = run(args, out, err);
  return {rc, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh(const std::string& name) {
  const auto dir = fs::current_path() / "cli_out" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("cost writes a CSV and a manifest") {
  const auto dir = fresh("cost");
  const auto r = call({"cost", "--spec", kSpec, "--out", dir.string()});
  REQUIRE(r.status == 0);
  const auto csv = slurp(dir / "cost.csv");
  CHECK(csv.rfind("name,area_mm2,count,", 0) == 0);
  CHECK(csv.find("\ncpu_big,108,") != std::string::npos);
  CHECK(csv.find("\npackage,") != std::string::npos);

  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["tool"] == "chipletdse");
  CHECK(m["subcommand"] == "cost");
  REQUIRE(m["inputs"].size() == 1);
  CHECK(m["inputs"][0]["sha256"] == chiplet::cli::sha256_hex(slurp(kSpec)));
  REQUIRE(m["outputs"].size() == 1);
  CHECK(m["outputs"][0]["file"] == "cost.csv");
  CHECK(m["outputs"][0]["sha256"] == chiplet::cli::sha256_hex(csv));
}

TEST_CASE("sha256 of known strings") {
  CHECK(chiplet::cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(chiplet::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("phy prints the maximum trace length") {
  const auto dir = fresh("phy");
  const auto r = call({"phy", "--clock", "2e9", "--sf", "1.5", "--out", dir.string()});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("max_trace_length_mm 36.5") != std::string::npos);
  CHECK(fs::exists(dir / "phy.csv"));
}

TEST_CASE("errors") {
  const auto missing = (fs::current_path() / "no_such_spec.json").string();
  auto r = call({"cost", "--spec", missing, "--out", fresh("missing").string()});
  CHECK(r.status != 0);
  CHECK(r.err.find(missing) != std::string::npos);

  r = call({"frobnicate"});
  CHECK(r.status != 0);

  r = call({});
  CHECK(r.status != 0);

  r = call({"calibrate-k", "--spec", kSpec, "--k0-list", "0", "--out", fresh("badk").string()});
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("perf, power and thermal run on the bundled spec") {
  auto dir = fresh("perf");
  auto r = call({"perf", "--spec", kSpec, "--out", dir.string()});
  REQUIRE(r.status == 0);
  const auto perf = slurp(dir / "perf.csv");
  CHECK(perf.find("\nC1,") < perf.find("\nC3,"));
  CHECK(perf.find("\nC3,") < perf.find("\nC2,"));

  dir = fresh("power");
  r = call({"power", "--spec", kSpec, "--out", dir.string()});
  REQUIRE(r.status == 0);
  CHECK(slurp(dir / "power.csv").find("\ntotal,") != std::string::npos);

  dir = fresh("thermal");
  r = call({"thermal", "--spec", kSpec, "--resolution", "2", "--out", dir.string()});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("peak chiplet") != std::string::npos);
  CHECK(fs::exists(dir / "thermal.csv"));
}

TEST_CASE("place is reproducible and rerun reproduces it") {
  const std::vector<std::string> base{"place", "--spec", kSpec, "--seed", "3", "--max-iterations", "6"};
  auto a_dir = fresh("place_a"), b_dir = fresh("place_b"), c_dir = fresh("place_c");
  auto args = base;
  args.insert(args.end(), {"--out", a_dir.string()});
  REQUIRE(call(args).status == 0);
  args = base;
  args.insert(args.end(), {"--out", b_dir.string()});
  REQUIRE(call(args).status == 0);
  for (const char* f : {"history.csv", "floorplan.json", "floorplan.svg", "initial_floorplan.json"}) {
    CHECK(fs::exists(a_dir / f));
    CHECK(slurp(a_dir / f) == slurp(b_dir / f));
  }

  REQUIRE(call({"rerun", "--manifest", (a_dir / "manifest.json").string(), "--out", c_dir.string()}).status == 0);
  CHECK(slurp(a_dir / "history.csv") == slurp(c_dir / "history.csv"));
  CHECK(slurp(a_dir / "floorplan.json") == slurp(c_dir / "floorplan.json"));
}

TEST_CASE("sweep marks undersized interposers infeasible") {
  const auto dir = fresh("sweep");
  const auto r = call({"sweep", "--spec", kSpec, "--sides", "12,40", "--max-iterations", "3", "--out", dir.string()});
  REQUIRE(r.status == 0);
  const auto csv = slurp(dir / "sweep.csv");
  CHECK(csv.find("\n12,144,0,") != std::string::npos);
  CHECK(csv.find("\n40,1600,1,") != std::string::npos);
}
