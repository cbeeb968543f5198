#include <random>
#include <string>

#include "chiplet/error.hpp"
#include "chiplet/floorplan.hpp"
#include "chiplet/spec_io.hpp"
#include "doctest.h"

using namespace chiplet;
using doctest::Approx;

namespace {

const std::string kInfotainment = std::string(CHIPLETDSE_DATA_DIR) + "/infotainment.json";

Floorplan pair_plan(double weight) {
  Floorplan fp;
  fp.width = fp.height = 20.0;
  fp.placements = {{"a", 2, 2, 1, 1, 1, 0}, {"b", 2, 2, 1, 4, 5, 0}};
  fp.connectivity = ConnectivityMatrix(2);
  fp.connectivity(0, 1) = fp.connectivity(1, 0) = weight;
  return fp;
}

}  // namespace

TEST_CASE("wirelength examples") {
  CHECK(wirelength(pair_plan(0.0)) == 0.0);
  CHECK(wirelength(pair_plan(1.0)) == Approx(7.0));
  CHECK(wirelength(pair_plan(2.0)) == Approx(14.0));
}

TEST_CASE("wirelength is invariant under translating the whole plan") {
  auto fp = pair_plan(3.0);
  const double w = wirelength(fp);
  for (auto& p : fp.placements) p.x += 2.5, p.y -= 0.5;
  CHECK(wirelength(fp) == Approx(w));
}

TEST_CASE("rotated footprints") {
  Placement p{"r", 4, 2, 0, 1, 1, 90};
  auto r = p.footprint();
  CHECK(r.w == 2.0);
  CHECK(r.h == 4.0);
  p.rotation = 180;
  r = p.footprint();
  CHECK(r.w == 4.0);
  CHECK(r.h == 2.0);
}

TEST_CASE("violation detection") {
  auto fp = pair_plan(1.0);
  fp.min_spacing = 1.0;
  CHECK(is_legal(fp));

  auto overlap = fp;
  overlap.placements[1].x = 2.0;
  overlap.placements[1].y = 1.5;
  CHECK_FALSE(is_legal(overlap));
  CHECK_THROWS_AS(check_floorplan(overlap), ValidationError);

  auto tight = fp;  // 0.5 mm gap under a 1 mm spacing rule
  tight.placements[1].x = 3.5;
  tight.placements[1].y = 1.0;
  CHECK_FALSE(is_legal(tight));

  auto outside = fp;
  outside.placements[1].x = 18.0;
  CHECK_FALSE(is_legal(outside));

  auto edge = fp;  // closer than half the spacing to the edge
  edge.placements[0].x = 0.2;
  CHECK_FALSE(is_legal(edge));

  auto bad_rotation = fp;
  bad_rotation.placements[0].rotation = 45;
  CHECK(floorplan_violation(bad_rotation).has_value());
}

TEST_CASE("BSP packing of the bundled spec is legal and deterministic") {
  const auto doc = load_spec_file(kInfotainment);
  const auto a = bsp_placement(doc.package);
  const auto b = bsp_placement(doc.package);
  CHECK(a == b);
  CHECK(is_legal(a));
  CHECK(a.placements.size() == doc.package.chiplets.size());
  CHECK(a.total_power() == Approx(doc.package.total_power()));
  CHECK(a.connectivity == validate_connectivity(doc.package));
}

TEST_CASE("BSP packing is legal for random feasible specs") {
  std::mt19937_64 rng(11);
  int packed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    PackageSpec s;
    s.interposer_width = s.interposer_height = 30.0;
    s.min_spacing = 0.5;
    s.stack = default_stack();
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      const double w = 1.0 + static_cast<double>(rng() % 60) / 10.0;
      const double h = 1.0 + static_cast<double>(rng() % 60) / 10.0;
      s.chiplets.push_back({"c" + std::to_string(i), w, h, 1.0, ChipletKind::compute, {}});
    }
    try {
      const auto fp = bsp_placement(s);
      CHECK(is_legal(fp));
      ++packed;
    } catch (const CongestionError&) {
    }
  }
  CHECK(packed > 50);
}

TEST_CASE("BSP reports congestion") {
  PackageSpec s;
  s.interposer_width = s.interposer_height = 10.0;
  s.stack = default_stack();
  // Area fits, geometry does not: three 6 x 3 strips need 18 mm along some axis.
  for (int i = 0; i < 3; ++i) s.chiplets.push_back({"c" + std::to_string(i), 6, 3, 1, ChipletKind::compute, {}});
  s.chiplets.push_back({"d", 6, 6, 1, ChipletKind::compute, {}});
  CHECK_THROWS_AS(bsp_placement(s), CongestionError);
}

TEST_CASE("floorplan JSON round trip") {
  const auto doc = load_spec_file(kInfotainment);
  const auto fp = bsp_placement(doc.package);
  const auto text = floorplan_to_json(fp);
  const auto back = floorplan_from_json(text);
  CHECK(back == fp);
  CHECK(floorplan_to_json(back) == text);
  CHECK_THROWS_AS(floorplan_from_json("[1,2"), ParseError);
}
