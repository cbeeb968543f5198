#include <string>

#include "chiplet/report.hpp"
#include "doctest.h"

using namespace chiplet;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(fmt(0.0) == "0");
  CHECK(fmt(-0.0) == "0");
  CHECK(fmt(1.5) == "1.5");
  CHECK(fmt(1234567.0) == "1.23457e+06");
  CHECK(fmt(0.000123456789) == "0.000123457");
}

TEST_CASE("csv quoting") {
  const auto s = csv({"a", "b"}, {{"x,y", "say \"hi\""}, {"plain", ""}});
  CHECK(s == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\nplain,\n");
}

TEST_CASE("floorplan svg") {
  Floorplan fp;
  fp.width = 20.0;
  fp.height = 10.0;
  fp.placements = {{"cpu", 4, 2, 5, 1, 1, 90}, {"a<b", 3, 3, 1, 10, 5, 0}};
  fp.connectivity = ConnectivityMatrix(2);
  const auto svg = floorplan_svg(fp);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("id=\"interposer\"") != std::string::npos);
  CHECK(svg.find("<g id=\"cpu\" data-rotation=\"90\">") != std::string::npos);
  CHECK(svg.find("a&lt;b") != std::string::npos);
  CHECK(svg.find("a<b") == std::string::npos);
  CHECK(count(svg, "<g ") == 2);
  CHECK(count(svg, "<circle") == 2);
  CHECK(svg.find("width=\"220\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("cost csv has one row per die plus the package") {
  CostBreakdown cb;
  cb.dies.resize(2);
  cb.package_cost = 12.5;
  const auto s = cost_csv({"a", "b"}, cb);
  CHECK(count(s, "\n") == 4);
  CHECK(s.find("package,,,,,,0,1,12.5") != std::string::npos);
}
