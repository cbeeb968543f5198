#include <vector>

#include "chiplet/costyield.hpp"
#include "chiplet/error.hpp"
#include "doctest.h"

using namespace chiplet;
using doctest::Approx;

TEST_CASE("die yield") {
  ProcessCostParams p;
  CHECK(die_yield(0.0, p) == 1.0);
  CHECK(die_yield(858.0, p) == Approx(0.2574200527).epsilon(1e-9));
  CHECK(die_yield(170.0, p) == Approx(0.7246434379).epsilon(1e-9));
  CHECK_THROWS_AS(die_yield(-1.0, p), DomainError);
}

TEST_CASE("die yield is non-increasing in area and defect density") {
  ProcessCostParams p;
  double prev = 1.0;
  for (double a = 0.0; a <= 2000.0; a += 25.0) {
    const double y = die_yield(a, p);
    CHECK(y <= prev);
    CHECK(y > 0.0);
    prev = y;
  }
  prev = 1.0;
  for (double d0 = 0.0; d0 <= 0.02; d0 += 0.001) {
    p.d0 = d0;
    const double y = die_yield(300.0, p);
    CHECK(y <= prev);
    prev = y;
  }
}

TEST_CASE("gross dies per wafer") {
  CHECK(gross_dies_per_wafer(858.0, 300.0) == 59);
  CHECK(gross_dies_per_wafer(170.0, 300.0) == 364);
  CHECK(gross_dies_per_wafer(70686.0, 300.0) == 0);
  CHECK(gross_dies_per_wafer(1e6, 300.0) == 0);
  CHECK_THROWS_AS(gross_dies_per_wafer(0.0, 300.0), DomainError);
}

TEST_CASE("assembly yield") {
  ProcessCostParams p;
  CHECK(assembly_yield(0, 0, p) == 1.0);
  CHECK(assembly_yield(1, 0, p) == Approx(0.999));
  CHECK(assembly_yield(4, 20000, p) == Approx(0.9762838).epsilon(1e-6));
}

TEST_CASE("package cost") {
  ProcessCostParams p;
  const DieRequest soc[] = {{858.0, 1}};
  const auto a = package_cost(soc, 0, p);
  CHECK(a.dies.at(0).gross_dies_per_wafer == 59);
  CHECK(a.package_cost == Approx(659.0830234).epsilon(1e-9));
  CHECK(a.package_cost == Approx(658.9).epsilon(1e-3));

  const DieRequest split[] = {{170.0, 4}};
  const auto b = package_cost(split, 20000, p);
  CHECK(b.package_cost == Approx(155.3310168).epsilon(1e-9));
  CHECK(b.package_cost >= b.raw_die_cost);

  const auto empty = package_cost(std::span<const DieRequest>{}, 0, p);
  CHECK(empty.package_cost == 0.0);
  CHECK(empty.assembly_yield == 1.0);
  CHECK(empty.dies.empty());

  const DieRequest huge[] = {{1e6, 1}};
  CHECK_THROWS_WITH_AS(package_cost(huge, 0, p), doctest::Contains("die exceeds wafer"), DomainError);
}

TEST_CASE("literal cost-per-die form divides by yield only") {
  ProcessCostParams p;
  p.yield_only_die_cost = true;
  CHECK(cost_per_die(858.0, p) == Approx(10000.0 / 0.2574200527).epsilon(1e-9));
}

TEST_CASE("cost ratio") {
  ProcessCostParams p;
  const std::vector<double> four(4, 170.0);
  const double r = cost_ratio(858.0, four, 20000, p);
  CHECK(r == Approx(4.243087035).epsilon(1e-9));
  CHECK(r >= 3.5);
  CHECK(r <= 4.5);

  const std::vector<double> same{858.0};
  CHECK(cost_ratio(858.0, same, 0, p) == Approx(1.0).epsilon(1e-15));

  // Zero defect density leaves edge loss and assembly yield. The frozen value
  // is the direct evaluation; it does not satisfy a ratio < 1.2 bound.
  p.d0 = 0.0;
  CHECK(cost_ratio(858.0, four, 20000, p) == Approx(1.507300875).epsilon(1e-9));
}

TEST_CASE("cost ratio is independent of wafer cost") {
  ProcessCostParams p;
  const std::vector<double> four(4, 170.0);
  const double base = cost_ratio(858.0, four, 20000, p);
  for (double wc : {1.0, 123.45, 5000.0, 1e6, 3.7e9}) {
    p.wafer_cost = wc;
    CHECK(cost_ratio(858.0, four, 20000, p) == Approx(base).epsilon(1e-12));
  }
}
