#include <vector>

#include "chiplet/error.hpp"
#include "chiplet/power.hpp"
#include "doctest.h"

using namespace chiplet;
using doctest::Approx;

namespace {

PowerParams sample() {
  PowerParams p;
  p.activity = 0.1;
  p.load_capacitance = 1e-9;
  p.frequency = 2e9;
  p.voltage = 1.0;
  p.gain_factor = 1e-4;
  p.transition_time = 50e-12;
  p.threshold_voltage = 0.3;
  p.leakage_current = 1e-10;
  p.transistor_density = 1e8;
  p.area = 100.0;
  return p;
}

}  // namespace

TEST_CASE("power terms") {
  const auto b = power_breakdown(sample());
  CHECK(b.switching == Approx(0.2).epsilon(1e-12));
  CHECK(b.short_circuit == Approx(5.3333333e-9).epsilon(1e-6));
  CHECK(b.leakage == Approx(1.0).epsilon(1e-12));
  CHECK(b.total == b.switching + b.short_circuit + b.leakage);

  auto p = sample();
  p.voltage = 0.0;
  const auto z = power_breakdown(p);
  CHECK(z.switching == 0.0);
  CHECK(z.short_circuit == 0.0);
  CHECK(z.leakage == 0.0);
}

TEST_CASE("short-circuit term vanishes at or below twice the threshold") {
  auto p = sample();
  p.voltage = 0.6;
  CHECK(power_breakdown(p).short_circuit == 0.0);
  p.voltage = 0.5;
  CHECK(power_breakdown(p).short_circuit == 0.0);
}

TEST_CASE("switching power is quadratic in voltage") {
  auto p = sample();
  const double s1 = power_breakdown(p).switching;
  p.voltage *= 2.0;
  CHECK(power_breakdown(p).switching == Approx(4.0 * s1).epsilon(1e-15));
}

TEST_CASE("total is non-decreasing in every parameter") {
  const auto base = sample();
  const double t0 = power_breakdown(base).total;
  double PowerParams::*fields[] = {&PowerParams::activity,         &PowerParams::load_capacitance,
                                   &PowerParams::frequency,        &PowerParams::voltage,
                                   &PowerParams::leakage_current,  &PowerParams::transistor_density,
                                   &PowerParams::area};
  for (auto f : fields) {
    auto p = base;
    for (double scale : {1.1, 1.5, 3.0}) {
      p.*f = base.*f * scale;
      CHECK(power_breakdown(p).total >= t0);
    }
  }
}

TEST_CASE("splitting a tile leaves leakage unchanged") {
  auto p = sample();
  const double whole = power_breakdown(p).leakage;
  for (int n : {2, 4, 7}) {
    auto part = p;
    part.area = p.area / n;
    CHECK(n * power_breakdown(part).leakage == Approx(whole).epsilon(1e-12));
  }
}

TEST_CASE("system power") {
  CHECK(system_power({}).total == 0.0);

  TileOperatingPoint t{"cpu", 2e9, 1.0, sample()};
  const std::vector<TileOperatingPoint> one{t};
  CHECK(system_power(one).total == power_breakdown(sample()).total);

  auto u = t;
  u.name = "cpu2";
  const std::vector<TileOperatingPoint> two{t, u};
  CHECK(system_power(two).total == 2.0 * power_breakdown(sample()).total);

  const std::vector<TileOperatingPoint> dup{t, t};
  CHECK_THROWS_AS(system_power(dup), ValidationError);
}

TEST_CASE("tile operating point overrides frequency and voltage") {
  auto p = sample();
  p.frequency = 1.0;
  p.voltage = 0.1;
  const std::vector<TileOperatingPoint> one{{"cpu", 2e9, 1.0, p}};
  CHECK(system_power(one).tiles[0].power.switching == Approx(0.2).epsilon(1e-12));
}
