#include <cmath>
#include <string>

#include "chiplet/error.hpp"
#include "chiplet/place.hpp"
#include "chiplet/spec_io.hpp"
#include "doctest.h"

using namespace chiplet;
using doctest::Approx;

namespace {

const std::string kInfotainment = std::string(CHIPLETDSE_DATA_DIR) + "/infotainment.json";

AnnealConfig quick() {
  AnnealConfig c;
  c.max_iterations = 25;
  c.moves_per_iteration = 4;
  c.warmup_samples = 10;
  c.coarse_resolution = 2.0;
  c.fine_resolution = 2.0;
  return c;
}

PackageSpec infotainment() { return load_spec_file(kInfotainment).package; }

PackageSpec scaled(PackageSpec s, double f) {
  for (auto& c : s.chiplets) c.power *= f;
  return s;
}

NormalizationBounds bounds(double t0, double t1, double w0, double w1) {
  NormalizationBounds nb;
  nb.observe(t0, w0);
  nb.observe(t1, w1);
  return nb;
}

}  // namespace

TEST_CASE("temperature weight examples") {
  CHECK(alpha_for(50.0) == 0.0);
  CHECK(alpha_for(60.0) == 0.0);
  CHECK(alpha_for(70.0) == Approx(0.35));
  CHECK(alpha_for(200.0) == Approx(0.9));
  double last = 0.0;
  for (double t = 60.5; t < 200.0; t += 0.5) {
    const double a = alpha_for(t);
    CHECK(a >= last);
    CHECK(a >= 0.0);
    CHECK(a <= 0.9);
    last = a;
  }
}

TEST_CASE("normalized cost examples") {
  const auto nb = bounds(70.0, 90.0, 100.0, 200.0);
  CHECK(anneal_cost(70.0, 100.0, nb) == 0.0);
  CHECK(anneal_cost(90.0, 200.0, nb) == Approx(1.0));
  // Below 60 degC only wirelength counts.
  const auto cool = bounds(50.0, 55.0, 100.0, 200.0);
  CHECK(anneal_cost(55.0, 150.0, cool) == Approx(0.5));
  // A degenerate bound contributes nothing.
  const auto flat = bounds(80.0, 80.0, 100.0, 200.0);
  CHECK(anneal_cost(80.0, 100.0, flat) == 0.0);
  CHECK(anneal_cost(80.0, 200.0, flat) == Approx(1.0 - alpha_for(80.0)));
  // Values outside the bounds are clamped.
  CHECK(anneal_cost(100.0, 300.0, nb) == Approx(1.0));
}

TEST_CASE("normalized cost stays in [0, 1]") {
  const auto nb = bounds(62.0, 95.0, 50.0, 400.0);
  for (double t = 40.0; t <= 120.0; t += 3.7)
    for (double w = 0.0; w <= 500.0; w += 37.0) {
      const double c = anneal_cost(t, w, nb);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
}

TEST_CASE("acceptance probability") {
  CHECK(acceptance_probability(0.5, 0.4, 0.1) == 1.0);
  CHECK(acceptance_probability(0.4, 0.5, 0.1) == Approx(std::exp(-1.0)));
  CHECK(acceptance_probability(0.3, 0.3, 0.1) == 1.0);
  double last = 1.0;
  for (double d = 0.01; d < 1.0; d += 0.01) {
    const double p = acceptance_probability(0.0, d, 0.2);
    CHECK(p < last);
    last = p;
  }
  CHECK_THROWS_AS(acceptance_probability(0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(acceptance_probability(0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("uniform01 lies in [0, 1)") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("moves") {
  AnnealConfig cfg;
  Floorplan one;
  one.width = one.height = 20.0;
  one.placements = {{"a", 4, 2, 1, 8, 9, 0}};
  one.connectivity = ConnectivityMatrix(1);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) CHECK(is_legal(propose_move(one, rng, cfg)));

  Floorplan full;
  full.width = 20.0;
  full.height = 10.0;
  full.placements = {{"a", 20, 10, 1, 0, 0, 0}};
  full.connectivity = ConnectivityMatrix(1);
  CHECK_THROWS_WITH_AS(propose_move(full, rng, cfg), doctest::Contains("too congested"), CongestionError);

  const auto fp = bsp_placement(infotainment());
  Rng r1(77), r2(77);
  int kinds[3] = {0, 0, 0};
  auto a = fp, b = fp;
  for (int i = 0; i < 200; ++i) {
    Move m1, m2;
    a = propose_move(a, r1, cfg, &m1);
    b = propose_move(b, r2, cfg, &m2);
    CHECK(a == b);
    CHECK(m1.kind == m2.kind);
    CHECK(is_legal(a));
    CHECK(m1.attempts >= 1);
    ++kinds[static_cast<int>(m1.kind)];
  }
  CHECK(kinds[static_cast<int>(MoveKind::translate)] > 0);
  CHECK(kinds[static_cast<int>(MoveKind::swap)] > 0);
  // Every bundled chiplet is square, so a rotation never changes the plan.
  CHECK(kinds[static_cast<int>(MoveKind::rotate)] == 0);
}

TEST_CASE("rotate keeps the centre") {
  AnnealConfig cfg;
  Floorplan one;
  one.width = one.height = 20.0;
  one.placements = {{"a", 4, 2, 1, 8, 9, 0}};
  one.connectivity = ConnectivityMatrix(1);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    Move m;
    const auto next = propose_move(one, rng, cfg, &m);
    if (m.kind != MoveKind::rotate) continue;
    CHECK(next.placements[0].footprint().cx() == Approx(10.0));
    CHECK(next.placements[0].footprint().cy() == Approx(10.0));
    CHECK(next.placements[0].rotation == 90);
  }
}

TEST_CASE("single chiplet needs no annealing") {
  PackageSpec s;
  s.interposer_width = s.interposer_height = 20.0;
  s.stack = default_stack();
  s.chiplets = {{"solo", 6, 6, 10, ChipletKind::compute, {}}};
  const auto r = optimize(s, quick());
  CHECK(r.history.size() == 1);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
  CHECK(r.best == r.initial);
  CHECK(r.best.placements[0].footprint().cx() == Approx(10.0));
  CHECK(r.best.placements[0].footprint().cy() == Approx(10.0));
}

TEST_CASE("cool packages optimize wirelength alone") {
  const auto spec = scaled(infotainment(), 0.1);
  const auto r = optimize(spec, quick());
  CHECK(r.bounds.t_max <= 60.0);
  CHECK(r.final_wirelength <= r.initial_wirelength);
  CHECK(r.final_cost == Approx((r.final_wirelength - r.bounds.w_min) / (r.bounds.w_max - r.bounds.w_min)));
}

TEST_CASE("optimize result invariants") {
  const auto spec = infotainment();
  const auto cfg = quick();
  const auto r = optimize(spec, cfg);
  CHECK(is_legal(r.best));
  CHECK(r.final_cost <= r.initial_cost);
  CHECK(r.iterations == static_cast<int>(r.history.size()));
  CHECK(r.iterations <= cfg.max_iterations);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i].best_cost <= r.history[i - 1].best_cost);
    CHECK(r.history[i].k == Approx(r.history[i - 1].k * cfg.decay));
  }
  CHECK(r.history.back().best_cost == Approx(r.final_cost));
  CHECK(r.best.total_power() == Approx(spec.total_power()));

  const auto again = optimize(spec, cfg);
  CHECK(again.best == r.best);
  CHECK(again.iterations == r.iterations);
  CHECK(again.final_peak == r.final_peak);
}

TEST_CASE("calibration and sweep") {
  const auto spec = infotainment();
  auto cfg = quick();
  cfg.max_iterations = 8;
  CHECK_THROWS_AS(calibrate_k(spec, {}, cfg), DomainError);

  const auto rows = calibrate_k(spec, {0.05, 0.05}, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].iterations == rows[1].iterations);
  CHECK(rows[0].final_peak == rows[1].final_peak);
  for (const auto& r : rows) CHECK(r.iterations <= cfg.max_iterations);

  const auto sweep = interposer_sweep(spec, {40.0, 12.0}, cfg);
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[0].feasible);
  CHECK(sweep[0].area == Approx(1600.0));
  CHECK(sweep[0].peak > spec.ambient);
  CHECK_FALSE(sweep[1].feasible);
  CHECK_FALSE(sweep[1].reason.empty());
}
