#pragma once

// Thermally aware simulated-annealing placement on the interposer.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chiplet/floorplan.hpp"
#include "chiplet/model.hpp"

namespace chiplet {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

/// 0 at or below 60 degC, otherwise min(0.1 + (T - 45)/100, 0.9).
double alpha_for(double temperature);

/// Running min/max of observed peak temperature and wirelength.
struct NormalizationBounds {
  double t_min = 0.0, t_max = 0.0;
  double w_min = 0.0, w_max = 0.0;
  bool empty = true;

  void observe(double temperature, double wirelength);
};

/// alpha*(T - Tmin)/(Tmax - Tmin) + (1 - alpha)*(W - Wmin)/(Wmax - Wmin), with
/// T and W clamped into their bounds. A degenerate bound contributes 0.
double anneal_cost(double temperature, double wirelength, const NormalizationBounds& nb);

/// min(1, exp((cost_current - cost_neighbor)/k)). Throws DomainError for k <= 0.
double acceptance_probability(double cost_current, double cost_neighbor, double k);

enum class MoveKind { translate, rotate, swap };

struct Move {
  MoveKind kind = MoveKind::translate;
  std::size_t first = 0;
  std::size_t second = 0;  // swap partner
  int attempts = 1;
};

/// One legal random neighbour: translate a chiplet by at most
/// step_fraction * interposer side per axis, rotate one by 90 degrees about its
/// centre, or swap the centres of two. Illegal draws are redrawn up to
/// max_retries times, then CongestionError("floorplan too congested").
Floorplan propose_move(const Floorplan& fp, Rng& rng, const AnnealConfig& cfg, Move* move = nullptr);

struct HistoryRow {
  int iteration = 0;
  double peak_temperature = 0.0;  // current plan, coarse grid, degC
  double wirelength = 0.0;        // current plan, mm
  double cost = 0.0;              // current plan under the bounds of that epoch
  double k = 0.0;
  double best_cost = 0.0;         // best plan seen so far, under the final bounds
  int accepted = 0;
};

struct PlaceResult {
  Floorplan initial;
  Floorplan best;
  std::vector<HistoryRow> history;
  NormalizationBounds bounds;  // final
  int iterations = 0;
  bool converged = false;
  double initial_peak = 0.0;  // fine grid
  double final_peak = 0.0;    // fine grid
  double initial_wirelength = 0.0;
  double final_wirelength = 0.0;
  double initial_cost = 0.0;  // final bounds
  double final_cost = 0.0;    // final bounds
};

/// Anneals from the BSP packing. Epoch i uses K = k0 * decay^i and stops once
/// the current plan's coarse peak temperature moves by less than tol for
/// `persistence` consecutive epochs, or after max_iterations. Returns the
/// lowest-cost plan evaluated, ranked under the final normalization bounds.
PlaceResult optimize(const PackageSpec& spec, const AnnealConfig& cfg);

struct CalibrationRow {
  double k0 = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_peak = 0.0;
  double final_wirelength = 0.0;
};

/// One optimize() run per candidate, every run seeded with cfg.seed.
std::vector<CalibrationRow> calibrate_k(const PackageSpec& spec, const std::vector<double>& k_candidates,
                                        const AnnealConfig& cfg);

struct SweepRow {
  double side = 0.0;  // mm
  double area = 0.0;  // mm^2
  bool feasible = false;
  double peak = 0.0;
  int iterations = 0;
  double wirelength = 0.0;
  std::string reason;  // why an infeasible row is infeasible
};

/// optimize() on square interposers of each side length. Sizes that fail
/// validation or packing yield rows with feasible = false.
std::vector<SweepRow> interposer_sweep(const PackageSpec& spec, const std::vector<double>& sides,
                                       const AnnealConfig& cfg);

}  // namespace chiplet
