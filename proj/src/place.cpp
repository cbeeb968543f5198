#include "chiplet/place.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "chiplet/error.hpp"
#include "chiplet/thermal.hpp"

namespace chiplet {

namespace {

double normalized(double v, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return (std::clamp(v, lo, hi) - lo) / (hi - lo);
}

// Coarse-grid evaluator; each solve starts from the previous field.
class Evaluator {
 public:
  Evaluator(const ThermalStack& stack, double resolution)
      : stack_(stack), resolution_(resolution), die_(stack.layers.at(stack.die_layer).name) {}

  double peak(const Floorplan& fp) {
    SolverOptions opts;
    opts.warm_start = last_.get();
    auto tf = std::make_unique<TemperatureField>(solve_steady_state(rasterize(fp, resolution_), stack_, opts));
    const double t = peak_temperature(*tf, die_);
    last_ = std::move(tf);
    return t;
  }

 private:
  const ThermalStack& stack_;
  double resolution_;
  std::string die_;
  std::unique_ptr<TemperatureField> last_;
};

double fine_peak(const Floorplan& fp, const ThermalStack& stack, double resolution) {
  const auto tf = solve_steady_state(rasterize(fp, resolution), stack);
  return peak_temperature(tf, stack.layers.at(stack.die_layer).name);
}

struct Sample {
  Floorplan fp;
  double t = 0.0;
  double w = 0.0;
};

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double alpha_for(double t) {
  if (!(t > 60.0)) return 0.0;
  return std::min(0.1 + (t - 45.0) / 100.0, 0.9);
}

void NormalizationBounds::observe(double t, double w) {
  if (empty) {
    t_min = t_max = t;
    w_min = w_max = w;
    empty = false;
    return;
  }
  t_min = std::min(t_min, t);
  t_max = std::max(t_max, t);
  w_min = std::min(w_min, w);
  w_max = std::max(w_max, w);
}

double anneal_cost(double t, double w, const NormalizationBounds& nb) {
  const double a = alpha_for(t);
  return a * normalized(t, nb.t_min, nb.t_max) + (1.0 - a) * normalized(w, nb.w_min, nb.w_max);
}

double acceptance_probability(double cost_current, double cost_neighbor, double k) {
  if (!(k > 0.0)) throw DomainError("acceptance_probability: K must be > 0");
  return std::min(1.0, std::exp((cost_current - cost_neighbor) / k));
}

Floorplan propose_move(const Floorplan& fp, Rng& rng, const AnnealConfig& cfg, Move* move) {
  const auto n = fp.placements.size();
  if (n == 0) throw CongestionError("floorplan too congested: no chiplets to move");
  auto pick = [&](std::size_t bound) {
    return std::min(bound - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(bound)));
  };

  for (int attempt = 1; attempt <= cfg.max_retries; ++attempt) {
    Floorplan out = fp;
    const double r = uniform01(rng);
    const MoveKind kind = r < 0.5 ? MoveKind::translate : (r < 0.75 || n < 2 ? MoveKind::rotate : MoveKind::swap);
    const std::size_t i = pick(n);
    std::size_t j = i;
    auto& p = out.placements[i];

    switch (kind) {
      case MoveKind::translate: {
        const double dx = (2.0 * uniform01(rng) - 1.0) * cfg.step_fraction * fp.width;
        const double dy = (2.0 * uniform01(rng) - 1.0) * cfg.step_fraction * fp.height;
        p.x += dx;
        p.y += dy;
        break;
      }
      case MoveKind::rotate: {
        if (p.width == p.height) continue;  // footprint unchanged
        const auto before = p.footprint();
        p.rotation = (p.rotation + 90) % 360;
        const auto after = p.footprint();
        p.x = before.cx() - after.w / 2.0;
        p.y = before.cy() - after.h / 2.0;
        break;
      }
      case MoveKind::swap: {
        j = pick(n - 1);
        if (j >= i) ++j;
        auto& q = out.placements[j];
        const auto a = p.footprint(), b = q.footprint();
        p.x = b.cx() - a.w / 2.0;
        p.y = b.cy() - a.h / 2.0;
        q.x = a.cx() - b.w / 2.0;
        q.y = a.cy() - b.h / 2.0;
        break;
      }
    }
    if (!is_legal(out)) continue;
    if (move) *move = {kind, i, j, attempt};
    return out;
  }
  throw CongestionError("floorplan too congested: no legal move after " + std::to_string(cfg.max_retries) +
                        " attempts");
}

PlaceResult optimize(const PackageSpec& spec, const AnnealConfig& cfg) {
  validate(spec);
  validate(cfg);
  const auto& stack = spec.stack;

  PlaceResult res;
  res.initial = bsp_placement(spec);
  Evaluator eval(stack, cfg.coarse_resolution);
  Rng rng(cfg.seed);

  std::vector<Sample> seen;
  seen.push_back({res.initial, eval.peak(res.initial), wirelength(res.initial)});
  res.bounds.observe(seen[0].t, seen[0].w);

  std::vector<std::size_t> epoch_end;  // index into `seen` after each epoch
  if (res.initial.placements.size() == 1) {
    res.history.push_back({0, seen[0].t, seen[0].w, anneal_cost(seen[0].t, seen[0].w, res.bounds), cfg.k0, 0.0, 0});
    epoch_end.push_back(0);
    res.iterations = 1;
    res.converged = true;
  } else {
    // Random walk from the initial plan to seed the normalization bounds.
    Floorplan walk = res.initial;
    for (int s = 0; s < cfg.warmup_samples; ++s) {
      walk = propose_move(walk, rng, cfg);
      seen.push_back({walk, eval.peak(walk), wirelength(walk)});
      res.bounds.observe(seen.back().t, seen.back().w);
    }

    Floorplan current = res.initial;
    double cur_t = seen[0].t, cur_w = seen[0].w;
    double prev_t = cur_t;
    int streak = 0;
    double k = cfg.k0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      int accepted = 0;
      for (int m = 0; m < cfg.moves_per_iteration; ++m) {
        Floorplan cand = propose_move(current, rng, cfg);
        const double t = eval.peak(cand), w = wirelength(cand);
        res.bounds.observe(t, w);
        const double c_cur = anneal_cost(cur_t, cur_w, res.bounds);
        const double c_new = anneal_cost(t, w, res.bounds);
        const bool take = uniform01(rng) < acceptance_probability(c_cur, c_new, k);
        seen.push_back({cand, t, w});
        if (take) {
          current = std::move(cand);
          cur_t = t;
          cur_w = w;
          ++accepted;
        }
      }
      res.history.push_back({it, cur_t, cur_w, anneal_cost(cur_t, cur_w, res.bounds), k, 0.0, accepted});
      epoch_end.push_back(seen.size() - 1);
      res.iterations = it + 1;

      streak = std::abs(cur_t - prev_t) < cfg.tol ? streak + 1 : 0;
      prev_t = cur_t;
      if (streak >= cfg.persistence) {
        res.converged = true;
        break;
      }
      k *= cfg.decay;
    }
  }

  // Rank every evaluated plan under the final bounds.
  std::size_t best = 0;
  double best_cost = anneal_cost(seen[0].t, seen[0].w, res.bounds);
  res.initial_cost = best_cost;
  std::size_t e = 0;
  for (std::size_t s = 0; s < seen.size(); ++s) {
    const double c = anneal_cost(seen[s].t, seen[s].w, res.bounds);
    if (c < best_cost) {
      best_cost = c;
      best = s;
    }
    while (e < epoch_end.size() && epoch_end[e] == s) res.history[e++].best_cost = best_cost;
  }

  res.best = seen[best].fp;
  res.final_cost = best_cost;
  res.initial_wirelength = seen[0].w;
  res.final_wirelength = seen[best].w;
  res.initial_peak = fine_peak(res.initial, stack, cfg.fine_resolution);
  res.final_peak = best == 0 ? res.initial_peak : fine_peak(res.best, stack, cfg.fine_resolution);
  return res;
}

std::vector<CalibrationRow> calibrate_k(const PackageSpec& spec, const std::vector<double>& k_candidates,
                                        const AnnealConfig& cfg) {
  if (k_candidates.empty()) throw DomainError("calibrate_k: candidate list is empty");
  std::vector<CalibrationRow> rows;
  for (double k0 : k_candidates) {
    AnnealConfig c = cfg;
    c.k0 = k0;
    const auto r = optimize(spec, c);
    rows.push_back({k0, r.iterations, r.converged, r.final_peak, r.final_wirelength});
  }
  return rows;
}

std::vector<SweepRow> interposer_sweep(const PackageSpec& spec, const std::vector<double>& sides,
                                       const AnnealConfig& cfg) {
  if (sides.empty()) throw DomainError("interposer_sweep: side list is empty");
  validate(spec.stack);
  validate_connectivity(spec);
  std::vector<SweepRow> rows;
  for (double side : sides) {
    SweepRow row;
    row.side = side;
    row.area = side * side;
    PackageSpec s = spec;
    s.interposer_width = s.interposer_height = side;
    try {
      const auto r = optimize(s, cfg);
      row.feasible = true;
      row.peak = r.final_peak;
      row.iterations = r.iterations;
      row.wirelength = r.final_wirelength;
    } catch (const ValidationError& e) {
      row.reason = e.what();
    } catch (const CongestionError& e) {
      row.reason = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace chiplet
