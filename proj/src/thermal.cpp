#include "chiplet/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "chiplet/error.hpp"

namespace chiplet {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Block-Jacobi preconditioner whose blocks are the vertical columns of the
// grid. Vertical coupling through thin layers dominates the stencil, so
// inverting each column's tridiagonal block exactly removes most of the
// anisotropy that stalls plain diagonal scaling.
class ColumnPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  ColumnPreconditioner() = default;

  // Unknowns [starts[c], starts[c+1]) form column c, ordered bottom to top.
  void set_columns(std::vector<int> starts) { starts_ = std::move(starts); }

  template <typename MatType>
  ColumnPreconditioner& analyzePattern(const MatType&) {
    return *this;
  }

  template <typename MatType>
  ColumnPreconditioner& factorize(const MatType& mat) {
    const auto n = static_cast<std::size_t>(mat.rows());
    sub_.assign(n, 0.0);
    cprime_.assign(n, 0.0);
    denom_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), super(n, 0.0);
    for (int row = 0; row < mat.outerSize(); ++row)
      for (typename MatType::InnerIterator it(mat, row); it; ++it) {
        if (it.col() == row) diag[row] = it.value();
        if (it.col() == row + 1) super[row] = it.value();
      }
    for (std::size_t c = 0; c + 1 < starts_.size(); ++c) {
      const int s = starts_[c], e = starts_[c + 1];
      for (int k = s; k < e; ++k) {
        const double a = k == s ? 0.0 : super[k - 1];
        sub_[k] = a;
        denom_[k] = diag[k] - (k == s ? 0.0 : a * cprime_[k - 1]);
        cprime_[k] = k + 1 < e ? super[k] / denom_[k] : 0.0;
      }
    }
    return *this;
  }

  template <typename MatType>
  ColumnPreconditioner& compute(const MatType& mat) {
    analyzePattern(mat);
    return factorize(mat);
  }

  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    Eigen::VectorXd x(b.size());
    for (std::size_t c = 0; c + 1 < starts_.size(); ++c) {
      const int s = starts_[c], e = starts_[c + 1];
      for (int k = s; k < e; ++k) x[k] = (b[k] - (k == s ? 0.0 : sub_[k] * x[k - 1])) / denom_[k];
      for (int k = e - 2; k >= s; --k) x[k] -= cprime_[k] * x[k + 1];
    }
    return x;
  }

  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  std::vector<int> starts_;
  std::vector<double> sub_, cprime_, denom_;
};

// Overlap length of [a0, a1] and [b0, b1].
double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

struct Domain {
  int nx = 0, ny = 0;  // padded grid
  int px = 0, py = 0;  // padding cells on each side
  double dx = 0.0, dy = 0.0;
  std::vector<std::vector<double>> active;  // per layer
};

Domain build_domain(const PowerMap& pm, const ThermalStack& stack) {
  Domain d;
  d.dx = pm.dx;
  d.dy = pm.dy;
  const double w = pm.width(), h = pm.height();
  for (const auto& l : stack.layers) {
    if (!l.width_mm) continue;
    d.px = std::max(d.px, static_cast<int>(std::ceil((*l.width_mm - w) / 2.0 / d.dx - 1e-9)));
    d.py = std::max(d.py, static_cast<int>(std::ceil((*l.height_mm - h) / 2.0 / d.dy - 1e-9)));
  }
  d.nx = pm.nx + 2 * d.px;
  d.ny = pm.ny + 2 * d.py;

  for (const auto& l : stack.layers) {
    const double lw = l.width_mm.value_or(w), lh = l.height_mm.value_or(h);
    const double lx0 = (w - lw) / 2.0, ly0 = (h - lh) / 2.0;
    std::vector<double> frac(static_cast<std::size_t>(d.nx) * d.ny, 0.0);
    for (int j = 0; j < d.ny; ++j) {
      const double y0 = (j - d.py) * d.dy;
      const double fy = overlap(y0, y0 + d.dy, ly0, ly0 + lh) / d.dy;
      for (int i = 0; i < d.nx; ++i) {
        const double x0 = (i - d.px) * d.dx;
        const double f = fy * overlap(x0, x0 + d.dx, lx0, lx0 + lw) / d.dx;
        frac[static_cast<std::size_t>(j) * d.nx + i] = f > 1e-12 ? std::min(f, 1.0) : 0.0;
      }
    }
    d.active.push_back(std::move(frac));
  }
  return d;
}

}  // namespace

double PowerMap::total() const {
  double t = 0.0;
  for (double p : power) t += p;
  return t;
}

PowerMap rasterize(const Floorplan& fp, double resolution_mm) {
  if (!(resolution_mm > 0.0)) throw DomainError("rasterize: resolution must be > 0");
  if (!(fp.width > 0.0 && fp.height > 0.0)) throw DomainError("rasterize: interposer must have positive size");
  for (const auto& p : fp.placements)
    if (resolution_mm > std::min(p.width, p.height) + 1e-12)
      throw DomainError("rasterize: resolution " + std::to_string(resolution_mm) +
                        " mm exceeds the smallest dimension of chiplet '" + p.name + "'");

  PowerMap pm;
  pm.nx = std::max(1, static_cast<int>(std::ceil(fp.width / resolution_mm - 1e-9)));
  pm.ny = std::max(1, static_cast<int>(std::ceil(fp.height / resolution_mm - 1e-9)));
  pm.dx = fp.width / pm.nx;
  pm.dy = fp.height / pm.ny;
  const auto cells = static_cast<std::size_t>(pm.nx) * pm.ny;
  pm.power.assign(cells, 0.0);
  pm.coverage.assign(cells, 0.0);

  for (const auto& p : fp.placements) {
    const auto r = p.footprint();
    const double area = r.w * r.h;
    const int i0 = std::max(0, static_cast<int>(std::floor(r.x / pm.dx)));
    const int i1 = std::min(pm.nx - 1, static_cast<int>(std::ceil((r.x + r.w) / pm.dx)) - 1);
    const int j0 = std::max(0, static_cast<int>(std::floor(r.y / pm.dy)));
    const int j1 = std::min(pm.ny - 1, static_cast<int>(std::ceil((r.y + r.h) / pm.dy)) - 1);
    for (int j = j0; j <= j1; ++j) {
      const double oy = overlap(j * pm.dy, (j + 1) * pm.dy, r.y, r.y + r.h);
      for (int i = i0; i <= i1; ++i) {
        const double o = oy * overlap(i * pm.dx, (i + 1) * pm.dx, r.x, r.x + r.w);
        if (o <= 0.0) continue;
        const auto c = static_cast<std::size_t>(j) * pm.nx + i;
        pm.power[c] += p.power * o / area;
        pm.coverage[c] = std::min(1.0, pm.coverage[c] + o / (pm.dx * pm.dy));
      }
    }
  }
  return pm;
}

std::size_t TemperatureField::layer(std::string_view name) const {
  for (std::size_t l = 0; l < layer_names.size(); ++l)
    if (layer_names[l] == name) return l;
  throw ValidationError("layer", "unknown layer '" + std::string(name) + "'");
}

TemperatureField solve_steady_state(const PowerMap& pm, const ThermalStack& stack, const SolverOptions& opts) {
  validate(stack);
  const auto cells_in = static_cast<std::size_t>(pm.nx) * pm.ny;
  if (pm.nx <= 0 || pm.ny <= 0 || pm.power.size() != cells_in || pm.coverage.size() != cells_in)
    throw DomainError("solve_steady_state: inconsistent power map");

  const Domain d = build_domain(pm, stack);
  const int nl = static_cast<int>(stack.layers.size());
  const auto cells = static_cast<std::size_t>(d.nx) * d.ny;
  const double dx = d.dx * 1e-3, dy = d.dy * 1e-3;  // metres

  // Unknowns are numbered column by column, bottom to top within a column.
  std::vector<int> index(cells * nl, -1);
  std::vector<int> starts{0};
  int n = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    for (int l = 0; l < nl; ++l)
      if (d.active[l][c] > 0.0) index[c * nl + l] = n++;
    if (n != starts.back()) starts.push_back(n);
  }

  auto conductivity = [&](int l, int i, int j) {
    const auto& layer = stack.layers[l];
    if (l != static_cast<int>(stack.die_layer)) return layer.conductivity;
    const int ii = i - d.px, jj = j - d.py;
    const double cov = pm.coverage[static_cast<std::size_t>(jj) * pm.nx + ii];
    return cov * layer.conductivity + (1.0 - cov) * stack.fill_conductivity;
  };

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 7);
  std::vector<double> diag(n, 0.0);
  auto couple = [&](int a, int b, double g) {
    diag[a] += g;
    diag[b] += g;
    trips.emplace_back(a, b, -g);
    trips.emplace_back(b, a, -g);
  };

  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) {
      const auto c = static_cast<std::size_t>(j) * d.nx + i;
      for (int l = 0; l < nl; ++l) {
        const int u = index[c * nl + l];
        if (u < 0) continue;
        const double t = stack.layers[l].thickness_m;
        const double k = conductivity(l, i, j);
        const double f = d.active[l][c];
        if (i + 1 < d.nx) {
          const auto c2 = c + 1;
          const int v = index[c2 * nl + l];
          if (v >= 0) {
            const double phi = std::min(f, d.active[l][c2]);
            couple(u, v, phi * t * dy / (dx / 2.0 * (1.0 / k + 1.0 / conductivity(l, i + 1, j))));
          }
        }
        if (j + 1 < d.ny) {
          const auto c2 = c + static_cast<std::size_t>(d.nx);
          const int v = index[c2 * nl + l];
          if (v >= 0) {
            const double phi = std::min(f, d.active[l][c2]);
            couple(u, v, phi * t * dx / (dy / 2.0 * (1.0 / k + 1.0 / conductivity(l, i, j + 1))));
          }
        }
        if (l + 1 < nl) {
          const int v = index[c * nl + l + 1];
          if (v >= 0) {
            const double area = std::min(f, d.active[l + 1][c]) * dx * dy;
            const double t2 = stack.layers[l + 1].thickness_m;
            const double r = t / 2.0 / (k * area) + t2 / 2.0 / (conductivity(l + 1, i, j) * area);
            couple(u, v, 1.0 / r);
          }
        } else {
          diag[u] += stack.h * f * dx * dy;
        }
      }
    }
  for (int u = 0; u < n; ++u) trips.emplace_back(u, u, diag[u]);

  SpMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const int die = static_cast<int>(stack.die_layer);
  for (int j = 0; j < pm.ny; ++j)
    for (int i = 0; i < pm.nx; ++i) {
      const double p = pm.power[static_cast<std::size_t>(j) * pm.nx + i];
      if (p == 0.0) continue;
      const auto c = static_cast<std::size_t>(j + d.py) * d.nx + (i + d.px);
      rhs[index[c * nl + die]] += p;
    }

  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, ColumnPreconditioner> cg;
  cg.preconditioner().set_columns(starts);
  cg.setTolerance(opts.tolerance);
  cg.setMaxIterations(opts.max_iterations);
  cg.compute(a);

  Eigen::VectorXd x;
  const auto* warm = opts.warm_start;
  if (warm && warm->nx == d.nx && warm->ny == d.ny && static_cast<int>(warm->temperature.size()) == nl) {
    Eigen::VectorXd guess = Eigen::VectorXd::Zero(n);
    for (std::size_t c = 0; c < cells; ++c)
      for (int l = 0; l < nl; ++l)
        if (int u = index[c * nl + l]; u >= 0 && std::isfinite(warm->temperature[l][c]))
          guess[u] = warm->temperature[l][c] - warm->ambient;
    x = cg.solveWithGuess(rhs, guess);
  } else {
    x = cg.solve(rhs);
  }
  if (cg.info() != Eigen::Success)
    throw SolverError("thermal solver did not converge after " + std::to_string(cg.iterations()) +
                          " iterations (relative residual " + std::to_string(cg.error()) + ")",
                      cg.error());

  TemperatureField tf;
  tf.nx = d.nx;
  tf.ny = d.ny;
  tf.dx = d.dx;
  tf.dy = d.dy;
  tf.x0 = -d.px * d.dx;
  tf.y0 = -d.py * d.dy;
  tf.ambient = stack.ambient;
  tf.iterations = static_cast<int>(cg.iterations());
  tf.residual = cg.error();
  tf.active = d.active;
  for (int l = 0; l < nl; ++l) {
    tf.layer_names.push_back(stack.layers[l].name);
    std::vector<double> temps(cells, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t c = 0; c < cells; ++c)
      if (int u = index[c * nl + l]; u >= 0) temps[c] = stack.ambient + x[u];
    tf.temperature.push_back(std::move(temps));
  }
  return tf;
}

double convective_outflow(const TemperatureField& tf, const ThermalStack& stack) {
  const auto& temps = tf.temperature.back();
  const auto& active = tf.active.back();
  const double cell_area = tf.dx * tf.dy * 1e-6;
  double q = 0.0;
  for (std::size_t c = 0; c < temps.size(); ++c)
    if (active[c] > 0.0) q += stack.h * active[c] * cell_area * (temps[c] - tf.ambient);
  return q;
}

CellPeak peak_cell(const TemperatureField& tf, std::string_view layer) {
  const auto l = tf.layer(layer);
  CellPeak best{-std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int j = 0; j < tf.ny; ++j)
    for (int i = 0; i < tf.nx; ++i) {
      const auto c = static_cast<std::size_t>(j) * tf.nx + i;
      if (tf.active[l][c] <= 0.0) continue;
      if (tf.temperature[l][c] > best.temperature)
        best = {tf.temperature[l][c], tf.x0 + (i + 0.5) * tf.dx, tf.y0 + (j + 0.5) * tf.dy};
    }
  return best;
}

double peak_temperature(const TemperatureField& tf, std::string_view layer) {
  return peak_cell(tf, layer).temperature;
}

SocComparison compare_soc_vs_chiplet(const Floorplan& soc_plan, const Floorplan& split_plan,
                                     const ThermalStack& stack, double resolution_mm) {
  const double p1 = soc_plan.total_power(), p2 = split_plan.total_power();
  if (std::abs(p1 - p2) > 1e-9 * std::max(std::abs(p1), std::abs(p2)))
    throw DomainError("compare_soc_vs_chiplet: plans must carry equal total power (" + std::to_string(p1) +
                      " W vs " + std::to_string(p2) + " W)");
  check_floorplan(soc_plan);
  check_floorplan(split_plan);
  const auto& die = stack.layers.at(stack.die_layer).name;
  SocComparison out;
  out.peak_soc = peak_temperature(solve_steady_state(rasterize(soc_plan, resolution_mm), stack), die);
  out.peak_split = peak_temperature(solve_steady_state(rasterize(split_plan, resolution_mm), stack), die);
  out.delta = out.peak_soc - out.peak_split;
  return out;
}

Floorplan monolithic_plan(double interposer_side, double die_area, double power) {
  const double a = std::sqrt(die_area);
  Floorplan fp;
  fp.width = fp.height = interposer_side;
  fp.placements.push_back({"soc", a, a, power, (interposer_side - a) / 2.0, (interposer_side - a) / 2.0, 0});
  fp.connectivity = ConnectivityMatrix(1);
  return fp;
}

Floorplan split_plan(double interposer_side, int per_side, double die_area, double spacing, double total_power) {
  const double a = std::sqrt(die_area);
  const double span = per_side * a + (per_side - 1) * spacing;
  const double start = (interposer_side - span) / 2.0;
  const double p = total_power / (per_side * per_side);
  Floorplan fp;
  fp.width = fp.height = interposer_side;
  for (int j = 0; j < per_side; ++j)
    for (int i = 0; i < per_side; ++i)
      fp.placements.push_back({"die" + std::to_string(j * per_side + i), a, a, p, start + i * (a + spacing),
                               start + j * (a + spacing), 0});
  fp.connectivity = ConnectivityMatrix(fp.placements.size());
  return fp;
}

}  // namespace chiplet
