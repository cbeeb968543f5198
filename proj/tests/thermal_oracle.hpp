#pragma once

// Test-side helpers for the thermal solver: random power maps and an
// independent dense assembly of the same finite-volume network.

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "chiplet/thermal.hpp"

namespace chiplet::testing {

inline PowerMap blank(int nx, int ny, double d) {
  PowerMap pm;
  pm.nx = nx;
  pm.ny = ny;
  pm.dx = pm.dy = d;
  pm.power.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  pm.coverage.assign(pm.power.size(), 0.0);
  return pm;
}

inline PowerMap random_map(std::mt19937_64& rng, int nx, int ny, double d) {
  auto pm = blank(nx, ny, d);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t c = 0; c < pm.power.size(); ++c) {
    pm.coverage[c] = u(rng) < 0.5 ? 0.0 : u(rng);
    pm.power[c] = pm.coverage[c] * 2.0 * u(rng);
  }
  return pm;
}

// Three layers spanning the interposer; small enough for a dense solve.
inline ThermalStack small_stack() {
  ThermalStack s;
  s.layers = {{"interposer", 0.1e-3, 130.0, {}, {}},
              {"chiplet", 0.15e-3, 130.0, {}, {}},
              {"lid", 1.0e-3, 400.0, {}, {}}};
  s.die_layer = 1;
  s.fill_conductivity = 0.9;
  s.h = 5000.0;
  s.ambient = 25.0;
  return s;
}

// Dense reference: same finite-volume network assembled node by node and
// solved by LU. Valid only for stacks whose layers all span the interposer.
inline std::vector<std::vector<double>> dense_reference(const PowerMap& pm, const ThermalStack& s) {
  const int nx = pm.nx, ny = pm.ny, nl = static_cast<int>(s.layers.size());
  const int n = nx * ny * nl;
  const double dx = pm.dx * 1e-3, dy = pm.dy * 1e-3;
  auto id = [&](int l, int i, int j) { return (l * ny + j) * nx + i; };
  auto k = [&](int l, int i, int j) {
    if (l != static_cast<int>(s.die_layer)) return s.layers[l].conductivity;
    const double cov = pm.coverage[static_cast<std::size_t>(j) * nx + i];
    return cov * s.layers[l].conductivity + (1.0 - cov) * s.fill_conductivity;
  };
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  auto link = [&](int p, int q, double g) {
    a(p, p) += g;
    a(q, q) += g;
    a(p, q) -= g;
    a(q, p) -= g;
  };
  for (int l = 0; l < nl; ++l) {
    const double t = s.layers[l].thickness_m;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double k0 = k(l, i, j);
        if (i + 1 < nx) {
          const double r = dx / 2.0 / (k0 * t * dy) + dx / 2.0 / (k(l, i + 1, j) * t * dy);
          link(id(l, i, j), id(l, i + 1, j), 1.0 / r);
        }
        if (j + 1 < ny) {
          const double r = dy / 2.0 / (k0 * t * dx) + dy / 2.0 / (k(l, i, j + 1) * t * dx);
          link(id(l, i, j), id(l, i, j + 1), 1.0 / r);
        }
        if (l + 1 < nl) {
          const double t2 = s.layers[l + 1].thickness_m;
          const double r = t / 2.0 / (k0 * dx * dy) + t2 / 2.0 / (k(l + 1, i, j) * dx * dy);
          link(id(l, i, j), id(l + 1, i, j), 1.0 / r);
        } else {
          a(id(l, i, j), id(l, i, j)) += s.h * dx * dy;
        }
      }
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      b[id(static_cast<int>(s.die_layer), i, j)] = pm.power[static_cast<std::size_t>(j) * nx + i];
  const Eigen::VectorXd x = a.partialPivLu().solve(b);
  std::vector<std::vector<double>> out(nl, std::vector<double>(static_cast<std::size_t>(nx) * ny));
  for (int l = 0; l < nl; ++l)
    for (int c = 0; c < nx * ny; ++c) out[l][c] = s.ambient + x[l * nx * ny + c];
  return out;
}

}  // namespace chiplet::testing
