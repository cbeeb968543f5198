#pragma once

// Steady-state compact thermal model of a 2.5D package.
//
// The package is discretized into a lateral grid of cells per layer. Each
// cell is a node; neighbours are joined by conduction resistances d/(k A)
// (half-cell lengths in series), the top layer exchanges heat with ambient
// through h*A, and sides and bottom are adiabatic. Layers may have a lateral
// extent different from the interposer (spreader, sink), in which case the
// grid is padded with whole cells and partially covered cells carry
// fractional area. The resulting SPD system is solved with preconditioned CG.

#include <string>
#include <string_view>
#include <vector>

#include "chiplet/floorplan.hpp"
#include "chiplet/model.hpp"

namespace chiplet {

/// Chiplet power on the interposer grid. Cell (i, j) is power[j * nx + i].
struct PowerMap {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;  // mm
  double dy = 0.0;  // mm
  std::vector<double> power;     // W
  std::vector<double> coverage;  // die area fraction of each cell, [0, 1]

  double width() const { return nx * dx; }
  double height() const { return ny * dy; }
  double total() const;
};

/// Area-weighted spread of every chiplet's power over the cells it covers.
/// The cell size is the largest one <= resolution that tiles the interposer.
/// Throws DomainError when resolution exceeds the smallest chiplet dimension.
PowerMap rasterize(const Floorplan& fp, double resolution_mm);

/// Temperatures on the padded domain grid. Cell (i, j) of a layer is
/// index j * nx + i; x0/y0 place the domain relative to the interposer's
/// lower-left corner. Cells outside a layer hold NaN and have zero active fraction.
struct TemperatureField {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;  // mm
  double dy = 0.0;  // mm
  double x0 = 0.0;  // mm
  double y0 = 0.0;  // mm
  double ambient = 0.0;
  std::vector<std::string> layer_names;
  std::vector<std::vector<double>> temperature;  // per layer, degC
  std::vector<std::vector<double>> active;       // per layer, fraction of cell inside the layer
  int iterations = 0;
  double residual = 0.0;

  std::size_t layer(std::string_view name) const;
};

struct SolverOptions {
  double tolerance = 1e-8;  // relative residual
  int max_iterations = 20000;
  // Optional initial guess (same grid); speeds up repeated nearby solves.
  const TemperatureField* warm_start = nullptr;
};

/// Throws SolverError if the residual target is not met within max_iterations.
TemperatureField solve_steady_state(const PowerMap& pm, const ThermalStack& stack, const SolverOptions& opts = {});

/// Heat leaving through the convective top boundary, sum of h*A*(T - ambient).
double convective_outflow(const TemperatureField& tf, const ThermalStack& stack);

struct CellPeak {
  double temperature = 0.0;
  double x = 0.0;  // cell centre relative to the interposer, mm
  double y = 0.0;
};

/// Hottest cell of a layer. Throws ValidationError for an unknown layer.
CellPeak peak_cell(const TemperatureField& tf, std::string_view layer);
double peak_temperature(const TemperatureField& tf, std::string_view layer);

struct SocComparison {
  double peak_soc = 0.0;
  double peak_split = 0.0;
  double delta = 0.0;  // peak_soc - peak_split
};

/// Peak die-layer temperature of both plans. Both must carry the same total power.
SocComparison compare_soc_vs_chiplet(const Floorplan& soc_plan, const Floorplan& split_plan,
                                     const ThermalStack& stack, double resolution_mm);

/// One square die of the given area centred on a square interposer.
Floorplan monolithic_plan(double interposer_side, double die_area, double power);

/// n x n square dies of the given area, `spacing` apart, centred on a square
/// interposer, sharing `total_power` equally.
Floorplan split_plan(double interposer_side, int per_side, double die_area, double spacing, double total_power);

}  // namespace chiplet
