#pragma once

#include <span>
#include <string>
#include <vector>

#include "chiplet/model.hpp"

namespace chiplet {

struct PowerBreakdown {
  double switching = 0.0;
  double short_circuit = 0.0;
  double leakage = 0.0;
  double total = 0.0;
};

/// Switching A*C*F*V^2, short-circuit A*(B/12)*F*T*(V-2Vth)^3 (zero when V <= 2Vth),
/// leakage I*V*TDensity*area.
PowerBreakdown power_breakdown(const PowerParams& p);

struct TilePower {
  std::string name;
  PowerBreakdown power;
};

struct SystemPower {
  std::vector<TilePower> tiles;
  double total = 0.0;
};

/// Per-tile breakdowns with each tile's own (F, V). Duplicate names throw ValidationError.
SystemPower system_power(std::span<const TileOperatingPoint> tiles);

}  // namespace chiplet
