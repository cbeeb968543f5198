#include "chiplet/power.hpp"

#include <set>

#include "chiplet/error.hpp"

namespace chiplet {

PowerBreakdown power_breakdown(const PowerParams& p) {
  PowerBreakdown b;
  const double v = p.voltage;
  b.switching = p.activity * p.load_capacitance * p.frequency * v * v;
  const double overdrive = v - 2.0 * p.threshold_voltage;
  if (overdrive > 0.0)
    b.short_circuit =
        p.activity * (p.gain_factor / 12.0) * p.frequency * p.transition_time * overdrive * overdrive * overdrive;
  b.leakage = p.leakage_current * v * p.transistor_density * p.area;
  b.total = b.switching + b.short_circuit + b.leakage;
  return b;
}

SystemPower system_power(std::span<const TileOperatingPoint> tiles) {
  SystemPower out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const auto& t = tiles[i];
    if (!names.insert(t.name).second)
      throw ValidationError("tiles[" + std::to_string(i) + "].name", "duplicate tile '" + t.name + "'");
    if (!(t.frequency > 0.0))
      throw ValidationError("tiles[" + std::to_string(i) + "].frequency", "must be > 0");
    PowerParams p = t.params;
    p.frequency = t.frequency;
    p.voltage = t.voltage;
    out.tiles.push_back({t.name, power_breakdown(p)});
    out.total += out.tiles.back().power.total;
  }
  return out;
}

}  // namespace chiplet
