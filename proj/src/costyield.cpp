#include "chiplet/costyield.hpp"

#include <cmath>
#include <numbers>

#include "chiplet/error.hpp"

namespace chiplet {

double die_yield(double area, const ProcessCostParams& params) {
  if (!(area >= 0.0)) throw DomainError("die_yield: area must be >= 0");
  return std::pow(1.0 + params.d0 * area / params.alpha_yield, -params.alpha_yield);
}

std::int64_t gross_dies_per_wafer(double area, double wafer_diameter) {
  if (!(area > 0.0)) throw DomainError("gross_dies_per_wafer: area must be > 0");
  if (!(wafer_diameter > 0.0)) throw DomainError("gross_dies_per_wafer: wafer diameter must be > 0");
  constexpr double pi = std::numbers::pi;
  const double r = wafer_diameter / 2.0;
  const double n = pi * r * r / area - pi * wafer_diameter / std::sqrt(2.0 * area);
  return n <= 0.0 ? 0 : static_cast<std::int64_t>(std::floor(n));
}

double assembly_yield(std::uint64_t n_dies, std::uint64_t n_connections, const ProcessCostParams& params) {
  return std::pow(params.assembly_die_survival, static_cast<double>(n_dies)) *
         std::pow(params.assembly_conn_survival, static_cast<double>(n_connections));
}

double cost_per_die(double area, const ProcessCostParams& params) {
  const double y = die_yield(area, params);
  if (params.yield_only_die_cost) return params.wafer_cost / y;
  const auto gross = gross_dies_per_wafer(area, params.wafer_diameter);
  if (gross == 0) throw DomainError("die exceeds wafer (area " + std::to_string(area) + " mm^2)");
  return params.wafer_cost / (static_cast<double>(gross) * y);
}

CostBreakdown package_cost(std::span<const DieRequest> dies, std::uint64_t n_connections,
                           const ProcessCostParams& params) {
  CostBreakdown out;
  std::uint64_t total_dies = 0;
  for (const auto& d : dies) {
    if (!(d.area > 0.0)) throw DomainError("package_cost: die area must be > 0");
    DieCost dc;
    dc.area = d.area;
    dc.count = d.count;
    dc.gross_dies_per_wafer = gross_dies_per_wafer(d.area, params.wafer_diameter);
    dc.die_yield = die_yield(d.area, params);
    dc.cost_per_die = cost_per_die(d.area, params);
    out.raw_die_cost += static_cast<double>(d.count) * dc.cost_per_die;
    total_dies += d.count;
    out.dies.push_back(dc);
  }
  if (total_dies == 0) return out;
  out.assembly_yield = assembly_yield(total_dies, n_connections, params);
  out.package_cost = out.raw_die_cost / out.assembly_yield;
  return out;
}

double cost_ratio(double soc_area, std::span<const double> chiplet_areas, std::uint64_t n_connections,
                  const ProcessCostParams& params) {
  const DieRequest soc[] = {{soc_area, 1}};
  std::vector<DieRequest> split;
  split.reserve(chiplet_areas.size());
  for (double a : chiplet_areas) split.push_back({a, 1});
  const double denom = package_cost(split, n_connections, params).package_cost;
  if (!(denom > 0.0)) throw DomainError("cost_ratio: chiplet system has no dies");
  return package_cost(soc, 0, params).package_cost / denom;
}

}  // namespace chiplet
