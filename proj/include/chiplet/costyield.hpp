#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chiplet/model.hpp"

namespace chiplet {

/// Negative-binomial die yield, (1 + d0*area/alpha)^-alpha.
double die_yield(double area, const ProcessCostParams& params);

/// Whole dies per wafer after edge loss: floor(pi (D/2)^2 / A - pi D / sqrt(2A)), clamped at 0.
std::int64_t gross_dies_per_wafer(double area, double wafer_diameter);

/// die_survival^n_dies * conn_survival^n_connections.
double assembly_yield(std::uint64_t n_dies, std::uint64_t n_connections, const ProcessCostParams& params);

struct DieRequest {
  double area = 0.0;  // mm^2
  std::uint64_t count = 1;
};

struct DieCost {
  double area = 0.0;
  std::uint64_t count = 0;
  std::int64_t gross_dies_per_wafer = 0;
  double die_yield = 1.0;
  double cost_per_die = 0.0;
};

struct CostBreakdown {
  std::vector<DieCost> dies;
  double assembly_yield = 1.0;
  double raw_die_cost = 0.0;  // sum of count * cost_per_die
  double package_cost = 0.0;  // raw_die_cost / assembly_yield
};

/// Cost of one die: wafer_cost / (gross dies * die yield), or wafer_cost / die yield
/// when params.yield_only_die_cost is set. Throws DomainError when no die fits the wafer.
double cost_per_die(double area, const ProcessCostParams& params);

CostBreakdown package_cost(std::span<const DieRequest> dies, std::uint64_t n_connections,
                           const ProcessCostParams& params);

/// package_cost(monolith) / package_cost(chiplet system). Independent of wafer_cost.
double cost_ratio(double soc_area, std::span<const double> chiplet_areas, std::uint64_t n_connections,
                  const ProcessCostParams& params);

}  // namespace chiplet
