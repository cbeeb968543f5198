#pragma once

#include <span>
#include <string>
#include <vector>

#include "chiplet/model.hpp"

namespace chiplet {

/// b/R + T_i. Throws DomainError when R <= 0.
double service_latency(const ServiceSpec& s);

/// k * F * channels.
double throughput(const ServiceSpec& s);

/// throughput / (latency * cost). Throws DomainError on non-positive latency or cost.
double golden_ratio(double throughput, double latency, double cost);

struct ConfigResult {
  std::string name;
  double cost = 0.0;
  double throughput = 0.0;
  double latency = 0.0;
  double golden_ratio = 0.0;
  double relative = 0.0;  // golden_ratio / min golden_ratio over the set
};

/// Sorted by golden ratio descending, ties broken by name.
std::vector<ConfigResult> rank_configs(std::span<const ConfigMetrics> configs);

}  // namespace chiplet
