#include "chiplet/perf.hpp"

#include <algorithm>

#include "chiplet/error.hpp"

namespace chiplet {

double service_latency(const ServiceSpec& s) {
  if (!(s.service_bandwidth > 0.0)) throw DomainError("service_latency: service bandwidth must be > 0");
  return s.word_bits / s.service_bandwidth + s.base_latency;
}

double throughput(const ServiceSpec& s) {
  return s.bits_per_channel_per_cycle * s.clock * s.channels;
}

double golden_ratio(double throughput, double latency, double cost) {
  if (!(latency > 0.0)) throw DomainError("golden_ratio: latency must be > 0");
  if (!(cost > 0.0)) throw DomainError("golden_ratio: cost must be > 0");
  return throughput / (latency * cost);
}

std::vector<ConfigResult> rank_configs(std::span<const ConfigMetrics> configs) {
  if (configs.empty()) throw DomainError("rank_configs: no configurations given");
  std::vector<ConfigResult> out;
  out.reserve(configs.size());
  for (const auto& c : configs)
    out.push_back({c.name, c.cost, c.throughput, c.latency, golden_ratio(c.throughput, c.latency, c.cost), 0.0});

  const auto lowest = std::min_element(out.begin(), out.end(), [](const auto& a, const auto& b) {
                        return a.golden_ratio < b.golden_ratio;
                      })->golden_ratio;
  for (auto& r : out) r.relative = lowest > 0.0 ? r.golden_ratio / lowest : 1.0;

  std::stable_sort(out.begin(), out.end(), [](const ConfigResult& a, const ConfigResult& b) {
    if (a.golden_ratio != b.golden_ratio) return a.golden_ratio > b.golden_ratio;
    return a.name < b.name;
  });
  return out;
}

}  // namespace chiplet
