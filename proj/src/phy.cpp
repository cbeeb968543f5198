#include "chiplet/phy.hpp"

#include <cmath>
#include <numbers>

#include "chiplet/error.hpp"

namespace chiplet::phy {

namespace {
constexpr double pi = std::numbers::pi;
}

double skin_depth(double frequency, double conductivity) {
  return std::pow(pi * frequency * kMu0 * conductivity, -0.5);
}

LineParams line_params(const TraceGeometry& g, double frequency) {
  if (!(frequency > 0.0)) throw DomainError("line_params: frequency must be > 0");
  const double v0 = 1.0 / std::sqrt(kMu0 * kEps0);
  const double sigma = g.conductivity;
  const double w = g.trace_width;
  const double t = g.trace_thickness;

  LineParams lp;
  lp.skin_depth = skin_depth(frequency, sigma);
  lp.c_per_length = g.relative_permittivity * (w / g.interposer_height + 0.441) / (30.0 * pi * v0);
  lp.r_dc_per_length = 1.0 / sigma * (1.0 / (w * t) + 1.0 / (2.0 * g.ground_thickness));

  const double perimeter = 2.0 * t - 4.0 * lp.skin_depth + 2.0 * w;
  if (!(perimeter > 0.0)) throw DomainError("line_params: skin depth exceeds geometry");
  // The trailing 1/(2 sigma) term is carried over as-is; it is ~1e-8 Ohm/m.
  lp.r_ac_per_length = 1.0 / sigma * (1.0 / (lp.skin_depth * perimeter) + 1.0 / (2.0 * sigma));
  lp.r_total_per_length = lp.r_dc_per_length + lp.r_ac_per_length;
  return lp;
}

double rise_time(double length, const LineParams& lp) {
  if (!(length >= 0.0)) throw DomainError("rise_time: length must be >= 0");
  return (lp.r_total_per_length * length) * (lp.c_per_length * length) * std::log(9.0);
}

double bandwidth_3db(double length, const LineParams& lp) {
  if (!(length > 0.0)) throw DomainError("bandwidth_3db: length must be > 0");
  return 0.35 / rise_time(length, lp);
}

double max_trace_length(const PhyTargets& targets, const TraceGeometry& g) {
  if (!(targets.clock_frequency > 0.0 && targets.safety_factor > 0.0))
    throw DomainError("max_trace_length: clock frequency and safety factor must be > 0");
  const auto lp = line_params(g, targets.clock_frequency);
  const double target = targets.safety_factor * targets.clock_frequency;
  return std::sqrt(0.35 / (target * lp.r_total_per_length * lp.c_per_length * std::log(9.0)));
}

std::vector<BandwidthPoint> bandwidth_curve(const std::vector<double>& lengths, const PhyTargets& targets,
                                            const TraceGeometry& g) {
  if (lengths.empty()) throw DomainError("bandwidth_curve: empty length range");
  for (std::size_t i = 1; i < lengths.size(); ++i)
    if (!(lengths[i] > lengths[i - 1])) throw DomainError("bandwidth_curve: lengths must be strictly increasing");
  const auto lp = line_params(g, targets.clock_frequency);
  const double log_target = std::log10(targets.safety_factor * targets.clock_frequency);
  std::vector<BandwidthPoint> out;
  out.reserve(lengths.size());
  for (double l : lengths) out.push_back({l * 1e3, std::log10(bandwidth_3db(l, lp)), log_target});
  return out;
}

std::vector<double> linspace(double first, double last, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {first};
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(first + (last - first) * i / (n - 1));
  return out;
}

}  // namespace chiplet::phy
