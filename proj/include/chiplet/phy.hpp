#pragma once

// Lossy-RC model of a stripline trace on a silicon interposer. Rise time is
// the 10%-90% RC edge, bandwidth uses the 0.35/Tr single-pole rule.

#include <vector>

#include "chiplet/model.hpp"

namespace chiplet::phy {

// Vacuum constants, fixed to four/five significant digits.
inline constexpr double kMu0 = 1.2566e-6;
inline constexpr double kEps0 = 8.8542e-12;

struct LineParams {
  double c_per_length = 0.0;        // F/m
  double r_dc_per_length = 0.0;     // Ohm/m
  double r_ac_per_length = 0.0;     // Ohm/m
  double r_total_per_length = 0.0;  // Ohm/m
  double skin_depth = 0.0;          // m
};

double skin_depth(double frequency, double conductivity);

/// Per-length R and C at frequency f. Throws DomainError if f <= 0 or the
/// skin-depth perimeter 2t - 4*delta + 2w is not positive.
LineParams line_params(const TraceGeometry& g, double frequency);

/// R*C*ln 9, both scaled by length (quadratic in length).
double rise_time(double length, const LineParams& lp);

/// 0.35 / rise_time. Throws DomainError for length <= 0.
double bandwidth_3db(double length, const LineParams& lp);

/// Length at which bandwidth_3db equals SF * f_clk, in closed form.
double max_trace_length(const PhyTargets& targets, const TraceGeometry& g);

struct BandwidthPoint {
  double length_mm = 0.0;
  double log10_bw_hz = 0.0;
  double log10_target_hz = 0.0;
};

/// Bandwidth and target over the given lengths (metres, strictly increasing).
std::vector<BandwidthPoint> bandwidth_curve(const std::vector<double>& lengths, const PhyTargets& targets,
                                            const TraceGeometry& g);

/// n evenly spaced points over [first, last].
std::vector<double> linspace(double first, double last, int n);

}  // namespace chiplet::phy
