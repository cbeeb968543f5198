#pragma once

// CSV and SVG emitters. Every number is printed with 6 significant digits.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chiplet/costyield.hpp"
#include "chiplet/floorplan.hpp"
#include "chiplet/perf.hpp"
#include "chiplet/phy.hpp"
#include "chiplet/place.hpp"
#include "chiplet/power.hpp"
#include "chiplet/thermal.hpp"

namespace chiplet {

/// printf "%.6g".
std::string fmt(double v);

/// Header row plus data rows, comma separated, '\n' line ends. Fields holding
/// a comma, quote or newline are quoted.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

/// One row per die type (name, area, count, gross dies, yield, cost per die)
/// followed by a "package" summary row.
std::string cost_csv(const std::vector<std::string>& names, const CostBreakdown& cb);
std::string power_csv(const SystemPower& sp);
std::string perf_csv(std::span<const ConfigResult> ranked);
std::string phy_csv(std::span<const phy::BandwidthPoint> curve);
/// layer, x, y, T for every active cell; x/y are cell centres in mm relative
/// to the interposer's lower-left corner.
std::string thermal_csv(const TemperatureField& tf);
std::string history_csv(std::span<const HistoryRow> history);
std::string calibration_csv(std::span<const CalibrationRow> rows);
std::string sweep_csv(std::span<const SweepRow> rows);

/// SVG 1.1 drawing of the interposer with labelled chiplet footprints. A dot
/// marks each chiplet's rotated local origin corner.
std::string floorplan_svg(const Floorplan& fp);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace chiplet
