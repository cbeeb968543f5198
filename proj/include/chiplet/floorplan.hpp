#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chiplet/model.hpp"

namespace chiplet {

struct Rect {
  double x = 0.0;  // lower-left, mm
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }
};

/// One placed chiplet. (x, y) is the lower-left corner of the rotated footprint.
struct Placement {
  std::string name;
  double width = 0.0;   // unrotated, mm
  double height = 0.0;  // unrotated, mm
  double power = 0.0;   // W
  double x = 0.0;
  double y = 0.0;
  int rotation = 0;  // degrees: 0, 90, 180 or 270

  Rect footprint() const;
  bool operator==(const Placement&) const = default;
};

struct Floorplan {
  double width = 0.0;   // interposer, mm
  double height = 0.0;  // interposer, mm
  double min_spacing = 0.0;
  std::vector<Placement> placements;
  ConnectivityMatrix connectivity;

  double total_power() const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool operator==(const Floorplan&) const = default;
};

/// Unplaced floorplan (all placements at the origin) carrying the spec's chiplets
/// and symmetrized connectivity.
Floorplan make_floorplan(const PackageSpec& spec);

/// First violated invariant (bad rotation, out of bounds, overlap/spacing), if any.
/// Footprints must keep min_spacing from each other and min_spacing/2 from the edge.
std::optional<std::string> floorplan_violation(const Floorplan& fp);
bool is_legal(const Floorplan& fp);
/// Throws ValidationError on the first violation.
void check_floorplan(const Floorplan& fp);

/// Sum over connected pairs of weight x Manhattan distance between footprint centres.
double wirelength(const Floorplan& fp);

/// Deterministic guillotine (binary space partition) packing of the chiplets in
/// declaration order; the packed cluster is then centred on the interposer.
/// Throws CongestionError when the chiplets do not pack.
Floorplan bsp_placement(const PackageSpec& spec);

std::string floorplan_to_json(const Floorplan& fp);
Floorplan floorplan_from_json(std::string_view text);

}  // namespace chiplet
