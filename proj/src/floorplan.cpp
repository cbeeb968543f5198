#include "chiplet/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chiplet/error.hpp"
#include "json.hpp"

namespace chiplet {

using nlohmann::json;

namespace {

constexpr double kEps = 1e-9;

bool separated(const Rect& a, const Rect& b, double s) {
  return a.x + a.w + s <= b.x + kEps || b.x + b.w + s <= a.x + kEps || a.y + a.h + s <= b.y + kEps ||
         b.y + b.h + s <= a.y + kEps;
}

}  // namespace

Rect Placement::footprint() const {
  const bool turned = rotation == 90 || rotation == 270;
  return {x, y, turned ? height : width, turned ? width : height};
}

double Floorplan::total_power() const {
  double p = 0.0;
  for (const auto& pl : placements) p += pl.power;
  return p;
}

std::optional<std::size_t> Floorplan::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < placements.size(); ++i)
    if (placements[i].name == name) return i;
  return std::nullopt;
}

Floorplan make_floorplan(const PackageSpec& spec) {
  Floorplan fp;
  fp.width = spec.interposer_width;
  fp.height = spec.interposer_height;
  fp.min_spacing = spec.min_spacing;
  for (const auto& c : spec.chiplets) fp.placements.push_back({c.name, c.width, c.height, c.power, 0.0, 0.0, 0});
  fp.connectivity = validate_connectivity(spec);
  return fp;
}

std::optional<std::string> floorplan_violation(const Floorplan& fp) {
  const double s = fp.min_spacing;
  const double margin = s / 2.0;
  for (std::size_t i = 0; i < fp.placements.size(); ++i) {
    const auto& p = fp.placements[i];
    if (p.rotation != 0 && p.rotation != 90 && p.rotation != 180 && p.rotation != 270)
      return p.name + ": rotation must be 0, 90, 180 or 270";
    const auto r = p.footprint();
    if (r.x < margin - kEps || r.y < margin - kEps || r.x + r.w > fp.width - margin + kEps ||
        r.y + r.h > fp.height - margin + kEps)
      return p.name + ": footprint leaves the interposer or its spacing margin";
    for (std::size_t j = 0; j < i; ++j)
      if (!separated(r, fp.placements[j].footprint(), s))
        return p.name + " and " + fp.placements[j].name + " overlap or violate min_spacing";
  }
  return std::nullopt;
}

bool is_legal(const Floorplan& fp) { return !floorplan_violation(fp).has_value(); }

void check_floorplan(const Floorplan& fp) {
  if (auto v = floorplan_violation(fp)) throw ValidationError("floorplan", *v);
}

double wirelength(const Floorplan& fp) {
  double total = 0.0;
  const auto n = fp.placements.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = fp.placements[i].footprint();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = fp.connectivity(i, j);
      if (w == 0.0) continue;
      const auto b = fp.placements[j].footprint();
      total += w * (std::abs(a.cx() - b.cx()) + std::abs(a.cy() - b.cy()));
    }
  }
  return total;
}

Floorplan bsp_placement(const PackageSpec& spec) {
  Floorplan fp = make_floorplan(spec);
  const double s = fp.min_spacing;
  // Free space is kept as leaves of a guillotine partition; chiplets are placed
  // as halo rectangles (footprint grown by s/2 on every side).
  std::vector<Rect> free{{0.0, 0.0, fp.width, fp.height}};

  for (auto& p : fp.placements) {
    bool placed = false;
    for (int rotation : {0, 90}) {
      const double hw = (rotation == 0 ? p.width : p.height) + s;
      const double hh = (rotation == 0 ? p.height : p.width) + s;
      // Lowest, then leftmost free leaf that holds the halo.
      auto best = free.end();
      for (auto it = free.begin(); it != free.end(); ++it) {
        if (hw > it->w + kEps || hh > it->h + kEps) continue;
        if (best == free.end() || it->y < best->y - kEps ||
            (std::abs(it->y - best->y) <= kEps && it->x < best->x))
          best = it;
      }
      if (best == free.end()) continue;

      const Rect leaf = *best;
      free.erase(best);
      p.x = leaf.x + s / 2.0;
      p.y = leaf.y + s / 2.0;
      p.rotation = rotation;
      // Split along the axis that leaves the larger remaining leaf.
      const double right_w = leaf.w - hw, top_h = leaf.h - hh;
      Rect right, top;
      if (right_w * leaf.h >= leaf.w * top_h) {
        right = {leaf.x + hw, leaf.y, right_w, leaf.h};
        top = {leaf.x, leaf.y + hh, hw, top_h};
      } else {
        right = {leaf.x + hw, leaf.y, right_w, hh};
        top = {leaf.x, leaf.y + hh, leaf.w, top_h};
      }
      for (const auto& r : {right, top})
        if (r.w > kEps && r.h > kEps) free.push_back(r);
      placed = true;
      break;
    }
    if (!placed)
      throw CongestionError("cannot pack chiplet '" + p.name + "' on a " + std::to_string(fp.width) + "x" +
                            std::to_string(fp.height) + " mm interposer");
  }

  // Centre the packed cluster.
  double lo_x = std::numeric_limits<double>::max(), lo_y = lo_x;
  double hi_x = std::numeric_limits<double>::lowest(), hi_y = hi_x;
  for (const auto& p : fp.placements) {
    const auto r = p.footprint();
    lo_x = std::min(lo_x, r.x);
    lo_y = std::min(lo_y, r.y);
    hi_x = std::max(hi_x, r.x + r.w);
    hi_y = std::max(hi_y, r.y + r.h);
  }
  const double dx = (fp.width - (hi_x - lo_x)) / 2.0 - lo_x;
  const double dy = (fp.height - (hi_y - lo_y)) / 2.0 - lo_y;
  for (auto& p : fp.placements) {
    p.x += dx;
    p.y += dy;
  }
  check_floorplan(fp);
  return fp;
}

std::string floorplan_to_json(const Floorplan& fp) {
  json placements = json::array();
  for (const auto& p : fp.placements)
    placements.push_back({{"name", p.name},
                          {"x", p.x},
                          {"y", p.y},
                          {"rotation", p.rotation},
                          {"width", p.width},
                          {"height", p.height},
                          {"power", p.power}});
  json connections = json::array();
  for (std::size_t i = 0; i < fp.placements.size(); ++i)
    for (std::size_t j = i + 1; j < fp.placements.size(); ++j)
      if (fp.connectivity(i, j) != 0.0)
        connections.push_back(
            {{"a", fp.placements[i].name}, {"b", fp.placements[j].name}, {"weight", fp.connectivity(i, j)}});
  json root = {{"interposer", {{"width", fp.width}, {"height", fp.height}, {"min_spacing", fp.min_spacing}}},
               {"placements", placements},
               {"connections", connections}};
  return root.dump(2) + "\n";
}

Floorplan floorplan_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed floorplan document: ") + e.what());
  }
  Floorplan fp;
  try {
    const auto& ij = root.at("interposer");
    fp.width = ij.at("width").get<double>();
    fp.height = ij.at("height").get<double>();
    fp.min_spacing = ij.value("min_spacing", 0.0);
    for (const auto& pj : root.at("placements"))
      fp.placements.push_back({pj.at("name").get<std::string>(), pj.at("width").get<double>(),
                               pj.at("height").get<double>(), pj.value("power", 0.0), pj.at("x").get<double>(),
                               pj.at("y").get<double>(), pj.value("rotation", 0)});
    fp.connectivity = ConnectivityMatrix(fp.placements.size());
    if (root.contains("connections")) {
      for (const auto& cj : root.at("connections")) {
        const auto a = fp.index_of(cj.at("a").get<std::string>());
        const auto b = fp.index_of(cj.at("b").get<std::string>());
        if (!a || !b || *a == *b) throw ValidationError("connections", "unresolved or self connection");
        fp.connectivity(*a, *b) = fp.connectivity(*b, *a) = cj.value("weight", 1.0);
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError("floorplan", e.what());
  }
  check_floorplan(fp);
  return fp;
}

}  // namespace chiplet
