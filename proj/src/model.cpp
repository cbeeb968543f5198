#include "chiplet/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "chiplet/error.hpp"

namespace chiplet {

namespace {

constexpr std::array<std::pair<ChipletKind, std::string_view>, 6> kKindNames{{
    {ChipletKind::compute, "compute"},
    {ChipletKind::gpu, "gpu"},
    {ChipletKind::memory, "memory"},
    {ChipletKind::io, "io"},
    {ChipletKind::noc, "noc"},
    {ChipletKind::analog, "analog"},
}};

// Bottom-to-top order of the 2.5D sandwich.
constexpr std::array<std::string_view, 8> kCanonicalLayers{
    "substrate", "c4", "interposer", "microbumps", "chiplet", "tim", "spreader", "sink"};

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

}  // namespace

std::string_view to_string(ChipletKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "compute";
}

ChipletKind chiplet_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKindNames)
    if (name == text) return k;
  throw ValidationError("kind", "unknown chiplet kind '" + std::string(text) + "'");
}

std::optional<std::size_t> ThermalStack::layer_index(std::string_view name) const {
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].name == name) return i;
  return std::nullopt;
}

ThermalStack default_stack() {
  ThermalStack s;
  s.layers = {
      {"substrate", 1.0e-3, 0.3, {}, {}},
      {"c4", 0.1e-3, 2.0, {}, {}},
      {"interposer", 0.1e-3, 130.0, {}, {}},
      {"microbumps", 0.02e-3, 2.0, {}, {}},
      {"chiplet", 0.15e-3, 130.0, {}, {}},
      {"tim", 0.02e-3, 5.0, {}, {}},
      {"spreader", 1.0e-3, 400.0, {}, {}},
      {"sink", 6.9e-3, 237.0, 60.0, 60.0},
  };
  s.die_layer = 4;
  s.fill_conductivity = 0.9;
  s.h = 1000.0;
  s.ambient = 45.0;
  return s;
}

std::optional<std::size_t> PackageSpec::index_of(std::string_view chiplet) const {
  for (std::size_t i = 0; i < chiplets.size(); ++i)
    if (chiplets[i].name == chiplet) return i;
  return std::nullopt;
}

double PackageSpec::total_power() const {
  return std::accumulate(chiplets.begin(), chiplets.end(), 0.0,
                         [](double acc, const ChipletSpec& c) { return acc + c.power; });
}

void validate(const ThermalStack& stack, const std::string& path) {
  if (stack.layers.size() < 2)
    throw ValidationError(path + ".layers", "at least two layers are required");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const auto& l = stack.layers[i];
    const auto p = at(path + ".layers", i);
    if (l.name.empty()) throw ValidationError(p + ".name", "must not be empty");
    if (!seen.insert(l.name).second)
      throw ValidationError(p + ".name", "duplicate layer '" + l.name + "'");
    if (!(l.thickness_m > 0.0)) throw ValidationError(p + ".thickness", "must be > 0");
    if (!(l.conductivity > 0.0)) throw ValidationError(p + ".conductivity", "must be > 0");
    if (l.width_mm.has_value() != l.height_mm.has_value())
      throw ValidationError(p, "width and height must be given together");
    if (l.width_mm && !(*l.width_mm > 0.0 && *l.height_mm > 0.0))
      throw ValidationError(p + ".width", "extent must be > 0");
  }
  if (stack.die_layer >= stack.layers.size())
    throw ValidationError(path + ".die_layer", "does not name a layer");
  if (stack.layers[stack.die_layer].width_mm)
    throw ValidationError(path + ".die_layer", "die layer must span the interposer");
  if (!(stack.fill_conductivity > 0.0))
    throw ValidationError(path + ".fill_conductivity", "must be > 0");
  if (!(stack.h > 0.0)) throw ValidationError(path + ".h", "must be > 0");

  // Canonically named layers must appear in sandwich order.
  std::ptrdiff_t last = -1;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    auto it = std::find(kCanonicalLayers.begin(), kCanonicalLayers.end(), stack.layers[i].name);
    if (it == kCanonicalLayers.end()) continue;
    auto rank = it - kCanonicalLayers.begin();
    if (rank < last)
      throw ValidationError(at(path + ".layers", i) + ".name",
                            "layer '" + stack.layers[i].name + "' is out of bottom-to-top order");
    last = rank;
  }
}

void validate(const ProcessCostParams& p, const std::string& path) {
  if (!(p.wafer_cost > 0.0)) throw ValidationError(path + ".wafer_cost", "must be > 0");
  if (!(p.wafer_diameter > 0.0)) throw ValidationError(path + ".wafer_diameter", "must be > 0");
  if (!(p.d0 >= 0.0)) throw ValidationError(path + ".d0", "must be >= 0");
  if (!(p.alpha_yield > 0.0)) throw ValidationError(path + ".alpha_yield", "must be > 0");
  if (!(p.assembly_die_survival > 0.0 && p.assembly_die_survival <= 1.0))
    throw ValidationError(path + ".assembly_die_survival", "must be in (0, 1]");
  if (!(p.assembly_conn_survival > 0.0 && p.assembly_conn_survival <= 1.0))
    throw ValidationError(path + ".assembly_conn_survival", "must be in (0, 1]");
}

void validate(const AnnealConfig& c, const std::string& path) {
  if (!(c.k0 > 0.0)) throw ValidationError(path + ".k0", "must be > 0");
  if (!(c.decay > 0.0 && c.decay < 1.0)) throw ValidationError(path + ".decay", "must be in (0, 1)");
  if (!(c.tol > 0.0)) throw ValidationError(path + ".tol", "must be > 0");
  if (c.max_iterations < 1) throw ValidationError(path + ".max_iterations", "must be >= 1");
  if (c.moves_per_iteration < 1)
    throw ValidationError(path + ".moves_per_iteration", "must be >= 1");
  if (c.warmup_samples < 0) throw ValidationError(path + ".warmup_samples", "must be >= 0");
  if (c.persistence < 1) throw ValidationError(path + ".persistence", "must be >= 1");
  if (!(c.coarse_resolution > 0.0))
    throw ValidationError(path + ".coarse_resolution", "must be > 0");
  if (!(c.fine_resolution > 0.0)) throw ValidationError(path + ".fine_resolution", "must be > 0");
  if (!(c.step_fraction > 0.0)) throw ValidationError(path + ".step_fraction", "must be > 0");
  if (c.max_retries < 1) throw ValidationError(path + ".max_retries", "must be >= 1");
}

ConnectivityMatrix validate_connectivity(const PackageSpec& spec) {
  const auto n = spec.chiplets.size();
  ConnectivityMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = spec.chiplets[i];
    for (std::size_t k = 0; k < c.ports.size(); ++k) {
      const auto& port = c.ports[k];
      const auto p = at("chiplets", i) + at(".ports", k);
      auto j = spec.index_of(port.peer);
      if (!j) throw ValidationError(p + ".peer", "unresolved peer '" + port.peer + "'");
      if (*j == i) throw ValidationError(p + ".peer", "chiplet cannot connect to itself");
      if (!(port.weight >= 1.0)) throw ValidationError(p + ".weight", "must be >= 1");
      for (auto [a, b] : {std::pair{i, *j}, std::pair{*j, i}}) {
        if (m(a, b) != 0.0 && m(a, b) != port.weight)
          throw ValidationError(p + ".weight", "conflicts with weight " + std::to_string(m(a, b)) +
                                                   " declared for " + c.name + "<->" + port.peer);
        m(a, b) = port.weight;
      }
    }
  }
  return m;
}

void normalize_ports(PackageSpec& spec) {
  const auto m = validate_connectivity(spec);
  for (std::size_t i = 0; i < spec.chiplets.size(); ++i) {
    std::vector<Port> ports;
    for (std::size_t j = 0; j < spec.chiplets.size(); ++j)
      if (m(i, j) != 0.0) ports.push_back({spec.chiplets[j].name, m(i, j)});
    std::sort(ports.begin(), ports.end(),
              [](const Port& a, const Port& b) { return a.peer < b.peer; });
    spec.chiplets[i].ports = std::move(ports);
  }
}

void validate(const PackageSpec& spec) {
  if (spec.chiplets.empty()) throw ValidationError("chiplets", "must not be empty");
  if (!(spec.interposer_width > 0.0))
    throw ValidationError("package.interposer_width", "must be > 0");
  if (!(spec.interposer_height > 0.0))
    throw ValidationError("package.interposer_height", "must be > 0");
  if (!(spec.min_spacing >= 0.0)) throw ValidationError("package.min_spacing", "must be >= 0");
  if (!(spec.ambient >= -40.0 && spec.ambient <= 125.0))
    throw ValidationError("package.ambient", "must be within [-40, 125] degC");

  std::set<std::string> names;
  double halo_area = 0.0;
  const double s = spec.min_spacing;
  for (std::size_t i = 0; i < spec.chiplets.size(); ++i) {
    const auto& c = spec.chiplets[i];
    const auto p = at("chiplets", i);
    if (c.name.empty()) throw ValidationError(p + ".name", "must not be empty");
    if (!names.insert(c.name).second)
      throw ValidationError(p + ".name", "duplicate chiplet '" + c.name + "'");
    if (!(c.width > 0.0)) throw ValidationError(p + ".width", "must be > 0");
    if (!(c.height > 0.0)) throw ValidationError(p + ".height", "must be > 0");
    if (!(c.power >= 0.0)) throw ValidationError(p + ".power", "must be >= 0");
    const bool fits = (c.width + s <= spec.interposer_width && c.height + s <= spec.interposer_height) ||
                      (c.height + s <= spec.interposer_width && c.width + s <= spec.interposer_height);
    if (!fits) throw ValidationError(p, "footprint of '" + c.name + "' does not fit the interposer");
    halo_area += (c.width + s) * (c.height + s);
  }
  if (halo_area > spec.interposer_width * spec.interposer_height)
    throw ValidationError("chiplets", "total footprint with spacing halo (" +
                                          std::to_string(halo_area) + " mm^2) exceeds interposer area");
  validate(spec.stack);
  if (spec.stack.ambient != spec.ambient)
    throw ValidationError("stack.ambient", "must equal package.ambient");
  validate_connectivity(spec);
}

}  // namespace chiplet
