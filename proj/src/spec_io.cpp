#include "chiplet/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "chiplet/error.hpp"
#include "json.hpp"

namespace chiplet {

using nlohmann::json;

namespace {

// Keys beginning with '_' and "description"/"notes" are free-form comments.
void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (key.starts_with('_') || key == "description" || key == "notes") continue;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(path + "." + key, "unknown key");
  }
}

double number(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "required");
  if (!it->is_number()) throw ValidationError(path + "." + key, "expected a number");
  return it->get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, path, key) : fallback;
}

std::string string_or(const json& obj, const std::string& path, const char* key,
                      std::optional<std::string> fallback = std::nullopt) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ValidationError(path + "." + key, "required");
  }
  if (!it->is_string()) throw ValidationError(path + "." + key, "expected a string");
  return it->get<std::string>();
}

std::uint64_t count_or(const json& obj, const std::string& path, const char* key, std::uint64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
    throw ValidationError(path + "." + key, "expected a non-negative integer");
  return it->get<std::uint64_t>();
}

int int_or(const json& obj, const std::string& path, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ValidationError(path + "." + key, "expected an integer");
  return it->get<int>();
}

const json& array_at(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "required");
  if (!it->is_array()) throw ValidationError(path + "." + key, "expected an array");
  return *it;
}

double mm_to_m(double mm) { return mm / 1000.0; }

// Millimetre value that maps back onto exactly `m`, so dump/load is a fixed point.
double m_to_mm(double m) {
  double mm = m * 1000.0;
  if (mm_to_m(mm) == m) return mm;
  double up = mm, down = mm;
  for (int i = 0; i < 64; ++i) {
    up = std::nextafter(up, INFINITY);
    if (mm_to_m(up) == m) return up;
    down = std::nextafter(down, -INFINITY);
    if (mm_to_m(down) == m) return down;
  }
  return mm;
}

ChipletSpec parse_chiplet(const json& j, const std::string& path) {
  check_keys(j, path, {"name", "kind", "width", "height", "area", "power", "power_density", "ports", "blocks"});
  ChipletSpec c;
  c.name = string_or(j, path, "name");
  c.kind = chiplet_kind_from_string(string_or(j, path, "kind", "compute"));

  if (j.contains("width") || j.contains("height")) {
    if (j.contains("area") || j.contains("blocks"))
      throw ValidationError(path, "give either width/height or area/blocks, not both");
    c.width = number(j, path, "width");
    c.height = number(j, path, "height");
  } else {
    double area = 0.0;
    if (j.contains("area")) {
      area = number(j, path, "area");
    } else if (j.contains("blocks")) {
      const auto& blocks = array_at(j, path, "blocks");
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto bp = path + ".blocks[" + std::to_string(b) + "]";
        check_keys(blocks[b], bp, {"name", "area", "count"});
        area += number(blocks[b], bp, "area") * static_cast<double>(count_or(blocks[b], bp, "count", 1));
      }
    } else {
      throw ValidationError(path, "one of width/height, area or blocks is required");
    }
    if (!(area > 0.0)) throw ValidationError(path + ".area", "must be > 0");
    // Squarest rectangle with the given area.
    c.width = c.height = std::sqrt(area);
  }

  if (j.contains("power") && j.contains("power_density"))
    throw ValidationError(path, "give either power or power_density, not both");
  if (j.contains("power_density"))
    c.power = number(j, path, "power_density") * c.width * c.height;
  else
    c.power = number_or(j, path, "power", 0.0);

  if (j.contains("ports")) {
    const auto& ports = array_at(j, path, "ports");
    for (std::size_t k = 0; k < ports.size(); ++k) {
      const auto pp = path + ".ports[" + std::to_string(k) + "]";
      check_keys(ports[k], pp, {"peer", "weight"});
      c.ports.push_back({string_or(ports[k], pp, "peer"), number_or(ports[k], pp, "weight", 1.0)});
    }
  }
  return c;
}

ThermalStack parse_stack(const json& j, double ambient) {
  ThermalStack s = default_stack();
  s.ambient = ambient;
  if (j.is_null()) return s;
  check_keys(j, "stack", {"layers", "die_layer", "fill_conductivity", "h"});
  s.h = number_or(j, "stack", "h", s.h);
  s.fill_conductivity = number_or(j, "stack", "fill_conductivity", s.fill_conductivity);
  if (j.contains("layers")) {
    s.layers.clear();
    const auto& layers = array_at(j, "stack", "layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto p = "stack.layers[" + std::to_string(i) + "]";
      check_keys(layers[i], p, {"name", "thickness", "conductivity", "width", "height"});
      ThermalLayer l;
      l.name = string_or(layers[i], p, "name");
      l.thickness_m = mm_to_m(number(layers[i], p, "thickness"));
      l.conductivity = number(layers[i], p, "conductivity");
      if (layers[i].contains("width")) l.width_mm = number(layers[i], p, "width");
      if (layers[i].contains("height")) l.height_mm = number(layers[i], p, "height");
      s.layers.push_back(std::move(l));
    }
    s.die_layer = s.layers.size();  // must be resolved below
  }
  const auto die = string_or(j, "stack", "die_layer", "chiplet");
  auto idx = s.layer_index(die);
  if (!idx) throw ValidationError("stack.die_layer", "no layer named '" + die + "'");
  s.die_layer = *idx;
  return s;
}

ProcessCostParams parse_process(const json& j) {
  ProcessCostParams p;
  if (j.is_null()) return p;
  check_keys(j, "process", {"wafer_cost", "wafer_diameter", "d0", "alpha_yield", "assembly_die_survival",
                            "assembly_conn_survival", "n_connections", "yield_only_die_cost"});
  p.wafer_cost = number_or(j, "process", "wafer_cost", p.wafer_cost);
  p.wafer_diameter = number_or(j, "process", "wafer_diameter", p.wafer_diameter);
  p.d0 = number_or(j, "process", "d0", p.d0);
  p.alpha_yield = number_or(j, "process", "alpha_yield", p.alpha_yield);
  p.assembly_die_survival = number_or(j, "process", "assembly_die_survival", p.assembly_die_survival);
  p.assembly_conn_survival = number_or(j, "process", "assembly_conn_survival", p.assembly_conn_survival);
  p.n_connections = count_or(j, "process", "n_connections", p.n_connections);
  if (j.contains("yield_only_die_cost")) {
    if (!j["yield_only_die_cost"].is_boolean()) throw ValidationError("process.yield_only_die_cost", "expected a boolean");
    p.yield_only_die_cost = j["yield_only_die_cost"].get<bool>();
  }
  validate(p);
  return p;
}

void parse_phy(const json& j, TraceGeometry& g, PhyTargets& t) {
  if (j.is_null()) return;
  check_keys(j, "phy", {"trace_width", "trace_thickness", "ground_thickness", "interposer_height",
                        "relative_permittivity", "conductivity", "clock_frequency", "safety_factor"});
  g.trace_width = mm_to_m(number_or(j, "phy", "trace_width", m_to_mm(g.trace_width)));
  g.trace_thickness = mm_to_m(number_or(j, "phy", "trace_thickness", m_to_mm(g.trace_thickness)));
  g.ground_thickness = mm_to_m(number_or(j, "phy", "ground_thickness", m_to_mm(g.ground_thickness)));
  g.interposer_height = mm_to_m(number_or(j, "phy", "interposer_height", m_to_mm(g.interposer_height)));
  g.relative_permittivity = number_or(j, "phy", "relative_permittivity", g.relative_permittivity);
  g.conductivity = number_or(j, "phy", "conductivity", g.conductivity);
  t.clock_frequency = number_or(j, "phy", "clock_frequency", t.clock_frequency);
  t.safety_factor = number_or(j, "phy", "safety_factor", t.safety_factor);
  for (auto [v, name] : {std::pair{g.trace_width, "trace_width"}, {g.trace_thickness, "trace_thickness"},
                         {g.ground_thickness, "ground_thickness"}, {g.interposer_height, "interposer_height"},
                         {g.conductivity, "conductivity"}, {t.clock_frequency, "clock_frequency"},
                         {t.safety_factor, "safety_factor"}})
    if (!(v > 0.0)) throw ValidationError(std::string("phy.") + name, "must be > 0");
  if (!(g.relative_permittivity >= 1.0))
    throw ValidationError("phy.relative_permittivity", "must be >= 1");
}

AnnealConfig parse_anneal(const json& j) {
  AnnealConfig c;
  if (j.is_null()) return c;
  check_keys(j, "anneal", {"k0", "decay", "tol", "max_iterations", "moves_per_iteration", "seed",
                           "warmup_samples", "persistence", "coarse_resolution", "fine_resolution",
                           "step_fraction", "max_retries"});
  c.k0 = number_or(j, "anneal", "k0", c.k0);
  c.decay = number_or(j, "anneal", "decay", c.decay);
  c.tol = number_or(j, "anneal", "tol", c.tol);
  c.max_iterations = int_or(j, "anneal", "max_iterations", c.max_iterations);
  c.moves_per_iteration = int_or(j, "anneal", "moves_per_iteration", c.moves_per_iteration);
  c.seed = count_or(j, "anneal", "seed", c.seed);
  c.warmup_samples = int_or(j, "anneal", "warmup_samples", c.warmup_samples);
  c.persistence = int_or(j, "anneal", "persistence", c.persistence);
  c.coarse_resolution = number_or(j, "anneal", "coarse_resolution", c.coarse_resolution);
  c.fine_resolution = number_or(j, "anneal", "fine_resolution", c.fine_resolution);
  c.step_fraction = number_or(j, "anneal", "step_fraction", c.step_fraction);
  c.max_retries = int_or(j, "anneal", "max_retries", c.max_retries);
  validate(c);
  return c;
}

std::vector<TileOperatingPoint> parse_tiles(const json& j) {
  std::vector<TileOperatingPoint> tiles;
  if (j.is_null()) return tiles;
  check_keys(j, "power", {"tiles"});
  const auto& arr = array_at(j, "power", "tiles");
  std::set<std::string> names;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = "power.tiles[" + std::to_string(i) + "]";
    check_keys(arr[i], p, {"name", "frequency", "voltage", "activity", "load_capacitance", "gain_factor",
                           "transition_time", "threshold_voltage", "leakage_current", "transistor_density",
                           "area"});
    TileOperatingPoint t;
    t.name = string_or(arr[i], p, "name");
    if (!names.insert(t.name).second) throw ValidationError(p + ".name", "duplicate tile '" + t.name + "'");
    t.frequency = number(arr[i], p, "frequency");
    t.voltage = number(arr[i], p, "voltage");
    auto& pp = t.params;
    pp.activity = number_or(arr[i], p, "activity", 0.0);
    pp.load_capacitance = number_or(arr[i], p, "load_capacitance", 0.0);
    pp.gain_factor = number_or(arr[i], p, "gain_factor", 0.0);
    pp.transition_time = number_or(arr[i], p, "transition_time", 0.0);
    pp.threshold_voltage = number_or(arr[i], p, "threshold_voltage", 0.0);
    pp.leakage_current = number_or(arr[i], p, "leakage_current", 0.0);
    pp.transistor_density = number_or(arr[i], p, "transistor_density", 0.0);
    pp.area = number_or(arr[i], p, "area", 0.0);
    pp.frequency = t.frequency;
    pp.voltage = t.voltage;
    if (!(t.frequency > 0.0)) throw ValidationError(p + ".frequency", "must be > 0");
    if (!(t.voltage >= 0.0)) throw ValidationError(p + ".voltage", "must be >= 0");
    if (!(pp.activity >= 0.0 && pp.activity <= 1.0)) throw ValidationError(p + ".activity", "must be in [0, 1]");
    for (auto [v, name] : {std::pair{pp.load_capacitance, "load_capacitance"}, {pp.gain_factor, "gain_factor"},
                           {pp.transition_time, "transition_time"}, {pp.threshold_voltage, "threshold_voltage"},
                           {pp.leakage_current, "leakage_current"},
                           {pp.transistor_density, "transistor_density"}, {pp.area, "area"}})
      if (!(v >= 0.0)) throw ValidationError(p + "." + name, "must be >= 0");
    tiles.push_back(std::move(t));
  }
  return tiles;
}

std::vector<ConfigMetrics> parse_configs(const json& j) {
  std::vector<ConfigMetrics> rows;
  if (j.is_null()) return rows;
  check_keys(j, "perf", {"configs"});
  const auto& arr = array_at(j, "perf", "configs");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = "perf.configs[" + std::to_string(i) + "]";
    check_keys(arr[i], p, {"name", "cost", "throughput", "latency"});
    rows.push_back({string_or(arr[i], p, "name"), number(arr[i], p, "cost"), number(arr[i], p, "throughput"),
                    number(arr[i], p, "latency")});
  }
  return rows;
}

const json& section(const json& root, const char* key) {
  static const json null_json;
  auto it = root.find(key);
  return it == root.end() ? null_json : *it;
}

}  // namespace

SpecDocument load_spec(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed spec document: ") + e.what());
  }
  check_keys(root, "$", {"package", "chiplets", "stack", "process", "phy", "anneal", "power", "perf"});

  SpecDocument doc;
  auto& pkg = doc.package;
  const auto& pj = section(root, "package");
  if (pj.is_null()) throw ValidationError("package", "required");
  check_keys(pj, "package", {"name", "interposer_width", "interposer_height", "min_spacing", "ambient"});
  pkg.name = string_or(pj, "package", "name", "package");
  pkg.interposer_width = number(pj, "package", "interposer_width");
  pkg.interposer_height = number(pj, "package", "interposer_height");
  pkg.min_spacing = number_or(pj, "package", "min_spacing", 0.0);
  pkg.ambient = number_or(pj, "package", "ambient", 45.0);

  const auto& chiplets = array_at(root, "$", "chiplets");
  for (std::size_t i = 0; i < chiplets.size(); ++i)
    pkg.chiplets.push_back(parse_chiplet(chiplets[i], "chiplets[" + std::to_string(i) + "]"));

  pkg.stack = parse_stack(section(root, "stack"), pkg.ambient);
  validate(pkg);
  normalize_ports(pkg);

  doc.process = parse_process(section(root, "process"));
  parse_phy(section(root, "phy"), doc.trace, doc.phy_targets);
  doc.anneal = parse_anneal(section(root, "anneal"));
  doc.tiles = parse_tiles(section(root, "power"));
  doc.configs = parse_configs(section(root, "perf"));
  return doc;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SpecDocument load_spec_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return load_spec(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump_spec(const SpecDocument& doc) {
  const auto& pkg = doc.package;
  json root;
  root["package"] = {{"name", pkg.name},
                     {"interposer_width", pkg.interposer_width},
                     {"interposer_height", pkg.interposer_height},
                     {"min_spacing", pkg.min_spacing},
                     {"ambient", pkg.ambient}};
  json chiplets = json::array();
  for (const auto& c : pkg.chiplets) {
    json ports = json::array();
    for (const auto& p : c.ports) ports.push_back({{"peer", p.peer}, {"weight", p.weight}});
    chiplets.push_back({{"name", c.name},
                        {"kind", std::string(to_string(c.kind))},
                        {"width", c.width},
                        {"height", c.height},
                        {"power", c.power},
                        {"ports", ports}});
  }
  root["chiplets"] = chiplets;

  json layers = json::array();
  for (const auto& l : pkg.stack.layers) {
    json lj = {{"name", l.name}, {"thickness", m_to_mm(l.thickness_m)}, {"conductivity", l.conductivity}};
    if (l.width_mm) lj["width"] = *l.width_mm;
    if (l.height_mm) lj["height"] = *l.height_mm;
    layers.push_back(lj);
  }
  root["stack"] = {{"layers", layers},
                   {"die_layer", pkg.stack.layers[pkg.stack.die_layer].name},
                   {"fill_conductivity", pkg.stack.fill_conductivity},
                   {"h", pkg.stack.h}};

  const auto& p = doc.process;
  root["process"] = {{"wafer_cost", p.wafer_cost},
                     {"wafer_diameter", p.wafer_diameter},
                     {"d0", p.d0},
                     {"alpha_yield", p.alpha_yield},
                     {"assembly_die_survival", p.assembly_die_survival},
                     {"assembly_conn_survival", p.assembly_conn_survival},
                     {"n_connections", p.n_connections},
                     {"yield_only_die_cost", p.yield_only_die_cost}};

  const auto& g = doc.trace;
  root["phy"] = {{"trace_width", m_to_mm(g.trace_width)},
                 {"trace_thickness", m_to_mm(g.trace_thickness)},
                 {"ground_thickness", m_to_mm(g.ground_thickness)},
                 {"interposer_height", m_to_mm(g.interposer_height)},
                 {"relative_permittivity", g.relative_permittivity},
                 {"conductivity", g.conductivity},
                 {"clock_frequency", doc.phy_targets.clock_frequency},
                 {"safety_factor", doc.phy_targets.safety_factor}};

  const auto& a = doc.anneal;
  root["anneal"] = {{"k0", a.k0},
                    {"decay", a.decay},
                    {"tol", a.tol},
                    {"max_iterations", a.max_iterations},
                    {"moves_per_iteration", a.moves_per_iteration},
                    {"seed", a.seed},
                    {"warmup_samples", a.warmup_samples},
                    {"persistence", a.persistence},
                    {"coarse_resolution", a.coarse_resolution},
                    {"fine_resolution", a.fine_resolution},
                    {"step_fraction", a.step_fraction},
                    {"max_retries", a.max_retries}};

  if (!doc.tiles.empty()) {
    json tiles = json::array();
    for (const auto& t : doc.tiles) {
      const auto& pp = t.params;
      tiles.push_back({{"name", t.name},
                       {"frequency", t.frequency},
                       {"voltage", t.voltage},
                       {"activity", pp.activity},
                       {"load_capacitance", pp.load_capacitance},
                       {"gain_factor", pp.gain_factor},
                       {"transition_time", pp.transition_time},
                       {"threshold_voltage", pp.threshold_voltage},
                       {"leakage_current", pp.leakage_current},
                       {"transistor_density", pp.transistor_density},
                       {"area", pp.area}});
    }
    root["power"] = {{"tiles", tiles}};
  }
  if (!doc.configs.empty()) {
    json configs = json::array();
    for (const auto& c : doc.configs)
      configs.push_back({{"name", c.name}, {"cost", c.cost}, {"throughput", c.throughput}, {"latency", c.latency}});
    root["perf"] = {{"configs", configs}};
  }
  return root.dump(2) + "\n";
}

}  // namespace chiplet
