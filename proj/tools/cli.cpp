#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "chiplet/costyield.hpp"
#include "chiplet/error.hpp"
#include "chiplet/floorplan.hpp"
#include "chiplet/perf.hpp"
#include "chiplet/phy.hpp"
#include "chiplet/place.hpp"
#include "chiplet/power.hpp"
#include "chiplet/report.hpp"
#include "chiplet/spec_io.hpp"
#include "chiplet/thermal.hpp"
#include "json.hpp"

#ifndef CHIPLETDSE_VERSION
#define CHIPLETDSE_VERSION "0.0.0"
#endif

namespace chiplet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Options that name input files; their values are hashed into the manifest.
const std::vector<std::string> kPathOptions{"--spec", "--floorplan", "--configs"};

struct Options {
  std::string spec;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> resolution;

  // cost
  std::optional<double> d0, alpha_yield, wafer_cost, wafer_diameter;
  std::optional<std::uint64_t> n_connections;
  bool yield_only_die_cost = false;

  // perf
  std::string configs;

  // phy
  std::optional<double> clock, sf, trace_width, trace_thickness, ground_thickness, interposer_height, eps_r,
      sigma;
  double min_length = 1.0, max_length = 100.0;
  int points = 100;

  // thermal
  std::string floorplan;

  // place, calibrate-k, sweep
  std::optional<double> k0, decay, tol, fine_resolution, step_fraction;
  std::optional<int> max_iterations, moves;
  std::vector<double> k_list{0.01, 0.03, 0.1, 0.3, 1.0};
  std::vector<double> sides{30, 35, 40, 45, 50};

  // rerun
  std::string manifest;
};

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& text) {
    write_text_file(dir_ / name, text);
    files_.emplace_back(name, sha256_hex(text));
  }
  const fs::path& dir() const { return dir_; }
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_path_option(const std::string& tok, std::string* name, std::string* inline_value) {
  for (const auto& opt : kPathOptions) {
    if (tok == opt) {
      *name = opt;
      return true;
    }
    if (tok.starts_with(opt + "=")) {
      *name = opt;
      *inline_value = tok.substr(opt.size() + 1);
      return true;
    }
  }
  return false;
}

// Command line with input paths made absolute and --out removed; inputs with hashes.
std::pair<json, json> manifest_args(const std::vector<std::string>& args) {
  json out_args = json::array(), inputs = json::array();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& tok = args[i];
    if (tok == "--out") {
      ++i;
      continue;
    }
    if (tok.starts_with("--out=")) continue;
    std::string name, value;
    if (is_path_option(tok, &name, &value)) {
      if (value.empty() && i + 1 < args.size()) value = args[++i];
      const auto abs = fs::absolute(value).lexically_normal().string();
      out_args.push_back(name);
      out_args.push_back(abs);
      inputs.push_back({{"path", abs}, {"sha256", sha256_hex(read_text_file(abs))}});
      continue;
    }
    out_args.push_back(tok);
  }
  return {out_args, inputs};
}

void write_manifest(Outputs& outputs, const std::string& subcommand, const std::vector<std::string>& args,
                    std::optional<std::uint64_t> seed) {
  auto [margs, inputs] = manifest_args(args);
  json files = json::array();
  for (const auto& [name, hash] : outputs.files()) files.push_back({{"file", name}, {"sha256", hash}});
  json m = {{"tool", "chipletdse"},
            {"version", CHIPLETDSE_VERSION},
            {"subcommand", subcommand},
            {"args", margs},
            {"inputs", inputs},
            {"seed", seed ? json(*seed) : json(nullptr)},
            {"timestamp", utc_timestamp()},
            {"outputs", files}};
  write_text_file(outputs.dir() / "manifest.json", m.dump(2) + "\n");
}

SpecDocument load(const Options& o) {
  if (o.spec.empty()) throw ValidationError("--spec", "a spec file is required");
  auto doc = load_spec_file(o.spec);
  if (o.seed) doc.anneal.seed = *o.seed;
  return doc;
}

void apply_anneal_overrides(const Options& o, AnnealConfig& c) {
  if (o.k0) c.k0 = *o.k0;
  if (o.decay) c.decay = *o.decay;
  if (o.tol) c.tol = *o.tol;
  if (o.max_iterations) c.max_iterations = *o.max_iterations;
  if (o.moves) c.moves_per_iteration = *o.moves;
  if (o.resolution) c.coarse_resolution = *o.resolution;
  if (o.fine_resolution) c.fine_resolution = *o.fine_resolution;
  if (o.step_fraction) c.step_fraction = *o.step_fraction;
  validate(c, "anneal");
}

std::vector<ConfigMetrics> read_configs_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<ConfigMetrics> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    const auto where = path + ":" + std::to_string(lineno);
    if (lineno == 1) {
      if (cells != std::vector<std::string>{"name", "cost", "throughput", "latency"})
        throw ValidationError(where, "header must be name,cost,throughput,latency");
      continue;
    }
    if (cells.size() != 4) throw ValidationError(where, "expected 4 columns");
    try {
      rows.push_back({cells[0], std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3])});
    } catch (const std::exception&) {
      throw ValidationError(where, "non-numeric value");
    }
  }
  return rows;
}

void check_floorplan_matches(const Floorplan& fp, const PackageSpec& spec) {
  if (fp.placements.size() != spec.chiplets.size())
    throw ValidationError("floorplan.placements", "expected " + std::to_string(spec.chiplets.size()) +
                                                      " chiplets, found " + std::to_string(fp.placements.size()));
  for (const auto& c : spec.chiplets)
    if (!fp.index_of(c.name)) throw ValidationError("floorplan.placements", "chiplet '" + c.name + "' is missing");
}

int cmd_cost(const Options& o, Outputs& outs, std::ostream& out) {
  auto doc = load(o);
  auto& p = doc.process;
  if (o.d0) p.d0 = *o.d0;
  if (o.alpha_yield) p.alpha_yield = *o.alpha_yield;
  if (o.wafer_cost) p.wafer_cost = *o.wafer_cost;
  if (o.wafer_diameter) p.wafer_diameter = *o.wafer_diameter;
  if (o.n_connections) p.n_connections = *o.n_connections;
  if (o.yield_only_die_cost) p.yield_only_die_cost = true;
  validate(p);

  std::vector<DieRequest> dies;
  std::vector<double> areas;
  std::vector<std::string> names;
  double soc_area = 0.0;
  for (const auto& c : doc.package.chiplets) {
    dies.push_back({c.area(), 1});
    areas.push_back(c.area());
    names.push_back(c.name);
    soc_area += c.area();
  }
  const auto cb = package_cost(dies, p.n_connections, p);
  outs.write("cost.csv", cost_csv(names, cb));
  out << "package_cost " << fmt(cb.package_cost) << "\n";
  out << "soc_area_mm2 " << fmt(soc_area) << "\n";
  out << "cost_ratio " << fmt(cost_ratio(soc_area, areas, p.n_connections, p)) << "\n";
  return 0;
}

int cmd_power(const Options& o, Outputs& outs, std::ostream& out) {
  const auto doc = load(o);
  if (doc.tiles.empty()) throw ValidationError("power.tiles", "no tile operating points in spec");
  const auto sp = system_power(doc.tiles);
  outs.write("power.csv", power_csv(sp));
  out << "total_power_w " << fmt(sp.total) << "\n";
  return 0;
}

int cmd_perf(const Options& o, Outputs& outs, std::ostream& out) {
  std::vector<ConfigMetrics> configs;
  if (!o.configs.empty())
    configs = read_configs_csv(o.configs);
  else
    configs = load(o).configs;
  if (configs.empty()) throw ValidationError("perf.configs", "no configuration rows");
  const auto ranked = rank_configs(configs);
  outs.write("perf.csv", perf_csv(ranked));
  out << "best_config " << ranked.front().name << " golden_ratio " << fmt(ranked.front().golden_ratio) << "\n";
  return 0;
}

int cmd_phy(const Options& o, Outputs& outs, std::ostream& out) {
  TraceGeometry g;
  PhyTargets t;
  if (!o.spec.empty()) {
    const auto doc = load(o);
    g = doc.trace;
    t = doc.phy_targets;
  }
  if (o.clock) t.clock_frequency = *o.clock;
  if (o.sf) t.safety_factor = *o.sf;
  if (o.trace_width) g.trace_width = *o.trace_width * 1e-3;
  if (o.trace_thickness) g.trace_thickness = *o.trace_thickness * 1e-3;
  if (o.ground_thickness) g.ground_thickness = *o.ground_thickness * 1e-3;
  if (o.interposer_height) g.interposer_height = *o.interposer_height * 1e-3;
  if (o.eps_r) g.relative_permittivity = *o.eps_r;
  if (o.sigma) g.conductivity = *o.sigma;
  if (!(o.min_length > 0.0 && o.max_length > o.min_length))
    throw ValidationError("--min-length", "need 0 < min-length < max-length");
  if (o.points < 2) throw ValidationError("--points", "must be >= 2");

  auto lengths = phy::linspace(o.min_length, o.max_length, o.points);
  for (auto& l : lengths) l *= 1e-3;
  outs.write("phy.csv", phy_csv(phy::bandwidth_curve(lengths, t, g)));
  const auto lp = phy::line_params(g, t.clock_frequency);
  out << "c_per_m " << fmt(lp.c_per_length) << "\n";
  out << "r_dc_per_m " << fmt(lp.r_dc_per_length) << "\n";
  out << "r_ac_per_m " << fmt(lp.r_ac_per_length) << "\n";
  out << "r_total_per_m " << fmt(lp.r_total_per_length) << "\n";
  out << "max_trace_length_mm " << fmt(phy::max_trace_length(t, g) * 1e3) << "\n";
  return 0;
}

int cmd_thermal(const Options& o, Outputs& outs, std::ostream& out) {
  const auto doc = load(o);
  Floorplan fp;
  if (!o.floorplan.empty()) {
    fp = floorplan_from_json(read_text_file(o.floorplan));
    check_floorplan_matches(fp, doc.package);
  } else {
    validate(doc.package);
    fp = bsp_placement(doc.package);
  }
  const double res = o.resolution.value_or(doc.anneal.fine_resolution);
  const auto pm = rasterize(fp, res);
  const auto tf = solve_steady_state(pm, doc.package.stack);
  outs.write("thermal.csv", thermal_csv(tf));
  for (const auto& name : tf.layer_names) out << "peak " << name << " " << fmt(peak_temperature(tf, name)) << "\n";
  out << "power_w " << fmt(pm.total()) << " outflow_w " << fmt(convective_outflow(tf, doc.package.stack))
      << " iterations " << tf.iterations << "\n";
  return 0;
}

int cmd_place(const Options& o, Outputs& outs, std::ostream& out) {
  auto doc = load(o);
  apply_anneal_overrides(o, doc.anneal);
  const auto r = optimize(doc.package, doc.anneal);
  outs.write("initial_floorplan.json", floorplan_to_json(r.initial));
  outs.write("initial_floorplan.svg", floorplan_svg(r.initial));
  outs.write("floorplan.json", floorplan_to_json(r.best));
  outs.write("floorplan.svg", floorplan_svg(r.best));
  outs.write("history.csv", history_csv(r.history));
  out << "iterations " << r.iterations << " converged " << (r.converged ? 1 : 0) << "\n";
  out << "initial_peak_c " << fmt(r.initial_peak) << " final_peak_c " << fmt(r.final_peak) << "\n";
  out << "initial_wirelength_mm " << fmt(r.initial_wirelength) << " final_wirelength_mm "
      << fmt(r.final_wirelength) << "\n";
  return 0;
}

int cmd_calibrate(const Options& o, Outputs& outs, std::ostream& out) {
  auto doc = load(o);
  apply_anneal_overrides(o, doc.anneal);
  const auto rows = calibrate_k(doc.package, o.k_list, doc.anneal);
  outs.write("calibrate_k.csv", calibration_csv(rows));
  for (const auto& r : rows)
    out << "k0 " << fmt(r.k0) << " iterations " << r.iterations << " final_peak_c " << fmt(r.final_peak) << "\n";
  return 0;
}

int cmd_sweep(const Options& o, Outputs& outs, std::ostream& out) {
  auto doc = load(o);
  apply_anneal_overrides(o, doc.anneal);
  const auto rows = interposer_sweep(doc.package, o.sides, doc.anneal);
  outs.write("sweep.csv", sweep_csv(rows));
  for (const auto& r : rows) {
    out << "side_mm " << fmt(r.side);
    if (r.feasible)
      out << " peak_c " << fmt(r.peak) << "\n";
    else
      out << " infeasible\n";
  }
  return 0;
}

int cmd_rerun(const Options& o, std::ostream& out, std::ostream& err) {
  json m;
  try {
    m = json::parse(read_text_file(o.manifest));
  } catch (const json::parse_error& e) {
    throw ParseError(o.manifest + ": malformed manifest: " + e.what());
  }
  try {
    for (const auto& in : m.at("inputs")) {
      const auto path = in.at("path").get<std::string>();
      if (sha256_hex(read_text_file(path)) != in.at("sha256").get<std::string>())
        throw ValidationError(o.manifest + ": inputs", "'" + path + "' changed since the manifest was written");
    }
    auto args = m.at("args").get<std::vector<std::string>>();
    args.push_back("--out");
    args.push_back(o.out);
    return run(args, out, err);
  } catch (const json::exception& e) {
    throw ValidationError(o.manifest, e.what());
  }
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chiplet design-space exploration: cost, power, performance, PHY, thermal and placement.",
               "chipletdse"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CHIPLETDSE_VERSION);
  Options o;

  auto common = [&](CLI::App* sc, bool spec_required) {
    auto* spec = sc->add_option("--spec", o.spec, "Spec file (JSON)");
    if (spec_required) spec->required();
    sc->add_option("--out", o.out, "Output directory")->capture_default_str();
    sc->add_option("--seed", o.seed, "RNG seed (overrides anneal.seed)");
    sc->add_option("--resolution", o.resolution, "Thermal grid resolution, mm");
  };
  auto anneal = [&](CLI::App* sc) {
    sc->add_option("--k0", o.k0, "Initial acceptance scale K0");
    sc->add_option("--decay", o.decay, "Per-iteration K multiplier r");
    sc->add_option("--tol", o.tol, "Convergence tolerance, degC");
    sc->add_option("--max-iterations", o.max_iterations, "Iteration cap");
    sc->add_option("--moves", o.moves, "Moves per iteration");
    sc->add_option("--fine-resolution", o.fine_resolution, "Final thermal grid resolution, mm");
    sc->add_option("--step-fraction", o.step_fraction, "Translate step bound, fraction of interposer side");
  };

  auto* cost = app.add_subcommand("cost", "Die yield and package cost per chiplet");
  common(cost, true);
  cost->add_option("--d0", o.d0, "Defect density per mm^2");
  cost->add_option("--alpha-yield", o.alpha_yield, "Negative-binomial clustering parameter");
  cost->add_option("--wafer-cost", o.wafer_cost, "Wafer cost");
  cost->add_option("--wafer-diameter", o.wafer_diameter, "Wafer diameter, mm");
  cost->add_option("--n-connections", o.n_connections, "Die-to-die connections");
  cost->add_flag("--yield-only-die-cost", o.yield_only_die_cost, "Cost per die as wafer_cost / die_yield");

  auto* power = app.add_subcommand("power", "Per-tile power breakdown");
  common(power, true);

  auto* perf = app.add_subcommand("perf", "Golden-ratio ranking of configurations");
  common(perf, false);
  perf->add_option("--configs", o.configs, "CSV with name,cost,throughput,latency");

  auto* phy = app.add_subcommand("phy", "Interposer trace bandwidth vs length");
  common(phy, false);
  phy->add_option("--clock", o.clock, "Clock frequency, Hz");
  phy->add_option("--sf", o.sf, "Safety factor on the clock");
  phy->add_option("--trace-width", o.trace_width, "Trace width, mm");
  phy->add_option("--trace-thickness", o.trace_thickness, "Trace thickness, mm");
  phy->add_option("--ground-thickness", o.ground_thickness, "Ground plane thickness, mm");
  phy->add_option("--interposer-height", o.interposer_height, "Dielectric height, mm");
  phy->add_option("--eps-r", o.eps_r, "Relative permittivity");
  phy->add_option("--sigma", o.sigma, "Conductor conductivity, S/m");
  phy->add_option("--min-length", o.min_length, "Shortest length, mm")->capture_default_str();
  phy->add_option("--max-length", o.max_length, "Longest length, mm")->capture_default_str();
  phy->add_option("--points", o.points, "Curve points")->capture_default_str();

  auto* thermal = app.add_subcommand("thermal", "Steady-state temperature field");
  common(thermal, true);
  thermal->add_option("--floorplan", o.floorplan, "Floorplan JSON (default: BSP packing)");

  auto* place = app.add_subcommand("place", "Thermally aware annealing placement");
  common(place, true);
  anneal(place);

  auto* calibrate = app.add_subcommand("calibrate-k", "Annealing runs over K0 candidates");
  common(calibrate, true);
  anneal(calibrate);
  calibrate->add_option("--k0-list", o.k_list, "Comma-separated K0 candidates")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "Annealing runs over square interposer sides");
  common(sweep, true);
  anneal(sweep);
  sweep->add_option("--sides", o.sides, "Comma-separated side lengths, mm")->delimiter(',');

  auto* rerun = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
  rerun->add_option("--manifest", o.manifest, "manifest.json of an earlier run")->required();
  rerun->add_option("--out", o.out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (rerun->parsed()) return cmd_rerun(o, out, err);
    auto* sc = app.get_subcommands().front();
    Outputs outs(o.out);
    int status = 0;
    if (sc == cost) status = cmd_cost(o, outs, out);
    if (sc == power) status = cmd_power(o, outs, out);
    if (sc == perf) status = cmd_perf(o, outs, out);
    if (sc == phy) status = cmd_phy(o, outs, out);
    if (sc == thermal) status = cmd_thermal(o, outs, out);
    if (sc == place) status = cmd_place(o, outs, out);
    if (sc == calibrate) status = cmd_calibrate(o, outs, out);
    if (sc == sweep) status = cmd_sweep(o, outs, out);
    std::optional<std::uint64_t> seed = o.seed;
    if (!seed && !o.spec.empty()) seed = load_spec_file(o.spec).anneal.seed;
    write_manifest(outs, sc->get_name(), args, seed);
    return status;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chiplet::cli
