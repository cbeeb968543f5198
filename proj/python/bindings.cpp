#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

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

namespace py = pybind11;
using namespace chiplet;

namespace {

py::dict thermal_peaks(const Floorplan& fp, const ThermalStack& stack, double resolution) {
  const auto pm = rasterize(fp, resolution);
  const auto tf = solve_steady_state(pm, stack);
  py::dict peaks;
  for (const auto& name : tf.layer_names) peaks[py::str(name)] = peak_temperature(tf, name);
  py::dict out;
  out["peaks"] = peaks;
  out["power"] = pm.total();
  out["outflow"] = convective_outflow(tf, stack);
  out["iterations"] = tf.iterations;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chiplet design-space exploration core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<CongestionError>(m, "CongestionError", base.ptr());

  py::class_<ProcessCostParams>(m, "ProcessCostParams")
      .def(py::init<>())
      .def_readwrite("wafer_cost", &ProcessCostParams::wafer_cost)
      .def_readwrite("wafer_diameter", &ProcessCostParams::wafer_diameter)
      .def_readwrite("d0", &ProcessCostParams::d0)
      .def_readwrite("alpha_yield", &ProcessCostParams::alpha_yield)
      .def_readwrite("assembly_die_survival", &ProcessCostParams::assembly_die_survival)
      .def_readwrite("assembly_conn_survival", &ProcessCostParams::assembly_conn_survival)
      .def_readwrite("n_connections", &ProcessCostParams::n_connections)
      .def_readwrite("yield_only_die_cost", &ProcessCostParams::yield_only_die_cost);

  py::class_<TraceGeometry>(m, "TraceGeometry")
      .def(py::init<>())
      .def_readwrite("trace_width", &TraceGeometry::trace_width)
      .def_readwrite("trace_thickness", &TraceGeometry::trace_thickness)
      .def_readwrite("ground_thickness", &TraceGeometry::ground_thickness)
      .def_readwrite("interposer_height", &TraceGeometry::interposer_height)
      .def_readwrite("relative_permittivity", &TraceGeometry::relative_permittivity)
      .def_readwrite("conductivity", &TraceGeometry::conductivity);

  py::class_<PhyTargets>(m, "PhyTargets")
      .def(py::init<>())
      .def_readwrite("clock_frequency", &PhyTargets::clock_frequency)
      .def_readwrite("safety_factor", &PhyTargets::safety_factor);

  py::class_<AnnealConfig>(m, "AnnealConfig")
      .def(py::init<>())
      .def_readwrite("k0", &AnnealConfig::k0)
      .def_readwrite("decay", &AnnealConfig::decay)
      .def_readwrite("tol", &AnnealConfig::tol)
      .def_readwrite("max_iterations", &AnnealConfig::max_iterations)
      .def_readwrite("moves_per_iteration", &AnnealConfig::moves_per_iteration)
      .def_readwrite("seed", &AnnealConfig::seed)
      .def_readwrite("warmup_samples", &AnnealConfig::warmup_samples)
      .def_readwrite("persistence", &AnnealConfig::persistence)
      .def_readwrite("coarse_resolution", &AnnealConfig::coarse_resolution)
      .def_readwrite("fine_resolution", &AnnealConfig::fine_resolution)
      .def_readwrite("step_fraction", &AnnealConfig::step_fraction)
      .def_readwrite("max_retries", &AnnealConfig::max_retries);

  py::class_<ConfigMetrics>(m, "ConfigMetrics")
      .def(py::init<std::string, double, double, double>(), py::arg("name"), py::arg("cost"),
           py::arg("throughput"), py::arg("latency"))
      .def_readwrite("name", &ConfigMetrics::name)
      .def_readwrite("cost", &ConfigMetrics::cost)
      .def_readwrite("throughput", &ConfigMetrics::throughput)
      .def_readwrite("latency", &ConfigMetrics::latency);

  py::class_<ChipletSpec>(m, "ChipletSpec")
      .def_readonly("name", &ChipletSpec::name)
      .def_readonly("width", &ChipletSpec::width)
      .def_readonly("height", &ChipletSpec::height)
      .def_readonly("power", &ChipletSpec::power)
      .def_property_readonly("area", &ChipletSpec::area);

  py::class_<ThermalStack>(m, "ThermalStack")
      .def_readwrite("h", &ThermalStack::h)
      .def_readwrite("fill_conductivity", &ThermalStack::fill_conductivity)
      .def_readonly("ambient", &ThermalStack::ambient)
      .def_property_readonly("layer_names", [](const ThermalStack& s) {
        std::vector<std::string> names;
        for (const auto& l : s.layers) names.push_back(l.name);
        return names;
      });
  m.def("default_stack", &default_stack);

  py::class_<PackageSpec>(m, "PackageSpec")
      .def_readwrite("name", &PackageSpec::name)
      .def_readonly("chiplets", &PackageSpec::chiplets)
      .def_readwrite("interposer_width", &PackageSpec::interposer_width)
      .def_readwrite("interposer_height", &PackageSpec::interposer_height)
      .def_readwrite("min_spacing", &PackageSpec::min_spacing)
      .def_readwrite("stack", &PackageSpec::stack)
      .def_property_readonly("total_power", &PackageSpec::total_power)
      .def("scale_power", [](PackageSpec& s, double f) {
        for (auto& c : s.chiplets) c.power *= f;
      });

  py::class_<SpecDocument>(m, "SpecDocument")
      .def_readwrite("package", &SpecDocument::package)
      .def_readwrite("process", &SpecDocument::process)
      .def_readwrite("trace", &SpecDocument::trace)
      .def_readwrite("phy_targets", &SpecDocument::phy_targets)
      .def_readwrite("anneal", &SpecDocument::anneal)
      .def_readwrite("configs", &SpecDocument::configs);
  m.def("load_spec", &load_spec, py::arg("json_text"));
  m.def("load_spec_file", &load_spec_file, py::arg("path"));
  m.def("dump_spec", &dump_spec, py::arg("doc"));

  // costyield
  m.def("die_yield", &die_yield, py::arg("area"), py::arg("params") = ProcessCostParams{});
  m.def("gross_dies_per_wafer", &gross_dies_per_wafer, py::arg("area"), py::arg("wafer_diameter") = 300.0);
  m.def("assembly_yield", &assembly_yield, py::arg("n_dies"), py::arg("n_connections"),
        py::arg("params") = ProcessCostParams{});
  m.def("cost_per_die", &cost_per_die, py::arg("area"), py::arg("params") = ProcessCostParams{});
  m.def(
      "package_cost",
      [](const std::vector<std::pair<double, std::uint64_t>>& dies, std::uint64_t n_connections,
         const ProcessCostParams& params) {
        std::vector<DieRequest> req;
        for (const auto& [area, count] : dies) req.push_back({area, count});
        return package_cost(req, n_connections, params).package_cost;
      },
      py::arg("dies"), py::arg("n_connections"), py::arg("params") = ProcessCostParams{},
      "Package cost for (area, count) die types.");
  m.def(
      "cost_ratio",
      [](double soc_area, const std::vector<double>& areas, std::uint64_t n_connections,
         const ProcessCostParams& params) { return cost_ratio(soc_area, areas, n_connections, params); },
      py::arg("soc_area"), py::arg("chiplet_areas"), py::arg("n_connections"),
      py::arg("params") = ProcessCostParams{});

  // power
  m.def(
      "power_breakdown",
      [](double activity, double capacitance, double frequency, double voltage, double gain, double transition,
         double vth, double leakage, double density, double area) {
        const auto b = power_breakdown({activity, capacitance, frequency, voltage, gain, transition, vth, leakage,
                                        density, area});
        return py::dict(py::arg("switching") = b.switching, py::arg("short_circuit") = b.short_circuit,
                        py::arg("leakage") = b.leakage, py::arg("total") = b.total);
      },
      py::arg("activity"), py::arg("load_capacitance"), py::arg("frequency"), py::arg("voltage"),
      py::arg("gain_factor") = 0.0, py::arg("transition_time") = 0.0, py::arg("threshold_voltage") = 0.0,
      py::arg("leakage_current") = 0.0, py::arg("transistor_density") = 0.0, py::arg("area") = 0.0);

  // perf
  m.def("golden_ratio", &golden_ratio, py::arg("throughput"), py::arg("latency"), py::arg("cost"));
  m.def(
      "rank_configs",
      [](const std::vector<ConfigMetrics>& configs) {
        py::list out;
        for (const auto& r : rank_configs(configs))
          out.append(py::dict(py::arg("name") = r.name, py::arg("cost") = r.cost,
                              py::arg("throughput") = r.throughput, py::arg("latency") = r.latency,
                              py::arg("golden_ratio") = r.golden_ratio, py::arg("relative") = r.relative));
        return out;
      },
      py::arg("configs"));

  // phy
  m.def(
      "line_params",
      [](const TraceGeometry& g, double frequency) {
        const auto lp = phy::line_params(g, frequency);
        return py::dict(py::arg("c_per_length") = lp.c_per_length, py::arg("r_dc_per_length") = lp.r_dc_per_length,
                        py::arg("r_ac_per_length") = lp.r_ac_per_length,
                        py::arg("r_total_per_length") = lp.r_total_per_length, py::arg("skin_depth") = lp.skin_depth);
      },
      py::arg("geometry") = TraceGeometry{}, py::arg("frequency") = 2e9);
  m.def("max_trace_length", &phy::max_trace_length, py::arg("targets") = PhyTargets{},
        py::arg("geometry") = TraceGeometry{}, "Metres.");

  // floorplan
  py::class_<Placement>(m, "Placement")
      .def_readonly("name", &Placement::name)
      .def_readonly("width", &Placement::width)
      .def_readonly("height", &Placement::height)
      .def_readonly("power", &Placement::power)
      .def_readonly("x", &Placement::x)
      .def_readonly("y", &Placement::y)
      .def_readonly("rotation", &Placement::rotation);
  py::class_<Floorplan>(m, "Floorplan")
      .def_readonly("width", &Floorplan::width)
      .def_readonly("height", &Floorplan::height)
      .def_readonly("min_spacing", &Floorplan::min_spacing)
      .def_readonly("placements", &Floorplan::placements)
      .def_property_readonly("total_power", &Floorplan::total_power)
      .def("to_json", &floorplan_to_json)
      .def("to_svg", &floorplan_svg)
      .def("__eq__", [](const Floorplan& a, const Floorplan& b) { return a == b; });
  m.def("floorplan_from_json", &floorplan_from_json, py::arg("text"));
  m.def("bsp_placement", &bsp_placement, py::arg("spec"));
  m.def("wirelength", &wirelength, py::arg("floorplan"));
  m.def("is_legal", &is_legal, py::arg("floorplan"));

  // thermal
  m.def("thermal_peaks", &thermal_peaks, py::arg("floorplan"), py::arg("stack"), py::arg("resolution") = 1.0,
        "Per-layer peak temperatures plus power and convective outflow.");
  m.def("monolithic_plan", &monolithic_plan, py::arg("interposer_side"), py::arg("die_area"), py::arg("power"));
  m.def("split_plan", &split_plan, py::arg("interposer_side"), py::arg("per_side"), py::arg("die_area"),
        py::arg("spacing"), py::arg("total_power"));
  m.def(
      "compare_soc_vs_chiplet",
      [](const Floorplan& soc, const Floorplan& split, const ThermalStack& stack, double resolution) {
        const auto c = compare_soc_vs_chiplet(soc, split, stack, resolution);
        return py::dict(py::arg("peak_soc") = c.peak_soc, py::arg("peak_split") = c.peak_split,
                        py::arg("delta") = c.delta);
      },
      py::arg("soc"), py::arg("split"), py::arg("stack"), py::arg("resolution") = 1.0);

  // place
  m.def("alpha_for", &alpha_for, py::arg("temperature"));
  m.def(
      "anneal_cost",
      [](double t, double w, double t_min, double t_max, double w_min, double w_max) {
        NormalizationBounds nb{t_min, t_max, w_min, w_max, false};
        return anneal_cost(t, w, nb);
      },
      py::arg("temperature"), py::arg("wirelength"), py::arg("t_min"), py::arg("t_max"), py::arg("w_min"),
      py::arg("w_max"));
  m.def("acceptance_probability", &acceptance_probability, py::arg("cost_current"), py::arg("cost_neighbor"),
        py::arg("k"));

  py::class_<HistoryRow>(m, "HistoryRow")
      .def_readonly("iteration", &HistoryRow::iteration)
      .def_readonly("peak_temperature", &HistoryRow::peak_temperature)
      .def_readonly("wirelength", &HistoryRow::wirelength)
      .def_readonly("cost", &HistoryRow::cost)
      .def_readonly("k", &HistoryRow::k)
      .def_readonly("best_cost", &HistoryRow::best_cost)
      .def_readonly("accepted", &HistoryRow::accepted);
  py::class_<PlaceResult>(m, "PlaceResult")
      .def_readonly("initial", &PlaceResult::initial)
      .def_readonly("best", &PlaceResult::best)
      .def_readonly("history", &PlaceResult::history)
      .def_readonly("iterations", &PlaceResult::iterations)
      .def_readonly("converged", &PlaceResult::converged)
      .def_readonly("initial_peak", &PlaceResult::initial_peak)
      .def_readonly("final_peak", &PlaceResult::final_peak)
      .def_readonly("initial_wirelength", &PlaceResult::initial_wirelength)
      .def_readonly("final_wirelength", &PlaceResult::final_wirelength);
  m.def("optimize", &optimize, py::arg("spec"), py::arg("config") = AnnealConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "calibrate_k",
      [](const PackageSpec& spec, const std::vector<double>& ks, const AnnealConfig& cfg) {
        py::list out;
        for (const auto& r : calibrate_k(spec, ks, cfg))
          out.append(py::dict(py::arg("k0") = r.k0, py::arg("iterations") = r.iterations,
                              py::arg("converged") = r.converged, py::arg("final_peak") = r.final_peak,
                              py::arg("final_wirelength") = r.final_wirelength));
        return out;
      },
      py::arg("spec"), py::arg("k_candidates"), py::arg("config") = AnnealConfig{});
  m.def(
      "interposer_sweep",
      [](const PackageSpec& spec, const std::vector<double>& sides, const AnnealConfig& cfg) {
        py::list out;
        for (const auto& r : interposer_sweep(spec, sides, cfg))
          out.append(py::dict(py::arg("side") = r.side, py::arg("area") = r.area, py::arg("feasible") = r.feasible,
                              py::arg("peak") = r.peak, py::arg("iterations") = r.iterations,
                              py::arg("wirelength") = r.wirelength, py::arg("reason") = r.reason));
        return out;
      },
      py::arg("spec"), py::arg("sides"), py::arg("config") = AnnealConfig{});
}
