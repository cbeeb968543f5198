#pragma once

// Shared domain types. Lengths are millimetres unless a field name says
// otherwise; physics-facing structs (TraceGeometry, ThermalLayer thickness)
// carry SI metres.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chiplet {

enum class ChipletKind { compute, gpu, memory, io, noc, analog };

std::string_view to_string(ChipletKind kind);
ChipletKind chiplet_kind_from_string(std::string_view text);

struct Port {
  std::string peer;
  double weight = 1.0;

  bool operator==(const Port&) const = default;
};

struct ChipletSpec {
  std::string name;
  double width = 0.0;   // mm
  double height = 0.0;  // mm
  double power = 0.0;   // W
  ChipletKind kind = ChipletKind::compute;
  std::vector<Port> ports;

  double area() const { return width * height; }
  bool operator==(const ChipletSpec&) const = default;
};

struct ThermalLayer {
  std::string name;
  double thickness_m = 0.0;
  double conductivity = 0.0;  // W/(m K)
  // Lateral extent, centred on the interposer. Unset spans the interposer.
  std::optional<double> width_mm;
  std::optional<double> height_mm;

  bool operator==(const ThermalLayer&) const = default;
};

/// Package layers ordered bottom to top.
struct ThermalStack {
  std::vector<ThermalLayer> layers;
  std::size_t die_layer = 0;          // index of the layer that holds the chiplets
  double fill_conductivity = 0.9;     // die-layer material between chiplets
  double h = 1000.0;                  // W/(m^2 K), convective top boundary
  double ambient = 45.0;              // degC

  std::optional<std::size_t> layer_index(std::string_view name) const;
  bool operator==(const ThermalStack&) const = default;
};

/// Substrate, C4, interposer, microbumps, chiplet, TIM, copper lid spreader and a
/// 60 x 60 mm aluminium sink. Every layer but the sink spans the interposer.
ThermalStack default_stack();

struct PackageSpec {
  std::string name;
  std::vector<ChipletSpec> chiplets;
  double interposer_width = 0.0;   // mm
  double interposer_height = 0.0;  // mm
  double min_spacing = 0.0;        // mm
  double ambient = 45.0;           // degC
  ThermalStack stack;

  std::optional<std::size_t> index_of(std::string_view chiplet) const;
  double total_power() const;
  bool operator==(const PackageSpec&) const = default;
};

struct ProcessCostParams {
  double wafer_cost = 10000.0;
  double wafer_diameter = 300.0;  // mm
  double d0 = 0.002;              // defects per mm^2
  double alpha_yield = 3.0;
  double assembly_die_survival = 0.999;
  double assembly_conn_survival = 0.999999;
  std::uint64_t n_connections = 20000;
  // Evaluate cost per die as wafer_cost / die_yield (no dies-per-wafer division).
  bool yield_only_die_cost = false;

  bool operator==(const ProcessCostParams&) const = default;
};

struct ServiceSpec {
  double word_bits = 0.0;          // b
  double service_bandwidth = 1.0;  // R, bit/s
  double base_latency = 0.0;       // T_i, s
  double clock = 1.0;              // F, Hz
  double channels = 1.0;
  double bits_per_channel_per_cycle = 1.0;

  bool operator==(const ServiceSpec&) const = default;
};

struct PowerParams {
  double activity = 0.0;            // A
  double load_capacitance = 0.0;    // C, F
  double frequency = 0.0;           // F, Hz
  double voltage = 0.0;             // V
  double gain_factor = 0.0;         // B, A/V^2
  double transition_time = 0.0;     // T, s
  double threshold_voltage = 0.0;   // Vth
  double leakage_current = 0.0;     // I, A per transistor
  double transistor_density = 0.0;  // per mm^2
  double area = 0.0;                // mm^2

  bool operator==(const PowerParams&) const = default;
};

struct TileOperatingPoint {
  std::string name;
  double frequency = 0.0;
  double voltage = 0.0;
  PowerParams params;

  bool operator==(const TileOperatingPoint&) const = default;
};

/// Stripline trace on a silicon interposer, SI units.
struct TraceGeometry {
  double trace_width = 50e-6;
  double trace_thickness = 20e-6;
  double ground_thickness = 50e-6;
  double interposer_height = 100e-6;
  double relative_permittivity = 11.68;
  double conductivity = 5.98e7;

  bool operator==(const TraceGeometry&) const = default;
};

struct PhyTargets {
  double clock_frequency = 2e9;
  double safety_factor = 1.5;

  bool operator==(const PhyTargets&) const = default;
};

struct AnnealConfig {
  double k0 = 0.1;
  double decay = 0.97;
  double tol = 0.1;  // degC
  int max_iterations = 500;
  int moves_per_iteration = 8;
  std::uint64_t seed = 1;
  int warmup_samples = 20;
  int persistence = 5;             // consecutive epochs below tol
  double coarse_resolution = 2.0;  // mm, per-move thermal evaluation
  double fine_resolution = 1.0;    // mm, final report
  double step_fraction = 0.2;      // translate step bound, fraction of interposer side
  int max_retries = 200;

  bool operator==(const AnnealConfig&) const = default;
};

/// One measured configuration row (cost, throughput, latency).
struct ConfigMetrics {
  std::string name;
  double cost = 0.0;
  double throughput = 0.0;
  double latency = 0.0;

  bool operator==(const ConfigMetrics&) const = default;
};

/// Symmetric n x n connection weights, zero diagonal.
class ConnectivityMatrix {
 public:
  ConnectivityMatrix() = default;
  explicit ConnectivityMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return w_[i * n_ + j]; }

  bool operator==(const ConnectivityMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

/// Everything one spec file carries.
struct SpecDocument {
  PackageSpec package;
  ProcessCostParams process;
  TraceGeometry trace;
  PhyTargets phy_targets;
  AnnealConfig anneal;
  std::vector<TileOperatingPoint> tiles;
  std::vector<ConfigMetrics> configs;

  bool operator==(const SpecDocument&) const = default;
};

/// Checks the PackageSpec invariants; throws ValidationError naming the field.
void validate(const PackageSpec& spec);
void validate(const ThermalStack& stack, const std::string& path = "stack");
void validate(const ProcessCostParams& params, const std::string& path = "process");
void validate(const AnnealConfig& cfg, const std::string& path = "anneal");

/// Symmetrized connection matrix in chiplet declaration order. A link
/// declared on either endpoint applies to both; conflicting nonzero weights
/// and unresolved peers are validation errors.
ConnectivityMatrix validate_connectivity(const PackageSpec& spec);

/// Rewrites every chiplet's port list to the symmetric form implied by
/// validate_connectivity, sorted by peer name.
void normalize_ports(PackageSpec& spec);

}  // namespace chiplet
