#include "chiplet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "chiplet/error.hpp"

namespace chiplet {

namespace {

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string integer(long long v) { return std::to_string(v); }

}  // namespace

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += field(cells[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string cost_csv(const std::vector<std::string>& names, const CostBreakdown& cb) {
  if (names.size() != cb.dies.size()) throw DomainError("cost_csv: one name per die type is required");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < cb.dies.size(); ++i) {
    const auto& d = cb.dies[i];
    rows.push_back({names[i], fmt(d.area), integer(static_cast<long long>(d.count)), integer(d.gross_dies_per_wafer),
                    fmt(d.die_yield), fmt(d.cost_per_die), fmt(d.cost_per_die * static_cast<double>(d.count)), "", ""});
  }
  rows.push_back({"package", "", "", "", "", "", fmt(cb.raw_die_cost), fmt(cb.assembly_yield), fmt(cb.package_cost)});
  return csv({"name", "area_mm2", "count", "gross_dies_per_wafer", "die_yield", "cost_per_die", "die_cost",
              "assembly_yield", "package_cost"},
             rows);
}

std::string power_csv(const SystemPower& sp) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : sp.tiles)
    rows.push_back({t.name, fmt(t.power.switching), fmt(t.power.short_circuit), fmt(t.power.leakage),
                    fmt(t.power.total)});
  rows.push_back({"total", "", "", "", fmt(sp.total)});
  return csv({"tile", "switching_w", "short_circuit_w", "leakage_w", "total_w"}, rows);
}

std::string perf_csv(std::span<const ConfigResult> ranked) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : ranked)
    rows.push_back({r.name, fmt(r.cost), fmt(r.throughput), fmt(r.latency), fmt(r.golden_ratio), fmt(r.relative)});
  return csv({"config", "cost", "throughput", "latency", "golden_ratio", "relative"}, rows);
}

std::string phy_csv(std::span<const phy::BandwidthPoint> curve) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : curve) rows.push_back({fmt(p.length_mm), fmt(p.log10_bw_hz), fmt(p.log10_target_hz)});
  return csv({"length_mm", "log10_bw_hz", "log10_target_hz"}, rows);
}

std::string thermal_csv(const TemperatureField& tf) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t l = 0; l < tf.layer_names.size(); ++l)
    for (int j = 0; j < tf.ny; ++j)
      for (int i = 0; i < tf.nx; ++i) {
        const auto c = static_cast<std::size_t>(j) * tf.nx + i;
        if (tf.active[l][c] <= 0.0) continue;
        rows.push_back({tf.layer_names[l], fmt(tf.x0 + (i + 0.5) * tf.dx), fmt(tf.y0 + (j + 0.5) * tf.dy),
                        fmt(tf.temperature[l][c])});
      }
  return csv({"layer", "x_mm", "y_mm", "temperature_c"}, rows);
}

std::string history_csv(std::span<const HistoryRow> history) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& h : history)
    rows.push_back({integer(h.iteration), fmt(h.peak_temperature), fmt(h.wirelength), fmt(h.cost), fmt(h.k),
                    fmt(h.best_cost), integer(h.accepted)});
  return csv({"iteration", "peak_temperature_c", "wirelength_mm", "cost", "k", "best_cost", "accepted"}, rows);
}

std::string calibration_csv(std::span<const CalibrationRow> rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows)
    out.push_back({fmt(r.k0), integer(r.iterations), r.converged ? "1" : "0", fmt(r.final_peak),
                   fmt(r.final_wirelength)});
  return csv({"k0", "iterations", "converged", "final_peak_c", "final_wirelength_mm"}, out);
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    if (r.feasible)
      out.push_back({fmt(r.side), fmt(r.area), "1", fmt(r.peak), integer(r.iterations), fmt(r.wirelength), ""});
    else
      out.push_back({fmt(r.side), fmt(r.area), "0", "", "", "", r.reason});
  }
  return csv({"side_mm", "area_mm2", "feasible", "peak_temperature_c", "iterations", "wirelength_mm", "note"}, out);
}

std::string floorplan_svg(const Floorplan& fp) {
  constexpr double kScale = 10.0;  // px per mm
  constexpr double kMargin = 10.0;
  const double w = fp.width * kScale + 2 * kMargin, h = fp.height * kScale + 2 * kMargin;
  // SVG y grows downwards; flip so the interposer origin is bottom-left.
  auto X = [&](double x) { return fmt(kMargin + x * kScale); };
  auto Y = [&](double y) { return fmt(kMargin + (fp.height - y) * kScale); };

  double pmax = 0.0;
  for (const auto& p : fp.placements) {
    const auto r = p.footprint();
    pmax = std::max(pmax, p.power / (r.w * r.h));
  }

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
       "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n";
  s += "  <rect id=\"interposer\" x=\"" + X(0) + "\" y=\"" + Y(fp.height) + "\" width=\"" + fmt(fp.width * kScale) +
       "\" height=\"" + fmt(fp.height * kScale) + "\" fill=\"#eeeeee\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  for (const auto& p : fp.placements) {
    const auto r = p.footprint();
    const double density = pmax > 0.0 ? p.power / (r.w * r.h) / pmax : 0.0;
    const int shade = 255 - static_cast<int>(std::lround(155.0 * density));
    char fill[8];
    std::snprintf(fill, sizeof fill, "#ff%02x%02x", shade, shade);
    const auto name = xml_escape(p.name);
    s += "  <g id=\"" + name + "\" data-rotation=\"" + integer(p.rotation) + "\">\n";
    s += "    <rect x=\"" + X(r.x) + "\" y=\"" + Y(r.y + r.h) + "\" width=\"" + fmt(r.w * kScale) + "\" height=\"" +
         fmt(r.h * kScale) + "\" fill=\"" + fill + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    // Corner that holds the chiplet's local origin after rotation.
    double ox = r.x, oy = r.y;
    if (p.rotation == 90) ox = r.x + r.w;
    if (p.rotation == 180) ox = r.x + r.w, oy = r.y + r.h;
    if (p.rotation == 270) oy = r.y + r.h;
    const double ix = ox + (ox > r.x ? -0.6 : 0.6), iy = oy + (oy > r.y ? -0.6 : 0.6);
    s += "    <circle cx=\"" + X(ix) + "\" cy=\"" + Y(iy) + "\" r=\"3\" fill=\"#333333\"/>\n";
    s += "    <text x=\"" + X(r.cx()) + "\" y=\"" + Y(r.cy()) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"middle\">" + name +
         " " + integer(p.rotation) + "&#176;</text>\n";
    s += "  </g>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing file '" + path.string() + "'");
}

}  // namespace chiplet
