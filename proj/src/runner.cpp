#include "toa/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"
#include "toa/distributions.hpp"

namespace toa {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Column {
  std::string name;
  std::vector<double> values;
};

struct PositionResult {
  double x0;
  TimeDensity relational;
  std::vector<Column> extra;  // flux, semiclassical, phase variants, in request order
  json diagnostics;
};

PositionResult evaluate_position(const ScenarioConfig& cfg, const PhysicalState& state, double x0,
                                 bool with_variants) {
  PositionResult r{x0, relational_toa(state, x0, cfg.time_grid, cfg.quadrature), {}, json::object()};
  for (DensityMethod m : cfg.methods) {
    if (m == DensityMethod::flux) r.extra.push_back({"flux", flux_toa(state, x0, cfg.time_grid)});
    if (m == DensityMethod::semiclassical) {
      r.extra.push_back({"semiclassical", semiclassical_toa(state, x0, cfg.time_grid)});
    }
  }
  if (with_variants) {
    for (const auto& v : cfg.phase_variants) {
      const PhysicalState rotated = apply_sector_phase(state, v.sector, v.phase);
      r.extra.push_back({v.name, relational_toa(rotated, x0, cfg.time_grid, cfg.quadrature).total});
    }
  }
  json margins = json::object();
  for (Sector s : kSectors) {
    const ResolutionMargin m = phase_resolution(state, s, x0, cfg.time_grid);
    margins[to_string(s)] = {{"value", m.value}, {"limit", m.limit}};
  }
  r.diagnostics = {{"x0", x0},
                   {"mass_captured", r.relational.mass_captured},
                   {"phase_resolution", margins}};
  try {
    const Moments mo = moments(r.relational);
    r.diagnostics["moments"] = {{"mean", mo.mean}, {"variance", mo.variance}, {"reliable", mo.reliable}};
  } catch (const UndefinedMoments&) {
    r.diagnostics["moments"] = nullptr;
  }
  return r;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

void write_text(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out << content;
  out.flush();
  if (!out) throw IoError("error writing " + file.string());
}

json state_summary(const PhysicalState& s) {
  return {{"sector_weights", {{"plus", s.weight(Sector::plus)}, {"minus", s.weight(Sector::minus)}}},
          {"normalization_factor", s.normalization_factor()},
          {"renormalized", s.renormalized()}};
}

json invariant_summary(const std::vector<PositionResult>& results, const PhysicalState& s) {
  bool positive = true, exact_sum = true, bounded = true;
  for (const auto& r : results) {
    const TimeDensity& d = r.relational;
    for (std::size_t k = 0; k < d.total.size(); ++k) {
      positive = positive && d.plus[k] >= 0.0 && d.minus[k] >= 0.0;
      exact_sum = exact_sum && d.total[k] == d.plus[k] + d.minus[k];
    }
    bounded = bounded && d.mass_captured <= 1.0 + 1e-6;
  }
  const bool complete = std::abs(s.sector_weights().total() - 1.0) < 1e-8;
  return {{"density_positivity", positive},
          {"sector_sum_exact", exact_sum},
          {"mass_bound", bounded},
          {"sector_completeness", complete}};
}

json base_manifest(const ScenarioConfig& cfg, const char* command) {
  return {{"tool", "toa"},
          {"version", TOA_VERSION},
          {"command", command},
          {"config", json::parse(cfg.echo)}};
}

}  // namespace

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

RunOutcome run_toa(const ScenarioConfig& cfg) {
  const auto t_start = Clock::now();
  const PhysicalState state = lift(cfg.wavepacket, cfg.mass, cfg.momentum_grid);

  std::vector<PositionResult> results;
  json timings = json::object();
  for (double x0 : cfg.arrival_positions) {
    const auto t0 = Clock::now();
    results.push_back(evaluate_position(cfg, state, x0, false));
    timings["x0=" + format_value(x0)] = seconds_since(t0);
  }

  ensure_dir(cfg.output_dir);
  RunOutcome out;
  json outputs = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const PositionResult& r = results[i];
    std::string csv = "t,P_total,P_plus,P_minus";
    for (const auto& c : r.extra) csv += "," + c.name;
    csv += "\n";
    const TimeGrid& tg = cfg.time_grid;
    for (std::size_t k = 0; k < tg.size(); ++k) {
      csv += format_value(tg.at(k)) + "," + format_value(r.relational.total[k]) + "," +
             format_value(r.relational.plus[k]) + "," + format_value(r.relational.minus[k]);
      for (const auto& c : r.extra) csv += "," + format_value(c.values[k]);
      csv += "\n";
    }
    const std::string name = "toa_x0_" + std::to_string(i) + ".csv";
    write_text(cfg.output_dir / name, csv);
    out.files.push_back(cfg.output_dir / name);
    json d = r.diagnostics;
    d["file"] = name;
    outputs.push_back(d);
  }
  if (cfg.export_wavefunction) {
    write_tabulated_csv(*cfg.export_wavefunction, cfg.wavepacket, cfg.momentum_grid);
    out.files.push_back(*cfg.export_wavefunction);
  }

  json manifest = base_manifest(cfg, "run");
  manifest["state"] = state_summary(state);
  manifest["outputs"] = outputs;
  manifest["invariants"] = invariant_summary(results, state);
  timings["total"] = seconds_since(t_start);
  manifest["timings_s"] = timings;
  out.manifest = cfg.output_dir / "manifest.json";
  write_text(out.manifest, manifest.dump(2) + "\n");
  return out;
}

RunOutcome run_compare(const ScenarioConfig& cfg) {
  if (cfg.methods.size() + cfg.phase_variants.size() < 2) {
    throw ConfigError("methods", "compare needs at least two methods or phase variants");
  }
  const auto t_start = Clock::now();
  const PhysicalState state = lift(cfg.wavepacket, cfg.mass, cfg.momentum_grid);

  std::vector<PositionResult> results;
  for (double x0 : cfg.arrival_positions) results.push_back(evaluate_position(cfg, state, x0, true));

  std::string csv = "method_a,method_b,x0,tv_distance,peak_shift\n";
  const TimeGrid& tg = cfg.time_grid;
  for (const PositionResult& r : results) {
    std::vector<Column> cols;
    for (DensityMethod m : cfg.methods) {
      if (m == DensityMethod::relational) cols.push_back({"relational", r.relational.total});
    }
    for (const auto& c : r.extra) cols.push_back(c);
    for (std::size_t a = 0; a < cols.size(); ++a) {
      for (std::size_t b = a + 1; b < cols.size(); ++b) {
        const double tv = total_variation(tg, cols[a].values, cols[b].values);
        const double shift = peak_time(tg, cols[b].values) - peak_time(tg, cols[a].values);
        csv += cols[a].name + "," + cols[b].name + "," + format_value(r.x0) + "," + format_value(tv) +
               "," + format_value(shift) + "\n";
      }
    }
  }

  ensure_dir(cfg.output_dir);
  RunOutcome out;
  write_text(cfg.output_dir / "compare.csv", csv);
  out.files.push_back(cfg.output_dir / "compare.csv");

  json outputs = json::array();
  for (const auto& r : results) outputs.push_back(r.diagnostics);
  json manifest = base_manifest(cfg, "compare");
  manifest["state"] = state_summary(state);
  manifest["outputs"] = outputs;
  manifest["invariants"] = invariant_summary(results, state);
  manifest["timings_s"] = {{"total", seconds_since(t_start)}};
  out.manifest = cfg.output_dir / "manifest.json";
  write_text(out.manifest, manifest.dump(2) + "\n");
  return out;
}

}  // namespace toa
