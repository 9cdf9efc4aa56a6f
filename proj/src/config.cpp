#include "toa/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace toa {

using nlohmann::json;

const char* to_string(DensityMethod m) noexcept {
  switch (m) {
    case DensityMethod::relational: return "relational";
    case DensityMethod::flux: return "flux";
    case DensityMethod::semiclassical: return "semiclassical";
  }
  return "?";
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path, const std::set<std::string>& required,
                    const std::set<std::string>& optional = {}) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "$" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw ConfigError(join(path, key), "unknown key");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

std::size_t count(const json& j, const std::string& path, std::size_t minimum) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  const auto v = j.get<unsigned long long>();
  if (v < minimum) {
    throw ConfigError(path, "must be at least " + std::to_string(minimum) + ", got " + std::to_string(v));
  }
  return static_cast<std::size_t>(v);
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Complex weight(const json& j, const std::string& path) {
  if (j.is_number()) return number(j, path);
  if (j.is_array() && j.size() == 2) return {number(j[0], at_index(path, 0)), number(j[1], at_index(path, 1))};
  throw ConfigError(path, "expected a number or [re, im]");
}

Sector sector(const json& j, const std::string& path) {
  const std::string s = text(j, path);
  if (s == "plus") return Sector::plus;
  if (s == "minus") return Sector::minus;
  throw ConfigError(path, "expected \"plus\" or \"minus\"");
}

MomentumWavefunction wavepacket(const json& j, const std::string& path,
                                const std::filesystem::path& base) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError(join(path, "type"), "missing required key");
  const std::string type = text(j["type"], join(path, "type"));
  if (type == "gaussian") {
    require_object(j, path, {"type", "p0", "sigma_p"}, {"x_c"});
    const double p0 = number(j["p0"], join(path, "p0"));
    const double sigma = positive(j["sigma_p"], join(path, "sigma_p"));
    const double xc = j.contains("x_c") ? number(j["x_c"], join(path, "x_c")) : 0.0;
    return gaussian(p0, sigma, xc);
  }
  if (type == "tabulated") {
    require_object(j, path, {"type", "file"});
    std::filesystem::path file = text(j["file"], join(path, "file"));
    if (file.is_relative()) file = base / file;
    try {
      return read_tabulated_csv(file);
    } catch (const InvalidParameter& e) {
      throw ConfigError(join(path, "file"), e.what());
    }
  }
  if (type == "superposition") {
    require_object(j, path, {"type", "components"});
    const std::string cpath = join(path, "components");
    const json& comps = j["components"];
    if (!comps.is_array() || comps.empty()) throw ConfigError(cpath, "expected a non-empty array");
    std::vector<std::pair<Complex, MomentumWavefunction>> parts;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string ip = at_index(cpath, i);
      require_object(comps[i], ip, {"weight", "wavepacket"});
      parts.emplace_back(weight(comps[i]["weight"], join(ip, "weight")),
                         wavepacket(comps[i]["wavepacket"], join(ip, "wavepacket"), base));
    }
    return superpose(parts);
  }
  throw ConfigError(join(path, "type"), "expected \"gaussian\", \"tabulated\" or \"superposition\"");
}

}  // namespace

ScenarioConfig parse_config(const std::string& source, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  require_object(j, "",
                 {"mass", "wavepacket", "momentum_grid", "time_grid", "arrival_positions", "methods",
                  "quadrature", "output_dir"},
                 {"phase_variants", "export_wavefunction"});

  const double mass = positive(j["mass"], "mass");
  MomentumWavefunction psi = wavepacket(j["wavepacket"], "wavepacket", base_dir);

  const json& mg = j["momentum_grid"];
  require_object(mg, "momentum_grid", {"p_min", "p_max", "n_points"});
  const double p_min = number(mg["p_min"], "momentum_grid.p_min");
  const double p_max = number(mg["p_max"], "momentum_grid.p_max");
  const std::size_t n_p = count(mg["n_points"], "momentum_grid.n_points", MomentumGrid::kMinPoints);
  if (!(p_min < p_max)) throw ConfigError("momentum_grid", "p_min must be below p_max");

  const json& tgj = j["time_grid"];
  require_object(tgj, "time_grid", {"t_min", "t_max", "n_t"});
  const double t_min = number(tgj["t_min"], "time_grid.t_min");
  const double t_max = number(tgj["t_max"], "time_grid.t_max");
  const std::size_t n_t = count(tgj["n_t"], "time_grid.n_t", 2);
  if (!(t_min < t_max)) throw ConfigError("time_grid", "t_min must be below t_max");

  const json& xs = j["arrival_positions"];
  if (!xs.is_array() || xs.empty()) throw ConfigError("arrival_positions", "expected a non-empty array");
  std::vector<double> positions;
  for (std::size_t i = 0; i < xs.size(); ++i) positions.push_back(number(xs[i], at_index("arrival_positions", i)));

  const json& ms = j["methods"];
  if (!ms.is_array() || ms.empty()) throw ConfigError("methods", "expected a non-empty array");
  std::vector<DensityMethod> methods;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const std::string path = at_index("methods", i);
    const std::string name = text(ms[i], path);
    DensityMethod m;
    if (name == "relational") m = DensityMethod::relational;
    else if (name == "flux") m = DensityMethod::flux;
    else if (name == "semiclassical") m = DensityMethod::semiclassical;
    else throw ConfigError(path, "expected \"relational\", \"flux\" or \"semiclassical\"");
    for (DensityMethod seen : methods) {
      if (seen == m) throw ConfigError(path, "duplicate method \"" + name + "\"");
    }
    methods.push_back(m);
  }

  const auto quadrature = parse_quadrature(text(j["quadrature"], "quadrature"));
  if (!quadrature) throw ConfigError("quadrature", "expected \"direct-trapezoid\" or \"energy-transform\"");

  std::filesystem::path out = text(j["output_dir"], "output_dir");
  if (out.empty()) throw ConfigError("output_dir", "must not be empty");
  if (out.is_relative()) out = base_dir / out;

  std::vector<PhaseVariant> variants;
  if (j.contains("phase_variants")) {
    const json& pv = j["phase_variants"];
    if (!pv.is_array()) throw ConfigError("phase_variants", "expected an array");
    for (std::size_t i = 0; i < pv.size(); ++i) {
      const std::string path = at_index("phase_variants", i);
      require_object(pv[i], path, {"name", "sector", "phase"});
      PhaseVariant v{text(pv[i]["name"], join(path, "name")), sector(pv[i]["sector"], join(path, "sector")),
                     number(pv[i]["phase"], join(path, "phase"))};
      if (v.name.empty() || v.name.find_first_of(",\"\n") != std::string::npos) {
        throw ConfigError(join(path, "name"), "must be non-empty without commas or quotes");
      }
      for (DensityMethod m : methods) {
        if (v.name == to_string(m)) throw ConfigError(join(path, "name"), "clashes with a method name");
      }
      for (const auto& w : variants) {
        if (w.name == v.name) throw ConfigError(join(path, "name"), "duplicate variant name");
      }
      variants.push_back(v);
    }
  }

  std::optional<std::filesystem::path> export_file;
  if (j.contains("export_wavefunction")) {
    std::filesystem::path f = text(j["export_wavefunction"], "export_wavefunction");
    if (f.is_relative()) f = base_dir / f;
    export_file = f;
  }

  return ScenarioConfig{mass,
                        std::move(psi),
                        MomentumGrid(p_min, p_max, n_p),
                        TimeGrid(t_min, t_max, n_t),
                        std::move(positions),
                        std::move(methods),
                        *quadrature,
                        std::move(out),
                        std::move(variants),
                        std::move(export_file),
                        j.dump(2)};
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path());
}

std::string demo_config_json() {
  const json j = {
      {"mass", 1.0},
      {"wavepacket", {{"type", "gaussian"}, {"p0", 5.0}, {"sigma_p", 0.5}, {"x_c", 0.0}}},
      {"momentum_grid", {{"p_min", -5.0}, {"p_max", 15.0}, {"n_points", 4096}}},
      {"time_grid", {{"t_min", 0.0}, {"t_max", 4.0}, {"n_t", 2048}}},
      {"arrival_positions", {10.0}},
      {"methods", {"relational", "flux", "semiclassical"}},
      {"quadrature", "direct-trapezoid"},
      {"output_dir", "toa_demo_out"},
  };
  return j.dump(2) + "\n";
}

MomentumWavefunction read_tabulated_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read tabulated wavefunction " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter(file.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "p,re,im") throw InvalidParameter(file.string() + ": header must be \"p,re,im\"");
  std::vector<double> p;
  std::vector<Complex> v;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double a, b, c;
    char tail;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf %c", &a, &b, &c, &tail) != 3) {
      throw InvalidParameter(file.string() + ":" + std::to_string(lineno) + ": expected three numbers");
    }
    p.push_back(a);
    v.emplace_back(b, c);
  }
  if (p.size() < MomentumGrid::kMinPoints) {
    throw InvalidParameter(file.string() + ": needs at least " + std::to_string(MomentumGrid::kMinPoints) + " rows");
  }
  if (!(p.front() < p.back())) throw InvalidParameter(file.string() + ": momenta must increase");
  const MomentumGrid grid(p.front(), p.back(), p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (std::abs(p[k] - grid.node(k)) > 1e-9 * grid.spacing()) {
      throw InvalidParameter(file.string() + ":" + std::to_string(k + 2) + ": momenta are not uniform");
    }
  }
  return tabulated(grid, std::move(v));
}

void write_tabulated_csv(const std::filesystem::path& file, const MomentumWavefunction& psi,
                         const MomentumGrid& grid) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "p,re,im\n";
  char buf[128];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double p = grid.node(k);
    const Complex v = psi.evaluate(p);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p, v.real(), v.imag());
    out << buf;
  }
  if (!out) throw IoError("error writing " + file.string());
}

}  // namespace toa
