#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "toa/cli.hpp"
#include "toa/config.hpp"
#include "toa/runner.hpp"
#include "toa/verify.hpp"

using namespace toa;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    static int n = 0;
    dir = fs::temp_directory_path() / ("toa_test_cli_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "toa");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

nlohmann::json demo() { return nlohmann::json::parse(demo_config_json()); }

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("demo config parses") {
  const ScenarioConfig cfg = parse_config(demo_config_json(), ".");
  CHECK(cfg.mass == 1.0);
  CHECK(cfg.momentum_grid.size() == 4096);
  CHECK(cfg.arrival_positions == std::vector<double>{10.0});
  CHECK(cfg.methods.size() == 3);
}

TEST_CASE("schema errors carry the field path") {
  auto expect_path = [](nlohmann::json doc, const std::string& path) {
    try {
      parse_config(doc.dump(), ".");
      FAIL("expected ConfigError at " << path);
    } catch (const ConfigError& e) {
      CHECK(e.path() == path);
    }
  };
  auto d = demo();
  d["momentum_grid"]["n_points"] = 8;
  expect_path(d, "momentum_grid.n_points");
  d = demo();
  d["mass"] = -1.0;
  expect_path(d, "mass");
  d = demo();
  d["methods"] = {"relational", "tunnelling"};
  expect_path(d, "methods[1]");
  d = demo();
  d["colour"] = "red";
  expect_path(d, "colour");
  d = demo();
  d["wavepacket"]["type"] = "lorentzian";
  expect_path(d, "wavepacket.type");
  d = demo();
  d["quadrature"] = "simpson";
  expect_path(d, "quadrature");
}

TEST_CASE("run writes densities and a manifest") {
  Scratch s;
  auto d = demo();
  d["output_dir"] = "out";
  d["time_grid"]["n_t"] = 256;
  const RunOutcome r = run_toa(parse_config(d.dump(), s.dir));
  REQUIRE(r.files.size() == 1);
  const std::string csv = slurp(r.files[0]);
  CHECK(csv.rfind("t,P_total,P_plus,P_minus,flux,semiclassical\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 257);
  const auto manifest = nlohmann::json::parse(slurp(r.manifest));
  CHECK(manifest["invariants"]["density_positivity"] == true);
  CHECK(manifest["outputs"][0]["moments"]["reliable"] == true);
}

TEST_CASE("compare needs two densities") {
  Scratch s;
  auto d = demo();
  d["methods"] = {"relational"};
  CHECK_THROWS_AS(run_compare(parse_config(d.dump(), s.dir)), ConfigError);
}

TEST_CASE("exit codes") {
  Scratch s;
  auto d = demo();
  d["output_dir"] = (s.dir / "ok").string();
  d["time_grid"]["n_t"] = 64;
  write(s.dir / "ok.json", d.dump());
  CHECK(cli({"run", (s.dir / "ok.json").string()}) == kExitOk);

  d["momentum_grid"]["n_points"] = 8;
  write(s.dir / "small.json", d.dump());
  CHECK(cli({"run", (s.dir / "small.json").string()}) == kExitSchema);

  d = demo();
  d["momentum_grid"]["n_points"] = 256;
  d["output_dir"] = (s.dir / "coarse").string();
  write(s.dir / "coarse.json", d.dump());
  CHECK(cli({"run", (s.dir / "coarse.json").string()}) == kExitResolution);
  CHECK_FALSE(fs::exists(s.dir / "coarse"));

  CHECK(cli({"run", (s.dir / "missing.json").string()}) == kExitIo);
  d = demo();
  d["methods"] = {"flux"};
  write(s.dir / "single.json", d.dump());
  CHECK(cli({"compare", (s.dir / "single.json").string()}) == kExitSchema);
  CHECK(cli({"frobnicate"}) == kExitSchema);
}

TEST_CASE("export-demo-config round trip") {
  Scratch s;
  CHECK(cli({"export-demo-config", (s.dir / "demo.json").string()}) == kExitOk);
  const ScenarioConfig cfg = load_config(s.dir / "demo.json");
  CHECK(cfg.output_dir == s.dir / "toa_demo_out");
}

TEST_CASE("tabulated wavepacket files") {
  Scratch s;
  const MomentumGrid grid(1.0, 9.0, 512);
  write_tabulated_csv(s.dir / "psi.csv", gaussian(5.0, 0.5, 1.0), grid);
  const auto back = read_tabulated_csv(s.dir / "psi.csv");
  for (std::size_t k = 0; k < grid.size(); k += 37) {
    CHECK(back.evaluate(grid.node(k)) == gaussian(5.0, 0.5, 1.0).evaluate(grid.node(k)));
  }
  write(s.dir / "bad.csv", "p,re\n1,2\n");
  auto d = demo();
  d["wavepacket"] = {{"type", "tabulated"}, {"file", "bad.csv"}};
  try {
    parse_config(d.dump(), s.dir);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "wavepacket.file");
  }
}

TEST_CASE("verify report lists every invariant") {
  CHECK(invariant_ids().size() >= 15);
  VerifyReport r;
  r.results.push_back({"a.b", true, "fine", 0.0});
  CHECK(r.all_passed());
  const auto doc = nlohmann::json::parse(r.to_json());
  CHECK(doc["invariants"][0]["id"] == "a.b");
}
