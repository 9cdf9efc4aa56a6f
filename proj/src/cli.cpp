#include "toa/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "toa/config.hpp"
#include "toa/runner.hpp"
#include "toa/verify.hpp"

namespace toa {

namespace {

void print_outcome(const RunOutcome& out) {
  for (const auto& f : out.files) std::cout << "wrote " << f.string() << "\n";
  std::cout << "wrote " << out.manifest.string() << "\n";
}

int do_verify(const std::string& level, const std::string& json_path, const std::string& fault) {
  VerifyOptions opt;
  opt.level = level == "full" ? VerifyLevel::full : VerifyLevel::quick;
  opt.inject_fault = fault;
  const VerifyReport report = run_verify(opt, &std::cout);
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + json_path);
    out << report.to_json() << "\n";
    if (!out) throw IoError("error writing " + json_path);
  }
  std::size_t failed = 0;
  for (const auto& r : report.results) failed += r.passed ? 0 : 1;
  std::cout << report.results.size() - failed << "/" << report.results.size()
            << " invariants passed (" << report.seconds << " s)\n";
  if (failed == 0) return kExitOk;
  for (const auto& r : report.results) {
    if (!r.passed) std::cerr << "invariant failed: " << r.id << "\n";
  }
  return kExitVerifyFailed;
}

int do_export(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << demo_config_json();
  if (!out) throw IoError("error writing " + path);
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Relational time-of-arrival densities for free wave packets", "toa"};
  app.set_version_flag("--version", TOA_VERSION);
  app.require_subcommand(1);

  std::string config_path, compare_path, export_path, level = "quick", json_path, fault;
  auto* run = app.add_subcommand("run", "Compute arrival-time densities for a scenario file");
  run->add_option("config", config_path, "Scenario JSON")->required();
  auto* verify = app.add_subcommand("verify", "Check the numerical invariants");
  verify->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  verify->add_option("--json", json_path, "Write the report as JSON");
  verify->add_option("--inject-fault", fault)->group("");
  auto* compare = app.add_subcommand("compare", "Distances between densities of a scenario");
  compare->add_option("config", compare_path, "Scenario JSON")->required();
  auto* demo = app.add_subcommand("export-demo-config", "Write the demo scenario");
  demo->add_option("path", export_path, "Destination file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (*run) {
      print_outcome(run_toa(load_config(config_path)));
      return kExitOk;
    }
    if (*compare) {
      print_outcome(run_compare(load_config(compare_path)));
      return kExitOk;
    }
    if (*verify) return do_verify(level, json_path, fault);
    if (*demo) return do_export(export_path);
  } catch (const ResolutionError& e) {
    std::cerr << "error: resolution guard '" << e.guard() << "' violated: " << e.what() << "\n";
    return kExitResolution;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid config at " << e.path() << ": " << e.what() << "\n";
    return kExitSchema;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitSchema;
}

}  // namespace toa
