#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "gyro/error.hpp"

namespace {

constexpr const char* kFooter = R"(Subcommands (each reads --config and writes into --out):
  recurrence   weight, n_terms [, method]          -> recurrence.json
  quadrature   weight, n_nodes [, method]          -> quadrature.json
  opmatrix     geometry, spec, operator            -> operator.txt (triplets), opmatrix.json
  sparsity     geometry, spec [, operators]        -> sparsity.json
  modes        geometry, spec [, modes, grid]      -> modes.csv, modes.json
  iwaves       geometry, m [, solver, grid, convergence]
                                                   -> iwaves.json, fundamental_mode.csv
  scan         sweeps, m [, solver, tracking]      -> scan.json, scan_<i>_<family>.csv

Every run writes manifest.json with the resolved config; every other file carries its
SHA-256. The geometry key may name a JSON file, resolved against the config's directory.
Schemas live in schemas/. Exit codes: 0 success, 2 config error, 3 module error, 1 other.
Failures print {"error": {...}} on stderr and write error.json into --out.)";

int exit_code(gyro::ErrorKind k) { return k == gyro::ErrorKind::config ? 2 : 3; }

void report(const std::string& sub, const std::string& out_dir, const std::string& kind, const std::string& msg) {
  const nlohmann::json e = {{"error", {{"kind", kind}, {"message", msg}, {"subcommand", sub}}}, {"schema_version", 1}};
  std::cerr << e.dump() << '\n';
  if (out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream os(std::filesystem::path(out_dir) / "error.json");
  if (os) os << e.dump(2) << '\n';
}

nlohmann::json inline_geometry(nlohmann::json cfg, const std::string& config_path) {
  if (!cfg.is_object() || !cfg.contains("geometry") || !cfg["geometry"].is_string()) return cfg;
  std::filesystem::path p = cfg["geometry"].get<std::string>();
  if (p.is_relative() && config_path != "-") p = std::filesystem::path(config_path).parent_path() / p;
  cfg["geometry"] = gyro::cli::read_json(p.string());
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gyro: gyroscopic polynomial bases, sparse operators and damped inertial waves"};
  app.footer(kFooter);
  app.require_subcommand(1);
  std::string config_path, out_dir, active;
  int workers = 0, indent = 2;
  for (const auto& name : gyro::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, "run " + name);
    sub->add_option("--config,-c", config_path, "JSON config file, - for stdin")->required();
    sub->add_option("--out,-o", out_dir, "output directory")->required();
    sub->add_option("--workers,-j", workers, "scan worker threads, 0 for the OpenMP default")->check(CLI::NonNegativeNumber);
    sub->add_option("--json-indent", indent, "JSON indentation, -1 for compact")->check(CLI::Range(-1, 8));
    sub->callback([&active, name] { active = name; });
  }
  app.add_flag_callback("--version", [] {
    std::cout << "gyro " << GYRO_VERSION << '\n';
    throw CLI::Success();
  });
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    gyro::cli::RunConfig run{active, inline_geometry(gyro::cli::read_json(config_path), config_path), out_dir, workers,
                             indent};
    std::cout << gyro::cli::run_command(run).dump() << '\n';
    return 0;
  } catch (const gyro::Error& e) {
    report(active, out_dir, gyro::to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report(active, out_dir, "internal", e.what());
    return 1;
  }
}
