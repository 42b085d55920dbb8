#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holoproj/config.hpp"
#include "holoproj/errors.hpp"
#include "holoproj/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"holoproj: projective flows of complex Hamiltonians"};
  std::string config_path;
  std::string command;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  double fd_step = 0.0;
  std::vector<std::string> tolerances;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--command", command,
                 "evolve | geodesic | verify | fixed-points | pt-scan | embed");
  app.add_option("--out", out_path, "output file (default: stdout or $HOLOPROJ_OUTPUT_DIR)");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* fd_opt = app.add_option("--fd-step", fd_step, "inner finite-difference step");
  app.add_option("--tol", tolerances, "tolerance override name=value (repeatable)");
  CLI11_PARSE(app, argc, argv);

  holoproj::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = holoproj::load_config(config_path);
    if (!command.empty()) cfg.command = holoproj::parse_command(command);
    if (!format.empty()) cfg.format = holoproj::parse_format(format);
    if (*seed_opt) cfg.seed = seed;
    if (*fd_opt) cfg.fd_step = fd_step;
    for (const auto& t : tolerances) holoproj::apply_tolerance_override(cfg, t);
    if (!out_path.empty()) cfg.output_path = out_path;
    const char* dir = std::getenv("HOLOPROJ_OUTPUT_DIR");
    cfg.output_path = holoproj::resolve_output_path(cfg, dir ? dir : "");
  } catch (const holoproj::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return holoproj::kExitInputError;
  }
  return holoproj::run(cfg, std::cerr);
}
