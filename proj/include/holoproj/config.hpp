#pragma once

// Run configuration: a single JSON document. Complex numbers are [re, im]
// pairs (a bare number is read as real); matrices are row-major nested arrays.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holoproj/hilbert.hpp"

namespace holoproj {

enum class Command { evolve, geodesic, verify, fixed_points, pt_scan, embed };
enum class OutputFormat { json, csv };

Command parse_command(const std::string& s);
const char* command_name(Command c);
OutputFormat parse_format(const std::string& s);
const char* format_name(OutputFormat f);

struct FamilyConfig {
  std::string name = "canonical";  // canonical | three_level | polynomial
  double start = 0.0;
  double stop = 2.0;
  std::size_t count = 101;
  std::vector<OperatorMatrix> coefficients;  // polynomial only
};

struct RunConfig {
  Command command = Command::verify;
  std::optional<OperatorMatrix> hamiltonian;
  std::optional<FamilyConfig> family;
  int n = 0;
  std::map<std::string, double> tolerances;
  double fd_step = 1e-3;
  std::uint64_t seed = 0;
  std::string output_path;
  OutputFormat format = OutputFormat::json;

  std::optional<StateVector> psi0;
  std::optional<RVector> direction;  // geodesic start tangent
  double t_final = 5.0;
  double dt = 0.01;
  double alpha = 0.0;
  double beta = 0.0;
  double s_final = 3.141592653589793;
  double ds = 0.01;
  int points = 10;

  /// Named tolerance, or `fallback` when not overridden.
  double tolerance(const std::string& name, double fallback) const;
};

/// Parses a complex matrix literal; `field` prefixes diagnostics.
OperatorMatrix parse_matrix(const nlohmann::json& j, const std::string& field);
nlohmann::json matrix_to_json(const OperatorMatrix& m);

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Applies `name=value` tolerance overrides.
void apply_tolerance_override(RunConfig& cfg, const std::string& assignment);

/// Cross-field validation: dimension agreement, positive tolerances, required inputs.
void validate(const RunConfig& cfg);

}  // namespace holoproj
