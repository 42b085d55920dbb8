#include "holoproj/config.hpp"

#include <cmath>
#include <fstream>

#include "holoproj/errors.hpp"

namespace holoproj {

using nlohmann::json;

Command parse_command(const std::string& s) {
  if (s == "evolve") return Command::evolve;
  if (s == "geodesic") return Command::geodesic;
  if (s == "verify") return Command::verify;
  if (s == "fixed-points") return Command::fixed_points;
  if (s == "pt-scan") return Command::pt_scan;
  if (s == "embed") return Command::embed;
  throw InputError("command: unknown command '" + s + "'");
}

const char* command_name(Command c) {
  switch (c) {
    case Command::evolve:
      return "evolve";
    case Command::geodesic:
      return "geodesic";
    case Command::verify:
      return "verify";
    case Command::fixed_points:
      return "fixed-points";
    case Command::pt_scan:
      return "pt-scan";
    case Command::embed:
      return "embed";
  }
  return "verify";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw InputError("format: expected json or csv, got '" + s + "'");
}

const char* format_name(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

double RunConfig::tolerance(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

namespace {

double finite_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw InputError(field + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(field + ": non-finite value");
  return v;
}

cplx parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {finite_number(j, field), 0.0};
  if (!j.is_array() || j.size() != 2) throw InputError(field + ": expected [re, im]");
  return {finite_number(j[0], field + "[0]"), finite_number(j[1], field + "[1]")};
}

StateVector parse_state(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() < 2) throw InputError(field + ": expected an array of >= 2 entries");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = parse_complex(j[i], field + "[" + std::to_string(i) + "]");
  }
  try {
    return StateVector(v);
  } catch (const std::exception& e) {
    throw InputError(field + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string(key) + ": wrong type");
  }
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? finite_number(j.at(key), key) : fallback;
}

}  // namespace

OperatorMatrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InputError(field + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) throw InputError(row_field + ": expected a row array");
    if (j[r].size() != rows) {
      throw InputError(row_field + ": non-square matrix (row has " + std::to_string(j[r].size()) +
                       " entries, expected " + std::to_string(rows) + ")");
    }
    for (std::size_t c = 0; c < rows; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_complex(j[r][c], row_field + "[" + std::to_string(c) + "]");
    }
  }
  return OperatorMatrix(m);
}

json matrix_to_json(const OperatorMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.dim(); ++c) {
      row.push_back({m.entries()(r, c).real(), m.entries()(r, c).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  RunConfig cfg;
  if (j.contains("command")) cfg.command = parse_command(get_or<std::string>(j, "command", ""));

  if (j.contains("hamiltonian")) {
    const json& h = j.at("hamiltonian");
    if (h.is_object()) {
      const OperatorMatrix herm = parse_matrix(h.at("H"), "hamiltonian.H");
      if (h.contains("Gamma")) {
        const OperatorMatrix gamma = parse_matrix(h.at("Gamma"), "hamiltonian.Gamma");
        if (gamma.dim() != herm.dim()) throw InputError("hamiltonian.Gamma: dimension differs from H");
        cfg.hamiltonian = herm - cplx(0.0, 1.0) * gamma;
      } else {
        cfg.hamiltonian = herm;
      }
    } else {
      cfg.hamiltonian = parse_matrix(h, "hamiltonian");
    }
  }

  if (j.contains("family")) {
    const json& f = j.at("family");
    if (!f.is_object()) throw InputError("family: expected an object");
    FamilyConfig fam;
    fam.name = get_or<std::string>(f, "name", fam.name);
    fam.start = number_or(f, "start", fam.start);
    fam.stop = number_or(f, "stop", fam.stop);
    fam.count = get_or<std::size_t>(f, "count", fam.count);
    if (fam.name == "polynomial") {
      if (!f.contains("coefficients") || !f.at("coefficients").is_array()) {
        throw InputError("family.coefficients: required for the polynomial family");
      }
      const json& cs = f.at("coefficients");
      for (std::size_t k = 0; k < cs.size(); ++k) {
        fam.coefficients.push_back(
            parse_matrix(cs[k], "family.coefficients[" + std::to_string(k) + "]"));
      }
    } else if (fam.name != "canonical" && fam.name != "three_level") {
      throw InputError("family.name: unknown family '" + fam.name + "'");
    }
    if (fam.count == 0) throw InputError("family.count: must be positive");
    if (!(fam.stop > fam.start) && fam.count > 1) throw InputError("family: stop must exceed start");
    cfg.family = std::move(fam);
  }

  cfg.n = get_or<int>(j, "n", 0);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw InputError("tolerances: expected an object of name -> value");
    for (auto it = t.begin(); it != t.end(); ++it) {
      cfg.tolerances[it.key()] = finite_number(it.value(), "tolerances." + it.key());
    }
  }
  cfg.fd_step = number_or(j, "fd_step", cfg.fd_step);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.output_path = get_or<std::string>(j, "output_path", cfg.output_path);
  if (j.contains("format")) cfg.format = parse_format(get_or<std::string>(j, "format", "json"));

  if (j.contains("psi0")) cfg.psi0 = parse_state(j.at("psi0"), "psi0");
  if (j.contains("direction")) {
    const json& d = j.at("direction");
    if (!d.is_array()) throw InputError("direction: expected a real array");
    RVector u(static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      u[static_cast<Eigen::Index>(i)] = finite_number(d[i], "direction[" + std::to_string(i) + "]");
    }
    cfg.direction = u;
  }
  cfg.t_final = number_or(j, "t_final", cfg.t_final);
  cfg.dt = number_or(j, "dt", cfg.dt);
  cfg.alpha = number_or(j, "alpha", cfg.alpha);
  cfg.beta = number_or(j, "beta", cfg.beta);
  cfg.s_final = number_or(j, "s_final", cfg.s_final);
  cfg.ds = number_or(j, "ds", cfg.ds);
  cfg.points = get_or<int>(j, "points", cfg.points);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

void apply_tolerance_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InputError("--tol: expected name=value, got '" + assignment + "'");
  }
  const std::string name = assignment.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(assignment.substr(eq + 1), &used);
    if (used != assignment.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw InputError("--tol " + name + ": value is not a number");
  }
  cfg.tolerances[name] = value;
}

void validate(const RunConfig& cfg) {
  for (const auto& [name, value] : cfg.tolerances) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InputError("tolerances." + name + ": must be positive");
    }
  }
  if (!(cfg.fd_step > 0.0)) throw InputError("fd_step: must be positive");
  if (cfg.hamiltonian) {
    if (cfg.n != 0 && cfg.n != cfg.hamiltonian->dim()) {
      throw InputError("n: " + std::to_string(cfg.n) + " does not match hamiltonian dimension " +
                       std::to_string(cfg.hamiltonian->dim()));
    }
  }
  const auto dim = cfg.hamiltonian ? static_cast<int>(cfg.hamiltonian->dim()) : cfg.n;
  if (cfg.psi0 && dim != 0 && cfg.psi0->dim() != dim) {
    throw InputError("psi0: dimension does not match n");
  }
  switch (cfg.command) {
    case Command::evolve:
    case Command::verify:
    case Command::fixed_points:
      if (!cfg.hamiltonian) throw InputError("hamiltonian: required for this command");
      break;
    case Command::pt_scan:
      if (!cfg.family) throw InputError("family: required for pt-scan");
      break;
    case Command::geodesic:
    case Command::embed:
      if (dim < 2 && !cfg.psi0) throw InputError("n: required (>= 2) when psi0 is absent");
      break;
  }
  if (cfg.command == Command::evolve || cfg.command == Command::geodesic) {
    const double step = cfg.command == Command::evolve ? cfg.dt : cfg.ds;
    if (!(step > 0.0)) throw InputError("step size must be positive");
  }
  if (cfg.points < 1) throw InputError("points: must be positive");
}

}  // namespace holoproj
