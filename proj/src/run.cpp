#include "holoproj/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "holoproj/embed.hpp"
#include "holoproj/errors.hpp"
#include "holoproj/flow.hpp"
#include "holoproj/pt_scan.hpp"
#include "holoproj/report_io.hpp"
#include "holoproj/sampling.hpp"

namespace holoproj {

using nlohmann::json;

namespace {

int dimension(const RunConfig& cfg) {
  if (cfg.hamiltonian) return static_cast<int>(cfg.hamiltonian->dim());
  if (cfg.psi0) return static_cast<int>(cfg.psi0->dim());
  return cfg.n;
}

StateVector initial_state(const RunConfig& cfg, Rng& rng) {
  return cfg.psi0 ? cfg.psi0->normalized() : random_state(dimension(cfg), rng);
}

FdSteps fd_steps(const RunConfig& cfg) {
  FdSteps s;
  s.inner = cfg.fd_step;
  return s;
}

struct Artifact {
  json body = json::object();
  std::string csv;  // command-specific table; reports CSV when empty
};

Artifact run_verify(const RunConfig& cfg, Rng& rng, std::vector<VerificationReport>& reports) {
  const FlowSpec spec = make_flow_spec(*cfg.hamiltonian);
  const auto points = random_chart_points(spec.n(), static_cast<std::size_t>(cfg.points), rng);
  const FdSteps steps = fd_steps(cfg);
  const VectorField xi = xi_vector_field(spec, steps.inner);
  const bool hermitian = spec.K.is_hermitian();

  if (hermitian) {
    reports.push_back(killing_check(spec, points, cfg.tolerance("killing", 1e-6), steps));
  }
  reports.push_back(laplacian_eigen_check(spec.split.H, points,
                                          cfg.tolerance("laplacian_eigen", kSecondOrderTolerance),
                                          steps.inner));
  reports.push_back(third_derivative_check(
      spec.split.H, points, cfg.tolerance("third_derivative", kThirdOrderTolerance), steps.high));
  reports.push_back(analyticity_check(xi, points, cfg.tolerance("analyticity", kSecondOrderTolerance),
                                      steps));
  reports.push_back(hpp_check(spec, points, cfg.tolerance("hpp", kThirdOrderTolerance), steps));

  const RecoveredGenerator rec = recover_generator(xi, points, steps);
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    worst = std::max(worst, std::abs(rec.H_minus_mean[i] -
                                     (spec.H_field(points[i]) - spec.split.mean_H())));
    worst = std::max(worst, std::abs(rec.Gamma_minus_mean[i] -
                                     (spec.Gamma_field(points[i]) - spec.split.mean_Gamma())));
  }
  reports.push_back(make_report("recovery", static_cast<int>(points.size()), worst,
                                cfg.tolerance("recovery", kThirdOrderTolerance)));

  if (!hermitian) {
    const PhiStructure phi =
        phi_structure_check(spec, points, cfg.tolerance("phi_structure", kThirdOrderTolerance), steps);
    reports.push_back(phi.gradient);
    reports.push_back(phi.analytic);
    reports.push_back(phi.killing);
  }
  reports.push_back(
      matsushima_decompose(xi, points, cfg.tolerance("matsushima", kThirdOrderTolerance), steps)
          .report);
  return {};
}

Artifact run_evolve(const RunConfig& cfg, Rng& rng, std::vector<VerificationReport>& reports) {
  const FlowSpec spec = make_flow_spec(*cfg.hamiltonian);
  const StateVector psi0 = initial_state(cfg, rng);
  const auto flow = integrate_flow(spec, chart_embed(psi0), cfg.t_final, cfg.dt);
  HilbertEvolveOptions raw;
  raw.renormalize = false;
  const auto hilbert = evolve_hilbert(spec.K, psi0, cfg.t_final, cfg.dt, raw);

  std::vector<TrajectoryRow> rows;
  double mismatch = 0.0;
  const std::size_t count = std::min(flow.size(), hilbert.size());
  for (std::size_t i = 0; i < count; ++i) {
    const ChartPoint& x = flow[i].x;
    rows.push_back({flow[i].t, x.chart_index, x.coords, spec.H_field(x), spec.Gamma_field(x),
                    hilbert[i].psi.norm()});
    mismatch = std::max(mismatch, fs_distance(chart_lift(x), hilbert[i].psi));
  }
  reports.push_back(make_report("flow_equivalence", static_cast<int>(count), mismatch,
                                cfg.tolerance("flow_equivalence", 1e-5)));

  Artifact a;
  a.body = trajectory_to_json(rows, "t");
  std::ostringstream csv;
  write_trajectory_csv(csv, rows, "t");
  a.csv = csv.str();
  return a;
}

Artifact run_geodesic(const RunConfig& cfg, Rng& rng, std::vector<VerificationReport>& reports) {
  const ChartPoint x0 = chart_embed(initial_state(cfg, rng));
  RVector u0;
  if (cfg.direction) {
    if (cfg.direction->size() != x0.real_dim()) {
      throw InputError("direction: expected " + std::to_string(x0.real_dim()) + " real entries");
    }
    u0 = *cfg.direction;
  } else {
    u0 = random_unit_tangent(x0, rng);
  }
  const double alpha = cfg.alpha;
  const double beta = cfg.beta;
  const auto curve = integrate_planar_curve(
      x0, u0, [alpha](double) { return alpha; }, [beta](double) { return beta; }, cfg.s_final,
      cfg.ds);
  if (x0.n() >= 3) {
    std::vector<StateVector> lifted;
    for (const auto& c : curve) lifted.push_back(chart_lift(c.x));
    reports.push_back(make_report("planarity", static_cast<int>(lifted.size()),
                                  planarity_defect(lifted), cfg.tolerance("planarity", 1e-6)));
  }
  Artifact a;
  a.body = curve_to_json(curve);
  std::ostringstream csv;
  write_curve_csv(csv, curve);
  a.csv = csv.str();
  return a;
}

Artifact run_fixed_points(const RunConfig& cfg, Rng& rng,
                          std::vector<VerificationReport>& reports) {
  const FlowSpec spec = make_flow_spec(*cfg.hamiltonian);
  const auto seeds = default_seeds(spec.n(), static_cast<std::size_t>(4 * spec.n()), rng);
  const FixedPointResult result = fixed_points(spec, seeds);
  const EigenFixedPoints oracle = eigen_fixed_points(spec.K);

  // Worst distance from any solver point to the oracle set, and vice versa.
  auto nearest = [](const StateVector& p, const std::vector<StateVector>& set) {
    double best = M_PI;
    for (const auto& q : set) best = std::min(best, fs_distance(p, q));
    return best;
  };
  std::vector<StateVector> found;
  for (const auto& fp : result.points) found.push_back(chart_lift(fp.x));
  double worst = 0.0;
  for (const auto& p : found) worst = std::max(worst, nearest(p, oracle.points));
  for (const auto& q : oracle.points) worst = std::max(worst, nearest(q, found));
  std::string notes = std::to_string(found.size()) + " solver points, " +
                      std::to_string(oracle.points.size()) + " eigenvectors";
  if (oracle.defective) notes += ", defective";
  reports.push_back(make_report("fixed_points_oracle", static_cast<int>(found.size()), worst,
                                cfg.tolerance("fixed_points", 1e-6), notes));

  Artifact a;
  a.body = fixed_points_to_json(result);
  std::ostringstream csv;
  write_fixed_points_csv(csv, result);
  a.csv = csv.str();
  return a;
}

HamiltonianFamily build_family(const FamilyConfig& f) {
  auto grid = linspace(f.start, f.stop, f.count);
  if (f.name == "canonical") return canonical_pt_family(std::move(grid));
  if (f.name == "three_level") return three_level_pt_family(std::move(grid));
  return polynomial_family(f.coefficients, std::move(grid));
}

Artifact run_pt_scan(const RunConfig& cfg, std::vector<VerificationReport>& reports) {
  const HamiltonianFamily family = build_family(*cfg.family);
  ScanOptions opts;
  opts.coalescence_threshold = cfg.tolerance("coalescence", kCoalescenceThreshold);
  const ScanResult result = scan(family, opts);

  int errors = 0;
  for (const auto& r : result.records) errors += r.error.empty() ? 0 : 1;
  reports.push_back(make_report("scan_records", static_cast<int>(result.records.size()),
                                static_cast<double>(errors), 0.5, "count of failed grid points"));

  Artifact a;
  a.body = scan_to_json(result);
  if (!family.theta_grid.empty()) a.body["n"] = family.builder(family.theta_grid.front()).dim();
  // First change of spectral reality between adjacent grid points brackets an EP.
  for (std::size_t i = 0; i + 1 < result.records.size(); ++i) {
    const auto& lo = result.records[i];
    const auto& hi = result.records[i + 1];
    if (lo.error.empty() && hi.error.empty() && lo.all_real != hi.all_real) {
      a.body["exceptional_estimate"] = refine_exceptional(family.builder, lo.theta, hi.theta);
      break;
    }
  }
  std::ostringstream csv;
  write_scan_csv(csv, result);
  a.csv = csv.str();
  return a;
}

Artifact run_embed(const RunConfig& cfg, Rng& rng, std::vector<VerificationReport>& reports) {
  std::vector<StateVector> rays;
  if (cfg.psi0) {
    rays.push_back(cfg.psi0->normalized());
  } else {
    for (int i = 0; i < cfg.points; ++i) rays.push_back(random_state(dimension(cfg), rng));
  }
  std::vector<EmbeddedPoint> pts;
  double constraint = 0.0;
  const double norm0 = mannoury_embed(rays.front()).squared_norm();
  for (const auto& r : rays) {
    pts.push_back(mannoury_embed(r));
    constraint = std::max(constraint, std::abs(pts.back().x_diag.sum() - std::sqrt(2.0)));
    constraint = std::max(constraint, std::abs(pts.back().squared_norm() - norm0));
  }
  reports.push_back(make_report("embedding_constraints", static_cast<int>(pts.size()), constraint,
                                cfg.tolerance("embedding_constraints", 1e-12)));

  std::vector<ChartPoint> charts;
  std::vector<RVector> dirs;
  for (const auto& r : rays) {
    charts.push_back(chart_embed(r));
    dirs.push_back(random_unit_tangent(charts.back(), rng));
  }
  reports.push_back(induced_metric_check(charts, dirs, cfg.tolerance("induced_metric", 1e-4)));

  Artifact a;
  a.body = embedding_to_json(pts);
  std::ostringstream csv;
  write_embedding_csv(csv, pts);
  a.csv = csv.str();
  return a;
}

}  // namespace

RunOutcome execute(const RunConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  RunOutcome out;
  Artifact art;
  switch (cfg.command) {
    case Command::verify:
      art = run_verify(cfg, rng, out.reports);
      break;
    case Command::evolve:
      art = run_evolve(cfg, rng, out.reports);
      break;
    case Command::geodesic:
      art = run_geodesic(cfg, rng, out.reports);
      break;
    case Command::fixed_points:
      art = run_fixed_points(cfg, rng, out.reports);
      break;
    case Command::pt_scan:
      art = run_pt_scan(cfg, out.reports);
      break;
    case Command::embed:
      art = run_embed(cfg, rng, out.reports);
      break;
  }

  bool passed = true;
  for (const auto& r : out.reports) passed = passed && r.passed;
  out.exit_code = passed ? kExitOk : kExitCheckFailure;

  if (cfg.format == OutputFormat::csv) {
    if (art.csv.empty()) {
      std::ostringstream csv;
      write_reports_csv(csv, out.reports);
      out.document = csv.str();
    } else {
      out.document = art.csv;
    }
  } else {
    json doc = art.body;
    doc["command"] = command_name(cfg.command);
    if (!doc.contains("n")) doc["n"] = dimension(cfg);
    doc["seed"] = cfg.seed;
    const json bundle = reports_to_json(out.reports);
    doc["reports"] = bundle.at("reports");
    doc["all_passed"] = bundle.at("all_passed");
    out.document = doc.dump(2) + "\n";
  }
  return out;
}

std::string resolve_output_path(const RunConfig& cfg, const std::string& default_dir) {
  if (!cfg.output_path.empty()) return cfg.output_path;
  if (default_dir.empty()) return {};
  return (std::filesystem::path(default_dir) /
          (std::string(command_name(cfg.command)) + "." + format_name(cfg.format)))
      .string();
}

int run(const RunConfig& cfg, std::ostream& err) {
  try {
    const RunOutcome out = execute(cfg);
    write_output(cfg.output_path, out.document);
    for (const auto& r : out.reports) {
      if (!r.passed) {
        err << "FAILED " << r.identity_name << ": residual " << r.max_residual << " > "
            << r.tolerance << "\n";
      }
    }
    return out.exit_code;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DimensionError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "check failure: " << e.what() << "\n";
    return kExitCheckFailure;
  }
}

}  // namespace holoproj
