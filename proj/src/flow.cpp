#include "holoproj/flow.hpp"

#include <cmath>

#include "holoproj/errors.hpp"

namespace holoproj {

FlowSpec make_flow_spec(const OperatorMatrix& K) {
  HamiltonianSplit split = hermitian_split(K);
  ScalarField h = expectation_field(split.H, "H");
  ScalarField g = expectation_field(split.Gamma, "Gamma");
  return FlowSpec{K, std::move(split), std::move(h), std::move(g)};
}

RVector xi_field(const FlowSpec& spec, const ChartPoint& x, double fd_step) {
  if (x.n() != spec.n()) throw DimensionError("xi_field: chart point dimension mismatch");
  const KahlerStructures k = kahler_structures(x);
  const RVector dH = covariant_grad(spec.H_field, x, fd_step);
  const RVector dGamma = covariant_grad(spec.Gamma_field, x, fd_step);
  return kSymplecticCoefficient * (k.omega_inv * dH) - kGradientCoefficient * (k.g_inv * dGamma);
}

VectorField xi_vector_field(const FlowSpec& spec, double fd_step) {
  return [spec, fd_step](const ChartPoint& x) { return xi_field(spec, x, fd_step); };
}

namespace {

ChartPoint advanced(const ChartPoint& x, const RVector& dx) {
  return ChartPoint{x.chart_index, x.coords + dx};
}

}  // namespace

std::vector<FlowSample> integrate_flow(const FlowSpec& spec, const ChartPoint& x0,
                                       double t_final, double dt) {
  if (!(dt > 0.0)) throw DomainError("integrate_flow: dt must be positive");
  if (!(t_final >= 0.0)) throw DomainError("integrate_flow: t_final must be non-negative");
  std::vector<FlowSample> out;
  ChartPoint x = rechart(x0);
  out.push_back({0.0, x0});
  double t = 0.0;
  while (t < t_final * (1.0 - 1e-14)) {
    const double h = std::min(dt, t_final - t);
    try {
      const RVector k1 = xi_field(spec, x);
      const RVector k2 = xi_field(spec, advanced(x, 0.5 * h * k1));
      const RVector k3 = xi_field(spec, advanced(x, 0.5 * h * k2));
      const RVector k4 = xi_field(spec, advanced(x, h * k3));
      x.coords += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const EvaluationError& e) {
      throw IntegrationError(std::string("integrate_flow: ") + e.what(), t);
    }
    if (!x.coords.allFinite()) throw IntegrationError("integrate_flow: non-finite state", t);
    t += h;
    x = rechart(x);
    out.push_back({t, x});
  }
  return out;
}

std::vector<CurveSample> integrate_planar_curve(const ChartPoint& x0, const RVector& u0,
                                                const CurveCoefficient& alpha,
                                                const CurveCoefficient& beta, double s_final,
                                                double ds) {
  if (!(ds > 0.0)) throw DomainError("integrate_planar_curve: ds must be positive");
  if (u0.size() != x0.coords.size()) throw DimensionError("integrate_planar_curve: tangent size");
  if (!(u0.norm() > 0.0)) throw DomainError("integrate_planar_curve: zero initial tangent");

  const Eigen::Index d = x0.coords.size();
  const RMatrix J = kahler_structures(x0).J;  // constant in affine charts

  // state = (x, u)  ->  (u, -Gamma(u, u) + (alpha + beta J) u)
  auto rhs = [&](int chart, double s, const RVector& state) {
    const ChartPoint p{chart, state.head(d)};
    const RVector u = state.tail(d);
    const Tensor3 G = christoffel_closed_form(p);
    RVector acc = alpha(s) * u + beta(s) * (J * u);
    for (Eigen::Index c = 0; c < d; ++c) {
      double q = 0.0;
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) q += G(c, a, b) * u[a] * u[b];
      acc[c] -= q;
    }
    RVector out(2 * d);
    out << u, acc;
    return out;
  };

  std::vector<CurveSample> out;
  out.push_back({0.0, x0, u0});
  ChartPoint x = x0;
  RVector u = u0;
  double s = 0.0;
  while (s < s_final * (1.0 - 1e-14)) {
    const ChartPoint moved = rechart(x);
    if (moved.chart_index != x.chart_index) {
      u = transfer_tangent(x, u, moved.chart_index);
      x = moved;
    }
    const int chart = x.chart_index;
    const double h = std::min(ds, s_final - s);
    RVector state(2 * d);
    state << x.coords, u;
    const RVector k1 = rhs(chart, s, state);
    const RVector k2 = rhs(chart, s + 0.5 * h, state + 0.5 * h * k1);
    const RVector k3 = rhs(chart, s + 0.5 * h, state + 0.5 * h * k2);
    const RVector k4 = rhs(chart, s + h, state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!state.allFinite()) throw IntegrationError("integrate_planar_curve: non-finite state", s);
    x.coords = state.head(d);
    u = state.tail(d);
    s += h;
    out.push_back({s, x, u});
  }
  return out;
}

std::vector<ChartPoint> default_seeds(int n, std::size_t random_count, Rng& rng) {
  std::vector<ChartPoint> seeds;
  for (int k = 0; k < n; ++k) {
    CVector e = CVector::Zero(n);
    e[k] = 1.0;
    seeds.push_back(chart_embed(StateVector(e)));
  }
  for (std::size_t i = 0; i < random_count; ++i) seeds.push_back(random_chart_point(n, rng));
  return seeds;
}

namespace {

struct NewtonOutcome {
  ChartPoint x;
  double residual;
  bool converged;
};

// Known roots are deflated away: Newton runs on m(x) xi(x) with
// m = prod_i (1 / d(x, r_i)^2 + 1), which cannot converge to any r_i.
NewtonOutcome newton_solve(const FlowSpec& spec, ChartPoint x, const std::vector<StateVector>& known,
                           const NewtonOptions& opts) {
  const VectorField deflated = [&](const ChartPoint& p) -> RVector {
    const RVector v = xi_field(spec, p);
    if (known.empty()) return v;
    const StateVector psi = chart_lift(p);
    double m = 1.0;
    for (const StateVector& r : known) {
      const double d = fs_distance(psi, r);
      m *= 1.0 / (d * d) + 1.0;
    }
    return m * v;
  };
  x = rechart(x, 1.0);
  RVector f = deflated(x);
  double r = metric_norm(x, xi_field(spec, x));
  for (int it = 0; it < opts.max_iterations && r >= opts.tolerance; ++it) {
    // rows: d_a f^b  ->  Jacobian is its transpose
    const RMatrix jac = fd_vector_derivatives(deflated, x, 1, opts.jacobian_step).transpose();
    const RVector step = jac.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) break;
    // The line search stays in one chart, where the Newton direction is a
    // descent direction for the coordinate norm of f.
    const double merit = f.norm();
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      const ChartPoint trial{x.chart_index, x.coords + lambda * step};
      if (!trial.coords.allFinite() || trial.max_affine_modulus() > kConditioningLimit) continue;
      const RVector f_trial = deflated(trial);
      if (f_trial.allFinite() && f_trial.norm() < merit) {
        x = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    x = rechart(x);
    f = deflated(x);
    r = metric_norm(x, xi_field(spec, x));
  }
  return {x, r, r < opts.tolerance};
}

}  // namespace

FixedPointResult fixed_points(const FlowSpec& spec, const std::vector<ChartPoint>& seeds,
                              const NewtonOptions& opts) {
  if (seeds.empty()) throw DomainError("fixed_points: no seeds");
  FixedPointResult result;
  std::vector<StateVector> found;
  std::size_t failures = 0;
  std::size_t tried = 0;
  for (const ChartPoint& seed : seeds) {
    // At most n isolated fixed points; past that every seed would be deflated away.
    if (static_cast<int>(found.size()) >= spec.n()) break;
    ++tried;
    NewtonOutcome o;
    try {
      o = newton_solve(spec, seed, found, opts);
    } catch (const std::exception&) {
      ++failures;
      continue;
    }
    if (!o.converged) {
      ++failures;
      continue;
    }
    const StateVector psi = chart_lift(o.x);
    bool duplicate = false;
    for (const FixedPoint& fp : result.points) {
      if (fs_distance(chart_lift(fp.x), psi) < opts.dedup_distance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      result.points.push_back({chart_embed(psi), o.residual});
      found.push_back(psi);
    }
  }
  if (result.points.empty()) {
    result.diagnostic = "no seed converged (" + std::to_string(seeds.size()) + " seeds tried)";
  } else if (failures > 0) {
    result.diagnostic = std::to_string(failures) + " of " + std::to_string(tried) +
                        " seeds did not converge";
  }
  return result;
}

}  // namespace holoproj
