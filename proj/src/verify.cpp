#include "holoproj/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holoproj/errors.hpp"

namespace holoproj {

VerificationReport make_report(std::string name, int points, double max_residual,
                               double tolerance, std::string notes) {
  VerificationReport r;
  r.identity_name = std::move(name);
  r.points_tested = points;
  r.max_residual = max_residual;
  r.tolerance = tolerance;
  r.passed = std::isfinite(max_residual) && max_residual < tolerance;
  r.convention_notes = std::move(notes);
  return r;
}

namespace {

double max_abs(const RMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// nabla_a xi_b (both indices down), stored (a, b).
RMatrix lowered_derivative(const VectorField& xi, const ChartPoint& x, double step,
                           const RMatrix& g) {
  return covariant_vector_derivative(xi, x, step) * g;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double killing_residual(const VectorField& xi, const ChartPoint& x, const FdSteps& steps) {
  const RMatrix g = kahler_structures(x).g;
  const RMatrix L = lowered_derivative(xi, x, steps.inner, g);
  return max_abs(0.5 * (L + L.transpose()));
}

VerificationReport killing_check(const VectorField& xi, const std::vector<ChartPoint>& points,
                                 double tolerance, const FdSteps& steps) {
  double worst = 0.0;
  for (const ChartPoint& x : points) worst = std::max(worst, killing_residual(xi, x, steps));
  return make_report("killing", static_cast<int>(points.size()), worst, tolerance,
                     "nabla_(a xi_b) with xi_b = g_bc xi^c");
}

VerificationReport killing_check(const FlowSpec& spec, const std::vector<ChartPoint>& points,
                                 double tolerance, const FdSteps& steps) {
  if (spec.split.Gamma.entries().cwiseAbs().maxCoeff() > 1e-12) {
    throw PreconditionError("killing_check: generator is not Hermitian (Gamma != 0)");
  }
  return killing_check(xi_vector_field(spec, steps.inner), points, tolerance, steps);
}

ScalarField recovered_H_field(const VectorField& xi, const FdSteps& steps) {
  return ScalarField{[xi, steps](const ChartPoint& x) {
                       const KahlerStructures k = kahler_structures(x);
                       const RMatrix L = lowered_derivative(xi, x, steps.inner, k.g);
                       return k.omega_inv.cwiseProduct(L).sum() / (2.0 * x.n());
                     },
                     std::nullopt, "recovered H - H_bar"};
}

ScalarField recovered_Gamma_field(const VectorField& xi, const FdSteps& steps) {
  return ScalarField{[xi, steps](const ChartPoint& x) {
                       return covariant_vector_derivative(xi, x, steps.inner).trace() /
                              (2.0 * x.n());
                     },
                     std::nullopt, "recovered Gamma - Gamma_bar"};
}

RecoveredGenerator recover_generator(const VectorField& xi, const std::vector<ChartPoint>& points,
                                     const FdSteps& steps) {
  const ScalarField h = recovered_H_field(xi, steps);
  const ScalarField g = recovered_Gamma_field(xi, steps);
  RecoveredGenerator out;
  for (const ChartPoint& x : points) {
    out.H_minus_mean.push_back(h(x));
    out.Gamma_minus_mean.push_back(g(x));
  }
  return out;
}

VerificationReport laplacian_eigen_check(const OperatorMatrix& A,
                                         const std::vector<ChartPoint>& points,
                                         double tolerance, double fd_step) {
  const ScalarField f = expectation_field(A);
  const double mean = A.entries().trace().real() / A.dim();
  const double n = static_cast<double>(A.dim());
  double worst = 0.0;
  for (const ChartPoint& x : points) {
    worst = std::max(worst, std::abs(laplace_beltrami(f, x, fd_step) - n * (mean - f(x))));
  }
  return make_report("laplacian_eigen", static_cast<int>(points.size()), worst, tolerance);
}

Tensor3 third_derivative_rhs(const KahlerStructures& k, const RVector& grad) {
  const auto d = static_cast<std::size_t>(grad.size());
  const RVector Jg = k.J.transpose() * grad;  // J^d_a A_d
  Tensor3 out(d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        out(c, a, b) = -0.25 * (2.0 * k.g(a, b) * grad[c] + k.g(b, c) * grad[a] +
                                k.g(c, a) * grad[b] + k.omega(c, b) * Jg[a] +
                                k.omega(c, a) * Jg[b]);
      }
  return out;
}

VerificationReport third_derivative_check(const OperatorMatrix& A,
                                          const std::vector<ChartPoint>& points,
                                          double tolerance, double fd_step) {
  const ScalarField f = expectation_field(A);
  double worst = 0.0;
  for (const ChartPoint& x : points) {
    const Tensor3 lhs = covariant_third(f, x, fd_step);
    const RVector grad = covariant_grad(f, x);
    worst = std::max(worst, (lhs - third_derivative_rhs(kahler_structures(x), grad)).max_abs());
  }
  return make_report("third_derivative", static_cast<int>(points.size()), worst, tolerance,
                     "(c, a, b) = nabla_c nabla_a nabla_b A; J_a^d read as J^d_a");
}

VerificationReport third_derivative_contraction_check(const OperatorMatrix& A,
                                                      const std::vector<ChartPoint>& points,
                                                      double tolerance, double fd_step) {
  const ScalarField f = expectation_field(A);
  const double n = static_cast<double>(A.dim());
  double worst = 0.0;
  for (const ChartPoint& x : points) {
    const auto d = static_cast<std::size_t>(x.coords.size());
    const Tensor3 third = covariant_third(f, x, fd_step);
    const RVector grad = covariant_grad(f, x);
    const RMatrix g_inv = kahler_structures(x).g_inv;
    for (std::size_t c = 0; c < d; ++c) {
      double trace = 0.0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) trace += g_inv(a, b) * third(c, a, b);
      worst = std::max(worst, std::abs(trace + n * grad[c]));
    }
  }
  return make_report("third_derivative_contraction", static_cast<int>(points.size()), worst,
                     tolerance, "nabla_c laplacian A = -n nabla_c A");
}

LieChristoffel lie_christoffel(const VectorField& xi, const ChartPoint& x, const FdSteps& steps) {
  const auto d = static_cast<std::size_t>(x.coords.size());
  const RVector v = xi(x);
  const RMatrix d1 = fd_vector_derivatives(xi, x, 1, steps.inner);  // (a, c) = d_a xi^c
  const RMatrix d2 = fd_vector_derivatives(xi, x, 2, steps.high);   // (a*d+b, c)
  const Tensor3 G = christoffel_closed_form(x);
  const Tensor4 dG = christoffel_derivative(x, steps.inner);  // (e, c, a, b)
  const Tensor4 R = riemann_closed_form(kahler_structures(x));

  RMatrix nab(d, d);  // nabla_b xi^c
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t c = 0; c < d; ++c) {
      double s = d1(b, c);
      for (std::size_t e = 0; e < d; ++e) s += G(c, b, e) * v[e];
      nab(b, c) = s;
    }

  LieChristoffel out{Tensor3(d), Tensor3(d), 0.0};
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        const double dd = d2(a * d + b, c);
        double cov = dd;
        double coord = dd;
        for (std::size_t e = 0; e < d; ++e) {
          cov += dG(a, c, b, e) * v[e] + G(c, b, e) * d1(a, e);
          cov += G(c, a, e) * nab(b, e) - G(e, a, b) * nab(e, c);
          cov += R(e, a, b, c) * v[e];  // xi^e R_eab^c, a outermost
          coord += v[e] * dG(e, c, a, b) - G(e, a, b) * d1(e, c) + G(c, e, b) * d1(a, e) +
                   G(c, a, e) * d1(b, e);
        }
        out.covariant(a, b, c) = cov;
        out.coordinate(a, b, c) = coord;
      }
  out.discrepancy = (out.covariant - out.coordinate).max_abs();
  return out;
}

RVector hpp_phi(const VectorField& xi, const ChartPoint& x, const FdSteps& steps) {
  const ScalarField divergence{[xi, steps](const ChartPoint& y) {
                                 return covariant_vector_derivative(xi, y, steps.inner).trace();
                               },
                               std::nullopt, "div xi"};
  return fd_derivatives(divergence, x, 1, steps.outer) / (2.0 * x.n());
}

Tensor3 hpp_rhs(const RVector& phi, const RMatrix& J) {
  const auto d = static_cast<std::size_t>(phi.size());
  const RVector Jphi = J.transpose() * phi;  // phi_d J^d_b
  Tensor3 out(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        out(a, b, c) = (b == c ? phi[a] : 0.0) + (a == c ? phi[b] : 0.0) - Jphi[b] * J(c, a) -
                       Jphi[a] * J(c, b);
      }
  return out;
}

RVector projective_phi_from_contraction(const Tensor3& lie, int n) {
  const auto d = lie.dim();
  RVector phi = RVector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) phi[a] += lie(a, b, b);
  return phi / (2.0 * n - 1.0);
}

namespace {

struct HppPointResult {
  double residual;
  RVector phi;
};

HppPointResult hpp_at(const VectorField& xi, const ChartPoint& x, const FdSteps& steps) {
  const LieChristoffel lie = lie_christoffel(xi, x, steps);
  const RVector phi = hpp_phi(xi, x, steps);
  const Tensor3 rhs = hpp_rhs(phi, kahler_structures(x).J);
  return {(lie.coordinate - rhs).max_abs(), phi};
}

}  // namespace

VerificationReport hpp_check(const VectorField& xi, const std::vector<ChartPoint>& points,
                             double tolerance, const FdSteps& steps) {
  double worst = 0.0;
  for (const ChartPoint& x : points) worst = std::max(worst, hpp_at(xi, x, steps).residual);
  return make_report("hpp", static_cast<int>(points.size()), worst, tolerance,
                     "L_xi Gamma from coordinate dragging; phi = (1/2n) grad div xi");
}

VerificationReport hpp_check(const FlowSpec& spec, const std::vector<ChartPoint>& points,
                             double tolerance, const FdSteps& steps) {
  const VectorField xi = xi_vector_field(spec, steps.inner);
  double worst = 0.0;
  double num = 0.0;
  double den = 0.0;
  for (const ChartPoint& x : points) {
    const HppPointResult r = hpp_at(xi, x, steps);
    worst = std::max(worst, r.residual);
    const RVector dGamma = covariant_grad(spec.Gamma_field, x);
    num += r.phi.dot(dGamma);
    den += dGamma.squaredNorm();
  }
  std::string notes = "L_xi Gamma from coordinate dragging; phi = (1/2n) grad div xi";
  if (den > 1e-20) notes += "; fitted phi = c grad Gamma with c = " + format_double(num / den);
  return make_report("hpp", static_cast<int>(points.size()), worst, tolerance, notes);
}

VerificationReport analyticity_check(const VectorField& xi, const std::vector<ChartPoint>& points,
                                     double tolerance, const FdSteps& steps) {
  double worst = 0.0;
  for (const ChartPoint& x : points) {
    const KahlerStructures k = kahler_structures(x);
    const RMatrix L = lowered_derivative(xi, x, steps.inner, k.g);
    worst = std::max(worst, max_abs(k.J.transpose() * L * k.J - L));
  }
  return make_report("analyticity", static_cast<int>(points.size()), worst, tolerance,
                     "(nabla_d xi_c) J^d_b J^c_a = nabla_b xi_a");
}

PhiStructure phi_structure_check(const FlowSpec& spec, const std::vector<ChartPoint>& points,
                                 double tolerance, const FdSteps& steps) {
  const VectorField xi = xi_vector_field(spec, steps.inner);
  // phi fitted against the connection drag at each point
  const VectorField phi_field = [xi, steps](const ChartPoint& y) {
    const auto d = static_cast<std::size_t>(y.coords.size());
    const RMatrix J = kahler_structures(y).J;
    const LieChristoffel lie = lie_christoffel(xi, y, steps);
    RMatrix design(static_cast<Eigen::Index>(d * d * d), static_cast<Eigen::Index>(d));
    RVector target(static_cast<Eigen::Index>(d * d * d));
    for (std::size_t e = 0; e < d; ++e) {
      RVector unit = RVector::Zero(static_cast<Eigen::Index>(d));
      unit[static_cast<Eigen::Index>(e)] = 1.0;
      const Tensor3 basis = hpp_rhs(unit, J);
      for (std::size_t i = 0; i < basis.data().size(); ++i) {
        design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e)) = basis.data()[i];
      }
    }
    for (std::size_t i = 0; i < lie.coordinate.data().size(); ++i) {
      target[static_cast<Eigen::Index>(i)] = lie.coordinate.data()[i];
    }
    return RVector(design.colPivHouseholderQr().solve(target));
  };

  double grad_worst = 0.0;
  double analytic_worst = 0.0;
  double killing_worst = 0.0;
  for (const ChartPoint& x : points) {
    const Eigen::Index d = x.coords.size();
    const KahlerStructures k = kahler_structures(x);
    const Tensor3 G = christoffel_closed_form(x);
    const RVector phi = phi_field(x);
    const RMatrix dphi = fd_vector_derivatives(phi_field, x, 1, steps.outer);  // (b, a)
    RMatrix N = dphi;  // nabla_b phi_a
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index c = 0; c < d; ++c) N(b, a) -= G(c, b, a) * phi[c];
    grad_worst = std::max(grad_worst, 0.5 * max_abs(N - N.transpose()));
    analytic_worst = std::max(analytic_worst, max_abs(N - k.J.transpose() * N * k.J));
    const RMatrix M = N * k.J;  // nabla_b (J^c_a phi_c)
    killing_worst = std::max(killing_worst, max_abs(M + M.transpose()));
  }
  const int count = static_cast<int>(points.size());
  return PhiStructure{
      make_report("phi_gradient", count, grad_worst, tolerance, "nabla_[b phi_a]"),
      make_report("phi_analytic", count, analytic_worst, tolerance,
                  "nabla_b phi_a = J^p_b J^q_a nabla_p phi_q"),
      make_report("phi_killing", count, killing_worst, tolerance, "nabla_(b (J phi)_a)")};
}

MatsushimaResult matsushima_decompose(const VectorField& xi, const std::vector<ChartPoint>& points,
                                      double tolerance, const FdSteps& steps) {
  const VerificationReport holo = analyticity_check(xi, points, 10.0 * kSecondOrderTolerance, steps);
  if (!holo.passed) {
    throw PreconditionError("matsushima_decompose: field is not holomorphic (residual " +
                            format_double(holo.max_residual) + ")");
  }
  const ScalarField h = recovered_H_field(xi, steps);
  const ScalarField gamma = recovered_Gamma_field(xi, steps);
  const double outer = steps.outer;
  const VectorField eta = [h, outer](const ChartPoint& y) {
    return RVector(kSymplecticCoefficient * (kahler_structures(y).omega_inv *
                                             fd_derivatives(h, y, 1, outer)));
  };
  const VectorField zeta = [gamma, outer](const ChartPoint& y) {
    return RVector(kGradientCoefficient * (kahler_structures(y).omega_inv *
                                           fd_derivatives(gamma, y, 1, outer)));
  };

  MatsushimaResult out;
  const FdSteps coarse{outer, outer, outer};
  for (const ChartPoint& x : points) {
    const RMatrix J = kahler_structures(x).J;
    const RVector rebuilt = eta(x) + J * zeta(x);
    out.reconstruction_residual =
        std::max(out.reconstruction_residual, metric_norm(x, xi(x) - rebuilt));
    out.eta_residual = std::max({out.eta_residual, killing_residual(eta, x, coarse),
                                 killing_residual(zeta, x, coarse)});
  }
  out.report = make_report("matsushima_reconstruction", static_cast<int>(points.size()),
                           out.reconstruction_residual, tolerance,
                           "xi = eta + J zeta; eta, zeta Killing residual " +
                               format_double(out.eta_residual));
  return out;
}

}  // namespace holoproj
