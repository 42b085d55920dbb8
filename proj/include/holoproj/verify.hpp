#pragma once

// Residual checkers for the identities satisfied by flows of complex
// Hamiltonians on CP^{n-1}. Every checker evaluates pointwise and reports the
// largest residual; tolerances default to 1e-5 for identities involving up to
// two derivatives and 1e-4 for three.

#include <string>
#include <vector>

#include "holoproj/chart.hpp"
#include "holoproj/flow.hpp"
#include "holoproj/hilbert.hpp"

namespace holoproj {

inline constexpr double kSecondOrderTolerance = 1e-5;
inline constexpr double kThirdOrderTolerance = 1e-4;

struct VerificationReport {
  std::string identity_name;
  int points_tested = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string convention_notes;

  bool operator==(const VerificationReport&) const = default;
};

VerificationReport make_report(std::string name, int points, double max_residual,
                               double tolerance, std::string notes = {});

/// Difference steps for nested derivatives: `inner` for first derivatives,
/// `high` for second partials, `outer` for derivatives of quantities that are
/// themselves differences.
struct FdSteps {
  double inner = kDefaultFdStep;
  double high = kDefaultThirdFdStep;
  double outer = 1e-2;
};

/// max_ab |nabla_(a xi_b)| at x.
double killing_residual(const VectorField& xi, const ChartPoint& x, const FdSteps& steps = {});

/// Killing equation for the flow of a Hermitian K (Gamma must vanish).
VerificationReport killing_check(const FlowSpec& spec, const std::vector<ChartPoint>& points,
                                 double tolerance = 1e-6, const FdSteps& steps = {});

/// Killing equation for an arbitrary field.
VerificationReport killing_check(const VectorField& xi, const std::vector<ChartPoint>& points,
                                 double tolerance = 1e-6, const FdSteps& steps = {});

/// (1/2n) omega^{ab} nabla_a xi_b  ->  H - H_bar
ScalarField recovered_H_field(const VectorField& xi, const FdSteps& steps = {});
/// (1/2n) g^{ab} nabla_a xi_b  ->  Gamma - Gamma_bar
ScalarField recovered_Gamma_field(const VectorField& xi, const FdSteps& steps = {});

struct RecoveredGenerator {
  std::vector<double> H_minus_mean;
  std::vector<double> Gamma_minus_mean;
};

RecoveredGenerator recover_generator(const VectorField& xi, const std::vector<ChartPoint>& points,
                                     const FdSteps& steps = {});

/// |laplacian A - n (A_bar - A)|.
VerificationReport laplacian_eigen_check(const OperatorMatrix& A,
                                         const std::vector<ChartPoint>& points,
                                         double tolerance = kSecondOrderTolerance,
                                         double fd_step = kDefaultFdStep);

/// Right side of the third-derivative identity for an observable, stored (c, a, b):
/// -1/4 (2 g_ab A_c + g_bc A_a + g_ca A_b + w_cb J^d_a A_d + w_ca J^d_b A_d).
Tensor3 third_derivative_rhs(const KahlerStructures& k, const RVector& grad);

VerificationReport third_derivative_check(const OperatorMatrix& A,
                                          const std::vector<ChartPoint>& points,
                                          double tolerance = kThirdOrderTolerance,
                                          double fd_step = kDefaultThirdFdStep);

/// g^{ab} nabla_c nabla_a nabla_b A + n nabla_c A, i.e. the (a, b) trace of the
/// third-derivative identity; consistent with the Laplacian eigen-relation.
VerificationReport third_derivative_contraction_check(const OperatorMatrix& A,
                                                      const std::vector<ChartPoint>& points,
                                                      double tolerance = kThirdOrderTolerance,
                                                      double fd_step = kDefaultThirdFdStep);

/// Lie derivative of the Levi-Civita connection, L_xi Gamma^c_ab stored (a, b, c).
struct LieChristoffel {
  /// nabla_a nabla_b xi^c + R^c_{dab} xi^d with R^c_{dab} = riemann(a, b, d, c).
  Tensor3 covariant;
  /// d_a d_b xi^c + xi^d d_d G^c_ab - G^d_ab d_d xi^c + G^c_db d_a xi^d + G^c_ad d_b xi^d.
  Tensor3 coordinate;
  double discrepancy = 0.0;
};

LieChristoffel lie_christoffel(const VectorField& xi, const ChartPoint& x,
                               const FdSteps& steps = {});

/// phi_a = (1/2n) nabla_a nabla_b xi^b.
RVector hpp_phi(const VectorField& xi, const ChartPoint& x, const FdSteps& steps = {});

/// phi_a d_b^c + phi_b d_a^c - phi_d J^d_b J^c_a - phi_d J^d_a J^c_b, stored (a, b, c).
Tensor3 hpp_rhs(const RVector& phi, const RMatrix& J);

/// phi_a = (1/(2n-1)) L_xi Gamma^b_ab: the real-projective contraction.
RVector projective_phi_from_contraction(const Tensor3& lie, int n);

VerificationReport hpp_check(const FlowSpec& spec, const std::vector<ChartPoint>& points,
                             double tolerance = kThirdOrderTolerance, const FdSteps& steps = {});
VerificationReport hpp_check(const VectorField& xi, const std::vector<ChartPoint>& points,
                             double tolerance = kThirdOrderTolerance, const FdSteps& steps = {});

/// |(nabla_d xi_c) J^d_b J^c_a - nabla_b xi_a|.
VerificationReport analyticity_check(const VectorField& xi, const std::vector<ChartPoint>& points,
                                     double tolerance = kSecondOrderTolerance,
                                     const FdSteps& steps = {});

struct PhiStructure {
  VerificationReport gradient;  // antisymmetric part of nabla phi
  VerificationReport analytic;  // nabla_b phi_a - J^p_b J^q_a nabla_p phi_q
  VerificationReport killing;   // nabla_(b (J^c_a) phi_c)
};

/// phi is fitted pointwise from the connection drag (least squares against
/// the h-projective form), then differentiated.
PhiStructure phi_structure_check(const FlowSpec& spec, const std::vector<ChartPoint>& points,
                                 double tolerance = kThirdOrderTolerance,
                                 const FdSteps& steps = {});

struct MatsushimaResult {
  double eta_residual = 0.0;             // worst Killing residual of eta and zeta
  double reconstruction_residual = 0.0;  // max |xi - (eta + J zeta)|_g
  VerificationReport report;
};

/// Splits a holomorphic xi into eta + J zeta with eta, zeta Killing, both
/// generated by the recovered observables.
MatsushimaResult matsushima_decompose(const VectorField& xi, const std::vector<ChartPoint>& points,
                                      double tolerance = kThirdOrderTolerance,
                                      const FdSteps& steps = {});

}  // namespace holoproj
