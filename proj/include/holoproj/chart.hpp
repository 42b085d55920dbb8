#pragma once

// Real affine-chart description of the state manifold CP^{n-1}.
//
// Chart k covers the rays with psi^k != 0 and uses z^a = psi^a / psi^k
// (a != k, increasing order). Real coordinates interleave (Re z, Im z), so
// a point of CP^{n-1} has 2m = 2(n-1) coordinates. Index conventions:
//
//   g_ab        Fubini-Study metric with the overall factor 4 (ds = pi between
//               orthogonal states)
//   J^a_b       stored as J(a, b); multiplication by -i on each (Re z, Im z)
//               block, the orientation for which the Hermitian part of the
//               flow is +2 omega^{ab} d_b H
//   omega_ab    = g_ac J^c_b,  omega^ab = g^ac g^bd omega_cd = (J g^-1)^ab
//   Gamma^c_ab  stored as christoffel(c, a, b)
//   R_abc^d     stored as riemann(a, b, c, d), defined by the Ricci identity
//               nabla_b nabla_a xi_c - nabla_a nabla_b xi_c = R_abc^d xi_d

#include <functional>
#include <optional>
#include <string>

#include "holoproj/hilbert.hpp"
#include "holoproj/tensor.hpp"

namespace holoproj {

inline constexpr double kDefaultFdStep = 1e-3;
inline constexpr double kDefaultThirdFdStep = 5e-3;
/// Integrators and solvers move to the largest-pivot chart past this |z|_inf.
inline constexpr double kChartSwitchThreshold = 3.0;
/// Coordinates beyond this are refused by tensor_frame.
inline constexpr double kConditioningLimit = 1e6;

struct ChartPoint {
  int chart_index = 0;
  RVector coords;

  int n() const noexcept { return static_cast<int>(coords.size() / 2 + 1); }
  Eigen::Index real_dim() const noexcept { return coords.size(); }
  /// Complex affine coordinates z^a.
  CVector affine() const;
  double max_affine_modulus() const;
};

/// Affine coordinates of psi; default chart is the largest-modulus component.
ChartPoint chart_embed(const StateVector& psi, std::optional<int> chart_index = std::nullopt);

/// Representative with a 1 in the pivot slot.
StateVector chart_lift(const ChartPoint& x);

/// Re-express x in the largest-pivot chart once |z|_inf exceeds threshold.
ChartPoint rechart(const ChartPoint& x, double threshold = kChartSwitchThreshold);

/// Carry a real tangent vector at x into the given chart.
RVector transfer_tangent(const ChartPoint& x, const RVector& u, int new_chart);

/// Pointwise Kaehler data, all in closed form.
struct KahlerStructures {
  RMatrix g;
  RMatrix g_inv;
  RMatrix omega;      // omega_ab
  RMatrix omega_inv;  // omega^ab
  RMatrix J;          // J^a_b
};

KahlerStructures kahler_structures(const ChartPoint& x);

/// Closed-form Levi-Civita symbols from the holomorphic ones
/// Gamma^a_bc = -(zbar_b delta^a_c + zbar_c delta^a_b) / (1 + |z|^2).
Tensor3 christoffel_closed_form(const ChartPoint& x);

/// 4th-order central differences of the closed-form metric.
Tensor3 christoffel_fd(const ChartPoint& x, double fd_step = kDefaultFdStep);

/// d_e Gamma^c_ab stored as (e, c, a, b), by differencing the closed form.
Tensor4 christoffel_derivative(const ChartPoint& x, double fd_step = kDefaultFdStep);

struct TensorFrame {
  ChartPoint at;
  RMatrix g;
  RMatrix g_inv;
  RMatrix omega;
  RMatrix omega_inv;
  RMatrix J;
  Tensor3 christoffel;     // closed form
  Tensor3 christoffel_fd;  // from differences of g
  Tensor4 riemann;         // from differences of the Christoffel symbols
};

TensorFrame tensor_frame(const ChartPoint& x, double fd_step = kDefaultFdStep);

/// R_apc^q = -1/4 (g_ac d_p^q - g_pc d_a^q - w_ac J^q_p + w_pc J^q_a - 2 w_ap J^q_c).
Tensor4 riemann_closed_form(const TensorFrame& frame);
Tensor4 riemann_closed_form(const KahlerStructures& k);

/// Real function on the manifold evaluated through a chart.
struct ScalarField {
  std::function<double(const ChartPoint&)> evaluator;
  /// Generating Hermitian operator when the field is an expectation value.
  std::optional<OperatorMatrix> generator;
  std::string name;

  double operator()(const ChartPoint& x) const { return evaluator(x); }
};

/// x -> <A> at chart_lift(x); A must be Hermitian.
ScalarField expectation_field(const OperatorMatrix& A, std::string name = {});

/// Real vector field in chart components (components refer to the chart of the argument).
using VectorField = std::function<RVector(const ChartPoint&)>;

/// Partial derivatives of f at x, composed from 4th-order central first-difference
/// stencils. order 1 -> gradient (size d); 2 -> d*d (row-major); 3 -> d*d*d.
RVector fd_derivatives(const ScalarField& f, const ChartPoint& x, int order,
                       double fd_step = kDefaultFdStep);

/// Partials of a vector field. Result column block layout: entry (a, ..., c)
/// in a matrix whose rows enumerate derivative multi-indices (row-major) and
/// whose columns enumerate components.
RMatrix fd_vector_derivatives(const VectorField& v, const ChartPoint& x, int order,
                              double fd_step = kDefaultFdStep);

RVector covariant_grad(const ScalarField& f, const ChartPoint& x,
                       double fd_step = kDefaultFdStep);

/// nabla_a nabla_b f.
RMatrix covariant_hessian(const ScalarField& f, const ChartPoint& x,
                          double fd_step = kDefaultFdStep);

/// nabla_c nabla_a nabla_b f stored as (c, a, b): c is the outermost derivative.
Tensor3 covariant_third(const ScalarField& f, const ChartPoint& x,
                        double fd_step = kDefaultThirdFdStep);

double laplace_beltrami(const ScalarField& f, const ChartPoint& x,
                        double fd_step = kDefaultFdStep);

/// nabla_a xi^b stored as (a, b).
RMatrix covariant_vector_derivative(const VectorField& xi, const ChartPoint& x,
                                    double fd_step = kDefaultFdStep);

/// nabla_a nabla_b xi^c stored as (a, b, c).
Tensor3 covariant_vector_second(const VectorField& xi, const ChartPoint& x,
                                double fd_step = kDefaultThirdFdStep);

/// Euclidean-independent length sqrt(g(v, v)).
double metric_norm(const ChartPoint& x, const RVector& v);

}  // namespace holoproj
