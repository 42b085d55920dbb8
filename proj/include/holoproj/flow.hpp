#pragma once

// The projective flow generated by K = H - i Gamma on CP^{n-1}:
//
//   xi^a = 2 omega^{ab} d_b H - 2 g^{ab} d_b Gamma
//
// H and Gamma are the expectation fields of the two Hermitian parts. The
// factor 2 on the gradient term makes xi the exact image of the modified
// Schroedinger equation under the factor-4 Fubini-Study metric; the
// quantum symplectic structure is omega/2, hence the 2 on the first term.

#include <functional>
#include <string>
#include <vector>

#include "holoproj/chart.hpp"
#include "holoproj/hilbert.hpp"
#include "holoproj/sampling.hpp"

namespace holoproj {

/// Coefficient of the symplectic term, 2 omega^{ab} d_b H.
inline constexpr double kSymplecticCoefficient = 2.0;
/// Coefficient of the gradient term, -2 g^{ab} d_b Gamma.
inline constexpr double kGradientCoefficient = 2.0;

struct FlowSpec {
  OperatorMatrix K;
  HamiltonianSplit split;
  ScalarField H_field;
  ScalarField Gamma_field;

  int n() const noexcept { return static_cast<int>(K.dim()); }
};

FlowSpec make_flow_spec(const OperatorMatrix& K);

RVector xi_field(const FlowSpec& spec, const ChartPoint& x, double fd_step = kDefaultFdStep);

/// The flow field as a VectorField callback (captures spec by value).
VectorField xi_vector_field(const FlowSpec& spec, double fd_step = kDefaultFdStep);

struct FlowSample {
  double t;
  ChartPoint x;
};

/// RK4 on dx = xi dt with chart switching past |z|_inf > 3.
std::vector<FlowSample> integrate_flow(const FlowSpec& spec, const ChartPoint& x0,
                                       double t_final, double dt);

struct CurveSample {
  double s;
  ChartPoint x;
  RVector u;
};

using CurveCoefficient = std::function<double(double)>;

/// Integrates x'' + Gamma(x', x') = (alpha(s) + beta(s) J) x'. alpha = beta = 0
/// gives geodesics.
std::vector<CurveSample> integrate_planar_curve(const ChartPoint& x0, const RVector& u0,
                                                const CurveCoefficient& alpha,
                                                const CurveCoefficient& beta, double s_final,
                                                double ds);

struct FixedPoint {
  ChartPoint x;
  double residual;  // metric norm of xi at x
};

struct FixedPointResult {
  std::vector<FixedPoint> points;
  std::string diagnostic;
};

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 60;
  int max_halvings = 40;
  double jacobian_step = 1e-5;
  double dedup_distance = 1e-5;
};

/// n coordinate rays followed by `random_count` Gaussian rays.
std::vector<ChartPoint> default_seeds(int n, std::size_t random_count, Rng& rng);

/// Damped Newton on xi(x) = 0 from each seed; converged points deduplicated projectively.
FixedPointResult fixed_points(const FlowSpec& spec, const std::vector<ChartPoint>& seeds,
                              const NewtonOptions& opts = {});

}  // namespace holoproj
