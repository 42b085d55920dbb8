#pragma once

// Isometric embedding of CP^{n-1} in R^{n^2} by the quadratic monomials
//   x^h = sqrt2 |psi^h|^2,  x^hk = 2 Re psi^h conj(psi^k),  y^hk = -2 Im psi^h conj(psi^k)
// for unit psi, pairs h < k in row-major order.

#include <vector>

#include "holoproj/chart.hpp"
#include "holoproj/hilbert.hpp"
#include "holoproj/verify.hpp"

namespace holoproj {

/// |d embed|^2 = kEmbeddingMetricScale * ds^2 (factor-4 Fubini-Study metric).
/// Frozen from the n = 2 Bloch sphere, where the image is a unit 2-sphere.
inline constexpr double kEmbeddingMetricScale = 1.0;

struct EmbeddedPoint {
  RVector x_diag;     // n entries, summing to sqrt(2)
  RVector x_sym;      // n(n-1)/2 entries
  RVector y_antisym;  // n(n-1)/2 entries

  /// x_diag, x_sym, y_antisym concatenated.
  RVector flat() const;
  double squared_norm() const { return flat().squaredNorm(); }
};

EmbeddedPoint mannoury_embed(const StateVector& psi);

/// |d embed(x + s v)/ds|^2 at s = 0, by 4th-order central differences.
double embedded_speed_squared(const ChartPoint& x, const RVector& direction,
                              double fd_step = kDefaultFdStep);

/// Relative mismatch between embedded and Fubini-Study squared speeds, after
/// the frozen scale. Zero directions are compared absolutely.
VerificationReport induced_metric_check(const std::vector<ChartPoint>& points,
                                        const std::vector<RVector>& directions,
                                        double tolerance = 1e-4,
                                        double scale = kEmbeddingMetricScale);

}  // namespace holoproj
