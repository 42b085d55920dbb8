#include "holoproj/embed.hpp"

#include <array>
#include <cmath>

#include "holoproj/errors.hpp"

namespace holoproj {

RVector EmbeddedPoint::flat() const {
  RVector out(x_diag.size() + x_sym.size() + y_antisym.size());
  out << x_diag, x_sym, y_antisym;
  return out;
}

EmbeddedPoint mannoury_embed(const StateVector& psi) {
  const CVector v = psi.components().normalized();
  const Eigen::Index n = v.size();
  const Eigen::Index pairs = n * (n - 1) / 2;
  EmbeddedPoint e{RVector(n), RVector(pairs), RVector(pairs)};
  for (Eigen::Index h = 0; h < n; ++h) e.x_diag[h] = std::sqrt(2.0) * std::norm(v[h]);
  Eigen::Index p = 0;
  for (Eigen::Index h = 0; h < n; ++h) {
    for (Eigen::Index k = h + 1; k < n; ++k, ++p) {
      const cplx rho = v[h] * std::conj(v[k]);
      e.x_sym[p] = 2.0 * rho.real();
      e.y_antisym[p] = -2.0 * rho.imag();  // i (rho - conj(rho))
    }
  }
  return e;
}

double embedded_speed_squared(const ChartPoint& x, const RVector& direction, double fd_step) {
  if (direction.size() != x.coords.size()) {
    throw DimensionError("embedded_speed_squared: direction size mismatch");
  }
  constexpr std::array<double, 4> offsets{-2.0, -1.0, 1.0, 2.0};
  constexpr std::array<double, 4> weights{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
  RVector velocity;
  for (std::size_t s = 0; s < offsets.size(); ++s) {
    const ChartPoint y{x.chart_index, x.coords + offsets[s] * fd_step * direction};
    const RVector e = mannoury_embed(chart_lift(y)).flat() * weights[s];
    velocity = (s == 0) ? e : RVector(velocity + e);
  }
  velocity /= fd_step;
  return velocity.squaredNorm();
}

VerificationReport induced_metric_check(const std::vector<ChartPoint>& points,
                                        const std::vector<RVector>& directions,
                                        double tolerance, double scale) {
  if (points.size() != directions.size()) {
    throw DimensionError("induced_metric_check: one direction per point required");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double embedded = embedded_speed_squared(points[i], directions[i]);
    const RVector& v = directions[i];
    const double fs = v.dot(kahler_structures(points[i]).g * v);
    const double residual =
        fs > 0.0 ? std::abs(embedded - scale * fs) / (scale * fs) : std::abs(embedded);
    worst = std::max(worst, residual);
  }
  return make_report("induced_metric", static_cast<int>(points.size()), worst, tolerance,
                     "scale " + std::to_string(scale));
}

}  // namespace holoproj
