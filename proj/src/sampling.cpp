#include "holoproj/sampling.hpp"

#include <cmath>

namespace holoproj {

namespace {

cplx gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

CMatrix gaussian_matrix(Eigen::Index n, Rng& rng) {
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gaussian(rng);
  return a;
}

}  // namespace

StateVector random_state(Eigen::Index n, Rng& rng) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian(rng);
  return StateVector(v.normalized());
}

ChartPoint random_chart_point(Eigen::Index n, Rng& rng) { return chart_embed(random_state(n, rng)); }

std::vector<ChartPoint> random_chart_points(Eigen::Index n, std::size_t count, Rng& rng) {
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(random_chart_point(n, rng));
  return pts;
}

OperatorMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const CMatrix a = gaussian_matrix(n, rng);
  return OperatorMatrix(0.5 * (a + a.adjoint()));
}

OperatorMatrix random_operator(Eigen::Index n, Rng& rng) {
  const OperatorMatrix h = random_hermitian(n, rng);
  const OperatorMatrix g = random_hermitian(n, rng);
  return h - cplx(0.0, 1.0) * g;
}

RVector random_unit_tangent(const ChartPoint& x, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RVector u(x.coords.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
  return u / metric_norm(x, u);
}

}  // namespace holoproj
