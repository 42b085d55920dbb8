#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "holoproj/chart.hpp"
#include "holoproj/errors.hpp"
#include "holoproj/flow.hpp"
#include "holoproj/sampling.hpp"
#include "oracles.hpp"

using namespace holoproj;
using oracle::I;

namespace {

ChartPoint origin(int n) { return {0, RVector::Zero(2 * (n - 1))}; }

double scalar_curvature(const Tensor4& R, const RMatrix& g_inv) {
  const auto d = R.dim();
  double s = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) s += g_inv(b, c) * R(a, b, c, a);
  return s;
}

}  // namespace

TEST_CASE("chart embed and lift") {
  auto x = chart_embed(StateVector{1, 0});
  CHECK(x.chart_index == 0);
  CHECK(x.coords.norm() == 0.0);

  x = chart_embed(StateVector{1, 1}, 0);
  CHECK(x.coords[0] == doctest::Approx(1.0));
  CHECK(x.coords[1] == doctest::Approx(0.0));

  x = chart_embed(StateVector{cplx(0, 2), 1, 1});
  CHECK(x.chart_index == 0);
  const RVector expect = (RVector(4) << 0.0, -0.5, 0.0, -0.5).finished();
  CHECK((x.coords - expect).norm() < 1e-15);

  CHECK_THROWS_AS(chart_embed(StateVector{1, 0}, 1), ChartError);

  auto lift = chart_lift(origin(2));
  CHECK(std::abs(lift[0] - 1.0) + std::abs(lift[1]) == 0.0);
  lift = chart_lift({1, (RVector(2) << 1.0, 0.0).finished()});
  CHECK(std::abs(lift[0] - 1.0) + std::abs(lift[1] - 1.0) == 0.0);
  lift = chart_lift({0, (RVector(2) << 0.3, -0.4).finished()});
  CHECK(std::abs(lift[1] - cplx(0.3, -0.4)) < 1e-16);

  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = random_state(2 + trial % 3, rng);
    CHECK(projectively_equal(chart_lift(chart_embed(psi)), psi));
    for (int k = 0; k < psi.dim(); ++k) {
      CHECK(projectively_equal(chart_lift(chart_embed(psi, k)), psi));
    }
  }
}

TEST_CASE("rechart and tangent transfer") {
  const ChartPoint far{0, (RVector(2) << 5.0, -1.0).finished()};
  const ChartPoint y = rechart(far);
  CHECK(y.chart_index == 1);
  CHECK(projectively_equal(chart_lift(y), chart_lift(far)));
  CHECK(rechart(origin(3)).chart_index == 0);

  // Tangent transfer agrees with differencing the transition map.
  Rng rng(22);
  const ChartPoint x = random_chart_point(3, rng);
  const RVector u = random_unit_tangent(x, rng);
  const int other = (x.chart_index + 1) % 3;
  const double h = 1e-5;
  auto moved = [&](double s) {
    ChartPoint p = x;
    p.coords += s * u;
    return chart_embed(chart_lift(p), other).coords;
  };
  const RVector fd = (moved(h) - moved(-h)) / (2 * h);
  CHECK((transfer_tangent(x, u, other) - fd).norm() < 1e-8);
  // Length is chart independent.
  CHECK(metric_norm(chart_embed(chart_lift(x), other), transfer_tangent(x, u, other)) ==
        doctest::Approx(metric_norm(x, u)).epsilon(1e-12));
}

TEST_CASE("tensor frame at the origin") {
  const TensorFrame f = tensor_frame(origin(2));
  CHECK((f.g - 4.0 * RMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(std::abs(f.omega(0, 1)) == doctest::Approx(4.0));
  CHECK(f.omega(0, 1) == -f.omega(1, 0));
  CHECK((f.J - f.g_inv * f.omega).norm() < 1e-15);
  CHECK(f.christoffel.max_abs() == 0.0);
  CHECK(f.christoffel_fd.max_abs() < 1e-12);

  CHECK_THROWS_AS(tensor_frame({0, (RVector(2) << 2e6, 0.0).finished()}), ConditioningError);
}

TEST_CASE("Kaehler relations") {
  Rng rng(23);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const ChartPoint x = random_chart_point(n, rng);
      const auto k = kahler_structures(x);
      const auto d = x.real_dim();
      const RMatrix Id = RMatrix::Identity(d, d);
      CHECK((k.J * k.J + Id).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((k.omega - k.g * k.J).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((k.omega + k.omega.transpose()).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((k.g + k.omega * k.J).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((k.g - k.J.transpose() * k.g * k.J).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((k.g * k.g_inv - Id).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((k.omega * k.omega_inv + Id).cwiseAbs().maxCoeff() < 1e-9 * k.g_inv.norm());
    }
  }
}

TEST_CASE("complex structure is parallel") {
  Rng rng(24);
  for (int n = 2; n <= 3; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const ChartPoint x = random_chart_point(n, rng);
      const Tensor3 G = christoffel_fd(x);
      const RMatrix J = kahler_structures(x).J;
      const auto d = static_cast<std::size_t>(x.real_dim());
      double worst = 0.0;
      // J is constant in affine coordinates, so nabla_a J^b_c is purely connection terms.
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          for (std::size_t c = 0; c < d; ++c) {
            double v = 0.0;
            for (std::size_t e = 0; e < d; ++e) v += G(b, a, e) * J(e, c) - G(e, a, c) * J(b, e);
            worst = std::max(worst, std::abs(v));
          }
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("Christoffel closed form against differences") {
  Rng rng(25);
  for (int n = 2; n <= 3; ++n) {
    for (const auto& x : random_chart_points(n, 20, rng)) {
      CHECK((christoffel_closed_form(x) - christoffel_fd(x)).max_abs() < 1e-8);
    }
  }
}

TEST_CASE("Riemann closed form") {
  Rng rng(26);
  for (int n = 2; n <= 3; ++n) {
    const double m = n - 1;
    for (const auto& x : random_chart_points(n, 20, rng)) {
      const TensorFrame f = tensor_frame(x);
      const Tensor4 R = riemann_closed_form(f);
      CHECK((R - f.riemann).max_abs() < 1e-5);
      // Constant curvature: scalar curvature m(m+1) for holomorphic sectional curvature 1.
      CHECK(std::abs(scalar_curvature(R, f.g_inv)) == doctest::Approx(m * (m + 1)).epsilon(1e-9));
      CHECK(scalar_curvature(f.riemann, f.g_inv) ==
            doctest::Approx(scalar_curvature(R, f.g_inv)).epsilon(1e-6));
      const auto d = R.dim();
      double cyclic = 0.0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          for (std::size_t c = 0; c < d; ++c)
            for (std::size_t e = 0; e < d; ++e)
              cyclic = std::max(cyclic, std::abs(R(a, b, c, e) + R(b, c, a, e) + R(c, a, b, e)));
      CHECK(cyclic < 1e-12);
    }
  }
  // n = 2 origin: single independent component, frozen from the FD oracle. With
  // g = 4 I it is sectional curvature 1 times g_11, sign per the Ricci identity.
  const TensorFrame f = tensor_frame(origin(2));
  const Tensor4 R = riemann_closed_form(f);
  CHECK(R(0, 1, 0, 1) == doctest::Approx(f.riemann(0, 1, 0, 1)).epsilon(1e-6));
  CHECK(R(0, 1, 0, 1) == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("Ricci identity for flow fields") {
  Rng rng(27);
  for (int n = 2; n <= 3; ++n) {
    const FlowSpec spec = make_flow_spec(random_operator(n, rng));
    const VectorField xi = xi_vector_field(spec);
    for (const auto& x : random_chart_points(n, 3, rng)) {
      const Tensor3 second = covariant_vector_second(xi, x);
      const auto k = kahler_structures(x);
      const Tensor4 R = riemann_closed_form(k);
      const RVector xi_low = k.g * xi(x);
      const auto d = static_cast<std::size_t>(x.real_dim());
      double worst = 0.0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          for (std::size_t c = 0; c < d; ++c) {
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t e = 0; e < d; ++e) {
              lhs += (second(b, a, e) - second(a, b, e)) * k.g(e, c);
              rhs += R(a, b, c, e) * xi_low[static_cast<Eigen::Index>(e)];
            }
            worst = std::max(worst, std::abs(lhs - rhs));
          }
      CHECK(worst < 1e-5);
    }
  }
}

TEST_CASE("finite differences of scalar fields") {
  const ScalarField constant{[](const ChartPoint&) { return 2.5; }, std::nullopt, "c"};
  const RVector slope = (RVector(4) << 0.5, -1.0, 2.0, 0.25).finished();
  const ScalarField linear{[slope](const ChartPoint& x) { return slope.dot(x.coords); },
                           std::nullopt, "lin"};
  Rng rng(28);
  const ChartPoint x = random_chart_point(3, rng);
  for (int order = 1; order <= 3; ++order) {
    CHECK(fd_derivatives(constant, x, order).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK((fd_derivatives(linear, x, 1) - slope).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(fd_derivatives(linear, x, 2).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(fd_derivatives(linear, x, 3).cwiseAbs().maxCoeff() < 1e-6);
  CHECK_THROWS_AS(fd_derivatives(linear, x, 4), DomainError);

  const ScalarField bad{[](const ChartPoint& p) { return p.coords[0] > 0 ? NAN : 0.0; },
                        std::nullopt, "nan"};
  CHECK_THROWS_AS(fd_derivatives(bad, origin(2), 1), EvaluationError);

  const ScalarField Hz = expectation_field(pauli_z());
  CHECK(fd_derivatives(Hz, origin(2), 1).norm() < 1e-12);
  CHECK_THROWS_AS(expectation_field(pauli_x() + I * pauli_z()), DomainError);

  // <sigma_z> = (1 - |z|^2) / (1 + |z|^2): compare all partials to the closed form.
  const ChartPoint p{0, (RVector(2) << 0.3, -0.2).finished()};
  const double r2 = p.coords.squaredNorm();
  const RVector grad = -4.0 * p.coords / ((1 + r2) * (1 + r2));
  CHECK((fd_derivatives(Hz, p, 1) - grad).norm() < 1e-10);
}

TEST_CASE("covariant derivatives of observables") {
  const ScalarField Hz = expectation_field(pauli_z());
  const RMatrix hess = covariant_hessian(Hz, origin(2));
  Eigen::SelfAdjointEigenSolver<RMatrix> es(hess);
  CHECK(es.eigenvalues().maxCoeff() < 0.0);
  CHECK(laplace_beltrami(Hz, origin(2)) == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(std::abs(laplace_beltrami(expectation_field(identity_op(3)), origin(3))) < 1e-9);

  const ScalarField constant{[](const ChartPoint&) { return 1.0; }, std::nullopt, "c"};
  Rng rng(29);
  const ChartPoint x = random_chart_point(3, rng);
  CHECK(covariant_grad(constant, x).norm() < 1e-12);
  CHECK(covariant_hessian(constant, x).norm() < 1e-12);
  CHECK(covariant_third(constant, x).max_abs() < 1e-9);

  for (int n = 2; n <= 3; ++n) {
    const auto H = random_hermitian(n, rng);
    const auto f = expectation_field(H);
    const double mean = H.entries().trace().real() / n;
    for (const auto& y : random_chart_points(n, 5, rng)) {
      const RMatrix h = covariant_hessian(f, y);
      CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-7);
      CHECK(laplace_beltrami(f, y) == doctest::Approx(n * (mean - f(y))).epsilon(1e-5));
    }
  }
}

TEST_CASE("metric matches the distance at small separation") {
  Rng rng(30);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const ChartPoint x = random_chart_point(n, rng);
      RVector delta = RVector::Zero(x.real_dim());
      for (Eigen::Index a = 0; a < delta.size(); ++a) delta[a] = std::normal_distribution<>()(rng);
      const RVector unit = random_unit_tangent(x, rng);
      delta = 1e-3 * unit;
      ChartPoint lo = x, hi = x, mid = x;
      hi.coords += delta;
      mid.coords += 0.5 * delta;
      const double s = fs_distance(chart_lift(lo), chart_lift(hi));
      const double q = delta.dot(kahler_structures(mid).g * delta);
      CHECK(std::abs(s * s - q) / q < 1e-4);
    }
  }
}

TEST_CASE("scalar results are chart independent") {
  Rng rng(31);
  const auto H = random_hermitian(3, rng);
  const auto f = expectation_field(H);
  const StateVector psi = random_state(3, rng);
  const double ref = laplace_beltrami(f, chart_embed(psi));
  for (int k = 0; k < 3; ++k) {
    const ChartPoint y = chart_embed(psi, k);
    if (y.max_affine_modulus() > kChartSwitchThreshold) continue;
    CHECK(laplace_beltrami(f, y) == doctest::Approx(ref).epsilon(2e-5));
  }
}
