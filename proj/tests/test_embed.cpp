#include <doctest.h>

#include "holoproj/embed.hpp"
#include "holoproj/errors.hpp"
#include "holoproj/sampling.hpp"
#include "oracles.hpp"

using namespace holoproj;
using oracle::I;
using oracle::kPi;

TEST_CASE("embedding of basic rays") {
  const double r2 = std::sqrt(2.0);
  auto e = mannoury_embed(StateVector{1, 0});
  CHECK(e.x_diag[0] == doctest::Approx(r2));
  CHECK(e.x_diag[1] == 0.0);
  CHECK(e.x_sym[0] == 0.0);
  CHECK(e.y_antisym[0] == 0.0);

  e = mannoury_embed(StateVector{1, 1});
  CHECK(e.x_diag[0] == doctest::Approx(r2 / 2));
  CHECK(e.x_diag[1] == doctest::Approx(r2 / 2));
  CHECK(e.x_sym[0] == doctest::Approx(1.0));
  CHECK(std::abs(e.y_antisym[0]) < 1e-16);

  e = mannoury_embed(StateVector{1, I});
  CHECK(e.x_diag[0] == doctest::Approx(r2 / 2));
  CHECK(std::abs(e.x_sym[0]) < 1e-16);
  CHECK(e.y_antisym[0] == doctest::Approx(1.0));

  e = mannoury_embed(StateVector{1, 2, 3});
  CHECK(e.flat().size() == 9);
}

TEST_CASE("embedding constraints") {
  Rng rng(61);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector psi = random_state(n, rng);
      const auto e = mannoury_embed(psi);
      CHECK(std::abs(e.x_diag.sum() - std::sqrt(2.0)) < 1e-12);
      CHECK(std::abs(e.squared_norm() - 2.0) < 1e-12);
      const double phase = std::uniform_real_distribution<>(0, 2 * kPi)(rng);
      const auto f = mannoury_embed(StateVector(std::polar(3.0, phase) * psi.components()));
      CHECK((e.flat() - f.flat()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("embedding separates rays") {
  Rng rng(62);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = random_state(n, rng);
      // A nearby but distinct ray.
      CVector w = a.components();
      w += 1e-3 * random_state(n, rng).components();
      const StateVector b(w);
      if (fs_distance(a, b) <= 1e-3) continue;
      CHECK((mannoury_embed(a).flat() - mannoury_embed(b).flat()).norm() > 1e-4);
    }
  }
}

TEST_CASE("great circle maps to a unit circle") {
  const double r2 = std::sqrt(2.0);
  RVector c(4);
  c << r2 / 2, r2 / 2, 0.0, 0.0;
  for (int k = 0; k <= 16; ++k) {
    const double th = kPi * k / 16;  // FS arc length th from (1, 0)
    const StateVector psi{std::cos(th / 2), std::sin(th / 2)};
    CHECK(fs_distance(psi, StateVector{1, 0}) == doctest::Approx(th).epsilon(1e-12));
    CHECK((mannoury_embed(psi).flat() - c).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("induced metric") {
  Rng rng(63);
  const ChartPoint x = random_chart_point(3, rng);
  CHECK(embedded_speed_squared(x, RVector::Zero(4)) < 1e-20);
  CHECK_THROWS_AS(embedded_speed_squared(x, RVector::Zero(2)), DimensionError);

  for (int n = 2; n <= 4; ++n) {
    std::vector<ChartPoint> pts;
    std::vector<RVector> dirs;
    double ratio_lo = 1e9, ratio_hi = 0.0;
    for (int i = 0; i < 20; ++i) {
      pts.push_back(random_chart_point(n, rng));
      dirs.push_back(random_unit_tangent(pts.back(), rng));
      const double ratio = embedded_speed_squared(pts.back(), dirs.back());
      ratio_lo = std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
    }
    // Unit tangents: the ratio is the frozen scale, independent of n.
    CHECK(std::abs(ratio_lo - kEmbeddingMetricScale) < 1e-6);
    CHECK(std::abs(ratio_hi - kEmbeddingMetricScale) < 1e-6);
    dirs.back().setZero();
    const auto r = induced_metric_check(pts, dirs);
    CHECK(r.passed);
    CHECK(r.max_residual < 1e-4);
  }
  const auto wrong = induced_metric_check({x}, {random_unit_tangent(x, rng)}, 1e-4, 4.0);
  CHECK_FALSE(wrong.passed);
}
