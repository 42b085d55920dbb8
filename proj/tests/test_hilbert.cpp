#include <doctest.h>

#include "holoproj/errors.hpp"
#include "holoproj/hilbert.hpp"
#include "holoproj/sampling.hpp"
#include "oracles.hpp"

using namespace holoproj;
using oracle::I;
using oracle::kPi;

namespace {

bool close(const OperatorMatrix& a, const OperatorMatrix& b, double tol = 1e-14) {
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff() < tol;
}

}  // namespace

TEST_CASE("hermitian split") {
  auto s = hermitian_split(pauli_x());
  CHECK(close(s.H, pauli_x()));
  CHECK(close(s.Gamma, zero_op(2)));

  s = hermitian_split(cplx(0, -1) * identity_op(2));
  CHECK(close(s.H, zero_op(2)));
  CHECK(close(s.Gamma, identity_op(2)));

  s = hermitian_split(pauli_x() - 0.5 * I * pauli_z());
  CHECK(close(s.H, pauli_x()));
  CHECK(close(s.Gamma, 0.5 * pauli_z()));

  Rng rng(11);
  const OperatorMatrix K = random_operator(3, rng);
  s = hermitian_split(K);
  CHECK(s.H.is_hermitian());
  CHECK(s.Gamma.is_hermitian());
  CHECK(close(s.recombine(), K));

  CHECK_THROWS_AS(OperatorMatrix(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("expectation") {
  CHECK(std::abs(expectation(oracle::diag({1, -1}), StateVector{1, 0}) - 1.0) < 1e-15);
  CHECK(std::abs(expectation(pauli_x(), StateVector{1, 1}) - 1.0) < 1e-15);
  CHECK(std::abs(expectation(pauli_x() - 0.5 * I * pauli_z(), StateVector{1, 0}) - cplx(0, -0.5)) <
        1e-15);
  CHECK_THROWS_AS(StateVector({0, 0}), DomainError);

  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto H = random_hermitian(2 + trial % 3, rng);
    CHECK(std::abs(expectation(H, random_state(H.dim(), rng)).imag()) < 1e-12);
  }
}

TEST_CASE("fs distance") {
  CHECK(fs_distance(StateVector{1, 0}, StateVector{0, 1}) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(fs_distance(StateVector{1, 0}, StateVector{3, 0}) == doctest::Approx(0.0));
  CHECK(fs_distance(StateVector{1, 0}, StateVector{1, 1}) == doctest::Approx(kPi / 2).epsilon(1e-14));

  Rng rng(13);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto a = random_state(n, rng), b = random_state(n, rng), c = random_state(n, rng);
      CHECK(fs_distance(a, b) == fs_distance(b, a));
      CHECK(fs_distance(a, c) <= fs_distance(a, b) + fs_distance(b, c) + 1e-10);
      CHECK(fs_distance(a, b) >= 0.0);
      CHECK(fs_distance(a, b) <= kPi);
    }
  }
  // Phase and scale invariance.
  const StateVector psi{cplx(0.3, 0.1), cplx(-0.2, 0.7)};
  const StateVector phi(cplx(0, 2.5) * psi.components());
  CHECK(projectively_equal(psi, phi));
  CHECK(fs_distance(psi, phi) < 1e-7);
}

TEST_CASE("modified rhs") {
  CHECK(modified_rhs(pauli_z(), StateVector{1, 0}).norm() < 1e-15);
  const CVector v = modified_rhs(pauli_x(), StateVector{1, 0});
  CHECK(std::abs(v[0]) < 1e-15);
  CHECK(std::abs(v[1] - cplx(0, -1)) < 1e-15);
  // K = -i sigma_z at (1,1)/sqrt2: <K> = 0, -i K psi = -sigma_z psi = (-1, 1)/sqrt2.
  const double r = 1.0 / std::sqrt(2.0);
  const CVector w = modified_rhs(cplx(0, -1) * pauli_z(), StateVector{r, r});
  CHECK(std::abs(w[0] - cplx(-r, 0)) < 1e-15);
  CHECK(std::abs(w[1] - cplx(r, 0)) < 1e-15);
}

TEST_CASE("evolve hilbert against the propagator") {
  const StateVector plus{1, 1};
  auto traj = evolve_hilbert(zero_op(2), plus, 3.0, 0.1);
  for (const auto& s : traj) CHECK(projectively_equal(s.psi, plus, 1e-15));

  traj = evolve_hilbert(pauli_z(), plus, kPi / 2, 1e-3);
  CHECK(traj.back().t == doctest::Approx(kPi / 2));
  CHECK(fs_distance(traj.back().psi, StateVector{1, -1}) < 1e-8);
  CHECK(fs_distance(traj.back().psi, oracle::propagate(pauli_z(), plus, kPi / 2)) < 1e-8);

  const OperatorMatrix K = pauli_x() + 0.5 * I * pauli_z();
  traj = evolve_hilbert(K, StateVector{1, 0}, 1.0, 1e-3);
  CHECK(fs_distance(traj.back().psi, oracle::propagate(K, StateVector{1, 0}, 1.0)) < 1e-6);

  HilbertEvolveOptions adaptive;
  adaptive.local_error_tol = 1e-12;
  traj = evolve_hilbert(K, StateVector{1, 0}, 1.0, 0.2, adaptive);
  CHECK(fs_distance(traj.back().psi, oracle::propagate(K, StateVector{1, 0}, 1.0)) < 1e-8);

  CHECK_THROWS_AS(evolve_hilbert(K, StateVector{1, 0, 0}, 1.0, 0.1), DimensionError);
}

TEST_CASE("evolve hilbert invariants") {
  Rng rng(14);
  HilbertEvolveOptions raw;
  raw.renormalize = false;
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 3;
    const auto K = random_operator(n, rng);
    const auto psi = random_state(n, rng);
    const auto traj = evolve_hilbert(K, psi, 1.0, 1e-3, raw);
    CHECK(std::abs(traj.back().psi.norm() - 1.0) < 1e-9);
  }
  // Hermitian flows are isometries of the ray space.
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + trial % 2;
    const auto H = random_hermitian(n, rng);
    const auto a = random_state(n, rng), b = random_state(n, rng);
    const auto ta = evolve_hilbert(H, a, 10.0, 5e-3), tb = evolve_hilbert(H, b, 10.0, 5e-3);
    const double d0 = fs_distance(a, b);
    double drift = 0.0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
      drift = std::max(drift, std::abs(fs_distance(ta[i].psi, tb[i].psi) - d0));
    }
    CHECK(drift < 1e-7);
  }
}

TEST_CASE("eigen fixed points") {
  auto fp = eigen_fixed_points(pauli_z());
  REQUIRE(fp.points.size() == 2);
  CHECK_FALSE(fp.defective);
  const bool order = projectively_equal(fp.points[0], StateVector{1, 0});
  CHECK(projectively_equal(fp.points[order ? 0 : 1], StateVector{1, 0}));
  CHECK(projectively_equal(fp.points[order ? 1 : 0], StateVector{0, 1}));

  fp = eigen_fixed_points(pauli_x() + 0.5 * I * pauli_z());
  REQUIRE(fp.points.size() == 2);
  const double d = fs_distance(fp.points[0], fp.points[1]);
  // |<v1|v2>|^2 = 1/4 for unit eigenvectors, so the distance is 2 acos(1/2): not orthogonal.
  CHECK(d == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
  CHECK(d < kPi);
  // Eigenvalues +-sqrt(1 - 0.25).
  CHECK(std::abs(std::abs(fp.eigenvalues[0]) - std::sqrt(0.75)) < 1e-12);

  fp = eigen_fixed_points(pauli_x() + I * pauli_z());
  CHECK(fp.defective);
  CHECK(fp.points.size() == 1);
  CHECK(fp.eigenvalues.size() == 2);

  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto K = random_operator(2 + trial % 3, rng);
    for (const auto& p : eigen_fixed_points(K).points) CHECK(modified_rhs(K, p).norm() < 1e-10);
  }
}

TEST_CASE("planarity defect") {
  const std::vector<StateVector> same(4, StateVector{1, 0, 0});
  CHECK(planarity_defect(same) < 1e-15);

  std::vector<StateVector> plane{StateVector{1, 0, 0}, StateVector{0, 1, 0}};
  for (double th : {0.3, 1.1, 2.0}) plane.push_back(StateVector{std::cos(th), std::sin(th), 0});
  CHECK(planarity_defect(plane) < 1e-15);

  const std::vector<StateVector> frame{StateVector{1, 0, 0}, StateVector{0, 1, 0},
                                       StateVector{0, 0, 1}};
  CHECK(planarity_defect(frame) == doctest::Approx(1.0));

  CHECK_THROWS_AS(planarity_defect({StateVector{1, 0, 0}, StateVector{0, 1, 0}}), DomainError);

  // A curve in a 2-dimensional span stays planar under any K.
  Rng rng(16);
  const auto K = random_operator(3, rng);
  const auto a = random_state(3, rng).components(), b = random_state(3, rng).components();
  std::vector<StateVector> evolved;
  for (int k = 0; k < 8; ++k) {
    const double th = 0.4 * k;
    evolved.push_back(oracle::propagate(K, StateVector(std::cos(th) * a + std::sin(th) * b), 2.0));
  }
  CHECK(planarity_defect(evolved) < 1e-8);
}
