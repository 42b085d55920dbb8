#include <doctest.h>

#include "holoproj/errors.hpp"
#include "holoproj/flow.hpp"
#include "holoproj/pt_scan.hpp"
#include "oracles.hpp"

using namespace holoproj;
using oracle::I;
using oracle::kPi;

namespace {

int count_transitions(const ScanResult& s) {
  // Flips between unitary-like and non-unitary-like; an exceptional record is
  // part of the boundary, not a regime of its own.
  int flips = 0;
  int last = -1;
  for (const auto& r : s.records) {
    if (r.regime == Regime::exceptional) continue;
    const int cur = r.regime == Regime::unitary_like ? 1 : 0;
    if (last >= 0 && cur != last) ++flips;
    last = cur;
  }
  return flips;
}

}  // namespace

TEST_CASE("canonical PT scan") {
  const ScanResult s = scan(canonical_pt_family(linspace(0.0, 2.0, 101)));
  REQUIRE(s.records.size() == 101);
  CHECK(s.n == 2);
  for (const auto& r : s.records) {
    CHECK(r.error.empty());
    CHECK(r.eigenvalues.size() == 2);
    const double g = r.theta;
    if (g < 1.0 - 1e-9) {
      CHECK(r.all_real);
      CHECK(r.regime == Regime::unitary_like);
      CHECK(r.fixed_points.size() == 2);
      CHECK(r.newton_consistent);
      for (cplx l : r.eigenvalues) CHECK(std::abs(std::abs(l) - std::sqrt(1 - g * g)) < 1e-12);
    } else if (g > 1.0 + 1e-9) {
      CHECK_FALSE(r.all_real);
      CHECK(r.regime == Regime::broken);
      CHECK(r.fixed_points.size() == 2);
      for (cplx l : r.eigenvalues) CHECK(std::abs(std::abs(l) - std::sqrt(g * g - 1)) < 1e-12);
    } else {
      CHECK(r.regime == Regime::exceptional);
      CHECK(r.min_pair_distance < kCoalescenceThreshold);
    }
    if (r.regime == Regime::exceptional) CHECK(r.min_pair_distance < kCoalescenceThreshold);
  }
  CHECK(count_transitions(s) == 1);

  // Coalescence from below: the two fixed points approach each other monotonically.
  double prev = 1e9;
  for (const auto& r : s.records) {
    if (r.theta >= 1.0) break;
    CHECK(r.min_pair_distance < prev);
    prev = r.min_pair_distance;
  }
  CHECK(prev < 0.5);
}

TEST_CASE("exceptional point refinement") {
  const auto fam = canonical_pt_family({});
  CHECK(std::abs(refine_exceptional(fam.builder, 0.5, 1.5) - 1.0) < 1e-6);

  const auto scaled = [&](double g) { return 3.0 * fam.builder(g); };
  CHECK(std::abs(refine_exceptional(scaled, 0.5, 1.5) - 1.0) < 1e-6);

  const auto three = three_level_pt_family({});
  CHECK(std::abs(refine_exceptional(three.builder, 1.0, 2.0) - std::sqrt(2.0)) < 1e-6);

  const auto hermitian = [](double g) { return pauli_z() + g * pauli_x(); };
  CHECK_THROWS_AS(refine_exceptional(hermitian, 0.0, 1.0), BracketError);
  CHECK_THROWS_AS(refine_exceptional(fam.builder, 1.5, 0.5), BracketError);
}

TEST_CASE("constant Hermitian family") {
  const HamiltonianFamily fam{[](double) { return pauli_z(); }, linspace(0, 1, 11), "const"};
  const ScanResult s = scan(fam);
  for (const auto& r : s.records) {
    CHECK(r.regime == Regime::unitary_like);
    REQUIRE(r.fixed_points.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(projectively_equal(r.fixed_points[k], s.records.front().fixed_points[k]));
    }
  }
}

TEST_CASE("regime is scale invariant") {
  const auto fam = three_level_pt_family(linspace(0.0, 2.5, 26));
  const HamiltonianFamily big{[&](double g) { return 2.5 * fam.builder(g); }, fam.theta_grid, "x2.5"};
  const ScanResult a = scan(fam), b = scan(big);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].regime == b.records[i].regime);
    CHECK(a.records[i].eigenvalues.size() == 3);
  }
  CHECK(count_transitions(a) == 1);
}

TEST_CASE("polynomial family and failures") {
  const auto fam = polynomial_family({pauli_x(), I * pauli_z()}, linspace(0.0, 2.0, 11));
  const ScanResult s = scan(fam);
  CHECK(s.records[2].regime == Regime::unitary_like);
  CHECK(s.records[8].regime == Regime::broken);

  const HamiltonianFamily flaky{[](double g) {
                                  if (g > 0.55) throw DomainError("builder refused");
                                  return pauli_x() + cplx(0, g) * pauli_z();
                                },
                                linspace(0.0, 1.0, 11), "flaky"};
  const ScanResult f = scan(flaky);
  REQUIRE(f.records.size() == 11);
  CHECK(f.records[5].error.empty());
  CHECK_FALSE(f.records[6].error.empty());
  CHECK_FALSE(f.records[10].error.empty());
}

TEST_CASE("dynamics on either side of the transition") {
  // Real spectrum: recurrent motion with period 2 pi / (lambda_1 - lambda_2).
  const OperatorMatrix Ku = pauli_x() + cplx(0, 0.5) * pauli_z();
  const FlowSpec su = make_flow_spec(Ku);
  const ChartPoint x0{0, (RVector(2) << 0.3, 0.2).finished()};
  const double period = 2 * kPi / (2 * std::sqrt(0.75));
  const auto tu = integrate_flow(su, x0, 10 * period, period / 500);
  double closest = kPi;
  for (const auto& s : tu) {
    if (s.t > 0.5 * period) closest = std::min(closest, fs_distance(chart_lift(s.x), chart_lift(x0)));
  }
  CHECK(closest < 0.01);

  // Complex pair: gradient-like convergence onto a fixed point.
  const FlowSpec sb = make_flow_spec(pauli_x() + cplx(0, 1.5) * pauli_z());
  const auto tb = integrate_flow(sb, x0, 20.0, 0.01);
  CHECK(metric_norm(tb.back().x, xi_field(sb, tb.back().x)) < 1e-6);
}

TEST_CASE("regime names") {
  for (Regime r : {Regime::unitary_like, Regime::broken, Regime::exceptional}) {
    CHECK(parse_regime(regime_name(r)) == r);
  }
  CHECK_THROWS(parse_regime("chaotic"));
}
