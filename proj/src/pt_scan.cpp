#include "holoproj/pt_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "holoproj/errors.hpp"
#include "holoproj/flow.hpp"

namespace holoproj {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::unitary_like:
      return "unitary_like";
    case Regime::broken:
      return "broken";
    case Regime::exceptional:
      return "exceptional";
  }
  return "broken";
}

Regime parse_regime(const std::string& s) {
  if (s == "unitary_like") return Regime::unitary_like;
  if (s == "broken") return Regime::broken;
  if (s == "exceptional") return Regime::exceptional;
  throw InputError("unknown regime '" + s + "'");
}

bool spectrum_all_real(const std::vector<cplx>& eigenvalues, double scale) {
  double radius = 0.0;
  double worst_imag = 0.0;
  for (const cplx& l : eigenvalues) {
    radius = std::max(radius, std::abs(l));
    worst_imag = std::max(worst_imag, std::abs(l.imag()));
  }
  return worst_imag <= kRealityTolerance * std::max(radius, scale);
}

double reality_scale(const OperatorMatrix& K) {
  // Spectral norm: near a higher-order EP the spectral radius collapses while
  // eigensolver rounding does not.
  return Eigen::JacobiSVD<CMatrix>(K.entries()).singularValues()[0];
}

bool spectrum_all_real(const OperatorMatrix& K) {
  Eigen::ComplexEigenSolver<CMatrix> solver(K.entries(), /*computeEigenvectors=*/false);
  const CVector& ev = solver.eigenvalues();
  return spectrum_all_real(std::vector<cplx>(ev.data(), ev.data() + ev.size()), reality_scale(K));
}

namespace {

double min_pair_distance(const std::vector<StateVector>& pts, std::size_t n) {
  if (pts.size() < n) return 0.0;  // merged eigenvectors: coalescence
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, fs_distance(pts[i], pts[j]));
  return best;
}

bool newton_matches(const OperatorMatrix& K, const std::vector<StateVector>& eigen_points) {
  const FlowSpec spec = make_flow_spec(K);
  std::vector<ChartPoint> seeds;
  for (const StateVector& p : eigen_points) seeds.push_back(chart_embed(p));
  const FixedPointResult found = fixed_points(spec, seeds);
  for (const StateVector& p : eigen_points) {
    const bool hit = std::any_of(found.points.begin(), found.points.end(), [&](const FixedPoint& f) {
      return fs_distance(chart_lift(f.x), p) < 1e-6;
    });
    if (!hit) return false;
  }
  return true;
}

// Reorder `cur` (and its eigenvalues) to follow `prev` by nearest projective neighbour.
void track(const ScanRecord& prev, ScanRecord& cur) {
  if (prev.fixed_points.size() != cur.fixed_points.size() ||
      cur.eigenvalues.size() != cur.fixed_points.size()) {
    return;
  }
  const std::size_t k = cur.fixed_points.size();
  std::vector<bool> used(k, false);
  std::vector<StateVector> pts;
  std::vector<cplx> vals;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t best = k;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      const double d = fs_distance(prev.fixed_points[i], cur.fixed_points[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    pts.push_back(cur.fixed_points[best]);
    vals.push_back(cur.eigenvalues[best]);
  }
  cur.fixed_points = std::move(pts);
  cur.eigenvalues = std::move(vals);
}

}  // namespace

ScanResult scan(const HamiltonianFamily& family, const ScanOptions& opts) {
  if (family.theta_grid.empty()) throw DomainError("scan: empty theta grid");
  ScanResult result;
  result.family_name = family.name;
  const ScanRecord* previous = nullptr;
  for (double theta : family.theta_grid) {
    ScanRecord rec;
    rec.theta = theta;
    try {
      const OperatorMatrix K = family.builder(theta);
      if (result.n == 0) result.n = static_cast<int>(K.dim());
      if (K.dim() != result.n) throw DimensionError("builder changed dimension");
      const EigenFixedPoints eig = eigen_fixed_points(K);
      rec.eigenvalues = eig.eigenvalues;
      rec.all_real = spectrum_all_real(rec.eigenvalues, reality_scale(K));
      rec.fixed_points = eig.points;
      rec.min_pair_distance = min_pair_distance(eig.points, static_cast<std::size_t>(K.dim()));
      if (rec.min_pair_distance < opts.coalescence_threshold) {
        rec.regime = Regime::exceptional;
      } else {
        rec.regime = rec.all_real ? Regime::unitary_like : Regime::broken;
      }
      if (opts.newton_cross_check) rec.newton_consistent = newton_matches(K, eig.points);
      if (previous != nullptr && previous->error.empty()) track(*previous, rec);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    result.records.push_back(std::move(rec));
    previous = &result.records.back();
  }
  return result;
}

double refine_exceptional(const std::function<OperatorMatrix(double)>& builder, double lo,
                          double hi, double width) {
  if (!(hi > lo)) throw BracketError("refine_exceptional: empty bracket");
  const bool real_lo = spectrum_all_real(builder(lo));
  const bool real_hi = spectrum_all_real(builder(hi));
  if (real_lo == real_hi) {
    throw BracketError("refine_exceptional: spectral reality does not change across bracket");
  }
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (spectrum_all_real(builder(mid)) == real_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {start};
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

HamiltonianFamily canonical_pt_family(std::vector<double> grid) {
  return {[](double gamma) { return pauli_x() + cplx(0.0, gamma) * pauli_z(); }, std::move(grid),
          "canonical"};
}

HamiltonianFamily three_level_pt_family(std::vector<double> grid) {
  return {[](double gamma) {
            CMatrix k = CMatrix::Zero(3, 3);
            k(0, 1) = k(1, 0) = k(1, 2) = k(2, 1) = 1.0;
            k(0, 0) = cplx(0.0, gamma);
            k(2, 2) = cplx(0.0, -gamma);
            return OperatorMatrix(k);
          },
          std::move(grid), "three_level"};
}

HamiltonianFamily polynomial_family(std::vector<OperatorMatrix> coefficients,
                                    std::vector<double> grid, std::string name) {
  if (coefficients.empty()) throw InputError("polynomial_family: no coefficients");
  const Eigen::Index n = coefficients.front().dim();
  for (const auto& c : coefficients) {
    if (c.dim() != n) throw DimensionError("polynomial_family: coefficient dimensions differ");
  }
  return {[coefficients](double theta) {
            CMatrix k = CMatrix::Zero(coefficients.front().dim(), coefficients.front().dim());
            double power = 1.0;
            for (const auto& c : coefficients) {
              k += power * c.entries();
              power *= theta;
            }
            return OperatorMatrix(k);
          },
          std::move(grid), std::move(name)};
}

}  // namespace holoproj
