#include "holoproj/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holoproj/errors.hpp"

namespace holoproj {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_nonzero(const CVector& v, const char* what) {
  if (v.size() == 0 || !(v.squaredNorm() > 0.0)) {
    throw DomainError(std::string(what) + ": zero state vector");
  }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

StateVector::StateVector(CVector components) : v_(std::move(components)) {
  if (v_.size() < 2) throw DimensionError("StateVector: need n >= 2");
  if (!v_.allFinite()) throw DomainError("StateVector: non-finite component");
  require_nonzero(v_, "StateVector");
}

StateVector::StateVector(std::initializer_list<cplx> components)
    : StateVector(CVector(Eigen::Map<const CVector>(components.begin(),
                                                    static_cast<Eigen::Index>(components.size())))) {}

StateVector StateVector::normalized() const { return StateVector(v_ / v_.norm()); }

OperatorMatrix::OperatorMatrix(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionError("OperatorMatrix: non-square (" + std::to_string(m_.rows()) + "x" +
                         std::to_string(m_.cols()) + ")");
  }
}

bool OperatorMatrix::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "operator+");
  return OperatorMatrix(a.m_ + b.m_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "operator-");
  return OperatorMatrix(a.m_ - b.m_);
}

OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return OperatorMatrix(s * a.m_); }

double HamiltonianSplit::mean_H() const { return H.entries().trace().real() / H.dim(); }
double HamiltonianSplit::mean_Gamma() const {
  return Gamma.entries().trace().real() / Gamma.dim();
}
OperatorMatrix HamiltonianSplit::recombine() const { return H - kI * Gamma; }

OperatorMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return OperatorMatrix(m);
}

OperatorMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return OperatorMatrix(m);
}

OperatorMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return OperatorMatrix(m);
}

OperatorMatrix identity_op(Eigen::Index n) { return OperatorMatrix(CMatrix::Identity(n, n)); }
OperatorMatrix zero_op(Eigen::Index n) { return OperatorMatrix(CMatrix::Zero(n, n)); }

HamiltonianSplit hermitian_split(const OperatorMatrix& K) {
  const CMatrix& k = K.entries();
  CMatrix h = 0.5 * (k + k.adjoint());
  CMatrix g = 0.5 * kI * (k - k.adjoint());
  return {OperatorMatrix(std::move(h)), OperatorMatrix(std::move(g))};
}

cplx expectation(const OperatorMatrix& A, const StateVector& psi) {
  require_same_dim(A.dim(), psi.dim(), "expectation");
  const CVector& v = psi.components();
  return v.dot(A.entries() * v) / v.squaredNorm();
}

double projective_defect(const StateVector& psi, const StateVector& phi) {
  require_same_dim(psi.dim(), phi.dim(), "projective_defect");
  const CVector& a = psi.components();
  const CVector& b = phi.components();
  const double p = std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
  return std::max(0.0, 1.0 - p);
}

double fs_distance(const StateVector& psi, const StateVector& phi) {
  require_same_dim(psi.dim(), phi.dim(), "fs_distance");
  const CVector a = psi.components().normalized();
  const CVector b = phi.components().normalized();
  // Small angles: arccos loses half the digits, so use the chordal form
  // sin(s/2) = |b - <a|b>a| instead.
  // Averaging both orders keeps the result exactly symmetric.
  const cplx overlap = a.dot(b);
  const double c = std::min(1.0, std::abs(overlap));
  if (c > 0.9) {
    const double s_ab = std::min(1.0, (b - overlap * a).norm());
    const double s_ba = std::min(1.0, (a - std::conj(overlap) * b).norm());
    return std::asin(s_ab) + std::asin(s_ba);
  }
  return 2.0 * std::acos(c);
}

bool projectively_equal(const StateVector& psi, const StateVector& phi, double tol) {
  return projective_defect(psi, phi) < tol;
}

CVector modified_rhs(const OperatorMatrix& K, const CVector& psi) {
  require_same_dim(K.dim(), psi.size(), "modified_rhs");
  require_nonzero(psi, "modified_rhs");
  const CVector kpsi = K.entries() * psi;
  const cplx mean = psi.dot(kpsi) / psi.squaredNorm();
  return -kI * (kpsi - mean * psi);
}

CVector modified_rhs(const OperatorMatrix& K, const StateVector& psi) {
  return modified_rhs(K, psi.components());
}

namespace {

CVector rk4_step(const OperatorMatrix& K, const CVector& psi, double dt) {
  const CVector k1 = modified_rhs(K, psi);
  const CVector k2 = modified_rhs(K, psi + 0.5 * dt * k1);
  const CVector k3 = modified_rhs(K, psi + 0.5 * dt * k2);
  const CVector k4 = modified_rhs(K, psi + dt * k3);
  return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<HilbertSample> evolve_hilbert(const OperatorMatrix& K, const StateVector& psi0,
                                          double t_final, double dt,
                                          const HilbertEvolveOptions& opts) {
  require_same_dim(K.dim(), psi0.dim(), "evolve_hilbert");
  if (!(dt > 0.0)) throw DomainError("evolve_hilbert: dt must be positive");
  if (!(t_final >= 0.0)) throw DomainError("evolve_hilbert: t_final must be non-negative");

  std::vector<HilbertSample> out;
  out.push_back({0.0, psi0});
  CVector psi = psi0.components();
  double t = 0.0;
  const double min_dt = dt * std::ldexp(1.0, -30);
  while (t < t_final * (1.0 - 1e-14)) {
    double h = std::min(dt, t_final - t);
    CVector next;
    for (;;) {
      next = rk4_step(K, psi, h);
      if (opts.local_error_tol <= 0.0) break;
      // Step doubling: compare one step of h with two of h/2.
      const CVector half = rk4_step(K, rk4_step(K, psi, 0.5 * h), 0.5 * h);
      const double err = (half - next).norm() / 15.0;
      if (err <= opts.local_error_tol * std::max(1.0, psi.norm())) {
        next = half;
        break;
      }
      h *= 0.5;
      if (h < min_dt) throw IntegrationError("evolve_hilbert: step underflow", t);
    }
    if (!next.allFinite() || !(next.squaredNorm() > 0.0)) {
      throw IntegrationError("evolve_hilbert: non-finite state", t);
    }
    if (opts.renormalize) next /= next.norm();
    psi = std::move(next);
    t += h;
    out.push_back({t, StateVector(psi)});
  }
  return out;
}

EigenFixedPoints eigen_fixed_points(const OperatorMatrix& K) {
  constexpr double kEigenvalueCoalescence = 1e-8;
  constexpr double kEigenvectorCoalescence = 1e-4;

  Eigen::ComplexEigenSolver<CMatrix> solver(K.entries(), /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigen_fixed_points: eigensolver did not converge");
  }
  const Eigen::Index n = K.dim();
  EigenFixedPoints result;
  std::vector<StateVector> candidates;
  for (Eigen::Index i = 0; i < n; ++i) {
    result.eigenvalues.push_back(solver.eigenvalues()[i]);
    candidates.emplace_back(solver.eigenvectors().col(i).normalized());
  }

  std::vector<bool> merged(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (merged[i]) continue;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (merged[j]) continue;
      const bool close_values =
          std::abs(result.eigenvalues[i] - result.eigenvalues[j]) < kEigenvalueCoalescence;
      const bool close_vectors =
          fs_distance(candidates[i], candidates[j]) < kEigenvectorCoalescence;
      if (close_values && close_vectors) {
        merged[j] = true;
        result.defective = true;
      }
    }
    result.points.push_back(candidates[i]);
  }
  return result;
}

double planarity_defect(const std::vector<StateVector>& curve) {
  if (curve.size() < 3) throw DomainError("planarity_defect: need at least 3 samples");
  const Eigen::Index n = curve.front().dim();
  CMatrix stacked(static_cast<Eigen::Index>(curve.size()), n);
  for (std::size_t r = 0; r < curve.size(); ++r) {
    require_same_dim(curve[r].dim(), n, "planarity_defect");
    stacked.row(static_cast<Eigen::Index>(r)) = curve[r].components().normalized().transpose();
  }
  if (n < 3) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const RVector& s = svd.singularValues();
  if (s.size() < 3 || s[0] == 0.0) return 0.0;
  return s[2] / s[0];
}

}  // namespace holoproj
