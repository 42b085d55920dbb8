#pragma once

// Complex linear algebra on the n-dimensional Hilbert space: states,
// operators, expectations, the overlap distance and the projective
// (norm-preserving) Schroedinger flow.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace holoproj {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Tolerance on 1 - |<psi|phi>|^2 / (<psi|psi><phi|phi>) for projective equality.
inline constexpr double kProjectiveEqualityTol = 1e-10;

/// A nonzero vector of C^n (n >= 2). Rays are not normalised on storage.
class StateVector {
 public:
  explicit StateVector(CVector components);
  StateVector(std::initializer_list<cplx> components);

  const CVector& components() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }
  double norm() const { return v_.norm(); }
  cplx operator[](Eigen::Index i) const { return v_[i]; }

  /// Unit-norm representative of the same ray.
  StateVector normalized() const;

 private:
  CVector v_;
};

/// Square complex matrix acting on the Hilbert space.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(CMatrix entries);

  const CMatrix& entries() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  bool is_hermitian(double tol = 1e-12) const;

  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a);

 private:
  CMatrix m_;
};

/// K = H - i Gamma with both parts Hermitian.
struct HamiltonianSplit {
  OperatorMatrix H;
  OperatorMatrix Gamma;

  /// tr(H)/n and tr(Gamma)/n.
  double mean_H() const;
  double mean_Gamma() const;
  OperatorMatrix recombine() const;
};

// Named 2x2 matrices used throughout the tests and the built-in families.
OperatorMatrix pauli_x();
OperatorMatrix pauli_y();
OperatorMatrix pauli_z();
OperatorMatrix identity_op(Eigen::Index n);
OperatorMatrix zero_op(Eigen::Index n);

HamiltonianSplit hermitian_split(const OperatorMatrix& K);

/// <psi|A|psi> / <psi|psi>.
cplx expectation(const OperatorMatrix& A, const StateVector& psi);

/// Fubini-Study distance 2 arccos sqrt(transition probability), in [0, pi].
double fs_distance(const StateVector& psi, const StateVector& phi);

/// 1 - transition probability; zero iff the rays coincide.
double projective_defect(const StateVector& psi, const StateVector& phi);

bool projectively_equal(const StateVector& psi, const StateVector& phi,
                        double tol = kProjectiveEqualityTol);

/// -i (K - <K>) psi, always orthogonal to psi.
CVector modified_rhs(const OperatorMatrix& K, const CVector& psi);
CVector modified_rhs(const OperatorMatrix& K, const StateVector& psi);

struct HilbertSample {
  double t;
  StateVector psi;
};

struct HilbertEvolveOptions {
  bool renormalize = true;
  /// Step halving when the RK4 local error estimate exceeds this (0 disables).
  double local_error_tol = 0.0;
};

/// Classical RK4 integration of the modified Schroedinger equation.
std::vector<HilbertSample> evolve_hilbert(const OperatorMatrix& K, const StateVector& psi0,
                                          double t_final, double dt,
                                          const HilbertEvolveOptions& opts = {});

struct EigenFixedPoints {
  std::vector<StateVector> points;
  std::vector<cplx> eigenvalues;  // all n eigenvalues, with multiplicity
  bool defective = false;         // exceptional-point signature
};

/// One eigenvector per distinct eigenvalue; coalescing pairs are merged and
/// flagged when both the eigenvalues (1e-8) and eigenvectors (FS 1e-4) meet.
EigenFixedPoints eigen_fixed_points(const OperatorMatrix& K);

/// sigma_3 / sigma_1 of the stacked normalised samples.
double planarity_defect(const std::vector<StateVector>& curve);

}  // namespace holoproj
