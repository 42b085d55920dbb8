#pragma once

// One-parameter sweeps K(theta): spectral reality, fixed-point tracking and
// exceptional-point (coalescence) detection.
//
// Regimes are defined operationally by the spectrum: unitary_like when every
// eigenvalue is real and the fixed points are separated, exceptional when two
// fixed points coalesce, broken otherwise.

#include <functional>
#include <string>
#include <vector>

#include "holoproj/hilbert.hpp"

namespace holoproj {

inline constexpr double kCoalescenceThreshold = 1e-3;
/// max |Im lambda| below this times the spectral radius counts as real.
inline constexpr double kRealityTolerance = 1e-9;

struct HamiltonianFamily {
  std::function<OperatorMatrix(double)> builder;
  std::vector<double> theta_grid;
  std::string name;
};

enum class Regime { unitary_like, broken, exceptional };

const char* regime_name(Regime r);
Regime parse_regime(const std::string& s);

struct ScanRecord {
  double theta = 0.0;
  std::vector<cplx> eigenvalues;
  bool all_real = false;
  std::vector<StateVector> fixed_points;
  double min_pair_distance = 0.0;
  Regime regime = Regime::broken;
  /// Newton solutions of xi = 0 matched the eigenvectors within FS 1e-6.
  bool newton_consistent = false;
  /// Empty unless the builder or the solvers failed at this theta.
  std::string error;
};

struct ScanResult {
  std::string family_name;
  int n = 0;
  std::vector<ScanRecord> records;
};

struct ScanOptions {
  bool newton_cross_check = true;
  double coalescence_threshold = kCoalescenceThreshold;
};

/// max |Im l| <= kRealityTolerance * max(spectral radius, scale).
bool spectrum_all_real(const std::vector<cplx>& eigenvalues, double scale = 0.0);
/// Uses the spectral norm of K as scale.
bool spectrum_all_real(const OperatorMatrix& K);
double reality_scale(const OperatorMatrix& K);

ScanResult scan(const HamiltonianFamily& family, const ScanOptions& opts = {});

/// Bisection on spectral reality inside [lo, hi] down to `width`; returns the midpoint.
double refine_exceptional(const std::function<OperatorMatrix(double)>& builder, double lo,
                          double hi, double width = 1e-6);

std::vector<double> linspace(double start, double stop, std::size_t count);

/// sigma_x + i gamma sigma_z; exceptional point at gamma = 1.
HamiltonianFamily canonical_pt_family(std::vector<double> grid);

/// Tridiagonal 3-level chain with gain/loss +-i gamma on the end sites;
/// spectrum {0, +-sqrt(2 - gamma^2)}.
HamiltonianFamily three_level_pt_family(std::vector<double> grid);

/// K(theta) = sum_k theta^k C_k.
HamiltonianFamily polynomial_family(std::vector<OperatorMatrix> coefficients,
                                    std::vector<double> grid, std::string name = "polynomial");

}  // namespace holoproj
