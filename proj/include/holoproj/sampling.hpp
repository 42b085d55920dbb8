#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "holoproj/chart.hpp"
#include "holoproj/hilbert.hpp"

namespace holoproj {

using Rng = std::mt19937_64;

/// Normalised complex Gaussian vector: unitarily invariant on rays.
StateVector random_state(Eigen::Index n, Rng& rng);

/// Random ray, expressed in its largest-pivot chart.
ChartPoint random_chart_point(Eigen::Index n, Rng& rng);
std::vector<ChartPoint> random_chart_points(Eigen::Index n, std::size_t count, Rng& rng);

/// (A + A^dagger) / 2 with A complex Gaussian.
OperatorMatrix random_hermitian(Eigen::Index n, Rng& rng);

/// H - i Gamma with independent random Hermitian parts.
OperatorMatrix random_operator(Eigen::Index n, Rng& rng);

/// Random tangent vector of unit metric length at x.
RVector random_unit_tangent(const ChartPoint& x, Rng& rng);

}  // namespace holoproj
