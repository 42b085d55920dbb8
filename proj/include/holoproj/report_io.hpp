#pragma once

// JSON / CSV serialization of run artifacts. Doubles are written with
// round-trip precision so a re-parsed JSON report compares equal.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "holoproj/embed.hpp"
#include "holoproj/flow.hpp"
#include "holoproj/pt_scan.hpp"
#include "holoproj/verify.hpp"

namespace holoproj {

void to_json(nlohmann::json& j, const VerificationReport& r);
void from_json(const nlohmann::json& j, VerificationReport& r);

nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports);
std::vector<VerificationReport> reports_from_json(const nlohmann::json& j);
void write_reports_csv(std::ostream& out, const std::vector<VerificationReport>& reports);

nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const StateVector& psi);
StateVector state_from_json(const nlohmann::json& j);

nlohmann::json scan_to_json(const ScanResult& scan);
ScanResult scan_from_json(const nlohmann::json& j);
/// Columns: theta, re_l0, im_l0, ..., min_pair_distance, regime.
void write_scan_csv(std::ostream& out, const ScanResult& scan);

struct TrajectoryRow {
  double t = 0.0;
  int chart_index = 0;
  RVector coords;
  double H = 0.0;
  double Gamma = 0.0;
  double norm = 1.0;  // |psi(t)| under unnormalized modified evolution
};

nlohmann::json trajectory_to_json(const std::vector<TrajectoryRow>& rows, const char* time_label);
/// Columns: <time_label>, chart, x0..x{d-1}, H, Gamma, norm.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows,
                          const char* time_label);

nlohmann::json curve_to_json(const std::vector<CurveSample>& curve);
/// Columns: s, chart, x0.., u0..
void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& curve);

nlohmann::json fixed_points_to_json(const FixedPointResult& result);
void write_fixed_points_csv(std::ostream& out, const FixedPointResult& result);

nlohmann::json embedding_to_json(const std::vector<EmbeddedPoint>& points);
void write_embedding_csv(std::ostream& out, const std::vector<EmbeddedPoint>& points);

/// Writes `text` to `path`, or stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace holoproj
