#include "holoproj/report_io.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "holoproj/errors.hpp"

namespace holoproj {

using nlohmann::json;

namespace {

struct CsvPrecision {
  explicit CsvPrecision(std::ostream& o) : out(o), saved(o.precision()) {
    out << std::setprecision(17);
  }
  ~CsvPrecision() { out.precision(saved); }
  std::ostream& out;
  std::streamsize saved;
};

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

json real_vector(const RVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

void to_json(json& j, const VerificationReport& r) {
  j = json{{"identity_name", r.identity_name}, {"points_tested", r.points_tested},
           {"max_residual", r.max_residual},   {"tolerance", r.tolerance},
           {"passed", r.passed},               {"convention_notes", r.convention_notes}};
}

void from_json(const json& j, VerificationReport& r) {
  j.at("identity_name").get_to(r.identity_name);
  j.at("points_tested").get_to(r.points_tested);
  j.at("max_residual").get_to(r.max_residual);
  j.at("tolerance").get_to(r.tolerance);
  j.at("passed").get_to(r.passed);
  r.convention_notes = j.value("convention_notes", std::string{});
}

json reports_to_json(const std::vector<VerificationReport>& reports) {
  bool all = true;
  for (const auto& r : reports) all = all && r.passed;
  return json{{"reports", reports}, {"all_passed", all}};
}

std::vector<VerificationReport> reports_from_json(const json& j) {
  return j.at("reports").get<std::vector<VerificationReport>>();
}

void write_reports_csv(std::ostream& out, const std::vector<VerificationReport>& reports) {
  CsvPrecision p(out);
  out << "identity_name,points_tested,max_residual,tolerance,passed,convention_notes\n";
  for (const auto& r : reports) {
    out << csv_quote(r.identity_name) << ',' << r.points_tested << ',' << r.max_residual << ','
        << r.tolerance << ',' << (r.passed ? "true" : "false") << ','
        << csv_quote(r.convention_notes) << '\n';
  }
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json state_to_json(const StateVector& psi) {
  json a = json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) a.push_back(complex_to_json(psi[i]));
  return a;
}

StateVector state_from_json(const json& j) {
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return StateVector(v);
}

json scan_to_json(const ScanResult& scan) {
  json records = json::array();
  for (const auto& r : scan.records) {
    json ev = json::array();
    for (cplx z : r.eigenvalues) ev.push_back(complex_to_json(z));
    json fps = json::array();
    for (const auto& s : r.fixed_points) fps.push_back(state_to_json(s));
    records.push_back(json{{"theta", r.theta},
                           {"eigenvalues", ev},
                           {"all_real", r.all_real},
                           {"fixed_points", fps},
                           {"min_pair_distance", r.min_pair_distance},
                           {"regime", regime_name(r.regime)},
                           {"newton_consistent", r.newton_consistent},
                           {"error", r.error}});
  }
  return json{{"family", scan.family_name}, {"n", scan.n}, {"records", records}};
}

ScanResult scan_from_json(const json& j) {
  ScanResult s;
  j.at("family").get_to(s.family_name);
  j.at("n").get_to(s.n);
  for (const auto& rj : j.at("records")) {
    ScanRecord r;
    rj.at("theta").get_to(r.theta);
    for (const auto& z : rj.at("eigenvalues")) r.eigenvalues.push_back(complex_from_json(z));
    rj.at("all_real").get_to(r.all_real);
    for (const auto& fp : rj.at("fixed_points")) r.fixed_points.push_back(state_from_json(fp));
    rj.at("min_pair_distance").get_to(r.min_pair_distance);
    r.regime = parse_regime(rj.at("regime").get<std::string>());
    rj.at("newton_consistent").get_to(r.newton_consistent);
    r.error = rj.value("error", std::string{});
    s.records.push_back(std::move(r));
  }
  return s;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  CsvPrecision p(out);
  out << "theta";
  for (int k = 0; k < scan.n; ++k) out << ",re_l" << k << ",im_l" << k;
  out << ",min_pair_distance,regime\n";
  for (const auto& r : scan.records) {
    out << r.theta;
    for (int k = 0; k < scan.n; ++k) {
      const cplx z = k < static_cast<int>(r.eigenvalues.size()) ? r.eigenvalues[k] : cplx(NAN, NAN);
      out << ',' << z.real() << ',' << z.imag();
    }
    out << ',' << r.min_pair_distance << ',' << regime_name(r.regime) << '\n';
  }
}

json trajectory_to_json(const std::vector<TrajectoryRow>& rows, const char* time_label) {
  json samples = json::array();
  for (const auto& r : rows) {
    samples.push_back(json{{time_label, r.t},
                           {"chart", r.chart_index},
                           {"coords", real_vector(r.coords)},
                           {"H", r.H},
                           {"Gamma", r.Gamma},
                           {"norm", r.norm}});
  }
  return json{{"samples", samples}};
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows,
                          const char* time_label) {
  CsvPrecision p(out);
  const Eigen::Index d = rows.empty() ? 0 : rows.front().coords.size();
  out << time_label << ",chart";
  for (Eigen::Index a = 0; a < d; ++a) out << ",x" << a;
  out << ",H,Gamma,norm\n";
  for (const auto& r : rows) {
    out << r.t << ',' << r.chart_index;
    for (Eigen::Index a = 0; a < d; ++a) out << ',' << r.coords[a];
    out << ',' << r.H << ',' << r.Gamma << ',' << r.norm << '\n';
  }
}

json curve_to_json(const std::vector<CurveSample>& curve) {
  json samples = json::array();
  for (const auto& c : curve) {
    samples.push_back(json{{"s", c.s},
                           {"chart", c.x.chart_index},
                           {"coords", real_vector(c.x.coords)},
                           {"tangent", real_vector(c.u)}});
  }
  return json{{"samples", samples}};
}

void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& curve) {
  CsvPrecision p(out);
  const Eigen::Index d = curve.empty() ? 0 : curve.front().x.coords.size();
  out << "s,chart";
  for (Eigen::Index a = 0; a < d; ++a) out << ",x" << a;
  for (Eigen::Index a = 0; a < d; ++a) out << ",u" << a;
  out << '\n';
  for (const auto& c : curve) {
    out << c.s << ',' << c.x.chart_index;
    for (Eigen::Index a = 0; a < d; ++a) out << ',' << c.x.coords[a];
    for (Eigen::Index a = 0; a < d; ++a) out << ',' << c.u[a];
    out << '\n';
  }
}

json fixed_points_to_json(const FixedPointResult& result) {
  json pts = json::array();
  for (const auto& fp : result.points) {
    pts.push_back(json{{"chart", fp.x.chart_index},
                       {"coords", real_vector(fp.x.coords)},
                       {"state", state_to_json(chart_lift(fp.x))},
                       {"residual", fp.residual}});
  }
  return json{{"fixed_points", pts}, {"diagnostic", result.diagnostic}};
}

void write_fixed_points_csv(std::ostream& out, const FixedPointResult& result) {
  CsvPrecision p(out);
  const Eigen::Index d = result.points.empty() ? 0 : result.points.front().x.coords.size();
  out << "chart";
  for (Eigen::Index a = 0; a < d; ++a) out << ",x" << a;
  out << ",residual\n";
  for (const auto& fp : result.points) {
    out << fp.x.chart_index;
    for (Eigen::Index a = 0; a < d; ++a) out << ',' << fp.x.coords[a];
    out << ',' << fp.residual << '\n';
  }
}

json embedding_to_json(const std::vector<EmbeddedPoint>& points) {
  json pts = json::array();
  for (const auto& e : points) {
    pts.push_back(json{{"x_diag", real_vector(e.x_diag)},
                       {"x_sym", real_vector(e.x_sym)},
                       {"y_antisym", real_vector(e.y_antisym)},
                       {"squared_norm", e.squared_norm()}});
  }
  return json{{"points", pts}};
}

void write_embedding_csv(std::ostream& out, const std::vector<EmbeddedPoint>& points) {
  CsvPrecision p(out);
  if (points.empty()) return;
  const auto& f = points.front();
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (Eigen::Index i = 0; i < f.x_diag.size(); ++i) sep(), out << "xd" << i;
  for (Eigen::Index i = 0; i < f.x_sym.size(); ++i) sep(), out << "xs" << i;
  for (Eigen::Index i = 0; i < f.y_antisym.size(); ++i) sep(), out << "ya" << i;
  out << '\n';
  for (const auto& e : points) {
    const RVector v = e.flat();
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << '\n';
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("output_path: cannot write '" + path + "'");
  f << text;
}

}  // namespace holoproj
