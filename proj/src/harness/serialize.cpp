// Copyright 2026 The cvtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvtele/harness/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cvtele/errors.hpp"

namespace cvtele::harness {

using nlohmann::json;

namespace {

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    a.push_back(row);
  }
  return a;
}

Eigen::VectorXd read_vec(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a.at(i).get<double>();
  return v;
}

Eigen::MatrixXd read_mat(const json& a) {
  const auto rows = static_cast<Eigen::Index>(a.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(a.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = a.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw std::invalid_argument("ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

json state_json(const GaussianState& s) { return {{"mean", vec(s.mean())}, {"cov", mat(s.cov())}}; }

GaussianState read_state(const json& j) {
  return GaussianState(read_vec(j.at("mean")), read_mat(j.at("cov")));
}

json db_json(const DbValue& d) { return {{"db", d.db}, {"reference", d.reference}}; }
DbValue read_db(const json& j) { return DbValue{j.at("db").get<double>(), j.at("reference").get<double>()}; }

template <typename T, typename F>
json opt(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : json(nullptr);
}

template <std::size_t N>
std::array<double, N> read_array(const json& j) {
  if (j.size() != N) throw std::invalid_argument("wrong array length");
  std::array<double, N> a{};
  for (std::size_t i = 0; i < N; ++i) a[i] = j.at(i).get<double>();
  return a;
}

json report_json(const TeleportReport& r) {
  return {
      {"output_state", state_json(r.output_state)},
      {"vx_out", r.vx_out},
      {"vp_out", r.vp_out},
      {"vx_db", db_json(r.vx_db)},
      {"vp_db", db_json(r.vp_db)},
      {"fidelity_coherent", opt(r.fidelity_coherent, [](double f) { return json(f); })},
      {"delta_sq_out", r.delta_sq_out.value},
      {"input_vx_db", db_json(r.input_vx_db)},
      {"input_vp_db", db_json(r.input_vp_db)},
      {"delta_sq_in", r.delta_sq_in.value},
      {"epr_x_db", db_json(r.epr_x_db)},
      {"epr_p_db", db_json(r.epr_p_db)},
      {"gains_measured", opt(r.gains_measured, [](const std::array<double, 2>& g) { return json(g); })},
  };
}

TeleportReport read_report(const json& j) {
  TeleportReport r;
  r.output_state = read_state(j.at("output_state"));
  r.vx_out = j.at("vx_out").get<double>();
  r.vp_out = j.at("vp_out").get<double>();
  r.vx_db = read_db(j.at("vx_db"));
  r.vp_db = read_db(j.at("vp_db"));
  if (!j.at("fidelity_coherent").is_null()) r.fidelity_coherent = j.at("fidelity_coherent").get<double>();
  r.delta_sq_out = NoisePower{j.at("delta_sq_out").get<double>()};
  r.input_vx_db = read_db(j.at("input_vx_db"));
  r.input_vp_db = read_db(j.at("input_vp_db"));
  r.delta_sq_in = NoisePower{j.at("delta_sq_in").get<double>()};
  r.epr_x_db = read_db(j.at("epr_x_db"));
  r.epr_p_db = read_db(j.at("epr_p_db"));
  if (!j.at("gains_measured").is_null()) r.gains_measured = read_array<2>(j.at("gains_measured"));
  return r;
}

json trace_json(const PhaseScanTrace& t) {
  json theta = json::array();
  json power = json::array();
  for (const auto& pt : t.points) {
    theta.push_back(pt.theta);
    power.push_back(pt.power_db);
  }
  return {{"averages", t.averages}, {"span", t.span}, {"theta_rad", theta}, {"power_db", power}};
}

PhaseScanTrace read_trace(const json& j) {
  PhaseScanTrace t;
  t.averages = j.at("averages").get<std::uint32_t>();
  t.span = j.at("span").get<double>();
  const json& theta = j.at("theta_rad");
  const json& power = j.at("power_db");
  if (theta.size() != power.size()) throw std::invalid_argument("trace columns differ in length");
  for (std::size_t i = 0; i < theta.size(); ++i)
    t.points.push_back({theta.at(i).get<double>(), power.at(i).get<double>()});
  return t;
}

json grid_json(const WignerGrid& g) {
  const GridSpec& s = g.spec;
  return {{"x0", s.x_min}, {"x1", s.x_max}, {"nx", s.n_x}, {"p0", s.p_min},
          {"p1", s.p_max}, {"np", s.n_p},   {"values", g.values}};
}

WignerGrid read_grid(const json& j) {
  WignerGrid g;
  g.spec = GridSpec{j.at("x0").get<double>(), j.at("x1").get<double>(), j.at("nx").get<std::size_t>(),
                    j.at("p0").get<double>(), j.at("p1").get<double>(), j.at("np").get<std::size_t>()};
  g.spec.validate();
  g.values = j.at("values").get<std::vector<double>>();
  if (g.values.size() != g.spec.n_x * g.spec.n_p) throw std::invalid_argument("grid size mismatch");
  return g;
}

std::vector<double> split_numbers(std::string_view line) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto end = std::min(line.find(',', pos), line.size());
    const std::string_view cell = line.substr(pos, end - pos);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
      throw std::invalid_argument("bad CSV number '" + std::string(cell) + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    out.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

}  // namespace

json to_json(const CalibrationResult& c) {
  return {{"eta_source", c.eta_source},
          {"achieved_db", c.achieved_db},
          {"residual_db", c.residual_db},
          {"inferred_input", opt(c.inferred_input, state_json)}};
}

json to_json(const RunResult& r) {
  json j;
  j["provenance"] = {{"config_hash", r.provenance.config_hash},
                     {"seed", r.provenance.seed},
                     {"version", r.provenance.version}};
  j["calibration"] = opt(r.calibration, [](const CalibrationResult& c) { return to_json(c); });
  j["report"] = report_json(r.report);
  j["monte_carlo"] = opt(r.monte_carlo, [](const McReport& m) {
    return json{{"shots", m.shots},
                {"report", report_json(m.report)},
                {"shot_mean_cov", mat(m.shot_mean_cov)},
                {"mean_stderr", vec(m.mean_stderr)},
                {"cov_stderr", mat(m.cov_stderr)}};
  });
  j["input_trace"] = opt(r.input_trace, trace_json);
  j["output_trace"] = opt(r.output_trace, trace_json);
  j["input_wigner"] = opt(r.input_wigner, grid_json);
  j["output_wigner"] = opt(r.output_wigner, grid_json);
  return j;
}

RunResult run_result_from_json(const json& j) {
  RunResult r;
  const json& prov = j.at("provenance");
  r.provenance = {prov.at("config_hash").get<std::string>(), prov.at("seed").get<std::uint64_t>(),
                  prov.at("version").get<std::string>()};
  if (const json& c = j.at("calibration"); !c.is_null()) {
    CalibrationResult cal;
    cal.eta_source = read_array<2>(c.at("eta_source"));
    cal.achieved_db = read_array<2>(c.at("achieved_db"));
    cal.residual_db = read_array<2>(c.at("residual_db"));
    if (!c.at("inferred_input").is_null()) cal.inferred_input = read_state(c.at("inferred_input"));
    r.calibration = std::move(cal);
  }
  r.report = read_report(j.at("report"));
  if (const json& m = j.at("monte_carlo"); !m.is_null()) {
    McReport mc;
    mc.shots = m.at("shots").get<std::size_t>();
    mc.report = read_report(m.at("report"));
    mc.shot_mean_cov = read_mat(m.at("shot_mean_cov"));
    mc.mean_stderr = read_vec(m.at("mean_stderr"));
    mc.cov_stderr = read_mat(m.at("cov_stderr"));
    r.monte_carlo = std::move(mc);
  }
  if (!j.at("input_trace").is_null()) r.input_trace = read_trace(j.at("input_trace"));
  if (!j.at("output_trace").is_null()) r.output_trace = read_trace(j.at("output_trace"));
  if (!j.at("input_wigner").is_null()) r.input_wigner = read_grid(j.at("input_wigner"));
  if (!j.at("output_wigner").is_null()) r.output_wigner = read_grid(j.at("output_wigner"));
  return r;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string trace_csv(const PhaseScanTrace& trace) {
  std::string out = "theta_rad,power_db\n";
  for (const auto& pt : trace.points) out += format_number(pt.theta) + "," + format_number(pt.power_db) + "\n";
  return out;
}

std::string wigner_csv(const WignerGrid& grid) {
  const GridSpec& s = grid.spec;
  std::string out = "x0,x1,nx,p0,p1,np\n";
  out += format_number(s.x_min) + "," + format_number(s.x_max) + "," + std::to_string(s.n_x) + "," +
         format_number(s.p_min) + "," + format_number(s.p_max) + "," + std::to_string(s.n_p) + "\n";
  for (std::size_t i = 0; i < s.n_x; ++i) {
    for (std::size_t k = 0; k < s.n_p; ++k) {
      if (k > 0) out += ',';
      out += format_number(grid.at(i, k));
    }
    out += '\n';
  }
  return out;
}

PhaseScanTrace parse_trace_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != "theta_rad,power_db") throw std::invalid_argument("missing trace header");
  PhaseScanTrace t;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_numbers(lines[i]);
    if (cells.size() != 2) throw std::invalid_argument("trace row needs two columns");
    t.points.push_back({cells[0], cells[1]});
  }
  return t;
}

WignerGrid parse_wigner_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.size() < 2 || lines[0] != "x0,x1,nx,p0,p1,np") throw std::invalid_argument("missing grid header");
  const auto geo = split_numbers(lines[1]);
  if (geo.size() != 6) throw std::invalid_argument("grid geometry needs six fields");
  WignerGrid g;
  g.spec = GridSpec{geo[0], geo[1], static_cast<std::size_t>(geo[2]), geo[3], geo[4],
                    static_cast<std::size_t>(geo[5])};
  g.spec.validate();
  if (lines.size() != 2 + g.spec.n_x) throw std::invalid_argument("grid row count mismatch");
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto row = split_numbers(lines[i]);
    if (row.size() != g.spec.n_p) throw std::invalid_argument("grid column count mismatch");
    g.values.insert(g.values.end(), row.begin(), row.end());
  }
  return g;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

}  // namespace cvtele::harness
