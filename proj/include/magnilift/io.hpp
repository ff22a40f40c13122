// Copyright 2026 The MagniLift Authors
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

#ifndef MAGNILIFT_IO_HPP_
#define MAGNILIFT_IO_HPP_

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "magnilift/affine.hpp"
#include "magnilift/conjugate_certify.hpp"
#include "magnilift/error.hpp"
#include "magnilift/graph_model.hpp"
#include "magnilift/instance_gen.hpp"
#include "magnilift/quaternion.hpp"
#include "magnilift/reconstruction.hpp"
#include "magnilift/simplex_graph.hpp"
#include "magnilift/spline_hat.hpp"

// JSON and CSV conversions. Doubles are written in the shortest form that
// reads back to the identical value.

namespace magnilift::io {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    const std::size_t pos = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < pos && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::kParse, source + ":" + std::to_string(line) + ":" +
                                       std::to_string(col) + ": " + e.what());
  }
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), path); }

namespace detail {

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::kParse, where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, where + ": key '" + key + "': " + e.what());
  }
}

inline double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorKind::kParse, where + ": expected a number");
  return j.get<double>();
}

}  // namespace detail

// ---------------------------------------------------------------- vectors

inline json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

inline Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, where + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = detail::as_double(j[k], where + "[" + std::to_string(k) + "]");
  return v;
}

/// Rows of the matrix as nested arrays.
inline json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r).transpose()));
  return out;
}

inline Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::kParse, where + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string w = where + "[" + std::to_string(r) + "]";
    const Eigen::VectorXd row = vector_from_json(j[r], w);
    if (static_cast<std::size_t>(row.size()) != cols)
      throw Error(ErrorKind::kParse, w + ": ragged row");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

/// Field columns as an array of vectors (one per vertex).
inline json field_to_json(const VectorField& f) { return matrix_to_json(f.values.transpose()); }

inline VectorField field_from_json(const json& j, int dim, const std::string& where) {
  if (j.is_array() && j.empty()) return VectorField(dim, 0);
  const Eigen::MatrixXd rows = matrix_from_json(j, where);
  if (rows.cols() != dim)
    throw Error(ErrorKind::kParse, where + ": vectors must have " + std::to_string(dim) +
                                       " coordinates");
  return VectorField(rows.transpose());
}

inline json complex_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

// ---------------------------------------------------------- graph instances

inline json instance_to_json(const GraphInstance& inst) {
  json j;
  j["dim"] = inst.dim;
  j["vertices"] = inst.graph.vertex_count();
  json edges = json::array();
  for (const Edge& e : inst.graph.edges()) edges.push_back({e.u, e.v});
  j["edges"] = edges;
  if (inst.field) j["field"] = field_to_json(*inst.field);
  if (inst.alternate_field) j["alternate_field"] = field_to_json(*inst.alternate_field);
  if (inst.observation) {
    j["vertex_norms"] = inst.observation->vertex_norms;
    json en = json::array();
    for (const auto& [e, v] : inst.observation->edge_norms) en.push_back({e.u, e.v, v});
    j["edge_norms"] = en;
  }
  return j;
}

/// Reads a graph instance; when norms are absent but a field is present the
/// observation is computed from the field.
inline GraphInstance instance_from_json(const json& j, const std::string& where = "instance") {
  GraphInstance inst;
  inst.dim = detail::get_field<int>(j, "dim", where);
  if (inst.dim < 1) throw Error(ErrorKind::kParse, where + ": dim must be >= 1");
  const int n = detail::get_field<int>(j, "vertices", where);
  std::vector<Edge> edges;
  const json& je = j.at("edges");
  if (!je.is_array()) throw Error(ErrorKind::kParse, where + ": edges must be an array");
  for (std::size_t k = 0; k < je.size(); ++k) {
    const json& e = je[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw Error(ErrorKind::kParse,
                  where + ": edges[" + std::to_string(k) + "] must be a pair of integers");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  inst.graph = SimpleGraph(n, std::move(edges));
  if (j.contains("field")) inst.field = field_from_json(j["field"], inst.dim, where + ".field");
  if (j.contains("alternate_field"))
    inst.alternate_field = field_from_json(j["alternate_field"], inst.dim, where + ".alternate_field");
  if (j.contains("vertex_norms")) {
    MagnitudeObservation obs;
    obs.dim = inst.dim;
    obs.vertex_norms = detail::get_field<std::vector<double>>(j, "vertex_norms", where);
    const json& jn = j.at("edge_norms");
    if (!jn.is_array()) throw Error(ErrorKind::kParse, where + ": edge_norms must be an array");
    for (std::size_t k = 0; k < jn.size(); ++k) {
      const json& t = jn[k];
      const std::string w = where + ".edge_norms[" + std::to_string(k) + "]";
      if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
          !t[1].is_number_integer())
        throw Error(ErrorKind::kParse, w + ": expected [i, j, value]");
      obs.edge_norms[Edge(t[0].get<int>(), t[1].get<int>())] = detail::as_double(t[2], w);
    }
    require_coverage(obs, inst.graph);
    inst.observation = std::move(obs);
  } else if (inst.field) {
    inst.observation = observe(inst.graph, *inst.field);
  }
  return inst;
}

// ------------------------------------------------------------------ results

inline json to_json(const ReconstructionResult& r) {
  json j;
  j["status"] = std::string(to_string(r.status));
  j["method"] = std::string(to_string(r.method));
  j["certified_unique"] = r.certified_unique;
  j["residual"] = r.residual;
  j["component_count"] = r.component_count;
  j["unreached"] = r.unreached;
  json bad = json::array();
  for (const Edge& e : r.infeasible_edges) bad.push_back({e.u, e.v});
  j["infeasible_edges"] = bad;
  j["field"] = field_to_json(r.field);
  return j;
}

inline json to_json(const SimplexGraph& sg, const UniquenessReport& report) {
  json j;
  j["dim"] = sg.dim;
  j["simplices"] = sg.simplices;
  json edges = json::array();
  for (const auto& [a, b] : sg.edges) edges.push_back({a, b});
  j["edges"] = edges;
  j["connected"] = report.connected;
  j["uncovered"] = report.uncovered_vertices;
  j["component_count"] = report.component_count;
  j["certified"] = report.certified;
  return j;
}

inline json to_json(const Verdict& v) {
  json j;
  j["status"] = std::string(to_string(v.status));
  j["method"] = v.method;
  j["nullspace_dim"] = v.nullspace_dim;
  j["samples_used"] = v.samples_used;
  j["witness"] = v.witness ? matrix_to_json(*v.witness) : json(nullptr);
  if (v.decomposition) {
    j["decomposition"] = {{"x1", complex_to_json(v.decomposition->first)},
                          {"x2", complex_to_json(v.decomposition->second)}};
  } else {
    j["decomposition"] = nullptr;
  }
  return j;
}

// ------------------------------------------------------------------ splines

inline json to_json(const ComplexCoeffSeq& c) {
  json coeffs = json::array();
  for (cdouble z : c.coeffs()) coeffs.push_back({z.real(), z.imag()});
  return {{"offset", c.offset()}, {"coeffs", coeffs}};
}

inline ComplexCoeffSeq coeffs_from_json(const json& j, const std::string& where = "coeffs") {
  const int offset = detail::get_field<int>(j, "offset", where);
  const json& jc = j.at("coeffs");
  if (!jc.is_array()) throw Error(ErrorKind::kParse, where + ": coeffs must be an array");
  std::vector<cdouble> c;
  for (std::size_t k = 0; k < jc.size(); ++k) {
    const std::string w = where + ".coeffs[" + std::to_string(k) + "]";
    if (!jc[k].is_array() || jc[k].size() != 2)
      throw Error(ErrorKind::kParse, w + ": expected [re, im]");
    c.emplace_back(detail::as_double(jc[k][0], w), detail::as_double(jc[k][1], w));
  }
  return {offset, std::move(c)};
}

inline json to_json(const MagnitudeSamples& s) {
  return {{"start", s.start}, {"values", s.values}};
}

inline MagnitudeSamples samples_from_json(const json& j, const std::string& where = "samples") {
  MagnitudeSamples s;
  s.start = detail::get_field<int>(j, "start", where);
  const Eigen::VectorXd v = vector_from_json(j.at("values"), where + ".values");
  s.values.assign(v.begin(), v.end());
  return s;
}

inline json to_json(const CriterionReport& r) {
  return {{"retrievable", r.retrievable},
          {"support_gap", r.support_gap ? json(*r.support_gap) : json(nullptr)},
          {"im_positions", r.im_positions}};
}

// -------------------------------------------------------------- quaternions

inline json to_json(const Quaternion& q) { return {q.a, q.b, q.c, q.d}; }

inline json to_json(const QuatFunction& f) {
  json out = json::array();
  for (const Quaternion& q : f.values) out.push_back(to_json(q));
  return out;
}

inline QuatFunction quat_function_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, where + ": expected an array of quaternions");
  QuatFunction f;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    const Eigen::VectorXd v = vector_from_json(j[k], w);
    if (v.size() != 4) throw Error(ErrorKind::kParse, w + ": a quaternion is [a, b, c, d]");
    f.values.push_back({v(0), v(1), v(2), v(3)});
  }
  return f;
}

inline json to_json(const QuatCheckReport& r) {
  json j;
  j["verdict"] = std::string(to_string(r.verdict));
  json cands = json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"equal_magnitudes", c.equal_magnitudes}, {"in_orbit", c.in_orbit}});
  j["candidates"] = cands;
  if (r.counterexample) {
    j["counterexample"] = {{"u", to_json(r.counterexample->first)},
                           {"v", to_json(r.counterexample->second)}};
  } else {
    j["counterexample"] = nullptr;
  }
  j["samples_used"] = r.samples_used;
  return j;
}

// ------------------------------------------------------------------- affine

inline json to_json(const AffineSystem& sys) {
  json ms = json::array();
  for (const auto& m : sys.measurements()) {
    json refs = json::array();
    for (const auto& b : m.refs) refs.push_back(to_json(b));
    ms.push_back({{"phi", matrix_to_json(m.phi)}, {"refs", refs}});
  }
  return {{"p", sys.p()}, {"measurements", ms}};
}

inline AffineSystem affine_from_json(const json& j, const std::string& where = "system") {
  const int p = detail::get_field<int>(j, "p", where);
  const json& jm = j.at("measurements");
  if (!jm.is_array()) throw Error(ErrorKind::kParse, where + ": measurements must be an array");
  std::vector<AffineMeasurement> ms;
  for (std::size_t k = 0; k < jm.size(); ++k) {
    const std::string w = where + ".measurements[" + std::to_string(k) + "]";
    AffineMeasurement m;
    m.phi = matrix_from_json(jm[k].at("phi"), w + ".phi");
    const json& jr = jm[k].at("refs");
    if (!jr.is_array()) throw Error(ErrorKind::kParse, w + ": refs must be an array");
    for (std::size_t i = 0; i < jr.size(); ++i)
      m.refs.push_back(vector_from_json(jr[i], w + ".refs[" + std::to_string(i) + "]"));
    ms.push_back(std::move(m));
  }
  return AffineSystem(p, std::move(ms));
}

inline json to_json(const AffineReport& r) {
  json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["reason"] = r.reason;
  if (r.counterexample) {
    j["counterexample"] = {{"f", to_json(r.counterexample->first)},
                           {"g", to_json(r.counterexample->second)}};
  } else {
    j["counterexample"] = nullptr;
  }
  j["restarts_used"] = r.restarts_used;
  return j;
}

// ---------------------------------------------------------------------- CSV

namespace detail {

inline std::vector<std::vector<double>> parse_csv(const std::string& text,
                                                  const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<double> row;
    std::size_t col = 0;
    while (col <= line.size()) {
      const std::size_t comma = std::min(line.find(',', col), line.size());
      const std::string cell = line.substr(col, comma - col);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      const bool blank_tail =
          end && std::string(end).find_first_not_of(" \t") == std::string::npos;
      if (end == cell.c_str() || !blank_tail)
        throw Error(ErrorKind::kParse, source + ":" + std::to_string(lineno) + ":" +
                                           std::to_string(col + 1) + ": not a number: '" +
                                           cell + "'");
      row.push_back(v);
      col = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline Eigen::MatrixXd matrix_from_csv(const std::string& text, const std::string& source) {
  const auto rows = detail::parse_csv(text, source);
  if (rows.empty()) throw Error(ErrorKind::kParse, source + ": empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw Error(ErrorKind::kParse, source + ": row " + std::to_string(r + 1) +
                                         " has " + std::to_string(rows[r].size()) +
                                         " entries, expected " + std::to_string(rows[0].size()));
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

/// One "re,im" pair per line.
inline ComplexVector complex_vector_from_csv(const std::string& text, const std::string& source) {
  const Eigen::MatrixXd m = matrix_from_csv(text, source);
  if (m.cols() != 2) throw Error(ErrorKind::kParse, source + ": expected lines of the form re,im");
  ComplexVector v(m.rows());
  for (Eigen::Index k = 0; k < m.rows(); ++k) v(k) = {m(k, 0), m(k, 1)};
  return v;
}

// ----------------------------------------------------------------- generate

/// Instance JSON for a generator spec. Identical specs give identical JSON.
inline json generate(const GenSpec& spec) {
  SplitMix64 rng(spec.seed);
  json j;
  switch (spec.kind) {
    case GenKind::kRandomField:
      j = instance_to_json(random_complete_instance(rng, spec.n, spec.d));
      break;
    case GenKind::kCirculantCounterexample:
      j = instance_to_json(circulant_counterexample(spec.n));
      break;
    case GenKind::kGluedSimplices:
      j = instance_to_json(glued_simplices(rng, spec.d, spec.length));
      break;
    case GenKind::kRandomRangeMatrix:
      j = {{"matrix", matrix_to_json(random_range_matrix(rng, spec.m, spec.n))}};
      break;
    case GenKind::kRandomSpline:
      j = to_json(random_spline(rng, spec.length, spec.im_positions));
      break;
    case GenKind::kRandomAffineSystem:
      j = to_json(random_affine_system(rng, spec.n, spec.d, spec.refs, spec.count));
      break;
  }
  json out = {{"kind", std::string(to_string(spec.kind))}, {"seed", spec.seed}};
  out.update(j);
  return out;
}

}  // namespace magnilift::io

#endif  // MAGNILIFT_IO_HPP_
