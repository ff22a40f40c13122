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

#ifndef MAGNILIFT_GRAPH_MODEL_HPP_
#define MAGNILIFT_GRAPH_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magnilift/error.hpp"
#include "magnilift/linalg.hpp"

namespace magnilift {

using Vertex = int;

/// Unordered vertex pair stored as (min, max).
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Finite simple undirected graph on vertices 0..n-1. Edges are kept in
/// sorted canonical order.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  SimpleGraph(int vertex_count, std::vector<Edge> edges)
      : n_(vertex_count), edges_(std::move(edges)), adj_(vertex_count) {
    if (vertex_count < 0)
      throw Error(ErrorKind::kInvalidArgument, "negative vertex count");
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const Edge& e = edges_[k];
      if (e.u == e.v)
        throw Error(ErrorKind::kInvalidArgument,
                    "self-loop at vertex " + std::to_string(e.u));
      if (e.u < 0 || e.v >= n_)
        throw Error(ErrorKind::kInvalidArgument,
                    "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                        ") out of range");
      if (k > 0 && edges_[k - 1] == e)
        throw Error(ErrorKind::kInvalidArgument,
                    "duplicate edge (" + std::to_string(e.u) + "," +
                        std::to_string(e.v) + ")");
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  static SimpleGraph complete(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return SimpleGraph(n, std::move(edges));
  }

  /// Cycle C_n: i adjacent to i +- 1 mod n.
  static SimpleGraph cycle(int n) {
    std::vector<Edge> edges;
    if (n == 2) {
      edges.emplace_back(0, 1);
    } else if (n > 2) {
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    }
    return SimpleGraph(n, std::move(edges));
  }

  int vertex_count() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }

  bool has_edge(Vertex a, Vertex b) const {
    if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) return false;
    const auto& nb = adj_[a];
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  bool is_complete() const {
    return edges_.size() ==
           static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ - 1) / 2 ||
           n_ <= 1;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
};

/// d-dimensional real vector field; column i is the vector at vertex i.
struct VectorField {
  Eigen::MatrixXd values;

  VectorField() = default;
  explicit VectorField(Eigen::MatrixXd v) : values(std::move(v)) {}
  VectorField(int dim, int count) : values(Eigen::MatrixXd::Zero(dim, count)) {}

  int dim() const { return static_cast<int>(values.rows()); }
  int size() const { return static_cast<int>(values.cols()); }
  auto operator[](int i) const { return values.col(i); }
  auto operator[](int i) { return values.col(i); }

  VectorField transformed(const Eigen::MatrixXd& u) const {
    return VectorField(u * values);
  }
};

/// Measured absolute magnitudes ||f_i|| and relative magnitudes ||f_i - f_j||.
struct MagnitudeObservation {
  int dim = 0;
  std::vector<double> vertex_norms;
  std::map<Edge, double> edge_norms;

  double max_vertex_norm() const {
    double m = 0.0;
    for (double x : vertex_norms) m = std::max(m, x);
    return m;
  }

  friend bool operator==(const MagnitudeObservation&,
                         const MagnitudeObservation&) = default;
};

/// 1e-8 * (1 + largest vector norm); used wherever no tolerance is given.
inline double default_tolerance(const MagnitudeObservation& obs) {
  return 1e-8 * (1.0 + obs.max_vertex_norm());
}

inline double default_tolerance(const VectorField& f) {
  const double m = f.size() ? f.values.colwise().norm().maxCoeff() : 0.0;
  return 1e-8 * (1.0 + m);
}

/// Checks that the observation covers the graph; throws on missing data.
inline void require_coverage(const MagnitudeObservation& obs,
                             const SimpleGraph& graph) {
  if (static_cast<int>(obs.vertex_norms.size()) != graph.vertex_count())
    throw Error(ErrorKind::kDimensionMismatch,
                "observation has " + std::to_string(obs.vertex_norms.size()) +
                    " vertex norms, graph has " +
                    std::to_string(graph.vertex_count()) + " vertices");
  for (const Edge& e : graph.edges())
    if (!obs.edge_norms.contains(e))
      throw Error(ErrorKind::kMissingEntry,
                  "no relative magnitude for edge (" + std::to_string(e.u) +
                      "," + std::to_string(e.v) + ")");
  if (obs.dim <= 0)
    throw Error(ErrorKind::kInvalidArgument, "observation dimension must be positive");
}

/// Edges whose data violate |a - b| <= c <= a + b by more than tol, plus any
/// negative magnitude.
inline std::vector<Edge> triangle_violations(const MagnitudeObservation& obs,
                                             double tol) {
  std::vector<Edge> bad;
  for (const auto& [e, c] : obs.edge_norms) {
    const double a = obs.vertex_norms.at(e.u);
    const double b = obs.vertex_norms.at(e.v);
    if (c < -tol || a < -tol || b < -tol || c > a + b + tol ||
        c < std::abs(a - b) - tol)
      bad.push_back(e);
  }
  return bad;
}

/// Forward model: absolute magnitudes on vertices and relative magnitudes on
/// edges.
inline MagnitudeObservation observe(const SimpleGraph& graph,
                                    const VectorField& field) {
  if (field.size() != graph.vertex_count())
    throw Error(ErrorKind::kDimensionMismatch,
                "field has " + std::to_string(field.size()) +
                    " vectors, graph has " +
                    std::to_string(graph.vertex_count()) + " vertices");
  if (field.dim() <= 0)
    throw Error(ErrorKind::kInvalidArgument, "field dimension must be positive");
  MagnitudeObservation obs;
  obs.dim = field.dim();
  obs.vertex_norms.resize(static_cast<std::size_t>(field.size()));
  for (int i = 0; i < field.size(); ++i) obs.vertex_norms[i] = field[i].norm();
  for (const Edge& e : graph.edges())
    obs.edge_norms.emplace(e, (field[e.u] - field[e.v]).norm());
  return obs;
}

/// Largest ||g_i - U f_i||.
inline double orbit_residual(const VectorField& f, const VectorField& g,
                             const Eigen::MatrixXd& u) {
  if (f.size() == 0) return 0.0;
  return (g.values - u * f.values).colwise().norm().maxCoeff();
}

/// Returns an orthogonal U with g_i = U f_i (within tol) when the two fields
/// have the same Gram matrix, and nothing otherwise.
///
/// U maps a Gram-Schmidt basis of span{f_i} onto the corresponding basis
/// built from g with the same coefficients; pivots are picked greedily by
/// largest residual and candidates with residual below tol are dropped. The
/// orthogonal complement is completed deterministically and the result is
/// projected onto O(d).
inline std::optional<Eigen::MatrixXd> orbit_equivalent(const VectorField& f,
                                                       const VectorField& g,
                                                       double tol) {
  if (f.dim() != g.dim() || f.size() != g.size())
    throw Error(ErrorKind::kDimensionMismatch,
                "orbit_equivalent needs fields of equal dimension and length");
  const int d = f.dim();
  const int n = f.size();
  const Eigen::MatrixXd gram_f = f.values.transpose() * f.values;
  const Eigen::MatrixXd gram_g = g.values.transpose() * g.values;
  if (n > 0 && (gram_f - gram_g).cwiseAbs().maxCoeff() > tol) return std::nullopt;

  // Greedy pivoted Gram-Schmidt on f, replayed on g.
  Eigen::MatrixXd rf = f.values;
  Eigen::MatrixXd rg = g.values;
  Eigen::MatrixXd qf(d, 0), qg(d, 0);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (qf.cols() < d) {
    int best = -1;
    double best_norm = tol;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double r = rf.col(i).norm();
      if (r > best_norm) {
        best_norm = r;
        best = i;
      }
    }
    if (best < 0) break;
    used[best] = true;
    const Eigen::VectorXd ef = rf.col(best) / best_norm;
    Eigen::VectorXd eg = rg.col(best);
    const double gn = eg.norm();
    eg = gn > 0.0 ? Eigen::VectorXd(eg / gn) : Eigen::VectorXd(eg);
    qf.conservativeResize(d, qf.cols() + 1);
    qg.conservativeResize(d, qg.cols() + 1);
    qf.col(qf.cols() - 1) = ef;
    qg.col(qg.cols() - 1) = eg;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      // Coefficients come from f; equal Grams make them valid for g too.
      const double c = ef.dot(rf.col(i));
      rf.col(i) -= c * ef;
      rg.col(i) -= c * eg;
    }
  }

  const Eigen::MatrixXd bf = linalg::complete_basis(qf, d);
  const Eigen::MatrixXd bg = linalg::complete_basis(qg, d);
  const Eigen::MatrixXd u = linalg::polar_orthogonal(bg * bf.transpose());
  if (orbit_residual(f, g, u) > tol) return std::nullopt;
  return u;
}

}  // namespace magnilift

#endif  // MAGNILIFT_GRAPH_MODEL_HPP_
