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

#ifndef MAGNILIFT_GRAM_HPP_
#define MAGNILIFT_GRAM_HPP_

#include <algorithm>
#include <map>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "magnilift/error.hpp"
#include "magnilift/graph_model.hpp"

namespace magnilift {

/// Relative positive-definiteness threshold used by the nondegeneracy tests.
inline constexpr double kDefaultPdTolerance = 1e-10;

/// Inner products <f_i, f_j> known from magnitude data: the diagonal and
/// every graph edge.
class PartialGram {
 public:
  PartialGram() = default;
  PartialGram(int dim, int vertex_count) : dim_(dim), n_(vertex_count) {}

  int dim() const noexcept { return dim_; }
  int vertex_count() const noexcept { return n_; }

  void set(Vertex i, Vertex j, double value) { entries_[key(i, j)] = value; }

  bool contains(Vertex i, Vertex j) const { return entries_.contains(key(i, j)); }

  double at(Vertex i, Vertex j) const {
    const auto it = entries_.find(key(i, j));
    if (it == entries_.end())
      throw Error(ErrorKind::kMissingEntry,
                  "inner product <f_" + std::to_string(i) + ", f_" +
                      std::to_string(j) + "> is not determined by the data");
    return it->second;
  }

  /// Dense block over the listed vertices; throws when an entry is unknown.
  Eigen::MatrixXd block(std::span<const Vertex> vertices) const {
    const auto m = static_cast<Eigen::Index>(vertices.size());
    Eigen::MatrixXd g(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = a; b < m; ++b)
        g(a, b) = g(b, a) = at(vertices[a], vertices[b]);
    return g;
  }

 private:
  // Diagonal entries are stored under Edge{i, i}.
  static Edge key(Vertex i, Vertex j) {
    Edge e;
    e.u = std::min(i, j);
    e.v = std::max(i, j);
    return e;
  }

  int dim_ = 0;
  int n_ = 0;
  std::map<Edge, double> entries_;
};

/// <f_i, f_j> = (||f_i||^2 + ||f_j||^2 - ||f_i - f_j||^2) / 2 on every edge,
/// ||f_i||^2 on the diagonal.
inline PartialGram polarize(const MagnitudeObservation& obs,
                            const SimpleGraph& graph) {
  require_coverage(obs, graph);
  PartialGram gram(obs.dim, graph.vertex_count());
  for (int i = 0; i < graph.vertex_count(); ++i) {
    const double a = obs.vertex_norms[i];
    gram.set(i, i, a * a);
  }
  for (const Edge& e : graph.edges()) {
    const double a = obs.vertex_norms[e.u];
    const double b = obs.vertex_norms[e.v];
    const double c = obs.edge_norms.at(e);
    gram.set(e.u, e.v, 0.5 * (a * a + b * b - c * c));
  }
  return gram;
}

namespace detail {

inline double pd_threshold(const Eigen::MatrixXd& g, double rel_tol) {
  const double scale = g.size() ? g.diagonal().cwiseAbs().maxCoeff() : 0.0;
  return rel_tol * scale;
}

inline void require_square_symmetric(const Eigen::MatrixXd& g, Eigen::Index n) {
  if (g.rows() != n || g.cols() != n)
    throw Error(ErrorKind::kDimensionMismatch,
                "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                    " Gram block");
  if (!g.allFinite())
    throw Error(ErrorKind::kMissingEntry, "Gram block has non-finite entries");
}

}  // namespace detail

/// True iff the d+1 vectors behind the Gram block g are affinely independent,
/// i.e. g is strictly positive definite on the zero-sum hyperplane. The
/// hyperplane is parametrized by the columns e_k - e_last.
inline bool affinely_independent(const Eigen::MatrixXd& g,
                                 double rel_tol = kDefaultPdTolerance) {
  const Eigen::Index m = g.rows();
  if (m < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "affine independence needs at least two points");
  detail::require_square_symmetric(g, m);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, m - 1);
  for (Eigen::Index k = 0; k < m - 1; ++k) {
    basis(k, k) = 1.0;
    basis(m - 1, k) = -1.0;
  }
  const Eigen::MatrixXd restricted = basis.transpose() * g * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(restricted,
                                                    Eigen::EigenvaluesOnly);
  const double threshold = detail::pd_threshold(g, rel_tol);
  return es.eigenvalues().minCoeff() > threshold;
}

/// True iff the Gram block is strictly positive definite, i.e. the vectors
/// are linearly independent.
inline bool linearly_independent(const Eigen::MatrixXd& g,
                                 double rel_tol = kDefaultPdTolerance) {
  const Eigen::Index m = g.rows();
  detail::require_square_symmetric(g, m);
  if (m == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > detail::pd_threshold(g, rel_tol);
}

}  // namespace magnilift

#endif  // MAGNILIFT_GRAM_HPP_
