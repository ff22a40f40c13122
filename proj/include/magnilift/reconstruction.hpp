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

#ifndef MAGNILIFT_RECONSTRUCTION_HPP_
#define MAGNILIFT_RECONSTRUCTION_HPP_

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magnilift/error.hpp"
#include "magnilift/graph_model.hpp"
#include "magnilift/gram.hpp"
#include "magnilift/linalg.hpp"
#include "magnilift/simplex_graph.hpp"

namespace magnilift {

enum class ReconstructionMethod { kCompleteGram, kSimplexPropagation };

enum class ReconstructionStatus { kOk, kNoSimplex, kIllConditioned, kInconsistent };

inline std::string_view to_string(ReconstructionMethod m) {
  return m == ReconstructionMethod::kCompleteGram ? "CompleteGram"
                                                  : "SimplexPropagation";
}

inline std::string_view to_string(ReconstructionStatus s) {
  switch (s) {
    case ReconstructionStatus::kOk: return "Ok";
    case ReconstructionStatus::kNoSimplex: return "NoSimplex";
    case ReconstructionStatus::kIllConditioned: return "IllConditioned";
    case ReconstructionStatus::kInconsistent: return "Inconsistent";
  }
  return "Unknown";
}

struct ReconstructionOptions {
  double rank_tol = 1e-9;       // relative eigenvalue cut in embed_from_gram
  double pd_tol = kDefaultPdTolerance;
  double residual_tol = 1e-6;   // consistency threshold
  double max_condition = 1e10;  // shared-basis solves above this are refused
  int refine_iterations = 10;   // Gauss-Newton polish after propagation; 0 disables
  double refine_max_entries = 4e6;  // skip the polish when the Jacobian is larger
  unsigned threads = 1;
};

struct ReconstructionResult {
  VectorField field;
  bool certified_unique = false;
  double residual = 0.0;
  ReconstructionMethod method = ReconstructionMethod::kCompleteGram;
  ReconstructionStatus status = ReconstructionStatus::kOk;
  std::vector<Vertex> unreached;  // vertices with no reconstructed vector
  int component_count = 0;
  std::vector<Edge> infeasible_edges;  // triangle-inequality violations in the data
};

/// Realizes vectors x_0..x_{m-1} in R^d with <x_i, x_j> = G_ij. Eigenvalues
/// within rank_tol * max|lambda| of zero are clamped; the remaining
/// coordinates are zero-padded.
inline Eigen::MatrixXd embed_from_gram(const Eigen::MatrixXd& gram, int d,
                                       double rank_tol = 1e-9) {
  if (d < 1) throw Error(ErrorKind::kInvalidArgument, "dimension must be >= 1");
  if (gram.rows() != gram.cols())
    throw Error(ErrorKind::kDimensionMismatch, "Gram matrix must be square");
  const Eigen::Index m = gram.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, m);
  if (m == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(linalg::sym(gram));
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) return out;
  const double cut = rank_tol * scale;
  if (ev(0) < -cut)
    throw Error(ErrorKind::kNotPsd,
                "Gram matrix has eigenvalue " + std::to_string(ev(0)) +
                    " (scale " + std::to_string(scale) + ")");
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < m; ++k)
    if (ev(k) > cut) ++rank;
  if (rank > d)
    throw Error(ErrorKind::kRankExceedsDim,
                "Gram matrix has numerical rank " + std::to_string(rank) +
                    " > dimension " + std::to_string(d));
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index src = m - 1 - k;  // descending order
    out.row(k) = std::sqrt(ev(src)) * es.eigenvectors().col(src).transpose();
  }
  return out;
}

/// Orthogonal U with y_i = U x_i for two (d+1)-point configurations with
/// matching norms and pairwise distances. U is defined on the edge vectors
/// x_i - x_0, then checked on x_0 itself and projected onto O(d).
inline Eigen::MatrixXd align_simplex(const Eigen::MatrixXd& x,
                                     const Eigen::MatrixXd& y, double tol) {
  const Eigen::Index d = x.rows();
  if (x.cols() != d + 1 || y.rows() != d || y.cols() != d + 1)
    throw Error(ErrorKind::kDimensionMismatch,
                "align_simplex expects two d x (d+1) point sets");
  const double scale =
      1.0 + std::max(x.colwise().norm().maxCoeff(), y.colwise().norm().maxCoeff());
  const double slack = tol * scale;
  for (Eigen::Index i = 0; i <= d; ++i) {
    if (std::abs(x.col(i).norm() - y.col(i).norm()) > slack)
      throw Error(ErrorKind::kPreconditionViolated,
                  "norm mismatch at point " + std::to_string(i));
    for (Eigen::Index j = i + 1; j <= d; ++j)
      if (std::abs((x.col(i) - x.col(j)).norm() - (y.col(i) - y.col(j)).norm()) > slack)
        throw Error(ErrorKind::kPreconditionViolated,
                    "distance mismatch between points " + std::to_string(i) +
                        " and " + std::to_string(j));
  }
  if (!affinely_independent(x.transpose() * x))
    throw Error(ErrorKind::kDegenerate, "source points are not affinely independent");

  const Eigen::MatrixXd dx = x.rightCols(d).colwise() - x.col(0);
  const Eigen::MatrixXd dy = y.rightCols(d).colwise() - y.col(0);
  // U dx = dy  <=>  dx^T U^T = dy^T.
  const Eigen::MatrixXd u =
      dx.transpose().colPivHouseholderQr().solve(dy.transpose()).transpose();
  if ((u * x.col(0) - y.col(0)).norm() > slack)
    throw Error(ErrorKind::kPreconditionViolated,
                "base point is not carried onto its image");
  return linalg::polar_orthogonal(u);
}

/// max over all observed quantities of |predicted - observed| / (1 + observed).
/// Vertices with include[v] == 0 are skipped; an edge counts only when both
/// endpoints share the same frame label.
inline double consistency_residual(const SimpleGraph& graph,
                                   const MagnitudeObservation& obs,
                                   const VectorField& field,
                                   const std::vector<int>& frame) {
  double r = 0.0;
  for (int v = 0; v < graph.vertex_count(); ++v) {
    if (frame[v] < 0) continue;
    const double o = obs.vertex_norms[v];
    r = std::max(r, std::abs(field[v].norm() - o) / (1.0 + o));
  }
  for (const Edge& e : graph.edges()) {
    if (frame[e.u] < 0 || frame[e.u] != frame[e.v]) continue;
    const double o = obs.edge_norms.at(e);
    r = std::max(r, std::abs((field[e.u] - field[e.v]).norm() - o) / (1.0 + o));
  }
  return r;
}

/// Complete graph: the full Gram matrix is known and factored directly.
inline ReconstructionResult reconstruct_complete(
    const MagnitudeObservation& obs, const SimpleGraph& graph, int d,
    const ReconstructionOptions& options = {}) {
  if (!graph.is_complete())
    throw Error(ErrorKind::kInvalidArgument,
                "complete-graph reconstruction needs a complete graph");
  const PartialGram gram = polarize(obs, graph);
  std::vector<Vertex> all(static_cast<std::size_t>(graph.vertex_count()));
  for (int v = 0; v < graph.vertex_count(); ++v) all[v] = v;

  ReconstructionResult result;
  result.method = ReconstructionMethod::kCompleteGram;
  result.infeasible_edges = triangle_violations(obs, default_tolerance(obs));
  result.field = VectorField(embed_from_gram(gram.block(all), d, options.rank_tol));
  result.component_count = graph.vertex_count() > 0 ? 1 : 0;
  result.residual = consistency_residual(graph, obs, result.field,
                                         std::vector<int>(all.size(), 0));
  result.status = result.residual <= options.residual_tol
                      ? ReconstructionStatus::kOk
                      : ReconstructionStatus::kInconsistent;
  result.certified_unique = result.status == ReconstructionStatus::kOk;
  return result;
}

namespace detail {

/// BFS distances from start over the simplex adjacency (-1 = unreachable).
inline std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int start,
                                      std::vector<int>* parent = nullptr) {
  std::vector<int> dist(adj.size(), -1);
  if (parent) parent->assign(adj.size(), -1);
  std::deque<int> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int nb : adj[s]) {
      if (dist[nb] >= 0) continue;
      dist[nb] = dist[s] + 1;
      if (parent) (*parent)[nb] = s;
      queue.push_back(nb);
    }
  }
  return dist;
}

/// Midpoint of a double-sweep diameter path: roughly halves the propagation
/// depth compared with rooting at an end of the component.
inline int central_simplex(const std::vector<std::vector<int>>& adj, int start) {
  auto farthest = [](const std::vector<int>& dist) {
    int best = 0;
    for (std::size_t s = 0; s < dist.size(); ++s)
      if (dist[s] > dist[best]) best = static_cast<int>(s);
    return best;
  };
  const int a = farthest(bfs_distances(adj, start));
  std::vector<int> parent;
  const auto dist = bfs_distances(adj, a, &parent);
  int b = farthest(dist);
  for (int steps = dist[b] / 2; steps > 0; --steps) b = parent[b];
  return b;
}

/// Gauss-Newton on the squared magnitude equations of the vertices in
/// `local` (and the edges between them). Steps are minimum-norm, so the
/// orthogonal gauge is left alone; a step is kept only if it lowers the
/// largest equation residual.
inline bool refine_local(std::map<Vertex, Eigen::VectorXd>& local, const SimpleGraph& graph,
                         const MagnitudeObservation& obs, int d,
                         const ReconstructionOptions& options) {
  std::vector<Vertex> verts;
  std::map<Vertex, int> index;
  for (const auto& [v, x] : local) {
    index[v] = static_cast<int>(verts.size());
    verts.push_back(v);
  }
  std::vector<Edge> edges;
  for (const Edge& e : graph.edges())
    if (index.count(e.u) && index.count(e.v)) edges.push_back(e);
  const Eigen::Index rows = static_cast<Eigen::Index>(verts.size() + edges.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(verts.size()) * d;
  if (options.refine_iterations <= 0 ||
      static_cast<double>(rows) * static_cast<double>(cols) > options.refine_max_entries)
    return false;

  Eigen::VectorXd x(cols);
  for (std::size_t k = 0; k < verts.size(); ++k)
    x.segment(static_cast<Eigen::Index>(k) * d, d) = local.at(verts[k]);
  auto residual = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd r(rows);
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const double o = obs.vertex_norms[verts[k]];
      r(static_cast<Eigen::Index>(k)) =
          z.segment(static_cast<Eigen::Index>(k) * d, d).squaredNorm() - o * o;
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const double o = obs.edge_norms.at(edges[k]);
      const auto diff = z.segment(index.at(edges[k].u) * d, d) - z.segment(index.at(edges[k].v) * d, d);
      r(static_cast<Eigen::Index>(verts.size() + k)) = diff.squaredNorm() - o * o;
    }
    return r;
  };

  Eigen::VectorXd r = residual(x);
  double best = r.cwiseAbs().maxCoeff();
  for (int it = 0; it < options.refine_iterations && best > 0.0; ++it) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(rows, cols);
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const Eigen::Index c = static_cast<Eigen::Index>(k) * d;
      jac.block(static_cast<Eigen::Index>(k), c, 1, d) = 2.0 * x.segment(c, d).transpose();
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Eigen::Index cu = index.at(edges[k].u) * d, cv = index.at(edges[k].v) * d;
      const Eigen::RowVectorXd g = 2.0 * (x.segment(cu, d) - x.segment(cv, d)).transpose();
      const Eigen::Index row = static_cast<Eigen::Index>(verts.size() + k);
      jac.block(row, cu, 1, d) = g;
      jac.block(row, cv, 1, d) = -g;
    }
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
    const Eigen::VectorXd trial = x + step;
    const Eigen::VectorXd tr = residual(trial);
    const double worst = tr.cwiseAbs().maxCoeff();
    if (!(worst < best)) break;
    x = trial;
    r = tr;
    best = worst;
  }
  for (std::size_t k = 0; k < verts.size(); ++k)
    local[verts[k]] = x.segment(static_cast<Eigen::Index>(k) * d, d);
  return true;
}

}  // namespace detail

/// Propagation over the d-simplex graph. Each component is seeded by
/// embedding a central simplex, then walked breadth-first: a
/// neighbouring simplex adds one vertex k, found from the d linear equations
/// <x_k, x_i> = <f_k, f_i> over the shared (linearly independent) face.
inline ReconstructionResult reconstruct_propagate(
    const MagnitudeObservation& obs, const SimpleGraph& graph, int d,
    const ReconstructionOptions& options = {}) {
  const PartialGram gram = polarize(obs, graph);
  const SimplexGraph sg =
      build_simplex_graph(graph, obs, d, {options.pd_tol, options.threads});
  const UniquenessReport report = check_uniqueness_hypotheses(sg, graph);

  ReconstructionResult result;
  result.method = ReconstructionMethod::kSimplexPropagation;
  result.infeasible_edges = triangle_violations(obs, default_tolerance(obs));
  result.field = VectorField(d, graph.vertex_count());
  result.component_count = report.component_count;

  const int n = graph.vertex_count();
  std::vector<int> frame(static_cast<std::size_t>(n), -1);
  if (sg.simplices.empty()) {
    result.status = ReconstructionStatus::kNoSimplex;
    for (int v = 0; v < n; ++v) result.unreached.push_back(v);
    return result;
  }

  const auto adjacency = sg.adjacency();
  const auto labels = sg.component_labels();
  std::vector<char> visited(sg.simplices.size(), 0);
  double internal_residual = 0.0;

  for (std::size_t first = 0; first < sg.simplices.size(); ++first) {
    if (visited[first]) continue;
    const auto root =
        static_cast<std::size_t>(detail::central_simplex(adjacency, static_cast<int>(first)));
    const int frame_id = labels[root];
    std::map<Vertex, Eigen::VectorXd> local;
    double path_disagreement = 0.0;

    const Clique& seed = sg.simplices[root];
    const Eigen::MatrixXd coords = embed_from_gram(gram.block(seed), d, options.rank_tol);
    for (std::size_t t = 0; t < seed.size(); ++t) local[seed[t]] = coords.col(t);

    std::deque<std::size_t> queue{root};
    visited[root] = 1;
    while (!queue.empty() && result.status == ReconstructionStatus::kOk) {
      const std::size_t s = queue.front();
      queue.pop_front();
      const Clique& here = sg.simplices[s];
      for (int nb : adjacency[s]) {
        if (visited[nb]) continue;
        const Clique& there = sg.simplices[nb];
        Clique shared;
        std::set_intersection(here.begin(), here.end(), there.begin(), there.end(),
                              std::back_inserter(shared));
        Vertex fresh = -1;
        for (Vertex v : there)
          if (!std::binary_search(here.begin(), here.end(), v)) fresh = v;

        Eigen::MatrixXd basis(d, d);
        Eigen::VectorXd rhs(d);
        for (int r = 0; r < d; ++r) {
          basis.row(r) = local.at(shared[r]).transpose();
          rhs(r) = gram.at(fresh, shared[r]);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeFullU |
                                                         Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(d - 1) <= 0.0 || sv(0) / sv(d - 1) > options.max_condition) {
          result.status = ReconstructionStatus::kIllConditioned;
          break;
        }
        const Eigen::VectorXd x = svd.solve(rhs);
        if (auto it = local.find(fresh); it != local.end()) {
          const double o = obs.vertex_norms[fresh];
          path_disagreement = std::max(path_disagreement, (it->second - x).norm() / (1.0 + o));
        } else {
          local.emplace(fresh, x);
        }
        visited[nb] = 1;
        queue.push_back(static_cast<std::size_t>(nb));
      }
    }
    // A polished component is judged by its fit to the data alone; without
    // the polish, disagreement between paths reaching one vertex counts too.
    const bool refined = result.status == ReconstructionStatus::kOk &&
                         detail::refine_local(local, graph, obs, d, options);
    if (!refined) internal_residual = std::max(internal_residual, path_disagreement);
    for (const auto& [v, x] : local) {
      if (frame[v] >= 0) continue;  // first frame to reach a vertex keeps it
      frame[v] = frame_id;
      result.field[v] = x;
    }
    if (result.status != ReconstructionStatus::kOk) break;
  }

  for (int v = 0; v < n; ++v)
    if (frame[v] < 0) result.unreached.push_back(v);
  result.residual = std::max(internal_residual,
                             consistency_residual(graph, obs, result.field, frame));
  if (result.status == ReconstructionStatus::kOk && result.residual > options.residual_tol)
    result.status = ReconstructionStatus::kInconsistent;
  result.certified_unique =
      result.status == ReconstructionStatus::kOk && report.certified;
  return result;
}

}  // namespace magnilift

#endif  // MAGNILIFT_RECONSTRUCTION_HPP_
