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

#ifndef MAGNILIFT_SIMPLEX_GRAPH_HPP_
#define MAGNILIFT_SIMPLEX_GRAPH_HPP_

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include "magnilift/error.hpp"
#include "magnilift/graph_model.hpp"
#include "magnilift/gram.hpp"

namespace magnilift {

using Clique = std::vector<Vertex>;

namespace detail {

inline void extend_cliques(const SimpleGraph& graph, std::size_t k,
                           Clique& current, const std::vector<Vertex>& candidates,
                           std::vector<Clique>& out) {
  if (current.size() == k) {
    out.push_back(current);
    return;
  }
  if (current.size() + candidates.size() < k) return;
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    const Vertex v = candidates[idx];
    std::vector<Vertex> next;
    const auto& nb = graph.neighbors(v);
    // Candidates are sorted; keep the ones after v that are adjacent to v.
    std::set_intersection(candidates.begin() + static_cast<std::ptrdiff_t>(idx) + 1,
                          candidates.end(), nb.begin(), nb.end(),
                          std::back_inserter(next));
    current.push_back(v);
    extend_cliques(graph, k, current, next, out);
    current.pop_back();
  }
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// All vertex subsets of size k that induce complete subgraphs, in
/// lexicographic order. Each clique is grown by ordered extension over
/// higher-numbered common neighbours, so every clique is produced once.
/// Cost is O(n * Delta^(k-1)) in the worst case.
inline std::vector<Clique> enumerate_cliques(const SimpleGraph& graph, int k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "clique size must be >= 1");
  std::vector<Clique> out;
  std::vector<Vertex> all(static_cast<std::size_t>(graph.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  Clique current;
  detail::extend_cliques(graph, static_cast<std::size_t>(k), current, all, out);
  return out;
}

/// The d-simplex graph: nodes are (d+1)-cliques with affinely independent
/// vectors, edges join nodes sharing d vertices whose vectors are linearly
/// independent.
struct SimplexGraph {
  int dim = 0;
  std::vector<Clique> simplices;
  std::vector<std::pair<int, int>> edges;

  /// Component label (smallest simplex index in the component) per simplex.
  std::vector<int> component_labels() const {
    detail::UnionFind uf(simplices.size());
    for (const auto& [a, b] : edges)
      uf.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    std::vector<int> labels(simplices.size());
    for (std::size_t s = 0; s < simplices.size(); ++s)
      labels[s] = static_cast<int>(uf.find(s));
    return labels;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(simplices.size());
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
  }
};

struct SimplexGraphOptions {
  double pd_tol = kDefaultPdTolerance;
  unsigned threads = 1;
};

/// Builds the d-simplex graph from magnitude data alone (polarized Gram
/// blocks). With threads > 1 the nondegeneracy tests are split across
/// workers; the output does not depend on the thread count.
inline SimplexGraph build_simplex_graph(const SimpleGraph& graph,
                                        const MagnitudeObservation& obs, int d,
                                        const SimplexGraphOptions& options = {}) {
  if (d < 1) throw Error(ErrorKind::kInvalidArgument, "simplex dimension d must be >= 1");
  const PartialGram gram = polarize(obs, graph);
  const std::vector<Clique> cliques = enumerate_cliques(graph, d + 1);

  std::vector<char> keep(cliques.size(), 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c)
      keep[c] = affinely_independent(gram.block(cliques[c]), options.pd_tol) ? 1 : 0;
  };
  const std::size_t workers =
      std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, cliques.size()));
  if (workers <= 1) {
    work(0, cliques.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (cliques.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(cliques.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  SimplexGraph sg;
  sg.dim = d;
  for (std::size_t c = 0; c < cliques.size(); ++c)
    if (keep[c]) sg.simplices.push_back(cliques[c]);

  std::map<Clique, std::vector<int>> faces;
  for (std::size_t s = 0; s < sg.simplices.size(); ++s) {
    const Clique& simplex = sg.simplices[s];
    for (std::size_t drop = 0; drop < simplex.size(); ++drop) {
      Clique face;
      face.reserve(simplex.size() - 1);
      for (std::size_t t = 0; t < simplex.size(); ++t)
        if (t != drop) face.push_back(simplex[t]);
      faces[face].push_back(static_cast<int>(s));
    }
  }
  for (const auto& [face, owners] : faces) {
    if (owners.size() < 2) continue;
    if (!linearly_independent(gram.block(face), options.pd_tol)) continue;
    for (std::size_t a = 0; a < owners.size(); ++a)
      for (std::size_t b = a + 1; b < owners.size(); ++b)
        sg.edges.emplace_back(owners[a], owners[b]);
  }
  std::sort(sg.edges.begin(), sg.edges.end());
  sg.edges.erase(std::unique(sg.edges.begin(), sg.edges.end()), sg.edges.end());
  return sg;
}

/// Sufficient conditions for uniqueness up to an orthogonal matrix: the
/// simplex graph is connected and every vertex lies in some simplex.
struct UniquenessReport {
  bool connected = false;
  std::vector<Vertex> uncovered_vertices;
  int component_count = 0;
  bool certified = false;
};

inline UniquenessReport check_uniqueness_hypotheses(const SimplexGraph& sg,
                                                    const SimpleGraph& graph) {
  UniquenessReport report;
  std::vector<char> covered(static_cast<std::size_t>(graph.vertex_count()), 0);
  for (const Clique& s : sg.simplices)
    for (Vertex v : s) {
      if (v < 0 || v >= graph.vertex_count())
        throw Error(ErrorKind::kInvalidArgument, "simplex vertex outside the graph");
      covered[v] = 1;
    }
  for (int v = 0; v < graph.vertex_count(); ++v)
    if (!covered[v]) report.uncovered_vertices.push_back(v);

  const std::vector<int> labels = sg.component_labels();
  std::vector<int> roots(labels);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  report.component_count = static_cast<int>(roots.size());
  report.connected = report.component_count == 1;
  report.certified = report.connected && report.uncovered_vertices.empty();
  return report;
}

}  // namespace magnilift

#endif  // MAGNILIFT_SIMPLEX_GRAPH_HPP_
