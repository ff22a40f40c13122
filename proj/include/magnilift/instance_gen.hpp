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

#ifndef MAGNILIFT_INSTANCE_GEN_HPP_
#define MAGNILIFT_INSTANCE_GEN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magnilift/affine.hpp"
#include "magnilift/error.hpp"
#include "magnilift/graph_model.hpp"
#include "magnilift/random.hpp"
#include "magnilift/spline_hat.hpp"

namespace magnilift {

enum class GenKind {
  kRandomField,
  kCirculantCounterexample,
  kGluedSimplices,
  kRandomRangeMatrix,
  kRandomSpline,
  kRandomAffineSystem,
};

inline constexpr std::pair<GenKind, std::string_view> kGenKindNames[] = {
    {GenKind::kRandomField, "RandomField"},
    {GenKind::kCirculantCounterexample, "CirculantCounterexample"},
    {GenKind::kGluedSimplices, "GluedSimplices"},
    {GenKind::kRandomRangeMatrix, "RandomRangeMatrix"},
    {GenKind::kRandomSpline, "RandomSpline"},
    {GenKind::kRandomAffineSystem, "RandomAffineSystem"},
};

inline std::string_view to_string(GenKind k) {
  for (const auto& [kind, name] : kGenKindNames)
    if (kind == k) return name;
  return "Unknown";
}

inline GenKind parse_gen_kind(std::string_view name) {
  for (const auto& [kind, n] : kGenKindNames)
    if (n == name) return kind;
  throw Error(ErrorKind::kInvalidArgument, "unknown instance kind '" + std::string(name) + "'");
}

/// Generation request; unused parameters are ignored by a kind.
struct GenSpec {
  GenKind kind = GenKind::kRandomField;
  std::uint64_t seed = kDefaultSeed;
  int n = 6;             // vertices / columns / coefficient dimension
  int d = 2;             // vector dimension
  int m = 8;             // rows of a range matrix
  int length = 3;        // simplices in a chain, coefficients in a spline
  int refs = 2;          // reference vectors per measurement
  int count = 3;         // measurements in an affine system
  int im_positions = 1;  // nonzero-Im cross terms in a random spline
};

struct GraphInstance {
  SimpleGraph graph;
  int dim = 0;
  std::optional<VectorField> field;
  std::optional<VectorField> alternate_field;
  std::optional<MagnitudeObservation> observation;
};

/// i.i.d. standard normal coordinates; column-major draw order.
inline VectorField random_field(SplitMix64& rng, int n, int d) {
  return VectorField(rng.normal_matrix(d, n));
}

/// Cycle C_n (n even) with h_i = (1,0) for even i and (0,1) for odd i, and
/// the sign-flipped field (-1)^floor(i/2) h_i. Both have unit magnitudes and
/// relative magnitudes sqrt(2) on every edge, but <h_0, h_2> differs.
inline GraphInstance circulant_counterexample(int n) {
  if (n < 4 || n % 2 != 0)
    throw Error(ErrorKind::kInvalidArgument, "circulant counterexample needs even n >= 4");
  GraphInstance inst;
  inst.graph = SimpleGraph::cycle(n);
  inst.dim = 2;
  VectorField h(2, n), alt(2, n);
  for (int i = 0; i < n; ++i) {
    h[i] = i % 2 == 0 ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
    alt[i] = ((i / 2) % 2 == 0 ? 1.0 : -1.0) * h[i];
  }
  inst.observation = observe(inst.graph, h);
  inst.field = std::move(h);
  inst.alternate_field = std::move(alt);
  return inst;
}

/// Band graph whose (d+1)-cliques {s, ..., s+d}, s = 0..length-1, form a
/// path in the simplex graph; vectors are Gaussian.
inline GraphInstance glued_simplices(SplitMix64& rng, int d, int length) {
  if (d < 1 || length < 1)
    throw Error(ErrorKind::kInvalidArgument, "glued simplices need d >= 1 and length >= 1");
  const int n = d + length;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j <= std::min(n - 1, i + d); ++j) edges.emplace_back(i, j);
  GraphInstance inst;
  inst.graph = SimpleGraph(n, std::move(edges));
  inst.dim = d;
  inst.field = random_field(rng, n, d);
  inst.observation = observe(inst.graph, *inst.field);
  return inst;
}

inline GraphInstance random_complete_instance(SplitMix64& rng, int n, int d) {
  GraphInstance inst;
  inst.graph = SimpleGraph::complete(n);
  inst.dim = d;
  inst.field = random_field(rng, n, d);
  inst.observation = observe(inst.graph, *inst.field);
  return inst;
}

inline Eigen::MatrixXd random_range_matrix(SplitMix64& rng, int m, int n) {
  if (m < n || n < 1)
    throw Error(ErrorKind::kInvalidArgument, "range matrix needs m >= n >= 1");
  return rng.normal_matrix(m, n);
}

/// Nonzero coefficients with magnitudes in [0.5, 1.5]. Adjacent phases
/// differ by 0 or pi except at `im_positions` distinct places, where they
/// jump by an angle in +-[0.3, pi - 0.3].
inline ComplexCoeffSeq random_spline(SplitMix64& rng, int length, int im_positions) {
  if (length < 1) throw Error(ErrorKind::kInvalidArgument, "spline length must be >= 1");
  if (im_positions < 0 || im_positions > length - 1)
    throw Error(ErrorKind::kInvalidArgument, "im_positions must lie in [0, length - 1]");
  std::vector<int> slots(static_cast<std::size_t>(length - 1));
  for (int k = 0; k < length - 1; ++k) slots[k] = k;
  // Partial Fisher-Yates: the first im_positions slots are the jumps.
  for (int k = 0; k < im_positions; ++k) {
    const auto pick = rng.uniform_int(k, length - 2);
    std::swap(slots[k], slots[static_cast<std::size_t>(pick)]);
  }
  std::vector<char> jump(static_cast<std::size_t>(std::max(0, length - 1)), 0);
  for (int k = 0; k < im_positions; ++k) jump[slots[k]] = 1;

  std::vector<cdouble> c(static_cast<std::size_t>(length));
  double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < length; ++k) {
    if (k > 0) {
      if (jump[k - 1]) {
        const double step = rng.uniform(0.3, std::numbers::pi - 0.3);
        phase += rng.uniform() < 0.5 ? step : -step;
      } else if (rng.uniform() < 0.5) {
        phase += std::numbers::pi;
      }
    }
    c[k] = std::polar(rng.uniform(0.5, 1.5), phase);
  }
  return {0, std::move(c)};
}

inline AffineSystem random_affine_system(SplitMix64& rng, int p, int d, int refs, int count) {
  if (p < 1 || d < 1 || refs < 1 || count < 1)
    throw Error(ErrorKind::kInvalidArgument, "affine system parameters must be positive");
  std::vector<AffineMeasurement> ms;
  for (int k = 0; k < count; ++k) {
    AffineMeasurement m;
    m.phi = rng.normal_matrix(d, p);
    for (int i = 0; i < refs; ++i) m.refs.push_back(rng.normal_vector(d));
    ms.push_back(std::move(m));
  }
  return AffineSystem(p, std::move(ms));
}

}  // namespace magnilift

#endif  // MAGNILIFT_INSTANCE_GEN_HPP_
