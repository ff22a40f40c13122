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

#include <gtest/gtest.h>

#include "magnilift/instance_gen.hpp"
#include "magnilift/io.hpp"
#include "magnilift/simplex_graph.hpp"

namespace magnilift {
namespace {

TEST(GenKind, NamesRoundTrip) {
  for (const auto& [kind, name] : kGenKindNames) {
    EXPECT_EQ(to_string(kind), name);
    EXPECT_EQ(parse_gen_kind(name), kind);
  }
  EXPECT_THROW(parse_gen_kind("Nope"), Error);
}

TEST(Circulant, FourCycleField) {
  const GraphInstance inst = circulant_counterexample(4);
  ASSERT_TRUE(inst.field && inst.alternate_field && inst.observation);
  const Eigen::MatrixXd expected =
      (Eigen::MatrixXd(2, 4) << 1, 0, 1, 0, 0, 1, 0, 1).finished();
  EXPECT_EQ(inst.field->values, expected);
  EXPECT_EQ(inst.graph.edges().size(), 4u);
  for (double v : inst.observation->vertex_norms) EXPECT_EQ(v, 1.0);
  for (const auto& [e, v] : inst.observation->edge_norms) EXPECT_EQ(v, std::sqrt(2.0));
}

TEST(Circulant, TwoRealizationsOfOneObservation) {
  for (int n = 4; n <= 12; n += 2) {
    const GraphInstance inst = circulant_counterexample(n);
    EXPECT_EQ(observe(inst.graph, *inst.alternate_field), *inst.observation);
    EXPECT_FALSE(orbit_equivalent(*inst.field, *inst.alternate_field, 1e-9));
  }
}

TEST(Circulant, RejectsOddOrSmall) {
  EXPECT_THROW(circulant_counterexample(5), Error);
  EXPECT_THROW(circulant_counterexample(2), Error);
}

TEST(GluedSimplices, ChainOfThreeIsAPath) {
  SplitMix64 rng(1);
  const GraphInstance inst = glued_simplices(rng, 2, 3);
  EXPECT_EQ(inst.graph.vertex_count(), 5);
  const SimplexGraph sg = build_simplex_graph(inst.graph, *inst.observation, 2);
  ASSERT_EQ(sg.simplices.size(), 3u);
  EXPECT_EQ(sg.edges, (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
  EXPECT_TRUE(check_uniqueness_hypotheses(sg, inst.graph).connected);
}

TEST(GluedSimplices, RejectsBadParameters) {
  SplitMix64 rng(2);
  EXPECT_THROW(glued_simplices(rng, 0, 3), Error);
  EXPECT_THROW(glued_simplices(rng, 2, 0), Error);
}

TEST(RandomRangeMatrix, ShapeAndPreconditions) {
  SplitMix64 rng(3);
  const Eigen::MatrixXd a = random_range_matrix(rng, 5, 3);
  EXPECT_EQ(a.rows(), 5);
  EXPECT_EQ(a.cols(), 3);
  EXPECT_THROW(random_range_matrix(rng, 2, 3), Error);
}

TEST(RandomSpline, ImPositionCountIsExact) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int length = 1 + trial % 9;
    const int im = trial % length;
    const ComplexCoeffSeq c = random_spline(rng, length, im);
    EXPECT_EQ(static_cast<int>(c.size()), length);
    const auto report = check_criterion(c);
    EXPECT_FALSE(report.support_gap);
    EXPECT_EQ(static_cast<int>(report.im_positions.size()), im);
  }
  EXPECT_THROW(random_spline(rng, 3, 3), Error);
  EXPECT_THROW(random_spline(rng, 0, 0), Error);
}

TEST(RandomAffineSystem, Shapes) {
  SplitMix64 rng(5);
  const AffineSystem sys = random_affine_system(rng, 3, 2, 4, 5);
  EXPECT_EQ(sys.p(), 3);
  EXPECT_EQ(sys.d(), 2);
  EXPECT_EQ(sys.refs_per_measurement(), 4);
  EXPECT_EQ(sys.measurements().size(), 5u);
  EXPECT_THROW(random_affine_system(rng, 0, 2, 1, 1), Error);
}

TEST(Generate, SameSpecSameBytes) {
  for (const auto& [kind, name] : kGenKindNames) {
    GenSpec spec;
    spec.kind = kind;
    spec.seed = 77;
    EXPECT_EQ(io::generate(spec).dump(), io::generate(spec).dump()) << name;
  }
}

TEST(Generate, SeedChangesRandomKinds) {
  GenSpec a, b;
  a.seed = 1;
  b.seed = 2;
  EXPECT_NE(io::generate(a).dump(), io::generate(b).dump());
}

TEST(Generate, RandomFieldMatchesDirectDraw) {
  GenSpec spec;
  spec.seed = 9;
  spec.n = 4;
  spec.d = 3;
  SplitMix64 rng(9);
  const VectorField expected = random_field(rng, 4, 3);
  const GraphInstance inst = io::instance_from_json(io::generate(spec));
  EXPECT_EQ(inst.field->values, expected.values);
  EXPECT_TRUE(inst.graph.is_complete());
}

}  // namespace
}  // namespace magnilift
