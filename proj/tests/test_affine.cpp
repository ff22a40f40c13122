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

#include "magnilift/affine.hpp"
#include "magnilift/instance_gen.hpp"

namespace magnilift {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

Eigen::MatrixXd scalar(std::initializer_list<double> row) { return vec(row).transpose(); }

// Two identity measurements on R^2 whose reference differences are e1 and e2.
AffineSystem identity_system() {
  return AffineSystem(2, {{Eigen::Matrix2d::Identity(), {vec({1, 0}), vec({0, 0})}},
                          {Eigen::Matrix2d::Identity(), {vec({0, 1}), vec({0, 0})}}});
}

TEST(AffineSystem, ValidatesShapes) {
  EXPECT_THROW(AffineSystem(0, {{scalar({1}), {vec({0})}}}), Error);
  EXPECT_THROW(AffineSystem(1, {}), Error);
  EXPECT_THROW(AffineSystem(2, {{scalar({1}), {vec({0})}}}), Error);
  EXPECT_THROW(AffineSystem(1, {{scalar({1}), {vec({0}), vec({0, 1})}}}), Error);
  EXPECT_THROW(AffineSystem(1, {{scalar({1}), {vec({0})}}, {scalar({1}), {vec({0}), vec({1})}}}),
               Error);
}

TEST(AffineSystem, Magnitudes) {
  const AffineSystem sys(1, {{scalar({2}), {vec({1}), vec({-3})}}});
  EXPECT_EQ(sys.magnitudes(vec({1})), vec({3, 1}));
}

TEST(BuildT, ScalarPair) {
  const AffineSystem sys(1, {{scalar({1}), {vec({0}), vec({1})}}});
  EXPECT_EQ(build_T(sys), scalar({-1}));
  EXPECT_TRUE(injective_T(sys));
}

TEST(BuildT, EqualReferencesGiveZero) {
  const AffineSystem sys(2, {{Eigen::Matrix2d::Identity(), {vec({1, 2}), vec({1, 2})}}});
  EXPECT_TRUE(build_T(sys).isZero());
  EXPECT_FALSE(injective_T(sys));
}

TEST(BuildT, IdentitySystemHasRankTwo) {
  EXPECT_TRUE(injective_T(identity_system()));
  EXPECT_THROW(build_T(AffineSystem(1, {{scalar({1}), {vec({0})}}})), Error);
}

TEST(BuildTu, ZeroShiftUsesReferenceRows) {
  const AffineSystem sys = identity_system();
  const Eigen::MatrixXd t = build_Tu(sys, vec({0, 0}));
  EXPECT_EQ(t.row(0), vec({1, 0}).transpose());
  EXPECT_EQ(t.row(2), vec({0, 1}).transpose());
  EXPECT_TRUE(injective_Tu(sys, vec({0, 0})));
}

TEST(BuildTu, AnnihilatedScalar) {
  const double u = 0.75;
  const AffineSystem sys(1, {{scalar({1}), {vec({-u})}}});
  EXPECT_TRUE(build_Tu(sys, vec({u})).isZero());
  EXPECT_FALSE(injective_Tu(sys, vec({u})));
  EXPECT_THROW(build_Tu(sys, vec({1, 2})), Error);
}

TEST(BuildTu, IdentitySystemInjectiveEverywhere) {
  SplitMix64 rng(1);
  for (int k = 0; k < 200; ++k) EXPECT_TRUE(injective_Tu(identity_system(), rng.normal_vector(2)));
}

TEST(CheckAffine, SpanningDifferencesCertifiedYes) {
  const AffineReport r = check_affine_pr(identity_system());
  EXPECT_EQ(r.verdict, AffineVerdict::kCertifiedYes);
  EXPECT_FALSE(r.counterexample);
}

TEST(CheckAffine, SingleReferenceScalarIsFalsified) {
  const AffineSystem sys(1, {{scalar({1}), {vec({5})}}});
  const AffineReport r = check_affine_pr(sys);
  ASSERT_EQ(r.verdict, AffineVerdict::kCertifiedNo);
  ASSERT_TRUE(r.counterexample);
  const auto& [f, g] = *r.counterexample;
  EXPECT_NEAR(f(0) + g(0), -10.0, 1e-12);
  EXPECT_NE(f(0), g(0));
  EXPECT_NEAR(std::abs(f(0) + 5), std::abs(g(0) + 5), 1e-12);
  EXPECT_TRUE(validate_counterexample(sys, f, g, 1e-10));
}

TEST(CheckAffine, ScalarWithSharedReferencesOutsideF) {
  // The first measurement has equal references; the others separate e1, e2.
  const AffineSystem sys(2, {{scalar({1, 1}), {vec({3}), vec({3})}},
                             {scalar({1, 0}), {vec({0}), vec({1})}},
                             {scalar({0, 1}), {vec({0}), vec({2})}}});
  EXPECT_EQ(check_affine_pr(sys).verdict, AffineVerdict::kCertifiedYes);
}

TEST(CheckAffine, RankDeficientPhiIsFalsified) {
  // Phi ignores the second coordinate, so f and f + t e2 always collide.
  const AffineSystem sys(2, {{scalar({1, 0}), {vec({0}), vec({1})}},
                             {scalar({2, 0}), {vec({1}), vec({-1})}}});
  const AffineReport r = check_affine_pr(sys);
  ASSERT_EQ(r.verdict, AffineVerdict::kCertifiedNo);
  const auto& [f, g] = *r.counterexample;
  EXPECT_TRUE(validate_counterexample(sys, f, g, 1e-10));
}

TEST(ValidateCounterexample, RejectsEqualOrMismatched) {
  const AffineSystem sys(1, {{scalar({1}), {vec({5})}}});
  EXPECT_FALSE(validate_counterexample(sys, vec({1}), vec({1}), 1e-10));
  EXPECT_FALSE(validate_counterexample(sys, vec({1}), vec({2}), 1e-10));
  EXPECT_TRUE(validate_counterexample(sys, vec({-4}), vec({-6}), 1e-10));
}

TEST(CheckAffine, RandomVerdictsAreConsistent) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 3, d = 1 + trial % 2;
    const int refs = 1 + trial % 3, count = 1 + (trial / 3) % 4;
    const AffineSystem sys = random_affine_system(rng, p, d, refs, count);
    AffineCheckOptions opts;
    opts.seed = rng.next();
    opts.falsify_budget = 16;
    const AffineReport r = check_affine_pr(sys, opts);
    EXPECT_LE(r.restarts_used, opts.falsify_budget);
    if (r.verdict == AffineVerdict::kCertifiedNo) {
      ASSERT_TRUE(r.counterexample);
      EXPECT_TRUE(validate_counterexample(sys, r.counterexample->first,
                                          r.counterexample->second, 1e-10));
      if (refs >= 2) {
        EXPECT_FALSE(injective_T(sys));
      }
    }
  }
}

TEST(CheckAffine, DeterministicForFixedSeed) {
  SplitMix64 rng(3);
  const AffineSystem sys = random_affine_system(rng, 3, 2, 1, 2);
  const AffineReport a = check_affine_pr(sys), b = check_affine_pr(sys);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.restarts_used, b.restarts_used);
  if (a.counterexample) {
    EXPECT_EQ(a.counterexample->first, b.counterexample->first);
  }
}

}  // namespace
}  // namespace magnilift
