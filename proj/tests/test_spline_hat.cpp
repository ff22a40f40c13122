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

#include <cmath>
#include <complex>
#include <vector>

#include "magnilift/instance_gen.hpp"
#include "magnilift/spline_hat.hpp"

namespace magnilift {
namespace {

const cdouble kI(0.0, 1.0);

ErrorKind recover_error(const MagnitudeSamples& s, const RecoverOptions& opts = {}) {
  try {
    recover(s, opts);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "recover did not throw";
  return ErrorKind::kInvalidArgument;
}

double max_gap(const MagnitudeSamples& a, const MagnitudeSamples& b) {
  EXPECT_EQ(a.start, b.start);
  EXPECT_EQ(a.values.size(), b.values.size());
  double g = 0.0;
  for (std::size_t k = 0; k < std::min(a.values.size(), b.values.size()); ++k)
    g = std::max(g, std::abs(a.values[k] - b.values[k]));
  return g;
}

TEST(ComplexCoeffSeq, TrimsZerosAndKeepsOffset) {
  const ComplexCoeffSeq c(-2, {0.0, 0.0, 1.0, kI, 0.0});
  EXPECT_EQ(c.k_minus(), 0);
  EXPECT_EQ(c.k_plus(), 1);
  EXPECT_EQ(c(1), kI);
  EXPECT_EQ(c(5), cdouble{});
  EXPECT_TRUE(ComplexCoeffSeq(4, {0.0}).empty());
}

TEST(ComplexCoeffSeq, EvaluatesLinearInterpolant) {
  const ComplexCoeffSeq c(0, {1.0, 2.0});
  EXPECT_EQ(c.evaluate(0.0), 1.0);
  EXPECT_EQ(c.evaluate(0.5), 1.5);
  EXPECT_EQ(c.evaluate(-1.0), 0.0);
  EXPECT_EQ(c.evaluate(-0.5), 0.5);
  EXPECT_EQ(c.evaluate(2.0), 0.0);
}

TEST(CheckCriterion, Examples) {
  const auto a = check_criterion(ComplexCoeffSeq(0, {1.0, kI}));
  EXPECT_TRUE(a.retrievable);
  EXPECT_EQ(a.im_positions, (std::vector<int>{0}));
  const auto b = check_criterion(ComplexCoeffSeq(0, {1.0, 0.0, 1.0}));
  EXPECT_FALSE(b.retrievable);
  EXPECT_EQ(b.support_gap, 1);
  const auto c = check_criterion(ComplexCoeffSeq(0, {1.0, kI, 1.0}));
  EXPECT_FALSE(c.retrievable);
  EXPECT_EQ(c.im_positions, (std::vector<int>{0, 1}));
}

TEST(CheckCriterion, RealAndEmptySequencesPass) {
  EXPECT_TRUE(check_criterion(ComplexCoeffSeq(0, {1.0, -2.0, 3.0})).retrievable);
  EXPECT_TRUE(check_criterion(ComplexCoeffSeq()).retrievable);
}

TEST(ConjugateEquivalent, Examples) {
  const ComplexCoeffSeq c(0, {cdouble(1, 2), cdouble(-0.5, 1), cdouble(0.3, 0)});
  EXPECT_TRUE(conjugate_equivalent(c, c.scaled(kI)));
  EXPECT_TRUE(conjugate_equivalent(c, c.conj()));
  EXPECT_TRUE(conjugate_equivalent(c, c.conj().scaled(std::polar(1.0, 0.7))));
  EXPECT_FALSE(conjugate_equivalent(ComplexCoeffSeq(0, {1.0, kI}), ComplexCoeffSeq(0, {1.0, 2.0 * kI})));
  EXPECT_FALSE(conjugate_equivalent(ComplexCoeffSeq(0, {1.0, kI}), ComplexCoeffSeq(1, {1.0, kI})));
}

TEST(SampleMagnitudes, Examples) {
  const auto s = sample_magnitudes(ComplexCoeffSeq(0, {1.0, 2.0}));
  EXPECT_EQ(s.start, -1);
  ASSERT_EQ(s.values.size(), 7u);
  EXPECT_DOUBLE_EQ(s.values[2], 1.0);  // t = 0
  EXPECT_DOUBLE_EQ(s.values[3], 1.5);  // t = 1/2
  EXPECT_DOUBLE_EQ(s.values[4], 2.0);  // t = 1
  for (double v : sample_magnitudes(ComplexCoeffSeq()).values) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(sample_magnitudes(ComplexCoeffSeq(0, {1.0, kI})).values[3], std::sqrt(2.0) / 2, 1e-15);
}

TEST(Recover, RealPair) {
  const ComplexCoeffSeq c(0, {1.0, 2.0});
  const auto classes = recover(sample_magnitudes(c));
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_TRUE(conjugate_equivalent(c, classes[0], 1e-10));
}

TEST(Recover, ConjugatePairIsOneClass) {
  const ComplexCoeffSeq c(0, {1.0, kI});
  const auto classes = recover(sample_magnitudes(c));
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_TRUE(conjugate_equivalent(c, classes[0], 1e-10));
}

TEST(Recover, TwoImPositionsGiveTwoClasses) {
  const MagnitudeSamples s = sample_magnitudes(ComplexCoeffSeq(0, {1.0, kI, 1.0}));
  const auto classes = recover(s);
  ASSERT_EQ(classes.size(), 2u);
  const ComplexCoeffSeq other(0, {1.0, kI, -1.0});
  const bool first = conjugate_equivalent(classes[0], ComplexCoeffSeq(0, {1.0, kI, 1.0}), 1e-10);
  EXPECT_TRUE(first || conjugate_equivalent(classes[1], ComplexCoeffSeq(0, {1.0, kI, 1.0}), 1e-10));
  EXPECT_TRUE(conjugate_equivalent(classes[first ? 1 : 0], other, 1e-10));
  EXPECT_LT(max_gap(sample_magnitudes(other), s), 1e-15);
}

TEST(Recover, BruteForcePhaseGridFindsSameClassCount) {
  // Fix |c_k| and c_0 > 0; scan phases of c_1, c_2 on a grid and count the
  // distinct classes reproducing the samples of (1, i, 1).
  const MagnitudeSamples s = sample_magnitudes(ComplexCoeffSeq(0, {1.0, kI, 1.0}));
  std::vector<ComplexCoeffSeq> found;
  const int steps = 360;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b) {
      const ComplexCoeffSeq c(0, {1.0, std::polar(1.0, 2 * M_PI * a / steps),
                                  std::polar(1.0, 2 * M_PI * b / steps)});
      if (max_gap(sample_magnitudes(c), s) > 1e-9) continue;
      bool known = false;
      for (const auto& f : found) known = known || conjugate_equivalent(f, c, 1e-9);
      if (!known) found.push_back(c);
    }
  EXPECT_EQ(found.size(), recover(s).size());
}

TEST(Recover, NonzeroOffsetAndSingleCoefficient) {
  const ComplexCoeffSeq c(-3, {cdouble(0.5, -1), cdouble(2, 0.25), cdouble(-1, -0.125)});
  const auto classes = recover(sample_magnitudes(c));
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_TRUE(conjugate_equivalent(c, classes[0], 1e-9));
  const ComplexCoeffSeq one(2, {cdouble(0, -3)});
  const auto single = recover(sample_magnitudes(one));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_TRUE(conjugate_equivalent(one, single[0], 1e-12));
}

TEST(Recover, ZeroSamplesGiveZeroSequence) {
  const auto classes = recover(sample_magnitudes(ComplexCoeffSeq()));
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_TRUE(classes[0].empty());
}

TEST(Recover, Errors) {
  EXPECT_EQ(recover_error({0, {1.0, 1.0}}), ErrorKind::kWindowMismatch);
  EXPECT_EQ(recover_error({0, {0.0, 1.0, 1.0, 1.0}}), ErrorKind::kWindowMismatch);
  // Midpoint larger than both neighbours allow.
  EXPECT_EQ(recover_error({-1, {0.0, 0.5, 1.0, 5.0, 1.0, 0.5, 0.0}}),
            ErrorKind::kInconsistentSamples);
  EXPECT_EQ(recover_error(sample_magnitudes(ComplexCoeffSeq(0, {1.0, 0.0, 1.0}))),
            ErrorKind::kUnboundedAmbiguity);
  SplitMix64 rng(1);
  RecoverOptions opts;
  opts.max_branches = 3;
  EXPECT_EQ(recover_error(sample_magnitudes(random_spline(rng, 6, 4)), opts),
            ErrorKind::kTooManyBranches);
}

TEST(Recover, RoundTripWhenCriterionHolds) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int length = 1 + trial % 10;
    const ComplexCoeffSeq c = random_spline(rng, length, length > 1 ? trial % 2 : 0);
    ASSERT_TRUE(check_criterion(c).retrievable);
    const auto classes = recover(sample_magnitudes(c));
    ASSERT_EQ(classes.size(), 1u);
    EXPECT_TRUE(conjugate_equivalent(c, classes[0], 1e-8));
  }
}

TEST(Recover, BranchCountBounds) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + trial % 4;
    const ComplexCoeffSeq c = random_spline(rng, p + 1 + trial % 3, p);
    const MagnitudeSamples s = sample_magnitudes(c);
    const auto classes = recover(s);
    EXPECT_GE(classes.size(), 2u);
    EXPECT_LE(classes.size(), std::size_t{1} << (p - 1));
    bool contains_truth = false;
    for (const auto& rep : classes) {
      EXPECT_LT(max_gap(sample_magnitudes(rep), s), 1e-8);
      contains_truth = contains_truth || conjugate_equivalent(c, rep, 1e-8);
    }
    EXPECT_TRUE(contains_truth);
  }
}

TEST(CheckRealCriterion, Examples) {
  EXPECT_TRUE(check_real_criterion(std::vector<double>{1, -1, 2}));
  EXPECT_FALSE(check_real_criterion(std::vector<double>{1, 0, 1}));
  EXPECT_TRUE(check_real_criterion(std::vector<double>{0}));
  EXPECT_TRUE(check_real_criterion(std::vector<double>{0, 0, 3, 1, 0}));
}

TEST(CheckRealCriterion, RealCombinationsOfRetrievableSequences) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int length = 2 + trial % 8;
    const ComplexCoeffSeq c = random_spline(rng, length, trial % 2);
    for (int k = 0; k < 5; ++k) {
      const double a = rng.normal(), b = rng.normal();
      std::vector<double> d;
      for (cdouble z : c.coeffs()) d.push_back(a * z.real() + b * z.imag());
      EXPECT_TRUE(check_real_criterion(d));
    }
  }
}

}  // namespace
}  // namespace magnilift
