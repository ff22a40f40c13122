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

#include <complex>

#include "magnilift/conjugate_certify.hpp"
#include "magnilift/linalg.hpp"

namespace magnilift {
namespace {

using cd = std::complex<double>;

Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r.size()),
                    static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

const Eigen::MatrixXd kI2 = rows({{1, 0}, {0, 1}});
const Eigen::MatrixXd kThree = rows({{1, 0}, {0, 1}, {1, 1}});

// x_f = x1 + x2 and the competitor x1 - x2 has the same magnitudes but a
// different real Gram form.
void expect_valid_decomposition(const Eigen::MatrixXd& a, const ComplexVector& xf,
                                const Verdict& v) {
  ASSERT_EQ(v.status, VerdictStatus::kNotConjugatePR);
  ASSERT_TRUE(v.decomposition);
  const auto& [x1, x2] = *v.decomposition;
  EXPECT_LT((x1 + x2 - xf).norm(), 1e-9);
  const ComplexVector xg = x1 - x2;
  const Eigen::MatrixXcd ac = a.cast<cd>();
  EXPECT_LT(((ac * xf).cwiseAbs() - (ac * xg).cwiseAbs()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_GT((real_gram(xf) - real_gram(xg)).norm(), 1e-6);
  const Eigen::MatrixXd x = x2.real() * x1.real().transpose() + x2.imag() * x1.imag().transpose();
  EXPECT_GT((x + x.transpose()).norm(), 1e-9);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    EXPECT_NEAR(a.row(i) * x * a.row(i).transpose(), 0.0, 1e-9);
}

TEST(QuadraticNullspace, Examples) {
  EXPECT_EQ(quadratic_nullspace(RealMeasurementMatrix(kI2)).size(), 1u);
  EXPECT_TRUE(quadratic_nullspace(RealMeasurementMatrix(kThree)).empty());
  EXPECT_TRUE(quadratic_nullspace(RealMeasurementMatrix(rows({{1}}))).empty());
}

TEST(QuadraticNullspace, ElementsAreAnnihilated) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const Eigen::MatrixXd a = rng.normal_matrix(n + 1, n);
    const auto basis = quadratic_nullspace(RealMeasurementMatrix(a));
    EXPECT_EQ(static_cast<int>(basis.size()), n * (n + 1) / 2 - (n + 1));
    for (const auto& s : basis) {
      EXPECT_LT((s - s.transpose()).norm(), 1e-12);
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        EXPECT_NEAR(a.row(i) * s * a.row(i).transpose(), 0.0, 1e-9);
    }
  }
}

TEST(RealMeasurementMatrix, RankDeficientThrows) {
  try {
    RealMeasurementMatrix(rows({{1, 2}, {2, 4}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRankDeficient);
  }
}

TEST(CertifyRangeSpace, IdentityIsNotRetrievable) {
  const Verdict v = certify_range_space(RealMeasurementMatrix(kI2));
  ASSERT_EQ(v.status, VerdictStatus::kNotConjugatePR);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(validate_witness(RealMeasurementMatrix(kI2), *v.witness, 1e-9));
  // The witness is a multiple of e1 e2^T up to an antisymmetric part.
  const Eigen::MatrixXd s = linalg::sym(*v.witness);
  EXPECT_NEAR(s(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(s(1, 1), 0.0, 1e-12);
  EXPECT_GT(std::abs(s(0, 1)), 1e-6);
}

TEST(CertifyRangeSpace, ThreeRowsAreRetrievable) {
  EXPECT_EQ(certify_range_space(RealMeasurementMatrix(kThree)).status,
            VerdictStatus::kConjugatePR);
  EXPECT_EQ(certify_range_space(RealMeasurementMatrix(rows({{2}}))).status,
            VerdictStatus::kConjugatePR);
}

TEST(CertifyRangeSpace, WitnessesAlwaysValidate) {
  SplitMix64 rng(2);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 4;
    const int m = n + static_cast<int>(rng.uniform_int(0, n));
    const RealMeasurementMatrix a(rng.normal_matrix(m, n));
    CertifyOptions opts;
    opts.seed = rng.next();
    opts.search_budget = 2000;
    const Verdict v = certify_range_space(a, opts);
    EXPECT_LE(v.samples_used, opts.search_budget);
    if (v.status != VerdictStatus::kNotConjugatePR) continue;
    ++checked;
    ASSERT_TRUE(v.witness);
    EXPECT_TRUE(validate_witness(a, *v.witness, 1e-9));
    EXPECT_LE(linalg::numeric_rank(*v.witness, 1e-10), 2);
  }
  EXPECT_GT(checked, 0);
}

TEST(CertifyRangeSpace, RetrievableImpliesComplementPropertyInThreeDimensions) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = static_cast<int>(rng.uniform_int(3, 8));
    Eigen::MatrixXd a = rng.normal_matrix(m, 3);
    // Force some rows into a common plane so both answers appear.
    const Eigen::Vector3d normal = rng.normal_vector(3).normalized();
    for (int r = 0; r < m; ++r)
      if (rng.uniform() < 0.6) a.row(r) -= a.row(r).dot(normal) * normal.transpose();
    if (linalg::numeric_rank(a, 1e-10) < 3) continue;
    const Verdict v = certify_range_space(RealMeasurementMatrix(a));
    ASSERT_NE(v.status, VerdictStatus::kInconclusive);
    // Failing the complement property yields real u + w, u - w with equal
    // magnitudes; the reverse implication does not hold in general.
    if (v.status == VerdictStatus::kConjugatePR) EXPECT_TRUE(complement_property(a)) << a;
    if (!complement_property(a)) EXPECT_EQ(v.status, VerdictStatus::kNotConjugatePR);
  }
}

TEST(CertifyRangeSpace, AppendingRowsNeverLosesRetrievability) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    Eigen::MatrixXd a = rng.normal_matrix(n, n);
    bool was_pr = false;
    for (int extra = 0; extra < 4; ++extra) {
      const bool pr = certify_range_space(RealMeasurementMatrix(a)).status ==
                      VerdictStatus::kConjugatePR;
      EXPECT_FALSE(was_pr && !pr);
      was_pr = pr;
      a.conservativeResize(a.rows() + 1, Eigen::NoChange);
      a.row(a.rows() - 1) = rng.normal_vector(n).transpose();
    }
  }
}

TEST(CertifyVector, ZeroVectorIsRetrievable) {
  EXPECT_EQ(certify_vector(RealMeasurementMatrix(kI2), ComplexVector::Zero(2)).status,
            VerdictStatus::kConjugatePR);
}

TEST(CertifyVector, IdentityWithMixedPhases) {
  ComplexVector xf(2);
  xf << cd(1, 0), cd(0, 1);
  expect_valid_decomposition(kI2, xf, certify_vector(RealMeasurementMatrix(kI2), xf));
}

TEST(CertifyVector, InheritsSpaceCertificate) {
  SplitMix64 rng(5);
  for (int k = 0; k < 5; ++k) {
    ComplexVector xf(2);
    xf << cd(rng.normal(), rng.normal()), cd(rng.normal(), rng.normal());
    EXPECT_EQ(certify_vector(RealMeasurementMatrix(kThree), xf).status,
              VerdictStatus::kConjugatePR);
  }
}

TEST(CertifyVector, RealVectorsAreSeparatedOnlyWhenTheyCan) {
  // A real x_f on I2 with both entries nonzero has the competitor (x0, -x1).
  ComplexVector xf(2);
  xf << cd(1, 0), cd(2, 0);
  expect_valid_decomposition(kI2, xf, certify_vector(RealMeasurementMatrix(kI2), xf));
  // Supported on one coordinate: every equal-magnitude vector is in its orbit.
  ComplexVector e(2);
  e << cd(0, 0), cd(3, 0);
  EXPECT_NE(certify_vector(RealMeasurementMatrix(kI2), e).status,
            VerdictStatus::kNotConjugatePR);
}

TEST(CertifyVector, DecompositionsAreValidOnRandomInputs) {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 3;
    const Eigen::MatrixXd a = rng.normal_matrix(n, n);
    ComplexVector xf(n);
    for (int k = 0; k < n; ++k) xf(k) = cd(rng.normal(), rng.normal());
    const Verdict v = certify_vector(RealMeasurementMatrix(a), xf);
    if (v.status == VerdictStatus::kNotConjugatePR) expect_valid_decomposition(a, xf, v);
  }
}

TEST(CertifyVector, LengthMismatchThrows) {
  EXPECT_THROW(certify_vector(RealMeasurementMatrix(kI2), ComplexVector::Zero(3)), Error);
}

TEST(ComplementProperty, Examples) {
  EXPECT_FALSE(complement_property(kI2));
  EXPECT_TRUE(complement_property(kThree));
  EXPECT_TRUE(complement_property(rows({{3}})));
}

TEST(SplitRankTwo, ReproducesSmallInertiaMatrices) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < std::min(n, 2); ++k) {
      const Eigen::VectorXd u = rng.normal_vector(n), w = rng.normal_vector(n);
      s += u * u.transpose() - (k < n - 1 ? 1.0 : 0.0) * w * w.transpose();
    }
    const auto in = linalg::inertia(s, 1e-12);
    ASSERT_LE(in.positive, 2);
    ASSERT_LE(in.negative, 2);
    const Eigen::MatrixXd x = split_rank_two(s);
    EXPECT_LT((linalg::sym(x) - s).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(linalg::numeric_rank(x, 1e-10), 2);
  }
}

}  // namespace
}  // namespace magnilift
