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

#ifndef MAGNILIFT_LINALG_HPP_
#define MAGNILIFT_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "magnilift/random.hpp"

namespace magnilift::linalg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd sym(const MatrixXd& x) { return 0.5 * (x + x.transpose()); }

/// Nearest orthogonal matrix in Frobenius norm (orthogonal polar factor).
inline MatrixXd polar_orthogonal(const MatrixXd& m) {
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Number of singular values above rel_tol * sigma_max.
inline Index numeric_rank(const MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cut = rel_tol * s(0);
  return static_cast<Index>((s.array() > cut).count());
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign convention R_ii > 0).
inline MatrixXd random_orthogonal(SplitMix64& rng, Index d) {
  const MatrixXd g = rng.normal_matrix(d, d);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, d);
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < d; ++k)
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  return q;
}

/// Extends the orthonormal columns of q (d x r) to an orthonormal basis of
/// R^d. The first r columns of the result equal q up to sign.
inline MatrixXd complete_basis(const MatrixXd& q, Index d) {
  MatrixXd stacked(d, q.cols() + d);
  stacked << q, MatrixXd::Identity(d, d);
  Eigen::HouseholderQR<MatrixXd> qr(stacked);
  MatrixXd full = qr.householderQ() * MatrixXd::Identity(d, d);
  for (Index k = 0; k < q.cols(); ++k)
    if (full.col(k).dot(q.col(k)) < 0.0) full.col(k) = -full.col(k);
  return full;
}

struct Inertia {
  Index positive = 0;
  Index negative = 0;
  Index zero = 0;
};

/// Eigenvalue sign counts of a symmetric matrix; |lambda| <= rel_tol * max|lambda|
/// counts as zero.
inline Inertia inertia(const MatrixXd& s, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
  const VectorXd& ev = es.eigenvalues();
  const double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  Inertia out;
  for (Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > rel_tol * scale && scale > 0.0)
      ++out.positive;
    else if (ev(k) < -rel_tol * scale && scale > 0.0)
      ++out.negative;
    else
      ++out.zero;
  }
  return out;
}

/// Orthonormal basis for the null space of m, from the right singular
/// vectors whose singular values fall at or below rel_tol * sigma_max.
inline MatrixXd null_space(const MatrixXd& m, double rel_tol) {
  const Index cols = m.cols();
  if (m.rows() == 0) return MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullV);
  const VectorXd& s = svd.singularValues();
  const double cut = s.size() && s(0) > 0.0 ? rel_tol * s(0) : 0.0;
  Index rank = 0;
  for (Index k = 0; k < s.size(); ++k)
    if (s(k) > cut && s(0) > 0.0) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

}  // namespace magnilift::linalg

#endif  // MAGNILIFT_LINALG_HPP_
