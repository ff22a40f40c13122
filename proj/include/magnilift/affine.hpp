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

#ifndef MAGNILIFT_AFFINE_HPP_
#define MAGNILIFT_AFFINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magnilift/error.hpp"
#include "magnilift/linalg.hpp"
#include "magnilift/random.hpp"

namespace magnilift {

/// One linear measurement phi: R^p -> R^d with its reference vectors
/// b_{phi,1..N}.
struct AffineMeasurement {
  Eigen::MatrixXd phi;                  // d x p
  std::vector<Eigen::VectorXd> refs;    // N vectors in R^d
};

/// Affine measurements |phi(f) + b_{phi,i}| of coefficient vectors f in R^p.
class AffineSystem {
 public:
  AffineSystem(int p, std::vector<AffineMeasurement> measurements)
      : p_(p), measurements_(std::move(measurements)) {
    if (p < 1) throw Error(ErrorKind::kInvalidArgument, "coefficient dimension p must be >= 1");
    if (measurements_.empty())
      throw Error(ErrorKind::kInvalidArgument, "system has no measurements");
    d_ = static_cast<int>(measurements_.front().phi.rows());
    n_refs_ = static_cast<int>(measurements_.front().refs.size());
    if (d_ < 1) throw Error(ErrorKind::kInvalidArgument, "measurement dimension must be >= 1");
    if (n_refs_ < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one reference vector");
    for (std::size_t k = 0; k < measurements_.size(); ++k) {
      const auto& m = measurements_[k];
      if (m.phi.rows() != d_ || m.phi.cols() != p_)
        throw Error(ErrorKind::kDimensionMismatch,
                    "measurement " + std::to_string(k) + " is not " + std::to_string(d_) +
                        "x" + std::to_string(p_));
      if (static_cast<int>(m.refs.size()) != n_refs_)
        throw Error(ErrorKind::kDimensionMismatch,
                    "measurement " + std::to_string(k) + " has a different reference count");
      for (const auto& b : m.refs)
        if (b.size() != d_)
          throw Error(ErrorKind::kDimensionMismatch,
                      "reference vector of measurement " + std::to_string(k) +
                          " has wrong length");
    }
  }

  int p() const noexcept { return p_; }
  int d() const noexcept { return d_; }
  int refs_per_measurement() const noexcept { return n_refs_; }
  const std::vector<AffineMeasurement>& measurements() const noexcept { return measurements_; }

  /// Stacked phi matrices (T_Phi).
  Eigen::MatrixXd stacked() const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(measurements_.size()) * d_, p_);
    for (std::size_t k = 0; k < measurements_.size(); ++k)
      out.middleRows(static_cast<Eigen::Index>(k) * d_, d_) = measurements_[k].phi;
    return out;
  }

  /// All magnitudes ||phi(f) + b_{phi,i}||, measurement-major.
  Eigen::VectorXd magnitudes(const Eigen::VectorXd& f) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(measurements_.size()) * n_refs_);
    Eigen::Index r = 0;
    for (const auto& m : measurements_) {
      const Eigen::VectorXd pf = m.phi * f;
      for (const auto& b : m.refs) out(r++) = (pf + b).norm();
    }
    return out;
  }

 private:
  int p_ = 0;
  int d_ = 0;
  int n_refs_ = 0;
  std::vector<AffineMeasurement> measurements_;
};

inline constexpr double kDefaultAffineTol = 1e-10;

namespace detail {

inline bool full_column_rank(const Eigen::MatrixXd& m, int p, double tol) {
  return m.rows() >= p && linalg::numeric_rank(m, tol) == p;
}

}  // namespace detail

/// Rows (b_{phi,i} - b_{phi,j})^T Phi over all phi and i < j.
inline Eigen::MatrixXd build_T(const AffineSystem& sys) {
  const int n = sys.refs_per_measurement();
  if (n < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "the difference map needs at least two reference vectors per measurement");
  const Eigen::Index rows =
      static_cast<Eigen::Index>(sys.measurements().size()) * n * (n - 1) / 2;
  Eigen::MatrixXd t(rows, sys.p());
  Eigen::Index r = 0;
  for (const auto& m : sys.measurements())
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        t.row(r++) = (m.refs[i] - m.refs[j]).transpose() * m.phi;
  return t;
}

inline bool injective_T(const AffineSystem& sys, double tol = kDefaultAffineTol) {
  return detail::full_column_rank(build_T(sys), sys.p(), tol);
}

/// Rows (Phi u + b_{phi,i})^T Phi over all phi and i.
inline Eigen::MatrixXd build_Tu(const AffineSystem& sys, const Eigen::VectorXd& u) {
  if (u.size() != sys.p())
    throw Error(ErrorKind::kDimensionMismatch,
                "u has length " + std::to_string(u.size()) + ", expected " +
                    std::to_string(sys.p()));
  const int n = sys.refs_per_measurement();
  Eigen::MatrixXd t(static_cast<Eigen::Index>(sys.measurements().size()) * n, sys.p());
  Eigen::Index r = 0;
  for (const auto& m : sys.measurements()) {
    const Eigen::VectorXd pu = m.phi * u;
    for (const auto& b : m.refs) t.row(r++) = (pu + b).transpose() * m.phi;
  }
  return t;
}

inline bool injective_Tu(const AffineSystem& sys, const Eigen::VectorXd& u,
                         double tol = kDefaultAffineTol) {
  return detail::full_column_rank(build_Tu(sys, u), sys.p(), tol);
}

enum class AffineVerdict { kCertifiedYes, kCertifiedNo, kInconclusive };

inline std::string_view to_string(AffineVerdict v) {
  switch (v) {
    case AffineVerdict::kCertifiedYes: return "CERTIFIED_YES";
    case AffineVerdict::kCertifiedNo: return "CERTIFIED_NO";
    case AffineVerdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

struct AffineReport {
  AffineVerdict verdict = AffineVerdict::kInconclusive;
  std::string reason;
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> counterexample;  // (f, g)
  std::optional<Eigen::VectorXd> singular_u;
  std::int64_t restarts_used = 0;
};

struct AffineCheckOptions {
  double tol = kDefaultAffineTol;
  double match_tol = 1e-10;           // counterexample magnitudes must agree this well
  std::int64_t falsify_budget = 64;   // local-descent restarts
  std::uint64_t seed = kDefaultSeed;
};

/// Verifies that f != g and all affine magnitudes agree within match_tol.
inline bool validate_counterexample(const AffineSystem& sys, const Eigen::VectorXd& f,
                                    const Eigen::VectorXd& g, double match_tol) {
  if ((f - g).norm() <= match_tol * (1.0 + f.norm())) return false;
  return (sys.magnitudes(f) - sys.magnitudes(g)).cwiseAbs().maxCoeff() <= match_tol;
}

namespace detail {

/// Alternating minimization of ||T_u v|| over (u, v), ||v|| = 1. With v
/// fixed the residual is affine in u, so u is a least-squares solve; with u
/// fixed v is the smallest right singular vector of T_u.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> descend_singular(
    const AffineSystem& sys, Eigen::VectorXd u, int sweeps) {
  const int p = sys.p();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  for (int it = 0; it < sweeps; ++it) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(build_Tu(sys, u), Eigen::ComputeFullV);
    v = svd.matrixV().col(p - 1);
    // (T_u v)_{phi,i} = (Phi v)^T Phi u + (Phi v)^T b_i.
    const int n = sys.refs_per_measurement();
    Eigen::MatrixXd lhs(static_cast<Eigen::Index>(sys.measurements().size()) * n, p);
    Eigen::VectorXd rhs(lhs.rows());
    Eigen::Index r = 0;
    for (const auto& m : sys.measurements()) {
      const Eigen::VectorXd pv = m.phi * v;
      for (const auto& b : m.refs) {
        lhs.row(r) = pv.transpose() * m.phi;
        rhs(r++) = -pv.dot(b);
      }
    }
    const Eigen::VectorXd next = lhs.completeOrthogonalDecomposition().solve(rhs);
    if ((next - u).norm() <= 1e-15 * (1.0 + u.norm())) {
      u = next;
      break;
    }
    u = next;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(build_Tu(sys, u), Eigen::ComputeFullV);
  return {u, svd.matrixV().col(p - 1)};
}

}  // namespace detail

/// Affine phase retrieval of the whole coefficient space.
///
/// YES only from a sufficient condition: injective difference map T; the
/// spanning-differences condition with injective T_Phi; or, for scalar
/// measurements, injectivity of T_Phi restricted to the measurements whose
/// references are not all equal. NO only with a verified pair f = u + v/2,
/// g = u - v/2 built from a null vector v of some T_u. Otherwise INCONCLUSIVE.
inline AffineReport check_affine_pr(const AffineSystem& sys,
                                    const AffineCheckOptions& options = {}) {
  AffineReport report;
  const int p = sys.p();
  const int n = sys.refs_per_measurement();

  if (n >= 2) {
    if (injective_T(sys, options.tol)) {
      report.verdict = AffineVerdict::kCertifiedYes;
      report.reason = "difference map T is injective";
      return report;
    }
    bool spanning = true;
    for (const auto& m : sys.measurements()) {
      Eigen::MatrixXd diffs(sys.d(), n - 1);
      for (int i = 1; i < n; ++i) diffs.col(i - 1) = m.refs[i] - m.refs[0];
      spanning = spanning && linalg::numeric_rank(diffs, options.tol) == sys.d();
    }
    if (spanning && detail::full_column_rank(sys.stacked(), p, options.tol)) {
      report.verdict = AffineVerdict::kCertifiedYes;
      report.reason = "reference differences span R^d and T_Phi is injective";
      return report;
    }
    if (sys.d() == 1) {
      std::vector<Eigen::VectorXd> rows;
      for (const auto& m : sys.measurements()) {
        bool all_equal = true;
        for (int i = 1; i < n; ++i) all_equal = all_equal && m.refs[i](0) == m.refs[0](0);
        if (!all_equal) rows.push_back(m.phi.row(0).transpose());
      }
      Eigen::MatrixXd outside(static_cast<Eigen::Index>(rows.size()), p);
      for (std::size_t r = 0; r < rows.size(); ++r)
        outside.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
      if (detail::full_column_rank(outside, p, options.tol)) {
        report.verdict = AffineVerdict::kCertifiedYes;
        report.reason = "no nonzero coefficient vector is annihilated outside F";
        return report;
      }
    }
  }

  auto try_u = [&](const Eigen::VectorXd& u_start, int sweeps) -> bool {
    const auto [u, v] = detail::descend_singular(sys, u_start, sweeps);
    const Eigen::VectorXd f = u + 0.5 * v;
    const Eigen::VectorXd g = u - 0.5 * v;
    if (!validate_counterexample(sys, f, g, options.match_tol)) return false;
    report.verdict = AffineVerdict::kCertifiedNo;
    report.reason = "T_u has a null vector";
    report.counterexample = std::make_pair(f, g);
    report.singular_u = u;
    return true;
  };

  // Candidates where one reference group is matched by phi(u) = -b_{phi,i0}.
  const Eigen::MatrixXd stacked = sys.stacked();
  for (int i0 = 0; i0 < n; ++i0) {
    Eigen::VectorXd target(stacked.rows());
    for (std::size_t k = 0; k < sys.measurements().size(); ++k)
      target.segment(static_cast<Eigen::Index>(k) * sys.d(), sys.d()) =
          -sys.measurements()[k].refs[i0];
    const Eigen::VectorXd u0 = stacked.completeOrthogonalDecomposition().solve(target);
    if (try_u(u0, 0)) return report;
  }

  SplitMix64 rng(options.seed);
  double scale = 1.0;
  for (const auto& m : sys.measurements())
    for (const auto& b : m.refs) scale = std::max(scale, b.norm());
  for (; report.restarts_used < options.falsify_budget; ++report.restarts_used) {
    if (try_u(scale * rng.normal_vector(p), 200)) {
      ++report.restarts_used;
      return report;
    }
  }
  report.verdict = AffineVerdict::kInconclusive;
  report.reason = "no sufficient condition holds and the falsifier found no null vector";
  return report;
}

}  // namespace magnilift

#endif  // MAGNILIFT_AFFINE_HPP_
