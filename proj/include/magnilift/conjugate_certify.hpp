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

#ifndef MAGNILIFT_CONJUGATE_CERTIFY_HPP_
#define MAGNILIFT_CONJUGATE_CERTIFY_HPP_

#include <bit>
#include <cmath>
#include <complex>
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

// Complex conjugate phase retrieval for the complex range space of a real
// m x n matrix A with rows a_i.
//
// The range space fails to be conjugate phase retrievable exactly when some
// real X of rank <= 2 with X^T != -X satisfies a_i^T X a_i = 0 for all i.
// Only S = sym(X) enters the trace conditions, and
//
//   S = sym(X) for some rank-<=2 X  <=>  S has <= 2 positive and <= 2
//   negative eigenvalues.
//
// (=>) X = u1 v1^T + u2 v2^T, and each sym(u v^T) has inertia at most (1, 1).
// (<=) Pair each positive eigenpair (l, p) with a negative one (-m, q):
//      sym(u v^T) = l p p^T - m q q^T for u = sqrt(l) p + sqrt(m) q,
//      v = sqrt(l) p - sqrt(m) q.
// The search therefore runs over the symmetric null space of
// S -> (a_i^T S a_i)_i.

namespace magnilift {

using ComplexVector = Eigen::VectorXcd;

/// Full-column-rank real measurement matrix.
class RealMeasurementMatrix {
 public:
  explicit RealMeasurementMatrix(Eigen::MatrixXd a, double rank_tol = 1e-10)
      : a_(std::move(a)) {
    if (a_.cols() < 1)
      throw Error(ErrorKind::kInvalidArgument, "matrix must have at least one column");
    const auto rank = linalg::numeric_rank(a_, rank_tol);
    if (rank != a_.cols())
      throw Error(ErrorKind::kRankDeficient,
                  "matrix has rank " + std::to_string(rank) + " but " +
                      std::to_string(a_.cols()) + " columns");
  }

  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  Eigen::Index rows() const noexcept { return a_.rows(); }
  Eigen::Index cols() const noexcept { return a_.cols(); }
  Eigen::VectorXd row(Eigen::Index i) const { return a_.row(i).transpose(); }

 private:
  Eigen::MatrixXd a_;
};

enum class VerdictStatus { kConjugatePR, kNotConjugatePR, kInconclusive };

inline std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kConjugatePR: return "ConjugatePR";
    case VerdictStatus::kNotConjugatePR: return "NotConjugatePR";
    case VerdictStatus::kInconclusive: return "Inconclusive";
  }
  return "Unknown";
}

struct Verdict {
  VerdictStatus status = VerdictStatus::kInconclusive;
  std::optional<Eigen::MatrixXd> witness;  // rank <= 2, sym != 0, trace-orthogonal
  std::optional<std::pair<ComplexVector, ComplexVector>> decomposition;  // x_f = x1 + x2
  int nullspace_dim = 0;
  std::int64_t samples_used = 0;
  std::string method;
};

struct CertifyOptions {
  double tol = 1e-9;                  // relative tolerance for rank/eigen/trace tests
  std::int64_t search_budget = 100000;
  std::uint64_t seed = kDefaultSeed;
};

namespace detail {

/// Row i maps the orthonormal symmetric-basis coordinates of S to
/// v_i^T S v_i; diagonal basis E_pp, off-diagonal (E_pq + E_qp) / sqrt 2.
inline Eigen::MatrixXd quadratic_form_map(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.cols();
  const Eigen::Index dim = n * (n + 1) / 2;
  Eigen::MatrixXd m(rows.rows(), dim);
  const double r2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::Index c = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p; q < n; ++q, ++c)
        m(i, c) = p == q ? rows(i, p) * rows(i, p) : r2 * rows(i, p) * rows(i, q);
  }
  return m;
}

inline Eigen::MatrixXd sym_from_coords(const Eigen::VectorXd& coords, Eigen::Index n) {
  Eigen::MatrixXd s(n, n);
  const double r2 = std::sqrt(2.0);
  Eigen::Index c = 0;
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = p; q < n; ++q, ++c) {
      if (p == q)
        s(p, p) = coords(c);
      else
        s(p, q) = s(q, p) = coords(c) / r2;
    }
  return s;
}

inline std::vector<Eigen::MatrixXd> symmetric_null_basis(const Eigen::MatrixXd& rows,
                                                         double tol) {
  const Eigen::Index n = rows.cols();
  const Eigen::MatrixXd ns = linalg::null_space(quadratic_form_map(rows), tol);
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index k = 0; k < ns.cols(); ++k) out.push_back(sym_from_coords(ns.col(k), n));
  return out;
}

inline bool has_small_inertia(const Eigen::MatrixXd& s, double tol) {
  if (s.norm() == 0.0) return false;
  const auto in = linalg::inertia(s, tol);
  return in.positive <= 2 && in.negative <= 2 && (in.positive + in.negative) > 0;
}

/// Keeps the two largest positive and two most negative eigenvalues.
inline Eigen::MatrixXd truncate_inertia(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const Eigen::Index n = ev.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    const bool low = k < 2 && ev(k) < 0.0;
    const bool high = k >= n - 2 && ev(k) > 0.0;
    if (!low && !high) ev(k) = 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/// Orthonormal basis (Frobenius inner product) of {S symmetric : a_i^T S a_i = 0}.
inline std::vector<Eigen::MatrixXd> quadratic_nullspace(const RealMeasurementMatrix& a,
                                                        double tol = 1e-9) {
  return detail::symmetric_null_basis(a.matrix(), tol);
}

/// Rank-<=2 X with sym(X) = S; requires S to have <= 2 positive and <= 2
/// negative eigenvalues (extra eigenvalues are dropped).
inline Eigen::MatrixXd split_rank_two(const Eigen::MatrixXd& s) {
  const Eigen::Index n = s.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(linalg::sym(s));
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& vec = es.eigenvectors();
  std::vector<Eigen::VectorXd> pos, neg;
  for (Eigen::Index k = n - 1; k >= 0 && pos.size() < 2; --k)
    if (ev(k) > 0.0) pos.push_back(std::sqrt(ev(k)) * vec.col(k));
  for (Eigen::Index k = 0; k < n && neg.size() < 2; ++k)
    if (ev(k) < 0.0) neg.push_back(std::sqrt(-ev(k)) * vec.col(k));
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < 2; ++k) {
    const Eigen::VectorXd p = k < pos.size() ? pos[k] : Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd q = k < neg.size() ? neg[k] : Eigen::VectorXd::Zero(n);
    x += (p + q) * (p - q).transpose();
  }
  return x;
}

/// Checks the defining conditions of a non-retrievability witness: rank <= 2,
/// X^T != -X and a_i^T X a_i = 0, all relative to ||X||.
inline bool validate_witness(const RealMeasurementMatrix& a, const Eigen::MatrixXd& x,
                             double tol) {
  const double scale = x.norm();
  if (scale == 0.0 || !x.allFinite()) return false;
  if (linalg::numeric_rank(x, tol) > 2) return false;
  if (linalg::sym(x).norm() <= tol * scale) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::VectorXd r = a.row(i);
    if (std::abs(r.dot(x * r)) > 10.0 * tol * scale * r.squaredNorm()) return false;
  }
  return true;
}

namespace detail {

inline Verdict not_pr_from(const RealMeasurementMatrix& a, const Eigen::MatrixXd& s,
                           double tol, Verdict v, std::string method) {
  Eigen::MatrixXd x = split_rank_two(s / s.norm());
  if (!validate_witness(a, x, tol)) return v;
  v.status = VerdictStatus::kNotConjugatePR;
  v.witness = std::move(x);
  v.method = std::move(method);
  return v;
}

/// n == 3 with a null space of dimension >= 2 whose first element is
/// definite: some S2 - lambda S1 is singular, hence of inertia <= (2, 2)
/// and nonzero by linear independence.
inline Eigen::MatrixXd singular_combination(Eigen::MatrixXd s1, const Eigen::MatrixXd& s2) {
  if (s1.trace() < 0.0) s1 = -s1;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s2, s1);
  const Eigen::VectorXd& lam = ges.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < lam.size(); ++k)
    if (std::abs(lam(k)) > std::abs(lam(best))) best = k;
  return s2 - lam(best) * s1;
}

}  // namespace detail

/// Decides conjugate phase retrievability of the complex range space.
/// Exact when the symmetric null space has dimension <= 1 or n <= 3;
/// otherwise a seeded randomized search, reporting Inconclusive when the
/// budget runs out without a witness.
inline Verdict certify_range_space(const RealMeasurementMatrix& a,
                                   const CertifyOptions& options = {}) {
  const double tol = options.tol;
  const auto basis = quadratic_nullspace(a, tol);
  const Eigen::Index n = a.cols();
  Verdict v;
  v.nullspace_dim = static_cast<int>(basis.size());
  if (basis.empty()) {
    v.status = VerdictStatus::kConjugatePR;
    v.method = "trivial-nullspace";
    return v;
  }
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (detail::has_small_inertia(basis[k], tol))
      return detail::not_pr_from(a, basis[k], tol, v, "nullspace-basis");
  if (basis.size() == 1) {
    // span{S} with S definite: no admissible element.
    v.status = VerdictStatus::kConjugatePR;
    v.method = "definite-nullspace";
    return v;
  }
  if (n <= 3) {
    const Eigen::MatrixXd s = detail::singular_combination(basis[0], basis[1]);
    return detail::not_pr_from(a, s, tol, v, "singular-combination");
  }

  // n >= 4: random directions, then alternating projections between the
  // null space and the inertia-<=(2,2) set.
  SplitMix64 rng(options.seed);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  auto combine = [&](const Eigen::VectorXd& c) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < dim; ++k) s += c(k) * basis[k];
    return s;
  };
  auto project = [&](const Eigen::MatrixXd& s) {
    Eigen::VectorXd c(dim);
    for (Eigen::Index k = 0; k < dim; ++k) c(k) = (basis[k].array() * s.array()).sum();
    return c;
  };
  const std::int64_t random_share = options.search_budget / 2;
  for (; v.samples_used < random_share; ++v.samples_used) {
    Eigen::VectorXd c = rng.normal_vector(dim);
    const Eigen::MatrixXd s = combine(c / c.norm());
    if (detail::has_small_inertia(s, tol))
      return detail::not_pr_from(a, s, tol, v, "random-search");
  }
  constexpr int kSweeps = 200;
  while (v.samples_used < options.search_budget) {
    Eigen::VectorXd c = rng.normal_vector(dim);
    c /= c.norm();
    for (int it = 0; it < kSweeps && v.samples_used < options.search_budget;
         ++it, ++v.samples_used) {
      const Eigen::MatrixXd s = combine(c);
      if (detail::has_small_inertia(s, tol))
        return detail::not_pr_from(a, s, tol, v, "alternating-projection");
      c = project(detail::truncate_inertia(s));
      const double norm = c.norm();
      if (norm < 1e-12) break;
      c /= norm;
    }
  }
  v.status = VerdictStatus::kInconclusive;
  v.method = "search-exhausted";
  return v;
}

/// Real Gram form Re(x)Re(x)^T + Im(x)Im(x)^T; two vectors with equal
/// measurement magnitudes differ in this form by an element of the
/// symmetric null space.
inline Eigen::MatrixXd real_gram(const ComplexVector& x) {
  const Eigen::VectorXd p = x.real();
  const Eigen::VectorXd q = x.imag();
  return p * p.transpose() + q * q.transpose();
}

namespace detail {

/// Builds the (x1, x2) witness from a competitor x_g with |A x_g| = |A x_f|.
inline std::optional<Verdict> decomposition_from(const RealMeasurementMatrix& a,
                                                 const ComplexVector& xf,
                                                 const ComplexVector& xg, double tol,
                                                 Verdict v, std::string method) {
  const ComplexVector x1 = 0.5 * (xf + xg);
  const ComplexVector x2 = 0.5 * (xf - xg);
  const Eigen::MatrixXd x = x2.real() * x1.real().transpose() +
                            x2.imag() * x1.imag().transpose();
  const double scale = real_gram(xf).norm();
  if (linalg::sym(x).norm() <= 1e3 * tol * scale) return std::nullopt;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::VectorXd r = a.row(i);
    if (std::abs(r.dot(x * r)) > 10.0 * tol * scale * r.squaredNorm()) return std::nullopt;
  }
  v.status = VerdictStatus::kNotConjugatePR;
  v.witness = x;
  v.decomposition = std::make_pair(x1, x2);
  v.method = std::move(method);
  return v;
}

/// Gauss-Newton with Levenberg damping on r_i(w) = |a_i^T w|^2 - target_i
/// over w in C^n (stacked as real and imaginary parts).
inline ComplexVector fit_magnitudes(const Eigen::MatrixXd& a, const Eigen::VectorXd& target,
                                    ComplexVector w, int iterations) {
  const Eigen::Index n = a.cols();
  auto residual = [&](const ComplexVector& z) {
    Eigen::VectorXd r(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      r(i) = std::norm(a.row(i).cast<std::complex<double>>().dot(z)) - target(i);
    return r;
  };
  double lambda = 1e-3;
  Eigen::VectorXd r = residual(w);
  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXd jac(a.rows(), 2 * n);
    const Eigen::VectorXd re = a * w.real();
    const Eigen::VectorXd im = a * w.imag();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      jac.row(i).head(n) = 2.0 * re(i) * a.row(i);
      jac.row(i).tail(n) = 2.0 * im(i) * a.row(i);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Eigen::MatrixXd h = jtj;
      h.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
      const Eigen::VectorXd step = h.ldlt().solve(-g);
      ComplexVector cand = w;
      cand.real() += step.head(n);
      cand.imag() += step.tail(n);
      const Eigen::VectorXd rc = residual(cand);
      if (rc.squaredNorm() < r.squaredNorm()) {
        w = cand;
        r = rc;
        lambda = std::max(lambda * 0.3, 1e-15);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved || r.norm() < 1e-15 * (1.0 + target.norm())) break;
  }
  return w;
}

}  // namespace detail

/// Per-vector certificate: x_f is conjugate phase retrievable unless
/// x_f = x1 + x2 with X = Re(x2)Re(x1)^T + Im(x2)Im(x1)^T trace-orthogonal
/// to every a_i a_i^T and X^T != -X.
inline Verdict certify_vector(const RealMeasurementMatrix& a, const ComplexVector& xf,
                              const CertifyOptions& options = {}) {
  const double tol = options.tol;
  const Eigen::Index n = a.cols();
  if (xf.size() != n)
    throw Error(ErrorKind::kDimensionMismatch,
                "vector has length " + std::to_string(xf.size()) + ", matrix has " +
                    std::to_string(n) + " columns");
  Verdict v;
  if (xf.norm() == 0.0) {
    v.status = VerdictStatus::kConjugatePR;
    v.method = "zero-vector";
    return v;
  }
  const Verdict space = certify_range_space(a, options);
  v.nullspace_dim = space.nullspace_dim;
  if (space.status == VerdictStatus::kConjugatePR) {
    v.status = VerdictStatus::kConjugatePR;
    v.method = "space-certificate";
    return v;
  }

  // Perturb the real Gram form of x_f inside its own range: stays PSD of
  // rank <= 2 for a small step, so it is the real Gram form of a competitor.
  const Eigen::MatrixXd gf = real_gram(xf);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gf);
  const double top = es.eigenvalues().maxCoeff();
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (es.eigenvalues()(k) > tol * top) ++r;
  const Eigen::MatrixXd range = es.eigenvectors().rightCols(r);
  const Eigen::MatrixXd reduced = a.matrix() * range;
  const auto local = detail::symmetric_null_basis(reduced, tol);
  if (!local.empty()) {
    const Eigen::MatrixXd k = local.front();
    const double lam_min = es.eigenvalues()(n - r);
    const double step = 0.5 * lam_min / k.operatorNorm();
    const Eigen::MatrixXd gg = gf + step * range * k * range.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(gg);
    const Eigen::VectorXd& ev = eg.eigenvalues();
    ComplexVector xg(n);
    xg.real() = std::sqrt(std::max(0.0, ev(n - 1))) * eg.eigenvectors().col(n - 1);
    xg.imag() = n >= 2 ? Eigen::VectorXd(std::sqrt(std::max(0.0, ev(n - 2))) *
                                         eg.eigenvectors().col(n - 2))
                       : Eigen::VectorXd::Zero(n);
    if (auto out = detail::decomposition_from(a, xf, xg, tol, v, "range-perturbation"))
      return *out;
  }

  // Randomized search for a competitor with equal magnitudes.
  const Eigen::MatrixXd& am = a.matrix();
  Eigen::VectorXd target(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    target(i) = std::norm(am.row(i).cast<std::complex<double>>().dot(xf));
  SplitMix64 rng(options.seed);
  const double scale = xf.norm();
  constexpr int kIterations = 100;
  const std::int64_t restarts = std::max<std::int64_t>(1, options.search_budget / kIterations);
  for (std::int64_t s = 0; s < restarts; ++s, v.samples_used += kIterations) {
    ComplexVector w(n);
    w.real() = scale * rng.normal_vector(n) / std::sqrt(static_cast<double>(n));
    w.imag() = scale * rng.normal_vector(n) / std::sqrt(static_cast<double>(n));
    w = detail::fit_magnitudes(am, target, w, kIterations);
    if (auto out = detail::decomposition_from(a, xf, w, tol, v, "magnitude-fit")) {
      out->samples_used = v.samples_used + kIterations;
      return *out;
    }
  }
  v.status = VerdictStatus::kInconclusive;
  v.method = "search-exhausted";
  return v;
}

/// Every split of the rows leaves one side spanning R^n. Exhaustive over
/// 2^(m-1) partitions.
inline bool complement_property(const Eigen::MatrixXd& a, double rank_tol = 1e-10) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (m > 24)
    throw Error(ErrorKind::kTooLarge, "complement property is exhaustive; m must be <= 24");
  if (m == 0) return n == 0;
  auto spans = [&](std::uint32_t mask) {
    Eigen::MatrixXd sub(std::popcount(mask), n);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask >> i & 1U) sub.row(r++) = a.row(i);
    return sub.rows() >= n && linalg::numeric_rank(sub, rank_tol) == n;
  };
  const std::uint32_t full = m == 32 ? ~0U : (1U << m) - 1U;
  const std::uint32_t half = 1U << (m - 1);
  for (std::uint32_t mask = 0; mask < half; ++mask)
    if (!spans(mask) && !spans(full & ~mask)) return false;
  return true;
}

}  // namespace magnilift

#endif  // MAGNILIFT_CONJUGATE_CERTIFY_HPP_
