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

#ifndef MAGNILIFT_SPLINE_HAT_HPP_
#define MAGNILIFT_SPLINE_HAT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magnilift/error.hpp"

// Complex splines f(t) = sum_k c(k) h(t - k) with the hat generator
// h(t) = max(1 - |t|, 0). On [k, k+1], f(k + u) = c(k)(1 - u) + c(k+1) u, so
// |f|^2 is a quadratic in u fixed by its values at u = 0, 1/2, 1:
//
//   |f(k + 1/2)|^2 = (|c(k)|^2 + |c(k+1)|^2) / 4 + Re(c(k) conj c(k+1)) / 2.
//
// Half-integer magnitude samples therefore carry all of |f(t)|.

namespace magnilift {

using cdouble = std::complex<double>;

/// Finitely supported coefficient sequence c(offset), ..., c(offset + n - 1),
/// trimmed so the first and last stored coefficients are nonzero.
class ComplexCoeffSeq {
 public:
  ComplexCoeffSeq() = default;

  ComplexCoeffSeq(int offset, std::vector<cdouble> coeffs)
      : offset_(offset), coeffs_(std::move(coeffs)) {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(),
                              [](cdouble z) { return z != cdouble{}; });
    if (first == coeffs_.end()) {
      coeffs_.clear();
      offset_ = 0;
      return;
    }
    offset_ += static_cast<int>(first - coeffs_.begin());
    coeffs_.erase(coeffs_.begin(), first);
    while (coeffs_.back() == cdouble{}) coeffs_.pop_back();
  }

  bool empty() const noexcept { return coeffs_.empty(); }
  int offset() const noexcept { return offset_; }
  int k_minus() const noexcept { return offset_; }
  int k_plus() const noexcept { return offset_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const std::vector<cdouble>& coeffs() const noexcept { return coeffs_; }

  cdouble operator()(int k) const {
    if (empty() || k < k_minus() || k > k_plus()) return {};
    return coeffs_[static_cast<std::size_t>(k - offset_)];
  }

  /// Spline value f(t).
  cdouble evaluate(double t) const {
    const double fl = std::floor(t);
    const int k = static_cast<int>(fl);
    const double u = t - fl;
    return (*this)(k) * (1.0 - u) + (*this)(k + 1) * u;
  }

  ComplexCoeffSeq conj() const {
    std::vector<cdouble> out(coeffs_.size());
    std::transform(coeffs_.begin(), coeffs_.end(), out.begin(),
                   [](cdouble z) { return std::conj(z); });
    return {offset_, std::move(out)};
  }

  ComplexCoeffSeq scaled(cdouble z) const {
    std::vector<cdouble> out(coeffs_);
    for (auto& c : out) c *= z;
    return {offset_, std::move(out)};
  }

 private:
  int offset_ = 0;
  std::vector<cdouble> coeffs_;
};

/// |f(t)| at t = start + j / 2.
struct MagnitudeSamples {
  int start = 0;
  std::vector<double> values;

  double t(std::size_t j) const { return start + 0.5 * static_cast<double>(j); }
};

struct CriterionReport {
  bool retrievable = true;
  std::optional<int> support_gap;  // first interior k with c(k) == 0
  std::vector<int> im_positions;   // k with Im(c(k) conj c(k+1)) != 0
};

/// Interior coefficients must be nonzero and at most one adjacent pair may
/// carry a nonzero Im(c(k) conj c(k+1)). Zero tests are relative to tol.
inline CriterionReport check_criterion(const ComplexCoeffSeq& c, double tol = 1e-9) {
  CriterionReport r;
  if (c.empty()) return r;
  double top = 0.0;
  for (cdouble z : c.coeffs()) top = std::max(top, std::abs(z));
  for (int k = c.k_minus() + 1; k < c.k_plus(); ++k)
    if (std::abs(c(k)) <= tol * top) {
      r.support_gap = k;
      break;
    }
  for (int k = c.k_minus(); k < c.k_plus(); ++k) {
    const cdouble a = c(k), b = c(k + 1);
    if (std::abs((a * std::conj(b)).imag()) > tol * std::abs(a) * std::abs(b))
      r.im_positions.push_back(k);
  }
  r.retrievable = !r.support_gap && r.im_positions.size() <= 1;
  return r;
}

/// Phase retrievability of a real hat spline: no zero strictly between the
/// first and last nonzero coefficients.
inline bool check_real_criterion(std::span<const double> d, double tol = 1e-12) {
  double top = 0.0;
  for (double x : d) top = std::max(top, std::abs(x));
  if (top == 0.0) return true;
  auto nonzero = [&](double x) { return std::abs(x) > tol * top; };
  const auto first = std::find_if(d.begin(), d.end(), nonzero);
  const auto last = std::find_if(d.rbegin(), d.rend(), nonzero).base();
  return std::all_of(first, last, nonzero);
}

/// c' = z c or c' = z conj(c) for a unimodular z.
inline bool conjugate_equivalent(const ComplexCoeffSeq& c, const ComplexCoeffSeq& other,
                                 double tol = 1e-8) {
  if (c.empty() || other.empty()) return c.empty() && other.empty();
  if (c.k_minus() != other.k_minus() || c.k_plus() != other.k_plus()) return false;
  double scale = 1.0;
  for (cdouble z : c.coeffs()) scale = std::max(scale, std::abs(z));
  auto matches = [&](const ComplexCoeffSeq& base) {
    const cdouble z = other.coeffs().front() / base.coeffs().front();
    if (std::abs(std::abs(z) - 1.0) > tol) return false;
    for (std::size_t k = 0; k < base.size(); ++k)
      if (std::abs(other.coeffs()[k] - z * base.coeffs()[k]) > tol * scale) return false;
    return true;
  };
  return matches(c) || matches(c.conj());
}

/// |f| on the half-integer grid over [K- - 1, K+ + 1].
inline MagnitudeSamples sample_magnitudes(const ComplexCoeffSeq& c) {
  MagnitudeSamples s;
  const int lo = c.empty() ? -1 : c.k_minus() - 1;
  const int hi = c.empty() ? 1 : c.k_plus() + 1;
  s.start = lo;
  const std::size_t count = static_cast<std::size_t>(2 * (hi - lo) + 1);
  s.values.resize(count);
  for (std::size_t j = 0; j < count; ++j) s.values[j] = std::abs(c.evaluate(s.t(j)));
  return s;
}

struct RecoverOptions {
  double tol = 1e-9;      // relative zero / discriminant-clamping tolerance
  int max_branches = 12;  // nonzero-Im positions accepted
};

/// All coefficient sequences, one per conjugate-equivalence class, whose
/// half-integer magnitude samples equal the input. The gauge puts the first
/// coefficient on the positive real axis; the sign of each nonzero Im cross
/// term is a binary branch, the first one fixed by conjugation.
inline std::vector<ComplexCoeffSeq> recover(const MagnitudeSamples& samples,
                                            const RecoverOptions& options = {}) {
  const auto& v = samples.values;
  if (v.size() < 3 || v.size() % 2 == 0)
    throw Error(ErrorKind::kWindowMismatch,
                "samples must cover a half-integer grid between two integers");
  double top = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) throw Error(ErrorKind::kInconsistentSamples, "negative or NaN magnitude");
    top = std::max(top, x);
  }
  if (top == 0.0) return {ComplexCoeffSeq{}};

  const double zero = options.tol * top;
  const std::size_t nint = v.size() / 2 + 1;
  auto mag = [&](std::size_t i) { return v[2 * i]; };      // |c(start + i)|
  auto mid = [&](std::size_t i) { return v[2 * i + 1]; };  // |f(start + i + 1/2)|

  std::size_t first = 0, last = nint - 1;
  while (first < nint && mag(first) <= zero) ++first;
  if (first == nint)
    throw Error(ErrorKind::kInconsistentSamples,
                "half-integer samples are nonzero but every integer sample vanishes");
  while (mag(last) <= zero) --last;
  if (first == 0 || last == nint - 1)
    throw Error(ErrorKind::kWindowMismatch,
                "samples do not extend one unit beyond the support");
  for (std::size_t i = first + 1; i < last; ++i)
    if (mag(i) <= zero)
      throw Error(ErrorKind::kUnboundedAmbiguity,
                  "interior zero at k = " + std::to_string(samples.start + static_cast<int>(i)) +
                      ": the two sides carry independent phases");
  // Outside the support the spline is linear towards zero.
  for (std::size_t i = 0; i + 1 < nint; ++i) {
    if (i >= first && i < last) continue;
    const double expect = 0.5 * (mag(i) + mag(i + 1));
    if (std::abs(mid(i) - expect) > 10.0 * zero)
      throw Error(ErrorKind::kInconsistentSamples,
                  "midpoint sample at t = " + std::to_string(samples.t(2 * i + 1)) +
                      " disagrees with a linear decay to zero");
  }

  // Cross terms w_k = c(k) conj c(k+1) = re_k + i s_k im_k.
  const std::size_t pairs = last - first;
  std::vector<double> re(pairs), im(pairs);
  std::vector<std::size_t> branch_at;
  for (std::size_t p = 0; p < pairs; ++p) {
    const double a = mag(first + p), b = mag(first + p + 1), h = mid(first + p);
    const double ab2 = a * a * b * b;
    re[p] = 2.0 * h * h - 0.5 * (a * a + b * b);
    const double disc = ab2 - re[p] * re[p];
    if (disc < -options.tol * ab2 - 1e3 * options.tol * zero * zero)
      throw Error(ErrorKind::kInconsistentSamples,
                  "magnitudes near t = " + std::to_string(samples.t(2 * (first + p) + 1)) +
                      " are not attainable by linear interpolation");
    if (disc > options.tol * ab2) {
      im[p] = std::sqrt(disc);
      branch_at.push_back(p);
    } else {
      im[p] = 0.0;
      re[p] = std::clamp(re[p], -a * b, a * b);
    }
  }
  if (static_cast<int>(branch_at.size()) > options.max_branches)
    throw Error(ErrorKind::kTooManyBranches,
                std::to_string(branch_at.size()) + " sign branches exceed the cap of " +
                    std::to_string(options.max_branches));

  const int k0 = samples.start + static_cast<int>(first);
  const std::uint32_t free_bits =
      branch_at.empty() ? 0U : static_cast<std::uint32_t>(branch_at.size() - 1);
  std::vector<ComplexCoeffSeq> out;
  for (std::uint32_t pattern = 0; pattern < (1U << free_bits); ++pattern) {
    std::vector<double> sign(pairs, 1.0);
    for (std::size_t b = 1; b < branch_at.size(); ++b)
      if (pattern >> (b - 1) & 1U) sign[branch_at[b]] = -1.0;
    std::vector<cdouble> c(pairs + 1);
    c[0] = mag(first);
    for (std::size_t p = 0; p < pairs; ++p) {
      const cdouble w(re[p], sign[p] * im[p]);
      c[p + 1] = std::conj(w) * c[p] / std::norm(c[p]);
    }
    ComplexCoeffSeq candidate(k0, std::move(c));
    const bool seen = std::any_of(out.begin(), out.end(), [&](const ComplexCoeffSeq& o) {
      return conjugate_equivalent(o, candidate, 1e-8);
    });
    if (!seen) out.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace magnilift

#endif  // MAGNILIFT_SPLINE_HAT_HPP_
