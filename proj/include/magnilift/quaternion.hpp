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

#ifndef MAGNILIFT_QUATERNION_HPP_
#define MAGNILIFT_QUATERNION_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magnilift/error.hpp"
#include "magnilift/graph_model.hpp"
#include "magnilift/random.hpp"

namespace magnilift {

/// q = a + b i + c j + d k.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  double real() const noexcept { return a; }

  Eigen::Vector4d to_vector() const { return {a, b, c, d}; }
  static Quaternion from_vector(const Eigen::Ref<const Eigen::Vector4d>& v) {
    return {v(0), v(1), v(2), v(3)};
  }

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

// Hamilton product: i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j.
inline Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

inline Quaternion quat_conj(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

inline double quat_norm(const Quaternion& q) {
  return std::sqrt(q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d);
}

inline Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }
inline Quaternion operator+(const Quaternion& p, const Quaternion& q) {
  return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
}
inline Quaternion operator-(const Quaternion& p, const Quaternion& q) {
  return {p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d};
}
inline Quaternion operator*(double s, const Quaternion& q) {
  return {s * q.a, s * q.b, s * q.c, s * q.d};
}

/// Quaternion-valued function on the finite domain {0, ..., N-1}.
struct QuatFunction {
  std::vector<Quaternion> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Component split f = f1 + f2 i + f3 j + f4 k as a 4-D real field; column x
/// is (f1(x), f2(x), f3(x), f4(x)).
inline VectorField to_real_field(const QuatFunction& f) {
  VectorField out(4, static_cast<int>(f.size()));
  for (std::size_t x = 0; x < f.size(); ++x) out[static_cast<int>(x)] = f.values[x].to_vector();
  return out;
}

inline QuatFunction from_real_field(const VectorField& field) {
  if (field.dim() != 4)
    throw Error(ErrorKind::kDimensionMismatch, "quaternion fields are 4-dimensional");
  QuatFunction f;
  for (int x = 0; x < field.size(); ++x) f.values.push_back(Quaternion::from_vector(field[x]));
  return f;
}

/// sum_j q_j f_j for real component functions f_j.
inline QuatFunction combine_components(const QuatFunction& f,
                                       const std::array<Quaternion, 4>& q) {
  QuatFunction g;
  for (const Quaternion& v : f.values) {
    const Eigen::Vector4d comp = v.to_vector();
    Quaternion sum{};
    for (int j = 0; j < 4; ++j) sum = sum + comp(j) * q[static_cast<std::size_t>(j)];
    g.values.push_back(sum);
  }
  return g;
}

/// Column j of an orthogonal U read as a quaternion; the four columns satisfy
/// ||q_j|| = 1 and q_i q_j* + q_j q_i* = 0.
inline std::array<Quaternion, 4> coefficients_from_orthogonal(const Eigen::Matrix4d& u) {
  std::array<Quaternion, 4> q;
  for (int j = 0; j < 4; ++j) q[static_cast<std::size_t>(j)] = Quaternion::from_vector(u.col(j));
  return q;
}

/// g lies in the orbit of f: equal Gram matrices of the 4-D real fields.
inline bool quat_orbit_equivalent(const QuatFunction& f, const QuatFunction& g, double tol) {
  if (f.size() != g.size())
    throw Error(ErrorKind::kDimensionMismatch, "quaternion functions differ in length");
  return orbit_equivalent(to_real_field(f), to_real_field(g), tol).has_value();
}

enum class QuatVerdict { kRetrievableCertified, kCounterexample, kInconclusive };

inline std::string_view to_string(QuatVerdict v) {
  switch (v) {
    case QuatVerdict::kRetrievableCertified: return "retrievable_certified";
    case QuatVerdict::kCounterexample: return "counterexample";
    case QuatVerdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

struct CandidateReport {
  bool equal_magnitudes = false;
  bool in_orbit = false;
};

struct QuatCheckReport {
  QuatVerdict verdict = QuatVerdict::kInconclusive;
  std::vector<CandidateReport> candidates;
  std::optional<std::pair<QuatFunction, QuatFunction>> counterexample;  // (u, v)
  std::int64_t samples_used = 0;
};

struct QuatCheckOptions {
  double tol = 1e-9;
  std::int64_t search_budget = 10000;
  std::uint64_t seed = kDefaultSeed;
};

/// f = u + v violates retrievability when Re(u(x) v*(x)) = 0 everywhere and
/// Re(u(x) v*(y) + u(y) v*(x)) != 0 somewhere. Returns the offending (x, y).
inline std::optional<std::pair<std::size_t, std::size_t>> violating_pair(
    const QuatFunction& u, const QuatFunction& v, double tol) {
  double scale = 1.0;
  for (std::size_t x = 0; x < u.size(); ++x)
    scale = std::max(scale, quat_norm(u.values[x]) + quat_norm(v.values[x]));
  const double eps = tol * scale * scale;
  for (std::size_t x = 0; x < u.size(); ++x)
    if (std::abs((u.values[x] * quat_conj(v.values[x])).real()) > eps) return std::nullopt;
  for (std::size_t x = 0; x < u.size(); ++x)
    for (std::size_t y = x; y < u.size(); ++y) {
      const double cross = (u.values[x] * quat_conj(v.values[y]) +
                            u.values[y] * quat_conj(v.values[x]))
                               .real();
      if (std::abs(cross) > 1e3 * eps) return std::make_pair(x, y);
    }
  return std::nullopt;
}

/// Quaternion conjugate phase retrieval of f in the space of all
/// quaternion functions on the domain, decided through the 4-D real field.
///
/// The (u, v) search uses u = (f + r) / 2, v = (f - r) / 2 with
/// ||r(x)|| = ||f(x)||: then Re(u v*) = (||f||^2 - ||r||^2) / 4 = 0 pointwise
/// and the cross term equals (<f(x), f(y)> - <r(x), r(y)>) / 2.
inline QuatCheckReport quat_conjugate_pr_check(const QuatFunction& f,
                                               const std::vector<QuatFunction>& candidates,
                                               const QuatCheckOptions& options = {}) {
  QuatCheckReport report;
  double scale = 1.0;
  for (const Quaternion& q : f.values) scale = std::max(scale, quat_norm(q));
  const double tol = options.tol * scale;
  for (const QuatFunction& g : candidates) {
    CandidateReport cr;
    cr.equal_magnitudes = g.size() == f.size();
    for (std::size_t x = 0; cr.equal_magnitudes && x < f.size(); ++x)
      cr.equal_magnitudes =
          std::abs(quat_norm(g.values[x]) - quat_norm(f.values[x])) <= tol;
    cr.in_orbit = cr.equal_magnitudes && quat_orbit_equivalent(f, g, tol * scale);
    report.candidates.push_back(cr);
    if (cr.equal_magnitudes && !cr.in_orbit && !report.counterexample) {
      QuatFunction u, v;
      for (std::size_t x = 0; x < f.size(); ++x) {
        u.values.push_back(0.5 * (f.values[x] + g.values[x]));
        v.values.push_back(0.5 * (f.values[x] - g.values[x]));
      }
      report.counterexample = std::make_pair(std::move(u), std::move(v));
    }
  }
  if (report.counterexample) {
    // A supplied competitor already settles it.
    report.verdict = QuatVerdict::kCounterexample;
    return report;
  }

  std::size_t support = 0;
  for (const Quaternion& q : f.values)
    if (quat_norm(q) > tol) ++support;
  if (support <= 1) {
    // Every equal-magnitude g has the same (at most one nonzero) Gram entry.
    report.verdict = QuatVerdict::kRetrievableCertified;
    return report;
  }

  SplitMix64 rng(options.seed);
  for (; report.samples_used < options.search_budget; ++report.samples_used) {
    QuatFunction u, v;
    for (const Quaternion& q : f.values) {
      Eigen::Vector4d dir = rng.normal_vector(4);
      dir *= quat_norm(q) / dir.norm();
      const Quaternion r = Quaternion::from_vector(dir);
      u.values.push_back(0.5 * (q + r));
      v.values.push_back(0.5 * (q - r));
    }
    if (violating_pair(u, v, options.tol)) {
      report.verdict = QuatVerdict::kCounterexample;
      report.counterexample = std::make_pair(std::move(u), std::move(v));
      ++report.samples_used;
      return report;
    }
  }
  report.verdict = QuatVerdict::kInconclusive;
  return report;
}

}  // namespace magnilift

#endif  // MAGNILIFT_QUATERNION_HPP_
