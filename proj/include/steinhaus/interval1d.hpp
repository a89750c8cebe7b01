#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "steinhaus/error.hpp"

namespace steinhaus {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kMaxPieces = 10'000'000;

struct Interval {
  Rational lo, hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of closed intervals in normal form: sorted, each lo <= hi, and
// hi_i < lo_{i+1}. Touching intervals are merged.
class IntervalUnion {
 public:
  IntervalUnion() = default;

  static IntervalUnion normalized(std::vector<Interval> parts) {
    for (const auto& p : parts)
      if (p.lo > p.hi) throw PreconditionError("interval with lo > hi");
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    IntervalUnion u;
    for (auto& p : parts) {
      if (!u.parts_.empty() && p.lo <= u.parts_.back().hi) {
        if (p.hi > u.parts_.back().hi) u.parts_.back().hi = p.hi;
      } else {
        u.parts_.push_back(std::move(p));
      }
    }
    return u;
  }

  static IntervalUnion interval(const Rational& lo, const Rational& hi) {
    return normalized({{lo, hi}});
  }
  static IntervalUnion point(const Rational& x) { return interval(x, x); }

  const std::vector<Interval>& intervals() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  bool is_normal() const {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i].lo > parts_[i].hi) return false;
      if (i + 1 < parts_.size() && !(parts_[i].hi < parts_[i + 1].lo)) return false;
    }
    return true;
  }

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Interval> parts_;
};

inline IntervalUnion cantor_stage(const Rational& lambda, int depth) {
  if (!(lambda > 0 && lambda < Rational(1, 2)))
    throw PreconditionError("cantor_stage: lambda must lie in (0, 1/2)");
  if (depth < 0) throw PreconditionError("cantor_stage: depth must be >= 0");
  if (depth > 23) throw CapacityError("cantor_stage: 2^depth intervals exceed the piece cap");
  std::vector<Interval> cur{{Rational(0), Rational(1)}};
  const Rational right = 1 - lambda;
  for (int d = 0; d < depth; ++d) {
    std::vector<Interval> next;
    next.reserve(cur.size() * 2);
    for (const auto& iv : cur) next.push_back({lambda * iv.lo, lambda * iv.hi});
    for (const auto& iv : cur) next.push_back({right + lambda * iv.lo, right + lambda * iv.hi});
    cur = std::move(next);
  }
  return IntervalUnion::normalized(std::move(cur));
}

namespace detail {

template <class T>
using Pieces = std::vector<std::pair<T, T>>;

// Union of two sorted normal piece lists, coalescing overlaps and contacts.
template <class T>
Pieces<T> merge_union(const Pieces<T>& x, const Pieces<T>& y) {
  Pieces<T> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    const auto& p = (j == y.size() || (i < x.size() && x[i].first <= y[j].first)) ? x[i++] : y[j++];
    if (!out.empty() && p.first <= out.back().second) {
      if (p.second > out.back().second) out.back().second = p.second;
    } else {
      out.push_back(p);
    }
  }
  if (out.size() > kMaxPieces) throw CapacityError("interval_sum: more than 10^7 pieces");
  return out;
}

// Union of [a_i + c_j, b_i + d_j] over i in [lo, hi) and all j. Halving A
// keeps the work near |A||B| at the leaves while partial sums coalesce.
template <class T>
Pieces<T> sorted_sum(const Pieces<T>& A, const Pieces<T>& B, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) {
    const auto& [a, b] = A[lo];
    Pieces<T> out;
    out.reserve(B.size());
    for (const auto& [c, d] : B) {
      T s = a + c, e = b + d;
      if (!out.empty() && s <= out.back().second) {
        if (e > out.back().second) out.back().second = e;
      } else {
        out.push_back({std::move(s), std::move(e)});
      }
    }
    return out;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge_union(sorted_sum(A, B, lo, mid), sorted_sum(A, B, mid, hi));
}

template <class T>
Pieces<T> sorted_sum(const Pieces<T>& A, const Pieces<T>& B) {
  if (A.empty() || B.empty()) return {};
  return A.size() <= B.size() ? sorted_sum(A, B, 0, A.size()) : sorted_sum(B, A, 0, B.size());
}

inline BigInt lcm_denominators(const IntervalUnion& u, BigInt acc) {
  for (const auto& iv : u.intervals()) {
    for (const Rational* r : {&iv.lo, &iv.hi}) {
      BigInt d = boost::multiprecision::denominator(*r);
      acc = acc / boost::multiprecision::gcd(acc, d) * d;
    }
  }
  return acc;
}

inline BigInt max_abs_numerator_scaled(const IntervalUnion& u, const BigInt& L) {
  BigInt m = 0;
  for (const auto& iv : u.intervals())
    for (const Rational* r : {&iv.lo, &iv.hi}) {
      BigInt v = boost::multiprecision::abs(boost::multiprecision::numerator(*r)) * (L / boost::multiprecision::denominator(*r));
      if (v > m) m = v;
    }
  return m;
}

inline std::vector<std::pair<std::int64_t, std::int64_t>> to_scaled(const IntervalUnion& u,
                                                                     const BigInt& L) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(u.size());
  auto conv = [&](const Rational& r) {
    BigInt v = boost::multiprecision::numerator(r) * (L / boost::multiprecision::denominator(r));
    return v.convert_to<std::int64_t>();
  };
  for (const auto& iv : u.intervals()) out.push_back({conv(iv.lo), conv(iv.hi)});
  return out;
}

}  // namespace detail

inline IntervalUnion interval_sum(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.empty() || b.empty()) return {};
  const BigInt L = detail::lcm_denominators(b, detail::lcm_denominators(a, BigInt(1)));
  const BigInt bound = detail::max_abs_numerator_scaled(a, L) + detail::max_abs_numerator_scaled(b, L);
  std::vector<Interval> parts;
  if (bound < BigInt(std::numeric_limits<std::int64_t>::max() / 2)) {
    auto sum = detail::sorted_sum(detail::to_scaled(a, L), detail::to_scaled(b, L));
    parts.reserve(sum.size());
    for (const auto& [lo, hi] : sum) parts.push_back({Rational(BigInt(lo), L), Rational(BigInt(hi), L)});
  } else {
    std::vector<std::pair<Rational, Rational>> A, B;
    for (const auto& iv : a.intervals()) A.push_back({iv.lo, iv.hi});
    for (const auto& iv : b.intervals()) B.push_back({iv.lo, iv.hi});
    for (auto& [lo, hi] : detail::sorted_sum(A, B)) parts.push_back({std::move(lo), std::move(hi)});
  }
  return IntervalUnion::normalized(std::move(parts));
}

inline IntervalUnion iterate_interval_sum(const IntervalUnion& a, int k) {
  if (k < 1) throw PreconditionError("iterate_interval_sum: k must be >= 1");
  IntervalUnion s = a;
  for (int i = 1; i < k; ++i) s = interval_sum(s, a);
  return s;
}

inline Rational measure(const IntervalUnion& a) {
  Rational m = 0;
  for (const auto& iv : a.intervals()) m += iv.hi - iv.lo;
  return m;
}

// Maximal open gaps (hi_i, lo_{i+1}).
inline std::vector<Interval> gaps(const IntervalUnion& a) {
  std::vector<Interval> g;
  const auto& p = a.intervals();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) g.push_back({p[i].hi, p[i + 1].lo});
  return g;
}

inline bool equals_interval(const IntervalUnion& a, const Rational& lo, const Rational& hi) {
  return a.size() == 1 && a.intervals()[0].lo == lo && a.intervals()[0].hi == hi;
}

// b is a subset of a.
inline bool contains(const IntervalUnion& a, const IntervalUnion& b) {
  const auto& A = a.intervals();
  std::size_t i = 0;
  for (const auto& iv : b.intervals()) {
    while (i < A.size() && A[i].hi < iv.lo) ++i;
    if (i == A.size() || A[i].lo > iv.lo || A[i].hi < iv.hi) return false;
  }
  return true;
}

inline IntervalUnion scale(const IntervalUnion& a, const Rational& s) {
  if (!(s > 0)) throw PreconditionError("scale: factor must be positive");
  std::vector<Interval> parts;
  for (const auto& iv : a.intervals()) parts.push_back({iv.lo * s, iv.hi * s});
  return IntervalUnion::normalized(std::move(parts));
}

inline IntervalUnion translate(const IntervalUnion& a, const Rational& v) {
  std::vector<Interval> parts;
  for (const auto& iv : a.intervals()) parts.push_back({iv.lo + v, iv.hi + v});
  return IntervalUnion::normalized(std::move(parts));
}

// k* with lambda in [1/(k*+1), 1/k*).
inline int predicted_k(const Rational& lambda) {
  if (!(lambda > 0 && lambda < Rational(1, 2)))
    throw PreconditionError("predicted_k: lambda must lie in (0, 1/2)");
  BigInt p = boost::multiprecision::numerator(lambda);
  BigInt q = boost::multiprecision::denominator(lambda);
  return static_cast<int>(BigInt((q - 1) / p));
}

struct SspRow {
  int k = 0;
  bool sum_is_full_interval = false;   // S_k(C^(depth)) == [0, k]
  std::vector<Rational> prev_measures; // measure of S_{k-1}(C^(d)), d = 1..depth
  bool prev_strictly_decreasing = false;
};

struct SspReport {
  Rational lambda;
  int depth = 0;
  int predicted_k = 0;
  std::vector<SspRow> rows;
};

inline SspReport ssp_classify(const Rational& lambda, int k_max, int depth) {
  if (depth < 4) throw PreconditionError("ssp_classify: depth must be >= 4");
  if (k_max < 1) throw PreconditionError("ssp_classify: k_max must be >= 1");
  SspReport rep;
  rep.lambda = lambda;
  rep.depth = depth;
  rep.predicted_k = predicted_k(lambda);
  // sums[d][k-1] = S_k(C^(d)) for d = 1..depth.
  std::vector<std::vector<IntervalUnion>> sums(static_cast<std::size_t>(depth) + 1);
  for (int d = 1; d <= depth; ++d) {
    IntervalUnion c = cantor_stage(lambda, d);
    auto& row = sums[static_cast<std::size_t>(d)];
    row.push_back(c);
    for (int k = 2; k <= k_max; ++k) row.push_back(interval_sum(row.back(), c));
  }
  for (int k = 1; k <= k_max; ++k) {
    SspRow r;
    r.k = k;
    r.sum_is_full_interval =
        equals_interval(sums[static_cast<std::size_t>(depth)][static_cast<std::size_t>(k - 1)], 0, k);
    if (k >= 2) {
      for (int d = 1; d <= depth; ++d)
        r.prev_measures.push_back(measure(sums[static_cast<std::size_t>(d)][static_cast<std::size_t>(k - 2)]));
      r.prev_strictly_decreasing = true;
      for (std::size_t i = 1; i < r.prev_measures.size(); ++i)
        if (!(r.prev_measures[i] < r.prev_measures[i - 1])) r.prev_strictly_decreasing = false;
    }
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

// Axis-wise k-fold sum of C^(depth) x [0,1]^(n-1). Sums of products are
// products of sums, so the result is S_k(C^(depth)) x [0,k]^(n-1).
inline std::vector<IntervalUnion> product_sumset(const Rational& lambda, int depth, int n, int k) {
  if (n < 1) throw PreconditionError("product_sumset: n must be >= 1");
  std::vector<IntervalUnion> axes{iterate_interval_sum(cantor_stage(lambda, depth), k)};
  for (int i = 1; i < n; ++i) axes.push_back(iterate_interval_sum(IntervalUnion::interval(0, 1), k));
  return axes;
}

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace steinhaus
