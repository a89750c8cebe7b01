#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "steinhaus/error.hpp"

namespace steinhaus {

inline constexpr int kMaxDim = 3;

// A point of R^d for d in {1,2,3}. Storage is inline; the active dimension is
// carried at runtime because bodies and paths arrive from config files.
class Vec {
 public:
  Vec() = default;

  explicit Vec(int dim) : dim_(check_dim(dim)) {}

  Vec(std::initializer_list<double> coords)
      : dim_(check_dim(static_cast<int>(coords.size()))) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  explicit Vec(std::span<const double> coords)
      : dim_(check_dim(static_cast<int>(coords.size()))) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  static Vec zero(int dim) { return Vec(dim); }

  static Vec unit(int dim, int axis) {
    Vec v(dim);
    v[axis] = 1.0;
    return v;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }

  Vec& operator+=(const Vec& o) {
    require_same(o);
    for (int i = 0; i < dim_; ++i) (*this)[i] += o[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    require_same(o);
    for (int i = 0; i < dim_; ++i) (*this)[i] -= o[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) (*this)[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

  void require_same(const Vec& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch(dim_, o.dim_);
  }

 private:
  static int check_dim(int d) {
    if (d < 1 || d > kMaxDim)
      throw PreconditionError("dimension must be 1, 2 or 3, got " +
                              std::to_string(d));
    return d;
  }

  std::array<double, kMaxDim> c_{};
  int dim_ = 1;
};

inline double dot(const Vec& a, const Vec& b) {
  a.require_same(b);
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

inline Vec cross(const Vec& a, const Vec& b) {
  if (a.dim() != 3 || b.dim() != 3)
    throw PreconditionError("cross product needs 3-vectors");
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline Vec lerp(const Vec& a, const Vec& b, double u) {
  return a * (1.0 - u) + b * u;
}

// x* (x) = sum coeffs_i x_i. The unit_dual flag records that the functional
// was normalised to dual norm 1 against some ambient norm.
struct LinearFunctional {
  Vec coeffs;
  bool unit_dual = false;

  LinearFunctional() = default;
  explicit LinearFunctional(Vec c, bool unit = false)
      : coeffs(c), unit_dual(unit) {}

  int dim() const { return coeffs.dim(); }
  double operator()(const Vec& x) const { return dot(coeffs, x); }
  bool is_zero() const { return norm_inf(coeffs) == 0.0; }
};

}  // namespace steinhaus
