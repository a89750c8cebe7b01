#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "steinhaus/hull.hpp"
#include "steinhaus/vector.hpp"

namespace steinhaus {

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

// (sum_i w_i |x_i|^p)^(1/p), or max_i w_i |x_i| for p = inf. Empty weights
// mean all ones.
struct LpNorm {
  double p = 2.0;
  std::vector<double> weights;

  static LpNorm l(double p) { return LpNorm{p, {}}; }
  static LpNorm weighted(double p, std::vector<double> w) {
    return LpNorm{p, std::move(w)};
  }
  static LpNorm inf() { return LpNorm{std::numeric_limits<double>::infinity(), {}}; }

  bool is_inf() const { return std::isinf(p); }
  double weight(int i) const {
    return weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)];
  }
  void validate(int dim) const {
    if (!(p >= 1.0))
      throw PreconditionError("p-norm needs p in [1, inf]");
    if (!weights.empty()) {
      if (static_cast<int>(weights.size()) != dim)
        throw DimensionMismatch(static_cast<int>(weights.size()), dim);
      for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
          throw PreconditionError("norm weights must be positive and finite");
    }
  }
  friend bool operator==(const LpNorm&, const LpNorm&) = default;
};

namespace detail {

// Power-of-two prescaling keeps the evaluation exactly homogeneous under
// dyadic scalings of the argument and avoids overflow in |x|^p.
inline double lp_eval(const LpNorm& n, const Vec& x) {
  n.validate(x.dim());
  double big = 0.0;
  for (int i = 0; i < x.dim(); ++i)
    big = std::max(big, std::abs(x[i]));
  if (big == 0.0) return 0.0;
  if (n.is_inf()) {
    double m = 0.0;
    for (int i = 0; i < x.dim(); ++i) m = std::max(m, n.weight(i) * std::abs(x[i]));
    return m;
  }
  int e = 0;
  std::frexp(big, &e);
  const double s = std::ldexp(1.0, e);
  if (n.p == 1.0) {
    double acc = 0.0;
    for (int i = 0; i < x.dim(); ++i) acc += n.weight(i) * std::abs(x[i] / s);
    return s * acc;
  }
  if (n.p == 2.0) {
    double acc = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
      double v = x[i] / s;
      acc += n.weight(i) * v * v;
    }
    return s * std::sqrt(acc);
  }
  double acc = 0.0;
  for (int i = 0; i < x.dim(); ++i)
    acc += n.weight(i) * std::pow(std::abs(x[i] / s), n.p);
  return s * std::pow(acc, 1.0 / n.p);
}

// Hoelder conjugate of the weighted norm: ||W^{-1/p} g||_q.
inline double lp_dual(const LpNorm& n, const Vec& g) {
  n.validate(g.dim());
  if (n.is_inf()) {
    double acc = 0.0;
    for (int i = 0; i < g.dim(); ++i) acc += std::abs(g[i]) / n.weight(i);
    return acc;
  }
  if (n.p == 1.0) {
    double m = 0.0;
    for (int i = 0; i < g.dim(); ++i) m = std::max(m, std::abs(g[i]) / n.weight(i));
    return m;
  }
  const double q = n.p / (n.p - 1.0);
  Vec scaled(g.dim());
  for (int i = 0; i < g.dim(); ++i)
    scaled[i] = g[i] / std::pow(n.weight(i), 1.0 / n.p);
  return lp_eval(LpNorm::l(q), scaled);
}

}  // namespace detail

class ConvexBody;

// Gauge of a body with the origin in its interior, referenced by id so it can
// be named in config files.
struct GaugeNorm {
  std::shared_ptr<const ConvexBody> body;
  std::string id;
};

class NormSpec {
 public:
  using Kind = std::variant<LpNorm, GaugeNorm>;

  NormSpec() : kind_(LpNorm::l(2.0)) {}
  NormSpec(LpNorm n) : kind_(std::move(n)) {}  // NOLINT: implicit by intent
  static NormSpec gauge(std::shared_ptr<const ConvexBody> body, std::string id);

  const Kind& kind() const { return kind_; }
  bool is_lp() const { return std::holds_alternative<LpNorm>(kind_); }
  const LpNorm& lp() const { return std::get<LpNorm>(kind_); }
  const GaugeNorm& gauge_ref() const { return std::get<GaugeNorm>(kind_); }

  friend bool operator==(const NormSpec& a, const NormSpec& b) {
    if (a.is_lp() != b.is_lp()) return false;
    if (a.is_lp()) return a.lp() == b.lp();
    return a.gauge_ref().body == b.gauge_ref().body;
  }

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Convex bodies
// ---------------------------------------------------------------------------

struct NormBall {
  LpNorm norm;
  double radius = 1.0;
  Vec center;
};

struct Polytope {
  std::vector<Vec> input_vertices;
  Hull hull;
};

// cl conv(cloud U rB U -cloud). The ball is replaced by radius r points along
// ball_directions unit directions of ball_norm, so membership is that of an
// inner polytope.
struct GaugeBody {
  std::vector<Vec> cloud;
  double r = 0.0;
  LpNorm ball_norm = LpNorm::l(2.0);
  int ball_directions = 64;
  Hull hull;
};

namespace detail {

inline std::vector<Vec> direction_set(int dim, int count) {
  std::vector<Vec> dirs;
  if (dim == 1) return {Vec{1.0}, Vec{-1.0}};
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      double a = 2.0 * std::numbers::pi * k / count;
      dirs.push_back(Vec{std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  // Fibonacci sphere.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    double z = 1.0 - (2.0 * k + 1.0) / count;
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    double a = golden * k;
    dirs.push_back(Vec{rho * std::cos(a), rho * std::sin(a), z});
  }
  return dirs;
}

inline double polytope_scale(const Hull& h) {
  double s = 0.0;
  for (const auto& v : h.vertices) s = std::max(s, norm_inf(v));
  return std::max(s, 1e-300);
}

}  // namespace detail

class ConvexBody {
 public:
  using Repr = std::variant<NormBall, Polytope, GaugeBody>;

  static ConvexBody ball(LpNorm norm, double radius, Vec center) {
    norm.validate(center.dim());
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw PreconditionError("ball radius must be positive");
    return ConvexBody(NormBall{std::move(norm), radius, center});
  }

  static ConvexBody unit_ball(LpNorm norm, int dim) {
    return ball(std::move(norm), 1.0, Vec::zero(dim));
  }

  static ConvexBody polytope(std::vector<Vec> vertices) {
    Hull h = convex_hull(vertices);
    return ConvexBody(Polytope{std::move(vertices), std::move(h)});
  }

  static ConvexBody gauge(std::vector<Vec> cloud, double r,
                          LpNorm ball_norm = LpNorm::l(2.0),
                          int ball_directions = 0) {
    if (cloud.empty()) throw PreconditionError("gauge body: empty cloud");
    if (!(r > 0.0)) throw PreconditionError("gauge body: r must be positive");
    const int d = cloud.front().dim();
    ball_norm.validate(d);
    if (ball_directions <= 0) ball_directions = d == 3 ? 256 : 64;
    std::vector<Vec> pts;
    pts.reserve(2 * cloud.size() + static_cast<std::size_t>(ball_directions));
    for (const auto& p : cloud) {
      p.require_same(cloud.front());
      pts.push_back(p);
      pts.push_back(-p);
    }
    for (const auto& u : detail::direction_set(d, ball_directions))
      pts.push_back(u * (r / detail::lp_eval(ball_norm, u)));
    Hull h = convex_hull(pts);
    return ConvexBody(GaugeBody{std::move(cloud), r, std::move(ball_norm),
                                ball_directions, std::move(h)});
  }

  const Repr& repr() const { return repr_; }
  bool is_ball() const { return std::holds_alternative<NormBall>(repr_); }
  const NormBall& as_ball() const { return std::get<NormBall>(repr_); }

  // Facet description for polytopal bodies, nullptr for norm balls.
  const Hull* hull() const {
    if (auto* p = std::get_if<Polytope>(&repr_)) return &p->hull;
    if (auto* g = std::get_if<GaugeBody>(&repr_)) return &g->hull;
    return nullptr;
  }

  int dim() const {
    if (is_ball()) return as_ball().center.dim();
    return hull()->vertices.front().dim();
  }

  std::string kind_name() const {
    return std::visit(
        [](const auto& r) -> std::string {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, NormBall>) return "ball";
          else if constexpr (std::is_same_v<T, Polytope>) return "polytope";
          else return "gauge";
        },
        repr_);
  }

  // Largest |x|_inf over the body; a length scale for relative tolerances.
  double scale() const {
    if (is_ball()) {
      const auto& b = as_ball();
      return norm_inf(b.center) + euclid_radius_bound();
    }
    return detail::polytope_scale(*hull());
  }

  // Upper bound on the Euclidean distance from the centre of a ball to its
  // boundary; for polytopes the vertex circumradius about the centroid.
  double euclid_radius_bound() const {
    if (is_ball()) {
      const auto& b = as_ball();
      double wmin = 1.0;
      for (int i = 0; i < b.center.dim(); ++i) wmin = std::min(wmin, b.norm.weight(i));
      double per_axis = b.norm.is_inf() ? 1.0 / wmin : 1.0 / std::pow(wmin, 1.0 / b.norm.p);
      return b.radius * per_axis * std::sqrt(static_cast<double>(b.center.dim()));
    }
    double r = 0.0;
    for (const auto& v : hull()->vertices) r = std::max(r, norm2(v));
    return r;
  }

  bool contains(const Vec& x, double rel_tol = 1e-12) const {
    if (x.dim() != dim()) throw DimensionMismatch(x.dim(), dim());
    if (is_ball()) {
      const auto& b = as_ball();
      return detail::lp_eval(b.norm, x - b.center) <= b.radius * (1.0 + rel_tol);
    }
    const Hull& h = *hull();
    const double slack = rel_tol * detail::polytope_scale(h);
    for (const auto& f : h.facets)
      if (dot(f.normal, x) - f.offset > slack) return false;
    return true;
  }

  ConvexBody translated(const Vec& v) const {
    return std::visit(
        [&](const auto& r) -> ConvexBody {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, NormBall>) {
            return ball(r.norm, r.radius, r.center + v);
          } else if constexpr (std::is_same_v<T, Polytope>) {
            std::vector<Vec> vs = r.input_vertices;
            for (auto& p : vs) p += v;
            return polytope(std::move(vs));
          } else {
            // A translated gauge body is no longer symmetric; keep it
            // polytopal.
            std::vector<Vec> vs = r.hull.vertices;
            for (auto& p : vs) p += v;
            return polytope(std::move(vs));
          }
        },
        repr_);
  }

  ConvexBody scaled(double lambda) const {
    if (!(lambda > 0.0)) throw PreconditionError("scale factor must be positive");
    return std::visit(
        [&](const auto& r) -> ConvexBody {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, NormBall>) {
            return ball(r.norm, r.radius * lambda, r.center * lambda);
          } else if constexpr (std::is_same_v<T, Polytope>) {
            std::vector<Vec> vs = r.input_vertices;
            for (auto& p : vs) p *= lambda;
            return polytope(std::move(vs));
          } else {
            std::vector<Vec> cl = r.cloud;
            for (auto& p : cl) p *= lambda;
            return gauge(std::move(cl), r.r * lambda, r.ball_norm, r.ball_directions);
          }
        },
        repr_);
  }

 private:
  explicit ConvexBody(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

inline NormSpec NormSpec::gauge(std::shared_ptr<const ConvexBody> body,
                                std::string id) {
  if (!body) throw PreconditionError("gauge norm needs a body");
  NormSpec s;
  s.kind_ = GaugeNorm{std::move(body), std::move(id)};
  return s;
}

// ---------------------------------------------------------------------------
// Gauges
// ---------------------------------------------------------------------------

// Closed form max_f (n_f . x) / offset_f; requires every offset > 0, i.e. the
// origin strictly inside.
inline double polytope_gauge(const Hull& h, const Vec& x) {
  double m = 0.0;
  for (const auto& f : h.facets) {
    if (!(f.offset > 0.0))
      throw PreconditionError("gauge: origin is not interior to the body");
    m = std::max(m, dot(f.normal, x) / f.offset);
  }
  return m;
}

namespace detail {

// Euclidean radius of a ball about the origin contained in the body.
inline double origin_clearance(const ConvexBody& body) {
  if (body.is_ball()) {
    const auto& b = body.as_ball();
    double slack = b.radius - lp_eval(b.norm, -b.center);
    if (!(slack > 0.0)) return 0.0;
    // N(u) <= (sum w_i)^(1/p) for Euclidean unit u.
    double wsum = 0.0, wmax = 0.0;
    for (int i = 0; i < b.center.dim(); ++i) {
      wsum += b.norm.weight(i);
      wmax = std::max(wmax, b.norm.weight(i));
    }
    double bound = b.norm.is_inf() ? wmax : std::pow(wsum, 1.0 / b.norm.p);
    return slack / bound;
  }
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : body.hull()->facets) m = std::min(m, f.offset);
  return std::max(m, 0.0);
}

}  // namespace detail

// Minkowski functional inf{t > 0 : x in tV} by bisection on membership.
inline double gauge_eval(const ConvexBody& body, const Vec& x, double tol = 1e-9) {
  if (x.dim() != body.dim()) throw DimensionMismatch(x.dim(), body.dim());
  if (!(tol > 0.0)) throw PreconditionError("gauge: tolerance must be positive");
  const double clearance = detail::origin_clearance(body);
  if (!(clearance > 0.0))
    throw PreconditionError("gauge: origin is not interior to the body");
  const double len = norm2(x);
  if (len == 0.0) return 0.0;
  double hi = len / clearance;
  // Membership test at the scale where x lands exactly on the inner ball has
  // to pass; failing it means the oracle is inconsistent.
  if (!body.contains(x * (1.0 / hi)))
    throw NumericalFailure("gauge: x does not enter tV for the bounding t");
  double lo = 0.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (body.contains(x * (1.0 / mid), 0.0))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Norm evaluation. Gauge norms of polytopal bodies use the facet closed form,
// which agrees with gauge_eval to its tolerance.
inline double norm_eval(const NormSpec& spec, const Vec& x) {
  if (spec.is_lp()) return detail::lp_eval(spec.lp(), x);
  const ConvexBody& body = *spec.gauge_ref().body;
  if (x.dim() != body.dim()) throw DimensionMismatch(x.dim(), body.dim());
  if (body.is_ball()) {
    const auto& b = body.as_ball();
    if (norm_inf(b.center) != 0.0)
      throw PreconditionError("gauge norm of a ball needs the ball centred at 0");
    return detail::lp_eval(b.norm, x) / b.radius;
  }
  return polytope_gauge(*body.hull(), x);
}

// ---------------------------------------------------------------------------
// Dual norms and supporting functionals
// ---------------------------------------------------------------------------

// max f(x)/||x|| over a deterministic direction set with local refinement.
// Hoelder closed form for p-norms; gauge norms of polytopes additionally try
// every vertex direction, which makes the estimate exact there.
inline double dual_norm_estimate(const NormSpec& spec, const LinearFunctional& f,
                                 int nsamples = 4096) {
  const int d = f.dim();
  if (f.is_zero()) throw PreconditionError("dual norm of the zero functional");
  if (nsamples < 2 * d) throw PreconditionError("dual norm: need nsamples >= 2d");
  if (spec.is_lp()) return detail::lp_dual(spec.lp(), f.coeffs);

  auto ratio = [&](const Vec& u) {
    double n = norm_eval(spec, u);
    return n > 0.0 ? f(u) / n : -std::numeric_limits<double>::infinity();
  };
  double best = -std::numeric_limits<double>::infinity();
  Vec best_u(d);
  for (const auto& u : detail::direction_set(d, nsamples)) {
    double r = ratio(u);
    if (r > best) best = r, best_u = u;
  }
  const ConvexBody& body = *spec.gauge_ref().body;
  if (const Hull* h = body.hull()) {
    for (const auto& v : h->vertices) {
      double r = ratio(v);
      if (r > best) best = r, best_u = v * (1.0 / norm2(v));
    }
  }
  if (d == 2) {
    double a0 = std::atan2(best_u[1], best_u[0]);
    double span = 2.0 * std::numbers::pi / nsamples;
    double lo = a0 - span, hi = a0 + span;
    for (int it = 0; it < 80; ++it) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      double r1 = ratio(Vec{std::cos(m1), std::sin(m1)});
      double r2 = ratio(Vec{std::cos(m2), std::sin(m2)});
      best = std::max({best, r1, r2});
      if (r1 < r2) lo = m1; else hi = m2;
    }
  } else if (d == 3) {
    double step = 0.5 / std::sqrt(static_cast<double>(nsamples));
    Vec u = best_u;
    while (step > 1e-12) {
      bool improved = false;
      for (int axis = 0; axis < 3; ++axis) {
        for (double sgn : {-1.0, 1.0}) {
          Vec w = u;
          w[axis] += sgn * step;
          w *= 1.0 / norm2(w);
          double r = ratio(w);
          if (r > best) best = r, u = w, improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  return best;
}

inline double dual_norm(const NormSpec& spec, const LinearFunctional& f) {
  return dual_norm_estimate(spec, f, 4096);
}

inline LinearFunctional normalize_unit_dual(const NormSpec& spec, LinearFunctional f) {
  double dn = dual_norm(spec, f);
  f.coeffs *= 1.0 / dn;
  f.unit_dual = true;
  return f;
}

// A supporting functional x* with x*(x0) = c and x* <= c on the body.
struct Support {
  LinearFunctional f;
  double c = 0.0;
};

namespace detail {

inline std::vector<Vec> ball_subgradients(const NormBall& b, const Vec& y, double tol) {
  const int d = y.dim();
  const LpNorm& n = b.norm;
  const double ny = lp_eval(n, y);
  const double zero_tol = tol * std::max(ny, norm_inf(y));
  std::vector<Vec> gens;
  if (n.is_inf()) {
    for (int i = 0; i < d; ++i) {
      if (n.weight(i) * std::abs(y[i]) >= ny - zero_tol) {
        Vec g(d);
        g[i] = n.weight(i) * (y[i] > 0 ? 1.0 : -1.0);
        gens.push_back(g);
      }
    }
    return gens;
  }
  if (n.p == 1.0) {
    gens.push_back(Vec(d));
    for (int i = 0; i < d; ++i) {
      std::vector<Vec> next;
      if (std::abs(y[i]) > zero_tol) {
        for (auto g : gens) {
          g[i] = n.weight(i) * (y[i] > 0 ? 1.0 : -1.0);
          next.push_back(g);
        }
      } else {
        for (const auto& g0 : gens) {
          for (double s : {1.0, -1.0}) {
            Vec g = g0;
            g[i] = s * n.weight(i);
            next.push_back(g);
          }
        }
      }
      gens = std::move(next);
    }
    return gens;
  }
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    double v = y[i] / ny;
    g[i] = n.weight(i) * (v >= 0 ? 1.0 : -1.0) * std::pow(std::abs(v), n.p - 1.0);
  }
  return {g};
}

}  // namespace detail

// Generators of the cone of supporting functionals at x0, each normalised to
// unit dual norm in the ambient norm.
inline std::vector<Support> support_functionals(const ConvexBody& body, const Vec& x0,
                                                const NormSpec& ambient,
                                                double tol = 1e-9) {
  if (x0.dim() != body.dim()) throw DimensionMismatch(x0.dim(), body.dim());
  std::vector<Vec> gens;
  if (body.is_ball()) {
    const auto& b = body.as_ball();
    Vec y = x0 - b.center;
    double ny = detail::lp_eval(b.norm, y);
    if (std::abs(ny - b.radius) > tol * b.radius)
      throw PreconditionError("support: x0 is not on the boundary");
    gens = detail::ball_subgradients(b, y, tol);
  } else {
    const Hull& h = *body.hull();
    const double slack = tol * detail::polytope_scale(h);
    bool inside = true;
    for (const auto& f : h.facets) {
      double gap = dot(f.normal, x0) - f.offset;
      if (gap > slack) inside = false;
      if (std::abs(gap) <= slack) gens.push_back(f.normal);
    }
    if (!inside || gens.empty())
      throw PreconditionError("support: x0 is not on the boundary");
  }
  if (gens.empty())
    throw NumericalFailure("support: no supporting functional found");
  std::vector<Support> out;
  for (const auto& g : gens) {
    LinearFunctional f(g);
    if (f.is_zero()) continue;
    bool same_norm = body.is_ball() && ambient.is_lp() && ambient.lp() == body.as_ball().norm;
    if (same_norm) {
      // Subgradients of the body's own norm already have dual norm one.
      f.coeffs *= 1.0 / detail::lp_dual(ambient.lp(), f.coeffs);
      f.unit_dual = true;
    } else {
      f = normalize_unit_dual(ambient, f);
    }
    out.push_back({f, f(x0)});
  }
  return out;
}

// Largest rho with about + rho * B_ambient inside the body; exact for
// polytopes and for balls of the ambient norm.
inline double inner_radius(const ConvexBody& body, const NormSpec& ambient, const Vec& about) {
  if (body.is_ball()) {
    const auto& b = body.as_ball();
    double slack = b.radius - detail::lp_eval(b.norm, about - b.center);
    if (ambient.is_lp() && ambient.lp() == b.norm) return slack;
    // Compare norms along a direction fan: ||u||_body <= K ||u||_ambient.
    double k = 0.0;
    for (const auto& u : detail::direction_set(about.dim(), 4096))
      k = std::max(k, detail::lp_eval(b.norm, u) / norm_eval(ambient, u));
    return slack / (k * 1.001);
  }
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : body.hull()->facets) {
    double gap = f.offset - dot(f.normal, about);
    m = std::min(m, gap / dual_norm(ambient, LinearFunctional(f.normal)));
  }
  return m;
}

// max over the body of ||x - about||_ambient for polytopal bodies (attained at
// a vertex).
inline double outer_radius(const ConvexBody& body, const NormSpec& ambient, const Vec& about) {
  const Hull* h = body.hull();
  if (!h) throw PreconditionError("outer_radius: polytopal body expected");
  double m = 0.0;
  for (const auto& v : h->vertices) m = std::max(m, norm_eval(ambient, v - about));
  return m;
}

}  // namespace steinhaus
