#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "steinhaus/geometry.hpp"

namespace steinhaus {

using BodyPtr = std::shared_ptr<const ConvexBody>;

inline BodyPtr make_body(ConvexBody b) {
  return std::make_shared<const ConvexBody>(std::move(b));
}

// Upper bound on the ambient-norm diameter of the body.
inline double diameter_bound(const ConvexBody& body, const NormSpec& ambient) {
  if (const Hull* h = body.hull()) {
    double m = 0.0;
    for (std::size_t i = 0; i < h->vertices.size(); ++i)
      for (std::size_t j = i + 1; j < h->vertices.size(); ++j)
        m = std::max(m, norm_eval(ambient, h->vertices[i] - h->vertices[j]));
    return m;
  }
  const auto& b = body.as_ball();
  if (ambient.is_lp() && ambient.lp() == b.norm) return 2.0 * b.radius;
  double k = 0.0;
  for (const auto& u : detail::direction_set(body.dim(), 4096))
    k = std::max(k, norm_eval(ambient, u) / detail::lp_eval(b.norm, u));
  return 2.0 * b.radius * k * 1.001;
}

// Vertex centroid for polytopes, centre for balls, origin for gauge bodies.
inline Vec interior_point(const ConvexBody& body) {
  Vec p = std::visit(
      [](const auto& r) -> Vec {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, NormBall>) {
          return r.center;
        } else if constexpr (std::is_same_v<T, Polytope>) {
          Vec s = Vec::zero(r.hull.vertices.front().dim());
          for (const auto& v : r.hull.vertices) s += v;
          return s * (1.0 / static_cast<double>(r.hull.vertices.size()));
        } else {
          return Vec::zero(r.hull.vertices.front().dim());
        }
      },
      body.repr());
  if (const Hull* h = body.hull()) {
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& f : h->facets) clearance = std::min(clearance, f.offset - dot(f.normal, p));
    if (!(clearance >= 1e-6 * diameter_bound(body, LpNorm::l(2.0))))
      throw PreconditionError("interior_point: body has no interior clearance");
  }
  return p;
}

// The point z0 + t dir on the boundary, t > 0. Exact for polytopes and for
// rays leaving a ball's centre; bisection to tol otherwise.
inline Vec boundary_project(const ConvexBody& body, const Vec& z0, const Vec& dir,
                            double tol = 1e-13) {
  z0.require_same(dir);
  if (norm_inf(dir) == 0.0) throw PreconditionError("boundary_project: zero direction");
  if (!body.contains(z0)) throw PreconditionError("boundary_project: start point outside body");
  if (const Hull* h = body.hull()) {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& f : h->facets) {
      double rate = dot(f.normal, dir);
      if (rate > 0.0) t = std::min(t, (f.offset - dot(f.normal, z0)) / rate);
    }
    if (!std::isfinite(t)) throw PreconditionError("boundary_project: unbounded ray");
    return z0 + dir * t;
  }
  const auto& b = body.as_ball();
  if (z0 == b.center) return z0 + dir * (b.radius / detail::lp_eval(b.norm, dir));
  double lo = 0.0;
  double hi = 2.0 * body.euclid_radius_bound() / norm2(dir) + norm2(z0 - b.center) / norm2(dir);
  if (body.contains(z0 + dir * hi, 0.0))
    throw PreconditionError("boundary_project: ray never exits the bounding box");
  const double abs_tol = tol * std::max(1.0, body.scale());
  while ((hi - lo) * norm2(dir) > abs_tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (body.contains(z0 + dir * mid, 0.0)) lo = mid; else hi = mid;
  }
  return z0 + dir * (0.5 * (lo + hi));
}

// U = boundary(body) intersected with x0 + eps B_ambient.
struct BoundaryPatch {
  BodyPtr body;
  Vec x0;
  double eps = 0.0;
  NormSpec ambient;

  int dim() const { return x0.dim(); }
};

// A patch whose body is a ball of its own ambient norm.
struct SphereView {
  NormSpec norm;
  Vec center;
  double radius = 1.0;
};

inline std::optional<SphereView> sphere_view(const ConvexBody& body, const NormSpec& ambient) {
  if (body.is_ball()) {
    const auto& b = body.as_ball();
    if (ambient.is_lp() && ambient.lp() == b.norm) return SphereView{ambient, b.center, b.radius};
    return std::nullopt;
  }
  if (!ambient.is_lp() && ambient.gauge_ref().body.get() == &body)
    return SphereView{ambient, Vec::zero(body.dim()), 1.0};
  return std::nullopt;
}

inline bool on_boundary(const ConvexBody& body, const Vec& x, double tol) {
  if (body.is_ball()) {
    const auto& b = body.as_ball();
    return std::abs(detail::lp_eval(b.norm, x - b.center) - b.radius) <= tol * b.radius;
  }
  const Hull& h = *body.hull();
  const double slack = tol * detail::polytope_scale(h);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : h.facets) worst = std::max(worst, dot(f.normal, x) - f.offset);
  return std::abs(worst) <= slack;
}

inline BoundaryPatch make_patch(BodyPtr body, Vec x0, double eps, NormSpec ambient,
                                double tol = 1e-9) {
  if (!body) throw PreconditionError("patch: null body");
  if (x0.dim() != body->dim()) throw DimensionMismatch(x0.dim(), body->dim());
  if (!(eps > 0.0)) throw PreconditionError("patch: eps must be positive");
  if (!on_boundary(*body, x0, tol)) throw PreconditionError("patch: x0 is not on the boundary");
  if (auto sv = sphere_view(*body, ambient)) {
    if (!(eps < sv->radius))
      throw PreconditionError("patch: eps must lie in (0, radius) on a norm sphere");
  } else if (!(eps < diameter_bound(*body, ambient))) {
    throw PreconditionError("patch: eps must be below the body diameter");
  }
  return BoundaryPatch{std::move(body), x0, eps, std::move(ambient)};
}

namespace detail {

// Largest angle along the fan side where the projected boundary stays inside
// the patch, found by a coarse scan followed by bisection.
template <class Dist>
double fan_limit(Dist&& dist, double eps, double max_angle) {
  constexpr int kScan = 512;
  double inside = 0.0;
  for (int k = 1; k <= kScan; ++k) {
    double a = max_angle * k / kScan;
    if (dist(a) >= eps) {
      double lo = inside, hi = a;
      for (int it = 0; it < 64; ++it) {
        double mid = 0.5 * (lo + hi);
        if (dist(mid) < eps) lo = mid; else hi = mid;
      }
      return lo;
    }
    inside = a;
  }
  return inside;
}

}  // namespace detail

// n boundary points of the patch: x0 plus rays from the interior point along
// a fan of directions around x0. In 2D the result is ordered along the
// boundary and the fan for 2n+1 points contains the fan for n.
inline std::vector<Vec> patch_sample(const BoundaryPatch& patch, int n) {
  if (n < 16) throw PreconditionError("patch_sample: need n >= 16");
  const ConvexBody& body = *patch.body;
  const int d = patch.dim();
  if (d == 1) throw PreconditionError("patch_sample: boundary patch in R^1 is degenerate");
  const Vec z = interior_point(body);
  const Vec u0 = patch.x0 - z;
  const Vec uhat = u0 * (1.0 / norm2(u0));
  auto dist = [&](const Vec& dir) {
    return norm_eval(patch.ambient, boundary_project(body, z, dir) - patch.x0);
  };

  std::vector<Vec> out;
  if (d == 2) {
    const Vec vhat{-uhat[1], uhat[0]};
    auto dir = [&](double a) { return uhat * std::cos(a) + vhat * std::sin(a); };
    const double cap = std::numbers::pi * (1.0 - 1e-9);
    const double lim_plus = detail::fan_limit([&](double a) { return dist(dir(a)); }, patch.eps, cap);
    const double lim_minus = detail::fan_limit([&](double a) { return dist(dir(-a)); }, patch.eps, cap);
    const int m_minus = (n - 1) / 2;
    const int m_plus = (n - 1) - m_minus;
    for (int k = m_minus; k >= 1; --k)
      out.push_back(boundary_project(body, z, dir(-lim_minus * k / (m_minus + 1))));
    out.push_back(patch.x0);
    for (int k = 1; k <= m_plus; ++k)
      out.push_back(boundary_project(body, z, dir(lim_plus * k / (m_plus + 1))));
  } else {
    // Orthonormal frame around uhat.
    Vec helper = std::abs(uhat[0]) < 0.9 ? Vec{1.0, 0.0, 0.0} : Vec{0.0, 1.0, 0.0};
    Vec e1 = cross(uhat, helper);
    e1 *= 1.0 / norm2(e1);
    Vec e2 = cross(uhat, e1);
    auto dir = [&](double polar, double azimuth) {
      return uhat * std::cos(polar) +
             (e1 * std::cos(azimuth) + e2 * std::sin(azimuth)) * std::sin(polar);
    };
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double cap = std::numbers::pi * (1.0 - 1e-9);
    out.push_back(patch.x0);
    for (int k = 1; k < n; ++k) {
      double az = golden * k;
      double lim = detail::fan_limit([&](double a) { return dist(dir(a, az)); }, patch.eps, cap);
      double frac = std::sqrt(static_cast<double>(k) / n);
      out.push_back(boundary_project(body, z, dir(lim * frac, az)));
    }
  }

  std::vector<Vec> kept;
  kept.reserve(out.size());
  for (const auto& p : out) {
    if (norm_eval(patch.ambient, p - patch.x0) >= patch.eps) continue;
    if (!kept.empty() && kept.back() == p) continue;
    kept.push_back(p);
  }
  if (static_cast<int>(kept.size()) < n)
    throw PreconditionError("patch_sample: patch is degenerate (too few distinct points)");
  return kept;
}

// ---------------------------------------------------------------------------
// Flatness
// ---------------------------------------------------------------------------

struct FlatWitness {
  Support support;
  Vec z0;            // patch sample furthest below the supporting hyperplane
  double deviation;  // c - f(z0)
};

struct Flat {
  Support support;
  int candidate_count = 1;
};

// One witness per candidate functional: at a vertex no single patch point lies
// strictly below every supporting hyperplane, so margin is the smallest of the
// per-functional deviations.
struct NotFlat {
  std::vector<FlatWitness> witnesses;
  double margin = 0.0;

  const FlatWitness& primary() const { return witnesses.front(); }
};

using FlatnessVerdict = std::variant<Flat, NotFlat>;

inline bool is_flat(const FlatnessVerdict& v) { return std::holds_alternative<Flat>(v); }

inline FlatnessVerdict is_flattening_point(const BoundaryPatch& patch, int n = 256,
                                           double tol = 1e-7) {
  const auto candidates = support_functionals(*patch.body, patch.x0, patch.ambient);
  if (candidates.empty()) throw NumericalFailure("flatness: no supporting functional");
  const auto samples = patch_sample(patch, n);
  NotFlat nf;
  nf.margin = std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) {
    double dev = -std::numeric_limits<double>::infinity();
    Vec arg = patch.x0;
    for (const auto& x : samples) {
      double gap = cand.c - cand.f(x);
      if (gap > dev) dev = gap, arg = x;
    }
    if (dev <= tol) return Flat{cand, static_cast<int>(candidates.size())};
    nf.witnesses.push_back({cand, arg, dev});
    nf.margin = std::min(nf.margin, dev);
  }
  return nf;
}

// ---------------------------------------------------------------------------
// Gauge renorming
// ---------------------------------------------------------------------------

struct GaugeRenorm {
  BodyPtr body;     // V, symmetric, origin interior
  double delta = 0.0;
  Vec offset;       // interior point of K mapped to the origin
  Vec x0_local;     // x0 - offset
  NormSpec norm;    // gauge of V
};

// V = cl conv(A U (delta/4) B U -A) with A the delta/2 patch of K around x0,
// after moving an interior point of K to the origin.
inline GaugeRenorm build_gauge_body(const ConvexBody& bodyK, const Vec& x0,
                                    const NormSpec& ambient = LpNorm::l(2.0),
                                    int nsamples = 256) {
  if (!ambient.is_lp()) throw PreconditionError("build_gauge_body: ambient norm must be a p-norm");
  if (!on_boundary(bodyK, x0, 1e-9)) throw PreconditionError("build_gauge_body: x0 not on boundary");
  const Vec z = interior_point(bodyK);
  auto shifted = make_body(bodyK.translated(-z));
  const Vec x0_local = x0 - z;
  const double delta = norm_eval(ambient, x0_local);
  auto patchA = make_patch(shifted, x0_local, delta / 2.0, ambient);
  auto cloud = patch_sample(patchA, nsamples);
  auto V = make_body(ConvexBody::gauge(std::move(cloud), delta / 4.0, ambient.lp()));
  NormSpec gauge = NormSpec::gauge(V, "V");
  const double mu = norm_eval(gauge, x0_local);
  if (std::abs(mu - 1.0) > 1e-9)
    throw NumericalFailure("build_gauge_body: x0 is not extreme in V (clearance below delta/4)");
  return GaugeRenorm{V, delta, z, x0_local, gauge};
}

}  // namespace steinhaus
