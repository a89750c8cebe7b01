#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "steinhaus/vector.hpp"

namespace steinhaus {

// Half-space {x : normal . x <= offset}, normal of unit Euclidean length.
struct Facet {
  Vec normal;
  double offset = 0.0;
};

struct Hull {
  std::vector<Vec> vertices;
  std::vector<Facet> facets;
};

namespace detail {

inline double hull_scale(const std::vector<Vec>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, norm_inf(p));
  return std::max(s, 1e-300);
}

inline Hull hull_1d(const std::vector<Vec>& pts) {
  auto [lo, hi] = std::minmax_element(
      pts.begin(), pts.end(),
      [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
  if ((*hi)[0] <= (*lo)[0])
    throw PreconditionError("convex hull: 1D point set has no interior");
  Hull h;
  h.vertices = {*lo, *hi};
  h.facets = {{Vec{1.0}, (*hi)[0]}, {Vec{-1.0}, -(*lo)[0]}};
  return h;
}

inline double orient2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; collinear points are dropped so every edge is a
// distinct facet.
inline Hull hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3)
    throw PreconditionError("convex hull: need 3 distinct points in 2D");
  const double eps = 1e-14 * hull_scale(pts) * hull_scale(pts);
  std::vector<Vec> ring(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient2(ring[k - 2], ring[k - 1], p) <= eps) --k;
    ring[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient2(ring[k - 2], ring[k - 1], pts[i]) <= eps) --k;
    ring[k++] = pts[i];
  }
  ring.resize(k - 1);
  if (ring.size() < 3)
    throw PreconditionError("convex hull: 2D point set has no interior");
  Hull h;
  h.vertices = ring;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec& a = ring[i];
    const Vec& b = ring[(i + 1) % ring.size()];
    Vec n{b[1] - a[1], a[0] - b[0]};
    n *= 1.0 / norm2(n);
    h.facets.push_back({n, dot(n, a)});
  }
  return h;
}

// Incremental hull with a visible-face / horizon sweep. Quadratic, which is
// fine for the few thousand points bodies carry here.
inline Hull hull_3d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.coords().begin(), a.coords().end(),
                                        b.coords().begin(), b.coords().end());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 4)
    throw PreconditionError("convex hull: need 4 distinct points in 3D");
  const double scale = hull_scale(pts);
  const double eps = 1e-11 * scale;

  std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  double best = -1.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double d = norm2(pts[i] - pts[i0]);
    if (d > best) best = d, i1 = i;
  }
  best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = norm2(cross(pts[i1] - pts[i0], pts[i] - pts[i0]));
    if (d > best) best = d, i2 = i;
  }
  Vec n012 = cross(pts[i1] - pts[i0], pts[i2] - pts[i0]);
  if (norm2(n012) <= eps * scale)
    throw PreconditionError("convex hull: 3D point set is collinear");
  n012 *= 1.0 / norm2(n012);
  best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = std::abs(dot(n012, pts[i] - pts[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps)
    throw PreconditionError("convex hull: 3D point set has no interior");

  struct Tri {
    std::size_t a, b, c;
    Vec n;
    double off;
    bool alive;
  };
  std::vector<Tri> tris;
  const Vec inner = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) * 0.25;
  auto make = [&](std::size_t a, std::size_t b, std::size_t c) {
    Vec n = cross(pts[b] - pts[a], pts[c] - pts[a]);
    double len = norm2(n);
    n *= 1.0 / len;
    if (dot(n, inner - pts[a]) > 0) {
      std::swap(b, c);
      n = -n;
    }
    tris.push_back({a, b, c, n, dot(n, pts[a]), true});
  };
  make(i0, i1, i2);
  make(i0, i1, i3);
  make(i0, i2, i3);
  make(i1, i2, i3);

  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    bool any = false;
    for (auto& t : tris) {
      if (!t.alive || dot(t.n, pts[p]) - t.off <= eps) continue;
      any = true;
      t.alive = false;
      edges[{t.a, t.b}]++;
      edges[{t.b, t.c}]++;
      edges[{t.c, t.a}]++;
    }
    if (!any) continue;
    for (const auto& [e, cnt] : edges) {
      if (edges.count({e.second, e.first})) continue;
      // Horizon edge keeps its orientation; the new face is outward by
      // construction, make() re-checks against the interior point.
      make(e.first, e.second, p);
    }
    std::erase_if(tris, [](const Tri& t) { return !t.alive; });
  }

  Hull h;
  std::vector<bool> used(pts.size(), false);
  for (const auto& t : tris) {
    used[t.a] = used[t.b] = used[t.c] = true;
    bool dup = false;
    for (const auto& f : h.facets) {
      if (norm2(f.normal - t.n) < 1e-9 && std::abs(f.offset - t.off) < 1e-9 * scale) {
        dup = true;
        break;
      }
    }
    if (!dup) h.facets.push_back({t.n, t.off});
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (used[i]) h.vertices.push_back(pts[i]);
  return h;
}

}  // namespace detail

inline Hull convex_hull(const std::vector<Vec>& pts) {
  if (pts.empty()) throw PreconditionError("convex hull: empty point set");
  const int d = pts.front().dim();
  for (const auto& p : pts) p.require_same(pts.front());
  switch (d) {
    case 1:
      return detail::hull_1d(pts);
    case 2:
      return detail::hull_2d(pts);
    default:
      return detail::hull_3d(pts);
  }
}

}  // namespace steinhaus
