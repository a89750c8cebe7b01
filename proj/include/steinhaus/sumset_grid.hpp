#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "steinhaus/interval1d.hpp"
#include "steinhaus/paths.hpp"

namespace steinhaus {

inline constexpr std::int64_t kMaxCells = std::int64_t{1} << 30;

using CellIndex = std::array<std::int64_t, 3>;

// Occupancy of the cubic cells of side h centred at g * h, g in Z^d. The grid
// covers the index box [lo, lo + dims).
class GridSet {
 public:
  GridSet() = default;

  GridSet(int dim, double h, CellIndex lo, CellIndex dims) : dim_(dim), h_(h), lo_(lo), dims_(dims) {
    if (dim < 1 || dim > 3) throw PreconditionError("grid: dimension must be 1, 2 or 3");
    if (!(h > 0.0)) throw PreconditionError("grid: spacing must be positive");
    std::int64_t total = 1;
    for (int a = 0; a < 3; ++a) {
      if (a >= dim) dims_[a] = 1, lo_[a] = 0;
      if (dims_[a] < 0) throw PreconditionError("grid: negative extent");
      if (dims_[a] > 0 && total > kMaxCells / dims_[a]) throw capacity(dims_);
      total *= dims_[a];
    }
    if (total > kMaxCells) throw capacity(dims_);
    words_.assign(static_cast<std::size_t>((total + 63) / 64), 0);
  }

  static GridSet empty_set(int dim, double h) { return GridSet(dim, h, {0, 0, 0}, {0, 0, 0}); }

  int dim() const { return dim_; }
  double h() const { return h_; }
  const CellIndex& lo() const { return lo_; }
  const CellIndex& dims() const { return dims_; }
  Vec origin() const {
    Vec v(dim_);
    for (int a = 0; a < dim_; ++a) v[a] = static_cast<double>(lo_[a]) * h_;
    return v;
  }
  std::int64_t total_cells() const { return dims_[0] * dims_[1] * dims_[2]; }

  bool in_box(const CellIndex& g) const {
    for (int a = 0; a < dim_; ++a)
      if (g[a] < lo_[a] || g[a] >= lo_[a] + dims_[a]) return false;
    return true;
  }

  bool test(const CellIndex& g) const {
    if (!in_box(g)) return false;
    auto k = linear(g);
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }

  void set(const CellIndex& g) {
    if (!in_box(g)) throw PreconditionError("grid: cell outside the grid box");
    auto k = linear(g);
    words_[k >> 6] |= std::uint64_t{1} << (k & 63);
  }

  std::int64_t count() const {
    std::int64_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const { return count() == 0; }

  std::vector<CellIndex> occupied() const {
    std::vector<CellIndex> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = std::countr_zero(bits);
        bits &= bits - 1;
        out.push_back(unlinear(static_cast<std::int64_t>(w) * 64 + b));
      }
    }
    return out;
  }

  Vec center(const CellIndex& g) const {
    Vec v(dim_);
    for (int a = 0; a < dim_; ++a) v[a] = static_cast<double>(g[a]) * h_;
    return v;
  }

  CellIndex cell_of(const Vec& x) const {
    CellIndex g{0, 0, 0};
    for (int a = 0; a < dim_; ++a) g[a] = static_cast<std::int64_t>(std::llround(x[a] / h_));
    return g;
  }

  GridSet translated(const CellIndex& v) const {
    GridSet out = *this;
    for (int a = 0; a < dim_; ++a) out.lo_[a] += v[a];
    return out;
  }

  // Same cells, independent of the grid box.
  friend bool operator==(const GridSet& x, const GridSet& y) {
    return x.dim_ == y.dim_ && x.h_ == y.h_ && x.occupied() == y.occupied();
  }

  bool subset_of(const GridSet& o) const {
    for (const auto& g : occupied())
      if (!o.test(g)) return false;
    return true;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  static CapacityError capacity(const CellIndex& dims) {
    return CapacityError("grid: " + std::to_string(dims[0]) + " x " + std::to_string(dims[1]) + " x " +
                         std::to_string(dims[2]) + " cells exceeds the 2^30 cap");
  }
  std::int64_t linear(const CellIndex& g) const {
    return ((g[2] - lo_[2]) * dims_[1] + (g[1] - lo_[1])) * dims_[0] + (g[0] - lo_[0]);
  }
  CellIndex unlinear(std::int64_t k) const {
    CellIndex g{0, 0, 0};
    g[0] = lo_[0] + k % dims_[0];
    k /= dims_[0];
    g[1] = lo_[1] + k % dims_[1];
    g[2] = lo_[2] + k / dims_[1];
    return g;
  }

  int dim_ = 1;
  double h_ = 1.0;
  CellIndex lo_{0, 0, 0};
  CellIndex dims_{0, 1, 1};
  std::vector<std::uint64_t> words_;
};

inline double occupied_measure(const GridSet& a) {
  return static_cast<double>(a.count()) * std::pow(a.h(), a.dim());
}

// ---------------------------------------------------------------------------
// Rasterisation
// ---------------------------------------------------------------------------

struct PointSetDesc {
  std::vector<Vec> points;
};
struct PolylineDesc {
  std::vector<Vec> vertices;
};
struct PathDesc {
  Path path;
};
struct PatchDesc {
  BoundaryPatch patch;
};
// Product of 1D sets, one per axis.
struct IntervalProductDesc {
  std::vector<IntervalUnion> axes;
};
struct BodyDesc {
  BodyPtr body;
};

using SetDescriptor =
    std::variant<PointSetDesc, PolylineDesc, PathDesc, PatchDesc, IntervalProductDesc, BodyDesc>;

namespace detail {

// Closed segment p-q against the closed box [lo, hi] (slab test).
inline bool segment_meets_box(const Vec& p, const Vec& q, const Vec& lo, const Vec& hi) {
  double t0 = 0.0, t1 = 1.0;
  for (int a = 0; a < p.dim(); ++a) {
    const double d = q[a] - p[a];
    if (d == 0.0) {
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
      continue;
    }
    double u = (lo[a] - p[a]) / d, v = (hi[a] - p[a]) / d;
    if (u > v) std::swap(u, v);
    t0 = std::max(t0, u);
    t1 = std::min(t1, v);
    if (t0 > t1) return false;
  }
  return true;
}

struct RasterBuilder {
  int dim;
  double h;
  double reach;  // h/2 + fatten: l-infinity radius of a fattened cell
  std::vector<CellIndex> cells;

  std::int64_t lo_index(double x) const { return static_cast<std::int64_t>(std::ceil((x - reach) / h - 1e-12)); }
  std::int64_t hi_index(double x) const { return static_cast<std::int64_t>(std::floor((x + reach) / h + 1e-12)); }

  void add_point(const Vec& p) {
    CellIndex lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < dim; ++a) lo[a] = lo_index(p[a]), hi[a] = hi_index(p[a]);
    for (auto z = lo[2]; z <= hi[2]; ++z)
      for (auto y = lo[1]; y <= hi[1]; ++y)
        for (auto x = lo[0]; x <= hi[0]; ++x) cells.push_back({x, y, z});
  }

  void add_segment(const Vec& p, const Vec& q) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(norm_inf(q - p) / h)));
    for (int k = 0; k < pieces; ++k) {
      const Vec a = lerp(p, q, static_cast<double>(k) / pieces);
      const Vec b = k + 1 == pieces ? q : lerp(p, q, static_cast<double>(k + 1) / pieces);
      CellIndex lo{0, 0, 0}, hi{0, 0, 0};
      for (int ax = 0; ax < dim; ++ax)
        lo[ax] = lo_index(std::min(a[ax], b[ax])), hi[ax] = hi_index(std::max(a[ax], b[ax]));
      for (auto z = lo[2]; z <= hi[2]; ++z)
        for (auto y = lo[1]; y <= hi[1]; ++y)
          for (auto x = lo[0]; x <= hi[0]; ++x) {
            Vec c(dim), blo(dim), bhi(dim);
            const CellIndex g{x, y, z};
            for (int ax = 0; ax < dim; ++ax) {
              c[ax] = static_cast<double>(g[ax]) * h;
              blo[ax] = c[ax] - reach;
              bhi[ax] = c[ax] + reach;
            }
            if (segment_meets_box(a, b, blo, bhi)) cells.push_back(g);
          }
    }
  }

  GridSet finish() const {
    if (cells.empty()) return GridSet::empty_set(dim, h);
    CellIndex lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      lo[a] = std::numeric_limits<std::int64_t>::max();
      hi[a] = std::numeric_limits<std::int64_t>::min();
    }
    for (const auto& g : cells)
      for (int a = 0; a < dim; ++a) lo[a] = std::min(lo[a], g[a]), hi[a] = std::max(hi[a], g[a]);
    CellIndex dims{1, 1, 1};
    for (int a = 0; a < dim; ++a) dims[a] = hi[a] - lo[a] + 1;
    GridSet out(dim, h, lo, dims);
    for (const auto& g : cells) out.set(g);
    return out;
  }
};

}  // namespace detail

struct RasterOptions {
  double fatten = 0.0;
  std::int64_t max_points = 50'000'000;
};

// A cell is occupied iff its closed cell, grown by fatten in l-infinity, meets
// the set. Exact for points, polylines and interval products; curved patches
// are traced through dense samples, bodies through a 5^d lattice per cell.
inline GridSet rasterize(const SetDescriptor& desc, double h, const RasterOptions& opt = {}) {
  if (!(h > 0.0)) throw PreconditionError("rasterize: spacing must be positive");
  if (!(opt.fatten >= 0.0)) throw PreconditionError("rasterize: fatten must be >= 0");
  const double reach = h / 2.0 + opt.fatten;

  auto builder = [&](int dim) { return detail::RasterBuilder{dim, h, reach, {}}; };
  auto unbounded = [](const Vec& p) {
    for (int a = 0; a < p.dim(); ++a)
      if (!std::isfinite(p[a])) throw PreconditionError("rasterize: descriptor is unbounded");
  };

  return std::visit(
      [&](const auto& d) -> GridSet {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, PointSetDesc>) {
          if (d.points.empty()) return GridSet::empty_set(1, h);
          auto b = builder(d.points.front().dim());
          for (const auto& p : d.points) unbounded(p), b.add_point(p);
          return b.finish();
        } else if constexpr (std::is_same_v<D, PolylineDesc>) {
          if (d.vertices.empty()) return GridSet::empty_set(1, h);
          auto b = builder(d.vertices.front().dim());
          for (const auto& p : d.vertices) unbounded(p);
          if (d.vertices.size() == 1) b.add_point(d.vertices.front());
          for (std::size_t i = 0; i + 1 < d.vertices.size(); ++i) b.add_segment(d.vertices[i], d.vertices[i + 1]);
          return b.finish();
        } else if constexpr (std::is_same_v<D, PathDesc>) {
          auto b = builder(d.path.dim());
          const auto& ps = d.path.points();
          for (std::size_t i = 0; i + 1 < ps.size(); ++i) b.add_segment(ps[i], ps[i + 1]);
          return b.finish();
        } else if constexpr (std::is_same_v<D, PatchDesc>) {
          const auto& patch = d.patch;
          auto b = builder(patch.dim());
          const auto coarse = patch_sample(patch, 65);
          if (patch.dim() == 2) {
            // Ordered fan joined by chords of length about h/4.
            double length = 0.0;
            for (std::size_t i = 0; i + 1 < coarse.size(); ++i) length += norm2(coarse[i + 1] - coarse[i]);
            const double n = std::max(65.0, std::ceil(4.0 * length / h) + 1.0);
            if (n > static_cast<double>(opt.max_points)) throw CapacityError("rasterize: patch needs too many samples");
            const auto pts = patch_sample(patch, static_cast<int>(n));
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) b.add_segment(pts[i], pts[i + 1]);
          } else {
            // Spiral cap with spacing about h/2.
            double ext = 0.0;
            for (const auto& p : coarse) ext = std::max(ext, norm2(p - patch.x0));
            const double area = std::numbers::pi * ext * ext;
            const double n = std::max(256.0, std::ceil(6.0 * area / (h * h)));
            if (n > static_cast<double>(opt.max_points)) throw CapacityError("rasterize: patch needs too many samples");
            for (const auto& p : patch_sample(patch, static_cast<int>(n))) b.add_point(p);
          }
          return b.finish();
        } else if constexpr (std::is_same_v<D, IntervalProductDesc>) {
          const int dim = static_cast<int>(d.axes.size());
          if (dim < 1 || dim > 3) throw PreconditionError("rasterize: product needs 1 to 3 axes");
          std::vector<std::vector<std::int64_t>> per_axis(static_cast<std::size_t>(dim));
          for (int a = 0; a < dim; ++a) {
            auto& out = per_axis[static_cast<std::size_t>(a)];
            for (const auto& iv : d.axes[static_cast<std::size_t>(a)].intervals()) {
              const double lo = static_cast<double>(iv.lo), hi = static_cast<double>(iv.hi);
              auto b = builder(1);
              for (auto g = b.lo_index(lo); g <= b.hi_index(hi); ++g)
                if (out.empty() || out.back() < g) out.push_back(g);
            }
            if (out.empty()) return GridSet::empty_set(dim, h);
          }
          CellIndex lo{0, 0, 0}, dims{1, 1, 1};
          for (int a = 0; a < dim; ++a) {
            lo[a] = per_axis[static_cast<std::size_t>(a)].front();
            dims[a] = per_axis[static_cast<std::size_t>(a)].back() - lo[a] + 1;
          }
          GridSet out(dim, h, lo, dims);
          const auto& X = per_axis[0];
          const std::vector<std::int64_t> zero{0};
          const auto& Y = dim > 1 ? per_axis[1] : zero;
          const auto& Z = dim > 2 ? per_axis[2] : zero;
          for (auto z : Z)
            for (auto y : Y)
              for (auto x : X) out.set({x, y, z});
          return out;
        } else {
          const ConvexBody& body = *d.body;
          const int dim = body.dim();
          const double R = body.euclid_radius_bound();
          const Vec c = interior_point(body);
          CellIndex lo{0, 0, 0}, dims{1, 1, 1};
          auto b = builder(dim);
          for (int a = 0; a < dim; ++a) {
            lo[a] = b.lo_index(c[a] - R);
            dims[a] = b.hi_index(c[a] + R) - lo[a] + 1;
          }
          GridSet out(dim, h, lo, dims);
          const int m = 2;
          for (auto z = lo[2]; z < lo[2] + dims[2]; ++z)
            for (auto y = lo[1]; y < lo[1] + dims[1]; ++y)
              for (auto x = lo[0]; x < lo[0] + dims[0]; ++x) {
                const CellIndex g{x, y, z};
                bool hit = false;
                const int per = 2 * m + 1;
                const int total = dim == 1 ? per : dim == 2 ? per * per : per * per * per;
                for (int k = 0; k < total && !hit; ++k) {
                  Vec p(dim);
                  int rem = k;
                  for (int a = 0; a < dim; ++a) {
                    p[a] = static_cast<double>(g[a]) * h + reach * (rem % per - m) / m;
                    rem /= per;
                  }
                  hit = body.contains(p);
                }
                if (hit) out.set(g);
              }
          return out;
        }
      },
      desc);
}

// ---------------------------------------------------------------------------
// Minkowski sums
// ---------------------------------------------------------------------------

// Index box (in global cell indices) limiting the output of a sum.
struct ClipWindow {
  CellIndex lo{0, 0, 0};
  CellIndex hi{0, 0, 0};  // inclusive
};

inline ClipWindow window_around(const GridSet& like, const Vec& center, std::int64_t radius_cells) {
  ClipWindow w;
  CellIndex c = like.cell_of(center);
  for (int a = 0; a < like.dim(); ++a) w.lo[a] = c[a] - radius_cells, w.hi[a] = c[a] + radius_cells;
  return w;
}

// Dilation of a by b: cell g is occupied iff g = g_a + g_b for occupied cells.
inline GridSet minkowski_sum(const GridSet& a, const GridSet& b,
                             const std::optional<ClipWindow>& clip = std::nullopt) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  if (a.h() != b.h()) throw PreconditionError("minkowski_sum: spacing mismatch");
  const int dim = a.dim();
  if (a.empty() || b.empty()) return GridSet::empty_set(dim, a.h());

  CellIndex lo{0, 0, 0}, dims{1, 1, 1};
  for (int k = 0; k < dim; ++k) {
    lo[k] = a.lo()[k] + b.lo()[k];
    std::int64_t hi = lo[k] + a.dims()[k] + b.dims()[k] - 2;
    if (clip) {
      lo[k] = std::max(lo[k], clip->lo[k]);
      hi = std::min(hi, clip->hi[k]);
    }
    if (hi < lo[k]) return GridSet::empty_set(dim, a.h());
    dims[k] = hi - lo[k] + 1;
  }
  GridSet out(dim, a.h(), lo, dims);

  const GridSet& big = a.count() >= b.count() ? a : b;
  const GridSet& small = a.count() >= b.count() ? b : a;
  const auto cells = small.occupied();
  if (clip) {
    for (const auto& s : cells) {
      CellIndex from{0, 0, 0}, to{0, 0, 0};
      bool any = true;
      for (int k = 0; k < dim; ++k) {
        from[k] = std::max(big.lo()[k], lo[k] - s[k]);
        to[k] = std::min(big.lo()[k] + big.dims()[k] - 1, lo[k] + dims[k] - 1 - s[k]);
        if (to[k] < from[k]) any = false;
      }
      if (!any) continue;
      for (auto z = from[2]; z <= to[2]; ++z)
        for (auto y = from[1]; y <= to[1]; ++y)
          for (auto x = from[0]; x <= to[0]; ++x)
            if (big.test({x, y, z})) out.set({x + s[0], y + s[1], z + s[2]});
    }
    return out;
  }
  const auto big_cells = big.occupied();
  for (const auto& s : cells)
    for (const auto& g : big_cells) out.set({g[0] + s[0], g[1] + s[1], g[2] + s[2]});
  return out;
}

// n-fold sum by repeated doubling.
inline GridSet iterate_sumset(const GridSet& a, int n) {
  if (n < 1) throw PreconditionError("iterate_sumset: n must be >= 1");
  GridSet result;
  bool have = false;
  GridSet power = a;
  for (int k = n;;) {
    if (k & 1) {
      result = have ? minkowski_sum(result, power) : power;
      have = true;
    }
    k >>= 1;
    if (!k) break;
    power = minkowski_sum(power, power);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Interior detection
// ---------------------------------------------------------------------------

inline std::vector<CellIndex> ball_offsets(int dim, int r) {
  std::vector<CellIndex> out;
  const int rz = dim > 2 ? r : 0, ry = dim > 1 ? r : 0;
  for (int z = -rz; z <= rz; ++z)
    for (int y = -ry; y <= ry; ++y)
      for (int x = -r; x <= r; ++x)
        if (x * x + y * y + z * z <= r * r) out.push_back({x, y, z});
  return out;
}

// Occupied cells whose whole Euclidean r-cell neighbourhood is occupied.
inline std::vector<CellIndex> eroded_cells(const GridSet& a, int r) {
  const auto offs = ball_offsets(a.dim(), r);
  std::vector<CellIndex> out;
  for (const auto& g : a.occupied()) {
    bool full = true;
    for (const auto& o : offs)
      if (!a.test({g[0] + o[0], g[1] + o[1], g[2] + o[2]})) {
        full = false;
        break;
      }
    if (full) out.push_back(g);
  }
  return out;
}

struct WitnessBlock {
  double h = 0.0;
  Vec center;
  double radius = 0.0;  // Euclidean, r_cells * h
};

enum class InteriorKind { Interior, Empty, Inconclusive };

inline const char* to_string(InteriorKind k) {
  switch (k) {
    case InteriorKind::Interior: return "Interior";
    case InteriorKind::Empty: return "Empty";
    default: return "Inconclusive";
  }
}

struct InteriorVerdict {
  InteriorKind kind = InteriorKind::Inconclusive;
  std::vector<WitnessBlock> blocks;       // Interior: one per resolution, nested
  std::vector<double> resolutions;
  std::vector<double> measures;           // occupied measure per resolution
  std::vector<std::int64_t> eroded_counts;  // cells surviving erosion by r_cells
  std::vector<std::int64_t> thin_counts;    // cells surviving erosion by 2
};

using GridBuilder = std::function<GridSet(double h)>;

inline constexpr double kEmptyShrink = 1.5;

// Interior: at every resolution an eroded cell whose block contains the hint
// (when given) and nests in the previous block. Empty: nothing survives
// erosion by 2 cells anywhere and the occupied measure drops by a factor of at
// least 1.5 per refinement. Otherwise Inconclusive.
inline InteriorVerdict has_interior(const GridBuilder& build, int r_cells, const std::vector<double>& resolutions,
                                    const std::optional<Vec>& hint = std::nullopt) {
  if (r_cells < 2) throw PreconditionError("has_interior: r_cells must be >= 2");
  if (resolutions.size() < 2) throw PreconditionError("has_interior: need at least two resolutions");
  for (std::size_t i = 1; i < resolutions.size(); ++i)
    if (std::abs(resolutions[i] - resolutions[i - 1] / 2.0) > 1e-12 * resolutions[i - 1])
      throw PreconditionError("has_interior: each resolution must halve the previous");

  InteriorVerdict v;
  v.resolutions = resolutions;
  bool nested = true, thin = true;
  std::optional<WitnessBlock> prev;
  for (double h : resolutions) {
    const GridSet g = build(h);
    if (g.h() != h) throw PreconditionError("has_interior: builder returned the wrong spacing");
    v.measures.push_back(occupied_measure(g));
    const auto eroded = eroded_cells(g, r_cells);
    const auto eroded2 = r_cells == 2 ? eroded : eroded_cells(g, 2);
    v.eroded_counts.push_back(static_cast<std::int64_t>(eroded.size()));
    v.thin_counts.push_back(static_cast<std::int64_t>(eroded2.size()));
    if (!eroded2.empty()) thin = false;
    if (!nested) continue;

    const double radius = r_cells * h;
    std::optional<WitnessBlock> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& c : eroded) {
      const Vec x = g.center(c);
      if (hint && !(norm2(x - *hint) <= radius)) continue;
      if (prev && !(norm2(x - prev->center) + radius <= prev->radius * (1.0 + 1e-12))) continue;
      const double d = hint ? norm2(x - *hint) : prev ? norm2(x - prev->center) : 0.0;
      if (d < best_d) best_d = d, best = WitnessBlock{h, x, radius};
    }
    if (!best) {
      nested = false;
      continue;
    }
    v.blocks.push_back(*best);
    prev = best;
  }
  bool shrinking = true;
  for (std::size_t i = 1; i < v.measures.size(); ++i)
    if (!(v.measures[i] * kEmptyShrink <= v.measures[i - 1])) shrinking = false;

  if (nested) v.kind = InteriorKind::Interior;
  else if (thin && shrinking) v.kind = InteriorKind::Empty;
  else v.kind = InteriorKind::Inconclusive;
  if (v.kind != InteriorKind::Interior) v.blocks.clear();
  return v;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

// Plain PGM (P2) of a 2D grid, top row = largest y; occupied cells are 0.
inline std::string to_pgm(const GridSet& g) {
  if (g.dim() != 2) throw PreconditionError("to_pgm: needs a 2D grid");
  std::ostringstream os;
  os << "P2\n" << g.dims()[0] << ' ' << g.dims()[1] << "\n1\n";
  for (auto y = g.lo()[1] + g.dims()[1] - 1; y >= g.lo()[1]; --y) {
    for (auto x = g.lo()[0]; x < g.lo()[0] + g.dims()[0]; ++x)
      os << (x == g.lo()[0] ? "" : " ") << (g.test({x, y, 0}) ? 0 : 1);
    os << '\n';
  }
  return os.str();
}

// Run lengths over the linear cell order, starting with an empty run.
inline std::vector<std::int64_t> run_lengths(const GridSet& g) {
  std::vector<std::int64_t> runs;
  bool state = false;
  std::int64_t len = 0;
  const auto total = g.total_cells();
  const auto& w = g.words();
  for (std::int64_t k = 0; k < total; ++k) {
    bool bit = (w[static_cast<std::size_t>(k >> 6)] >> (k & 63)) & 1u;
    if (bit != state) {
      runs.push_back(len);
      state = bit;
      len = 0;
    }
    ++len;
  }
  runs.push_back(len);
  return runs;
}

}  // namespace steinhaus
