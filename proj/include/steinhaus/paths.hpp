#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "steinhaus/bodies.hpp"

namespace steinhaus {

// ---------------------------------------------------------------------------
// Path
// ---------------------------------------------------------------------------

// Piecewise-linear curve through (t_i, p_i) with t_0 = 0 < ... < t_last = 1.
class Path {
 public:
  Path(std::vector<double> ts, std::vector<Vec> pts,
       double chord_bound = std::numeric_limits<double>::infinity())
      : ts_(std::move(ts)), pts_(std::move(pts)) {
    if (ts_.size() < 2 || ts_.size() != pts_.size())
      throw PreconditionError("path: need >= 2 samples with matching times");
    if (ts_.front() != 0.0 || ts_.back() != 1.0)
      throw PreconditionError("path: times must start at 0 and end at 1");
    for (std::size_t i = 1; i < ts_.size(); ++i) {
      pts_[i].require_same(pts_[0]);
      if (!(ts_[i] > ts_[i - 1])) throw PreconditionError("path: times must increase strictly");
      if (norm2(pts_[i] - pts_[i - 1]) > chord_bound)
        throw PreconditionError("path: consecutive samples exceed the chord bound");
    }
  }

  // Uniform parameterisation of the given points.
  static Path through(std::vector<Vec> pts) {
    const std::size_t n = pts.size();
    if (n < 2) throw PreconditionError("path: need >= 2 points");
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    ts.back() = 1.0;
    return Path(std::move(ts), std::move(pts));
  }

  static Path segment(const Vec& a, const Vec& b, int nsamples = 2) {
    std::vector<Vec> pts;
    for (int i = 0; i < nsamples; ++i) pts.push_back(lerp(a, b, static_cast<double>(i) / (nsamples - 1)));
    pts.back() = b;
    return through(std::move(pts));
  }

  int dim() const { return pts_.front().dim(); }
  std::size_t size() const { return ts_.size(); }
  const std::vector<double>& times() const { return ts_; }
  const std::vector<Vec>& points() const { return pts_; }

  Vec at(double t) const {
    if (t <= 0.0) return pts_.front();
    if (t >= 1.0) return pts_.back();
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - ts_.begin());
    std::size_t lo = hi - 1;
    if (ts_[lo] == t) return pts_[lo];
    double u = (t - ts_[lo]) / (ts_[hi] - ts_[lo]);
    return lerp(pts_[lo], pts_[hi], u);
  }

  Path negated() const {
    std::vector<Vec> p = pts_;
    for (auto& v : p) v = -v;
    return Path(ts_, std::move(p));
  }

  Path reversed() const {
    std::vector<double> t(ts_.size());
    std::vector<Vec> p(pts_.rbegin(), pts_.rend());
    for (std::size_t i = 0; i < ts_.size(); ++i) t[i] = 1.0 - ts_[ts_.size() - 1 - i];
    t.front() = 0.0;
    t.back() = 1.0;
    return Path(std::move(t), std::move(p));
  }

  // gamma restricted to [a, b], reparameterised onto [0, 1].
  Path restricted(double a, double b) const {
    if (!(0.0 <= a && a < b && b <= 1.0)) throw PreconditionError("path: bad restriction window");
    std::vector<double> t{0.0};
    std::vector<Vec> p{at(a)};
    for (std::size_t i = 0; i < ts_.size(); ++i) {
      if (ts_[i] > a && ts_[i] < b) {
        t.push_back((ts_[i] - a) / (b - a));
        p.push_back(pts_[i]);
      }
    }
    t.push_back(1.0);
    p.push_back(at(b));
    return Path(std::move(t), std::move(p));
  }

 private:
  std::vector<double> ts_;
  std::vector<Vec> pts_;
};

// ---------------------------------------------------------------------------
// Functional range, plane paths, modulus, climb window
// ---------------------------------------------------------------------------

struct FunctionalRange {
  double m = 0.0, M = 0.0;
  double tmin = 0.0, tmax = 0.0;
};

// Extremes of f o gamma; attained at samples since the path is piecewise
// linear. Ties resolve to the earliest parameter.
inline FunctionalRange functional_range(const Path& path, const LinearFunctional& f) {
  FunctionalRange r;
  r.m = std::numeric_limits<double>::infinity();
  r.M = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    double v = f(path.points()[i]);
    if (v < r.m) r.m = v, r.tmin = path.times()[i];
    if (v > r.M) r.M = v, r.tmax = path.times()[i];
  }
  return r;
}

inline bool is_plane_path(const Path& path, const LinearFunctional& f, double tol = 1e-12) {
  if (f.is_zero()) throw PreconditionError("plane path test: zero functional");
  auto r = functional_range(path, f);
  return r.M - r.m <= tol;
}

// Largest delta with sup{||g(s) - g(t)|| : |s - t| <= delta} < eps/2, capped
// at 1. The supremum for a fixed delta is attained at sample pairs or at
// pairs (t_i, t_i +- delta), so it is computed exactly.
inline double continuity_modulus(const Path& path, double eps,
                                 const NormSpec& norm = LpNorm::l(2.0)) {
  if (!(eps > 0.0)) throw PreconditionError("continuity_modulus: eps must be positive");
  const auto& ts = path.times();
  const auto& ps = path.points();
  const std::size_t n = ts.size();
  struct Pair {
    double gap, dist;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({ts[j] - ts[i], norm_eval(norm, ps[j] - ps[i])});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.gap < b.gap; });
  for (std::size_t k = 1; k < pairs.size(); ++k) pairs[k].dist = std::max(pairs[k].dist, pairs[k - 1].dist);

  const double half = eps / 2.0;
  auto omega = [&](double delta) {
    double w = 0.0;
    auto it = std::upper_bound(pairs.begin(), pairs.end(), delta,
                               [](double d, const Pair& p) { return d < p.gap; });
    if (it != pairs.begin()) w = std::prev(it)->dist;
    for (std::size_t i = 0; i < n; ++i) {
      if (ts[i] + delta <= 1.0) w = std::max(w, norm_eval(norm, path.at(ts[i] + delta) - ps[i]));
      if (ts[i] - delta >= 0.0) w = std::max(w, norm_eval(norm, ps[i] - path.at(ts[i] - delta)));
    }
    return w;
  };
  if (omega(1.0) < half) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 64; ++it) {
    double mid = 0.5 * (lo + hi);
    if (omega(mid) < half) lo = mid; else hi = mid;
  }
  if (!(lo > 0.0)) throw NumericalFailure("continuity_modulus: no positive delta found");
  return lo;
}

// Smallest n with n * delta > 1, so a partition into n equal steps has every
// step strictly shorter than delta.
inline int partition_count(double delta) {
  if (!(delta > 0.0)) throw PreconditionError("partition_count: delta must be positive");
  return static_cast<int>(std::floor(1.0 / delta)) + 1;
}

struct ClimbWindow {
  double t0 = 0.0, t1 = 0.0;
  double climb = 0.0;
};

// Earliest window t0 < t1 < t0 + delta with f(g(t1)) - f(g(t0)) >= (M - m)/n.
// Candidates are the samples and the uniform n-partition; the partition alone
// already contains a qualifying step by pigeonhole.
inline ClimbWindow find_climb_window(const Path& path, const LinearFunctional& f, double delta,
                                     int n) {
  if (!(delta > 0.0) || n < 1) throw PreconditionError("find_climb_window: bad delta or n");
  if (!(n * delta > 1.0)) throw PreconditionError("find_climb_window: need n * delta > 1");
  const auto range = functional_range(path, f);
  const double need = (range.M - range.m) / n;
  if (!(need > 0.0)) throw NumericalFailure("find_climb_window: no window (plane path)");

  std::vector<double> starts = path.times();
  for (int k = 0; k <= n; ++k) starts.push_back(static_cast<double>(k) / n);
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  const double width = 1.0 / n;
  const auto& ts = path.times();

  auto scan = [&](double threshold) -> std::optional<ClimbWindow> {
    for (double t0 : starts) {
      if (t0 >= 1.0) break;
      const double end = std::min(1.0, t0 + width);
      const double g0 = f(path.at(t0));
      double best = -std::numeric_limits<double>::infinity();
      double arg = t0;
      for (auto it = std::upper_bound(ts.begin(), ts.end(), t0); it != ts.end() && *it < end; ++it) {
        double g = f(path.at(*it));
        if (g > best) best = g, arg = *it;
      }
      double gend = f(path.at(end));
      if (gend > best) best = gend, arg = end;
      if (arg > t0 && best - g0 >= threshold) return ClimbWindow{t0, arg, best - g0};
    }
    return std::nullopt;
  };
  if (auto w = scan(need)) return *w;
  // Rounding in the telescoping sum can leave the best step a few ulps short.
  if (auto w = scan(need * (1.0 - 1e-12))) return *w;
  throw NumericalFailure("find_climb_window: no window found");
}

// ---------------------------------------------------------------------------
// Witness certificates
// ---------------------------------------------------------------------------

enum class Sign { Sum, Difference };

inline const char* to_string(Sign s) { return s == Sign::Sum ? "sum" : "difference"; }

inline constexpr std::array<const char*, 5> kEtaTermNames = {
    "alpha", "start_in_half_eps_ball", "start_inside_sphere", "end_in_three_quarter_ball",
    "end_beyond_hyperplane"};

// Constructive proof that shift + eta B lies in U + Gamma (sum) or U - Gamma
// (difference). The translated path g~(t) = w(t) - w(t0) + (1 - alpha/rho) x0
// uses the working path w: the (negated, for sums) input path restricted to
// [restrict_lo, restrict_hi] and reversed when its minimum comes after its
// maximum. t0 and t1 refer to the working parameter.
struct WitnessCertificate {
  Sign sign = Sign::Sum;
  double t0 = 0.0, t1 = 0.0;
  double alpha = 0.0;
  double eta = 0.0;
  Vec shift;
  LinearFunctional functional;
  double m = 0.0, M = 0.0;
  int n = 0;
  double delta = 0.0;
  double eps = 0.0;
  double radius = 1.0;
  Vec center;
  Vec x0;
  bool reversed = false;
  double restrict_lo = 0.0, restrict_hi = 1.0;
  std::array<double, 5> eta_terms{};
  double safety = 0.1;
};

inline Path working_path(const Path& path, Sign sign, double lo, double hi, bool reversed) {
  Path signed_path = sign == Sign::Sum ? path.negated() : path;
  Path w = (lo == 0.0 && hi == 1.0) ? signed_path : signed_path.restricted(lo, hi);
  return reversed ? w.reversed() : w;
}

inline Path working_path(const WitnessCertificate& cert, const Path& path) {
  return working_path(path, cert.sign, cert.restrict_lo, cert.restrict_hi, cert.reversed);
}

inline SphereView require_sphere(const BoundaryPatch& patch) {
  auto sv = sphere_view(*patch.body, patch.ambient);
  if (!sv) throw PreconditionError("patch does not lie on a sphere of its ambient norm");
  return *sv;
}

struct CertificateOptions {
  double tol = 1e-9;
  double safety = 0.1;
};

inline WitnessCertificate steinhaus_certificate(const BoundaryPatch& patch, const Path& path,
                                                const LinearFunctional& f, Sign sign,
                                                const CertificateOptions& opt = {}) {
  const SphereView sv = require_sphere(patch);
  const double rho = sv.radius;
  const double eps = patch.eps;
  const Vec x0c = patch.x0 - sv.center;
  const NormSpec& N = sv.norm;
  if (path.dim() != patch.dim()) throw DimensionMismatch(path.dim(), patch.dim());
  if (f.is_zero()) throw PreconditionError("certificate: zero functional");
  if (std::abs(f(x0c) - rho) > opt.tol * rho)
    throw PreconditionError("certificate: functional does not support the sphere at x0");
  if (std::abs(dual_norm(N, f) - 1.0) > opt.tol)
    throw PreconditionError("certificate: functional is not unit in the dual norm");
  if (is_plane_path(path, f, opt.tol * rho))
    throw PreconditionError("certificate: plane path for the given functional");

  WitnessCertificate cert;
  cert.sign = sign;
  cert.functional = f;
  cert.eps = eps;
  cert.radius = rho;
  cert.center = sv.center;
  cert.x0 = patch.x0;
  cert.safety = opt.safety;

  const Path signed_path = sign == Sign::Sum ? path.negated() : path;
  const auto range = functional_range(signed_path, f);
  cert.reversed = range.tmin > range.tmax;
  cert.restrict_lo = std::min(range.tmin, range.tmax);
  cert.restrict_hi = std::max(range.tmin, range.tmax);
  const Path w = working_path(path, sign, cert.restrict_lo, cert.restrict_hi, cert.reversed);
  cert.m = range.m;
  cert.M = range.M;

  cert.delta = continuity_modulus(w, eps, N);
  cert.n = partition_count(cert.delta);
  const ClimbWindow win = find_climb_window(w, f, cert.delta, cert.n);
  cert.t0 = win.t0;
  cert.t1 = win.t1;

  cert.alpha = std::min((cert.M - cert.m) / (2.0 * cert.n), eps / 4.0);
  const Vec base = x0c * (1.0 - cert.alpha / rho);
  const Vec w0 = w.at(cert.t0);
  const Vec start = base;  // g~(t0)
  const Vec end = w.at(cert.t1) - w0 + base;
  cert.eta_terms = {cert.alpha,
                    eps / 2.0 - norm_eval(N, start - x0c),
                    rho - norm_eval(N, start),
                    0.75 * eps - norm_eval(N, end - x0c),
                    f(end) - rho};
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cert.eta_terms.size(); ++k) {
    if (!(cert.eta_terms[k] > 0.0))
      throw NumericalFailure(std::string("certificate: nonpositive eta term '") + kEtaTermNames[k] +
                             "'");
    smallest = std::min(smallest, cert.eta_terms[k]);
  }
  cert.eta = (1.0 - opt.safety) * smallest;
  cert.shift = -w0 + sv.center + base;
  return cert;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerifyFailure {
  Vec z;
  std::string stage;
  std::string detail;
};

struct VerifyReport {
  bool pass = false;
  double worst_residual = 0.0;
  int checked = 0;
  std::vector<VerifyFailure> failures;
};

// Test translations z in the open ball eta B: z = 0, a shell just inside the
// boundary, and a lattice of interior points.
inline std::vector<Vec> witness_offsets(const NormSpec& N, int dim, double eta, int nz) {
  std::vector<Vec> zs{Vec::zero(dim)};
  if (nz <= 1) return zs;
  const int nshell = std::max(1, (nz - 1) / 2);
  const double shell = eta * (1.0 - 1e-9);
  double reach = 0.0;
  const auto dirs = detail::direction_set(dim, dim == 1 ? 2 : nshell);
  for (const auto& u : dirs) {
    Vec z = u * (shell / norm_eval(N, u));
    reach = std::max(reach, norm_inf(z));
    if (static_cast<int>(zs.size()) < 1 + nshell) zs.push_back(z);
  }
  const int ninterior = nz - static_cast<int>(zs.size());
  if (ninterior <= 0) return zs;
  int per_axis = 2;
  while (std::pow(per_axis, dim) < 2.0 * ninterior) ++per_axis;
  std::vector<Vec> grid;
  std::array<int, 3> idx{};
  const int total = static_cast<int>(std::pow(per_axis, dim));
  for (int k = 0; k < total; ++k) {
    int rem = k;
    Vec z(dim);
    for (int a = 0; a < dim; ++a) {
      idx[static_cast<std::size_t>(a)] = rem % per_axis;
      rem /= per_axis;
      z[a] = -reach + 2.0 * reach * (idx[static_cast<std::size_t>(a)] + 0.5) / per_axis;
    }
    if (norm_eval(N, z) < shell) grid.push_back(z);
  }
  for (int k = 0; k < ninterior && k < static_cast<int>(grid.size()); ++k) {
    // Spread the picks over the whole lattice.
    std::size_t pick = static_cast<std::size_t>(k) * grid.size() / static_cast<std::size_t>(ninterior);
    zs.push_back(grid[pick]);
  }
  return zs;
}

inline VerifyReport witness_verify(const WitnessCertificate& cert, const BoundaryPatch& patch,
                                   const Path& path, int nz = 200, double tol = 1e-9) {
  const SphereView sv = require_sphere(patch);
  const NormSpec& N = sv.norm;
  const double rho = sv.radius;
  const Vec x0c = patch.x0 - sv.center;
  const Path w = working_path(cert, path);
  const Vec w0 = w.at(cert.t0);
  const Vec base = x0c * (1.0 - cert.alpha / rho);
  auto translated = [&](double t) { return w.at(t) - w0 + base; };
  const double scale = std::max(1.0, norm_inf(cert.shift));

  VerifyReport rep;
  auto fail = [&](const Vec& z, std::string stage, std::string detail) {
    rep.failures.push_back({z, std::move(stage), std::move(detail)});
  };
  if (!(cert.eta > 0.0) || !(cert.t0 < cert.t1)) {
    fail(Vec::zero(patch.dim()), "certificate fields", "need eta > 0 and t0 < t1");
    return rep;
  }
  for (const Vec& z : witness_offsets(N, patch.dim(), cert.eta, nz)) {
    ++rep.checked;
    const Vec s = translated(cert.t0) + z;
    const Vec e = translated(cert.t1) + z;
    if (!(norm_eval(N, s) < rho) || !(norm_eval(N, s - x0c) < patch.eps / 2.0)) {
      fail(z, "ball containment", "start point leaves (x0 + eps/2 B) inside the sphere");
      continue;
    }
    if (!(cert.functional(e) > rho) || !(norm_eval(N, e - x0c) < 0.75 * patch.eps)) {
      fail(z, "ball containment", "end point not beyond the supporting hyperplane");
      continue;
    }
    double lo = cert.t0, hi = cert.t1;
    for (int it = 0; it < 200 && hi > lo; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (norm_eval(N, translated(mid) + z) < rho) lo = mid; else hi = mid;
    }
    const Vec a_lo = translated(lo) + z, a_hi = translated(hi) + z;
    const double r_lo = std::abs(norm_eval(N, a_lo) - rho), r_hi = std::abs(norm_eval(N, a_hi) - rho);
    const double tz = r_lo <= r_hi ? lo : hi;
    const Vec a = r_lo <= r_hi ? a_lo : a_hi;
    const double residual = std::min(r_lo, r_hi);
    rep.worst_residual = std::max(rep.worst_residual, residual);
    if (residual > tol) {
      fail(z, "sphere root", "bisection residual " + std::to_string(residual));
      continue;
    }
    if (!(norm_eval(N, a - x0c) < patch.eps)) {
      fail(z, "patch membership", "root lies outside x0 + eps B");
      continue;
    }
    // a - w(tz) = shift + z, i.e. a -/+ gamma(t') for a point of Gamma.
    const Vec a_abs = a + sv.center;
    const double mismatch = norm_inf((a_abs - w.at(tz)) - (cert.shift + z));
    rep.worst_residual = std::max(rep.worst_residual, mismatch);
    if (mismatch > tol * scale) fail(z, "decomposition", "a -/+ b does not reproduce shift + z");
  }
  rep.pass = rep.failures.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Radial paths and the decision procedures
// ---------------------------------------------------------------------------

// t -> projection of (1-t) x0 + t z0 onto the boundary along rays from the
// body's interior point (the norm sphere normalisation for balls).
inline Path radial_path(const ConvexBody& body, const Vec& x0, const Vec& z0, int nsamples = 256) {
  if (nsamples < 2) throw PreconditionError("radial_path: need >= 2 samples");
  if (!on_boundary(body, x0, 1e-9) || !on_boundary(body, z0, 1e-9))
    throw PreconditionError("radial_path: endpoints must lie on the boundary");
  const Vec c = interior_point(body);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(nsamples));
  for (int i = 0; i < nsamples; ++i) {
    const double t = static_cast<double>(i) / (nsamples - 1);
    if (i == 0) { pts.push_back(x0); continue; }
    if (i == nsamples - 1) { pts.push_back(z0); continue; }
    const Vec s = lerp(x0 - c, z0 - c, t);
    if (norm2(s) <= 1e-12 * std::max(1.0, body.scale()))
      throw PreconditionError("radial_path: segment passes through the gauge centre");
    pts.push_back(boundary_project(body, c, s));
  }
  return Path::through(std::move(pts));
}

struct DecideOptions {
  int flat_samples = 256;
  double flat_tol = 1e-7;
  int path_samples = 256;
  int verify_nz = 200;
  double verify_tol = 1e-9;
  int gauge_samples = 256;
  CertificateOptions cert;
};

struct FlatCase {
  Support support;   // in ambient coordinates
  double sum_level;  // U + U lies in {f = sum_level}
};

// Certificate data sufficient for stand-alone re-verification.
struct CertifiedInstance {
  BoundaryPatch patch;  // the sphere patch the certificate lives on
  Path path;
  WitnessCertificate cert;
};

struct Certified {
  CertifiedInstance instance;
  VerifyReport verification;
  std::string route;        // "direct" or "gauge"
  Vec shift;                // centre of the interior ball of U + U, ambient coordinates
  double eta_ambient = 0.0; // its radius in the ambient norm
  double margin = 0.0;      // flatness margin that produced z0
  // Gauge route bookkeeping.
  std::optional<GaugeRenorm> renorm;
  double boundary_gap = 0.0;
};

using PatchDecision = std::variant<FlatCase, Certified>;

namespace detail {

inline double boundary_gap(const ConvexBody& body, const Vec& x) {
  if (body.is_ball()) {
    const auto& b = body.as_ball();
    return std::abs(lp_eval(b.norm, x - b.center) - b.radius);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : body.hull()->facets) worst = std::max(worst, dot(f.normal, x) - f.offset);
  return std::abs(worst);
}

inline PatchDecision decide_on_sphere(const BoundaryPatch& patch, const DecideOptions& opt) {
  const auto verdict = is_flattening_point(patch, opt.flat_samples, opt.flat_tol);
  if (const auto* flat = std::get_if<Flat>(&verdict))
    return FlatCase{flat->support, 2.0 * flat->support.c};
  const auto& nf = std::get<NotFlat>(verdict);
  const FlatWitness& w = nf.primary();
  Path path = radial_path(*patch.body, patch.x0, w.z0, opt.path_samples);
  for (const auto& p : path.points())
    if (!(norm_eval(patch.ambient, p - patch.x0) < patch.eps))
      throw NumericalFailure("sphere_patch_decide: radial path leaves the patch");
  auto cert = steinhaus_certificate(patch, path, w.support.f, Sign::Sum, opt.cert);
  auto rep = witness_verify(cert, patch, path, opt.verify_nz, opt.verify_tol);
  if (!rep.pass)
    throw NumericalFailure("sphere_patch_decide: certificate failed verification at stage '" +
                           rep.failures.front().stage + "'");
  Certified out{CertifiedInstance{patch, path, cert}, rep, "direct", cert.shift, cert.eta, nf.margin,
                std::nullopt, 0.0};
  return out;
}

}  // namespace detail

// Flat patches: the hyperplane containing U + U. Otherwise a verified
// certificate for an open ball inside U + Gamma, Gamma a boundary path in U.
// Bodies that are not spheres of the ambient norm are first renormed by the
// gauge of V = cl conv(A U (delta/4) B U -A).
inline PatchDecision sphere_patch_decide(const BoundaryPatch& patch, const DecideOptions& opt = {}) {
  if (sphere_view(*patch.body, patch.ambient)) return detail::decide_on_sphere(patch, opt);

  GaugeRenorm g = build_gauge_body(*patch.body, patch.x0, patch.ambient, opt.gauge_samples);
  const double reach = outer_radius(*g.body, patch.ambient, Vec::zero(patch.dim()));
  const double eps_v = 0.9 * std::min(patch.eps, g.delta / 2.0) / reach;
  BoundaryPatch vpatch = make_patch(g.body, g.x0_local, eps_v, g.norm);
  PatchDecision inner = detail::decide_on_sphere(vpatch, opt);

  if (auto* flat = std::get_if<FlatCase>(&inner)) {
    LinearFunctional f = normalize_unit_dual(patch.ambient, flat->support.f);
    const double c = f(patch.x0);
    return FlatCase{Support{f, c}, 2.0 * c};
  }
  auto& cert = std::get<Certified>(inner);
  cert.route = "gauge";
  cert.shift = cert.instance.cert.shift + g.offset * 2.0;
  cert.eta_ambient = cert.instance.cert.eta * inner_radius(*g.body, patch.ambient, Vec::zero(patch.dim()));
  double gap = 0.0;
  for (const auto& y : patch_sample(vpatch, opt.flat_samples))
    gap = std::max(gap, detail::boundary_gap(*patch.body, y + g.offset));
  cert.boundary_gap = gap;
  cert.renorm = std::move(g);
  return inner;
}

inline PatchDecision body_patch_decide(const BoundaryPatch& patch, const DecideOptions& opt = {}) {
  return sphere_patch_decide(patch, opt);
}

// ---------------------------------------------------------------------------
// Open subsets of a sphere not contained in two parallel hyperplanes
// ---------------------------------------------------------------------------

struct VWCertified {
  char which_case = 'a';
  std::size_t arc = 0;        // case (a): the non-flat arc; case (b): the plane patch
  std::size_t path_arc = 0;   // case (b): the arc carrying the segment path
  Certified result;
};

struct NotApplicable {
  std::string reason;
};

using VWDecision = std::variant<VWCertified, NotApplicable>;

inline VWDecision volkmann_walter_check(const std::vector<BoundaryPatch>& arcs,
                                        const DecideOptions& opt = {}) {
  if (arcs.empty()) throw PreconditionError("volkmann_walter_check: no arcs");
  for (const auto& a : arcs) {
    require_sphere(a);
    if (a.body.get() != arcs.front().body.get() && !(a.ambient == arcs.front().ambient))
      throw PreconditionError("volkmann_walter_check: arcs must share one sphere");
  }
  std::vector<Support> supports;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    auto v = is_flattening_point(arcs[i], opt.flat_samples, opt.flat_tol);
    if (!is_flat(v)) {
      auto d = sphere_patch_decide(arcs[i], opt);
      return VWCertified{'a', i, i, std::get<Certified>(d)};
    }
    supports.push_back(std::get<Flat>(v).support);
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (std::size_t j = 0; j < arcs.size(); ++j) {
      if (i == j) continue;
      const Vec& a = supports[i].f.coeffs;
      const Vec& b = supports[j].f.coeffs;
      const double cosang = dot(a, b) / (norm2(a) * norm2(b));
      if (std::abs(cosang) > 1.0 - 1e-9) continue;
      // Segment across arc j with the largest variation of f_i.
      auto pts = patch_sample(arcs[j], 64);
      std::size_t bp = 0, bq = 0;
      double best = -1.0;
      for (std::size_t p = 0; p < pts.size(); ++p)
        for (std::size_t q = p + 1; q < pts.size(); ++q) {
          double v = std::abs(supports[i].f(pts[q] - pts[p]));
          if (v > best) best = v, bp = p, bq = q;
        }
      Path path = Path::segment(pts[bp], pts[bq], 65);
      auto cert = steinhaus_certificate(arcs[i], path, supports[i].f, Sign::Sum, opt.cert);
      auto rep = witness_verify(cert, arcs[i], path, opt.verify_nz, opt.verify_tol);
      if (!rep.pass)
        throw NumericalFailure("volkmann_walter_check: certificate failed at stage '" +
                               rep.failures.front().stage + "'");
      Certified c{CertifiedInstance{arcs[i], path, cert}, rep, "direct", cert.shift, cert.eta, 0.0,
                  std::nullopt, 0.0};
      return VWCertified{'b', i, j, std::move(c)};
    }
  }
  return NotApplicable{"the arcs lie in a union of two parallel hyperplanes"};
}

}  // namespace steinhaus
