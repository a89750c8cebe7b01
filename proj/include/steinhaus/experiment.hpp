#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "steinhaus/io.hpp"
#include "steinhaus/svg.hpp"

namespace steinhaus::cli {

using io::json;

struct Artifact {
  std::string name;
  std::string content;
};

struct Verdict {
  std::string name;
  std::string expected;
  std::string observed;
  bool ok = false;
};

struct RunResult {
  json report;
  json timings;
  std::vector<Artifact> files;
  bool ok = false;
};

inline constexpr const char* kKinds[] = {"flatness", "certify", "volkmann-walter", "cantor",
                                         "polyline", "curve-sp", "gauge-renorm"};

namespace detail {

using Clock = std::chrono::steady_clock;

struct Context {
  const json& cfg;
  io::BodyRegistry bodies;
  std::vector<Verdict> verdicts;
  json results = json::object();
  json certificates = json::array();
  json errors = json::array();
  json timings = json::object();
  std::vector<Artifact> files;

  void verdict(std::string name, std::string expected, std::string observed) {
    const bool ok = expected == observed;
    verdicts.push_back({std::move(name), std::move(expected), std::move(observed), ok});
  }

  template <class F>
  auto timed(const std::string& label, F&& f) {
    const auto t = Clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      timings[label] = std::chrono::duration<double>(Clock::now() - t).count();
    } else {
      auto r = f();
      timings[label] = std::chrono::duration<double>(Clock::now() - t).count();
      return r;
    }
  }
};

inline const std::vector<const char*> kCommon = {"kind", "name", "output", "expect", "seed", "bodies"};

inline void check_kind_keys(const json& cfg, std::initializer_list<const char*> extra) {
  std::vector<const char*> allowed(kCommon);
  allowed.insert(allowed.end(), extra.begin(), extra.end());
  for (const auto& [key, _] : cfg.items())
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
      throw ConfigError("config: unknown key '" + key + "' for kind '" + cfg["kind"].get<std::string>() + "'");
}

inline std::string expect_string(const json& cfg, const std::string& fallback) {
  if (!cfg.contains("expect")) return fallback;
  if (!cfg["expect"].is_string()) throw ConfigError("config.expect: expected a string");
  return cfg["expect"].get<std::string>();
}

inline DecideOptions decide_options(const json& cfg) {
  DecideOptions o;
  if (!cfg.contains("options")) return o;
  const json& j = cfg["options"];
  io::check_keys(j, {"flat_samples", "flat_tol", "path_samples", "verify_nz", "verify_tol", "gauge_samples",
                     "cert_tol", "safety"},
                 "config.options");
  if (j.contains("flat_samples")) o.flat_samples = io::integer(j["flat_samples"], "options.flat_samples");
  if (j.contains("flat_tol")) o.flat_tol = io::number(j["flat_tol"], "options.flat_tol");
  if (j.contains("path_samples")) o.path_samples = io::integer(j["path_samples"], "options.path_samples");
  if (j.contains("verify_nz")) o.verify_nz = io::integer(j["verify_nz"], "options.verify_nz");
  if (j.contains("verify_tol")) o.verify_tol = io::number(j["verify_tol"], "options.verify_tol");
  if (j.contains("gauge_samples")) o.gauge_samples = io::integer(j["gauge_samples"], "options.gauge_samples");
  if (j.contains("cert_tol")) o.cert.tol = io::number(j["cert_tol"], "options.cert_tol");
  if (j.contains("safety")) o.cert.safety = io::number(j["safety"], "options.safety");
  if (o.flat_samples < 16 || o.path_samples < 2 || o.verify_nz < 1 || o.gauge_samples < 16)
    throw ConfigError("config.options: sample counts too small");
  if (!(o.cert.safety > 0.0 && o.cert.safety < 1.0)) throw ConfigError("config.options.safety must lie in (0, 1)");
  return o;
}

struct OracleOptions {
  bool enabled = true;
  int r_cells = 3;
  std::vector<double> eta_fractions{4.0, 8.0};
  std::vector<double> resolutions{0.02, 0.01};
  int window = 12;
};

inline OracleOptions oracle_options(const json& cfg, std::vector<double> default_res = {0.02, 0.01}) {
  OracleOptions o;
  o.resolutions = std::move(default_res);
  if (!cfg.contains("oracle")) return o;
  const json& j = cfg["oracle"];
  io::check_keys(j, {"enabled", "r_cells", "eta_fractions", "resolutions", "window"}, "config.oracle");
  if (j.contains("enabled")) o.enabled = j["enabled"].get<bool>();
  if (j.contains("r_cells")) o.r_cells = io::integer(j["r_cells"], "oracle.r_cells");
  if (j.contains("window")) o.window = io::integer(j["window"], "oracle.window");
  auto list = [&](const char* key, std::vector<double>& out) {
    if (!j.contains(key)) return;
    out.clear();
    for (const auto& x : j[key]) out.push_back(io::number(x, std::string("oracle.") + key));
  };
  list("eta_fractions", o.eta_fractions);
  list("resolutions", o.resolutions);
  if (o.r_cells < 2) throw ConfigError("config.oracle.r_cells must be >= 2");
  if (o.resolutions.size() < 2 || o.eta_fractions.size() < 2)
    throw ConfigError("config.oracle: need at least two resolutions");
  return o;
}

inline io::BodyRegistry registry(const json& cfg) {
  io::BodyRegistry reg;
  if (!cfg.contains("bodies")) return reg;
  if (!cfg["bodies"].is_object()) throw ConfigError("config.bodies: expected an object of named bodies");
  for (const auto& [id, b] : cfg["bodies"].items()) reg[id] = io::body_from_json(b, reg, "config.bodies." + id);
  return reg;
}

inline BoundaryPatch patch_of(Context& ctx, const json& j, const std::string& where) {
  json p = json::object();
  p["body"] = io::need(j, "body", where);
  p["x0"] = io::need(j, "x0", where);
  p["eps"] = io::need(j, "eps", where);
  p["ambient"] = j.contains("ambient") ? j["ambient"] : json{{"kind", "p"}, {"p", 2.0}};
  return io::patch_from_json(p, ctx.bodies, where);
}

inline GridSet grid_union(const std::vector<GridSet>& parts, int dim, double h) {
  std::vector<CellIndex> cells;
  for (const auto& g : parts)
    for (const auto& c : g.occupied()) cells.push_back(c);
  if (cells.empty()) return GridSet::empty_set(dim, h);
  CellIndex lo{0, 0, 0}, hi{0, 0, 0}, dims{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    lo[a] = cells.front()[a], hi[a] = cells.front()[a];
    for (const auto& c : cells) lo[a] = std::min(lo[a], c[a]), hi[a] = std::max(hi[a], c[a]);
    dims[a] = hi[a] - lo[a] + 1;
  }
  GridSet out(dim, h, lo, dims);
  for (const auto& c : cells) out.set(c);
  return out;
}

// Interior check of (A + B) around a predicted centre, using clipped sums.
inline InteriorVerdict oracle_interior(const std::function<GridSet(double)>& rasterA,
                                       const std::function<GridSet(double)>& rasterB, const Vec& center,
                                       double eta, const OracleOptions& o) {
  std::vector<double> res;
  for (double f : o.eta_fractions) res.push_back(eta / f);
  return has_interior(
      [&](double h) {
        GridSet a = rasterA(h), b = rasterB(h);
        return minkowski_sum(a, b, window_around(a, center, o.window));
      },
      o.r_cells, res, center);
}

inline InteriorVerdict oracle_full(const std::function<GridSet(double)>& build, const OracleOptions& o) {
  return has_interior(build, o.r_cells, o.resolutions);
}

inline std::string observed_kind(const PatchDecision& d) {
  return std::holds_alternative<FlatCase>(d) ? "FlatCase" : "Certified";
}

inline json certificate_entry(const Certified& c, const DecideOptions& opt) {
  json e = io::to_json(c.instance, opt.verify_nz, opt.verify_tol);
  e["route"] = c.route;
  e["ambient_shift"] = io::to_json(c.shift);
  e["ambient_eta"] = c.eta_ambient;
  e["verification"] = io::to_json(c.verification);
  if (c.renorm) {
    e["renorm"] = {{"delta", c.renorm->delta}, {"offset", io::to_json(c.renorm->offset)},
                   {"x0_local", io::to_json(c.renorm->x0_local)}, {"boundary_gap", c.boundary_gap}};
  }
  return e;
}

inline std::string patch_svg(const BoundaryPatch& patch, const GridSet* sum, const Vec* center, double radius) {
  auto pts = patch_sample(patch, 129);
  double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
  auto grow = [&](const Vec& p, double r) {
    xmin = std::min(xmin, p[0] - r), xmax = std::max(xmax, p[0] + r);
    ymin = std::min(ymin, p[1] - r), ymax = std::max(ymax, p[1] + r);
  };
  for (const auto& p : pts) grow(p, 0.0);
  if (sum)
    for (const auto& c : sum->occupied()) grow(sum->center(c), sum->h());
  if (center) grow(*center, radius);
  const double pad = 0.05 * std::max(xmax - xmin, ymax - ymin) + 1e-9;
  svg::Canvas cv(xmin - pad, ymin - pad, xmax + pad, ymax + pad);
  if (sum) cv.cells(*sum, "#9ecae1");
  cv.polyline(pts, "#08519c", 1.5);
  cv.dot(patch.x0, "#08519c", 3.0);
  if (center) {
    cv.circle(*center, radius, "#d62728");
    cv.dot(*center, "#d62728", 2.0);
  }
  return cv.str();
}

// ---------------------------------------------------------------------------
// Kinds
// ---------------------------------------------------------------------------

inline void run_flatness(Context& ctx) {
  check_kind_keys(ctx.cfg, {"body", "ambient", "x0", "eps", "samples", "tol"});
  BoundaryPatch patch = patch_of(ctx, ctx.cfg, "config");
  const int n = ctx.cfg.contains("samples") ? io::integer(ctx.cfg["samples"], "config.samples") : 256;
  const double tol = ctx.cfg.contains("tol") ? io::number(ctx.cfg["tol"], "config.tol") : 1e-7;
  auto v = ctx.timed("flatness", [&] { return is_flattening_point(patch, n, tol); });
  ctx.results["flatness"] = io::to_json(v);
  const auto supports = support_functionals(*patch.body, patch.x0, patch.ambient);
  ctx.results["support_count"] = supports.size();
  // A flattening point has a unique supporting functional.
  ctx.results["unique_support_consistent"] = !is_flat(v) || supports.size() == 1;
  ctx.verdict("flatness", expect_string(ctx.cfg, is_flat(v) ? "Flat" : "NotFlat"), is_flat(v) ? "Flat" : "NotFlat");
  if (patch.dim() == 2) ctx.files.push_back({"patch.svg", patch_svg(patch, nullptr, nullptr, 0.0)});
}

inline double flat_pair_deviation(const BoundaryPatch& patch, const FlatCase& fc, std::uint64_t seed, int pairs) {
  const auto pts = patch_sample(patch, 256);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Vec& a = pts[rng() % pts.size()];
    const Vec& b = pts[rng() % pts.size()];
    worst = std::max(worst, std::abs(fc.support.f(a + b) - fc.sum_level));
  }
  return worst;
}

inline std::uint64_t seed_of(const json& cfg) {
  return cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 1;
}

inline void run_certify(Context& ctx) {
  check_kind_keys(ctx.cfg, {"body", "ambient", "x0", "eps", "options", "oracle"});
  BoundaryPatch patch = patch_of(ctx, ctx.cfg, "config");
  const DecideOptions opt = decide_options(ctx.cfg);
  const OracleOptions oo = oracle_options(ctx.cfg);
  PatchDecision d = ctx.timed("decide", [&] { return sphere_patch_decide(patch, opt); });
  const std::string observed = observed_kind(d);
  ctx.verdict("decision", expect_string(ctx.cfg, observed), observed);

  if (const auto* fc = std::get_if<FlatCase>(&d)) {
    ctx.results["decision"] = {{"kind", "FlatCase"}, {"support", io::to_json(fc->support)}, {"sum_level", fc->sum_level}};
    const double dev = flat_pair_deviation(patch, *fc, seed_of(ctx.cfg), 10000);
    ctx.results["flat_pair_deviation"] = dev;
    ctx.verdict("flat_pairs", "within 2 tol", dev <= 2.0 * opt.flat_tol ? "within 2 tol" : "exceeds 2 tol");
    if (oo.enabled) {
      auto v = ctx.timed("oracle", [&] {
        return oracle_full(
            [&](double h) {
              GridSet u = rasterize(PatchDesc{patch}, h);
              return minkowski_sum(u, u);
            },
            oo);
      });
      ctx.results["oracle"] = io::to_json(v);
      ctx.verdict("grid_oracle", "Empty", to_string(v.kind));
    }
    if (patch.dim() == 2) ctx.files.push_back({"patch.svg", patch_svg(patch, nullptr, nullptr, 0.0)});
    return;
  }

  const auto& c = std::get<Certified>(d);
  ctx.results["decision"] = {{"kind", "Certified"}, {"route", c.route}, {"margin", c.margin}};
  ctx.certificates.push_back(certificate_entry(c, opt));
  ctx.verdict("witness_verify", "pass", c.verification.pass ? "pass" : "fail");
  const BoundaryPatch& cp = c.instance.patch;
  const Vec& local_shift = c.instance.cert.shift;
  if (oo.enabled) {
    auto raster = [&](double h) { return rasterize(PatchDesc{cp}, h); };
    auto v = ctx.timed("oracle", [&] { return oracle_interior(raster, raster, local_shift, c.eta_ambient, oo); });
    ctx.results["oracle"] = io::to_json(v);
    ctx.verdict("grid_oracle", "Interior", to_string(v.kind));
    if (cp.dim() == 2) {
      const double h = c.eta_ambient / oo.eta_fractions.back();
      GridSet u = raster(h);
      GridSet s = minkowski_sum(u, u, window_around(u, local_shift, oo.window));
      ctx.files.push_back({"certificate.svg", patch_svg(cp, &s, &local_shift, c.instance.cert.eta)});
    }
  }
  const auto& w = c.instance.cert;
  ctx.files.push_back({"certificate.csv", io::csv({{"field", "value"},
                                                   {"sign", to_string(w.sign)},
                                                   {"t0", io::fmt(w.t0)},
                                                   {"t1", io::fmt(w.t1)},
                                                   {"alpha", io::fmt(w.alpha)},
                                                   {"eta", io::fmt(w.eta)},
                                                   {"n", std::to_string(w.n)},
                                                   {"delta", io::fmt(w.delta)},
                                                   {"m", io::fmt(w.m)},
                                                   {"M", io::fmt(w.M)}})});
}

inline void run_volkmann_walter(Context& ctx) {
  check_kind_keys(ctx.cfg, {"body", "ambient", "arcs", "options", "oracle"});
  const DecideOptions opt = decide_options(ctx.cfg);
  const OracleOptions oo = oracle_options(ctx.cfg);
  const json& arcs_j = io::need(ctx.cfg, "arcs", "config");
  if (!arcs_j.is_array() || arcs_j.empty()) throw ConfigError("config.arcs: expected a non-empty list");
  std::vector<BoundaryPatch> arcs;
  for (std::size_t i = 0; i < arcs_j.size(); ++i) {
    const std::string where = "config.arcs[" + std::to_string(i) + "]";
    io::check_keys(arcs_j[i], {"x0", "eps"}, where);
    json p = arcs_j[i];
    p["body"] = io::need(ctx.cfg, "body", "config");
    if (ctx.cfg.contains("ambient")) p["ambient"] = ctx.cfg["ambient"];
    arcs.push_back(patch_of(ctx, p, where));
  }
  // One body for every arc.
  for (auto& a : arcs) a.body = arcs.front().body;
  VWDecision d = ctx.timed("decide", [&] { return volkmann_walter_check(arcs, opt); });
  auto union_raster = [&](double h) {
    std::vector<GridSet> parts;
    for (const auto& a : arcs) parts.push_back(rasterize(PatchDesc{a}, h));
    return grid_union(parts, arcs.front().dim(), h);
  };
  if (const auto* na = std::get_if<NotApplicable>(&d)) {
    ctx.results["decision"] = {{"kind", "NotApplicable"}, {"reason", na->reason}};
    ctx.verdict("decision", expect_string(ctx.cfg, "NotApplicable"), "NotApplicable");
    if (oo.enabled) {
      auto v = ctx.timed("oracle", [&] {
        return oracle_full([&](double h) {
          GridSet a = union_raster(h);
          return minkowski_sum(a, a);
        }, oo);
      });
      ctx.results["oracle"] = io::to_json(v);
      ctx.verdict("grid_oracle", "Empty", to_string(v.kind));
    }
    return;
  }
  const auto& vw = std::get<VWCertified>(d);
  const std::string observed = std::string("Certified-") + vw.which_case;
  ctx.results["decision"] = {{"kind", "Certified"}, {"case", std::string(1, vw.which_case)},
                             {"arc", vw.arc}, {"path_arc", vw.path_arc}};
  ctx.verdict("decision", expect_string(ctx.cfg, observed), observed);
  ctx.certificates.push_back(certificate_entry(vw.result, opt));
  ctx.verdict("witness_verify", "pass", vw.result.verification.pass ? "pass" : "fail");
  if (oo.enabled) {
    auto v = ctx.timed("oracle", [&] {
      return oracle_interior(union_raster, union_raster, vw.result.shift, vw.result.eta_ambient, oo);
    });
    ctx.results["oracle"] = io::to_json(v);
    ctx.verdict("grid_oracle", "Interior", to_string(v.kind));
  }
}

inline void run_cantor(Context& ctx) {
  check_kind_keys(ctx.cfg, {"lambda", "depth", "k", "ssp", "product_dim"});
  const Rational lambda = io::rational_from_json(io::need(ctx.cfg, "lambda", "config"), "config.lambda");
  const int depth = io::integer(io::need(ctx.cfg, "depth", "config"), "config.depth");
  const int k = ctx.cfg.contains("k") ? io::integer(ctx.cfg["k"], "config.k") : 2;
  if (!(lambda > 0 && lambda < Rational(1, 2))) throw ConfigError("config.lambda must lie in (0, 1/2)");
  if (depth < 0 || depth > 20) throw ConfigError("config.depth must lie in [0, 20]");
  if (k < 1) throw ConfigError("config.k must be >= 1");

  std::vector<std::vector<std::string>> table{{"depth", "measure_C", "measure_S_k", "pieces_S_k", "S_k_is_full"}};
  std::vector<std::pair<double, double>> mc, ms;
  IntervalUnion last;
  ctx.timed("sums", [&] {
    for (int d = 0; d <= depth; ++d) {
      IntervalUnion c = cantor_stage(lambda, d);
      IntervalUnion s = iterate_interval_sum(c, k);
      const Rational m1 = measure(c), m2 = measure(s);
      table.push_back({std::to_string(d), to_string(m1), to_string(m2), std::to_string(s.size()),
                       equals_interval(s, 0, k) ? "true" : "false"});
      mc.push_back({static_cast<double>(d), static_cast<double>(m1)});
      ms.push_back({static_cast<double>(d), static_cast<double>(m2)});
      if (d == depth) last = std::move(s);
    }
  });
  const bool full = equals_interval(last, 0, k);
  ctx.results["lambda"] = io::to_json(lambda);
  ctx.results["sum"] = {{"k", k}, {"depth", depth}, {"equals_interval", full}, {"measure", io::to_json(measure(last))},
                        {"pieces", last.size()}};
  if (last.size() <= 64) ctx.results["sum"]["intervals"] = io::to_json(last);
  const std::string exp = ctx.cfg.contains("expect") ? expect_string(ctx.cfg, "") : (full ? "full" : "not full");
  ctx.verdict("equals_interval", exp, full ? "full" : "not full");
  ctx.files.push_back({"measures.csv", io::csv(table)});
  ctx.files.push_back({"measures.svg", svg::line_chart("measure vs depth", "depth", "measure",
                                                       {{"C", mc}, {"S_" + std::to_string(k), ms}})});

  if (ctx.cfg.contains("ssp")) {
    const json& sj = ctx.cfg["ssp"];
    io::check_keys(sj, {"k_max", "depth"}, "config.ssp");
    const int kmax = sj.contains("k_max") ? io::integer(sj["k_max"], "ssp.k_max") : predicted_k(lambda) + 1;
    const int sd = sj.contains("depth") ? io::integer(sj["depth"], "ssp.depth") : 8;
    if (sd < 4 || sd > 16) throw ConfigError("config.ssp.depth must lie in [4, 16]");
    SspReport rep = ctx.timed("ssp", [&] { return ssp_classify(lambda, kmax, sd); });
    json rows = json::array();
    std::vector<std::vector<std::string>> t{{"k", "depth", "measure_S_k_minus_1"}};
    for (const auto& r : rep.rows) {
      json ms_j = json::array();
      for (std::size_t i = 0; i < r.prev_measures.size(); ++i) {
        ms_j.push_back(io::to_json(r.prev_measures[i]));
        t.push_back({std::to_string(r.k), std::to_string(i + 1), to_string(r.prev_measures[i])});
      }
      rows.push_back({{"k", r.k}, {"sum_is_full_interval", r.sum_is_full_interval},
                      {"prev_sum_measures", ms_j}, {"prev_strictly_decreasing", r.prev_strictly_decreasing}});
    }
    ctx.results["ssp"] = {{"predicted_k", rep.predicted_k}, {"depth", sd}, {"rows", rows}};
    ctx.files.push_back({"ssp.csv", io::csv(t)});
    const int ks = rep.predicted_k;
    if (ks <= kmax) {
      const auto& row = rep.rows[static_cast<std::size_t>(ks - 1)];
      ctx.verdict("ssp_full_at_k_star", "full", row.sum_is_full_interval ? "full" : "not full");
      if (ks >= 2)
        ctx.verdict("ssp_prev_measures", "strictly decreasing",
                    row.prev_strictly_decreasing ? "strictly decreasing" : "not decreasing");
    }
  }
  if (ctx.cfg.contains("product_dim")) {
    const int n = io::integer(ctx.cfg["product_dim"], "config.product_dim");
    if (n < 1 || n > 8) throw ConfigError("config.product_dim must lie in [1, 8]");
    auto axes = product_sumset(lambda, depth, n, k);
    bool cube = true;
    for (const auto& a : axes) cube = cube && equals_interval(a, 0, k);
    ctx.results["product"] = {{"n", n}, {"k", k}, {"is_cube", cube}};
    ctx.verdict("product_cube", full ? "cube" : "not cube", cube ? "cube" : "not cube");
  }
}

inline std::vector<Vec> affine_basis_polyline(int n) {
  std::vector<Vec> v{Vec::zero(n)};
  for (int i = 0; i < n; ++i) v.push_back(Vec::unit(n, i));
  return v;
}

inline void run_polyline(Context& ctx) {
  check_kind_keys(ctx.cfg, {"n", "oracle"});
  const int n = io::integer(io::need(ctx.cfg, "n", "config"), "config.n");
  if (n < 2 || n > 3) throw ConfigError("config.n must be 2 or 3");
  const OracleOptions oo =
      oracle_options(ctx.cfg, n == 2 ? std::vector<double>{0.04, 0.02} : std::vector<double>{0.1, 0.05});
  const auto verts = affine_basis_polyline(n);
  auto sums = [&](int k) {
    return [&, k](double h) { return iterate_sumset(rasterize(PolylineDesc{verts}, h), k); };
  };
  auto lower = ctx.timed("lower", [&] { return oracle_full(sums(n - 1), oo); });
  auto upper = ctx.timed("upper", [&] { return oracle_full(sums(n), oo); });
  ctx.results["lower"] = io::to_json(lower);
  ctx.results["upper"] = io::to_json(upper);
  ctx.verdict("S_n_minus_1", "Empty", to_string(lower.kind));
  ctx.verdict("S_n", "Interior", to_string(upper.kind));
  std::vector<std::vector<std::string>> t{{"set", "h", "measure"}};
  for (std::size_t i = 0; i < oo.resolutions.size(); ++i) {
    t.push_back({"S_" + std::to_string(n - 1), io::fmt(oo.resolutions[i]), io::fmt(lower.measures[i])});
    t.push_back({"S_" + std::to_string(n), io::fmt(oo.resolutions[i]), io::fmt(upper.measures[i])});
  }
  ctx.files.push_back({"measures.csv", io::csv(t)});
  if (n == 2) {
    GridSet s = sums(2)(oo.resolutions.back());
    svg::Canvas cv(-0.1, -0.1, 2.1, 2.1);
    cv.cells(s, "#9ecae1");
    cv.polyline(verts, "#08519c", 2.0);
    ctx.files.push_back({"sumset.svg", cv.str()});
    ctx.files.push_back({"sumset.pgm", to_pgm(s)});
  }
}

// Rank of {p_i - p_0} by Gaussian elimination with a relative pivot floor.
inline int affine_rank(const std::vector<Vec>& pts) {
  if (pts.size() < 2) return 0;
  const int d = pts.front().dim();
  std::vector<std::vector<double>> m;
  double scale = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) row[static_cast<std::size_t>(a)] = pts[i][a] - pts[0][a], scale = std::max(scale, std::abs(row[static_cast<std::size_t>(a)]));
    m.push_back(row);
  }
  const double floor = 1e-9 * std::max(scale, 1e-300);
  int rank = 0;
  for (int col = 0; col < d && rank < static_cast<int>(m.size()); ++col) {
    std::size_t piv = static_cast<std::size_t>(rank);
    for (std::size_t r = piv; r < m.size(); ++r)
      if (std::abs(m[r][static_cast<std::size_t>(col)]) > std::abs(m[piv][static_cast<std::size_t>(col)])) piv = r;
    if (std::abs(m[piv][static_cast<std::size_t>(col)]) <= floor) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < m.size(); ++r) {
      const double f = m[r][static_cast<std::size_t>(col)] / m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
      for (int c = col; c < d; ++c) m[r][static_cast<std::size_t>(c)] -= f * m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)];
    }
    ++rank;
  }
  return rank;
}

inline void run_curve_sp(Context& ctx) {
  check_kind_keys(ctx.cfg, {"curve", "oracle", "samples"});
  const json& c = io::need(ctx.cfg, "curve", "config");
  const std::string type = io::need(c, "type", "config.curve").get<std::string>();
  std::vector<Vec> pts, anchors;
  int n = 0;
  if (type == "polyline") {
    io::check_keys(c, {"type", "vertices"}, "config.curve");
    pts = io::points_from_json(io::need(c, "vertices", "config.curve"), "config.curve.vertices");
    if (pts.size() < 2) throw ConfigError("config.curve: a polyline needs at least two vertices");
    anchors = pts;
    n = pts.front().dim();
  } else if (type == "arc") {
    io::check_keys(c, {"type", "center", "radius", "angles"}, "config.curve");
    const Vec ctr = io::vec_from_json(io::need(c, "center", "config.curve"), "config.curve.center");
    if (ctr.dim() != 2) throw ConfigError("config.curve: arcs live in R^2");
    const double r = io::number(io::need(c, "radius", "config.curve"), "config.curve.radius");
    const json& ang = io::need(c, "angles", "config.curve");
    if (!ang.is_array() || ang.size() != 2) throw ConfigError("config.curve.angles: expected [from, to]");
    const double a0 = io::number(ang[0], "config.curve.angles"), a1 = io::number(ang[1], "config.curve.angles");
    const int samples = ctx.cfg.contains("samples") ? io::integer(ctx.cfg["samples"], "config.samples") : 512;
    if (!(r > 0.0) || samples < 3) throw ConfigError("config.curve: bad radius or sample count");
    for (int i = 0; i < samples; ++i) {
      const double a = a0 + (a1 - a0) * i / (samples - 1);
      pts.push_back(ctr + Vec{r * std::cos(a), r * std::sin(a)});
    }
    n = 2;
    for (int i = 0; i <= n; ++i) anchors.push_back(pts[static_cast<std::size_t>(i * (samples - 1) / n)]);
  } else {
    throw ConfigError("config.curve: unknown curve type '" + type + "'");
  }
  const int rank = affine_rank(anchors);
  ctx.results["affine_rank"] = rank;
  if (rank < n)
    throw ConfigError("config.curve: the curve must pass through " + std::to_string(n + 1) +
                      " affinely independent points in R^" + std::to_string(n));
  const OracleOptions oo =
      oracle_options(ctx.cfg, n == 2 ? std::vector<double>{0.04, 0.02} : std::vector<double>{0.1, 0.05});
  auto v = ctx.timed("oracle", [&] {
    return oracle_full([&](double h) { return iterate_sumset(rasterize(PolylineDesc{pts}, h), n); }, oo);
  });
  ctx.results["label"] = "exploration, not a theorem";
  ctx.results["n"] = n;
  ctx.results["oracle"] = io::to_json(v);
  const std::string observed = to_string(v.kind);
  ctx.verdict("S_n", expect_string(ctx.cfg, observed), observed);
}

inline void run_gauge_renorm(Context& ctx) {
  check_kind_keys(ctx.cfg, {"body", "ambient", "x0", "samples", "eps_prime", "checks", "gap_tol"});
  const BodyPtr K = io::body_from_json(io::need(ctx.cfg, "body", "config"), ctx.bodies, "config.body");
  const Vec x0 = io::vec_from_json(io::need(ctx.cfg, "x0", "config"), "config.x0");
  const NormSpec ambient = ctx.cfg.contains("ambient") ? io::norm_from_json(ctx.cfg["ambient"], ctx.bodies, "config.ambient")
                                                       : NormSpec(LpNorm::l(2.0));
  const int samples = ctx.cfg.contains("samples") ? io::integer(ctx.cfg["samples"], "config.samples") : 256;
  const int checks = ctx.cfg.contains("checks") ? io::integer(ctx.cfg["checks"], "config.checks") : 1000;
  if (!ambient.is_lp()) throw ConfigError("config.ambient must be a p-norm");
  if (samples < 16 || checks < 16) throw ConfigError("config: samples and checks must be >= 16");
  GaugeRenorm g = ctx.timed("build", [&] {
    try {
      return build_gauge_body(*K, x0, ambient, samples);
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  });
  const double reach = outer_radius(*g.body, ambient, Vec::zero(x0.dim()));
  const double eps_v = ctx.cfg.contains("eps_prime") ? io::number(ctx.cfg["eps_prime"], "config.eps_prime")
                                                     : 0.9 * (g.delta / 2.0) / reach;
  const double gap_tol = ctx.cfg.contains("gap_tol") ? io::number(ctx.cfg["gap_tol"], "config.gap_tol") : 1e-3 * g.delta;
  BoundaryPatch vpatch = make_patch(g.body, g.x0_local, eps_v, g.norm);
  const auto pts = patch_sample(vpatch, checks);
  double gap = 0.0, reach_x0 = 0.0, asym = 0.0, cross = 0.0;
  for (const auto& y : pts) {
    gap = std::max(gap, steinhaus::detail::boundary_gap(*K, y + g.offset));
    reach_x0 = std::max(reach_x0, norm_eval(ambient, y - g.x0_local));
    asym = std::max(asym, std::abs(norm_eval(g.norm, y) - norm_eval(g.norm, -y)));
    cross = std::max(cross, std::abs(gauge_eval(*g.body, y) - norm_eval(g.norm, y)));
  }
  const double mu = norm_eval(g.norm, g.x0_local);
  ctx.results["delta"] = g.delta;
  ctx.results["offset"] = io::to_json(g.offset);
  ctx.results["mu_x0"] = mu;
  ctx.results["eps_prime"] = eps_v;
  ctx.results["max_boundary_gap"] = gap;
  ctx.results["max_distance_to_x0"] = reach_x0;
  ctx.results["max_asymmetry"] = asym;
  ctx.results["max_gauge_bisection_error"] = cross;
  ctx.results["vertex_count"] = g.body->hull()->vertices.size();
  ctx.verdict("mu_x0_is_one", "true", std::abs(mu - 1.0) <= 1e-9 ? "true" : "false");
  ctx.verdict("symmetric", "true", asym <= 2e-9 ? "true" : "false");
  ctx.verdict("patch_inclusion", "true", gap <= gap_tol && reach_x0 < g.delta / 2.0 ? "true" : "false");
  ctx.verdict("gauge_bisection_agrees", "true", cross <= 2e-9 ? "true" : "false");
}

}  // namespace detail

// Runs one experiment. Schema problems raise ConfigError before any
// computation; failures inside the computation are recorded in the report.
inline RunResult run_experiment(const json& cfg) {
  if (!cfg.is_object()) throw ConfigError("config: expected a JSON object");
  const std::string kind = io::need(cfg, "kind", "config").get<std::string>();
  if (std::find_if(std::begin(kKinds), std::end(kKinds), [&](const char* k) { return kind == k; }) == std::end(kKinds))
    throw ConfigError("config: unknown experiment kind '" + kind + "'");
  if (cfg.contains("name") && !cfg["name"].is_string()) throw ConfigError("config.name: expected a string");
  if (cfg.contains("seed") && !cfg["seed"].is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");

  detail::Context ctx{cfg, detail::registry(cfg), {}, json::object(), json::array(), json::array(), json::object(), {}};
  try {
    if (kind == "flatness") detail::run_flatness(ctx);
    else if (kind == "certify") detail::run_certify(ctx);
    else if (kind == "volkmann-walter") detail::run_volkmann_walter(ctx);
    else if (kind == "cantor") detail::run_cantor(ctx);
    else if (kind == "polyline") detail::run_polyline(ctx);
    else if (kind == "curve-sp") detail::run_curve_sp(ctx);
    else detail::run_gauge_renorm(ctx);
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::exception& e) {
    ctx.errors.push_back({{"kind", kind}, {"message", e.what()}});
  }

  RunResult out;
  json verdicts = json::array();
  bool ok = ctx.errors.empty() && !ctx.verdicts.empty();
  for (const auto& v : ctx.verdicts) {
    verdicts.push_back({{"name", v.name}, {"expected", v.expected}, {"observed", v.observed}, {"ok", v.ok}});
    ok = ok && v.ok;
  }
  out.ok = ok;
  out.report = {{"tool", "steinhaus"},
                {"format", 1},
                {"kind", kind},
                {"name", cfg.value("name", kind)},
                {"config", cfg},
                {"config_digest", io::digest(cfg)},
                {"verdicts", verdicts},
                {"results", ctx.results},
                {"certificates", ctx.certificates},
                {"errors", ctx.errors},
                {"status", ok ? "ok" : "failed"}};
  out.timings = ctx.timings;
  out.files = std::move(ctx.files);
  return out;
}

inline std::string output_dir(const json& cfg, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (cfg.contains("output")) return cfg["output"].get<std::string>();
  return "out/" + cfg.value("name", cfg.value("kind", std::string("run")));
}

inline void write_run(const RunResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  io::write_file(dir + "/report.json", r.report.dump(2) + "\n");
  io::write_file(dir + "/timings.json", r.timings.dump(2) + "\n");
  for (const auto& f : r.files) io::write_file(dir + "/" + f.name, f.content);
}

struct VerifyOutcome {
  bool ok = false;
  json details = json::array();
};

// Re-checks the digest and re-runs witness_verify on every stored
// certificate. Structural problems raise ConfigError.
inline VerifyOutcome verify_report(const json& report) {
  VerifyOutcome out;
  if (!report.is_object() || !report.contains("config") || !report.contains("config_digest"))
    throw ConfigError("report: missing config or digest");
  bool ok = io::digest(report["config"]) == report["config_digest"].get<std::string>();
  out.details.push_back({{"check", "config_digest"}, {"pass", ok}});
  if (report.contains("certificates")) {
    std::size_t i = 0;
    for (const auto& e : report["certificates"]) {
      const std::string where = "report.certificates[" + std::to_string(i++) + "]";
      BoundaryPatch patch = io::patch_from_json(io::need(e, "patch", where), {}, where + ".patch");
      Path path = io::path_from_json(io::need(e, "path", where), where + ".path");
      WitnessCertificate cert = io::certificate_from_json(io::need(e, "certificate", where), where + ".certificate");
      const json& vj = io::need(e, "verify", where);
      const int nz = io::integer(io::need(vj, "nz", where), where + ".verify.nz");
      const double tol = io::number(io::need(vj, "tol", where), where + ".verify.tol");
      VerifyReport rep = witness_verify(cert, patch, path, nz, tol);
      out.details.push_back({{"check", where}, {"pass", rep.pass}, {"worst_residual", rep.worst_residual}});
      ok = ok && rep.pass;
    }
  }
  if (report.contains("status") && report["status"] != "ok") ok = false;
  out.ok = ok;
  return out;
}

}  // namespace steinhaus::cli
