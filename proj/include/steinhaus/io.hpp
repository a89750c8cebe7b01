#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "steinhaus/interval1d.hpp"
#include "steinhaus/paths.hpp"
#include "steinhaus/sumset_grid.hpp"

namespace steinhaus::io {

using json = nlohmann::json;

using BodyRegistry = std::map<std::string, BodyPtr>;

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

inline const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (j.is_string() && (j == "inf" || j == "infinity")) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

inline json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

// ---------------------------------------------------------------------------
// Vectors, norms, bodies
// ---------------------------------------------------------------------------

inline json to_json(const Vec& v) {
  json a = json::array();
  for (double c : v.coords()) a.push_back(c);
  return a;
}

inline Vec vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw ConfigError(where + ": expected 1 to 3 coordinates");
  std::vector<double> c;
  for (const auto& x : j) c.push_back(number(x, where));
  return Vec(std::span<const double>(c));
}

inline std::vector<Vec> points_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of points");
  std::vector<Vec> pts;
  for (const auto& p : j) pts.push_back(vec_from_json(p, where));
  for (const auto& p : pts)
    if (p.dim() != pts.front().dim()) throw ConfigError(where + ": mixed dimensions");
  return pts;
}

inline json to_json(const BodyPtr& body);

inline json to_json(const NormSpec& n) {
  if (n.is_lp()) {
    const auto& lp = n.lp();
    if (lp.weights.empty()) return {{"kind", "p"}, {"p", number_json(lp.p)}};
    return {{"kind", "weighted"}, {"p", number_json(lp.p)}, {"w", lp.weights}};
  }
  return {{"kind", "gauge"}, {"body", to_json(n.gauge_ref().body)}};
}

inline BodyPtr body_from_json(const json& j, const BodyRegistry& reg, const std::string& where);

inline NormSpec norm_from_json(const json& j, const BodyRegistry& reg, const std::string& where) {
  const std::string kind = need(j, "kind", where).get<std::string>();
  if (kind == "p") {
    check_keys(j, {"kind", "p"}, where);
    return LpNorm::l(number(need(j, "p", where), where + ".p"));
  }
  if (kind == "weighted") {
    check_keys(j, {"kind", "p", "w"}, where);
    std::vector<double> w;
    for (const auto& x : need(j, "w", where)) w.push_back(number(x, where + ".w"));
    return LpNorm::weighted(number(need(j, "p", where), where + ".p"), w);
  }
  if (kind == "gauge") {
    check_keys(j, {"kind", "body"}, where);
    const json& b = need(j, "body", where);
    std::string id = b.is_string() ? b.get<std::string>() : "inline";
    return NormSpec::gauge(body_from_json(b, reg, where + ".body"), id);
  }
  throw ConfigError(where + ": unknown norm kind '" + kind + "'");
}

// Vertex list of an OFF file ("OFF", counts line, then vertices). Comments
// start with '#'. Three-coordinate files with all z = 0 read as 2D.
inline std::vector<Vec> parse_off(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  std::size_t pos = 0;
  if (pos < tokens.size() && tokens[pos].find("OFF") != std::string::npos) ++pos;
  if (tokens.size() < pos + 3) throw ConfigError("OFF: missing counts line");
  long nv = 0;
  try {
    nv = std::stol(tokens[pos]);
  } catch (...) {
    throw ConfigError("OFF: bad vertex count");
  }
  pos += 3;
  if (nv <= 0 || tokens.size() < pos + static_cast<std::size_t>(nv) * 3)
    throw ConfigError("OFF: truncated vertex list");
  std::vector<Vec> pts;
  bool flat = true;
  for (long i = 0; i < nv; ++i) {
    double c[3];
    for (double& x : c) {
      try {
        x = std::stod(tokens[pos++]);
      } catch (...) {
        throw ConfigError("OFF: bad coordinate");
      }
    }
    flat = flat && c[2] == 0.0;
    pts.push_back(Vec{c[0], c[1], c[2]});
  }
  if (flat)
    for (auto& p : pts) p = Vec{p[0], p[1]};
  return pts;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline json body_json(const ConvexBody& b) {
  return std::visit(
      [](const auto& r) -> json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, NormBall>) {
          return {{"kind", "ball"}, {"norm", to_json(NormSpec(r.norm))}, {"radius", r.radius}, {"center", to_json(r.center)}};
        } else if constexpr (std::is_same_v<R, Polytope>) {
          json v = json::array();
          for (const auto& p : r.input_vertices) v.push_back(to_json(p));
          return {{"kind", "polytope"}, {"vertices", v}};
        } else {
          json c = json::array();
          for (const auto& p : r.cloud) c.push_back(to_json(p));
          return {{"kind", "gauge"}, {"cloud", c}, {"r", r.r}, {"ball_norm", to_json(NormSpec(r.ball_norm))},
                  {"directions", r.ball_directions}};
        }
      },
      b.repr());
}

inline json to_json(const BodyPtr& body) { return body_json(*body); }

inline BodyPtr body_from_json(const json& j, const BodyRegistry& reg, const std::string& where) {
  if (j.is_string()) {
    auto it = reg.find(j.get<std::string>());
    if (it == reg.end()) throw ConfigError(where + ": unknown body id '" + j.get<std::string>() + "'");
    return it->second;
  }
  const std::string kind = need(j, "kind", where).get<std::string>();
  try {
    if (kind == "ball") {
      check_keys(j, {"kind", "norm", "radius", "center", "dim"}, where);
      NormSpec n = norm_from_json(need(j, "norm", where), reg, where + ".norm");
      if (!n.is_lp()) throw ConfigError(where + ": a ball needs a p-norm");
      Vec c = j.contains("center") ? vec_from_json(j["center"], where + ".center")
                                   : Vec::zero(j.contains("dim") ? integer(j["dim"], where + ".dim") : 2);
      double r = j.contains("radius") ? number(j["radius"], where + ".radius") : 1.0;
      return make_body(ConvexBody::ball(n.lp(), r, c));
    }
    if (kind == "polytope") {
      check_keys(j, {"kind", "vertices", "off", "off_file"}, where);
      std::vector<Vec> v;
      if (j.contains("vertices")) v = points_from_json(j["vertices"], where + ".vertices");
      else if (j.contains("off")) v = parse_off(j["off"].get<std::string>());
      else if (j.contains("off_file")) v = parse_off(read_file(j["off_file"].get<std::string>()));
      else throw ConfigError(where + ": polytope needs vertices, off or off_file");
      return make_body(ConvexBody::polytope(std::move(v)));
    }
    if (kind == "gauge") {
      check_keys(j, {"kind", "cloud", "r", "ball_norm", "directions"}, where);
      LpNorm bn = LpNorm::l(2.0);
      if (j.contains("ball_norm")) {
        NormSpec n = norm_from_json(j["ball_norm"], reg, where + ".ball_norm");
        if (!n.is_lp()) throw ConfigError(where + ": ball_norm must be a p-norm");
        bn = n.lp();
      }
      return make_body(ConvexBody::gauge(points_from_json(need(j, "cloud", where), where + ".cloud"),
                                         number(need(j, "r", where), where + ".r"), bn,
                                         j.contains("directions") ? integer(j["directions"], where) : 0));
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown body kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Paths, patches, certificates
// ---------------------------------------------------------------------------

inline json to_json(const Path& p) {
  json pts = json::array();
  for (const auto& x : p.points()) pts.push_back(to_json(x));
  return {{"t", p.times()}, {"points", pts}};
}

inline Path path_from_json(const json& j, const std::string& where) {
  check_keys(j, {"t", "points"}, where);
  auto pts = points_from_json(need(j, "points", where), where + ".points");
  if (!j.contains("t")) return Path::through(std::move(pts));
  std::vector<double> t;
  for (const auto& x : j["t"]) t.push_back(number(x, where + ".t"));
  try {
    return Path(std::move(t), std::move(pts));
  } catch (const PreconditionError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

// A gauge ambient norm built on the patch body itself is written as the
// reference "@patch" so that re-reading keeps the body and norm identical.
inline json to_json(const BoundaryPatch& p) {
  json ambient = (!p.ambient.is_lp() && p.ambient.gauge_ref().body.get() == p.body.get())
                     ? json{{"kind", "gauge"}, {"body", "@patch"}}
                     : to_json(p.ambient);
  return {{"body", to_json(p.body)}, {"x0", to_json(p.x0)}, {"eps", p.eps}, {"ambient", ambient}};
}

inline BoundaryPatch patch_from_json(const json& j, const BodyRegistry& reg, const std::string& where) {
  check_keys(j, {"body", "x0", "eps", "ambient"}, where);
  try {
    BodyPtr body = body_from_json(need(j, "body", where), reg, where + ".body");
    BodyRegistry local = reg;
    local["@patch"] = body;
    return make_patch(body, vec_from_json(need(j, "x0", where), where + ".x0"),
                      number(need(j, "eps", where), where + ".eps"),
                      norm_from_json(need(j, "ambient", where), local, where + ".ambient"));
  } catch (const PreconditionError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline json to_json(const LinearFunctional& f) { return to_json(f.coeffs); }

inline json to_json(const WitnessCertificate& c) {
  json terms = json::object();
  for (std::size_t k = 0; k < c.eta_terms.size(); ++k) terms[kEtaTermNames[k]] = c.eta_terms[k];
  return {{"sign", to_string(c.sign)},
          {"t0", c.t0},
          {"t1", c.t1},
          {"alpha", c.alpha},
          {"eta", c.eta},
          {"shift", to_json(c.shift)},
          {"functional", to_json(c.functional)},
          {"m", c.m},
          {"M", c.M},
          {"n", c.n},
          {"delta", c.delta},
          {"eps", c.eps},
          {"radius", c.radius},
          {"center", to_json(c.center)},
          {"x0", to_json(c.x0)},
          {"reversed", c.reversed},
          {"restrict", {c.restrict_lo, c.restrict_hi}},
          {"eta_terms", terms},
          {"safety", c.safety}};
}

inline WitnessCertificate certificate_from_json(const json& j, const std::string& where) {
  check_keys(j, {"sign", "t0", "t1", "alpha", "eta", "shift", "functional", "m", "M", "n", "delta", "eps",
                 "radius", "center", "x0", "reversed", "restrict", "eta_terms", "safety"},
             where);
  WitnessCertificate c;
  const std::string sign = need(j, "sign", where).get<std::string>();
  if (sign != "sum" && sign != "difference") throw ConfigError(where + ": bad sign");
  c.sign = sign == "sum" ? Sign::Sum : Sign::Difference;
  c.t0 = number(need(j, "t0", where), where);
  c.t1 = number(need(j, "t1", where), where);
  c.alpha = number(need(j, "alpha", where), where);
  c.eta = number(need(j, "eta", where), where);
  c.shift = vec_from_json(need(j, "shift", where), where + ".shift");
  c.functional = LinearFunctional(vec_from_json(need(j, "functional", where), where + ".functional"), true);
  c.m = number(need(j, "m", where), where);
  c.M = number(need(j, "M", where), where);
  c.n = integer(need(j, "n", where), where);
  c.delta = number(need(j, "delta", where), where);
  c.eps = number(need(j, "eps", where), where);
  c.radius = number(need(j, "radius", where), where);
  c.center = vec_from_json(need(j, "center", where), where + ".center");
  c.x0 = vec_from_json(need(j, "x0", where), where + ".x0");
  c.reversed = need(j, "reversed", where).get<bool>();
  const json& r = need(j, "restrict", where);
  if (!r.is_array() || r.size() != 2) throw ConfigError(where + ": restrict needs two numbers");
  c.restrict_lo = number(r[0], where);
  c.restrict_hi = number(r[1], where);
  if (j.contains("eta_terms"))
    for (std::size_t k = 0; k < c.eta_terms.size(); ++k)
      c.eta_terms[k] = number(need(j["eta_terms"], kEtaTermNames[k], where + ".eta_terms"), where);
  if (j.contains("safety")) c.safety = number(j["safety"], where);
  return c;
}

inline json to_json(const VerifyReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures) fails.push_back({{"z", to_json(f.z)}, {"stage", f.stage}, {"detail", f.detail}});
  return {{"pass", r.pass}, {"worst_residual", r.worst_residual}, {"checked", r.checked}, {"failures", fails}};
}

inline json to_json(const CertifiedInstance& inst, int nz, double tol) {
  return {{"patch", to_json(inst.patch)},
          {"path", to_json(inst.path)},
          {"certificate", to_json(inst.cert)},
          {"verify", {{"nz", nz}, {"tol", tol}}}};
}

inline json to_json(const Support& s) { return {{"functional", to_json(s.f)}, {"c", s.c}}; }

inline json to_json(const FlatnessVerdict& v) {
  if (const auto* f = std::get_if<Flat>(&v))
    return {{"verdict", "Flat"}, {"support", to_json(f->support)}, {"candidates", f->candidate_count}};
  const auto& nf = std::get<NotFlat>(v);
  json ws = json::array();
  for (const auto& w : nf.witnesses)
    ws.push_back({{"support", to_json(w.support)}, {"z0", to_json(w.z0)}, {"deviation", w.deviation}});
  return {{"verdict", "NotFlat"}, {"margin", nf.margin}, {"witnesses", ws}};
}

// ---------------------------------------------------------------------------
// Exact values and rasters
// ---------------------------------------------------------------------------

inline json to_json(const BigInt& x) {
  if (x >= BigInt(std::numeric_limits<std::int64_t>::min()) && x <= BigInt(std::numeric_limits<std::int64_t>::max()))
    return x.convert_to<std::int64_t>();
  return x.str();
}

inline json to_json(const Rational& r) {
  return json::array({to_json(BigInt(boost::multiprecision::numerator(r))),
                      to_json(BigInt(boost::multiprecision::denominator(r)))});
}

inline Rational rational_from_json(const json& j, const std::string& where) {
  auto big = [&](const json& x) -> BigInt {
    if (x.is_number_integer()) return BigInt(x.get<std::int64_t>());
    if (x.is_string()) return BigInt(x.get<std::string>());
    throw ConfigError(where + ": expected an integer");
  };
  if (j.is_array() && j.size() == 2) {
    BigInt d = big(j[1]);
    if (d == 0) throw ConfigError(where + ": zero denominator");
    return Rational(big(j[0]), d);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(BigInt(s));
      BigInt d(s.substr(slash + 1));
      if (d == 0) throw ConfigError(where + ": zero denominator");
      return Rational(BigInt(s.substr(0, slash)), d);
    } catch (const std::runtime_error&) {
      throw ConfigError(where + ": bad rational '" + s + "'");
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw ConfigError(where + ": expected a rational as \"p/q\" or [p, q]");
}

inline json to_json(const IntervalUnion& u) {
  json a = json::array();
  for (const auto& iv : u.intervals()) a.push_back(json::array({to_json(iv.lo), to_json(iv.hi)}));
  return a;
}

inline IntervalUnion interval_union_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of intervals");
  std::vector<Interval> parts;
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2) throw ConfigError(where + ": interval needs two endpoints");
    parts.push_back({rational_from_json(iv[0], where), rational_from_json(iv[1], where)});
  }
  try {
    return IntervalUnion::normalized(std::move(parts));
  } catch (const PreconditionError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline json to_json(const GridSet& g) {
  json dims = json::array(), origin = json::array();
  for (int a = 0; a < g.dim(); ++a) dims.push_back(g.dims()[a]), origin.push_back(static_cast<double>(g.lo()[a]) * g.h());
  return {{"origin", origin}, {"h", g.h()}, {"dims", dims}, {"rle", run_lengths(g)}};
}

inline json to_json(const InteriorVerdict& v) {
  json blocks = json::array();
  for (const auto& b : v.blocks) blocks.push_back({{"h", b.h}, {"center", to_json(b.center)}, {"radius", b.radius}});
  return {{"verdict", to_string(v.kind)},
          {"resolutions", v.resolutions},
          {"measures", v.measures},
          {"eroded_cells", v.eroded_counts},
          {"thin_cells", v.thin_counts},
          {"blocks", blocks}};
}

// ---------------------------------------------------------------------------
// Digests and writing
// ---------------------------------------------------------------------------

inline std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string digest(const json& j) { return "fnv1a64:" + fnv1a64(j.dump()); }

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

// RFC 4180: CRLF records, fields quoted when they contain a comma, quote or
// line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
    out += "\r\n";
  }
  return out;
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace steinhaus::io
