#include <gtest/gtest.h>

#include <cmath>

#include "steinhaus/steinhaus.hpp"
#include "support.hpp"

using namespace steinhaus;
using testing_support::Gen;

namespace {

BodyPtr unit(LpNorm n, int d = 2) { return make_body(ConvexBody::unit_ball(std::move(n), d)); }

Path quarter_arc(bool reverse = false, int n = 256) {
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) {
    double a = std::numbers::pi / 2 * i / (n - 1);
    pts.push_back(Vec{std::cos(a), std::sin(a)});
  }
  if (reverse) std::reverse(pts.begin(), pts.end());
  return Path::through(pts);
}

Path radial_l2(double angle, int n = 256) {
  return radial_path(ConvexBody::unit_ball(LpNorm::l(2.0), 2), Vec{1, 0}, Vec{std::cos(angle), std::sin(angle)}, n);
}

}  // namespace

TEST(FunctionalRange, Examples) {
  auto r = functional_range(Path::segment(Vec{1, 0}, Vec{0, 1}), LinearFunctional(Vec{1, 0}));
  EXPECT_EQ(r.m, 0.0);
  EXPECT_EQ(r.M, 1.0);
  EXPECT_EQ(r.tmin, 1.0);
  EXPECT_EQ(r.tmax, 0.0);
  r = functional_range(Path::through({Vec{0.3, 0.4}, Vec{0.3, 0.4}}), LinearFunctional(Vec{1, 2}));
  EXPECT_EQ(r.m, r.M);
  r = functional_range(quarter_arc(), LinearFunctional(Vec{1, 0}));
  EXPECT_NEAR(r.m, 0.0, 1e-15);
  EXPECT_EQ(r.M, 1.0);
}

TEST(PlanePath, Examples) {
  EXPECT_TRUE(is_plane_path(Path::segment(Vec{1, -0.4}, Vec{1, 0.4}, 17), LinearFunctional(Vec{1, 0})));
  EXPECT_FALSE(is_plane_path(quarter_arc(), LinearFunctional(Vec{1, 0})));
  EXPECT_THROW(is_plane_path(quarter_arc(), LinearFunctional(Vec{0, 0})), PreconditionError);
}

TEST(PathConstruction, Rejections) {
  EXPECT_THROW(Path({0.0}, {Vec{0, 0}}), PreconditionError);
  EXPECT_THROW(Path({0.0, 0.5}, {Vec{0, 0}, Vec{1, 0}}), PreconditionError);
  EXPECT_THROW(Path({0.0, 0.0, 1.0}, {Vec{0, 0}, Vec{1, 0}, Vec{2, 0}}), PreconditionError);
  EXPECT_THROW(Path({0.0, 1.0}, {Vec{0, 0}, Vec{1, 0}}, 0.5), PreconditionError);
}

TEST(ContinuityModulus, Examples) {
  EXPECT_NEAR(continuity_modulus(Path::segment(Vec{0, 0}, Vec{1, 0}), 1.0), 0.5, 1e-15);
  EXPECT_EQ(continuity_modulus(Path::through({Vec{1, 1}, Vec{1, 1}}), 0.1), 1.0);
  // Frozen from breakpoint-exact bisection on the same polyline; the true
  // arc gives (4/pi) asin(1/8) = 0.159572350699...
  const double d = continuity_modulus(quarter_arc(), 0.5);
  EXPECT_NEAR(d, 0.15957267355657648, 1e-12);
  EXPECT_NEAR(d, 4 / std::numbers::pi * std::asin(0.125), 1e-6);
  EXPECT_THROW(continuity_modulus(quarter_arc(), 0.0), PreconditionError);
}

TEST(PartitionCount, StrictlyShorterSteps) {
  EXPECT_EQ(partition_count(0.25), 5);
  EXPECT_EQ(partition_count(0.3), 4);
  EXPECT_EQ(partition_count(1.0), 2);
  EXPECT_THROW(partition_count(0.0), PreconditionError);
}

TEST(ClimbWindow, UniformSegment) {
  const Path seg = Path::segment(Vec{0, 0}, Vec{1, 0});
  const LinearFunctional f(Vec{1, 0});
  auto w = find_climb_window(seg, f, 0.26, 4);
  EXPECT_GE(w.climb, 0.25);
  EXPECT_LT(w.t1 - w.t0, 0.26);
  EXPECT_EQ(w.t0, 0.0);
  EXPECT_THROW(find_climb_window(seg, f, 0.25, 4), PreconditionError);
  w = find_climb_window(seg, f, 0.25, partition_count(0.25));
  EXPECT_GE(w.climb, 0.2);
  EXPECT_LT(w.t1 - w.t0, 0.25);
}

TEST(ClimbWindow, PlanePathHasNoWindow) {
  EXPECT_THROW(find_climb_window(Path::segment(Vec{1, -0.4}, Vec{1, 0.4}), LinearFunctional(Vec{1, 0}), 0.5, 3),
               NumericalFailure);
}

TEST(ClimbWindow, ArcAgainstExhaustiveScan) {
  // Arc from (0,1) to (1,0): the first coordinate climbs fastest at t = 0.
  const Path arc = quarter_arc(true);
  const LinearFunctional f(Vec{1, 0});
  const double delta = continuity_modulus(arc, 0.5);
  const int n = partition_count(delta);
  EXPECT_EQ(n, 7);
  auto w = find_climb_window(arc, f, delta, n);
  const auto r = functional_range(arc, f);
  EXPECT_GE(w.climb, (r.M - r.m) / n);
  EXPECT_LT(w.t1 - w.t0, delta);
  // Earliest sample start found by a scan over all sample pairs.
  EXPECT_EQ(w.t0, 0.0);
  EXPECT_NEAR(f(arc.at(w.t1)) - f(arc.at(w.t0)), w.climb, 1e-15);
}

TEST(Certificate, RegressionOnCircle) {
  auto patch = make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.5, LpNorm::l(2.0));
  const Path path = radial_l2(0.4);
  auto c = steinhaus_certificate(patch, path, LinearFunctional(Vec{1, 0}), Sign::Sum);
  // Frozen from an independent evaluation of the construction.
  EXPECT_NEAR(c.delta, 0.62151948508025, 1e-9);
  EXPECT_EQ(c.n, 2);
  EXPECT_NEAR(c.t0, 0.24313725490196078, 1e-12);
  EXPECT_NEAR(c.t1, 0.7431372549019608, 1e-12);
  EXPECT_NEAR(c.alpha, 0.019734751499278724, 1e-12);
  EXPECT_NEAR(c.eta, 0.017761276349350853, 1e-12);
  const double terms[5] = {0.019734751499278724, 0.23026524850072128, 0.019734751499278724, 0.1762478935435922,
                           0.01978772203337953};
  for (int k = 0; k < 5; ++k) {
    EXPECT_GT(c.eta_terms[static_cast<std::size_t>(k)], 0.0);
    EXPECT_NEAR(c.eta_terms[static_cast<std::size_t>(k)], terms[k], 1e-12) << kEtaTermNames[static_cast<std::size_t>(k)];
  }
  EXPECT_NEAR(c.shift[0], 1.9756380702714693, 1e-12);
  EXPECT_NEAR(c.shift[1], 0.09608821821710879, 1e-12);
  EXPECT_FALSE(c.reversed);
}

TEST(Certificate, RejectsPlanePath) {
  auto patch = make_patch(unit(LpNorm::inf()), Vec{1, 0}, 0.5, LpNorm::inf());
  EXPECT_THROW(steinhaus_certificate(patch, Path::segment(Vec{1, -0.4}, Vec{1, 0.4}, 9), LinearFunctional(Vec{1, 0}),
                                     Sign::Sum),
               PreconditionError);
}

TEST(Certificate, RejectsNonSupportingFunctional) {
  auto patch = make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.5, LpNorm::l(2.0));
  EXPECT_THROW(steinhaus_certificate(patch, radial_l2(0.4), LinearFunctional(Vec{0, 1}), Sign::Sum),
               PreconditionError);
  EXPECT_THROW(steinhaus_certificate(patch, radial_l2(0.4), LinearFunctional(Vec{2, 0}), Sign::Sum),
               PreconditionError);
}

TEST(Certificate, ScalingByTwoIsExact) {
  auto patch = make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.5, LpNorm::l(2.0));
  const Path path = radial_l2(0.4);
  auto big = make_patch(make_body(ConvexBody::ball(LpNorm::l(2.0), 2.0, Vec{0, 0})), Vec{2, 0}, 1.0, LpNorm::l(2.0));
  std::vector<Vec> pts;
  for (const auto& p : path.points()) pts.push_back(p * 2.0);
  const Path path2(path.times(), pts);
  const LinearFunctional f(Vec{1, 0});
  auto a = steinhaus_certificate(patch, path, f, Sign::Sum);
  auto b = steinhaus_certificate(big, path2, f, Sign::Sum);
  EXPECT_EQ(b.alpha, 2 * a.alpha);
  EXPECT_EQ(b.eta, 2 * a.eta);
  EXPECT_EQ(b.shift, a.shift * 2.0);
  EXPECT_EQ(b.t0, a.t0);
  EXPECT_EQ(b.t1, a.t1);
  EXPECT_EQ(b.n, a.n);
}

TEST(WitnessVerify, PassesAndCatchesTampering) {
  auto patch = make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.5, LpNorm::l(2.0));
  const Path path = radial_l2(0.4);
  auto c = steinhaus_certificate(patch, path, LinearFunctional(Vec{1, 0}), Sign::Sum);
  auto rep = witness_verify(c, patch, path, 200, 1e-9);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.checked, 200);

  auto bad = c;
  bad.eta *= 2;
  rep = witness_verify(bad, patch, path, 200, 1e-9);
  ASSERT_FALSE(rep.pass);
  EXPECT_EQ(rep.failures.front().stage, "ball containment");

  bad = c;
  bad.shift[1] += 1e-3;
  rep = witness_verify(bad, patch, path, 50, 1e-9);
  ASSERT_FALSE(rep.pass);
  EXPECT_EQ(rep.failures.front().stage, "decomposition");

  bad = c;
  bad.t1 = bad.t0;
  rep = witness_verify(bad, patch, path);
  ASSERT_FALSE(rep.pass);
  EXPECT_EQ(rep.failures.front().stage, "certificate fields");
}

TEST(WitnessVerify, CentreDecomposesIntoPatchPoints) {
  auto patch = make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.5, LpNorm::l(2.0));
  const Path path = radial_l2(0.4);
  auto c = steinhaus_certificate(patch, path, LinearFunctional(Vec{1, 0}), Sign::Sum);
  // z = 0 alone: root a on the patch and a point of the path sum to shift.
  auto rep = witness_verify(c, patch, path, 1, 1e-9);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.checked, 1);
  EXPECT_LE(rep.worst_residual, 1e-9);
}

TEST(RadialPath, Examples) {
  const Path arc = radial_path(ConvexBody::unit_ball(LpNorm::l(2.0), 2), Vec{1, 0}, Vec{0, 1});
  for (const auto& p : arc.points()) EXPECT_NEAR(norm2(p), 1.0, 1e-12);
  const Path still = radial_path(ConvexBody::unit_ball(LpNorm::l(2.0), 2), Vec{1, 0}, Vec{1, 0}, 8);
  for (const auto& p : still.points()) EXPECT_EQ(p, (Vec{1, 0}));
  const Path edge = radial_path(ConvexBody::unit_ball(LpNorm::l(1.0), 2), Vec{1, 0}, Vec{0, 1});
  EXPECT_TRUE(is_plane_path(edge, LinearFunctional(Vec{1, 1}), 1e-12));
  EXPECT_FALSE(is_plane_path(edge, LinearFunctional(Vec{1, 0}), 1e-12));
  EXPECT_THROW(radial_path(ConvexBody::unit_ball(LpNorm::l(2.0), 2), Vec{1, 0}, Vec{-1, 0}, 9), PreconditionError);
}

TEST(Decide, Examples) {
  auto d = sphere_patch_decide(make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.3, LpNorm::l(2.0)));
  ASSERT_TRUE(std::holds_alternative<Certified>(d));
  EXPECT_EQ(std::get<Certified>(d).route, "direct");
  EXPECT_TRUE(std::get<Certified>(d).verification.pass);

  d = sphere_patch_decide(make_patch(unit(LpNorm::inf()), Vec{1, 0}, 0.5, LpNorm::inf()));
  ASSERT_TRUE(std::holds_alternative<FlatCase>(d));
  EXPECT_EQ(std::get<FlatCase>(d).support.f.coeffs, (Vec{1, 0}));
  EXPECT_DOUBLE_EQ(std::get<FlatCase>(d).sum_level, 2.0);

  auto ellipse = make_body(ConvexBody::ball(LpNorm::weighted(2.0, {0.25, 1.0}), 1.0, Vec{0, 0}));
  d = sphere_patch_decide(make_patch(ellipse, Vec{2, 0}, 0.3, LpNorm::l(2.0)));
  ASSERT_TRUE(std::holds_alternative<Certified>(d));
  const auto& c = std::get<Certified>(d);
  EXPECT_EQ(c.route, "gauge");
  EXPECT_TRUE(c.verification.pass);
  ASSERT_TRUE(c.renorm.has_value());
  EXPECT_LT(c.boundary_gap, 1e-3);
  // The interior ball of U + U sits near 2 x0.
  EXPECT_LT(norm2(c.shift - Vec{4, 0}), 0.6);
}

TEST(Decide, VertexPatchesCertify) {
  for (auto [norm, x0] : {std::pair{LpNorm::l(1.0), Vec{1, 0}}, std::pair{LpNorm::inf(), Vec{1, 1}}}) {
    auto patch = make_patch(unit(norm), x0, 0.4, norm);
    auto fv = is_flattening_point(patch);
    ASSERT_FALSE(is_flat(fv));
    EXPECT_GT(std::get<NotFlat>(fv).margin, 0.0);
    auto d = sphere_patch_decide(patch);
    ASSERT_TRUE(std::holds_alternative<Certified>(d));
    EXPECT_TRUE(std::get<Certified>(d).verification.pass);
  }
}

TEST(VolkmannWalter, Examples) {
  auto sq = unit(LpNorm::inf());
  auto a = make_patch(sq, Vec{1, 0}, 0.5, LpNorm::inf());
  auto b = make_patch(sq, Vec{0, 1}, 0.5, LpNorm::inf());
  auto c = make_patch(sq, Vec{-1, 0}, 0.5, LpNorm::inf());
  auto d = volkmann_walter_check({a, b});
  ASSERT_TRUE(std::holds_alternative<VWCertified>(d));
  EXPECT_EQ(std::get<VWCertified>(d).which_case, 'b');
  EXPECT_TRUE(std::get<VWCertified>(d).result.verification.pass);
  EXPECT_TRUE(std::holds_alternative<NotApplicable>(volkmann_walter_check({a, c})));

  auto disk = make_patch(unit(LpNorm::l(2.0)), Vec{0, 1}, 0.4, LpNorm::l(2.0));
  d = volkmann_walter_check({disk});
  ASSERT_TRUE(std::holds_alternative<VWCertified>(d));
  EXPECT_EQ(std::get<VWCertified>(d).which_case, 'a');
}

TEST(Properties, SignDuality) {
  Gen gen(123);
  for (int k = 0; k < 20; ++k) {
    const double p = gen.uniform(1.3, 4.0);
    auto body = unit(LpNorm::l(p));
    const double a0 = gen.uniform(0, 2 * std::numbers::pi);
    Vec x0 = boundary_project(*body, Vec{0, 0}, Vec{std::cos(a0), std::sin(a0)});
    auto patch = make_patch(body, x0, gen.uniform(0.2, 0.6), LpNorm::l(p));
    const double a1 = a0 + gen.uniform(0.1, 0.4) * (gen.integer(0, 1) ? 1 : -1);
    const Path path = radial_path(*body, x0, boundary_project(*body, Vec{0, 0}, Vec{std::cos(a1), std::sin(a1)}), 128);
    const LinearFunctional f = support_functionals(*body, x0, LpNorm::l(p)).front().f;
    auto s = steinhaus_certificate(patch, path, f, Sign::Sum);
    auto dcert = steinhaus_certificate(patch, path.negated(), f, Sign::Difference);
    EXPECT_EQ(s.t0, dcert.t0);
    EXPECT_EQ(s.t1, dcert.t1);
    EXPECT_EQ(s.alpha, dcert.alpha);
    EXPECT_EQ(s.eta, dcert.eta);
    EXPECT_EQ(s.shift, dcert.shift);
  }
}

TEST(Properties, Homogeneity) {
  Gen gen(456);
  for (int k = 0; k < 20; ++k) {
    const double p = gen.uniform(1.3, 4.0);
    const double lam = std::ldexp(1.0, gen.integer(-3, 3));
    auto body = unit(LpNorm::l(p));
    auto scaled = make_body(ConvexBody::ball(LpNorm::l(p), lam, Vec{0, 0}));
    const double a0 = gen.uniform(0, 2 * std::numbers::pi);
    Vec x0 = boundary_project(*body, Vec{0, 0}, Vec{std::cos(a0), std::sin(a0)});
    const double a1 = a0 + gen.uniform(0.1, 0.4);
    const Path path = radial_path(*body, x0, boundary_project(*body, Vec{0, 0}, Vec{std::cos(a1), std::sin(a1)}), 64);
    std::vector<Vec> pts;
    for (const auto& q : path.points()) pts.push_back(q * lam);
    const double eps = gen.uniform(0.2, 0.6);
    const LinearFunctional f = support_functionals(*body, x0, LpNorm::l(p)).front().f;
    auto c1 = steinhaus_certificate(make_patch(body, x0, eps, LpNorm::l(p)), path, f, Sign::Sum);
    auto c2 = steinhaus_certificate(make_patch(scaled, x0 * lam, eps * lam, LpNorm::l(p)), Path(path.times(), pts), f,
                                    Sign::Sum);
    EXPECT_EQ(c2.alpha, lam * c1.alpha);
    EXPECT_EQ(c2.eta, lam * c1.eta);
    EXPECT_EQ(c2.shift, c1.shift * lam);
    EXPECT_EQ(c2.t0, c1.t0);
    EXPECT_EQ(c2.t1, c1.t1);
    EXPECT_EQ(c2.n, c1.n);
  }
}

TEST(Properties, MonotoneRefinement) {
  Gen gen(789);
  for (int k = 0; k < 15; ++k) {
    const double p = gen.uniform(1.3, 4.0);
    auto body = unit(LpNorm::l(p));
    const double a0 = gen.uniform(0, 2 * std::numbers::pi);
    Vec x0 = boundary_project(*body, Vec{0, 0}, Vec{std::cos(a0), std::sin(a0)});
    Vec z0 = boundary_project(*body, Vec{0, 0}, Vec{std::cos(a0 + 0.3), std::sin(a0 + 0.3)});
    auto patch = make_patch(body, x0, 0.5, LpNorm::l(p));
    const LinearFunctional f = support_functionals(*body, x0, LpNorm::l(p)).front().f;
    const Path coarse = radial_path(*body, x0, z0, 65);
    const Path fine = radial_path(*body, x0, z0, 129);
    auto c = steinhaus_certificate(patch, coarse, f, Sign::Sum);
    EXPECT_TRUE(witness_verify(c, patch, coarse).pass);
    EXPECT_TRUE(witness_verify(c, patch, fine).pass) << "p = " << p;
  }
}

TEST(Properties, FlatCaseSumsStayOnTheLevel) {
  std::vector<BoundaryPatch> flats{
      make_patch(unit(LpNorm::inf()), Vec{1, 0.3}, 0.4, LpNorm::inf()),
      make_patch(unit(LpNorm::l(1.0)), Vec{0.5, 0.5}, 0.3, LpNorm::l(1.0)),
      make_patch(unit(LpNorm::inf(), 3), Vec{0.2, -1, 0.1}, 0.5, LpNorm::inf()),
  };
  Gen gen(55);
  for (const auto& patch : flats) {
    auto d = sphere_patch_decide(patch);
    ASSERT_TRUE(std::holds_alternative<FlatCase>(d));
    const auto& fc = std::get<FlatCase>(d);
    const auto pts = patch_sample(patch, 256);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const Vec& a = pts[static_cast<std::size_t>(gen.integer(0, static_cast<int>(pts.size()) - 1))];
      const Vec& b = pts[static_cast<std::size_t>(gen.integer(0, static_cast<int>(pts.size()) - 1))];
      worst = std::max(worst, std::abs(fc.support.f(a + b) - fc.sum_level));
    }
    EXPECT_LE(worst, 2e-7);
  }
}

TEST(Properties, CertificatesVerifyAcrossNorms) {
  Gen gen(2024);
  for (int k = 0; k < 12; ++k) {
    const double p = k % 3 == 0 ? 1.5 : (k % 3 == 1 ? 2.0 : 3.0);
    auto body = unit(LpNorm::l(p), k % 4 == 3 ? 3 : 2);
    const int d = body->dim();
    Vec dir = gen.vec(d);
    Vec x0 = boundary_project(*body, Vec::zero(d), dir);
    auto patch = make_patch(body, x0, gen.uniform(0.15, 0.6), LpNorm::l(p));
    auto dec = sphere_patch_decide(patch);
    ASSERT_TRUE(std::holds_alternative<Certified>(dec));
    const auto& c = std::get<Certified>(dec);
    EXPECT_TRUE(witness_verify(c.instance.cert, c.instance.patch, c.instance.path, 200, 1e-9).pass);
  }
}
