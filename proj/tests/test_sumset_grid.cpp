#include <gtest/gtest.h>

#include <cmath>

#include "steinhaus/steinhaus.hpp"
#include "support.hpp"

using namespace steinhaus;
using testing_support::Gen;

namespace {

GridSet block(int dim, double h, int r) {
  GridSet b(dim, h, {-r, -r, -r}, {2 * r + 1, 2 * r + 1, 2 * r + 1});
  for (std::int64_t z = dim > 2 ? -r : 0; z <= (dim > 2 ? r : 0); ++z)
    for (std::int64_t y = dim > 1 ? -r : 0; y <= (dim > 1 ? r : 0); ++y)
      for (std::int64_t x = -r; x <= r; ++x) b.set({x, y, z});
  return b;
}

// a and b agree up to k cells of slack in each direction.
void expect_within_cells(const GridSet& a, const GridSet& b, int k) {
  EXPECT_TRUE(a.subset_of(minkowski_sum(b, block(b.dim(), b.h(), k))));
  EXPECT_TRUE(b.subset_of(minkowski_sum(a, block(a.dim(), a.h(), k))));
}

GridSet random_points(Gen& gen, int dim, double h, int n, double spread) {
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) pts.push_back(gen.vec(dim, -spread, spread));
  return rasterize(PointSetDesc{pts}, h);
}

BodyPtr unit(LpNorm n, int d = 2) { return make_body(ConvexBody::unit_ball(std::move(n), d)); }

}  // namespace

TEST(Rasterize, SegmentIsOneRow) {
  GridSet g = rasterize(PolylineDesc{{Vec{0, 0}, Vec{1, 0}}}, 0.01);
  EXPECT_EQ(g.count(), 101);
  for (const auto& c : g.occupied()) EXPECT_EQ(c[1], 0);
}

TEST(Rasterize, CirclePatchBandIsThin) {
  auto patch = make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.5, LpNorm::l(2.0));
  const double h = 0.01;
  GridSet g = rasterize(PatchDesc{patch}, h);
  // Every cell touches the circle and every patch point lands in a cell.
  for (const auto& c : g.occupied()) EXPECT_LE(std::abs(norm2(g.center(c)) - 1.0), h * std::sqrt(0.5) + 1e-12);
  for (const auto& p : patch_sample(patch, 512)) EXPECT_TRUE(g.test(g.cell_of(p)));
  // At most two cells per column away from the tips.
  std::map<std::int64_t, int> per_row;
  for (const auto& c : g.occupied()) ++per_row[c[1]];
  for (const auto& [y, n] : per_row)
    if (std::abs(static_cast<double>(y) * h) < 0.4) {
      EXPECT_LE(n, 3) << y;
    }
}

TEST(Rasterize, EmptyDescriptor) {
  EXPECT_TRUE(rasterize(PointSetDesc{}, 0.1).empty());
  EXPECT_TRUE(rasterize(PolylineDesc{}, 0.1).empty());
}

TEST(Rasterize, FattenAndBadInputs) {
  GridSet thin = rasterize(PointSetDesc{{Vec{0.02, 0.02}}}, 0.1);
  GridSet fat = rasterize(PointSetDesc{{Vec{0.02, 0.02}}}, 0.1, {0.1, 50'000'000});
  EXPECT_EQ(thin.count(), 1);
  EXPECT_GT(fat.count(), thin.count());
  EXPECT_THROW(rasterize(PointSetDesc{{Vec{0, 0}}}, 0.0), PreconditionError);
  EXPECT_THROW(rasterize(PointSetDesc{{Vec{std::numeric_limits<double>::infinity(), 0}}}, 0.1), PreconditionError);
}

TEST(GridSet, CapacityCap) {
  EXPECT_THROW(GridSet(3, 1.0, {0, 0, 0}, {2048, 2048, 2048}), CapacityError);
  EXPECT_THROW(rasterize(PolylineDesc{{Vec{0, 0, 0}, Vec{1, 1, 1}}}, 1e-4), CapacityError);
}

TEST(MinkowskiSum, SegmentsMakeASquare) {
  const double h = 0.05;
  GridSet a = rasterize(PolylineDesc{{Vec{0, 0}, Vec{1, 0}}}, h);
  GridSet b = rasterize(PolylineDesc{{Vec{0, 0}, Vec{0, 1}}}, h);
  GridSet s = minkowski_sum(a, b);
  EXPECT_EQ(s.count(), 21 * 21);
  EXPECT_EQ(s, rasterize(BodyDesc{make_body(ConvexBody::polytope({{0, 0}, {1, 0}, {1, 1}, {0, 1}}))}, h));
}

TEST(MinkowskiSum, SingleCellTranslates) {
  Gen gen(1);
  GridSet a = random_points(gen, 2, 0.1, 40, 1.0);
  GridSet one(2, 0.1, {3, -2, 0}, {1, 1, 1});
  one.set({3, -2, 0});
  EXPECT_EQ(minkowski_sum(a, one), a.translated({3, -2, 0}));
}

TEST(MinkowskiSum, ClipWindowMatchesFullSum) {
  Gen gen(2);
  GridSet a = random_points(gen, 2, 0.05, 60, 1.0);
  GridSet b = random_points(gen, 2, 0.05, 60, 1.0);
  GridSet full = minkowski_sum(a, b);
  ClipWindow w = window_around(a, Vec{0.1, -0.2}, 6);
  GridSet clipped = minkowski_sum(a, b, w);
  for (const auto& c : full.occupied()) {
    bool inside = true;
    for (int k = 0; k < 2; ++k) inside = inside && c[k] >= w.lo[k] && c[k] <= w.hi[k];
    EXPECT_EQ(clipped.test(c), inside);
  }
  EXPECT_TRUE(clipped.subset_of(full));
}

TEST(MinkowskiSum, CantorStageAgainstExactSum) {
  const double h = std::pow(3.0, -6);
  IntervalUnion c4 = cantor_stage(Rational(1, 3), 4);
  GridSet r = rasterize(IntervalProductDesc{{c4}}, h);
  GridSet sum = minkowski_sum(r, r);
  GridSet exact = rasterize(IntervalProductDesc{{interval_sum(c4, c4)}}, h);
  EXPECT_TRUE(equals_interval(interval_sum(c4, c4), 0, 2));
  expect_within_cells(sum, exact, 2);
  EXPECT_TRUE(exact.subset_of(sum));
}

TEST(IterateSumset, Examples) {
  Gen gen(3);
  GridSet a = random_points(gen, 2, 0.1, 30, 1.0);
  EXPECT_EQ(iterate_sumset(a, 1), a);
  EXPECT_THROW(iterate_sumset(a, 0), PreconditionError);

  const double h = 0.05;
  GridSet disk = rasterize(BodyDesc{make_body(ConvexBody::ball(LpNorm::l(2.0), 0.5, Vec{0, 0}))}, h);
  GridSet twice = rasterize(BodyDesc{make_body(ConvexBody::ball(LpNorm::l(2.0), 1.0, Vec{0, 0}))}, h);
  GridSet doubled = iterate_sumset(disk, 2);
  EXPECT_TRUE(twice.subset_of(minkowski_sum(doubled, block(2, h, 1))));
  expect_within_cells(doubled, twice, 1);
}

TEST(IterateSumset, TriplePolylineAgainstDirectEnumeration) {
  const double h = 0.05;
  GridSet g = rasterize(PolylineDesc{{Vec{0, 0, 0}, Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}}}, h);
  GridSet fast = iterate_sumset(g, 3);
  const auto cells = g.occupied();
  std::set<CellIndex> direct;
  for (const auto& a : cells)
    for (const auto& b : cells)
      for (const auto& c : cells) direct.insert({a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]});
  const auto got = fast.occupied();
  EXPECT_EQ(std::set<CellIndex>(got.begin(), got.end()), direct);
}

TEST(HasInterior, Examples) {
  auto square = make_body(ConvexBody::polytope({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  auto v = has_interior([&](double h) { return rasterize(BodyDesc{square}, h); }, 3, {0.04, 0.02});
  EXPECT_EQ(v.kind, InteriorKind::Interior);
  ASSERT_EQ(v.blocks.size(), 2u);
  EXPECT_LE(norm2(v.blocks[1].center - v.blocks[0].center) + v.blocks[1].radius, v.blocks[0].radius + 1e-12);

  v = has_interior([](double h) { return rasterize(PolylineDesc{{Vec{0, 0}, Vec{1, 0.3}}}, h); }, 3, {0.02, 0.01});
  EXPECT_EQ(v.kind, InteriorKind::Empty);

  EXPECT_THROW(has_interior([&](double h) { return rasterize(BodyDesc{square}, h); }, 3, {0.04, 0.03}),
               PreconditionError);
  EXPECT_THROW(has_interior([&](double h) { return rasterize(BodyDesc{square}, h); }, 1, {0.04, 0.02}),
               PreconditionError);
}

TEST(HasInterior, DiagonalFacetThroughCellCorners) {
  auto diamond = make_body(ConvexBody::unit_ball(LpNorm::l(1.0), 2));
  auto patch = make_patch(diamond, Vec{0.5, 0.5}, 0.3, LpNorm::l(1.0));
  auto build = [&](double h) {
    GridSet u = rasterize(PatchDesc{patch}, h);
    return minkowski_sum(u, u);
  };
  // x + y = 1 meets cell corners when 1/h is an integer: three occupied
  // diagonals per facet, so U + U is not thin at two cells.
  EXPECT_EQ(has_interior(build, 3, {0.02, 0.01}).kind, InteriorKind::Inconclusive);
  EXPECT_EQ(has_interior(build, 3, {0.03, 0.015}).kind, InteriorKind::Empty);
}

TEST(HasInterior, CertificateShiftIsInsideTheWitnessBlock) {
  auto patch = make_patch(unit(LpNorm::l(2.0)), Vec{1, 0}, 0.3, LpNorm::l(2.0));
  auto d = sphere_patch_decide(patch);
  ASSERT_TRUE(std::holds_alternative<Certified>(d));
  const auto& c = std::get<Certified>(d);
  auto build = [&](double h) {
    GridSet u = rasterize(PatchDesc{patch}, h);
    return minkowski_sum(u, u, window_around(u, c.shift, 12));
  };
  auto v = has_interior(build, 3, {c.eta_ambient / 4, c.eta_ambient / 8}, c.shift);
  ASSERT_EQ(v.kind, InteriorKind::Interior);
  for (const auto& b : v.blocks) EXPECT_LE(norm2(b.center - c.shift), b.radius);
}

TEST(Measure, Examples) {
  auto square = make_body(ConvexBody::polytope({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  EXPECT_NEAR(occupied_measure(rasterize(BodyDesc{square}, 0.01)), 1.0, 0.03);
  EXPECT_EQ(occupied_measure(rasterize(PointSetDesc{}, 0.01)), 0.0);
  const double h = std::pow(3.0, -8);
  IntervalUnion c6 = cantor_stage(Rational(1, 3), 6);
  const double exact = static_cast<double>(measure(c6));
  EXPECT_DOUBLE_EQ(exact, std::pow(2.0 / 3.0, 6));
  EXPECT_NEAR(occupied_measure(rasterize(IntervalProductDesc{{c6}}, h)), exact, 2 * h * 64);
}

TEST(Export, PgmAndRunLengths) {
  GridSet g(2, 1.0, {0, 0, 0}, {3, 2, 1});
  g.set({0, 0, 0});
  g.set({2, 1, 0});
  EXPECT_EQ(to_pgm(g), "P2\n3 2\n1\n1 1 0\n0 1 1\n");
  EXPECT_EQ(run_lengths(g), (std::vector<std::int64_t>{0, 1, 4, 1}));
  GridSet blank(2, 1.0, {0, 0, 0}, {2, 2, 1});
  EXPECT_EQ(run_lengths(blank), (std::vector<std::int64_t>{4}));
}

TEST(Properties, CommutativityAndTranslation) {
  Gen gen(10);
  for (int k = 0; k < 50; ++k) {
    const int dim = gen.integer(1, 3);
    GridSet a = random_points(gen, dim, 0.1, gen.integer(1, 40), 1.0);
    GridSet b = random_points(gen, dim, 0.1, gen.integer(1, 40), 1.0);
    EXPECT_EQ(minkowski_sum(a, b), minkowski_sum(b, a));
    CellIndex v{gen.integer(-20, 20), gen.integer(-20, 20), gen.integer(-20, 20)};
    CellIndex w{gen.integer(-20, 20), gen.integer(-20, 20), gen.integer(-20, 20)};
    for (int i = dim; i < 3; ++i) v[static_cast<std::size_t>(i)] = 0, w[static_cast<std::size_t>(i)] = 0;
    CellIndex vw{v[0] + w[0], v[1] + w[1], v[2] + w[2]};
    EXPECT_EQ(minkowski_sum(a.translated(v), b.translated(w)), minkowski_sum(a, b).translated(vw));
  }
}

TEST(Properties, Monotonicity) {
  Gen gen(11);
  for (int k = 0; k < 30; ++k) {
    std::vector<Vec> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(gen.vec(2));
    std::vector<Vec> more = pts;
    for (int i = 0; i < 10; ++i) more.push_back(gen.vec(2));
    GridSet a = rasterize(PointSetDesc{pts}, 0.1), big = rasterize(PointSetDesc{more}, 0.1);
    ASSERT_TRUE(a.subset_of(big));
    const int n = gen.integer(1, 4);
    EXPECT_TRUE(iterate_sumset(a, n).subset_of(iterate_sumset(big, n)));
  }
}

TEST(Properties, ExactEngineConsistency) {
  Gen gen(12);
  for (int k = 0; k < 30; ++k) {
    std::vector<Interval> a, b;
    for (int i = 0; i < gen.integer(1, 5); ++i) {
      Rational lo(gen.integer(0, 60), 64);
      a.push_back({lo, lo + Rational(gen.integer(0, 8), 64)});
    }
    for (int i = 0; i < gen.integer(1, 5); ++i) {
      Rational lo(gen.integer(0, 60), 64);
      b.push_back({lo, lo + Rational(gen.integer(0, 8), 64)});
    }
    IntervalUnion A = IntervalUnion::normalized(a), B = IntervalUnion::normalized(b);
    const double h = 1.0 / 128;
    GridSet ra = rasterize(IntervalProductDesc{{A}}, h), rb = rasterize(IntervalProductDesc{{B}}, h);
    expect_within_cells(minkowski_sum(ra, rb), rasterize(IntervalProductDesc{{interval_sum(A, B)}}, h), 2);
  }
}

TEST(Properties, NoContradictoryVerdicts) {
  Gen gen(13);
  for (int k = 0; k < 20; ++k) {
    std::vector<Vec> pts;
    for (int i = 0; i < gen.integer(2, 5); ++i) pts.push_back(gen.vec(2));
    auto build = [&](double h) { return iterate_sumset(rasterize(PolylineDesc{pts}, h), 2); };
    auto coarse = has_interior(build, 3, {0.08, 0.04});
    auto fine = has_interior(build, 3, {0.04, 0.02});
    const bool clash = (coarse.kind == InteriorKind::Interior && fine.kind == InteriorKind::Empty) ||
                       (coarse.kind == InteriorKind::Empty && fine.kind == InteriorKind::Interior);
    EXPECT_FALSE(clash) << k;
  }
}
