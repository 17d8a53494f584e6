#include "gallai/geometry.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>
#include <random>

#include "test_support.h"

namespace gallai {
namespace {

using testing::brute_force_rectangles;

double dist(const Configuration& cfg, PointId i, PointId j) {
  return cfg.distance(i, j);
}

TEST(BuildSimplex, SegmentAndTriangle) {
  const Configuration seg = build_simplex(2, 1.0);
  ASSERT_EQ(seg.size(), 2);
  EXPECT_NEAR(dist(seg, 0, 1), 1.0, 1e-12);

  const Configuration tri = build_simplex(3, 1.0);
  ASSERT_EQ(tri.size(), 3);
  EXPECT_EQ(tri.side_a().pairs.size(), 3u);
  for (const auto& [p, q] : tri.side_a().pairs) EXPECT_NEAR(dist(tri, p, q), 1.0, 1e-12);
  EXPECT_EQ(affine_rank(tri), 2);
}

TEST(BuildSimplex, SevenPointsAtSideEightTenths) {
  const Configuration s7 = build_simplex(7, 0.8);
  EXPECT_EQ(s7.dim(), 7);
  ASSERT_EQ(s7.side_a().pairs.size(), 21u);
  // Scaled basis: |0.8/sqrt2 (e_i - e_j)| = 0.8.
  for (PointId i = 0; i < 7; ++i) {
    for (PointId j = i + 1; j < 7; ++j) {
      EXPECT_NEAR(dist(s7, i, j), 0.8, 1e-9);
    }
  }
  EXPECT_EQ(affine_rank(s7), 6);
}

TEST(BuildSimplex, RejectsBadParameters) {
  EXPECT_THROW(build_simplex(1, 1.0), GeometryError);
  EXPECT_THROW(build_simplex(3, 0.0), GeometryError);
  EXPECT_THROW(build_simplex(3, -1.0), GeometryError);
}

TEST(BuildSimplex, InvariantsOverRange) {
  for (double side : {0.5, 1.0, std::numbers::pi}) {
    for (int n = 2; n <= 20; ++n) {
      const Configuration s = build_simplex(n, side);
      for (PointId i = 0; i < n; ++i) {
        for (PointId j = i + 1; j < n; ++j) {
          EXPECT_LE(std::abs(dist(s, i, j) - side), 1e-9 * side);
        }
      }
      EXPECT_EQ(affine_rank(s), n - 1) << "n=" << n << " side=" << side;
    }
  }
}

TEST(BuildPath, TriangleMatchesAnalyticClosure) {
  const Configuration tri = build_path(2, 1.0, 0.8);
  ASSERT_EQ(tri.size(), 3);
  // (0,0), (0.5, sqrt(0.39)), (1,0): sides 0.8, 0.8, 1.
  const double ref[3][2] = {{0.0, 0.0}, {0.5, std::sqrt(0.39)}, {1.0, 0.0}};
  for (PointId i = 0; i < 3; ++i) {
    for (PointId j = 0; j < 3; ++j) {
      const double want = std::hypot(ref[i][0] - ref[j][0], ref[i][1] - ref[j][1]);
      EXPECT_NEAR(dist(tri, i, j), want, 1e-12);
    }
  }
  EXPECT_EQ(tri.side_a().pairs, (std::vector<PointPair>{{0, 2}}));
  EXPECT_EQ(tri.side_b().pairs, (std::vector<PointPair>{{0, 1}, {1, 2}}));
}

TEST(BuildPath, SwappedRoleTriangle) {
  const Configuration tri = build_path(2, 0.8, 1.0);
  EXPECT_NEAR(dist(tri, 0, 1), 1.0, 1e-12);
  EXPECT_NEAR(dist(tri, 1, 2), 1.0, 1e-12);
  EXPECT_NEAR(dist(tri, 0, 2), 0.8, 1e-12);
}

TEST(BuildPath, BoundaryRatioThree) {
  const Configuration path = build_path(3, 2.9, 1.0);
  ASSERT_EQ(path.size(), 4);
  for (PointId i = 0; i < 3; ++i) EXPECT_NEAR(dist(path, i, i + 1), 1.0, 1e-9);
  EXPECT_NEAR(dist(path, 0, 3), 2.9, 1e-9);
  const double theta = path.provenance().param("theta");
  EXPECT_NEAR(std::sin(3 * theta / 2) / std::sin(theta / 2), 2.9, 1e-11);
  EXPECT_LE(affine_rank(path), 2);
}

TEST(BuildPath, RejectsPreconditionViolations) {
  EXPECT_THROW(build_path(1, 0.5, 1.0), GeometryError);    // t < 2
  EXPECT_THROW(build_path(2, 2.5, 1.0), GeometryError);    // t < ceil(x/y)
  EXPECT_THROW(build_path(2, 2.0, 1.0), GeometryError);    // collinear
  EXPECT_THROW(build_path(2, -1.0, 1.0), GeometryError);
  EXPECT_THROW(build_path(2, 1.0, 0.0), GeometryError);
}

TEST(BuildPath, RejectsAccidentalChords) {
  // Four vertices of a regular pentagon: the chord (0,2) equals the endpoint
  // chord (0,3), both the golden ratio times the edge.
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  try {
    build_path(3, golden, 1.0);
    FAIL() << "expected a general-position error";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("general position"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("theta"), std::string::npos);
  }
}

TEST(BuildPath, InvariantsOverGrid) {
  int built = 0;
  for (int t = 2; t <= 7; ++t) {
    for (double y : {0.35, 1.0, 2.5}) {
      for (double fraction : {0.15, 0.4, 0.55, 0.8, 0.97}) {
        const double x = y * t * fraction;
        const Configuration path = build_path(t, x, y);
        for (PointId i = 0; i < t; ++i) {
          EXPECT_LE(std::abs(dist(path, i, i + 1) - y), 1e-9 * y);
        }
        EXPECT_LE(std::abs(dist(path, 0, t) - x), 1e-9 * x);
        EXPECT_LE(affine_rank(path), 2);
        ++built;
      }
    }
  }
  EXPECT_GE(built, 30);
}

TEST(SolveChordAngle, RootSatisfiesEquation) {
  for (int t = 2; t <= 9; ++t) {
    for (double fraction : {0.01, 0.3, 0.5, 0.77, 0.999}) {
      const double ratio = fraction * t;
      const double theta = solve_chord_angle(t, ratio);
      EXPECT_GT(theta, 0.0);
      EXPECT_LT(theta, 2 * std::numbers::pi / t);
      EXPECT_NEAR(std::sin(t * theta / 2) / std::sin(theta / 2), ratio, 1e-10);
    }
  }
  EXPECT_THROW(solve_chord_angle(3, 3.0), GeometryError);
  EXPECT_THROW(solve_chord_angle(3, 0.0), GeometryError);
  EXPECT_THROW(solve_chord_angle(1, 0.5), GeometryError);
}

TEST(Product, UnitSquare) {
  const Configuration sq = testing::unit_square();
  ASSERT_EQ(sq.size(), 4);
  EXPECT_EQ(sq.dim(), 4);
  EXPECT_EQ(sq.side_a().pairs.size(), 4u);
  int diagonals = 0;
  for (PointId i = 0; i < 4; ++i) {
    for (PointId j = i + 1; j < 4; ++j) {
      if (std::abs(dist(sq, i, j) - std::sqrt(2.0)) < 1e-12) ++diagonals;
    }
  }
  EXPECT_EQ(diagonals, 2);
}

TEST(Product, SimplexTimesTriangle) {
  const Configuration p = testing::s7_b2();
  EXPECT_EQ(p.size(), 21);
  EXPECT_EQ(p.dim(), 9);
  EXPECT_EQ(p.side_a().pairs.size(), 70u);
  EXPECT_EQ(p.side_b().pairs.size(), 14u);
  EXPECT_EQ(p.provenance().kind, Provenance::Kind::kProduct);
  ASSERT_EQ(p.provenance().factors.size(), 2u);
}

TEST(Product, SquaredDistanceAdditivity) {
  const Configuration left = build_simplex(7, 1.0);
  const Configuration right = build_path(2, 1.0, 0.8);
  const Configuration p = product(left, right, 1.0, 0.8);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<PointId> pick(0, p.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const PointId u = pick(rng);
    const PointId v = pick(rng);
    const PointId rows = right.size();
    const double expected = left.squared_distance(u / rows, v / rows) +
                            right.squared_distance(u % rows, v % rows);
    EXPECT_LT(std::abs(p.squared_distance(u, v) - expected), 1e-12);
  }
}

TEST(Product, RederivesDiagonalCoincidences) {
  // With b = a / sqrt(2), side-a pairs include nothing extra, but with
  // a = b * sqrt(2) the product diagonals of two b-segments have length a.
  const double b = 1.0;
  const double a = std::sqrt(2.0);
  const Configuration p = product(build_simplex(2, b), build_simplex(2, b), a, b);
  EXPECT_EQ(p.side_a().pairs.size(), 2u);
  EXPECT_EQ(p.side_b().pairs.size(), 4u);
}

TEST(FindSegments, CountsMatchClosedForm) {
  EXPECT_EQ(find_segments(testing::unit_square(), 1.0).size(), 4u);
  const std::vector<std::pair<int, double>> cases = {{2, 0.8}, {3, 0.35}, {4, 0.28}};
  for (const auto& [s, b] : cases) {
    const Configuration cfg =
        product(build_simplex(3 * s + 1, 1.0), build_path(s, 1.0, b), 1.0, b);
    EXPECT_EQ(static_cast<std::int64_t>(find_segments(cfg, 1.0).size()),
              count_segments_closed_form(s))
        << "s=" << s;
  }
}

TEST(FindSegments, SortedAndDeterministic) {
  const Configuration cfg = testing::s7_b2();
  const auto first = find_segments(cfg, 1.0);
  EXPECT_TRUE(std::is_sorted(first.begin(), first.end()));
  EXPECT_EQ(first, find_segments(cfg, 1.0));
  for (const auto& seg : first) EXPECT_LT(seg.p, seg.q);
}

TEST(FindSegments, HoldsForSeveralSideRatios) {
  for (int s = 2; s <= 4; ++s) {
    for (double b : {0.45, 0.6, 0.9}) {
      if (std::ceil(1.0 / b) > s) continue;
      const Configuration cfg =
          product(build_simplex(3 * s + 1, 1.0), build_path(s, 1.0, b), 1.0, b);
      EXPECT_EQ(static_cast<std::int64_t>(cfg.side_a().pairs.size()),
                count_segments_closed_form(s));
    }
  }
}

TEST(CountSegmentsClosedForm, Values) {
  EXPECT_EQ(count_segments_closed_form(2), 70);
  EXPECT_EQ(count_segments_closed_form(3), 190);
  // 5 * C(13, 2) + 13; enumeration on S_13 x B_4 agrees (see FindSegments).
  EXPECT_EQ(count_segments_closed_form(4), 403);
  EXPECT_THROW(count_segments_closed_form(1), GeometryError);
}

TEST(FindRectangles, UnitSquareHasOne) {
  const auto rects = find_rectangles(testing::unit_square(), 1.0, 1.0);
  ASSERT_EQ(rects.size(), 1u);
  const auto& c = rects[0].corners;
  EXPECT_EQ(c[0], 0);
  EXPECT_LT(c[1], c[2]);
  EXPECT_EQ(c[3], 3);
}

TEST(FindRectangles, SimplexTimesTriangleHasFortyTwo) {
  const Configuration cfg = testing::s7_b2();
  const auto rects = find_rectangles(cfg, 1.0, 0.8);
  EXPECT_EQ(rects.size(), 42u);
  EXPECT_EQ(rects, brute_force_rectangles(cfg, 1.0, 0.8));
  for (const auto& rect : rects) {
    // {x_k, x_j} x {v_i, v_{i+1}}: side-a edge stays in a column.
    const auto& c = rect.corners;
    EXPECT_EQ(c[0] % 3, c[1] % 3);
    EXPECT_EQ(c[0] / 3, c[2] / 3);
    EXPECT_EQ(std::abs(c[0] % 3 - c[2] % 3), 1);
  }
}

TEST(FindRectangles, SimplexHasNone) {
  EXPECT_TRUE(find_rectangles(build_simplex(6, 1.0), 1.0, 1.0).empty());
}

TEST(FindRectangles, AgreesWithBruteForceOnRandomSubsets) {
  std::mt19937_64 rng(11);
  std::vector<std::tuple<Configuration, double, double>> grounds;
  grounds.emplace_back(testing::s7_b2(), 1.0, 0.8);
  grounds.emplace_back(
      product(build_simplex(4, 1.0), build_path(3, 1.0, 0.6), 1.0, 0.6), 1.0, 0.6);
  grounds.emplace_back(
      product(build_path(3, 2.2, 1.0), build_path(2, 1.5, 1.0), 1.0, 1.0), 1.0, 1.0);
  grounds.emplace_back(
      product(build_path(3, 2.2, 1.0), build_path(2, 1.5, 1.0), 1.0, 1.5), 1.0, 1.5);
  for (const auto& [ground, a, b] : grounds) {
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<PointId> ids(ground.size());
      std::iota(ids.begin(), ids.end(), 0);
      std::shuffle(ids.begin(), ids.end(), rng);
      const std::size_t keep =
          std::min<std::size_t>(ids.size(), 8 + trial * 4);
      ids.resize(keep);
      const Configuration sub = restrict_to(ground, ids);
      EXPECT_EQ(find_rectangles(sub, a, b), brute_force_rectangles(sub, a, b))
          << "ground size " << ground.size() << " keep " << keep;
    }
  }
}

TEST(CanonicalRectangle, RejectsNonRectangles) {
  const Configuration cfg = testing::s7_b2();
  EXPECT_FALSE(canonical_rectangle(cfg, {0, 1, 2, 3}, 1.0, 0.8));
  const auto rect = canonical_rectangle(cfg, {7, 8, 1, 2}, 1.0, 0.8);
  ASSERT_TRUE(rect);
  EXPECT_EQ(rect->corners, (std::array<PointId, 4>{1, 7, 2, 8}));
}

TEST(AffineRank, Basics) {
  EXPECT_EQ(affine_rank(build_simplex(4, 1.0)), 3);
  EXPECT_LE(affine_rank(build_path(5, 3.3, 1.0)), 2);
  const Configuration twin(2, {1.0, 2.0, 1.0, 2.0}, {}, {}, {});
  EXPECT_EQ(affine_rank(twin), 0);
  EXPECT_THROW(affine_rank(twin, std::span<const PointId>{}), GeometryError);
}

TEST(Configuration, RejectsMislabeledPairs) {
  EXPECT_THROW(Configuration(1, {0.0, 1.0}, {2.0, {{0, 1}}}, {}, {}), GeometryError);
  EXPECT_THROW(Configuration(1, {0.0, 1.0}, {1.0, {{0, 5}}}, {}, {}), GeometryError);
  EXPECT_THROW(Configuration(2, {0.0, 1.0, 2.0}, {}, {}, {}), GeometryError);
}

}  // namespace
}  // namespace gallai
