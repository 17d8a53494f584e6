#include "gallai/search.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.h"

namespace gallai {
namespace {

using testing::brute_force_has_avoiding_coloring;
using testing::id_id_shift_coloring;
using testing::s7_b2;
using testing::unit_square;

SearchOptions exhaustive() {
  SearchOptions options;
  options.engine = Engine::kExhaustive;
  return options;
}

Configuration s4_b2() {
  return product(build_simplex(4, 1.0), build_path(2, 1.0, 0.8), 1.0, 0.8);
}

// Random subsets of S_4 x B_2, kept small enough for plain enumeration.
std::vector<Configuration> random_subconfigurations(int count,
                                                    std::uint64_t seed) {
  const Configuration base = s4_b2();
  std::mt19937_64 rng(seed);
  std::vector<Configuration> out;
  std::vector<PointId> ids(base.size());
  for (PointId i = 0; i < base.size(); ++i) ids[i] = i;
  for (int trial = 0; trial < count; ++trial) {
    std::shuffle(ids.begin(), ids.end(), rng);
    const int k = 5 + static_cast<int>(rng() % 4);
    std::vector<PointId> chosen(ids.begin(), ids.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    out.push_back(restrict_to(base, chosen));
  }
  return out;
}

TEST(Predicates, IdIdShiftHasRainbowButNoMono) {
  const Configuration cfg = s7_b2();
  const auto colors = id_id_shift_coloring();
  EXPECT_FALSE(has_mono_copy(cfg, colors).has_value());
  const auto rect = has_rainbow_copy(cfg, colors, 1.0, 0.8);
  ASSERT_TRUE(rect.has_value());
  EXPECT_EQ(rect->corners, (std::array<PointId, 4>{1, 7, 2, 8}));
  EXPECT_TRUE(is_rainbow(*rect, colors));
}

TEST(Predicates, ConstantColoringIsMonoNotRainbow) {
  const Configuration cfg = s7_b2();
  const std::vector<Color> colors(cfg.size(), 0);
  const auto seg = has_mono_copy(cfg, colors);
  ASSERT_TRUE(seg.has_value());
  EXPECT_EQ(colors[seg->p], colors[seg->q]);
  EXPECT_FALSE(has_rainbow_copy(cfg, colors, 1.0, 0.8).has_value());
}

TEST(Predicates, AvoidsAllMatchesBothPredicates) {
  AvoidanceProblem problem = make_avoidance_problem(unit_square(), 3, 1.0, 1.0);
  EXPECT_EQ(problem.mono_forbidden.size(), 4u);
  ASSERT_EQ(problem.rainbow_forbidden.size(), 1u);
  EXPECT_TRUE(avoids_all(problem, std::vector<Color>{0, 1, 1, 0}));
  EXPECT_FALSE(avoids_all(problem, std::vector<Color>{0, 0, 1, 0}));
  EXPECT_FALSE(avoids_all(problem, std::vector<Color>{0, 1, 2, 3}));
}

TEST(Coloring, CheckRejectsBadEntries) {
  EXPECT_NO_THROW((Coloring{2, {0, 1, 1}}.check(3)));
  EXPECT_THROW((Coloring{2, {0, 1}}.check(3)), SearchError);
  EXPECT_THROW((Coloring{2, {0, 2, 1}}.check(3)), SearchError);
  EXPECT_THROW((Coloring{2, {0, -1, 1}}.check(3)), SearchError);
}

TEST(VerifyGallaiArrow, UnitSquareThreeColors) {
  const auto problem = make_avoidance_problem(unit_square(), 3, 1.0, 1.0);
  for (const SearchOptions& options : {SearchOptions{}, exhaustive()}) {
    const SearchOutcome outcome = verify_gallai_arrow(problem, options);
    ASSERT_EQ(outcome.verdict, Verdict::kCounterexample);
    ASSERT_TRUE(outcome.counterexample.has_value());
    EXPECT_EQ(outcome.counterexample->colors, (std::vector<Color>{0, 1, 1, 0}));
    EXPECT_EQ(outcome.counterexample->r, 3);
  }
}

TEST(VerifyGallaiArrow, UnitSquareOneColorHolds) {
  const auto problem = make_avoidance_problem(unit_square(), 1, 1.0, 1.0);
  const SearchOutcome outcome = verify_gallai_arrow(problem);
  EXPECT_EQ(outcome.verdict, Verdict::kArrowHolds);
  EXPECT_EQ(outcome.infeasible_family, "mono");
}

TEST(VerifyGallaiArrow, SimplexTimesTriangleHoldsForSmallR) {
  for (int r = 4; r <= 8; ++r) {
    const auto problem = make_avoidance_problem(s7_b2(), r, 1.0, 0.8);
    const SearchOutcome outcome = verify_gallai_arrow(problem);
    EXPECT_EQ(outcome.verdict, Verdict::kArrowHolds) << "r = " << r;
    EXPECT_FALSE(outcome.counterexample.has_value());
    EXPECT_EQ(outcome.infeasible_family, r < 7 ? "mono" : "mono+rainbow")
        << "r = " << r;
    EXPECT_GT(outcome.stats.nodes, 0);
  }
}

TEST(VerifyGallaiArrow, ExhaustiveAndBacktrackAgreeOnS4TimesB2) {
  const auto problem = make_avoidance_problem(s4_b2(), 3, 1.0, 0.8);
  const SearchOutcome fast = verify_gallai_arrow(problem);
  const SearchOutcome slow = verify_gallai_arrow(problem, exhaustive());
  EXPECT_EQ(fast.verdict, slow.verdict);
  EXPECT_EQ(fast.verdict, Verdict::kArrowHolds);
}

TEST(VerifyGallaiArrow, SoundAgainstPlainEnumeration) {
  const auto configs = random_subconfigurations(25, 7);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (int r : {2, 3, 4}) {
      const auto problem = make_avoidance_problem(configs[i], r, 1.0, 0.8);
      const bool expected = brute_force_has_avoiding_coloring(
          configs[i].size(), r, problem.mono_forbidden,
          problem.rainbow_forbidden);
      const SearchOutcome outcome = verify_gallai_arrow(problem);
      EXPECT_EQ(outcome.verdict == Verdict::kCounterexample, expected)
          << "subset " << i << ", r = " << r;
      if (outcome.counterexample) {
        EXPECT_TRUE(avoids_all(problem, outcome.counterexample->colors));
      }
    }
  }
}

TEST(VerifyGallaiArrow, SymmetryBreakingAndRainbowRulePreserveVerdict) {
  const auto configs = random_subconfigurations(15, 11);
  for (const Configuration& cfg : configs) {
    for (int r : {2, 3, 4}) {
      const auto problem = make_avoidance_problem(cfg, r, 1.0, 0.8);
      const Verdict base = verify_gallai_arrow(problem).verdict;
      SearchOptions plain;
      plain.break_color_symmetry = false;
      plain.use_rainbow_constraints = false;
      EXPECT_EQ(verify_gallai_arrow(problem, plain).verdict, base);
      EXPECT_EQ(verify_gallai_arrow(problem, exhaustive()).verdict, base);
    }
  }
}

TEST(VerifyGallaiArrow, DeterministicRunsRepeat) {
  const auto problem = make_avoidance_problem(s4_b2(), 4, 1.0, 0.8);
  const SearchOutcome first = verify_gallai_arrow(problem);
  const SearchOutcome second = verify_gallai_arrow(problem);
  EXPECT_EQ(first.verdict, second.verdict);
  EXPECT_EQ(first.counterexample, second.counterexample);
  EXPECT_EQ(first.stats.nodes, second.stats.nodes);
  if (first.counterexample) {
    EXPECT_TRUE(avoids_all(problem, first.counterexample->colors));
  }
}

TEST(VerifyGallaiArrow, ParallelAgreesOnVerdict) {
  SearchOptions parallel;
  parallel.deterministic = false;
  parallel.workers = 4;
  for (int r : {4, 7}) {
    const auto problem = make_avoidance_problem(s7_b2(), r, 1.0, 0.8);
    EXPECT_EQ(verify_gallai_arrow(problem, parallel).verdict,
              Verdict::kArrowHolds);
  }
  const auto square = make_avoidance_problem(unit_square(), 3, 1.0, 1.0);
  const SearchOutcome outcome = verify_gallai_arrow(square, parallel);
  ASSERT_EQ(outcome.verdict, Verdict::kCounterexample);
  EXPECT_TRUE(avoids_all(square, outcome.counterexample->colors));
}

TEST(AssignmentOrder, DescendingDegreeThenId) {
  const auto problem = make_avoidance_problem(s4_b2(), 3, 1.0, 0.8);
  const auto order = assignment_order(problem);
  ASSERT_EQ(order.size(), 12u);
  std::vector<int> degree(12, 0);
  for (const auto& seg : problem.mono_forbidden) {
    ++degree[seg.p];
    ++degree[seg.q];
  }
  for (std::size_t i = 1; i < order.size(); ++i) {
    const PointId p = order[i - 1];
    const PointId q = order[i];
    EXPECT_TRUE(degree[p] > degree[q] || (degree[p] == degree[q] && p < q));
  }
}

TEST(VerifyGallaiArrow, RejectsBadInput) {
  EXPECT_THROW(has_mono_copy(s7_b2(), std::vector<Color>(20, 0)), SearchError);
  EXPECT_THROW(make_avoidance_problem(unit_square(), 0, 1.0, 1.0), SearchError);
  // 8^21 colorings is beyond the exhaustive engine.
  const auto problem = make_avoidance_problem(s7_b2(), 8, 1.0, 0.8);
  EXPECT_THROW(verify_gallai_arrow(problem, exhaustive()), SearchError);
}

}  // namespace
}  // namespace gallai
