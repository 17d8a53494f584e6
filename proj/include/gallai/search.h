// Colorings of finite configurations and the decision procedures for
// Y ->r (l_a; T)_GR: a propagating backtracking search and an exhaustive
// enumerator used as the oracle on tiny instances.

#ifndef GALLAI_SEARCH_H_
#define GALLAI_SEARCH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gallai/geometry.h"

namespace gallai {

using Color = int;

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Coloring {
  int r = 0;
  std::vector<Color> colors;

  // Throws SearchError unless the coloring has `num_points` entries in [0, r).
  void check(PointId num_points) const;

  friend bool operator==(const Coloring&, const Coloring&) = default;
};

struct AvoidanceProblem {
  Configuration cfg;
  int r = 0;
  double a = 0.0;
  double b = 0.0;
  std::vector<SegmentCopy> mono_forbidden;      // every copy of l_a
  std::vector<RectangleCopy> rainbow_forbidden;  // every a-by-b rectangle
};

AvoidanceProblem make_avoidance_problem(Configuration cfg, int r, double a,
                                        double b,
                                        double eps = kDistanceTolerance);

// First designated side-a pair of `cfg` whose endpoints share a color.
std::optional<SegmentCopy> has_mono_copy(const Configuration& cfg,
                                         std::span<const Color> colors);
std::optional<SegmentCopy> has_mono_copy(std::span<const SegmentCopy> segments,
                                         std::span<const Color> colors);

// First a-by-b rectangle (in canonical lexicographic order) with 4 colors.
std::optional<RectangleCopy> has_rainbow_copy(const Configuration& cfg,
                                              std::span<const Color> colors,
                                              double a, double b,
                                              double eps = kDistanceTolerance);
std::optional<RectangleCopy> has_rainbow_copy(
    std::span<const RectangleCopy> rectangles, std::span<const Color> colors);

bool is_rainbow(const RectangleCopy& rect, std::span<const Color> colors);

// True when the coloring violates no constraint of the problem.
bool avoids_all(const AvoidanceProblem& problem, std::span<const Color> colors);

enum class Engine { kBacktrack, kExhaustive };
enum class Verdict { kArrowHolds, kCounterexample };

const char* engine_name(Engine engine);
const char* verdict_name(Verdict verdict);

struct SearchOptions {
  Engine engine = Engine::kBacktrack;
  // Single-threaded, least counterexample under the assignment order.
  bool deterministic = true;
  int workers = 1;
  // Backtracking only; disabling is meant for diagnostics and tests.
  bool use_rainbow_constraints = true;
  bool break_color_symmetry = true;
};

// Upper bound on r^N accepted by the exhaustive engine.
inline constexpr double kExhaustiveLimit = 1e8;

struct SearchStats {
  std::int64_t nodes = 0;
  int max_depth = 0;
  std::int64_t mono_prunes = 0;
  std::int64_t rainbow_prunes = 0;
  double wall_seconds = 0.0;
};

struct SearchOutcome {
  Verdict verdict = Verdict::kArrowHolds;
  std::optional<Coloring> counterexample;
  SearchStats stats;
  // Filled for ArrowHolds from the backtracking engine: "mono" when the
  // monochromatic-segment constraints alone admit no coloring, otherwise
  // "mono+rainbow".
  std::string infeasible_family;
};

// Static assignment order: descending side-a degree, ties by PointId.
std::vector<PointId> assignment_order(const AvoidanceProblem& problem);

SearchOutcome verify_gallai_arrow(const AvoidanceProblem& problem,
                                  const SearchOptions& options = {});

}  // namespace gallai

#endif  // GALLAI_SEARCH_H_
