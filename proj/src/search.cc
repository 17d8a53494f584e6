#include "gallai/search.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

namespace gallai {

void Coloring::check(PointId num_points) const {
  if (r <= 0) throw SearchError("coloring needs r >= 1");
  if (colors.size() != static_cast<std::size_t>(num_points)) {
    throw SearchError("coloring has " + std::to_string(colors.size()) +
                      " entries, configuration has " +
                      std::to_string(num_points) + " points");
  }
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (colors[i] < 0 || colors[i] >= r) {
      throw SearchError("color " + std::to_string(colors[i]) + " at point " +
                        std::to_string(i) + " is outside [0, " +
                        std::to_string(r) + ")");
    }
  }
}

AvoidanceProblem make_avoidance_problem(Configuration cfg, int r, double a,
                                        double b, double eps) {
  if (r < 1) throw SearchError("color count must be positive");
  auto segments = find_segments(cfg, a, eps, LengthRole::kA);
  auto rectangles = find_rectangles(cfg, a, b, eps);
  return AvoidanceProblem{std::move(cfg), r, a, b, std::move(segments),
                          std::move(rectangles)};
}

std::optional<SegmentCopy> has_mono_copy(std::span<const SegmentCopy> segments,
                                         std::span<const Color> colors) {
  for (const SegmentCopy& seg : segments) {
    if (colors[seg.p] == colors[seg.q]) return seg;
  }
  return std::nullopt;
}

std::optional<SegmentCopy> has_mono_copy(const Configuration& cfg,
                                         std::span<const Color> colors) {
  if (colors.size() != static_cast<std::size_t>(cfg.size())) {
    throw SearchError("coloring length does not match configuration size");
  }
  for (const PointPair& pair : cfg.side_a().pairs) {
    if (colors[pair.p] == colors[pair.q]) {
      return SegmentCopy{pair.p, pair.q, LengthRole::kA};
    }
  }
  return std::nullopt;
}

bool is_rainbow(const RectangleCopy& rect, std::span<const Color> colors) {
  const auto& c = rect.corners;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (colors[c[i]] == colors[c[j]]) return false;
    }
  }
  return true;
}

std::optional<RectangleCopy> has_rainbow_copy(
    std::span<const RectangleCopy> rectangles, std::span<const Color> colors) {
  for (const RectangleCopy& rect : rectangles) {
    if (is_rainbow(rect, colors)) return rect;
  }
  return std::nullopt;
}

std::optional<RectangleCopy> has_rainbow_copy(const Configuration& cfg,
                                              std::span<const Color> colors,
                                              double a, double b, double eps) {
  if (colors.size() != static_cast<std::size_t>(cfg.size())) {
    throw SearchError("coloring length does not match configuration size");
  }
  const auto rectangles = find_rectangles(cfg, a, b, eps);
  return has_rainbow_copy(rectangles, colors);
}

bool avoids_all(const AvoidanceProblem& problem,
                std::span<const Color> colors) {
  return !has_mono_copy(problem.mono_forbidden, colors) &&
         !has_rainbow_copy(problem.rainbow_forbidden, colors);
}

const char* engine_name(Engine engine) {
  return engine == Engine::kBacktrack ? "backtrack" : "exhaustive";
}

const char* verdict_name(Verdict verdict) {
  return verdict == Verdict::kArrowHolds ? "ArrowHolds" : "Counterexample";
}

std::vector<PointId> assignment_order(const AvoidanceProblem& problem) {
  const PointId n = problem.cfg.size();
  std::vector<int> degree(n, 0);
  for (const SegmentCopy& seg : problem.mono_forbidden) {
    ++degree[seg.p];
    ++degree[seg.q];
  }
  std::vector<PointId> order(n);
  for (PointId i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](PointId x, PointId y) {
    return degree[x] > degree[y];
  });
  return order;
}

namespace {

using Mask = std::uint64_t;
constexpr int kMaxColors = 64;

Mask full_mask(int r) { return r >= 64 ? ~Mask{0} : (Mask{1} << r) - 1; }

// Forward-checking search over domains stored as bit masks.
class Backtracker {
 public:
  Backtracker(const AvoidanceProblem& problem, const SearchOptions& options,
              const std::atomic<bool>* stop)
      : n_(problem.cfg.size()),
        r_(problem.r),
        symmetry_(options.break_color_symmetry),
        stop_(stop),
        mono_adj_(n_),
        point_quads_(n_),
        order_(assignment_order(problem)) {
    for (const SegmentCopy& seg : problem.mono_forbidden) {
      mono_adj_[seg.p].push_back(seg.q);
      mono_adj_[seg.q].push_back(seg.p);
    }
    if (options.use_rainbow_constraints) {
      for (const RectangleCopy& rect : problem.rainbow_forbidden) {
        const int index = static_cast<int>(quads_.size());
        quads_.push_back(rect.corners);
        for (PointId p : rect.corners) point_quads_[p].push_back(index);
      }
    }
    reset();
  }

  void reset() {
    color_.assign(n_, -1);
    domain_.assign(n_, full_mask(r_));
    trail_.clear();
    max_used_ = -1;
  }

  // Applies a prefix of the assignment order; false when inconsistent.
  bool apply_prefix(std::span<const Color> prefix) {
    reset();
    for (std::size_t depth = 0; depth < prefix.size(); ++depth) {
      const PointId p = order_[depth];
      const Color c = prefix[depth];
      if (!(domain_[p] >> c & 1)) return false;
      max_used_ = std::max(max_used_, c);
      if (!assign(p, c)) return false;
    }
    return true;
  }

  // Depth-first search from `depth`. When `prefix_depth` is set, consistent
  // partial assignments of that length are collected instead of extended.
  bool search(int depth, int prefix_depth = -1) {
    stats_.max_depth = std::max(stats_.max_depth, depth);
    if (depth == n_) {
      solution_ = color_;
      return true;
    }
    if (depth == prefix_depth) {
      prefixes_.emplace_back();
      for (int k = 0; k < depth; ++k) prefixes_.back().push_back(color_[order_[k]]);
      return false;
    }
    if (stop_ != nullptr && stop_->load(std::memory_order_relaxed)) return false;

    const PointId p = order_[depth];
    Mask allowed = domain_[p];
    if (symmetry_) allowed &= full_mask(std::min(max_used_ + 2, r_));
    for (Color c = 0; c < r_ && allowed != 0; ++c) {
      if (!(allowed >> c & 1)) continue;
      allowed &= ~(Mask{1} << c);
      ++stats_.nodes;
      const std::size_t mark = trail_.size();
      const int saved_max = max_used_;
      max_used_ = std::max(max_used_, c);
      if (assign(p, c) && search(depth + 1, prefix_depth)) return true;
      undo(mark);
      color_[p] = -1;
      max_used_ = saved_max;
    }
    return false;
  }

  const std::vector<Color>& solution() const { return solution_; }
  const SearchStats& stats() const { return stats_; }
  std::vector<std::vector<Color>>& prefixes() { return prefixes_; }
  PointId size() const { return n_; }

 private:
  void restrict_domain(PointId p, Mask mask) {
    trail_.push_back({p, domain_[p]});
    domain_[p] = mask;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      domain_[trail_.back().first] = trail_.back().second;
      trail_.pop_back();
    }
  }

  bool assign(PointId p, Color c) {
    color_[p] = c;
    const Mask bit = Mask{1} << c;
    for (PointId q : mono_adj_[p]) {
      if (color_[q] == c) {
        ++stats_.mono_prunes;
        return false;
      }
      if (color_[q] < 0 && (domain_[q] & bit)) {
        restrict_domain(q, domain_[q] & ~bit);
        if (domain_[q] == 0) {
          ++stats_.mono_prunes;
          return false;
        }
      }
    }
    for (int index : point_quads_[p]) {
      const auto& corners = quads_[index];
      Mask used = 0;
      int assigned = 0;
      PointId open = -1;
      for (PointId v : corners) {
        if (color_[v] >= 0) {
          used |= Mask{1} << color_[v];
          ++assigned;
        } else {
          open = v;
        }
      }
      const int distinct = std::popcount(used);
      if (assigned == 4 && distinct == 4) {
        ++stats_.rainbow_prunes;
        return false;
      }
      if (assigned == 3 && distinct == 3) {
        const Mask narrowed = domain_[open] & used;
        if (narrowed != domain_[open]) {
          restrict_domain(open, narrowed);
          if (narrowed == 0) {
            ++stats_.rainbow_prunes;
            return false;
          }
        }
      }
    }
    return true;
  }

  PointId n_;
  int r_;
  bool symmetry_;
  const std::atomic<bool>* stop_;
  std::vector<std::vector<PointId>> mono_adj_;
  std::vector<std::array<PointId, 4>> quads_;
  std::vector<std::vector<int>> point_quads_;
  std::vector<PointId> order_;

  std::vector<Color> color_;
  std::vector<Mask> domain_;
  std::vector<std::pair<PointId, Mask>> trail_;
  int max_used_ = -1;

  std::vector<Color> solution_;
  std::vector<std::vector<Color>> prefixes_;
  SearchStats stats_;
};

void accumulate(SearchStats& total, const SearchStats& part) {
  total.nodes += part.nodes;
  total.max_depth = std::max(total.max_depth, part.max_depth);
  total.mono_prunes += part.mono_prunes;
  total.rainbow_prunes += part.rainbow_prunes;
}

SearchOutcome run_backtrack_serial(const AvoidanceProblem& problem,
                                   const SearchOptions& options) {
  Backtracker search(problem, options, nullptr);
  SearchOutcome outcome;
  if (search.search(0)) {
    outcome.verdict = Verdict::kCounterexample;
    outcome.counterexample = Coloring{problem.r, search.solution()};
  }
  outcome.stats = search.stats();
  return outcome;
}

SearchOutcome run_backtrack_parallel(const AvoidanceProblem& problem,
                                     const SearchOptions& options) {
  SearchOutcome outcome;
  Backtracker splitter(problem, options, nullptr);
  const std::size_t wanted = 8 * static_cast<std::size_t>(options.workers);
  int split_depth = 1;
  for (; split_depth <= splitter.size(); ++split_depth) {
    splitter.prefixes().clear();
    splitter.reset();
    splitter.search(0, split_depth);
    if (splitter.prefixes().size() >= wanted) break;
  }
  if (split_depth > splitter.size()) return run_backtrack_serial(problem, options);
  accumulate(outcome.stats, splitter.stats());

  const auto& prefixes = splitter.prefixes();
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex guard;
  std::vector<std::thread> threads;
  for (int w = 0; w < options.workers; ++w) {
    threads.emplace_back([&] {
      Backtracker worker(problem, options, &stop);
      while (!stop.load()) {
        const std::size_t index = next.fetch_add(1);
        if (index >= prefixes.size()) break;
        if (!worker.apply_prefix(prefixes[index])) continue;
        if (worker.search(split_depth)) {
          std::lock_guard lock(guard);
          if (!outcome.counterexample) {
            outcome.verdict = Verdict::kCounterexample;
            outcome.counterexample = Coloring{problem.r, worker.solution()};
          }
          stop.store(true);
        }
      }
      std::lock_guard lock(guard);
      accumulate(outcome.stats, worker.stats());
    });
  }
  for (auto& t : threads) t.join();
  return outcome;
}

SearchOutcome run_exhaustive(const AvoidanceProblem& problem) {
  const PointId n = problem.cfg.size();
  if (std::pow(static_cast<double>(problem.r), n) > kExhaustiveLimit) {
    throw SearchError("exhaustive engine limited to r^N <= 1e8");
  }
  SearchOutcome outcome;
  std::vector<Color> colors(n, 0);
  while (true) {
    ++outcome.stats.nodes;
    if (avoids_all(problem, colors)) {
      outcome.verdict = Verdict::kCounterexample;
      outcome.counterexample = Coloring{problem.r, colors};
      break;
    }
    PointId k = n - 1;
    while (k >= 0 && colors[k] == problem.r - 1) colors[k--] = 0;
    if (k < 0) break;
    ++colors[k];
  }
  outcome.stats.max_depth = n;
  return outcome;
}

}  // namespace

SearchOutcome verify_gallai_arrow(const AvoidanceProblem& problem,
                                  const SearchOptions& options) {
  if (problem.r < 1 || problem.r > kMaxColors) {
    throw SearchError("color count must lie in [1, 64]");
  }
  const auto start = std::chrono::steady_clock::now();
  SearchOutcome outcome;
  if (options.engine == Engine::kExhaustive) {
    outcome = run_exhaustive(problem);
  } else if (options.deterministic || options.workers <= 1) {
    outcome = run_backtrack_serial(problem, options);
  } else {
    outcome = run_backtrack_parallel(problem, options);
  }

  if (outcome.verdict == Verdict::kArrowHolds &&
      options.engine == Engine::kBacktrack) {
    if (options.use_rainbow_constraints) {
      SearchOptions mono_only = options;
      mono_only.use_rainbow_constraints = false;
      mono_only.deterministic = true;
      const bool mono_alone_infeasible =
          run_backtrack_serial(problem, mono_only).verdict ==
          Verdict::kArrowHolds;
      outcome.infeasible_family = mono_alone_infeasible ? "mono" : "mono+rainbow";
    } else {
      outcome.infeasible_family = "mono";
    }
  }
  outcome.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return outcome;
}

}  // namespace gallai
