// Constructive machinery of the rectangle argument: the rainbow-rectangle
// extractor for S_{3s+1}(a) x B_s(a, b), the segment labeling, the
// auxiliary section coloring, and a finite replay of the reduction from a
// common section label to a monochromatic rectangle.

#ifndef GALLAI_PROOF_H_
#define GALLAI_PROOF_H_

#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gallai/geometry.h"
#include "gallai/search.h"

namespace gallai {

// Raised when a step that the argument guarantees cannot fail does fail.
class InternalContradiction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Witness {
  enum class Kind { kRainbowRectangle, kMonoSegment, kMonoRectangle };

  Kind kind = Kind::kRainbowRectangle;
  std::vector<PointId> points;  // 2 for segments, 4 in RectangleCopy order
  std::vector<Color> colors;

  friend bool operator==(const Witness&, const Witness&) = default;
};

const char* witness_kind_name(Witness::Kind kind);
Witness::Kind witness_kind_from_name(const std::string& name);

// Empty when the witness holds under `colors`: distinct/equal colors as its
// kind requires, segment length `a`, or the a-by-b rectangle pattern.
std::optional<std::string> witness_problem(const Configuration& cfg,
                                           std::span<const Color> colors,
                                           const Witness& witness, double a,
                                           double b,
                                           double eps = kDistanceTolerance);

Witness rectangle_witness(Witness::Kind kind, const RectangleCopy& rect,
                          std::span<const Color> colors);
Witness segment_witness(const SegmentCopy& seg, std::span<const Color> colors);

// S_{3s+1}(a) x B_s(a, b) with point (row k, column i) at id k * (s+1) + i,
// plus its a-segments and a-by-b rectangles.
class LemmaGround {
 public:
  LemmaGround(int s, double a, double b, double eps = kDistanceTolerance);
  // Adopts an existing configuration after checking the row/column layout.
  LemmaGround(Configuration cfg, int s, double a, double b,
              double eps = kDistanceTolerance);

  int s() const { return s_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double eps() const { return eps_; }
  int rows() const { return 3 * s_ + 1; }
  int columns() const { return s_ + 1; }
  PointId id(int row, int column) const { return row * columns() + column; }

  const Configuration& cfg() const { return cfg_; }
  const std::vector<SegmentCopy>& segments() const { return segments_; }
  const std::vector<RectangleCopy>& rectangles() const { return rectangles_; }

 private:
  void check_layout() const;

  int s_;
  double a_;
  double b_;
  double eps_;
  Configuration cfg_;
  std::vector<SegmentCopy> segments_;
  std::vector<RectangleCopy> rectangles_;
};

// A RainbowRectangle witness with sides (a, b), or, when the coloring has a
// monochromatic a-segment, that segment as a MonoSegment witness.
Witness extract_lemma_witness(const LemmaGround& ground,
                              std::span<const Color> colors);

// Random coloring of the ground with r colors and no monochromatic
// a-segment: every column injective, row endpoints differently colored.
// Needs r >= 3s+1.
Coloring sample_avoiding_coloring(const LemmaGround& ground, int r,
                                  std::mt19937_64& rng);

struct Label {
  int value = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
};

class SegmentLabeling {
 public:
  // Labels the a-segments of `ground` in lexicographic order; throws
  // GeometryError when their number differs from the closed form.
  explicit SegmentLabeling(const LemmaGround& ground);

  int size() const { return static_cast<int>(segments_.size()); }
  const SegmentCopy& segment(Label label) const;
  Label label(const SegmentCopy& seg) const;

 private:
  std::vector<SegmentCopy> segments_;
};

// A rainbow x-by-y rectangle of the section, else the least label whose
// segment is monochromatic.
std::variant<Witness, Label> gamma_color(const LemmaGround& section,
                                         const SegmentLabeling& labels,
                                         std::span<const Color> colors);

struct PipelineVerdict {
  enum class Outcome { kRainbowT, kMonoT, kAssumptionUnmet };

  Outcome outcome = Outcome::kAssumptionUnmet;
  std::optional<Witness> witness;  // ids in the world configuration
  std::vector<int> labels;         // gamma label per outer point, when computed
};

const char* outcome_name(PipelineVerdict::Outcome outcome);

// World W = (S_7(y) x B_2(y, x)) x (S_{3m+1}(x) x B_m(x, y)), m = ceil(x/y),
// with (u, w) at id u * |inner| + w.
class ProofReplay {
 public:
  ProofReplay(double x, double y, double eps = kDistanceTolerance);

  double x() const { return x_; }
  double y() const { return y_; }
  int m() const { return inner_.s(); }
  const LemmaGround& outer() const { return outer_; }
  const LemmaGround& inner() const { return inner_; }
  const SegmentLabeling& labeling() const { return labeling_; }
  const Configuration& world() const { return world_; }
  PointId world_id(PointId u, PointId w) const {
    return u * inner_.cfg().size() + w;
  }

  PipelineVerdict run(std::span<const Color> chi) const;

 private:
  double x_;
  double y_;
  double eps_;
  LemmaGround outer_;
  LemmaGround inner_;
  SegmentLabeling labeling_;
  Configuration world_;
};

PipelineVerdict replay_pipeline(double x, double y, std::span<const Color> chi);

}  // namespace gallai

#endif  // GALLAI_PROOF_H_
