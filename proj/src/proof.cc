#include "gallai/proof.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gallai {

const char* witness_kind_name(Witness::Kind kind) {
  switch (kind) {
    case Witness::Kind::kRainbowRectangle:
      return "RainbowRectangle";
    case Witness::Kind::kMonoSegment:
      return "MonoSegment";
    case Witness::Kind::kMonoRectangle:
      return "MonoRectangle";
  }
  return "RainbowRectangle";
}

Witness::Kind witness_kind_from_name(const std::string& name) {
  if (name == "RainbowRectangle") return Witness::Kind::kRainbowRectangle;
  if (name == "MonoSegment") return Witness::Kind::kMonoSegment;
  if (name == "MonoRectangle") return Witness::Kind::kMonoRectangle;
  throw LayoutError("unknown witness kind '" + name + "'");
}

const char* outcome_name(PipelineVerdict::Outcome outcome) {
  switch (outcome) {
    case PipelineVerdict::Outcome::kRainbowT:
      return "RainbowT";
    case PipelineVerdict::Outcome::kMonoT:
      return "MonoT";
    case PipelineVerdict::Outcome::kAssumptionUnmet:
      return "AssumptionUnmet";
  }
  return "AssumptionUnmet";
}

std::optional<std::string> witness_problem(const Configuration& cfg,
                                           std::span<const Color> colors,
                                           const Witness& witness, double a,
                                           double b, double eps) {
  const bool segment = witness.kind == Witness::Kind::kMonoSegment;
  const std::size_t expected = segment ? 2 : 4;
  if (witness.points.size() != expected || witness.colors.size() != expected) {
    return "witness has the wrong number of points";
  }
  if (colors.size() != static_cast<std::size_t>(cfg.size())) {
    return "coloring length does not match configuration size";
  }
  for (std::size_t i = 0; i < expected; ++i) {
    const PointId p = witness.points[i];
    if (p < 0 || p >= cfg.size()) return "witness point out of range";
    if (colors[p] != witness.colors[i]) {
      return "witness color at point " + std::to_string(p) +
             " disagrees with the coloring";
    }
  }

  if (segment) {
    if (witness.points[0] == witness.points[1]) return "degenerate segment";
    if (!near_length(cfg.squared_distance(witness.points[0], witness.points[1]),
                     a, eps)) {
      return "segment does not have the designated length";
    }
    if (witness.colors[0] != witness.colors[1]) {
      return "segment is not monochromatic";
    }
    return std::nullopt;
  }

  RectangleCopy rect;
  std::copy(witness.points.begin(), witness.points.end(), rect.corners.begin());
  if (!matches_rectangle(cfg, rect, a, b, eps)) {
    return "points do not form the rectangle pattern";
  }
  std::vector<Color> seen(witness.colors);
  std::sort(seen.begin(), seen.end());
  const auto distinct =
      std::unique(seen.begin(), seen.end()) - seen.begin();
  if (witness.kind == Witness::Kind::kRainbowRectangle && distinct != 4) {
    return "rectangle is not rainbow";
  }
  if (witness.kind == Witness::Kind::kMonoRectangle && distinct != 1) {
    return "rectangle is not monochromatic";
  }
  return std::nullopt;
}

Witness rectangle_witness(Witness::Kind kind, const RectangleCopy& rect,
                          std::span<const Color> colors) {
  Witness w{kind, {}, {}};
  for (PointId p : rect.corners) {
    w.points.push_back(p);
    w.colors.push_back(colors[p]);
  }
  return w;
}

Witness segment_witness(const SegmentCopy& seg, std::span<const Color> colors) {
  return Witness{Witness::Kind::kMonoSegment,
                 {seg.p, seg.q},
                 {colors[seg.p], colors[seg.q]}};
}

LemmaGround::LemmaGround(int s, double a, double b, double eps)
    : LemmaGround(
          [&] {
            if (s < 2 || s < std::ceil(a / b)) {
              throw GeometryError("lemma ground needs s >= max(2, ceil(a/b))");
            }
            return product(build_simplex(3 * s + 1, a), build_path(s, a, b, eps),
                           a, b, eps);
          }(),
          s, a, b, eps) {}

LemmaGround::LemmaGround(Configuration cfg, int s, double a, double b,
                         double eps)
    : s_(s), a_(a), b_(b), eps_(eps), cfg_(std::move(cfg)) {
  if (s_ < 2) throw LayoutError("lemma ground needs s >= 2");
  check_layout();
  segments_ = find_segments(cfg_, a_, eps_, LengthRole::kA);
  rectangles_ = find_rectangles(cfg_, a_, b_, eps_);
}

void LemmaGround::check_layout() const {
  if (cfg_.size() != rows() * columns()) {
    throw LayoutError("configuration has " + std::to_string(cfg_.size()) +
                      " points, expected (3s+1)(s+1) = " +
                      std::to_string(rows() * columns()));
  }
  auto expect = [&](PointId p, PointId q, double length) {
    if (!near_length(cfg_.squared_distance(p, q), length, eps_)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "layout mismatch: pair (" << p << ", " << q << ") has length "
          << cfg_.distance(p, q) << ", expected " << length;
      throw LayoutError(msg.str());
    }
  };
  for (int k = 0; k < rows(); ++k) {
    expect(id(k, 0), id(k, s_), a_);
    for (int i = 0; i < s_; ++i) expect(id(k, i), id(k, i + 1), b_);
    for (int j = k + 1; j < rows(); ++j) {
      for (int i = 0; i < columns(); ++i) expect(id(k, i), id(j, i), a_);
    }
  }
}

Witness extract_lemma_witness(const LemmaGround& ground,
                              std::span<const Color> colors) {
  if (colors.size() != static_cast<std::size_t>(ground.cfg().size())) {
    throw LayoutError("coloring length does not match the lemma ground");
  }
  if (auto mono = has_mono_copy(ground.segments(), colors)) {
    return segment_witness(*mono, colors);
  }
  auto color = [&](int row, int column) { return colors[ground.id(row, column)]; };
  const int s = ground.s();

  // Least color change along each row; the row endpoints differ, so one exists.
  std::vector<int> change(ground.rows(), -1);
  for (int k = 0; k < ground.rows(); ++k) {
    for (int i = 0; i < s; ++i) {
      if (color(k, i) != color(k, i + 1)) {
        change[k] = i;
        break;
      }
    }
    if (change[k] < 0) {
      throw InternalContradiction("row " + std::to_string(k) +
                                  " has no color change");
    }
  }

  // Pigeonhole: 3s+1 rows over s change positions, some position holds 4.
  int column = -1;
  std::vector<int> rows;
  for (int i = 0; i < s && column < 0; ++i) {
    rows.clear();
    for (int k = 0; k < ground.rows() && rows.size() < 4; ++k) {
      if (change[k] == i) rows.push_back(k);
    }
    if (rows.size() == 4) column = i;
  }
  if (column < 0) {
    throw InternalContradiction("no change position is shared by four rows");
  }

  const int first = rows[0];
  const Color left = color(first, column);
  const Color right = color(first, column + 1);
  for (int idx = 1; idx < 4; ++idx) {
    const int k = rows[idx];
    if (color(k, column) == right || color(k, column + 1) == left) continue;
    const auto rect = canonical_rectangle(
        ground.cfg(),
        {ground.id(first, column), ground.id(first, column + 1),
         ground.id(k, column), ground.id(k, column + 1)},
        ground.a(), ground.b(), ground.eps());
    if (!rect || !is_rainbow(*rect, colors)) {
      throw InternalContradiction("extracted quad is not a rainbow rectangle");
    }
    return rectangle_witness(Witness::Kind::kRainbowRectangle, *rect, colors);
  }
  throw InternalContradiction("no row completes a rainbow rectangle");
}

Coloring sample_avoiding_coloring(const LemmaGround& ground, int r,
                                  std::mt19937_64& rng) {
  if (r < ground.rows()) {
    throw LayoutError("an avoiding coloring needs at least 3s+1 colors");
  }
  Coloring coloring{r, std::vector<Color>(ground.cfg().size(), 0)};
  std::vector<Color> palette(r);
  std::iota(palette.begin(), palette.end(), 0);
  auto fill_column = [&](int column) {
    std::shuffle(palette.begin(), palette.end(), rng);
    for (int k = 0; k < ground.rows(); ++k) {
      coloring.colors[ground.id(k, column)] = palette[k];
    }
  };
  for (int i = 0; i < ground.s(); ++i) fill_column(i);
  const int last = ground.s();
  while (true) {
    fill_column(last);
    bool ok = true;
    for (int k = 0; k < ground.rows() && ok; ++k) {
      ok = coloring.colors[ground.id(k, 0)] != coloring.colors[ground.id(k, last)];
    }
    if (ok) return coloring;
  }
}

SegmentLabeling::SegmentLabeling(const LemmaGround& ground)
    : segments_(ground.segments()) {
  const auto expected = count_segments_closed_form(ground.s());
  if (static_cast<std::int64_t>(segments_.size()) != expected) {
    throw GeometryError("found " + std::to_string(segments_.size()) +
                        " segments, closed form gives " +
                        std::to_string(expected) +
                        "; configuration is not in general position");
  }
}

const SegmentCopy& SegmentLabeling::segment(Label label) const {
  if (label.value < 0 || label.value >= size()) {
    throw LayoutError("label " + std::to_string(label.value) + " out of range");
  }
  return segments_[label.value];
}

Label SegmentLabeling::label(const SegmentCopy& seg) const {
  SegmentCopy key = seg;
  if (key.p > key.q) std::swap(key.p, key.q);
  key.role = LengthRole::kA;
  const auto it = std::lower_bound(segments_.begin(), segments_.end(), key);
  if (it == segments_.end() || it->p != key.p || it->q != key.q) {
    throw LayoutError("segment (" + std::to_string(seg.p) + ", " +
                      std::to_string(seg.q) + ") has no label");
  }
  return Label{static_cast<int>(it - segments_.begin())};
}

std::variant<Witness, Label> gamma_color(const LemmaGround& section,
                                         const SegmentLabeling& labels,
                                         std::span<const Color> colors) {
  if (colors.size() != static_cast<std::size_t>(section.cfg().size())) {
    throw LayoutError("section coloring length does not match the section");
  }
  if (auto rect = has_rainbow_copy(section.rectangles(), colors)) {
    return rectangle_witness(Witness::Kind::kRainbowRectangle, *rect, colors);
  }
  if (auto mono = has_mono_copy(section.segments(), colors)) {
    return labels.label(*mono);
  }
  throw InternalContradiction(
      "section has neither a rainbow rectangle nor a monochromatic segment");
}

namespace {

int ceil_ratio(double x, double y) {
  if (!(y > 0.0) || !(x > y)) {
    throw GeometryError("replay needs x > y > 0");
  }
  return static_cast<int>(std::ceil(x / y));
}

}  // namespace

ProofReplay::ProofReplay(double x, double y, double eps)
    : x_(x),
      y_(y),
      eps_(eps),
      outer_(2, y, x, eps),
      inner_(ceil_ratio(x, y), x, y, eps),
      labeling_(inner_),
      world_(product(outer_.cfg(), inner_.cfg(), x, y, eps)) {}

PipelineVerdict ProofReplay::run(std::span<const Color> chi) const {
  if (chi.size() != static_cast<std::size_t>(world_.size())) {
    throw LayoutError("coloring has " + std::to_string(chi.size()) +
                      " entries, world has " + std::to_string(world_.size()) +
                      " points");
  }
  const PointId outer_size = outer_.cfg().size();
  const PointId inner_size = inner_.cfg().size();

  auto finish = [&](PipelineVerdict verdict) {
    if (verdict.witness) {
      if (auto problem = witness_problem(world_, chi, *verdict.witness, x_, y_, eps_)) {
        throw InternalContradiction("replay produced an invalid witness: " +
                                    *problem);
      }
    }
    return verdict;
  };
  auto to_world = [&](Witness::Kind kind, std::array<PointId, 4> points) {
    const auto rect = canonical_rectangle(world_, points, x_, y_, eps_);
    if (!rect) throw InternalContradiction("mapped quad is not an x-by-y rectangle");
    return rectangle_witness(kind, *rect, chi);
  };

  PipelineVerdict verdict;
  for (PointId u = 0; u < outer_size; ++u) {
    const auto section = chi.subspan(static_cast<std::size_t>(u) * inner_size,
                                     inner_size);
    auto gamma = gamma_color(inner_, labeling_, section);
    if (auto* rainbow = std::get_if<Witness>(&gamma)) {
      std::array<PointId, 4> points{};
      for (int i = 0; i < 4; ++i) points[i] = world_id(u, rainbow->points[i]);
      verdict.outcome = PipelineVerdict::Outcome::kRainbowT;
      verdict.witness = to_world(Witness::Kind::kRainbowRectangle, points);
      return finish(std::move(verdict));
    }
    verdict.labels.push_back(std::get<Label>(gamma).value);
  }

  if (std::adjacent_find(verdict.labels.begin(), verdict.labels.end(),
                         std::not_equal_to<>()) != verdict.labels.end()) {
    verdict.outcome = PipelineVerdict::Outcome::kAssumptionUnmet;
    return verdict;
  }

  const SegmentCopy& common = labeling_.segment(Label{verdict.labels.front()});
  const PointId w1 = common.p;
  const PointId w2 = common.q;

  std::vector<PointId> strip;
  for (PointId u = 0; u < outer_size; ++u) {
    strip.push_back(world_id(u, w1));
    strip.push_back(world_id(u, w2));
  }
  const Configuration strip_cfg = restrict_to(world_, strip, eps_);
  std::vector<Color> strip_colors;
  for (PointId id : strip) strip_colors.push_back(chi[id]);
  const auto strip_rects = find_rectangles(strip_cfg, x_, y_, eps_);
  if (auto rect = has_rainbow_copy(strip_rects, strip_colors)) {
    std::array<PointId, 4> points{};
    for (int i = 0; i < 4; ++i) points[i] = strip[rect->corners[i]];
    verdict.outcome = PipelineVerdict::Outcome::kRainbowT;
    verdict.witness = to_world(Witness::Kind::kRainbowRectangle, points);
    return finish(std::move(verdict));
  }

  // Swapped roles: the outer ground is S_7(y) x B_2(y, x), so the lemma runs
  // with side y first; s = 2 covers ceil(y/x) = 1.
  std::vector<Color> column(outer_size);
  for (PointId u = 0; u < outer_size; ++u) column[u] = chi[world_id(u, w1)];
  const Witness lemma = extract_lemma_witness(outer_, column);
  std::array<PointId, 4> points{};
  if (lemma.kind == Witness::Kind::kRainbowRectangle) {
    for (int i = 0; i < 4; ++i) points[i] = world_id(lemma.points[i], w1);
    verdict.outcome = PipelineVerdict::Outcome::kRainbowT;
    verdict.witness = to_world(Witness::Kind::kRainbowRectangle, points);
    return finish(std::move(verdict));
  }

  const PointId u1 = lemma.points[0];
  const PointId u2 = lemma.points[1];
  points = {world_id(u1, w1), world_id(u1, w2), world_id(u2, w1),
            world_id(u2, w2)};
  verdict.outcome = PipelineVerdict::Outcome::kMonoT;
  verdict.witness = to_world(Witness::Kind::kMonoRectangle, points);
  return finish(std::move(verdict));
}

PipelineVerdict replay_pipeline(double x, double y, std::span<const Color> chi) {
  return ProofReplay(x, y).run(chi);
}

}  // namespace gallai
