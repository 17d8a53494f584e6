// Point configurations used by the rectangle Gallai-Ramsey workbench:
// regular simplices S_n(x), planar paths B_t(x, y), Cartesian products,
// and enumeration of congruent segments and rectangles inside them.

#ifndef GALLAI_GEOMETRY_H_
#define GALLAI_GEOMETRY_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gallai {

using PointId = std::int32_t;

// Relative tolerance on distances: |d - L| <= eps * L.
inline constexpr double kDistanceTolerance = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builder descriptor. Parameters are kept in insertion order so that
// serialized provenance is reproducible.
struct Provenance {
  enum class Kind { kSimplex, kPath, kProduct, kExplicit };

  Kind kind = Kind::kExplicit;
  std::vector<std::pair<std::string, double>> params;
  std::vector<Provenance> factors;  // product only: {left, right}

  double param(const std::string& name) const;
  bool has_param(const std::string& name) const;
};

const char* kind_name(Provenance::Kind kind);
Provenance::Kind kind_from_name(const std::string& name);

struct PointPair {
  PointId p = 0;
  PointId q = 0;

  friend auto operator<=>(const PointPair&, const PointPair&) = default;
};

struct DesignatedPairs {
  double length = 0.0;
  std::vector<PointPair> pairs;  // p < q, sorted
};

// Immutable finite point set with designated side-a / side-b pairs.
class Configuration {
 public:
  // Validates that every designated pair lies within `eps` of its length,
  // normalizes pair orientation and sorts the pair lists.
  Configuration(int dim, std::vector<double> coords, DesignatedPairs side_a,
                DesignatedPairs side_b, Provenance provenance,
                double eps = kDistanceTolerance);

  int dim() const { return dim_; }
  PointId size() const { return size_; }
  std::span<const double> point(PointId id) const;
  std::span<const double> coordinates() const { return coords_; }
  double squared_distance(PointId i, PointId j) const;
  double distance(PointId i, PointId j) const;

  const DesignatedPairs& side_a() const { return side_a_; }
  const DesignatedPairs& side_b() const { return side_b_; }
  const Provenance& provenance() const { return provenance_; }

 private:
  int dim_;
  PointId size_;
  std::vector<double> coords_;
  DesignatedPairs side_a_;
  DesignatedPairs side_b_;
  Provenance provenance_;
};

enum class LengthRole { kA, kB };

struct SegmentCopy {
  PointId p = 0;
  PointId q = 0;
  LengthRole role = LengthRole::kA;

  friend auto operator<=>(const SegmentCopy&, const SegmentCopy&) = default;
};

// corners[0]-corners[1] and corners[2]-corners[3] are the side-a edges,
// corners[0]-corners[2] and corners[1]-corners[3] the side-b edges.
struct RectangleCopy {
  std::array<PointId, 4> corners{};

  friend auto operator<=>(const RectangleCopy&, const RectangleCopy&) = default;
};

bool near_length(double squared_distance, double length, double eps);

// S_n(side): side/sqrt(2) times the standard basis of R^n.
Configuration build_simplex(int n, double side);

// Solves sin(t*theta/2) / sin(theta/2) = ratio on (0, 2*pi/t) by bisection.
// Throws GeometryError when ratio is outside (0, t).
double solve_chord_angle(int t, double ratio);

// B_t(endpoint, edge): t+1 coplanar points on a circular arc with
// consecutive distance `edge` and first/last distance `endpoint`.
// Side-a pairs hold the endpoint pair, side-b pairs the t path edges.
Configuration build_path(int t, double endpoint, double edge,
                         double eps = kDistanceTolerance);

// Row-major Cartesian product; designated pairs are re-derived by scanning
// all pairs against lengths a and b.
Configuration product(const Configuration& left, const Configuration& right,
                      double a, double b, double eps = kDistanceTolerance);

// Explicit sub-configuration on `ids` (renumbered 0..k-1 in the given order),
// designated pairs re-derived at the parent's side lengths.
Configuration restrict_to(const Configuration& cfg, std::span<const PointId> ids,
                          double eps = kDistanceTolerance);

std::vector<SegmentCopy> find_segments(const Configuration& cfg, double length,
                                       double eps = kDistanceTolerance,
                                       LengthRole role = LengthRole::kA);

// Canonical corner order of four points realizing the a-by-b rectangle in
// some vertex order: corners[0] is the least id and, for squares,
// corners[1] < corners[2]. nullopt when no order matches.
std::optional<RectangleCopy> canonical_rectangle(
    const Configuration& cfg, std::array<PointId, 4> points, double a,
    double b, double eps = kDistanceTolerance);

bool matches_rectangle(const Configuration& cfg, const RectangleCopy& rect,
                       double a, double b, double eps = kDistanceTolerance);

std::vector<RectangleCopy> find_rectangles(const Configuration& cfg, double a,
                                           double b,
                                           double eps = kDistanceTolerance);

// (s+1) * C(3s+1, 2) + (3s+1).
std::int64_t count_segments_closed_form(int s);

int affine_rank(const Configuration& cfg, std::span<const PointId> subset,
                double eps = kDistanceTolerance);
int affine_rank(const Configuration& cfg, double eps = kDistanceTolerance);

}  // namespace gallai

#endif  // GALLAI_GEOMETRY_H_
