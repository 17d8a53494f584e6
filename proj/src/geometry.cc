#include "gallai/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace gallai {

double Provenance::param(const std::string& name) const {
  for (const auto& [key, value] : params) {
    if (key == name) return value;
  }
  throw GeometryError("provenance has no parameter '" + name + "'");
}

bool Provenance::has_param(const std::string& name) const {
  return std::any_of(params.begin(), params.end(),
                     [&](const auto& kv) { return kv.first == name; });
}

const char* kind_name(Provenance::Kind kind) {
  switch (kind) {
    case Provenance::Kind::kSimplex:
      return "simplex";
    case Provenance::Kind::kPath:
      return "path";
    case Provenance::Kind::kProduct:
      return "product";
    case Provenance::Kind::kExplicit:
      return "explicit";
  }
  return "explicit";
}

Provenance::Kind kind_from_name(const std::string& name) {
  if (name == "simplex") return Provenance::Kind::kSimplex;
  if (name == "path") return Provenance::Kind::kPath;
  if (name == "product") return Provenance::Kind::kProduct;
  if (name == "explicit") return Provenance::Kind::kExplicit;
  throw GeometryError("unknown provenance kind '" + name + "'");
}

bool near_length(double squared_distance, double length, double eps) {
  return std::abs(std::sqrt(squared_distance) - length) <= eps * length;
}

namespace {

void normalize_pairs(DesignatedPairs& side, PointId size) {
  for (PointPair& pair : side.pairs) {
    if (pair.p > pair.q) std::swap(pair.p, pair.q);
    if (pair.p < 0 || pair.q >= size || pair.p == pair.q) {
      std::ostringstream msg;
      msg << "designated pair (" << pair.p << ", " << pair.q
          << ") is not a pair of distinct points in [0, " << size << ")";
      throw GeometryError(msg.str());
    }
  }
  std::sort(side.pairs.begin(), side.pairs.end());
  side.pairs.erase(std::unique(side.pairs.begin(), side.pairs.end()),
                   side.pairs.end());
}

void check_pairs(const Configuration& cfg, const DesignatedPairs& side,
                 const char* name, double eps) {
  for (const PointPair& pair : side.pairs) {
    const double d2 = cfg.squared_distance(pair.p, pair.q);
    if (!near_length(d2, side.length, eps)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << name << " pair (" << pair.p << ", " << pair.q << ") has length "
          << std::sqrt(d2) << ", expected " << side.length;
      throw GeometryError(msg.str());
    }
  }
}

// All pairs i < j whose distance is within eps of `length`.
std::vector<PointPair> scan_pairs(const Configuration& cfg, double length,
                                  double eps) {
  std::vector<PointPair> pairs;
  if (length <= 0.0) return pairs;
  for (PointId i = 0; i < cfg.size(); ++i) {
    for (PointId j = i + 1; j < cfg.size(); ++j) {
      if (near_length(cfg.squared_distance(i, j), length, eps)) {
        pairs.push_back({i, j});
      }
    }
  }
  return pairs;
}

}  // namespace

Configuration::Configuration(int dim, std::vector<double> coords,
                             DesignatedPairs side_a, DesignatedPairs side_b,
                             Provenance provenance, double eps)
    : dim_(dim),
      size_(0),
      coords_(std::move(coords)),
      side_a_(std::move(side_a)),
      side_b_(std::move(side_b)),
      provenance_(std::move(provenance)) {
  if (dim_ <= 0) throw GeometryError("dimension must be positive");
  if (coords_.size() % static_cast<std::size_t>(dim_) != 0) {
    throw GeometryError("coordinate count is not a multiple of dim");
  }
  size_ = static_cast<PointId>(coords_.size() / dim_);
  for (double c : coords_) {
    if (!std::isfinite(c)) throw GeometryError("non-finite coordinate");
  }
  normalize_pairs(side_a_, size_);
  normalize_pairs(side_b_, size_);
  check_pairs(*this, side_a_, "side_a", eps);
  check_pairs(*this, side_b_, "side_b", eps);
}

std::span<const double> Configuration::point(PointId id) const {
  return std::span<const double>(coords_).subspan(
      static_cast<std::size_t>(id) * dim_, dim_);
}

double Configuration::squared_distance(PointId i, PointId j) const {
  const auto u = point(i);
  const auto v = point(j);
  double sum = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double d = u[k] - v[k];
    sum += d * d;
  }
  return sum;
}

double Configuration::distance(PointId i, PointId j) const {
  return std::sqrt(squared_distance(i, j));
}

Configuration build_simplex(int n, double side) {
  if (n < 2) throw GeometryError("simplex needs n >= 2");
  if (!(side > 0.0)) throw GeometryError("simplex side must be positive");
  std::vector<double> coords(static_cast<std::size_t>(n) * n, 0.0);
  const double scale = side / std::numbers::sqrt2;
  for (int i = 0; i < n; ++i) coords[static_cast<std::size_t>(i) * n + i] = scale;

  DesignatedPairs side_a{side, {}};
  for (PointId i = 0; i < n; ++i) {
    for (PointId j = i + 1; j < n; ++j) side_a.pairs.push_back({i, j});
  }
  Provenance prov{Provenance::Kind::kSimplex,
                  {{"n", static_cast<double>(n)}, {"side", side}},
                  {}};
  return Configuration(n, std::move(coords), std::move(side_a),
                       DesignatedPairs{}, std::move(prov));
}

double solve_chord_angle(int t, double ratio) {
  if (t < 2) throw GeometryError("chord angle needs t >= 2");
  if (!(ratio > 0.0) || !(ratio < t)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no chord angle: ratio " << ratio << " outside (0, " << t << ")";
    throw GeometryError(msg.str());
  }
  // sin(t*theta/2)/sin(theta/2) falls from t to 0 on (0, 2*pi/t).
  double lo = 0.0;
  double hi = 2.0 * std::numbers::pi / t;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double value = std::sin(t * mid / 2.0) / std::sin(mid / 2.0);
    if (value > ratio) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Configuration build_path(int t, double endpoint, double edge, double eps) {
  if (!(endpoint > 0.0) || !(edge > 0.0)) {
    throw GeometryError("path lengths must be positive");
  }
  const double ratio = endpoint / edge;
  if (t < 2 || t < std::ceil(ratio)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "path needs t >= max(2, ceil(" << endpoint << "/" << edge
        << ")), got t = " << t;
    throw GeometryError(msg.str());
  }
  if (std::abs(ratio - t) <= eps * t) {
    throw GeometryError("path is degenerate: endpoint equals t * edge");
  }
  const double theta = solve_chord_angle(t, ratio);
  const double radius = edge / (2.0 * std::sin(theta / 2.0));

  // v_0 at the origin, v_t at (endpoint, 0), arc bulging towards +y.
  const double start = std::numbers::pi / 2.0 + t * theta / 2.0;
  const double x0 = radius * std::cos(start);
  const double y0 = radius * std::sin(start);
  std::vector<double> coords;
  coords.reserve(2 * (t + 1));
  for (int i = 0; i <= t; ++i) {
    const double angle = start - i * theta;
    coords.push_back(radius * std::cos(angle) - x0);
    coords.push_back(radius * std::sin(angle) - y0);
  }

  DesignatedPairs side_a{endpoint, {{0, t}}};
  DesignatedPairs side_b{edge, {}};
  for (PointId i = 0; i < t; ++i) side_b.pairs.push_back({i, i + 1});
  Provenance prov{Provenance::Kind::kPath,
                  {{"t", static_cast<double>(t)},
                   {"endpoint", endpoint},
                   {"edge", edge},
                   {"theta", theta}},
                  {}};
  Configuration cfg(2, std::move(coords), std::move(side_a), std::move(side_b),
                    std::move(prov), eps);

  for (PointId i = 0; i <= t; ++i) {
    for (PointId j = i + 2; j <= t; ++j) {
      if (i == 0 && j == t) continue;
      const double d2 = cfg.squared_distance(i, j);
      if (near_length(d2, endpoint, eps) || near_length(d2, edge, eps)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "path not in general position: pair (" << i << ", " << j
            << ") has length " << std::sqrt(d2) << " (theta = " << theta << ")";
        throw GeometryError(msg.str());
      }
    }
  }
  return cfg;
}

Configuration product(const Configuration& left, const Configuration& right,
                      double a, double b, double eps) {
  const int dim = left.dim() + right.dim();
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(left.size()) * right.size() * dim);
  for (PointId i = 0; i < left.size(); ++i) {
    for (PointId j = 0; j < right.size(); ++j) {
      const auto u = left.point(i);
      const auto v = right.point(j);
      coords.insert(coords.end(), u.begin(), u.end());
      coords.insert(coords.end(), v.begin(), v.end());
    }
  }
  Provenance prov{Provenance::Kind::kProduct,
                  {{"a", a},
                   {"b", b},
                   {"left_size", static_cast<double>(left.size())},
                   {"right_size", static_cast<double>(right.size())}},
                  {left.provenance(), right.provenance()}};
  // Scan on a provisional configuration, then attach the designated pairs.
  Configuration bare(dim, coords, {a, {}}, {b, {}}, prov, eps);
  DesignatedPairs side_a{a, scan_pairs(bare, a, eps)};
  DesignatedPairs side_b{b, scan_pairs(bare, b, eps)};
  return Configuration(dim, std::move(coords), std::move(side_a),
                       std::move(side_b), std::move(prov), eps);
}

Configuration restrict_to(const Configuration& cfg, std::span<const PointId> ids,
                          double eps) {
  std::vector<double> coords;
  coords.reserve(ids.size() * cfg.dim());
  for (PointId id : ids) {
    if (id < 0 || id >= cfg.size()) throw GeometryError("point id out of range");
    const auto p = cfg.point(id);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  const double a = cfg.side_a().length;
  const double b = cfg.side_b().length;
  Configuration bare(cfg.dim(), coords, {a, {}}, {b, {}}, {}, eps);
  DesignatedPairs side_a{a, scan_pairs(bare, a, eps)};
  DesignatedPairs side_b{b, scan_pairs(bare, b, eps)};
  return Configuration(cfg.dim(), std::move(coords), std::move(side_a),
                       std::move(side_b), Provenance{}, eps);
}

std::vector<SegmentCopy> find_segments(const Configuration& cfg, double length,
                                       double eps, LengthRole role) {
  std::vector<SegmentCopy> out;
  for (const PointPair& pair : scan_pairs(cfg, length, eps)) {
    out.push_back({pair.p, pair.q, role});
  }
  return out;
}

bool matches_rectangle(const Configuration& cfg, const RectangleCopy& rect,
                       double a, double b, double eps) {
  const auto& c = rect.corners;
  for (int i = 0; i < 4; ++i) {
    if (c[i] < 0 || c[i] >= cfg.size()) return false;
    for (int j = i + 1; j < 4; ++j) {
      if (c[i] == c[j]) return false;
    }
  }
  const double diagonal = std::sqrt(a * a + b * b);
  return near_length(cfg.squared_distance(c[0], c[1]), a, eps) &&
         near_length(cfg.squared_distance(c[2], c[3]), a, eps) &&
         near_length(cfg.squared_distance(c[0], c[2]), b, eps) &&
         near_length(cfg.squared_distance(c[1], c[3]), b, eps) &&
         near_length(cfg.squared_distance(c[0], c[3]), diagonal, eps) &&
         near_length(cfg.squared_distance(c[1], c[2]), diagonal, eps);
}

std::optional<RectangleCopy> canonical_rectangle(const Configuration& cfg,
                                                 std::array<PointId, 4> points,
                                                 double a, double b,
                                                 double eps) {
  std::sort(points.begin(), points.end());
  std::optional<RectangleCopy> best;
  do {
    const RectangleCopy candidate{points};
    if (matches_rectangle(cfg, candidate, a, b, eps) &&
        (!best || candidate < *best)) {
      best = candidate;
    }
  } while (std::next_permutation(points.begin(), points.end()));
  return best;
}

std::vector<RectangleCopy> find_rectangles(const Configuration& cfg, double a,
                                           double b, double eps) {
  if (!(a > 0.0) || !(b > 0.0)) return {};
  const double diagonal = std::sqrt(a * a + b * b);
  std::vector<std::vector<PointId>> b_neighbors(cfg.size());
  for (const PointPair& pair : scan_pairs(cfg, b, eps)) {
    b_neighbors[pair.p].push_back(pair.q);
    b_neighbors[pair.q].push_back(pair.p);
  }

  std::set<RectangleCopy> found;
  for (const PointPair& side : scan_pairs(cfg, a, eps)) {
    const PointId p = side.p;
    const PointId q = side.q;
    for (PointId r : b_neighbors[p]) {
      if (r == q) continue;
      if (!near_length(cfg.squared_distance(q, r), diagonal, eps)) continue;
      for (PointId s : b_neighbors[q]) {
        if (s == p || s == r) continue;
        if (!near_length(cfg.squared_distance(r, s), a, eps)) continue;
        if (!near_length(cfg.squared_distance(p, s), diagonal, eps)) continue;
        if (auto rect = canonical_rectangle(cfg, {p, q, r, s}, a, b, eps)) {
          found.insert(*rect);
        }
      }
    }
  }
  return {found.begin(), found.end()};
}

std::int64_t count_segments_closed_form(int s) {
  if (s < 2) throw GeometryError("closed-form segment count needs s >= 2");
  const std::int64_t rows = 3 * static_cast<std::int64_t>(s) + 1;
  return (s + 1) * (rows * (rows - 1) / 2) + rows;
}

int affine_rank(const Configuration& cfg, std::span<const PointId> subset,
                double eps) {
  if (subset.empty()) throw GeometryError("affine rank of an empty subset");
  if (subset.size() == 1) return 0;
  Eigen::MatrixXd diffs(static_cast<Eigen::Index>(subset.size() - 1), cfg.dim());
  const auto origin = cfg.point(subset[0]);
  for (std::size_t r = 1; r < subset.size(); ++r) {
    const auto p = cfg.point(subset[r]);
    for (int c = 0; c < cfg.dim(); ++c) {
      diffs(static_cast<Eigen::Index>(r - 1), c) = p[c] - origin[c];
    }
  }
  const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(diffs).singularValues();
  const double largest = sigma.size() > 0 ? sigma.maxCoeff() : 0.0;
  if (largest == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > eps * largest) ++rank;
  }
  return rank;
}

int affine_rank(const Configuration& cfg, double eps) {
  std::vector<PointId> all(cfg.size());
  for (PointId i = 0; i < cfg.size(); ++i) all[i] = i;
  return affine_rank(cfg, all, eps);
}

}  // namespace gallai
