#pragma once

// Finite metric and pseudometric spaces on a rational grid: validation,
// shortest-path completion, metric quotient and amalgamation.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/random.hpp"

namespace urysohn {

/// Whether zero off-diagonal distances are permitted.
enum class SpaceKind { metric, pseudometric };

enum class Axiom { nonzero_diagonal, asymmetric, triangle, zero_distance };

inline const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::nonzero_diagonal: return "nonzero diagonal";
    case Axiom::asymmetric: return "symmetry";
    case Axiom::triangle: return "triangle";
    case Axiom::zero_distance: return "distinct points at distance 0";
  }
  return "?";
}

/// One violated axiom. For triangle violations d(i,k) > d(i,j) + d(j,k).
struct Violation {
  Axiom axiom;
  std::size_t i = 0, j = 0, k = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
};

/// Axiom check of a square numerator matrix with entries already known to lie in [0, q].
inline ValidationReport check_axioms(const GridMatrix& dist, SpaceKind kind) {
  ValidationReport report;
  const std::size_t n = dist.size();
  for (std::size_t i = 0; i < n; ++i)
    if (dist(i, i) != 0) report.violations.push_back({Axiom::nonzero_diagonal, i, i, i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist(i, j) != dist(j, i)) report.violations.push_back({Axiom::asymmetric, i, j, j});
      if (kind == SpaceKind::metric && (dist(i, j) == 0 || dist(j, i) == 0))
        report.violations.push_back({Axiom::zero_distance, i, j, j});
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        if (dist(i, k) > dist(i, j) + dist(j, k)) {
          // Report each unordered triangle once.
          if (i < k) report.violations.push_back({Axiom::triangle, i, j, k});
        }
      }
    }
  return report;
}

/// Raw, unvalidated space data as read from a file.
struct SpaceCandidate {
  std::vector<std::string> points;
  Grid denominator = 1;
  std::vector<std::vector<Grid>> dist;
};

/// Throws InputError for a non-positive denominator, out-of-range entries or duplicate names.
inline void check_structure(const std::vector<std::string>& points, Grid q, const GridMatrix& m) {
  if (q <= 0) throw InputError("denominator must be positive");
  if (m.size() != points.size())
    throw InputError("distance matrix is " + std::to_string(m.size()) + "x" + std::to_string(m.size()) +
                     " for " + std::to_string(points.size()) + " points");
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m(i, j) < 0 || m(i, j) > q)
        throw InputError("entry (" + points[i] + "," + points[j] + ")=" + std::to_string(m(i, j)) +
                         " outside [0," + std::to_string(q) + "]");
  std::vector<std::string> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end())
    throw InputError("duplicate point name '" + *it + "'");
}

/// Throws InputError unless the rows form a square matrix matching the point list.
inline GridMatrix candidate_matrix(const SpaceCandidate& c) {
  const std::size_t n = c.points.size();
  if (c.dist.size() != n)
    throw InputError("distance matrix has " + std::to_string(c.dist.size()) + " rows for " +
                     std::to_string(n) + " points");
  GridMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.dist[i].size() != n)
      throw InputError("row '" + c.points[i] + "' has " + std::to_string(c.dist[i].size()) +
                       " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = c.dist[i][j];
  }
  return m;
}

/// Structural problems (shape, range, names) throw InputError; axiom
/// violations are listed in the report.
inline ValidationReport validate_space(const SpaceCandidate& c, SpaceKind kind = SpaceKind::metric) {
  const GridMatrix m = candidate_matrix(c);
  check_structure(c.points, c.denominator, m);
  return check_axioms(m, kind);
}

inline std::vector<std::string> default_point_names(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

/// Named points with an exact distance matrix of numerators over a common
/// denominator q; every distance lies in [0, q] (diameter at most 1).
/// Immutable after construction.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  FiniteMetricSpace(std::vector<std::string> points, Grid denominator, GridMatrix dist,
                    SpaceKind kind = SpaceKind::metric)
      : points_(std::move(points)), q_(denominator), dist_(std::move(dist)), kind_(kind) {
    check_structure(points_, q_, dist_);
    const auto report = check_axioms(dist_, kind_);
    if (!report.valid()) {
      const auto& v = report.violations.front();
      throw InputError(std::string("not a ") +
                       (kind_ == SpaceKind::metric ? "metric" : "pseudometric") + ": " +
                       axiom_name(v.axiom) + " fails at (" + points_[v.i] + "," + points_[v.j] +
                       "," + points_[v.k] + ")");
    }
  }

  static FiniteMetricSpace from_candidate(const SpaceCandidate& c, SpaceKind kind = SpaceKind::metric) {
    return FiniteMetricSpace(c.points, c.denominator, candidate_matrix(c), kind);
  }

  std::size_t size() const noexcept { return points_.size(); }
  Grid denominator() const noexcept { return q_; }
  SpaceKind kind() const noexcept { return kind_; }
  Grid d(std::size_t i, std::size_t j) const { return dist_(i, j); }
  const GridMatrix& distances() const noexcept { return dist_; }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::string& name(std::size_t i) const { return points_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i] == name) return i;
    return std::nullopt;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw InputError("unknown point '" + std::string(name) + "'");
  }

  Grid diameter() const {
    Grid m = 0;
    for (Grid v : dist_.data()) m = std::max(m, v);
    return m;
  }

  /// True when no two distinct points are at distance 0.
  bool separates_points() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (dist_(i, j) == 0) return false;
    return true;
  }

  /// The same space over a finer grid; q must be a multiple of the current denominator.
  FiniteMetricSpace rescaled(Grid q) const {
    if (q == q_) return *this;
    if (q <= 0 || q % q_ != 0)
      throw InputError("cannot move grid 1/" + std::to_string(q_) + " onto grid 1/" + std::to_string(q));
    const Grid f = q / q_;
    GridMatrix m = dist_;
    for (Grid& v : m.data()) v *= f;
    return FiniteMetricSpace(points_, q, std::move(m), kind_);
  }

  FiniteMetricSpace subspace(std::span<const std::size_t> idx) const {
    std::vector<std::string> names;
    GridMatrix m(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      names.push_back(points_.at(idx[a]));
      for (std::size_t b = 0; b < idx.size(); ++b) m(a, b) = dist_(idx[a], idx[b]);
    }
    return FiniteMetricSpace(std::move(names), q_, std::move(m), kind_);
  }

  friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return a.points_ == b.points_ && a.q_ == b.q_ && a.dist_ == b.dist_;
  }

 private:
  std::vector<std::string> points_;
  Grid q_ = 1;
  GridMatrix dist_;
  SpaceKind kind_ = SpaceKind::metric;
};

/// Rescales two spaces onto the least common multiple of their denominators.
inline std::pair<FiniteMetricSpace, FiniteMetricSpace> on_common_grid(const FiniteMetricSpace& x,
                                                                      const FiniteMetricSpace& y) {
  const Grid q = lcm_denominator(x.denominator(), y.denominator());
  return {x.rescaled(q), y.rescaled(q)};
}

/// Distance data in which some off-diagonal entries are left unspecified.
class PartialSpec {
 public:
  PartialSpec(std::vector<std::string> points, Grid denominator)
      : points_(std::move(points)), q_(denominator), entries_(points_.size()) {
    if (q_ <= 0) throw InputError("denominator must be positive");
    for (std::size_t i = 0; i < points_.size(); ++i) entries_(i, i) = Grid{0};
  }

  void set(std::size_t i, std::size_t j, Grid v) {
    if (i >= size() || j >= size()) throw InputError("point index out of range");
    if (v < 0 || v > q_)
      throw InputError("entry (" + points_[i] + "," + points_[j] + ")=" + std::to_string(v) +
                       " outside [0," + std::to_string(q_) + "]");
    if (i == j && v != 0) throw InputError("diagonal entry of '" + points_[i] + "' must be 0");
    entries_(i, j) = v;
    entries_(j, i) = v;
  }

  std::optional<Grid> get(std::size_t i, std::size_t j) const { return entries_(i, j); }
  std::size_t size() const noexcept { return points_.size(); }
  Grid denominator() const noexcept { return q_; }
  const std::vector<std::string>& points() const noexcept { return points_; }

 private:
  std::vector<std::string> points_;
  Grid q_;
  SquareMatrix<std::optional<Grid>> entries_;
};

/// The largest pseudometric below the specified entries: each distance is the
/// minimum chain sum over specified edges, capped at q. Throws InputError
/// naming an unreachable pair when the specification graph is disconnected.
inline FiniteMetricSpace shortest_path_completion(const PartialSpec& spec) {
  const std::size_t n = spec.size();
  const Grid q = spec.denominator();
  constexpr Grid unreachable = std::numeric_limits<Grid>::max() / 4;
  GridMatrix m(n, unreachable);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (auto v = spec.get(i, j)) m(i, j) = *v;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (m(i, k) >= unreachable) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (m(k, j) < unreachable) m(i, j) = std::min(m(i, j), m(i, k) + m(k, j));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) >= unreachable)
        throw InputError("specification is disconnected: no chain joins '" + spec.points()[i] +
                         "' and '" + spec.points()[j] + "'");
      m(i, j) = std::min(m(i, j), q);
    }
  return FiniteMetricSpace(spec.points(), q, std::move(m), SpaceKind::pseudometric);
}

/// Metric space associated with a pseudometric space.
struct Quotient {
  FiniteMetricSpace space;
  std::vector<std::size_t> projection;          // original point -> class
  std::vector<std::vector<std::size_t>> classes;  // class -> original points, ascending
};

/// Identifies points at distance 0. Each class is named after its first member.
inline Quotient quotient_pseudometric(const FiniteMetricSpace& p) {
  const std::size_t n = p.size();
  Quotient out;
  out.projection.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.projection[i] != n) continue;
    const std::size_t c = out.classes.size();
    out.classes.emplace_back();
    for (std::size_t j = i; j < n; ++j)
      if (p.d(i, j) == 0) {
        out.projection[j] = c;
        out.classes.back().push_back(j);
      }
  }
  const std::size_t m = out.classes.size();
  GridMatrix dist(m);
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m; ++a) {
    names.push_back(p.name(out.classes[a].front()));
    for (std::size_t b = 0; b < m; ++b) dist(a, b) = p.d(out.classes[a].front(), out.classes[b].front());
  }
  out.space = FiniteMetricSpace(std::move(names), p.denominator(), std::move(dist), SpaceKind::metric);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (out.space.d(out.projection[i], out.projection[j]) != p.d(i, j))
        throw InputError("input is not a pseudometric: distances do not descend to the quotient");
  return out;
}

struct Amalgam {
  FiniteMetricSpace space;
  std::vector<std::size_t> embed_x;  // point of X -> point of the amalgam
  std::vector<std::size_t> embed_y;  // point of Y -> point of the amalgam
};

/// Amalgam of X and Y over a glued subspace, in the class of spaces of
/// diameter at most 1. glue holds pairs (point of X, point of Y) and must be
/// an isometry between its domain and range. Cross distances are the shortest
/// chains through glued points, capped at q.
inline Amalgam amalgam(const FiniteMetricSpace& x_in, const FiniteMetricSpace& y_in,
                       std::span<const std::pair<std::size_t, std::size_t>> glue) {
  const auto [x, y] = on_common_grid(x_in, y_in);
  const Grid q = x.denominator();
  std::vector<char> x_glued(x.size(), 0);
  std::vector<std::optional<std::size_t>> y_partner(y.size());
  for (const auto& [a, b] : glue) {
    if (a >= x.size() || b >= y.size()) throw InputError("glue refers to an unknown point");
    if (x_glued[a] || y_partner[b]) throw InputError("glue is not injective at '" + x.name(a) + "'");
    x_glued[a] = 1;
    y_partner[b] = a;
  }
  for (const auto& [a1, b1] : glue)
    for (const auto& [a2, b2] : glue)
      if (x.d(a1, a2) != y.d(b1, b2))
        throw InputError("glue is not distance-preserving: d(" + x.name(a1) + "," + x.name(a2) +
                         ") != d(" + y.name(b1) + "," + y.name(b2) + ")");

  Amalgam out;
  std::vector<std::string> names = x.points();
  out.embed_x.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.embed_x[i] = i;
  out.embed_y.resize(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y_partner[j]) {
      out.embed_y[j] = *y_partner[j];
      continue;
    }
    std::string nm = y.name(j);
    while (std::find(names.begin(), names.end(), nm) != names.end()) nm += "'";
    out.embed_y[j] = names.size();
    names.push_back(std::move(nm));
  }

  PartialSpec spec(names, q);
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) spec.set(i, j, q);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) spec.set(out.embed_x[i], out.embed_x[j], x.d(i, j));
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) spec.set(out.embed_y[i], out.embed_y[j], y.d(i, j));
  FiniteMetricSpace completed = shortest_path_completion(spec);
  out.space = FiniteMetricSpace(completed.points(), q, completed.distances(),
                                x.separates_points() && y.separates_points() ? SpaceKind::metric
                                                                            : SpaceKind::pseudometric);
  return out;
}

/// Random metric space on grid q, deterministic per seed.
///
/// Draws a symmetric matrix with off-diagonal entries in [1, q], closes it
/// under shortest paths to enforce the triangle inequality, then redraws every
/// entry uniformly inside its feasible interval given all other entries.
inline FiniteMetricSpace random_grid_space(std::size_t n, Grid q, std::uint64_t seed) {
  if (n < 1) throw InputError("random space needs at least one point");
  if (q < 1) throw InputError("grid denominator must be positive");
  Rng rng(seed);
  auto names = default_point_names(n);
  PartialSpec spec(names, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) spec.set(i, j, rng.uniform(1, q));
  GridMatrix d = shortest_path_completion(spec).distances();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Grid lo = 1, hi = q;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        lo = std::max(lo, std::abs(d(i, k) - d(k, j)));
        hi = std::min(hi, d(i, k) + d(k, j));
      }
      d(i, j) = d(j, i) = rng.uniform(lo, hi);
    }
  return FiniteMetricSpace(std::move(names), q, std::move(d));
}

}  // namespace urysohn
