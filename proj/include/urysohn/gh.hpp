#pragma once

// Gromov-Hausdorff distance between enumerated finite spaces x_1..x_n and
// y_1..y_n: the least r such that some pseudometric on the disjoint union
// extends both metrics and puts every x_i within r of y_i. Values live on the
// half grid with denominator 2q.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/metric_space.hpp"

namespace urysohn {

/// A value t / (2q) on the half grid.
struct HalfGrid {
  Grid num = 0;
  Grid q = 1;

  /// Printed over q when the numerator is even, over 2q otherwise.
  Fraction fraction() const { return num % 2 == 0 ? Fraction{num / 2, q} : Fraction{num, 2 * q}; }
  std::string str() const { return fraction().str(); }

  friend bool operator==(const HalfGrid&, const HalfGrid&) = default;
};

struct EnumeratedInstance {
  FiniteMetricSpace x;
  FiniteMetricSpace y;

  /// Brings both spaces onto a common grid; the point counts must agree.
  EnumeratedInstance(const FiniteMetricSpace& x_in, const FiniteMetricSpace& y_in) {
    if (x_in.size() != y_in.size())
      throw InputError("enumerated spaces differ in size: " + std::to_string(x_in.size()) + " and " +
                       std::to_string(y_in.size()) + " points");
    std::tie(x, y) = on_common_grid(x_in, y_in);
  }

  std::size_t size() const noexcept { return x.size(); }
  Grid denominator() const noexcept { return x.denominator(); }
};

/// eps / 2 with eps = max |d_X(x_i, x_j) - d_Y(y_i, y_j)|; as a half-grid
/// numerator this is eps itself.
inline HalfGrid gh_en_formula(const EnumeratedInstance& inst) {
  Grid eps = 0;
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (std::size_t j = i + 1; j < inst.size(); ++j)
      eps = std::max(eps, std::abs(inst.x.d(i, j) - inst.y.d(i, j)));
  return {eps, inst.denominator()};
}

/// A distance of X or Y shortened by the shortest-path closure.
struct Contraction {
  bool in_x = true;
  std::size_t i = 0, j = 0;
  Grid original = 0;   // over 2q
  Grid contracted = 0; // over 2q
};

struct GhOracleResult {
  HalfGrid value;
  /// Why value.num - 1 fails; absent when the value is 0.
  std::optional<Contraction> below;
};

namespace detail {

/// Closes the union graph with all cross edges (x_i, y_i) equal to t, on the
/// 2q grid with cap 2q, and reports the first intra-block distance it shortens.
inline std::optional<Contraction> gh_contraction_at(const EnumeratedInstance& inst, Grid t) {
  const std::size_t n = inst.size();
  const Grid cap = 2 * inst.denominator();
  const Grid none = std::numeric_limits<Grid>::max() / 4;
  GridMatrix m(2 * n, none);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = 2 * inst.x.d(i, j);
      m(n + i, n + j) = 2 * inst.y.d(i, j);
    }
  for (std::size_t i = 0; i < n; ++i) m(i, n + i) = m(n + i, i) = t;
  for (std::size_t k = 0; k < 2 * n; ++k)
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) m(i, j) = std::min(m(i, j), m(i, k) + m(k, j));
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) m(i, j) = std::min(m(i, j), cap);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m(i, j) != 2 * inst.x.d(i, j)) return Contraction{true, i, j, 2 * inst.x.d(i, j), m(i, j)};
      if (m(n + i, n + j) != 2 * inst.y.d(i, j)) return Contraction{false, i, j, 2 * inst.y.d(i, j), m(n + i, n + j)};
    }
  return std::nullopt;
}

}  // namespace detail

/// Least t on the half grid at which the closure with every cross edge
/// (x_i, y_i) equal to t preserves both metrics, found by scanning t upward.
inline GhOracleResult gh_en_oracle(const EnumeratedInstance& inst) {
  const Grid top = 2 * inst.denominator();
  std::optional<Contraction> last;
  for (Grid t = 0; t <= top; ++t) {
    auto c = detail::gh_contraction_at(inst, t);
    if (!c) return {{t, inst.denominator()}, last};
    last = c;
  }
  throw InvariantBreach("no feasible cross distance up to 1");
}

/// Points c_1..c_n of s with d(c_i, c_j) = target(i, j) and d(a_i, c_i) <= eps,
/// found by backtracking; none when s has no such points. target must be on
/// the grid of s and eps is a numerator over the same grid. Requires
/// |d(a_i, a_j) - target(i, j)| <= 2 eps.
inline std::optional<std::vector<std::size_t>> realize_in_space(const FiniteMetricSpace& s,
                                                                const std::vector<std::size_t>& anchors,
                                                                const FiniteMetricSpace& target, Grid eps) {
  const std::size_t n = anchors.size();
  if (target.size() != n)
    throw InputError("target has " + std::to_string(target.size()) + " points for " + std::to_string(n) + " anchors");
  if (target.denominator() != s.denominator()) throw InputError("target and space use different grids");
  if (eps < 0) throw InputError("eps must be non-negative");
  for (std::size_t a : anchors)
    if (a >= s.size()) throw InputError("anchor refers to an unknown point");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(s.d(anchors[i], anchors[j]) - target.d(i, j)) > 2 * eps)
        throw InputError("anchor distance d(" + s.name(anchors[i]) + "," + s.name(anchors[j]) +
                         ") differs from the target by more than 2 eps");
  std::vector<std::size_t> c;
  auto rec = [&](auto&& self) -> bool {
    const std::size_t i = c.size();
    if (i == n) return true;
    for (std::size_t p = 0; p < s.size(); ++p) {
      if (s.d(anchors[i], p) > eps) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = s.d(c[j], p) == target.d(j, i);
      if (!ok) continue;
      c.push_back(p);
      if (self(self)) return true;
      c.pop_back();
    }
    return false;
  };
  if (rec(rec)) return c;
  return std::nullopt;
}

}  // namespace urysohn
