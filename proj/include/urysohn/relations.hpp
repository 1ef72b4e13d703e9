#pragma once

// Relations on the finite carrier K of non-expanding grid functions
// M -> {0..q}, and their correspondence with bi-Katetov matrices:
//   H(R)(x, y)  = max over (p, r) in R of |r(x) - p(y)|
//   H^-1(f)     = {(p, r) : |r(x) - p(y)| <= f(x, y) for all x, y}
// Isometries g act on K by (g f)(x) = f(g^-1 x) and embed as the graphs
// j(g) = {(f, g f)}. Relations compose as R o S = {(a, c) : (a, b) in S, (b, c) in R}.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/homog.hpp"
#include "urysohn/isometry.hpp"
#include "urysohn/metric_space.hpp"
#include "urysohn/theta.hpp"

namespace urysohn {

inline constexpr std::size_t default_carrier_bound = 20000;

/// All non-expanding functions M -> {0..q}, in lexicographic order of values.
class GridFunctionSpace {
 public:
  explicit GridFunctionSpace(FiniteMetricSpace m, std::size_t bound = default_carrier_bound) : m_(std::move(m)) {
    const std::size_t n = m_.size();
    const Grid q = m_.denominator();
    std::vector<Grid> f(n, 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == n) {
        if (members_.size() == bound)
          throw GuardRefusal("carrier enumeration refused: more than " + std::to_string(bound) + " functions");
        index_.emplace(f, members_.size());
        members_.push_back(f);
        return;
      }
      for (Grid v = 0; v <= q; ++v) {
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j) ok = std::abs(v - f[j]) <= m_.d(i, j);
        if (!ok) continue;
        f[i] = v;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }

  const FiniteMetricSpace& space() const noexcept { return m_; }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<Grid>& member(std::size_t i) const { return members_.at(i); }
  const std::vector<std::vector<Grid>>& members() const noexcept { return members_; }

  std::optional<std::size_t> find(const std::vector<Grid>& f) const {
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    return std::nullopt;
  }

  std::size_t index_of(const std::vector<Grid>& f) const {
    if (auto i = find(f)) return *i;
    throw InputError("function is not a non-expanding grid function on the base space");
  }

 private:
  FiniteMetricSpace m_;
  std::vector<std::vector<Grid>> members_;
  std::map<std::vector<Grid>, std::size_t> index_;
};

inline GridFunctionSpace enumerate_K(const FiniteMetricSpace& m, std::size_t bound = default_carrier_bound) {
  return GridFunctionSpace(m, bound);
}

/// (g f)(x) = f(g^-1 x).
inline std::vector<Grid> act(const FiniteMetricSpace& m, const Permutation& g, const std::vector<Grid>& f) {
  require_isometry(m, g);
  if (f.size() != m.size()) throw InputError("function has the wrong number of values");
  const Permutation gi = inverse(g);
  std::vector<Grid> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[gi[x]];
  return out;
}

/// j(g) = {(f, g f) : f in K}.
inline BoolMatrix j_embed(const GridFunctionSpace& k, const Permutation& g) {
  BoolMatrix r(k.size(), 0);
  for (std::size_t i = 0; i < k.size(); ++i) r(i, k.index_of(act(k.space(), g, k.member(i)))) = 1;
  return r;
}

/// H(R)(x, y) = max over (p, r) in R of |r(x) - p(y)|.
inline GridMatrix H_of(const GridFunctionSpace& k, const BoolMatrix& rel) {
  if (rel.size() != k.size()) throw InputError("relation does not match the carrier size");
  if (is_empty(rel)) throw InputError("H is undefined on the empty relation");
  const std::size_t n = k.space().size();
  GridMatrix out(n, 0);
  for (std::size_t a = 0; a < k.size(); ++a)
    for (std::size_t b = 0; b < k.size(); ++b) {
      if (!rel(a, b)) continue;
      const auto& p = k.member(a);
      const auto& r = k.member(b);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) out(x, y) = std::max(out(x, y), std::abs(r[x] - p[y]));
    }
  return out;
}

/// H^-1(f) = {(p, r) : |r(x) - p(y)| <= f(x, y) for all x, y}.
inline BoolMatrix Hinv_of(const GridFunctionSpace& k, const GridMatrix& f) {
  const FiniteMetricSpace& m = k.space();
  if (auto c = check_bi_katetov(m, f); !c)
    throw InputError("matrix is not bi-Katetov at (" + m.name(c.line) + ";" + m.name(c.a) + "," + m.name(c.b) + ")");
  const std::size_t n = m.size();
  BoolMatrix rel(k.size(), 0);
  for (std::size_t a = 0; a < k.size(); ++a)
    for (std::size_t b = 0; b < k.size(); ++b) {
      const auto& p = k.member(a);
      const auto& r = k.member(b);
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x)
        for (std::size_t y = 0; y < n && ok; ++y) ok = std::abs(r[x] - p[y]) <= f(x, y);
      rel(a, b) = ok ? 1 : 0;
    }
  return rel;
}

/// {(f, g) : f|F = g|F}; all of K x K when F is empty.
inline BoolMatrix R_F(const GridFunctionSpace& k, std::span<const std::size_t> f_set) {
  for (std::size_t z : f_set)
    if (z >= k.space().size()) throw InputError("subset refers to an unknown point index");
  BoolMatrix rel(k.size(), 0);
  for (std::size_t a = 0; a < k.size(); ++a)
    for (std::size_t b = 0; b < k.size(); ++b) {
      bool same = true;
      for (std::size_t z : f_set) same = same && k.member(a)[z] == k.member(b)[z];
      rel(a, b) = same ? 1 : 0;
    }
  return rel;
}

/// A pair (p, r) in H^-1(f) with |r(x) - p(y0)| = f(x, y0) for every x:
/// r(x) = f(x, y0) and p(y) = max over x of max(f(x, y0) - f(x, y), 0).
inline std::pair<std::vector<Grid>, std::vector<Grid>> roundtrip_witness(const FiniteMetricSpace& m,
                                                                          const GridMatrix& f, std::size_t y0) {
  require_matrix_on(m, f);
  if (y0 >= m.size()) throw InputError("unknown point index");
  const std::size_t n = m.size();
  std::vector<Grid> p(n, 0), r(n);
  for (std::size_t x = 0; x < n; ++x) r[x] = f(x, y0);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) p[y] = std::max(p[y], f(x, y0) - f(x, y));
  return {p, r};
}

}  // namespace urysohn
