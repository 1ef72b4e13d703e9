#pragma once

// Test-side oracles and generators. The oracles restate each definition
// directly (filter-and-check, no shared code paths with the library) so a
// library bug cannot hide behind the same bug in its checker.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "urysohn.hpp"

namespace oracle {

using urysohn::Grid;
using urysohn::GridMatrix;
using Rel = std::set<std::pair<std::size_t, std::size_t>>;

inline bool pseudometric(const GridMatrix& m, Grid q) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) != 0) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) != m(j, i) || m(i, j) < 0 || m(i, j) > q) return false;
      for (std::size_t k = 0; k < n; ++k)
        if (m(i, k) > m(i, j) + m(j, k)) return false;
    }
  }
  return true;
}

inline bool metric(const GridMatrix& m, Grid q) {
  if (!pseudometric(m, q)) return false;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (i != j && m(i, j) == 0) return false;
  return true;
}

/// |f(x) - f(y)| <= d(x,y) <= f(x) + f(y) over all pairs of listed points.
inline bool katetov(const urysohn::FiniteMetricSpace& s, const std::vector<std::size_t>& pts,
                    const std::vector<Grid>& f) {
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b) {
      const Grid d = s.d(pts[a], pts[b]);
      if (std::abs(f[a] - f[b]) > d || d > f[a] + f[b]) return false;
    }
  return true;
}

inline bool bi_katetov(const urysohn::FiniteMetricSpace& s, const GridMatrix& f) {
  const std::size_t n = s.size();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<Grid> row(n), col(n);
    for (std::size_t y = 0; y < n; ++y) {
      if (f(x, y) < 0 || f(x, y) > s.denominator()) return false;
      row[y] = f(x, y);
      col[y] = f(y, x);
    }
    if (!katetov(s, all, row) || !katetov(s, all, col)) return false;
  }
  return true;
}

/// (f * g)(x, y) = min over z of min(f(x,z) + g(z,y), q).
inline GridMatrix product(const GridMatrix& f, const GridMatrix& g, Grid q) {
  const std::size_t n = f.size();
  GridMatrix out(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Grid best = q;
      for (std::size_t z = 0; z < n; ++z) best = std::min(best, f(x, z) + g(z, y));
      out(x, y) = best;
    }
  return out;
}

inline GridMatrix transpose(const GridMatrix& f) {
  GridMatrix t(f.size());
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y) t(y, x) = f(x, y);
  return t;
}

inline bool leq(const GridMatrix& a, const GridMatrix& b) {
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a(x, y) > b(x, y)) return false;
  return true;
}

inline GridMatrix bF(const urysohn::FiniteMetricSpace& s, const std::vector<std::size_t>& f_set) {
  const Grid q = s.denominator();
  GridMatrix out(s.size(), q);
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y)
      for (std::size_t z : f_set) out(x, y) = std::min(out(x, y), std::min(q, s.d(x, z) + s.d(z, y)));
  return out;
}

/// Every matrix with entries in [0, q], in no particular order.
inline void each_matrix(std::size_t n, Grid q, const std::function<void(const GridMatrix&)>& visit) {
  GridMatrix m(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n * n) {
      visit(m);
      return;
    }
    for (Grid v = 0; v <= q; ++v) {
      m(k / n, k % n) = v;
      rec(k + 1);
    }
  };
  rec(0);
}

/// Grid idempotents p >= d that are bi-Katetov, by filtering all matrices.
inline std::vector<GridMatrix> idempotents_above_d(const urysohn::FiniteMetricSpace& s) {
  std::vector<GridMatrix> out;
  each_matrix(s.size(), s.denominator(), [&](const GridMatrix& p) {
    if (leq(s.distances(), p) && bi_katetov(s, p) && product(p, p, s.denominator()) == p) out.push_back(p);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Least Graev sum, by listing every partial matching and discarding the
/// crossing or same-sign ones.
inline Grid graev_min(const urysohn::GroupWord& w, const std::function<Grid(std::size_t, std::size_t)>& d,
                      const std::function<Grid(std::size_t)>& k) {
  const std::size_t n = w.size();
  std::vector<std::ptrdiff_t> partner(n, -1);
  Grid best = std::numeric_limits<Grid>::max();
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      for (std::size_t a = 0; a < n; ++a) {
        if (partner[a] < 0) continue;
        const auto b = static_cast<std::size_t>(partner[a]);
        if (w[a].sign == w[b].sign) return;
        for (std::size_t c = 0; c < n; ++c) {
          if (partner[c] < 0) continue;
          const auto e = static_cast<std::size_t>(partner[c]);
          if (a < c && c < b && b < e) return;
        }
      }
      Grid s = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (partner[a] < 0)
          s += k(w[a].id);
        else if (static_cast<std::size_t>(partner[a]) > a)
          s += d(w[a].id, w[static_cast<std::size_t>(partner[a])].id);
      }
      best = std::min(best, s);
      return;
    }
    if (partner[i] >= 0) {
      rec(i + 1);
      return;
    }
    rec(i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (partner[j] >= 0) continue;
      partner[i] = static_cast<std::ptrdiff_t>(j);
      partner[j] = static_cast<std::ptrdiff_t>(i);
      rec(i + 1);
      partner[i] = partner[j] = -1;
    }
  };
  rec(0);
  return best;
}

/// R o S = {(x, y) : (x, z) in S and (z, y) in R}.
inline Rel compose(const Rel& r, const Rel& s) {
  Rel out;
  for (const auto& [x, z] : s)
    for (const auto& [z2, y] : r)
      if (z == z2) out.insert({x, y});
  return out;
}

inline Rel invert(const Rel& r) {
  Rel out;
  for (const auto& [x, y] : r) out.insert({y, x});
  return out;
}

inline Rel to_set(const urysohn::Relation& r) { return Rel(r.pairs.begin(), r.pairs.end()); }

inline Rel diagonal(std::size_t n) {
  Rel out;
  for (std::size_t i = 0; i < n; ++i) out.insert({i, i});
  return out;
}

inline Grid k_of(const urysohn::FiniteMetricSpace& s, const Rel& r) {
  Grid k = 0;
  for (const auto& [x, y] : r) k = std::max(k, s.d(x, y));
  return k;
}

inline Grid hausdorff(const urysohn::FiniteMetricSpace& s, const Rel& r, const Rel& t) {
  Grid h = 0;
  for (int side = 0; side < 2; ++side) {
    const Rel& a = side ? t : r;
    const Rel& b = side ? r : t;
    for (const auto& [x1, y1] : a) {
      Grid best = std::numeric_limits<Grid>::max();
      for (const auto& [x2, y2] : b) best = std::min(best, s.d(x1, x2) + s.d(y1, y2));
      h = std::max(h, best);
    }
  }
  return h;
}

/// Non-expanding functions M -> {0..q}, by filtering all (q+1)^n tuples.
inline std::vector<std::vector<Grid>> carrier(const urysohn::FiniteMetricSpace& s) {
  std::vector<std::vector<Grid>> out;
  const std::size_t n = s.size();
  std::vector<Grid> f(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (std::abs(f[a] - f[b]) > s.d(a, b)) return;
      out.push_back(f);
      return;
    }
    for (Grid v = 0; v <= s.denominator(); ++v) {
      f[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace oracle

namespace gen {

using urysohn::FiniteMetricSpace;
using urysohn::Grid;
using urysohn::GridMatrix;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : e_(seed) {}
  Grid uniform(Grid lo, Grid hi) { return lo + static_cast<Grid>(e_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(e_() % n); }
  bool coin() { return (e_() & 1u) != 0; }
  std::uint64_t raw() { return e_(); }

 private:
  std::mt19937_64 e_;
};

/// Random metric space on grid q: points are added one at a time with a
/// random Katetov profile of positive values.
inline FiniteMetricSpace space(Rng& rng, std::size_t n, Grid q) {
  GridMatrix d(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::pair<std::size_t, Grid>> fixed;
    for (std::size_t j = 0; j < i; ++j) {
      // Profile of the new point i, read as a function on points 0..i-1.
      Grid lo = 1, hi = q;
      for (const auto& [y, v] : fixed) {
        lo = std::max(lo, std::max(v - d(j, y), d(j, y) - v));
        hi = std::min(hi, v + d(j, y));
      }
      const Grid v = rng.uniform(lo, std::max(lo, hi));
      fixed.push_back({j, v});
    }
    for (const auto& [j, v] : fixed) d(i, j) = d(j, i) = v;
  }
  return FiniteMetricSpace(urysohn::default_point_names(n), q, std::move(d));
}

inline FiniteMetricSpace equilateral(std::size_t n, Grid q, Grid side) {
  GridMatrix d(n, side);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 0;
  return FiniteMetricSpace(urysohn::default_point_names(n), q, std::move(d));
}

/// Random bi-Katetov matrix: the copy points y' are added one at a time to
/// M, each with a Katetov profile on M and the earlier copies (where the
/// copy distances are forced to d), so the two-copy matrix stays a
/// pseudometric throughout.
inline GridMatrix bi_katetov(Rng& rng, const FiniteMetricSpace& m) {
  const std::size_t n = m.size();
  const Grid q = m.denominator();
  GridMatrix big(2 * n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) big(x, y) = m.d(x, y);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::pair<std::size_t, Grid>> fixed;
    for (std::size_t e = 0; e < c; ++e) fixed.push_back({n + e, m.d(c, e)});
    for (std::size_t x = 0; x < n; ++x) {
      // Distances from the new copy point to x, constrained by everything fixed so far.
      Grid lo = 0, hi = q;
      for (const auto& [y, v] : fixed) {
        lo = std::max(lo, std::max(v - big(x, y), big(x, y) - v));
        hi = std::min(hi, v + big(x, y));
      }
      fixed.push_back({x, rng.uniform(lo, std::max(lo, hi))});
    }
    for (const auto& [y, v] : fixed) big(n + c, y) = big(y, n + c) = v;
  }
  GridMatrix f(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) f(x, y) = big(x, n + y);
  return f;
}

/// Pointwise max; the max of two bi-Katetov matrices is bi-Katetov.
inline GridMatrix join(const GridMatrix& a, const GridMatrix& b) {
  GridMatrix out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y) out(x, y) = std::max(a(x, y), b(x, y));
  return out;
}

/// Non-expanding weights in [0, q].
inline std::vector<Grid> weights(Rng& rng, const FiniteMetricSpace& s) {
  std::vector<Grid> k;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Grid lo = 0, hi = s.denominator();
    for (std::size_t j = 0; j < i; ++j) {
      lo = std::max(lo, k[j] - s.d(i, j));
      hi = std::min(hi, k[j] + s.d(i, j));
    }
    k.push_back(rng.uniform(lo, hi));
  }
  return k;
}

inline urysohn::GroupWord word(Rng& rng, std::size_t letters, std::size_t max_len) {
  urysohn::GroupWord w(rng.index(max_len + 1));
  for (auto& l : w) l = {rng.index(letters), rng.coin() ? 1 : -1};
  return w;
}

/// A random partial isometry: a random domain, images chosen greedily among
/// points that keep every distance.
inline urysohn::Relation partial_isometry(Rng& rng, const FiniteMetricSpace& m, std::size_t max_size) {
  std::vector<std::size_t> order(m.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), std::mt19937_64(rng.raw()));
  const std::size_t want = 1 + rng.index(std::min(max_size, m.size()));
  std::vector<urysohn::PointPair> pairs;
  for (std::size_t k = 0; k < want; ++k) {
    std::vector<std::size_t> fits;
    for (std::size_t y = 0; y < m.size(); ++y) {
      bool ok = true;
      for (const auto& [a, b] : pairs) ok = ok && b != y && m.d(a, order[k]) == m.d(b, y);
      if (ok) fits.push_back(y);
    }
    if (fits.empty()) break;
    pairs.push_back({order[k], fits[rng.index(fits.size())]});
  }
  return urysohn::Relation(std::move(pairs));
}

}  // namespace gen
