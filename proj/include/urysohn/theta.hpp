#pragma once

// The ordered involutive semigroup of bi-Katetov matrices over a finite grid
// space M. A matrix f is bi-Katetov when every row f(x, .) and every column
// f(., x) is a Katetov function on M. Entries are numerators over q.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/isometry.hpp"
#include "urysohn/metric_space.hpp"
#include "urysohn/random.hpp"

namespace urysohn {

inline void require_matrix_on(const FiniteMetricSpace& m, const GridMatrix& f, const char* what = "matrix") {
  if (f.size() != m.size())
    throw InputError(std::string(what) + " is " + std::to_string(f.size()) + "x" + std::to_string(f.size()) +
                     " but the base space has " + std::to_string(m.size()) + " points");
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y)
      if (f(x, y) < 0 || f(x, y) > m.denominator())
        throw InputError(std::string(what) + " entry (" + m.name(x) + "," + m.name(y) + ") = " +
                         std::to_string(f(x, y)) + " outside [0," + std::to_string(m.denominator()) + "]");
}

struct BiKatetovCheck {
  bool ok = true;
  /// The failing inequality involves f(row, a) and f(row, b) when by_row,
  /// otherwise f(a, col) and f(b, col); `line` is that row or column.
  bool by_row = true;
  std::size_t line = 0, a = 0, b = 0;

  explicit operator bool() const noexcept { return ok; }
};

inline BiKatetovCheck check_bi_katetov(const FiniteMetricSpace& m, const GridMatrix& f) {
  require_matrix_on(m, f);
  const std::size_t n = m.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) {
        const Grid d = m.d(y, z);
        if (std::abs(f(x, y) - f(x, z)) > d || d > f(x, y) + f(x, z)) return {false, true, x, y, z};
        if (std::abs(f(y, x) - f(z, x)) > d || d > f(y, x) + f(z, x)) return {false, false, x, y, z};
      }
  return {};
}

inline bool is_bi_katetov(const FiniteMetricSpace& m, const GridMatrix& f) {
  return static_cast<bool>(check_bi_katetov(m, f));
}

inline GridMatrix constant_matrix(const FiniteMetricSpace& m, Grid v) { return GridMatrix(m.size(), v); }

/// f * g (x, y) = min over z of min(f(x,z) + g(z,y), q).
inline GridMatrix product(const FiniteMetricSpace& m, const GridMatrix& f, const GridMatrix& g) {
  require_matrix_on(m, f, "left factor");
  require_matrix_on(m, g, "right factor");
  return bounded_min_plus(f, g, m.denominator());
}

inline GridMatrix star(const GridMatrix& f) { return f.transposed(); }

/// f*d = d*f = f, f^* * f >= d and f * f^* >= d, evaluated literally. On grid
/// matrices this holds exactly for the bi-Katetov ones.
inline bool characterization_check(const FiniteMetricSpace& m, const GridMatrix& f) {
  require_matrix_on(m, f);
  const GridMatrix& d = m.distances();
  const GridMatrix fs = star(f);
  return product(m, f, d) == f && product(m, d, f) == f && dominated_by(d, product(m, fs, f)) &&
         dominated_by(d, product(m, f, fs));
}

/// i(phi)(x, y) = d(x, phi(y)).
inline GridMatrix embed_isometry(const FiniteMetricSpace& m, const Permutation& phi) {
  require_isometry(m, phi);
  GridMatrix out(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y) out(x, y) = m.d(x, phi[y]);
  return out;
}

/// b_F(x, y) = min over z in F of min(d(x,z) + d(z,y), q); constant q when F is empty.
inline GridMatrix idempotent_bF(const FiniteMetricSpace& m, std::span<const std::size_t> f_set) {
  const Grid q = m.denominator();
  GridMatrix out(m.size(), q);
  for (std::size_t z : f_set) {
    if (z >= m.size()) throw InputError("subset refers to an unknown point index " + std::to_string(z));
    for (std::size_t x = 0; x < m.size(); ++x)
      for (std::size_t y = 0; y < m.size(); ++y) out(x, y) = std::min(out(x, y), uplus(m.d(x, z), m.d(z, y), q));
  }
  return out;
}

/// Inn_g(p)(x, y) = p(g^-1 x, g^-1 y).
inline GridMatrix inner_aut(const FiniteMetricSpace& m, const Permutation& g, const GridMatrix& p) {
  require_isometry(m, g);
  require_matrix_on(m, p);
  const Permutation gi = inverse(g);
  GridMatrix out(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y) out(x, y) = p(gi[x], gi[y]);
  return out;
}

/// (g * p)(x, y) = p(g^-1 x, y), which equals i(g) * p.
inline GridMatrix left_act(const FiniteMetricSpace& m, const Permutation& g, const GridMatrix& p) {
  require_isometry(m, g);
  require_matrix_on(m, p);
  const Permutation gi = inverse(g);
  GridMatrix out(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y) out(x, y) = p(gi[x], y);
  return out;
}

/// (p * g)(x, y) = p(x, g y), which equals p * i(g).
inline GridMatrix right_act(const FiniteMetricSpace& m, const GridMatrix& p, const Permutation& g) {
  require_isometry(m, g);
  require_matrix_on(m, p);
  GridMatrix out(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y) out(x, y) = p(x, g[y]);
  return out;
}

/// The isometry phi with i(phi) = f, searched over the isometry group.
inline std::optional<Permutation> is_invertible(const FiniteMetricSpace& m, const GridMatrix& f,
                                                std::size_t bound = default_isometry_bound) {
  require_matrix_on(m, f);
  for (const auto& phi : iso_group(m, bound))
    if (embed_isometry(m, phi) == f) return phi;
  return std::nullopt;
}

/// Whether g is a two-sided inverse of f: f*g = g*f = d.
inline bool is_two_sided_inverse(const FiniteMetricSpace& m, const GridMatrix& f, const GridMatrix& g) {
  return product(m, f, g) == m.distances() && product(m, g, f) == m.distances();
}

inline constexpr std::size_t default_saturation_bound = 100000;

/// The subsemigroup generated by gens, in ascending matrix order.
inline std::vector<GridMatrix> saturate(const FiniteMetricSpace& m, std::span<const GridMatrix> gens,
                                        std::size_t bound = default_saturation_bound) {
  std::set<GridMatrix> seen;
  std::vector<GridMatrix> all, frontier;
  for (const auto& g : gens) {
    require_matrix_on(m, g, "generator");
    if (seen.insert(g).second) {
      all.push_back(g);
      frontier.push_back(g);
    }
  }
  // Every element is a product of generators, so multiplying new elements by
  // generators on the right reaches the whole semigroup.
  while (!frontier.empty()) {
    std::vector<GridMatrix> next;
    for (const auto& f : frontier)
      for (const auto& g : gens) {
        GridMatrix h = product(m, f, g);
        if (!seen.insert(h).second) continue;
        if (seen.size() > bound)
          throw GuardRefusal("saturation refused: more than " + std::to_string(bound) + " elements");
        all.push_back(h);
        next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end());
  return all;
}

/// Greatest element of T = {f in S : f >= d}, S the semigroup generated by
/// gens; none when T is empty. T is closed under products and f*g dominates
/// both f and g on T, so the product of all of T is its greatest element.
inline std::optional<GridMatrix> greatest_idempotent(const FiniteMetricSpace& m, std::span<const GridMatrix> gens,
                                                     std::size_t bound = default_saturation_bound) {
  for (const auto& g : gens)
    if (auto c = check_bi_katetov(m, g); !c)
      throw InputError("generator is not bi-Katetov at (" + m.name(c.line) + ";" + m.name(c.a) + "," +
                       m.name(c.b) + ")");
  const auto s = saturate(m, gens, bound);
  std::optional<GridMatrix> top;
  for (const auto& f : s) {
    if (!dominated_by(m.distances(), f)) continue;
    top = top ? product(m, *top, f) : f;
  }
  if (!top) return top;
  if (product(m, *top, *top) != *top) throw InvariantBreach("greatest element of T is not idempotent");
  for (const auto& f : s)
    if (dominated_by(m.distances(), f) && !dominated_by(f, *top))
      throw InvariantBreach("product of T does not dominate every member of T");
  return top;
}

/// Calls visit(f) for every matrix with entries in [0, q], in lexicographic
/// row-major order, restricted to entries [first_lo, first_hi] at position (0,0).
template <typename Visit>
void for_each_grid_matrix(std::size_t n, Grid q, Visit&& visit, Grid first_lo = 0, Grid first_hi = -1) {
  if (first_hi < 0) first_hi = q;
  if (n == 0) {
    GridMatrix empty;
    visit(static_cast<const GridMatrix&>(empty));
    return;
  }
  GridMatrix f(n, 0);
  auto& v = f.data();
  for (Grid a = first_lo; a <= first_hi; ++a) {
    std::fill(v.begin(), v.end(), 0);
    v[0] = a;
    while (true) {
      visit(static_cast<const GridMatrix&>(f));
      std::size_t k = v.size() - 1;
      while (k > 0 && v[k] == q) v[k--] = 0;
      if (k == 0) break;
      ++v[k];
    }
  }
}

inline constexpr std::uint64_t default_enumeration_bound = 50'000'000;

inline std::uint64_t grid_matrix_count(std::size_t n, Grid q, std::uint64_t bound) {
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < n * n; ++k) {
    count *= static_cast<std::uint64_t>(q + 1);
    if (count > bound) return bound + 1;
  }
  return count;
}

/// Every grid bi-Katetov matrix on m, in lexicographic order.
inline std::vector<GridMatrix> enumerate_bi_katetov(const FiniteMetricSpace& m,
                                                    std::uint64_t bound = default_enumeration_bound) {
  if (grid_matrix_count(m.size(), m.denominator(), bound) > bound)
    throw GuardRefusal("enumeration refused: (q+1)^(n*n) exceeds " + std::to_string(bound));
  std::vector<GridMatrix> out;
  for_each_grid_matrix(m.size(), m.denominator(), [&](const GridMatrix& f) {
    if (is_bi_katetov(m, f)) out.push_back(f);
  });
  return out;
}

struct ClassifiedIdempotent {
  GridMatrix p;
  std::vector<std::size_t> zero_set;  // F = {x : p(x,x) = 0}
  bool equals_bF = false;             // p == b_F for that F
};

/// All grid bi-Katetov idempotents p >= d, each matched against b_F with
/// F = {x : p(x,x) = 0}. The sweep splits on the (0,0) entry across workers;
/// the result is in lexicographic matrix order regardless of the split.
inline std::vector<ClassifiedIdempotent> classify_idempotents(const FiniteMetricSpace& m, unsigned workers = 1,
                                                              std::uint64_t bound = default_enumeration_bound) {
  const std::size_t n = m.size();
  const Grid q = m.denominator();
  if (grid_matrix_count(n, q, bound) > bound)
    throw GuardRefusal("idempotent enumeration refused: (q+1)^(n*n) exceeds " + std::to_string(bound));
  const GridMatrix& d = m.distances();

  auto sweep = [&](Grid lo, Grid hi) {
    std::vector<GridMatrix> found;
    for_each_grid_matrix(
        n, q,
        [&](const GridMatrix& f) {
          if (!dominated_by(d, f) || !is_bi_katetov(m, f)) return;
          if (bounded_min_plus(f, f, q) == f) found.push_back(f);
        },
        lo, hi);
    return found;
  };

  std::vector<GridMatrix> found;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(q + 1)));
  if (n == 0 || workers == 1) {
    found = sweep(0, q);
  } else {
    std::vector<std::vector<GridMatrix>> parts(workers);
    std::vector<std::thread> pool;
    const Grid per = (q + 1 + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const Grid lo = w * per, hi = std::min<Grid>(q, lo + per - 1);
      if (lo > hi) break;
      pool.emplace_back([&, w, lo, hi] { parts[w] = sweep(lo, hi); });
    }
    for (auto& t : pool) t.join();
    for (auto& p : parts) found.insert(found.end(), p.begin(), p.end());
  }

  std::vector<ClassifiedIdempotent> out;
  for (auto& p : found) {
    ClassifiedIdempotent c;
    for (std::size_t x = 0; x < n; ++x)
      if (p(x, x) == 0) c.zero_set.push_back(x);
    c.equals_bF = idempotent_bF(m, c.zero_set) == p;
    c.p = std::move(p);
    out.push_back(std::move(c));
  }
  return out;
}

/// The 2n-point pseudometric on M and a copy M' with rho(x, y') = f(x, y).
inline GridMatrix two_copy_matrix(const FiniteMetricSpace& m, const GridMatrix& f) {
  require_matrix_on(m, f);
  const std::size_t n = m.size();
  GridMatrix r(2 * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      r(x, y) = r(n + x, n + y) = m.d(x, y);
      r(x, n + y) = r(n + y, x) = f(x, y);
    }
  return r;
}

/// f is bi-Katetov exactly when the two-copy matrix is a pseudometric.
inline bool m_triple_check(const FiniteMetricSpace& m, const GridMatrix& f) {
  return check_axioms(two_copy_matrix(m, f), SpaceKind::pseudometric).valid();
}

/// p * r computed geometrically: the pseudometric on M, M', M'' with
/// rho(x, y') = p(x, y) and rho(x', y'') = r(x, y) and the M-M'' block left
/// open is completed by shortest paths; that block is returned.
inline GridMatrix product_via_amalgam(const FiniteMetricSpace& m, const GridMatrix& p, const GridMatrix& r) {
  for (const GridMatrix* f : {&p, &r})
    if (auto c = check_bi_katetov(m, *f); !c)
      throw InputError("factor is not bi-Katetov at (" + m.name(c.line) + ";" + m.name(c.a) + "," +
                       m.name(c.b) + ")");
  const std::size_t n = m.size();
  const Grid q = m.denominator();
  std::vector<std::string> names;
  for (const char* suffix : {"", "'", "''"})
    for (const auto& nm : m.points()) names.push_back(nm + suffix);
  // Point names within a copy are distinct, but suffixing can still collide
  // across copies ("a'" in M versus "a" + "'"), so index-based names are used then.
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    names = default_point_names(3 * n, "v");

  PartialSpec spec(names, q);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (x != y) spec.set(c * n + x, c * n + y, m.d(x, y));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      spec.set(x, n + y, p(x, y));
      spec.set(n + x, 2 * n + y, r(x, y));
    }
  const FiniteMetricSpace rho = shortest_path_completion(spec);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (rho.d(x, y) != m.d(x, y) || rho.d(n + x, n + y) != m.d(x, y) || rho.d(2 * n + x, 2 * n + y) != m.d(x, y) ||
          rho.d(x, n + y) != p(x, y) || rho.d(n + x, 2 * n + y) != r(x, y))
        throw InvariantBreach("three-copy completion altered prescribed distances");
  GridMatrix out(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) out(x, y) = rho.d(x, 2 * n + y);
  return out;
}

/// Random grid bi-Katetov matrix. Entries are drawn one at a time, column by
/// column, uniformly inside the interval allowed by the triangle inequality
/// on the two-copy space; that interval is never empty because each partial
/// column is a Katetov function on the points already placed.
inline GridMatrix random_bi_katetov(const FiniteMetricSpace& m, Rng& rng) {
  const std::size_t n = m.size();
  const Grid q = m.denominator();
  GridMatrix f(n, 0);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      Grid lo = 0, hi = q;
      for (std::size_t k = 0; k < y; ++k) {  // earlier copy points k'
        lo = std::max(lo, std::abs(f(x, k) - m.d(k, y)));
        hi = std::min(hi, f(x, k) + m.d(k, y));
      }
      for (std::size_t k = 0; k < x; ++k) {  // earlier base points
        lo = std::max(lo, std::abs(m.d(x, k) - f(k, y)));
        hi = std::min(hi, m.d(x, k) + f(k, y));
      }
      if (lo > hi) throw InvariantBreach("empty interval while sampling a bi-Katetov matrix");
      f(x, y) = rng.uniform(lo, hi);
    }
  return f;
}

}  // namespace urysohn
