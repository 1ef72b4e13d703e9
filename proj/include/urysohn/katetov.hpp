#pragma once

// Katetov functions on finite grid spaces: the extension operator, one-point
// realizations, the finite injectivity check and grid approximants of the
// Urysohn space.

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
#include "urysohn/metric_space.hpp"
#include "urysohn/random.hpp"

namespace urysohn {

/// Grid-valued function on a subset of a space; values are numerators over
/// the space's denominator, indexed in the order of support.
struct KatetovFunction {
  std::vector<std::size_t> support;
  std::vector<Grid> values;

  friend bool operator==(const KatetovFunction&, const KatetovFunction&) = default;
  friend auto operator<=>(const KatetovFunction&, const KatetovFunction&) = default;
};

struct KatetovCheck {
  bool ok = true;
  /// Violating pair of points (indices into the space).
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  /// True when d(x,y) > f(x) + f(y); false when |f(x) - f(y)| > d(x,y).
  bool distance_exceeds_sum = false;

  explicit operator bool() const noexcept { return ok; }
};

namespace detail {

inline void check_function_shape(const FiniteMetricSpace& s, std::span<const std::size_t> support,
                                 std::span<const Grid> values) {
  if (support.size() != values.size())
    throw InputError("function has " + std::to_string(values.size()) + " values for a support of " +
                     std::to_string(support.size()) + " points");
  std::vector<char> seen(s.size(), 0);
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= s.size()) throw InputError("support refers to an unknown point");
    if (seen[support[k]]) throw InputError("point '" + s.name(support[k]) + "' repeated in support");
    seen[support[k]] = 1;
    if (values[k] < 0 || values[k] > s.denominator())
      throw InputError("value at '" + s.name(support[k]) + "' = " + std::to_string(values[k]) +
                       " outside [0," + std::to_string(s.denominator()) + "]");
  }
}

}  // namespace detail

/// |f(x) - f(y)| <= d(x,y) <= f(x) + f(y) for all x, y in the support.
inline KatetovCheck is_katetov(const FiniteMetricSpace& s, std::span<const std::size_t> support,
                               std::span<const Grid> values) {
  detail::check_function_shape(s, support, values);
  for (std::size_t a = 0; a < support.size(); ++a)
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      const Grid d = s.d(support[a], support[b]);
      if (std::abs(values[a] - values[b]) > d) return {false, std::pair{support[a], support[b]}, false};
      if (d > values[a] + values[b]) return {false, std::pair{support[a], support[b]}, true};
    }
  return {};
}

inline KatetovCheck is_katetov(const FiniteMetricSpace& s, const KatetovFunction& f) {
  return is_katetov(s, f.support, f.values);
}

/// Function supported on every point of s, in point order.
inline KatetovFunction total_function(const FiniteMetricSpace& s, std::vector<Grid> values) {
  KatetovFunction f;
  f.support.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f.support[i] = i;
  f.values = std::move(values);
  return f;
}

/// The largest 1-Lipschitz extension of f bounded by 1:
/// g(x) = min over y in the support of min(d(x,y) + f(y), q).
inline std::vector<Grid> kappa_extend(const FiniteMetricSpace& s, const KatetovFunction& f) {
  if (auto c = is_katetov(s, f); !c)
    throw InputError("kappa extension needs a Katetov function; fails at (" + s.name(c.witness->first) +
                     "," + s.name(c.witness->second) + ")");
  const Grid q = s.denominator();
  std::vector<Grid> g(s.size(), q);
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t k = 0; k < f.support.size(); ++k)
      g[x] = std::min(g[x], uplus(s.d(x, f.support[k]), f.values[k], q));
  return g;
}

/// Distance row of x.
inline std::vector<Grid> point_function(const FiniteMetricSpace& s, std::size_t x) {
  if (x >= s.size()) throw InputError("unknown point index " + std::to_string(x));
  std::vector<Grid> h(s.size());
  for (std::size_t y = 0; y < s.size(); ++y) h[y] = s.d(x, y);
  return h;
}

inline Grid sup_distance(std::span<const Grid> f, std::span<const Grid> g) {
  if (f.size() != g.size())
    throw InputError("sup distance of functions on " + std::to_string(f.size()) + " and " +
                     std::to_string(g.size()) + " points");
  Grid m = 0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

struct OnePointExtension {
  FiniteMetricSpace space;  // s followed by the new point
  /// Set when f vanishes somewhere: the new point duplicates this one and the
  /// result is only a pseudometric.
  std::optional<std::size_t> identified_with;
};

inline OnePointExtension realize_one_point(const FiniteMetricSpace& s, std::span<const Grid> f,
                                           std::string name = "p") {
  if (f.size() != s.size()) throw InputError("one-point realization needs a total function");
  std::vector<std::size_t> all(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) all[i] = i;
  if (auto c = is_katetov(s, all, f); !c)
    throw InputError("not a Katetov function; fails at (" + s.name(c.witness->first) + "," +
                     s.name(c.witness->second) + ")");
  while (s.find(name)) name += "'";
  const std::size_t n = s.size();
  GridMatrix m(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = s.d(i, j);
    m(i, n) = m(n, i) = f[i];
  }
  OnePointExtension out;
  for (std::size_t i = 0; i < n && !out.identified_with; ++i)
    if (f[i] == 0) out.identified_with = i;
  auto names = s.points();
  names.push_back(std::move(name));
  const bool metric = !out.identified_with && s.kind() == SpaceKind::metric;
  out.space = FiniteMetricSpace(std::move(names), s.denominator(), std::move(m),
                                metric ? SpaceKind::metric : SpaceKind::pseudometric);
  return out;
}

namespace detail {

/// Calls visit(values) for every grid function on support (values in [0, q])
/// satisfying the Katetov inequalities, in lexicographic order of values.
template <typename Dist, typename Visit>
void for_each_grid_katetov(const Dist& d, std::span<const std::size_t> support, Grid q, Visit&& visit) {
  std::vector<Grid> v(support.size(), 0);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == support.size()) {
      visit(std::span<const Grid>(v));
      return;
    }
    for (Grid a = 0; a <= q; ++a) {
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        const Grid dj = d(support[j], support[k]);
        ok = std::abs(a - v[j]) <= dj && dj <= a + v[j];
      }
      if (!ok) continue;
      v[k] = a;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
}

/// Calls visit(subset) for every subset of {0..n-1} of size 1..max_size,
/// ordered by size, then lexicographically.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t max_size, Visit&& visit) {
  std::vector<std::size_t> cur;
  for (std::size_t size = 1; size <= std::min(max_size, n); ++size) {
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (cur.size() == size) {
        visit(std::span<const std::size_t>(cur));
        return;
      }
      for (std::size_t x = start; x < n; ++x) {
        cur.push_back(x);
        self(self, x + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }
}

inline FiniteMetricSpace on_grid(const FiniteMetricSpace& s, Grid q) {
  if (q == 0) return s;
  return s.rescaled(q);
}

}  // namespace detail

struct InjectivityReport {
  std::size_t functions_checked = 0;
  /// Unrealized functions, values over the report grid, in enumeration order.
  std::vector<KatetovFunction> unrealized;
  Grid grid = 1;

  bool injective() const noexcept { return unrealized.empty(); }
};

/// For every subset Y with |Y| <= max_subset and every grid Katetov function f
/// on Y, asks whether some point y realizes d(y, .)|Y = f. grid = 0 uses the
/// space's own denominator; otherwise it must be a multiple of it.
inline InjectivityReport injectivity_check(const FiniteMetricSpace& s_in, std::size_t max_subset,
                                           Grid grid = 0) {
  if (max_subset < 1) throw InputError("subset size must be at least 1");
  const FiniteMetricSpace s = detail::on_grid(s_in, grid);
  InjectivityReport report;
  report.grid = s.denominator();
  const auto d = [&](std::size_t a, std::size_t b) { return s.d(a, b); };
  detail::for_each_subset(s.size(), max_subset, [&](std::span<const std::size_t> y) {
    detail::for_each_grid_katetov(d, y, s.denominator(), [&](std::span<const Grid> f) {
      ++report.functions_checked;
      for (std::size_t p = 0; p < s.size(); ++p) {
        bool match = true;
        for (std::size_t k = 0; k < y.size() && match; ++k) match = s.d(p, y[k]) == f[k];
        if (match) return;
      }
      report.unrealized.push_back({{y.begin(), y.end()}, {f.begin(), f.end()}});
    });
  });
  return report;
}

enum class ApproximantStatus { closed, capped };

inline const char* status_name(ApproximantStatus s) {
  return s == ApproximantStatus::closed ? "closed" : "capped";
}

enum class ApproximantStrategy {
  /// Each new point gets the largest Katetov extension of the function it realizes.
  kappa,
  /// As kappa, followed by a local search over the distances of non-seed
  /// points that lowers the number of unrealized functions.
  repair,
};

struct ApproximantOptions {
  std::size_t subset = 2;
  Grid grid = 0;  // 0: the seed's own denominator
  std::size_t cap = 64;
  ApproximantStrategy strategy = ApproximantStrategy::repair;
  std::uint64_t seed = 1;
  /// Local-search moves attempted after each insertion.
  std::size_t repair_moves = 20000;
  /// Further attempts at the same size, each from freshly drawn non-seed distances.
  std::size_t repair_restarts = 8;
};

struct Approximant {
  FiniteMetricSpace space;  // seed points come first, unchanged
  ApproximantStatus status = ApproximantStatus::capped;
  std::size_t seed_size = 0;
};

namespace detail {

/// Tracks, for a growing grid space, how many grid Katetov functions on small
/// subsets are not realized by any point.
class RealizationLedger {
 public:
  RealizationLedger(std::vector<std::vector<Grid>> dist, Grid q, std::size_t max_subset)
      : d_(std::move(dist)), q_(q), s_(max_subset) {}

  std::size_t size() const noexcept { return d_.size(); }
  Grid d(std::size_t i, std::size_t j) const { return d_[i][j]; }
  const std::vector<std::vector<Grid>>& dist() const noexcept { return d_; }

  void set(std::size_t i, std::size_t j, Grid v) { d_[i][j] = d_[j][i] = v; }
  void assign(std::vector<std::vector<Grid>> dist) { d_ = std::move(dist); }

  void add_point(const std::vector<Grid>& row) {
    for (std::size_t i = 0; i < d_.size(); ++i) d_[i].push_back(row[i]);
    d_.push_back(row);
    d_.back().push_back(0);
  }

  /// Number of unrealized (subset, function) pairs over all subsets.
  std::int64_t deficit() {
    std::int64_t total = 0;
    for_each_subset(size(), s_, [&](std::span<const std::size_t> y) { total += deficit_of(y); });
    return total;
  }

  /// Deficit restricted to subsets containing i or j.
  std::int64_t deficit_touching(std::size_t i, std::size_t j) {
    std::int64_t total = 0;
    std::vector<std::size_t> rest;
    // Subsets {anchor} + rest, where rest avoids the anchor and the excluded point.
    auto rec = [&](auto&& self, std::size_t anchor, std::size_t excluded, std::size_t start) -> void {
      std::vector<std::size_t> y = rest;
      y.insert(std::upper_bound(y.begin(), y.end(), anchor), anchor);
      total += deficit_of(y);
      if (rest.size() + 1 == s_) return;
      for (std::size_t x = start; x < size(); ++x) {
        if (x == anchor || x == excluded) continue;
        rest.push_back(x);
        self(self, anchor, excluded, x + 1);
        rest.pop_back();
      }
    };
    rec(rec, i, i, 0);
    if (j != i) rec(rec, j, i, 0);
    return total;
  }

  std::optional<KatetovFunction> first_unrealized() const {
    std::optional<KatetovFunction> found;
    const auto dist = [&](std::size_t a, std::size_t b) { return d_[a][b]; };
    for_each_subset(size(), s_, [&](std::span<const std::size_t> y) {
      if (found) return;
      for_each_grid_katetov(dist, y, q_, [&](std::span<const Grid> f) {
        if (found) return;
        for (std::size_t p = 0; p < size(); ++p) {
          bool match = true;
          for (std::size_t k = 0; k < y.size() && match; ++k) match = d_[p][y[k]] == f[k];
          if (match) return;
        }
        found = KatetovFunction{{y.begin(), y.end()}, {f.begin(), f.end()}};
      });
    });
    return found;
  }

 private:
  std::int64_t deficit_of(std::span<const std::size_t> y) {
    codes_.clear();
    for (std::size_t p = 0; p < size(); ++p) {
      std::uint64_t c = 0;
      for (std::size_t k = 0; k < y.size(); ++k) c = c * static_cast<std::uint64_t>(q_ + 1) + static_cast<std::uint64_t>(d_[p][y[k]]);
      codes_.push_back(c);
    }
    std::sort(codes_.begin(), codes_.end());
    const auto distinct = std::unique(codes_.begin(), codes_.end()) - codes_.begin();
    return katetov_count(y) - distinct;
  }

  std::int64_t katetov_count(std::span<const std::size_t> y) {
    key_.clear();
    for (std::size_t a = 0; a < y.size(); ++a)
      for (std::size_t b = a + 1; b < y.size(); ++b) key_.push_back(d_[y[a]][y[b]]);
    key_.push_back(static_cast<Grid>(y.size()));
    if (auto it = counts_.find(key_); it != counts_.end()) return it->second;
    std::int64_t count = 0;
    const auto dist = [&](std::size_t a, std::size_t b) { return d_[a][b]; };
    for_each_grid_katetov(dist, y, q_, [&](std::span<const Grid>) { ++count; });
    counts_.emplace(key_, count);
    return count;
  }

  std::vector<std::vector<Grid>> d_;
  Grid q_;
  std::size_t s_;
  std::vector<std::uint64_t> codes_;
  std::vector<Grid> key_;
  std::map<std::vector<Grid>, std::int64_t> counts_;
};

}  // namespace detail

/// Grows seed into a space realizing every grid Katetov function on subsets
/// of size at most opts.subset, adding one realizing point at a time for the
/// first unrealized function (subsets by size, then lexicographically; values
/// lexicographically). Stops when closed or when the space reaches opts.cap
/// points. The seed embeds isometrically as the first points.
inline Approximant build_approximant(const FiniteMetricSpace& seed_in, const ApproximantOptions& opts) {
  if (opts.subset < 1) throw InputError("subset size must be at least 1");
  const FiniteMetricSpace seed = detail::on_grid(seed_in, opts.grid);
  if (!seed.separates_points()) throw InputError("approximant seed must be a metric space");
  if (opts.cap < seed.size()) throw InputError("cap is smaller than the seed");
  const Grid q = seed.denominator();
  const std::size_t m = seed.size();

  std::vector<std::vector<Grid>> rows(m, std::vector<Grid>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rows[i][j] = seed.d(i, j);
  detail::RealizationLedger ledger(std::move(rows), q, opts.subset);
  Rng rng(opts.seed);

  auto finish = [&](ApproximantStatus st) {
    const std::size_t n = ledger.size();
    GridMatrix dm(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dm(i, j) = ledger.d(i, j);
    auto names = seed.points();
    for (std::size_t k = m, label = 0; k < n; ++k) {
      std::string nm;
      do nm = "u" + std::to_string(label++);
      while (std::find(names.begin(), names.end(), nm) != names.end());
      names.push_back(std::move(nm));
    }
    return Approximant{FiniteMetricSpace(std::move(names), q, std::move(dm)), st, m};
  };

  // Local search over entries with at least one non-seed endpoint. A move
  // keeps the triangle inequality and never increases the deficit.
  auto repair = [&]() -> std::int64_t {
    const std::size_t n = ledger.size();
    std::int64_t deficit = ledger.deficit();
    if (n <= m) return deficit;
    for (std::size_t move = 0; move < opts.repair_moves && deficit > 0; ++move) {
      const std::size_t j = m + rng.index(n - m);
      std::size_t i = rng.index(n - 1);
      if (i >= j) ++i;
      const Grid v = rng.uniform(1, q);
      const Grid old = ledger.d(i, j);
      if (v == old) continue;
      bool feasible = true;
      for (std::size_t k = 0; k < n && feasible; ++k) {
        if (k == i || k == j) continue;
        feasible = std::abs(ledger.d(i, k) - ledger.d(k, j)) <= v && v <= ledger.d(i, k) + ledger.d(k, j);
      }
      if (!feasible) continue;
      const std::int64_t before = ledger.deficit_touching(i, j);
      ledger.set(i, j, v);
      const std::int64_t after = ledger.deficit_touching(i, j);
      if (after <= before)
        deficit += after - before;
      else
        ledger.set(i, j, old);
    }
    return deficit;
  };

  // Redraws every non-seed row as a random Katetov extension of the points before it.
  auto redraw = [&]() {
    for (std::size_t j = m; j < ledger.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) {
        Grid lo = 1, hi = q;
        for (std::size_t k = 0; k < i; ++k) {
          lo = std::max(lo, std::abs(ledger.d(j, k) - ledger.d(k, i)));
          hi = std::min(hi, ledger.d(j, k) + ledger.d(k, i));
        }
        ledger.set(i, j, rng.uniform(lo, hi));
      }
  };

  while (true) {
    const auto todo = ledger.first_unrealized();
    if (!todo) return finish(ApproximantStatus::closed);
    if (ledger.size() >= opts.cap) return finish(ApproximantStatus::capped);

    const std::size_t n = ledger.size();
    std::vector<Grid> row(n, q);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t k = 0; k < todo->support.size(); ++k)
        row[x] = std::min(row[x], uplus(ledger.d(x, todo->support[k]), todo->values[k], q));
    ledger.add_point(row);
    if (opts.strategy != ApproximantStrategy::repair) continue;

    std::int64_t best = repair();
    auto best_rows = ledger.dist();
    for (std::size_t r = 0; r < opts.repair_restarts && best > 0; ++r) {
      redraw();
      if (const std::int64_t def = repair(); def < best) {
        best = def;
        best_rows = ledger.dist();
      }
    }
    ledger.assign(std::move(best_rows));
  }
}

}  // namespace urysohn
