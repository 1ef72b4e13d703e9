#pragma once

// Partial-isometry relations over a base space M and the free group on them.
//
// A relation R is a nonempty finite set of pairs (x, y) with
// d(x1, x2) = d(y1, y2) for all pairs in R. Pairs of M x M carry the distance
// d2 = d(x1, x2) + d(y1, y2), relations the Hausdorff distance induced by d2,
// and k(R) = max d(x, y) over R. A word t_R1^e1 ... t_Rn^en maps to the
// relation R1^e1 o ... o Rn^en, where R o S = {(x, y) : (x, z) in S and (z, y) in R}.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/graev.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/metric_space.hpp"
#include "urysohn/random.hpp"

namespace urysohn {

using PointPair = std::pair<std::size_t, std::size_t>;

/// Sorted, duplicate-free set of pairs.
struct Relation {
  std::vector<PointPair> pairs;

  Relation() = default;
  explicit Relation(std::vector<PointPair> p) : pairs(std::move(p)) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }

  bool empty() const noexcept { return pairs.empty(); }
  bool contains(PointPair p) const { return std::binary_search(pairs.begin(), pairs.end(), p); }

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation&, const Relation&) = default;
};

struct RelationCheck {
  bool ok = true;
  /// Two pairs (x1, y1), (x2, y2) with d(x1, x2) != d(y1, y2).
  std::optional<std::pair<PointPair, PointPair>> witness;

  explicit operator bool() const noexcept { return ok; }
};

inline void require_pairs_in(const FiniteMetricSpace& m, const Relation& r) {
  for (const auto& [x, y] : r.pairs)
    if (x >= m.size() || y >= m.size()) throw InputError("relation refers to an unknown point index");
}

/// Membership in the set of partial isometries; the empty relation is rejected.
inline RelationCheck validate_relation(const FiniteMetricSpace& m, const Relation& r) {
  if (r.empty()) throw InputError("relation is empty");
  require_pairs_in(m, r);
  for (std::size_t a = 0; a < r.pairs.size(); ++a)
    for (std::size_t b = a + 1; b < r.pairs.size(); ++b) {
      const auto [x1, y1] = r.pairs[a];
      const auto [x2, y2] = r.pairs[b];
      if (m.d(x1, x2) != m.d(y1, y2)) return {false, std::pair{r.pairs[a], r.pairs[b]}};
    }
  return {};
}

inline Grid pair_distance(const FiniteMetricSpace& m, PointPair a, PointPair b) {
  return m.d(a.first, b.first) + m.d(a.second, b.second);
}

/// Hausdorff distance over d2; uncapped, so it may reach 2q.
inline Grid hausdorff_distance(const FiniteMetricSpace& m, const Relation& r, const Relation& s) {
  if (r.empty() || s.empty()) throw InputError("Hausdorff distance needs nonempty relations");
  require_pairs_in(m, r);
  require_pairs_in(m, s);
  auto directed = [&](const Relation& a, const Relation& b) {
    Grid worst = 0;
    for (const auto& p : a.pairs) {
      Grid best = pair_distance(m, p, b.pairs.front());
      for (const auto& q : b.pairs) best = std::min(best, pair_distance(m, p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(r, s), directed(s, r));
}

/// k(R) = max d(x, y) over (x, y) in R; 0 for the empty relation.
inline Grid weight_k(const FiniteMetricSpace& m, const Relation& r) {
  require_pairs_in(m, r);
  Grid k = 0;
  for (const auto& [x, y] : r.pairs) k = std::max(k, m.d(x, y));
  return k;
}

/// Relations on M as boolean matrices: b(x, y) != 0 iff (x, y) is in the relation.
using BoolMatrix = SquareMatrix<std::uint8_t>;

inline BoolMatrix to_matrix(std::size_t n, const Relation& r) {
  BoolMatrix b(n, 0);
  for (const auto& [x, y] : r.pairs) b(x, y) = 1;
  return b;
}

inline Relation to_relation(const BoolMatrix& b) {
  std::vector<PointPair> p;
  for (std::size_t x = 0; x < b.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y)
      if (b(x, y)) p.push_back({x, y});
  return Relation(std::move(p));
}

inline BoolMatrix diagonal(std::size_t n) {
  BoolMatrix b(n, 0);
  for (std::size_t x = 0; x < n; ++x) b(x, x) = 1;
  return b;
}

/// R o S = {(x, y) : exists z with (x, z) in S and (z, y) in R}.
inline BoolMatrix compose(const BoolMatrix& r, const BoolMatrix& s) {
  if (r.size() != s.size()) throw InputError("composed relations live on different carriers");
  const std::size_t n = r.size();
  BoolMatrix out(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z) {
      if (!s(x, z)) continue;
      for (std::size_t y = 0; y < n; ++y)
        if (r(z, y)) out(x, y) = 1;
    }
  return out;
}

inline BoolMatrix invert(const BoolMatrix& r) { return r.transposed(); }

inline bool is_empty(const BoolMatrix& r) {
  return std::none_of(r.data().begin(), r.data().end(), [](std::uint8_t v) { return v != 0; });
}

inline bool contains_all(const BoolMatrix& big, const BoolMatrix& small) {
  for (std::size_t k = 0; k < big.data().size(); ++k)
    if (small.data()[k] && !big.data()[k]) return false;
  return true;
}

/// k of an arbitrary relation matrix; 0 when empty.
inline Grid weight_k(const FiniteMetricSpace& m, const BoolMatrix& r) {
  Grid k = 0;
  for (std::size_t x = 0; x < r.size(); ++x)
    for (std::size_t y = 0; y < r.size(); ++y)
      if (r(x, y)) k = std::max(k, m.d(x, y));
  return k;
}

/// A finite set of named partial isometries over M, weighted as a Graev
/// alphabet by the Hausdorff distance and k.
class RelationAlphabet {
 public:
  RelationAlphabet(FiniteMetricSpace m, std::vector<Relation> gens, std::vector<std::string> names = {})
      : m_(std::move(m)), gens_(std::move(gens)), names_(std::move(names)) {
    if (gens_.empty()) throw InputError("relation alphabet is empty");
    if (names_.empty())
      for (std::size_t i = 0; i < gens_.size(); ++i) names_.push_back("R" + std::to_string(i));
    if (names_.size() != gens_.size()) throw InputError("relation alphabet needs one name per relation");
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw InputError("relation name '" + names_[i] + "' is repeated");
      if (gens_[i].empty()) throw InputError("relation '" + names_[i] + "' is empty");
      if (auto c = validate_relation(m_, gens_[i]); !c) {
        const auto& [p1, p2] = *c.witness;
        throw InputError("relation '" + names_[i] + "' is not a partial isometry: pairs (" + m_.name(p1.first) +
                         "," + m_.name(p1.second) + ") and (" + m_.name(p2.first) + "," + m_.name(p2.second) + ")");
      }
    }
    const std::size_t n = gens_.size();
    dh_.assign(n * n, 0);
    k_.resize(n);
    mats_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      k_[i] = weight_k(m_, gens_[i]);
      mats_.push_back(to_matrix(m_.size(), gens_[i]));
      for (std::size_t j = 0; j < n; ++j) dh_[i * n + j] = hausdorff_distance(m_, gens_[i], gens_[j]);
    }
  }

  std::size_t size() const noexcept { return gens_.size(); }
  Grid distance(std::size_t i, std::size_t j) const { return dh_[i * gens_.size() + j]; }
  Grid weight(std::size_t i) const { return k_[i]; }

  const FiniteMetricSpace& space() const noexcept { return m_; }
  const Relation& relation(std::size_t i) const { return gens_.at(i); }
  const BoolMatrix& matrix(std::size_t i) const { return mats_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  FiniteMetricSpace m_;
  std::vector<Relation> gens_;
  std::vector<std::string> names_;
  std::vector<Grid> dh_;
  std::vector<Grid> k_;
  std::vector<BoolMatrix> mats_;
};

/// The singleton relations {(a, b)} for every ordered pair of points.
inline RelationAlphabet singleton_alphabet(const FiniteMetricSpace& m) {
  std::vector<Relation> gens;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) {
      gens.push_back(Relation({{a, b}}));
      names.push_back(m.name(a) + ">" + m.name(b));
    }
  return RelationAlphabet(m, std::move(gens), std::move(names));
}

/// Phi(w) = R1^e1 o ... o Rn^en; the diagonal for the empty word.
inline BoolMatrix phi_of_word(const RelationAlphabet& a, const GroupWord& w) {
  require_letters(w, a);
  BoolMatrix acc = diagonal(a.space().size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const BoolMatrix& r = a.matrix(it->id);
    acc = compose(it->sign > 0 ? r : invert(r), acc);
  }
  return acc;
}

/// Whether (a, b) lies in Phi(w).
inline bool in_H_ab(const RelationAlphabet& alpha, const GroupWord& w, std::size_t a, std::size_t b) {
  if (a >= alpha.space().size() || b >= alpha.space().size()) throw InputError("unknown point index");
  return phi_of_word(alpha, w)(a, b) != 0;
}

/// Raised when the word search exceeds its bound; carries the best value seen.
class NuSearchRefusal : public GuardRefusal {
 public:
  NuSearchRefusal(const std::string& what, std::optional<Grid> partial)
      : GuardRefusal(what), partial_(partial) {}
  std::optional<Grid> partial_minimum() const noexcept { return partial_; }

 private:
  std::optional<Grid> partial_;
};

struct NuResult {
  std::optional<Grid> value;   // none when no word of length <= max_len maps a to b
  GroupWord witness;           // first minimizing word, shortest then lexicographic
  std::size_t words_examined = 0;
};

inline constexpr std::size_t default_word_bound = 2'000'000;

/// min p(w) over reduced words w of length <= max_len with (a, b) in Phi(w),
/// p the Graev seminorm of the alphabet. Words are visited by length, then
/// lexicographically in (relation, sign) order. Since Phi(u|v) = Phi(u) o Phi(v),
/// (a, b) in Phi(u|v) needs some (z, b) in Phi(u); prefixes without one are
/// not extended.
inline NuResult nu_truncated(const RelationAlphabet& alpha, std::size_t a, std::size_t b, std::size_t max_len,
                             std::size_t bound = default_word_bound) {
  const std::size_t n = alpha.space().size();
  if (a >= n || b >= n) throw InputError("unknown point index");
  NuResult out;
  GroupWord w;
  std::vector<BoolMatrix> prefix{diagonal(n)};  // Phi of each prefix of w
  auto reaches_b = [&](const BoolMatrix& phi) {
    for (std::size_t z = 0; z < n; ++z)
      if (phi(z, b)) return true;
    return false;
  };

  auto visit = [&]() {
    ++out.words_examined;
    if (out.words_examined > bound)
      throw NuSearchRefusal("word search refused: more than " + std::to_string(bound) + " words", out.value);
    if (!prefix.back()(a, b)) return;
    const Grid p = graev_norm_dp(w, alpha);
    if (!out.value || p < *out.value) {
      out.value = p;
      out.witness = w;
    }
  };
  for (std::size_t len = 0; len <= max_len; ++len) {
    auto rec = [&](auto&& self) -> void {
      if (w.size() == len) {
        visit();
        return;
      }
      for (std::size_t r = 0; r < alpha.size(); ++r)
        for (int sign : {1, -1}) {
          if (!w.empty() && w.back().id == r && w.back().sign == -sign) continue;
          const BoolMatrix& m = alpha.matrix(r);
          BoolMatrix next = compose(prefix.back(), sign > 0 ? m : invert(m));
          if (!reaches_b(next)) continue;
          w.push_back({r, sign});
          prefix.push_back(std::move(next));
          self(self);
          prefix.pop_back();
          w.pop_back();
        }
    };
    rec(rec);
  }
  return out;
}

enum class BoundStatus { holds, violated, skipped };

inline const char* bound_status_name(BoundStatus s) {
  switch (s) {
    case BoundStatus::holds: return "holds";
    case BoundStatus::violated: return "violated";
    case BoundStatus::skipped: return "skipped";
  }
  return "?";
}

struct KBoundCheck {
  BoundStatus status = BoundStatus::skipped;
  Grid lhs = 0;  // k(S)
  Grid rhs = 0;  // the case's bound
};

/// The weight bounds for short compositions S of partial isometries:
///   case 1: S = R1^e o R2^-e,         k(S) <= dH(R1, R2)
///   case 2: S = R1^e o R2^f o R3^-e,  k(S) <= dH(R1, R3) + k(R2)
///   case 3: S = R1^e o R2^f,          k(S) <= k(R1) + k(R2)
/// Skipped when S is empty.
inline KBoundCheck check_k_bounds(const FiniteMetricSpace& m, int which, const std::vector<Relation>& rels,
                                  int e, int f = 1) {
  const std::size_t need = which == 2 ? 3 : 2;
  if (which < 1 || which > 3) throw InputError("bound case must be 1, 2 or 3");
  if (rels.size() != need)
    throw InputError("case " + std::to_string(which) + " needs " + std::to_string(need) + " relations");
  if ((e != 1 && e != -1) || (f != 1 && f != -1)) throw InputError("signs must be +1 or -1");
  for (const auto& r : rels)
    if (auto c = validate_relation(m, r); !c) throw InputError("relation is not a partial isometry");
  const std::size_t n = m.size();
  auto pw = [&](const Relation& r, int s) {
    BoolMatrix b = to_matrix(n, r);
    return s > 0 ? b : invert(b);
  };
  KBoundCheck out;
  BoolMatrix s;
  switch (which) {
    case 1:
      s = compose(pw(rels[0], e), pw(rels[1], -e));
      out.rhs = hausdorff_distance(m, rels[0], rels[1]);
      break;
    case 2:
      s = compose(pw(rels[0], e), compose(pw(rels[1], f), pw(rels[2], -e)));
      out.rhs = hausdorff_distance(m, rels[0], rels[2]) + weight_k(m, rels[1]);
      break;
    default:
      s = compose(pw(rels[0], e), pw(rels[1], f));
      out.rhs = weight_k(m, rels[0]) + weight_k(m, rels[1]);
      break;
  }
  if (is_empty(s)) return out;
  out.lhs = weight_k(m, s);
  out.status = out.lhs <= out.rhs ? BoundStatus::holds : BoundStatus::violated;
  return out;
}

/// Random partial isometry with between 1 and max_size pairs: a random
/// domain is mapped point by point to random images consistent with the
/// pairs already chosen; the domain is cut short when no image fits.
inline Relation random_partial_isometry(const FiniteMetricSpace& m, std::size_t max_size, Rng& rng) {
  const std::size_t n = m.size();
  if (n == 0) throw InputError("space is empty");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  const std::size_t target = 1 + rng.index(std::min(max_size, n));
  std::vector<PointPair> pairs;
  std::vector<char> used(n, 0);
  for (std::size_t k = 0; k < target; ++k) {
    const std::size_t x = order[k];
    std::vector<std::size_t> fits;
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y]) continue;
      bool ok = true;
      for (const auto& [x2, y2] : pairs) ok = ok && m.d(x, x2) == m.d(y, y2);
      if (ok) fits.push_back(y);
    }
    if (fits.empty()) break;
    const std::size_t y = fits[rng.index(fits.size())];
    used[y] = 1;
    pairs.push_back({x, y});
  }
  return Relation(std::move(pairs));
}

}  // namespace urysohn
