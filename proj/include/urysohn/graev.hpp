#pragma once

// Graev seminorms on free-group words over a weighted metric alphabet.
//
// A word is a sequence of letters x^e with e = +1 or -1. A pairing of a word
// is a non-crossing set of arcs joining positions of opposite sign; its Graev
// sum adds d(x_i, x_j) over arcs and k(x_i) over unpaired positions. The
// seminorm p(w) is the least Graev sum. Values are uncapped numerators over
// the alphabet's denominator.

#include <algorithm>
#include <cctype>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/metric_space.hpp"

namespace urysohn {

/// Anything with a distance between letters and a weight per letter.
template <typename A>
concept WeightedAlphabetLike = requires(const A& a, std::size_t i, std::size_t j) {
  { a.size() } -> std::convertible_to<std::size_t>;
  { a.distance(i, j) } -> std::convertible_to<Grid>;
  { a.weight(i) } -> std::convertible_to<Grid>;
};

/// A finite metric space with a non-negative, non-expanding weight k.
class WeightedAlphabet {
 public:
  WeightedAlphabet(FiniteMetricSpace space, std::vector<Grid> weights)
      : space_(std::move(space)), k_(std::move(weights)) {
    if (k_.size() != space_.size())
      throw InputError("alphabet has " + std::to_string(space_.size()) + " letters but " +
                       std::to_string(k_.size()) + " weights");
    for (std::size_t i = 0; i < k_.size(); ++i)
      if (k_[i] < 0) throw InputError("weight of '" + space_.name(i) + "' is negative");
    for (std::size_t i = 0; i < k_.size(); ++i)
      for (std::size_t j = i + 1; j < k_.size(); ++j)
        if (std::abs(k_[i] - k_[j]) > space_.d(i, j))
          throw InputError("weights are not non-expanding at ('" + space_.name(i) + "','" + space_.name(j) + "')");
  }

  std::size_t size() const noexcept { return k_.size(); }
  Grid distance(std::size_t i, std::size_t j) const { return space_.d(i, j); }
  Grid weight(std::size_t i) const { return k_[i]; }
  Grid denominator() const noexcept { return space_.denominator(); }
  const FiniteMetricSpace& space() const noexcept { return space_; }
  const std::vector<Grid>& weights() const noexcept { return k_; }

 private:
  FiniteMetricSpace space_;
  std::vector<Grid> k_;
};

struct Letter {
  std::size_t id = 0;
  int sign = 1;  // +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using GroupWord = std::vector<Letter>;

/// Whitespace-separated tokens: `name` for x and `name^-1` for x^-1.
inline GroupWord parse_word(std::string_view text, std::span<const std::string> names) {
  GroupWord w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view tok = text.substr(pos, end - pos);
    pos = end;
    int sign = 1;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      sign = -1;
      tok.remove_suffix(3);
    }
    const auto it = std::find(names.begin(), names.end(), tok);
    if (it == names.end()) throw InputError("unknown letter '" + std::string(tok) + "' in word");
    w.push_back({static_cast<std::size_t>(it - names.begin()), sign});
  }
  return w;
}

inline std::string format_word(const GroupWord& w, std::span<const std::string> names) {
  if (w.empty()) return "e";
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += names[l.id];
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

inline GroupWord inverse_word(const GroupWord& w) {
  GroupWord out(w.rbegin(), w.rend());
  for (auto& l : out) l.sign = -l.sign;
  return out;
}

/// u|v: juxtaposition without cancellation.
inline GroupWord concat(const GroupWord& u, const GroupWord& v) {
  GroupWord out = u;
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

/// Irreducible form: cancels adjacent x^e x^-e until none remain.
inline GroupWord reduce_word(const GroupWord& w) {
  GroupWord out;
  for (const auto& l : w) {
    if (!out.empty() && out.back().id == l.id && out.back().sign == -l.sign)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline bool is_reduced(const GroupWord& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i].id == w[i - 1].id && w[i].sign == -w[i - 1].sign) return false;
  return true;
}

/// Arcs (i, j), i < j, over 0-based positions, sorted by i.
struct Pairing {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;

  friend bool operator==(const Pairing&, const Pairing&) = default;
  friend auto operator<=>(const Pairing&, const Pairing&) = default;
};

/// Disjoint, non-crossing, sign-opposite arcs within the word.
inline bool is_valid_pairing(const GroupWord& w, const Pairing& e) {
  std::vector<char> used(w.size(), 0);
  for (const auto& [i, j] : e.arcs) {
    if (i >= j || j >= w.size() || used[i] || used[j]) return false;
    if (w[i].sign != -w[j].sign) return false;
    used[i] = used[j] = 1;
  }
  for (const auto& [a, b] : e.arcs)
    for (const auto& [c, d] : e.arcs)
      if (a < c && c < b && b < d) return false;
  return true;
}

inline constexpr std::size_t default_pairing_bound = 12;

namespace detail {

/// All non-crossing sign-opposite pairings of the sign pattern, each built
/// from its leftmost position: that position is either unpaired or closed by
/// some later m, which splits the rest into the interior (i, m) and the tail.
inline std::vector<Pairing> pairings_of_signs(std::span<const int> signs) {
  const std::size_t n = signs.size();
  // memo[i][j]: pairings of the interval [i, j).
  std::vector<std::vector<std::vector<Pairing>>> memo(n + 1, std::vector<std::vector<Pairing>>(n + 1));
  for (std::size_t len = 0; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      auto& out = memo[i][j];
      if (len == 0) {
        out.push_back({});
        continue;
      }
      out = memo[i + 1][j];
      for (std::size_t m = i + 1; m < j; ++m) {
        if (signs[m] != -signs[i]) continue;
        for (const auto& inner : memo[i + 1][m])
          for (const auto& tail : memo[m + 1][j]) {
            Pairing e;
            e.arcs.push_back({i, m});
            e.arcs.insert(e.arcs.end(), inner.arcs.begin(), inner.arcs.end());
            e.arcs.insert(e.arcs.end(), tail.arcs.begin(), tail.arcs.end());
            std::sort(e.arcs.begin(), e.arcs.end());
            out.push_back(std::move(e));
          }
      }
    }
  auto all = std::move(memo[0][n]);
  std::sort(all.begin(), all.end());
  return all;
}

/// Dense copy of an alphabet's distances and weights.
struct LetterTable {
  std::size_t size = 0;
  std::vector<Grid> dist;  // size x size
  std::vector<Grid> weight;

  template <WeightedAlphabetLike A>
  explicit LetterTable(const A& a) : size(a.size()), dist(size * size), weight(size) {
    for (std::size_t i = 0; i < size; ++i) {
      weight[i] = a.weight(i);
      for (std::size_t j = 0; j < size; ++j) dist[i * size + j] = a.distance(i, j);
    }
  }

  void require(std::size_t letter) const {
    if (letter >= size) [[unlikely]]
      out_of_range(letter);
  }
  [[noreturn]] static void out_of_range(std::size_t letter) {
    throw InputError("letter index " + std::to_string(letter) + " outside the alphabet");
  }
  Grid d(std::size_t i, std::size_t j) const { return dist[i * size + j]; }
};

inline std::vector<int> signs_of(const GroupWord& w) {
  std::vector<int> s(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) s[i] = w[i].sign;
  return s;
}

}  // namespace detail

/// Every pairing of w, sorted. Refuses words longer than bound.
inline std::vector<Pairing> enumerate_pairings(const GroupWord& w, std::size_t bound = default_pairing_bound) {
  if (w.size() > bound)
    throw GuardRefusal("pairing enumeration refused: word length " + std::to_string(w.size()) +
                       " exceeds bound " + std::to_string(bound) + "; use the dynamic program");
  const auto s = detail::signs_of(w);
  return detail::pairings_of_signs(s);
}

template <WeightedAlphabetLike A>
void require_letters(const GroupWord& w, const A& a) {
  for (const auto& l : w) {
    if (l.id >= a.size()) throw InputError("word uses letter index " + std::to_string(l.id) + " outside the alphabet");
    if (l.sign != 1 && l.sign != -1) throw InputError("letter sign must be +1 or -1");
  }
}

template <WeightedAlphabetLike A>
Grid graev_sum(const GroupWord& w, const Pairing& e, const A& a) {
  require_letters(w, a);
  if (!is_valid_pairing(w, e)) throw InputError("not a valid pairing of the word");
  std::vector<char> paired(w.size(), 0);
  Grid s = 0;
  for (const auto& [i, j] : e.arcs) {
    s += a.distance(w[i].id, w[j].id);
    paired[i] = paired[j] = 1;
  }
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!paired[i]) s += a.weight(w[i].id);
  return s;
}

/// Graev sums of every pairing of a fixed sign pattern, maintained while the
/// word is filled in from its last position towards its first.
template <WeightedAlphabetLike A>
class PairingSweep {
 public:
  /// Positions are stored in a byte, which bounds the length regardless of the caller's bound.
  static constexpr std::size_t max_length = 64;

  PairingSweep(const A& alphabet, std::span<const int> signs, std::size_t bound = default_pairing_bound)
      : letters_(alphabet), n_(signs.size()) {
    if (n_ > std::min(bound, max_length))
      throw GuardRefusal("pairing enumeration refused: word length " + std::to_string(n_) + " exceeds bound " +
                         std::to_string(std::min(bound, max_length)) + "; use the dynamic program");
    pairings_ = detail::pairings_of_signs(signs);
    p_ = pairings_.size();
    // Pairings sharing the role of the first position are stored contiguously.
    if (n_ > 0) {
      auto first_role = [](const Pairing& e) -> std::size_t {
        for (const auto& [i, j] : e.arcs)
          if (i == 0) return 2 + j;
        return 1;
      };
      std::stable_sort(pairings_.begin(), pairings_.end(),
                       [&](const Pairing& a, const Pairing& b) { return first_role(a) < first_role(b); });
    }
    // code at fill step t (position n-1-t): 0 when its partner is still
    // empty, 1 when unpaired, 2 + u when its partner was filled at step u.
    code_.assign(n_ * p_, 1);
    for (std::size_t k = 0; k < p_; ++k)
      for (const auto& [i, j] : pairings_[k].arcs) {
        code_[step(j) * p_ + k] = 0;
        code_[step(i) * p_ + k] = static_cast<std::uint8_t>(2 + step(j));
      }
    sums_.assign((n_ + 1) * p_, 0);
    filled_.reserve(n_);
  }

  std::size_t length() const noexcept { return n_; }
  /// Number of filled positions, counted from the end of the word.
  std::size_t filled() const noexcept { return filled_.size(); }
  /// All pairings, grouped by the role of the first position.
  const std::vector<Pairing>& pairings() const noexcept { return pairings_; }

  /// Fills the last empty position.
  void prepend(std::size_t letter) {
    const std::size_t t = filled_.size();
    if (t == n_) throw InputError("word is already complete");
    Grid contrib[2 + max_length];
    fill_contributions(letter, contrib);
    const std::uint8_t* code = code_.data() + t * p_;
    const Grid* prev = sums_.data() + t * p_;
    Grid* next = sums_.data() + (t + 1) * p_;
    filled_.push_back(letter);
    if (t + 2 != n_) {
      for (std::size_t k = 0; k < p_; ++k) next[k] = prev[k] + contrib[code[k]];
      group_valid_ = false;
      return;
    }
    // One position remains: collect the per-code minima for minimum_with in the same pass.
    const std::uint8_t* last = code_.data() + (t + 1) * p_;
    std::fill(group_min_, group_min_ + 3 + t, group_none);
    for (std::size_t b = 0; b < p_;) {
      const std::uint8_t c = last[b];
      Grid m = group_none;
      std::size_t k = b;
      for (; k < p_ && last[k] == c; ++k) {
        next[k] = prev[k] + contrib[code[k]];
        m = std::min(m, next[k]);
      }
      group_min_[c] = m;
      b = k;
    }
    group_valid_ = true;
  }

  void pop() {
    filled_.pop_back();
    group_valid_ = false;
  }

  /// Least Graev sum; requires every position to be filled.
  Grid minimum() const {
    if (filled_.size() != n_) throw InputError("word is incomplete");
    const Grid* s = sums_.data() + n_ * p_;
    return *std::min_element(s, s + p_);
  }

  /// Least Graev sum once the first position holds letter; the sweep is unchanged.
  /// The last contribution depends on a pairing only through its code, so the
  /// minimum splits into per-code minima of the current sums, computed once
  /// per state and shared by every letter tried in the first position.
  Grid minimum_with(std::size_t letter) const {
    const std::size_t t = filled_.size();
    if (t + 1 != n_) throw InputError("minimum_with needs exactly one empty position");
    letters_.require(letter);
    if (!group_valid_) {
      const std::uint8_t* code = code_.data() + t * p_;
      const Grid* prev = sums_.data() + t * p_;
      std::fill(group_min_, group_min_ + 2 + t, group_none);
      for (std::size_t k = 0; k < p_; ++k) group_min_[code[k]] = std::min(group_min_[code[k]], prev[k]);
      group_valid_ = true;
    }
    const Grid* row = letters_.dist.data() + letter * letters_.size;
    Grid best = std::min(group_min_[0], group_min_[1] + letters_.weight[letter]);
    for (std::size_t u = 0; u < t; ++u) best = std::min(best, group_min_[2 + u] + row[filled_[u]]);
    return best;
  }

  /// Sum for pairings()[k] over the filled positions.
  Grid sum(std::size_t k) const { return sums_[filled_.size() * p_ + k]; }

 private:
  static constexpr Grid group_none = std::numeric_limits<Grid>::max() / 2;

  std::size_t step(std::size_t position) const { return n_ - 1 - position; }

  void fill_contributions(std::size_t letter, Grid* contrib) const {
    letters_.require(letter);
    contrib[0] = 0;
    contrib[1] = letters_.weight[letter];
    const Grid* row = letters_.dist.data() + letter * letters_.size;
    for (std::size_t u = 0; u < filled_.size(); ++u) contrib[2 + u] = row[filled_[u]];
  }

  detail::LetterTable letters_;
  std::size_t n_;
  std::size_t p_ = 0;
  std::vector<Pairing> pairings_;
  std::vector<std::uint8_t> code_;  // n_ x p_
  std::vector<Grid> sums_;          // (n_ + 1) x p_
  std::vector<std::size_t> filled_;
  mutable Grid group_min_[2 + max_length];
  mutable bool group_valid_ = false;
};

/// Interval table of p over the factors of a word built by prepending
/// letters. With P[i][j] = p(w[i..j)), prepending a letter adds the row i = 0:
///   P[i][j] = min(k(x_i) + P[i+1][j],
///                 min over m in (i, j) with e_m = -e_i of
///                     d(x_i, x_m) + P[i+1][m] + P[m+1][j]),
/// which reads only rows below i. Letters are stored by fill step, so the
/// factor w[i..j) of a word of length n covers steps [n-j, n-i).
template <WeightedAlphabetLike A>
class GraevDpTable {
 public:
  explicit GraevDpTable(const A& alphabet, std::size_t capacity = 16) : letters_(alphabet) { reserve(capacity); }

  std::size_t size() const noexcept { return steps_.size(); }

  void prepend(Letter l) {
    const std::size_t t = load(l);
    // Row for the factors starting at the new letter: steps [lo, t + 1).
    for (std::size_t lo = 0; lo <= t; ++lo) at(lo, t + 1) = leftmost(lo, t);
    steps_.push_back(l);
    ++version_;
  }

  /// p of the word with l prepended, leaving the table unchanged. The terms
  /// P[u+1][t] + P[0][u] of the recurrence do not depend on l; they are
  /// gathered once per table state, per sign of the new letter.
  Grid value_with(Letter l) {
    letters_.require(l.id);
    if (l.sign != 1 && l.sign != -1) throw InputError("letter sign must be +1 or -1");
    const std::size_t t = steps_.size();
    const int side = l.sign > 0 ? 0 : 1;
    auto& cache = partners_[side];
    if (cache_version_[side] != version_) {
      cache.clear();
      for (std::size_t u = 0; u < t; ++u)
        if (sign_[u] != l.sign) cache.push_back({steps_[u].id, at(u + 1, t) + at(0, u)});
      cache_version_[side] = version_;
    }
    const Grid* row = letters_.dist.data() + l.id * letters_.size;
    Grid best = letters_.weight[l.id] + (t == 0 ? 0 : at(0, t));
    for (const auto& [id, rest] : cache) best = std::min(best, row[id] + rest);
    return best;
  }

  void pop() {
    steps_.pop_back();
    ++version_;
  }

  Grid value() const { return steps_.empty() ? 0 : at(0, steps_.size()); }

  /// p of the factor w[i..j).
  Grid value(std::size_t i, std::size_t j) const {
    const std::size_t n = steps_.size();
    return i == j ? 0 : at(n - j, n - i);
  }

 private:
  // Caches the weight of l and its distances to the letters already present;
  // returns the step l will occupy.
  std::size_t load(Letter l) {
    letters_.require(l.id);
    if (l.sign != 1 && l.sign != -1) throw InputError("letter sign must be +1 or -1");
    const std::size_t t = steps_.size();
    if (t + 2 >= cap_) reserve(2 * cap_);
    weight_[t] = letters_.weight[l.id];
    sign_[t] = l.sign;
    const Grid* row = letters_.dist.data() + l.id * letters_.size;
    Grid* out = dist_.data() + t * cap_;
    for (std::size_t u = 0; u < t; ++u) out[u] = row[steps_[u].id];
    at(t, t) = 0;
    return t;
  }

  // The recurrence for the factor occupying steps [lo, t + 1), whose leftmost
  // letter sits at step t; the letter at step u < t is its partner candidate.
  Grid leftmost(std::size_t lo, std::size_t t) const {
    const Grid* dt = dist_.data() + t * cap_;
    const int st = sign_[t];
    Grid best = weight_[t] + at(lo, t);
    for (std::size_t u = lo; u < t; ++u) {
      if (sign_[u] == st) continue;
      best = std::min(best, dt[u] + at(u + 1, t) + at(lo, u));
    }
    return best;
  }

  Grid& at(std::size_t lo, std::size_t hi) { return p_[lo * cap_ + hi]; }
  Grid at(std::size_t lo, std::size_t hi) const { return p_[lo * cap_ + hi]; }

  void reserve(std::size_t cap) {
    cap = std::max<std::size_t>(cap, 4);
    std::vector<Grid> p(cap * cap, 0), d(cap * cap, 0);
    for (std::size_t i = 0; i < cap_; ++i)
      for (std::size_t j = 0; j < cap_; ++j) {
        p[i * cap + j] = p_[i * cap_ + j];
        d[i * cap + j] = dist_[i * cap_ + j];
      }
    p_ = std::move(p);
    dist_ = std::move(d);
    weight_.resize(cap);
    sign_.resize(cap);
    cap_ = cap;
  }

  detail::LetterTable letters_;
  std::vector<Letter> steps_;  // letter at each fill step; step 0 is the last letter of the word
  std::vector<Grid> p_;        // p_[lo * cap_ + hi]: p of the factor on steps [lo, hi)
  std::vector<Grid> dist_;     // dist_[t * cap_ + u], u < t
  std::vector<Grid> weight_;
  std::vector<int> sign_;
  std::size_t cap_ = 0;
  // Partner candidates for value_with, per sign of the new letter: (letter, P[u+1][t] + P[0][u]).
  std::vector<std::pair<std::size_t, Grid>> partners_[2];
  std::uint64_t version_ = 1;
  std::uint64_t cache_version_[2] = {0, 0};
};

/// p(w) as the least Graev sum over all pairings of w.
template <WeightedAlphabetLike A>
Grid graev_norm_bruteforce(const GroupWord& w, const A& a, std::size_t bound = default_pairing_bound) {
  require_letters(w, a);
  const auto signs = detail::signs_of(w);
  PairingSweep<A> sweep(a, signs, bound);
  for (auto it = w.rbegin(); it != w.rend(); ++it) sweep.prepend(it->id);
  return sweep.minimum();
}

/// p(w) by the interval dynamic program, O(|w|^3).
template <WeightedAlphabetLike A>
Grid graev_norm_dp(const GroupWord& w, const A& a) {
  require_letters(w, a);
  GraevDpTable<A> table(a, w.size() + 2);
  for (auto it = w.rbegin(); it != w.rend(); ++it) table.prepend(*it);
  return table.value();
}

/// The left-invariant pseudometric of the seminorm: p(reduce(u^-1 | v)).
template <WeightedAlphabetLike A>
Grid graev_distance(const GroupWord& u, const GroupWord& v, const A& a) {
  return graev_norm_dp(reduce_word(concat(inverse_word(u), v)), a);
}

}  // namespace urysohn
