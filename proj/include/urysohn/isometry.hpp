#pragma once

// Isometry groups of small finite spaces and the finite homogeneity check.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "urysohn/error.hpp"
#include "urysohn/metric_space.hpp"

namespace urysohn {

/// A permutation of point indices: p[x] is the image of x.
using Permutation = std::vector<std::size_t>;

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

/// (a * b)(x) = a(b(x)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[b[x]];
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[p[x]] = x;
  return out;
}

inline bool is_permutation_of(const Permutation& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (std::size_t v : p) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

inline bool is_isometry(const FiniteMetricSpace& s, const Permutation& p) {
  if (!is_permutation_of(p, s.size())) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s.d(i, j) != s.d(p[i], p[j])) return false;
  return true;
}

inline void require_isometry(const FiniteMetricSpace& s, const Permutation& p) {
  if (!is_permutation_of(p, s.size())) throw InputError("map is not a permutation of the points");
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s.d(i, j) != s.d(p[i], p[j]))
        throw InputError("map is not an isometry: d(" + s.name(i) + "," + s.name(j) + ") is not preserved");
}

inline constexpr std::size_t default_isometry_bound = 10;

/// All distance-preserving permutations, in lexicographic order, found by
/// backtracking. Spaces larger than bound are refused.
inline std::vector<Permutation> iso_group(const FiniteMetricSpace& s,
                                          std::size_t bound = default_isometry_bound) {
  const std::size_t n = s.size();
  if (n > bound)
    throw GuardRefusal("isometry search refused: " + std::to_string(n) + " points exceeds bound " +
                       std::to_string(bound));
  std::vector<Permutation> out;
  Permutation p(n);
  std::vector<char> used(n, 0);
  auto extend = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(p);
      return;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = s.d(i, j) == s.d(c, p[j]);
      if (!ok) continue;
      p[i] = c;
      used[c] = 1;
      self(self, i + 1);
      used[c] = 0;
    }
  };
  extend(extend, 0);
  return out;
}

/// True when every point can be moved to every other point by an isometry.
inline bool is_point_transitive(const FiniteMetricSpace& s, const std::vector<Permutation>& group) {
  if (s.size() == 0) return true;
  std::vector<char> reached(s.size(), 0);
  for (const auto& g : group) reached[g[0]] = 1;
  return std::all_of(reached.begin(), reached.end(), [](char c) { return c != 0; });
}

/// An isometry between finite subsets: domain[k] maps to image[k].
struct PartialIsometry {
  std::vector<std::size_t> domain;
  std::vector<std::size_t> image;

  friend bool operator==(const PartialIsometry&, const PartialIsometry&) = default;
};

struct HomogeneityReport {
  std::size_t checked = 0;
  std::vector<PartialIsometry> non_extendable;

  bool homogeneous() const noexcept { return non_extendable.empty(); }
};

/// Checks that every isometry between subsets of size at most max_size
/// extends to a global isometry of s.
inline HomogeneityReport homogeneity_check(const FiniteMetricSpace& s, std::size_t max_size,
                                           std::size_t bound = default_isometry_bound) {
  const auto group = iso_group(s, bound);
  const std::size_t n = s.size();
  HomogeneityReport report;
  std::vector<std::size_t> dom, img;
  std::vector<char> used(n, 0);

  auto extends = [&]() {
    for (const auto& g : group) {
      bool ok = true;
      for (std::size_t k = 0; k < dom.size() && ok; ++k) ok = g[dom[k]] == img[k];
      if (ok) return true;
    }
    return false;
  };
  // Images of a fixed domain, assigned position by position.
  auto images = [&](auto&& self, std::size_t k) -> void {
    if (k == dom.size()) {
      ++report.checked;
      if (!extends()) report.non_extendable.push_back({dom, img});
      return;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) ok = s.d(dom[k], dom[j]) == s.d(c, img[j]);
      if (!ok) continue;
      used[c] = 1;
      img.push_back(c);
      self(self, k + 1);
      img.pop_back();
      used[c] = 0;
    }
  };
  auto domains = [&](auto&& self, std::size_t start, std::size_t size) -> void {
    if (dom.size() == size) {
      images(images, 0);
      return;
    }
    for (std::size_t x = start; x < n; ++x) {
      dom.push_back(x);
      self(self, x + 1, size);
      dom.pop_back();
    }
  };
  for (std::size_t size = 1; size <= std::min(max_size, n); ++size) domains(domains, 0, size);
  return report;
}

}  // namespace urysohn
