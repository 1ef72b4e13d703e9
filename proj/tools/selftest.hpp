#pragma once

// Exhaustive small-case suites behind `urysohn selftest`.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "urysohn.hpp"

namespace urysohn::selftest {

struct Suite {
  std::string name;
  std::function<std::string()> run;  // empty string on success, else the first failure
};

inline FiniteMetricSpace equilateral(std::size_t n, Grid q, Grid side) {
  GridMatrix d(n, side);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 0;
  return FiniteMetricSpace(default_point_names(n), q, std::move(d));
}

inline std::string idempotent_count(unsigned workers) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (Grid q : {Grid{2}, Grid{4}}) {
      if (n == 3 && q == 4) continue;  // covered by the acceptance run
      const auto m = random_grid_space(n, q, 7 + n);
      const auto found = classify_idempotents(m, workers);
      if (found.size() != (std::size_t{1} << n))
        return "|M|=" + std::to_string(n) + " q=" + std::to_string(q) + ": " + std::to_string(found.size()) +
               " idempotents";
      for (const auto& c : found)
        if (!c.equals_bF) return "an idempotent differs from b_F on its zero set";
    }
  return {};
}

inline std::string invertibles() {
  const auto m = equilateral(2, 2, 1);
  std::size_t count = 0;
  for (const auto& f : enumerate_bi_katetov(m)) {
    bool inv = false;
    for (const auto& g : enumerate_bi_katetov(m)) inv = inv || is_two_sided_inverse(m, f, g);
    if (inv != is_invertible(m, f).has_value()) return "equation and isometry searches disagree";
    count += inv;
  }
  return count == 2 ? std::string{} : std::to_string(count) + " invertibles";
}

inline std::string characterization() {
  const auto m = equilateral(2, 3, 2);
  bool bad = false;
  for_each_grid_matrix(2, 3, [&](const GridMatrix& f) {
    if (is_bi_katetov(m, f) != characterization_check(m, f)) bad = true;
  });
  return bad ? "characterization and definition disagree" : std::string{};
}

inline std::string inner_fixed_idempotents() {
  for (const auto& m : {equilateral(2, 2, 1), equilateral(3, 2, 1)}) {
    const auto group = iso_group(m);
    std::vector<GridMatrix> fixed;
    for (const auto& c : classify_idempotents(m)) {
      bool inv = true;
      for (const auto& g : group) inv = inv && inner_aut(m, g, c.p) == c.p;
      if (inv) fixed.push_back(c.p);
    }
    std::vector<GridMatrix> want{m.distances(), constant_matrix(m, m.denominator())};
    std::sort(want.begin(), want.end());
    std::sort(fixed.begin(), fixed.end());
    if (fixed != want) return std::to_string(fixed.size()) + " fixed idempotents on " + std::to_string(m.size()) + " points";
  }
  return {};
}

inline std::string relations_round_trip() {
  for (Grid q : {Grid{2}, Grid{3}}) {
    const auto m = equilateral(2, q, 1);
    const GridFunctionSpace k(m);
    for (const auto& f : enumerate_bi_katetov(m))
      if (H_of(k, Hinv_of(k, f)) != f) return "H(H^-1(f)) != f at q=" + std::to_string(q);
  }
  for (const auto& m : {equilateral(2, 2, 1), equilateral(3, 2, 1)}) {
    const GridFunctionSpace k(m);
    for (const auto& g : iso_group(m))
      if (H_of(k, j_embed(k, g)) != embed_isometry(m, g)) return "H(j(g)) != i(g)";
  }
  return {};
}

inline std::string enumerated_gh() {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.index(5);
    const Grid q = rng.uniform(1, 12);
    const EnumeratedInstance inst(random_grid_space(n, q, rng.engine()()), random_grid_space(n, q, rng.engine()()));
    if (gh_en_formula(inst) != gh_en_oracle(inst).value) return "formula and oracle disagree";
  }
  return {};
}

inline std::string graev_agreement() {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto s = random_grid_space(3, 6, rng.engine()());
    std::vector<Grid> k(3);
    do
      for (auto& v : k) v = rng.uniform(0, 6);
    while (std::abs(k[0] - k[1]) > s.d(0, 1) || std::abs(k[0] - k[2]) > s.d(0, 2) || std::abs(k[1] - k[2]) > s.d(1, 2));
    const WeightedAlphabet a(s, k);
    GroupWord w(rng.index(9));
    for (auto& l : w) l = {rng.index(3), rng.coin() ? 1 : -1};
    if (graev_norm_dp(w, a) != graev_norm_bruteforce(w, a)) return "DP and pairing enumeration disagree";
  }
  return {};
}

inline std::string nu_singletons() {
  const auto m = random_grid_space(3, 4, 11);
  const auto alpha = singleton_alphabet(m);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      for (std::size_t len = 1; len <= 2; ++len)
        if (nu_truncated(alpha, a, b, len).value != m.d(a, b)) return "nu differs from d";
  return {};
}

inline std::vector<Suite> suites(unsigned workers) {
  return {
      {"idempotents-are-bF", [workers] { return idempotent_count(workers); }},
      {"invertibles-are-isometries", invertibles},
      {"bi-katetov-characterization", characterization},
      {"inner-fixed-idempotents", inner_fixed_idempotents},
      {"relations-round-trip", relations_round_trip},
      {"enumerated-gh-formula", enumerated_gh},
      {"graev-dp-vs-pairings", graev_agreement},
      {"nu-singletons", nu_singletons},
  };
}

}  // namespace urysohn::selftest
