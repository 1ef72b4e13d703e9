#include <gtest/gtest.h>

#include "support.hpp"

using namespace urysohn;

namespace {

// x, y with d = 3, k = (4, 6) over q = 10.
WeightedAlphabet xy() {
  GridMatrix d(2, 0);
  d(0, 1) = d(1, 0) = 3;
  return WeightedAlphabet(FiniteMetricSpace({"x", "y"}, 10, d), {4, 6});
}

const std::vector<std::string> names{"x", "y"};

GroupWord w(const char* text) { return parse_word(text, names); }

WeightedAlphabet random_alphabet(gen::Rng& rng, std::size_t n, Grid q) {
  const auto s = gen::space(rng, n, q);
  return WeightedAlphabet(s, gen::weights(rng, s));
}

Grid oracle_norm(const GroupWord& word, const WeightedAlphabet& a) {
  return oracle::graev_min(
      word, [&](std::size_t i, std::size_t j) { return a.distance(i, j); }, [&](std::size_t i) { return a.weight(i); });
}

}  // namespace

TEST(Words, ParseAndFormat) {
  EXPECT_EQ(w("x y^-1"), (GroupWord{{0, 1}, {1, -1}}));
  EXPECT_EQ(format_word(w("x y^-1 x"), names), "x y^-1 x");
  EXPECT_EQ(format_word({}, names), "e");
  EXPECT_TRUE(w("").empty());
  EXPECT_THROW(w("z"), InputError);
  EXPECT_THROW(w("x^2"), InputError);
}

TEST(Words, ReduceExamples) {
  EXPECT_TRUE(reduce_word(w("x x^-1")).empty());
  EXPECT_EQ(reduce_word(w("x y^-1 y x")), w("x x"));
  EXPECT_EQ(reduce_word(w("x y x")), w("x y x"));
  EXPECT_TRUE(reduce_word(w("x y y^-1 x^-1")).empty());
}

TEST(Words, ReduceIsIdempotentAndReduced) {
  gen::Rng rng(41);
  for (int t = 0; t < 5000; ++t) {
    const auto u = gen::word(rng, 3, 12);
    const auto r = reduce_word(u);
    EXPECT_TRUE(is_reduced(r));
    EXPECT_EQ(reduce_word(r), r);
    EXPECT_TRUE(reduce_word(concat(u, inverse_word(u))).empty());
  }
}

TEST(Pairings, Examples) {
  EXPECT_EQ(enumerate_pairings(w("x")), std::vector<Pairing>{Pairing{}});
  const auto two = enumerate_pairings(w("x y^-1"));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_TRUE(std::find(two.begin(), two.end(), Pairing{{{0, 1}}}) != two.end());
  EXPECT_EQ(enumerate_pairings(w("x x")), std::vector<Pairing>{Pairing{}});
  EXPECT_THROW(enumerate_pairings(GroupWord(13, Letter{0, 1})), GuardRefusal);
}

TEST(Pairings, EnumerationIsExactlyTheValidOnes) {
  gen::Rng rng(42);
  for (int t = 0; t < 300; ++t) {
    const auto u = gen::word(rng, 2, 7);
    const auto listed = enumerate_pairings(u);
    std::set<Pairing> unique(listed.begin(), listed.end());
    EXPECT_EQ(unique.size(), listed.size());
    for (const auto& e : listed) EXPECT_TRUE(is_valid_pairing(u, e));
    // Count every valid pairing independently: each subset of sign-opposite
    // position pairs that forms a valid pairing.
    std::vector<std::pair<std::size_t, std::size_t>> cand;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = i + 1; j < u.size(); ++j)
        if (u[i].sign != u[j].sign) cand.push_back({i, j});
    std::size_t valid = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
      Pairing e;
      for (std::size_t c = 0; c < cand.size(); ++c)
        if (mask >> c & 1u) e.arcs.push_back(cand[c]);
      if (is_valid_pairing(u, e)) ++valid;
    }
    EXPECT_EQ(valid, listed.size());
  }
}

TEST(Graev, SumExamples) {
  const auto a = xy();
  EXPECT_EQ(graev_sum({}, {}, a), 0);
  EXPECT_EQ(graev_sum(w("x"), {}, a), 4);
  EXPECT_EQ(graev_sum(w("x y^-1"), Pairing{{{0, 1}}}, a), 3);
  EXPECT_EQ(graev_sum(w("x y^-1"), {}, a), 10);
  EXPECT_THROW(graev_sum(w("x y"), Pairing{{{0, 1}}}, a), InputError);
}

TEST(Graev, NormExamples) {
  const auto a = xy();
  for (auto norm : {+[](const GroupWord& u, const WeightedAlphabet& al) { return graev_norm_dp(u, al); },
                    +[](const GroupWord& u, const WeightedAlphabet& al) { return graev_norm_bruteforce(u, al); }}) {
    EXPECT_EQ(norm(w("x y^-1"), a), 3);
    EXPECT_EQ(norm(w("x"), a), 4);
    EXPECT_EQ(norm({}, a), 0);
    EXPECT_EQ(norm(w("x x^-1"), a), 0);
    EXPECT_EQ(norm(w("x y^-1 y x^-1"), a), 0);
  }
  // Values above q are not capped.
  EXPECT_EQ(graev_norm_dp(w("y y y"), a), 18);
}

TEST(Graev, DpMatchesOracleAndBruteForce) {
  gen::Rng rng(43);
  for (int t = 0; t < 3000; ++t) {
    const auto a = random_alphabet(rng, 1 + rng.index(4), rng.uniform(1, 12));
    const auto u = gen::word(rng, a.size(), 8);
    const Grid dp = graev_norm_dp(u, a);
    EXPECT_EQ(dp, graev_norm_bruteforce(u, a));
    EXPECT_EQ(dp, oracle_norm(u, a));
  }
}

TEST(Graev, SeminormLaws) {
  gen::Rng rng(44);
  for (int t = 0; t < 3000; ++t) {
    const auto a = random_alphabet(rng, 1 + rng.index(4), rng.uniform(1, 12));
    const auto u = gen::word(rng, a.size(), 8), v = gen::word(rng, a.size(), 8);
    const Grid pu = graev_norm_dp(u, a), pv = graev_norm_dp(v, a);
    EXPECT_EQ(graev_norm_dp(inverse_word(u), a), pu);
    EXPECT_EQ(graev_norm_dp(reduce_word(u), a), pu);
    EXPECT_LE(graev_norm_dp(reduce_word(concat(u, v)), a), pu + pv);
    EXPECT_EQ(graev_norm_dp(reduce_word(concat(concat(u, v), inverse_word(u))), a), pv);
  }
}

TEST(Graev, AnchorValues) {
  gen::Rng rng(45);
  for (int t = 0; t < 500; ++t) {
    const auto a = random_alphabet(rng, 1 + rng.index(5), rng.uniform(1, 12));
    const std::size_t x = rng.index(a.size()), y = rng.index(a.size());
    EXPECT_EQ(graev_norm_dp(GroupWord{{x, 1}}, a), a.weight(x));
    EXPECT_LE(graev_norm_dp(reduce_word(GroupWord{{x, -1}, {y, 1}}), a), a.distance(x, y));
  }
}

TEST(Graev, DistanceLaws) {
  const auto a = xy();
  EXPECT_EQ(graev_distance(w("x y"), w("x y"), a), 0);
  EXPECT_EQ(graev_distance(w("x"), w("y"), a), 3);
  gen::Rng rng(46);
  for (int t = 0; t < 2000; ++t) {
    const auto al = random_alphabet(rng, 1 + rng.index(4), rng.uniform(1, 12));
    const auto u = gen::word(rng, al.size(), 5), v = gen::word(rng, al.size(), 5), s = gen::word(rng, al.size(), 5);
    const Grid duv = graev_distance(u, v, al);
    EXPECT_EQ(graev_distance(v, u, al), duv);
    EXPECT_LE(graev_distance(u, s, al), duv + graev_distance(v, s, al));
    EXPECT_EQ(graev_distance(concat(s, u), concat(s, v), al), duv);
    EXPECT_EQ(graev_distance(concat(u, s), concat(v, s), al), duv);
  }
}

TEST(Graev, DisplacementBound) {
  gen::Rng rng(47);
  std::size_t checked = 0;
  for (int t = 0; t < 400; ++t) {
    const auto s = rng.coin() ? gen::equilateral(2 + rng.index(3), 6, rng.uniform(1, 6))
                              : gen::space(rng, 2 + rng.index(3), rng.uniform(1, 6));
    const Grid c = rng.uniform(0, s.denominator());
    const WeightedAlphabet a(s, std::vector<Grid>(s.size(), c));
    for (const auto& phi : iso_group(s)) {
      const auto u = gen::word(rng, a.size(), 8);
      GroupWord moved = u;
      Grid bound = 0;
      for (auto& l : moved) {
        bound += a.distance(phi[l.id], l.id);
        l.id = phi[l.id];
      }
      EXPECT_LE(graev_distance(moved, u, a), bound);
      ++checked;
    }
  }
  EXPECT_GT(checked, 400u);
}

TEST(Graev, RejectsBadAlphabets) {
  GridMatrix d(2, 0);
  d(0, 1) = d(1, 0) = 1;
  const FiniteMetricSpace s({"x", "y"}, 4, d);
  EXPECT_THROW(WeightedAlphabet(s, {0, 2}), InputError);
  EXPECT_THROW(WeightedAlphabet(s, {-1, 0}), InputError);
  EXPECT_THROW(WeightedAlphabet(s, {1}), InputError);
  EXPECT_THROW(graev_norm_dp(GroupWord{{2, 1}}, WeightedAlphabet(s, {1, 1})), InputError);
}
