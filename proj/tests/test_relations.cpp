#include <gtest/gtest.h>

#include "support.hpp"

using namespace urysohn;

namespace {

FiniteMetricSpace two(Grid q, Grid d) {
  GridMatrix m(2, 0);
  m(0, 1) = m(1, 0) = d;
  return FiniteMetricSpace({"a", "b"}, q, m);
}

BoolMatrix full(std::size_t n) { return BoolMatrix(n, 1); }

std::vector<std::vector<std::size_t>> subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> f;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) f.push_back(i);
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST(Carrier, Examples) {
  const FiniteMetricSpace one({"o"}, 2, GridMatrix(1, 0));
  EXPECT_EQ(enumerate_K(one).size(), 3u);
  EXPECT_EQ(enumerate_K(two(2, 1)).size(), 7u);
  const auto k = enumerate_K(two(4, 2));
  EXPECT_TRUE(k.find(point_function(k.space(), 0)).has_value());
  EXPECT_TRUE(k.find(point_function(k.space(), 1)).has_value());
  EXPECT_THROW(k.index_of({0, 3}), InputError);
  EXPECT_THROW(enumerate_K(gen::equilateral(6, 10, 10), 1000), GuardRefusal);
}

TEST(Carrier, MatchesFilteringOracle) {
  gen::Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    const auto m = gen::space(rng, 1 + rng.index(4), rng.uniform(1, 5));
    EXPECT_EQ(enumerate_K(m).members(), oracle::carrier(m));
  }
}

TEST(Action, Examples) {
  const auto m = two(4, 2);
  const Permutation swap{1, 0};
  EXPECT_EQ(act(m, identity_permutation(2), {1, 3}), (std::vector<Grid>{1, 3}));
  EXPECT_EQ(act(m, swap, point_function(m, 0)), point_function(m, 1));
  EXPECT_THROW(act(two(4, 2), Permutation{0, 0}, {1, 1}), InputError);
}

TEST(Action, ActionLawOnTheTriangle) {
  const auto m = gen::equilateral(3, 4, 2);
  const auto k = enumerate_K(m);
  const auto group = iso_group(m);
  ASSERT_EQ(group.size(), 6u);
  for (const auto& g : group)
    for (const auto& h : group)
      for (const auto& f : k.members()) {
        // (gh)(x) = g(h(x)).
        Permutation gh(3);
        for (std::size_t x = 0; x < 3; ++x) gh[x] = g[h[x]];
        EXPECT_EQ(act(m, gh, f), act(m, g, act(m, h, f)));
      }
}

TEST(JEmbed, MorphismLaws) {
  for (const auto& m : {two(2, 1), two(3, 2), gen::equilateral(3, 2, 1)}) {
    const auto k = enumerate_K(m);
    const auto group = iso_group(m);
    EXPECT_EQ(j_embed(k, identity_permutation(m.size())), diagonal(k.size()));
    for (const auto& g : group) {
      const auto jg = j_embed(k, g);
      EXPECT_EQ(invert(jg), j_embed(k, inverse(g)));
      EXPECT_EQ(H_of(k, jg), embed_isometry(m, g));
      for (const auto& h : group) {
        Permutation gh(m.size());
        for (std::size_t x = 0; x < m.size(); ++x) gh[x] = g[h[x]];
        const auto jgh = compose(jg, j_embed(k, h));
        EXPECT_EQ(jgh, j_embed(k, gh));
        EXPECT_EQ(H_of(k, jgh), product(m, embed_isometry(m, g), embed_isometry(m, h)));
      }
    }
  }
  const auto m = two(2, 1);
  const auto k = enumerate_K(m);
  const auto js = j_embed(k, Permutation{1, 0});
  EXPECT_EQ(compose(js, js), diagonal(k.size()));
}

TEST(H, Examples) {
  const auto m = two(4, 2);
  const auto k = enumerate_K(m);
  EXPECT_EQ(H_of(k, diagonal(k.size())), m.distances());
  EXPECT_EQ(H_of(k, full(k.size())), constant_matrix(m, 4));
  EXPECT_THROW(H_of(k, BoolMatrix(k.size(), 0)), InputError);
  EXPECT_THROW(H_of(k, BoolMatrix(2, 1)), InputError);
}

TEST(H, AgreesWithDefinitionOnRandomRelations) {
  gen::Rng rng(72);
  const auto m = two(3, 2);
  const auto k = enumerate_K(m);
  for (int t = 0; t < 200; ++t) {
    BoolMatrix r(k.size(), 0);
    for (auto& v : r.data()) v = rng.index(8) == 0;
    if (is_empty(r)) continue;
    GridMatrix want(2, 0);
    for (std::size_t a = 0; a < k.size(); ++a)
      for (std::size_t b = 0; b < k.size(); ++b)
        if (r(a, b))
          for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y)
              want(x, y) = std::max(want(x, y), std::abs(k.member(b)[x] - k.member(a)[y]));
    EXPECT_EQ(H_of(k, r), want);
  }
}

TEST(Hinv, Examples) {
  const auto m = two(4, 2);
  const auto k = enumerate_K(m);
  EXPECT_EQ(Hinv_of(k, constant_matrix(m, 4)), full(k.size()));
  const auto rd = Hinv_of(k, m.distances());
  EXPECT_TRUE(contains_all(rd, diagonal(k.size())));
  EXPECT_EQ(H_of(k, rd), m.distances());
  EXPECT_THROW(Hinv_of(k, constant_matrix(m, 0)), InputError);
}

TEST(Hinv, RoundTripExhaustiveOnTwoPoints) {
  for (Grid q : {2, 3})
    for (Grid d = 1; d <= q; ++d) {
      const auto m = two(q, d);
      const auto k = enumerate_K(m);
      std::size_t seen = 0;
      for (const auto& f : enumerate_bi_katetov(m)) {
        EXPECT_EQ(H_of(k, Hinv_of(k, f)), f);
        ++seen;
      }
      EXPECT_GT(seen, 0u);
    }
}

TEST(Hinv, RoundTripOnRandomThreePointSpaces) {
  gen::Rng rng(73);
  for (int t = 0; t < 30; ++t) {
    const auto m = gen::space(rng, 3, rng.uniform(1, 4));
    const auto k = enumerate_K(m);
    const auto f = gen::bi_katetov(rng, m);
    EXPECT_EQ(H_of(k, Hinv_of(k, f)), f);
  }
}

TEST(Hinv, WitnessPairAttainsTheColumn) {
  gen::Rng rng(74);
  for (int t = 0; t < 2000; ++t) {
    const auto m = gen::space(rng, 1 + rng.index(5), rng.uniform(1, 8));
    const auto f = gen::bi_katetov(rng, m);
    const std::size_t y0 = rng.index(m.size());
    const auto [p, r] = roundtrip_witness(m, f, y0);
    for (const auto& g : {p, r}) {
      for (std::size_t x = 0; x < m.size(); ++x) EXPECT_TRUE(g[x] >= 0 && g[x] <= m.denominator());
      for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = 0; y < m.size(); ++y) EXPECT_LE(std::abs(g[x] - g[y]), m.d(x, y));
    }
    for (std::size_t x = 0; x < m.size(); ++x) {
      EXPECT_EQ(std::abs(r[x] - p[y0]), f(x, y0));
      for (std::size_t y = 0; y < m.size(); ++y) EXPECT_LE(std::abs(r[x] - p[y]), f(x, y));
    }
  }
}

TEST(RF, MatchesHinvOfBF) {
  for (const auto& m : {two(2, 1), two(2, 2), gen::equilateral(3, 2, 1)}) {
    const auto k = enumerate_K(m);
    for (const auto& f : subsets(m.size())) EXPECT_EQ(Hinv_of(k, idempotent_bF(m, f)), R_F(k, f));
  }
}

TEST(RF, IsAnEquivalenceRelation) {
  const auto m = gen::equilateral(3, 2, 1);
  const auto k = enumerate_K(m);
  for (const auto& f : subsets(3)) {
    const auto r = R_F(k, f);
    EXPECT_TRUE(contains_all(r, diagonal(k.size())));
    EXPECT_EQ(invert(r), r);
    EXPECT_TRUE(contains_all(r, compose(r, r)));
  }
  EXPECT_THROW(R_F(k, std::vector<std::size_t>{3}), InputError);
}

TEST(H, MorphismOnHinvImages) {
  gen::Rng rng(75);
  for (int t = 0; t < 100; ++t) {
    const auto m = gen::space(rng, 2, rng.uniform(1, 3));
    const auto k = enumerate_K(m);
    const auto f = gen::bi_katetov(rng, m), g = gen::bi_katetov(rng, m);
    EXPECT_EQ(H_of(k, compose(Hinv_of(k, f), Hinv_of(k, g))), product(m, f, g));
  }
}
