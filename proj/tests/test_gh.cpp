#include <gtest/gtest.h>

#include "support.hpp"

using namespace urysohn;

namespace {

FiniteMetricSpace two(Grid q, Grid d) {
  GridMatrix m(2, 0);
  m(0, 1) = m(1, 0) = d;
  return FiniteMetricSpace({"a", "b"}, q, m);
}

/// Least t over 2q such that setting every cross distance to t admits a
/// pseudometric on the union: the union matrix is filled in with the largest
/// cross values d(x_i, y_j) allowed by the triangle inequality through the
/// matched pairs, then checked directly.
Grid gh_oracle(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  const std::size_t n = x.size();
  const Grid q2 = 2 * x.denominator();
  for (Grid t = 0; t <= q2; ++t) {
    GridMatrix u(2 * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        u(i, j) = 2 * x.d(i, j);
        u(n + i, n + j) = 2 * y.d(i, j);
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Grid v = q2;
        for (std::size_t k = 0; k < n; ++k) v = std::min(v, u(i, k) + t + u(n + k, n + j));
        u(i, n + j) = u(n + j, i) = v;
      }
    for (std::size_t i = 0; i < n; ++i)
      if (u(i, n + i) > t) u(i, n + i) = u(n + i, i) = t;
    if (oracle::pseudometric(u, q2)) return t;
  }
  return -1;
}

EnumeratedInstance random_instance(gen::Rng& rng, std::size_t n, Grid q) {
  return EnumeratedInstance(gen::space(rng, n, q), gen::space(rng, n, q));
}

}  // namespace

TEST(GH, FormulaExamples) {
  const EnumeratedInstance same(two(10, 4), two(10, 4));
  EXPECT_EQ(gh_en_formula(same).num, 0);
  const EnumeratedInstance inst(two(10, 4), two(10, 8));
  const auto v = gh_en_formula(inst);
  EXPECT_EQ(v.str(), "2/10");
  EXPECT_EQ(gh_en_oracle(inst).value, v);
}

TEST(GH, HalfGridPrinting) {
  EXPECT_EQ((HalfGrid{3, 10}).str(), "3/20");
  EXPECT_EQ((HalfGrid{4, 10}).str(), "2/10");
  EXPECT_EQ((HalfGrid{0, 10}).str(), "0/10");
}

TEST(GH, RejectsSizeMismatch) {
  EXPECT_THROW(EnumeratedInstance(two(2, 1), gen::equilateral(3, 2, 1)), InputError);
}

TEST(GH, MixedGridsAreBroughtTogether) {
  const EnumeratedInstance inst(two(2, 1), two(3, 1));
  EXPECT_EQ(inst.denominator(), 6);
  EXPECT_EQ(gh_en_formula(inst).fraction().str(), "1/12");
}

TEST(GH, OracleReportsTheContractionBelowTheValue) {
  const EnumeratedInstance inst(two(10, 4), two(10, 8));
  const auto r = gh_en_oracle(inst);
  ASSERT_TRUE(r.below.has_value());
  EXPECT_LT(r.below->contracted, r.below->original);
  const EnumeratedInstance same(two(10, 4), two(10, 4));
  EXPECT_FALSE(gh_en_oracle(same).below.has_value());
}

TEST(GH, FormulaMatchesLibraryAndIndependentOracles) {
  gen::Rng rng(61);
  for (int t = 0; t < 1000; ++t) {
    const auto inst = random_instance(rng, 1 + rng.index(6), rng.uniform(1, 20));
    const auto f = gh_en_formula(inst);
    EXPECT_EQ(gh_en_oracle(inst).value, f);
    EXPECT_EQ(gh_oracle(inst.x, inst.y), f.num);
    EXPECT_EQ(gh_en_formula(EnumeratedInstance(inst.y, inst.x)), f);
  }
}

TEST(GH, EveryFeasibleCrossValueIsAtLeastTheFormula) {
  gen::Rng rng(62);
  for (int t = 0; t < 300; ++t) {
    const auto inst = random_instance(rng, 2 + rng.index(4), rng.uniform(1, 10));
    const Grid f = gh_en_formula(inst).num;
    for (Grid c = 0; c < f; ++c) EXPECT_TRUE(detail::gh_contraction_at(inst, c).has_value());
    EXPECT_FALSE(detail::gh_contraction_at(inst, f).has_value());
  }
}

TEST(Realize, Examples) {
  const auto s = gen::equilateral(3, 2, 1);
  const std::vector<std::size_t> anchors{0, 1};
  const auto sub = s.subspace(anchors);
  const auto same = realize_in_space(s, anchors, sub, 0);
  ASSERT_TRUE(same.has_value());
  EXPECT_EQ(*same, anchors);
  // Distance 2 between the two targets does not occur in s.
  const auto far = realize_in_space(s, anchors, two(2, 2), 1);
  EXPECT_FALSE(far.has_value());
  EXPECT_THROW(realize_in_space(s, anchors, two(2, 2), 0), InputError);
}

TEST(Realize, SinglePointTargetsInAClosedApproximant) {
  const FiniteMetricSpace seed({"o"}, 2, GridMatrix(1, 0));
  const auto a = build_approximant(seed, {});
  ASSERT_EQ(a.status, ApproximantStatus::closed);
  const FiniteMetricSpace point({"t"}, 2, GridMatrix(1, 0));
  for (std::size_t x = 0; x < a.space.size(); ++x)
    for (Grid eps = 0; eps <= 2; ++eps) {
      const auto c = realize_in_space(a.space, {x}, point, eps);
      ASSERT_TRUE(c.has_value());
      EXPECT_LE(a.space.d(x, (*c)[0]), eps);
    }
}

TEST(Realize, PairTargetsInAClosedApproximant) {
  const FiniteMetricSpace seed({"o"}, 2, GridMatrix(1, 0));
  const auto a = build_approximant(seed, {});
  ASSERT_EQ(a.status, ApproximantStatus::closed);
  gen::Rng rng(63);
  std::size_t found = 0;
  for (int t = 0; t < 300; ++t) {
    const std::vector<std::size_t> anchors{rng.index(a.space.size()), rng.index(a.space.size())};
    const Grid target = rng.uniform(1, 2);
    const Grid gap = std::abs(a.space.d(anchors[0], anchors[1]) - target);
    const Grid eps = (gap + 1) / 2 + rng.uniform(0, 1);
    const auto c = realize_in_space(a.space, anchors, two(2, target), eps);
    if (!c) continue;
    ++found;
    EXPECT_EQ(a.space.d((*c)[0], (*c)[1]), target);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(a.space.d(anchors[i], (*c)[i]), eps);
  }
  EXPECT_GT(found, 0u);
}
