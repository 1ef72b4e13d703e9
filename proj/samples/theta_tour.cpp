// Walks through the bi-Katetov semigroup of a two-point space: isometry
// embeddings, the idempotents b_F, and the geometric reading of the product.

#include <iostream>
#include <vector>

#include "urysohn.hpp"

using namespace urysohn;

namespace {

void print(const char* label, const FiniteMetricSpace& m, const GridMatrix& f) {
  std::cout << label << '\n';
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::cout << "  ";
    for (std::size_t j = 0; j < f.size(); ++j) std::cout << Fraction{f(i, j), m.denominator()} << ' ';
    std::cout << '\n';
  }
}

}  // namespace

int main() {
  const FiniteMetricSpace m({"a", "b"}, 4, GridMatrix(2, 2));
  GridMatrix d = m.distances();
  print("d", m, d);

  for (const auto& g : iso_group(m)) print(g[0] == 0 ? "i(id)" : "i(swap)", m, embed_isometry(m, g));

  for (const auto& c : classify_idempotents(m)) {
    std::cout << "idempotent with zero set of size " << c.zero_set.size()
              << (c.equals_bF ? ", equal to b_F" : ", NOT b_F") << '\n';
    print("  p", m, c.p);
  }

  const std::vector<std::size_t> f_set{0};
  const GridMatrix b = idempotent_bF(m, f_set);
  const GridMatrix swap = embed_isometry(m, {1, 0});
  print("b_{a} * i(swap)", m, product(m, b, swap));
  print("same product through the three-copy amalgam", m, product_via_amalgam(m, b, swap));
}
