#pragma once

// Exact grid arithmetic. Every distance is an integer numerator over a
// denominator shared by the whole space, so all comparisons are exact.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "urysohn/error.hpp"

namespace urysohn {

/// Numerator of a grid value; the denominator is carried by the owning space.
using Grid = std::int64_t;

/// Truncated addition on the grid: min(a + b, q).
constexpr Grid uplus(Grid a, Grid b, Grid q) noexcept { return std::min(a + b, q); }

inline Grid lcm_denominator(Grid a, Grid b) {
  if (a <= 0 || b <= 0) throw InputError("denominators must be positive");
  return std::lcm(a, b);
}

/// A rational value num/den printed without reduction, e.g. "2/10".
struct Fraction {
  Grid num = 0;
  Grid den = 1;

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num * b.den == b.num * a.den;
  }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.str(); }
};

/// Dense row-major square matrix with value semantics.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  SquareMatrix transposed() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;
  friend auto operator<=>(const SquareMatrix& a, const SquareMatrix& b) {
    return a.data_ <=> b.data_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using GridMatrix = SquareMatrix<Grid>;

/// Entrywise a <= b.
template <typename T>
bool dominated_by(const SquareMatrix<T>& a, const SquareMatrix<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (a.data()[k] > b.data()[k]) return false;
  return true;
}

/// Bounded min-plus product: (a * b)(x, y) = min over z of min(a(x,z) + b(z,y), cap).
template <typename T>
SquareMatrix<T> bounded_min_plus(const SquareMatrix<T>& a, const SquareMatrix<T>& b, T cap) {
  const std::size_t n = a.size();
  SquareMatrix<T> out(n, cap);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z) {
      const T axz = a(x, z);
      if (axz >= cap) continue;
      for (std::size_t y = 0; y < n; ++y) {
        const T v = axz + b(z, y);
        if (v < out(x, y)) out(x, y) = v;
      }
    }
  return out;
}

}  // namespace urysohn
