#pragma once

#include <random>
#include <string>
#include <vector>

#include "freelip/io.hpp"

namespace freelip::testing {

inline ExactSpace equilateral() {
  Matrix<Rational> d(3, 3);
  d << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  return ExactSpace::create(d, {"a", "b", "c"}, 0);
}

// d(a,b) = 2 = d(a,c) + d(c,b).
inline ExactSpace middle_point() {
  Matrix<Rational> d(3, 3);
  d << 0, 2, 1, 2, 0, 1, 1, 1, 0;
  return ExactSpace::create(d, {"a", "b", "c"}, 0);
}

// {e, a, b} with d(e,a) = d(e,b) = 1 and the given d(a,b).
inline ExactSpace pointed_triangle(const Rational& dab) {
  Matrix<Rational> d(3, 3);
  d << 0, 1, 1, 1, 0, dab, 1, dab, 0;
  return ExactSpace::create(d, {"e", "a", "b"}, 0);
}

inline std::vector<std::string> numbered_labels(Index n, const std::string& prefix = "x") {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

/// Shortest-path metric of a complete graph with random weights a/b,
/// a in 1..12, b in 1..4. With `inject`, a random triple (i, k, j) gets the
/// minimal weight 1/4 on ik and kj and a heavy weight on ij, which forces
/// d(i,j) = d(i,k) + d(k,j).
inline ExactSpace random_exact_space(std::mt19937_64& rng, Index n, bool inject) {
  std::uniform_int_distribution<int> num(1, 12), den(1, 4);
  Matrix<Rational> w(n, n);
  for (Index i = 0; i < n; ++i) {
    w(i, i) = 0;
    for (Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = Rational(Integer(num(rng)), Integer(den(rng)));
  }
  if (inject && n >= 3) {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    const Index i = idx[0], k = idx[1], j = idx[2];
    w(i, k) = w(k, i) = Rational(1, 4);
    w(k, j) = w(j, k) = Rational(1, 4);
    w(i, j) = w(j, i) = 100;
  }
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (w(i, k) + w(k, j) < w(i, j)) w(i, j) = w(i, k) + w(k, j);
  std::uniform_int_distribution<Index> base(0, n - 1);
  return ExactSpace::create(w, numbered_labels(n), base(rng));
}

/// Random planar point cloud with small-integer coordinates, Euclidean
/// distances in float mode.
inline FloatSpace random_euclidean_space(std::mt19937_64& rng, Index n) {
  std::uniform_int_distribution<int> coord(-20, 20);
  for (;;) {
    Matrix<Rational> c(n, 2);
    for (Index i = 0; i < n; ++i) {
      c(i, 0) = coord(rng);
      c(i, 1) = coord(rng);
    }
    bool distinct = true;
    for (Index i = 0; i < n && distinct; ++i)
      for (Index j = i + 1; j < n && distinct; ++j) distinct = c.row(i) != c.row(j);
    if (distinct) return euclidean_space(c, numbered_labels(n), 0);
  }
}

template <class Scalar>
Vector<Scalar> random_function(std::mt19937_64& rng, Index n) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 6);
  Vector<Scalar> g(n);
  for (Index i = 0; i < n; ++i) {
    const Rational r(Integer(num(rng)), Integer(den(rng)));
    if constexpr (is_exact_v<Scalar>) {
      g(i) = r;
    } else {
      g(i) = to_double(r);
    }
  }
  return g;
}

}  // namespace freelip::testing
