#include <doctest.h>

#include "support.hpp"

using namespace freelip;
using namespace freelip::testing;

namespace {

Vector<Rational> vec(std::initializer_list<Rational> xs) {
  Vector<Rational> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("molecule coordinates") {
  const ExactSpace t = pointed_triangle(Rational(3, 2));
  CHECK(molecule_vector(t, 1, 0).vector == vec({1, 0}));
  const ExactSpace line = pointed_triangle(Rational(2));
  CHECK(molecule_vector(line, 1, 2).vector == vec({Rational(1, 2), Rational(-1, 2)}));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k) {
    const ExactSpace s = random_exact_space(rng, 5, false);
    for (Index p = 0; p < 5; ++p)
      for (Index q = 0; q < 5; ++q)
        if (p != q) CHECK(molecule_vector(s, q, p).vector == -molecule_vector(s, p, q).vector);
  }
  CHECK_THROWS_AS(molecule_vector(t, 1, 1), Error);
}

TEST_CASE("free norm examples") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const ExactSpace s = random_exact_space(rng, 5, k % 2 == 0);
    CHECK(free_norm(s, Vector<Rational>::Zero(4).eval()).value == 0);
    for (Index p = 0; p < 5; ++p) {
      for (Index q = 0; q < 5; ++q) {
        if (p == q) continue;
        const Vector<Rational> u = molecule_vector(s, p, q).vector;
        CHECK(free_norm(s, u).value == 1);
        CHECK(free_norm(s, (2 * u).eval()).value == 2);
      }
    }
  }
  const ExactSpace eq = equilateral();
  try {
    free_norm(eq, Vector<Rational>::Zero(3).eval());
    FAIL("accepted wrong dimension");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("free norm equals the transport cost on a path") {
  // Points 0, 1, 3 on a line, base 0: ||j(3) - j(1)|| = 2, ||j(3) + j(1)|| = 4.
  Matrix<Rational> d(3, 3);
  d << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  const ExactSpace s = ExactSpace::create(d, {"0", "1", "3"}, 0);
  CHECK(free_norm(s, vec({-1, 1})).value == 2);
  CHECK(free_norm(s, vec({1, 1})).value == 4);
  CHECK(free_norm(s, vec({Rational(1, 2), -3})).value == Rational(17, 2));
}

TEST_CASE("free norm is a norm and its witness is optimal") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 15; ++k) {
    const ExactSpace s = random_exact_space(rng, 6, k % 2 == 1);
    const Vector<Rational> a = random_function<Rational>(rng, 5);
    const Vector<Rational> b = random_function<Rational>(rng, 5);
    const FreeNorm<Rational> na = free_norm(s, a);
    const Rational nb = free_norm(s, b).value;
    CHECK(free_norm(s, (a + b).eval()).value <= na.value + nb);
    CHECK(free_norm(s, (Rational(-3, 2) * a).eval()).value == Rational(3, 2) * na.value);
    if (a != Vector<Rational>::Zero(5)) CHECK(na.value > 0);

    // The witness is 1-Lipschitz, vanishes at the base and attains the norm.
    const Vector<Rational>& f = na.witness;
    CHECK(f(s.base()) == 0);
    CHECK(lipschitz_constant(s, f) <= 1);
    const auto coords = coordinate_points(s);
    Rational pairing = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) pairing += a(static_cast<Index>(i)) * f(coords[i]);
    CHECK(pairing == na.value);
  }
}

TEST_CASE("the molecules norm the Lipschitz ball") {
  // L(f) = max over molecules of <u_xy, f>, so the hull's support function is
  // the Lipschitz norm.
  std::mt19937_64 rng(4);
  for (int k = 0; k < 15; ++k) {
    const ExactSpace s = random_exact_space(rng, 5, k % 2 == 0);
    Vector<Rational> f = random_function<Rational>(rng, 5);
    f.array() -= f(s.base());
    const auto coords = coordinate_points(s);
    Vector<Rational> fc(4);
    for (std::size_t i = 0; i < coords.size(); ++i) fc(static_cast<Index>(i)) = f(coords[i]);
    Rational best = 0;
    for (Index p = 0; p < 5; ++p)
      for (Index q = 0; q < 5; ++q)
        if (p != q) best = std::max(best, Rational(molecule_vector(s, p, q).vector.dot(fc)));
    CHECK(best == lipschitz_constant(s, f));
  }
}

TEST_CASE("is_vertex examples") {
  const ExactSpace line = pointed_triangle(Rational(2));
  const auto ab = is_vertex(line, 1, 2);
  CHECK_FALSE(ab.vertex);
  // u_ab = 1/2 u_ae + 1/2 u_eb.
  Vector<Rational> combo = Vector<Rational>::Zero(2);
  for (const auto& [pair, w] : ab.weights) {
    CHECK(w > 0);
    combo += w * molecule_vector(line, pair.first, pair.second).vector;
  }
  CHECK(combo == molecule_vector(line, 1, 2).vector);
  CHECK(combo == vec({Rational(1, 2), Rational(-1, 2)}));

  const auto ea = is_vertex(line, 0, 1);
  CHECK(ea.vertex);
  const Vector<Rational> target = molecule_vector(line, 0, 1).vector;
  for (Index x = 0; x < 3; ++x) {
    for (Index y = 0; y < 3; ++y) {
      if (x == y || (x == 0 && y == 1)) continue;
      CHECK(ea.functional.dot(target) - ea.margin >= ea.functional.dot(molecule_vector(line, x, y).vector));
    }
  }

  const ExactSpace eq = pointed_triangle(Rational(1));
  for (Index p = 0; p < 3; ++p)
    for (Index q = 0; q < 3; ++q)
      if (p != q) CHECK(is_vertex(eq, p, q).vertex);
}

TEST_CASE("oracle refuses float spaces and large spaces") {
  const FloatSpace f = euclidean_space(Matrix<Rational>::Identity(3, 3), {"a", "b", "c"}, 0);
  try {
    is_vertex(f, 0, 1);
    FAIL("float oracle");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::float_mode_unsupported);
  }
  std::mt19937_64 rng(5);
  const ExactSpace big = random_exact_space(rng, 13, false);
  try {
    is_vertex(big, 0, 1);
    FAIL("oversized oracle");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::oracle_unavailable);
  }
  CHECK_NOTHROW(is_vertex(big, 0, 1, OracleOptions{13}));
}

TEST_CASE("decomposition examples") {
  const ExactSpace mid = middle_point();
  const auto r = decomposition_check(mid, 0, 1, 2);
  CHECK(r.identity_holds);
  CHECK(r.convex);
  CHECK(r.coefficient_pr == Rational(1, 2));
  CHECK(r.coefficient_rq == Rational(1, 2));

  const ExactSpace t = pointed_triangle(Rational(1));
  const auto e = decomposition_check(t, 1, 2, 0);
  CHECK(e.identity_holds);
  CHECK_FALSE(e.convex);
  CHECK(e.coefficient_sum == 2);

  try {
    decomposition_check(t, 1, 2, 2);
    FAIL("not distinct");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::not_distinct);
  }
}

TEST_CASE("decomposition coefficient law on random spaces") {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 20; ++k) {
    const ExactSpace s = random_exact_space(rng, 5, k % 2 == 0);
    for (Index p = 0; p < 5; ++p)
      for (Index q = 0; q < 5; ++q)
        for (Index r = 0; r < 5; ++r) {
          if (p == q || q == r || p == r) continue;
          const auto rep = decomposition_check(s, p, q, r);
          CHECK(rep.identity_holds);
          CHECK(rep.coefficient_sum == 1 + excess(s, r, p, q) / s.d(p, q));
          CHECK(rep.convex == lies_between(s, r, p, q));
        }
  }
}
