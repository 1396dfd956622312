#include <doctest.h>

#include "freelip/lp.hpp"

using namespace freelip;

namespace {

using LP = LinearProgram<Rational>;

Vector<Rational> vec(std::initializer_list<Rational> xs) {
  Vector<Rational> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("two-variable maximization with a rational optimum") {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3: optimum (3, 1), value 11.
  LP lp(2);
  lp.add_constraint(vec({1, 1}), LP::Sense::le, 4);
  lp.add_constraint(vec({1, 3}), LP::Sense::le, 6);
  lp.add_constraint(vec({1, 0}), LP::Sense::le, 3);
  lp.set_objective(vec({3, 2}));
  const auto r = lp.maximize();
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == 11);
  CHECK(r.x(0) == 3);
  CHECK(r.x(1) == 1);
}

TEST_CASE("fractional vertex") {
  // max x + y  s.t. 2x + y <= 2, x + 3y <= 3: optimum (3/5, 4/5).
  LP lp(2);
  lp.add_constraint(vec({2, 1}), LP::Sense::le, 2);
  lp.add_constraint(vec({1, 3}), LP::Sense::le, 3);
  lp.set_objective(vec({1, 1}));
  const auto r = lp.maximize();
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == Rational(7, 5));
  CHECK(r.x(0) == Rational(3, 5));
  CHECK(r.x(1) == Rational(4, 5));
}

TEST_CASE("minimization with >= and = rows") {
  // min x + 2y + 3z  s.t. x + y + z = 1, y + z >= 1/2: optimum y = 1/2, x = 1/2, value 3/2.
  LP lp(3);
  lp.add_constraint(vec({1, 1, 1}), LP::Sense::eq, 1);
  lp.add_constraint(vec({0, 1, 1}), LP::Sense::ge, Rational(1, 2));
  lp.set_objective(vec({1, 2, 3}));
  const auto r = lp.minimize();
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == Rational(3, 2));
  CHECK(r.x(1) == Rational(1, 2));
}

TEST_CASE("free variables and negative right-hand sides") {
  // max -x  s.t. x >= -5 written as -x <= 5, x free: optimum x = -5.
  LP lp(1);
  lp.set_free(0);
  lp.add_constraint(vec({-1}), LP::Sense::le, 5);
  lp.set_objective(vec({-1}));
  const auto r = lp.maximize();
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x(0) == -5);
  CHECK(r.value == 5);

  // x + y <= -1 with x, y >= 0 is infeasible.
  LP bad(2);
  bad.add_constraint(vec({1, 1}), LP::Sense::le, -1);
  CHECK(bad.maximize().status == LpStatus::infeasible);
}

TEST_CASE("infeasible and unbounded programs") {
  LP inf(1);
  inf.add_constraint(vec({1}), LP::Sense::le, 1);
  inf.add_constraint(vec({1}), LP::Sense::ge, 2);
  CHECK(inf.maximize().status == LpStatus::infeasible);

  LP unb(2);
  unb.add_constraint(vec({1, -1}), LP::Sense::le, 1);
  unb.set_objective(vec({1, 0}));
  CHECK(unb.maximize().status == LpStatus::unbounded);
}

TEST_CASE("redundant equalities are dropped after phase one") {
  LP lp(2);
  lp.add_constraint(vec({1, 1}), LP::Sense::eq, 2);
  lp.add_constraint(vec({2, 2}), LP::Sense::eq, 4);
  lp.set_objective(vec({1, 0}));
  const auto r = lp.maximize();
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == 2);
}

TEST_CASE("Beale's cycling example terminates under Bland's rule") {
  // Degenerate program on which the largest-coefficient rule cycles.
  LP lp(4);
  lp.add_constraint(vec({Rational(1, 4), -8, -1, 9}), LP::Sense::le, 0);
  lp.add_constraint(vec({Rational(1, 2), -12, Rational(-1, 2), 3}), LP::Sense::le, 0);
  lp.add_constraint(vec({0, 0, 1, 0}), LP::Sense::le, 1);
  lp.set_objective(vec({Rational(3, 4), -20, Rational(1, 2), -6}));
  const auto r = lp.maximize();
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == Rational(5, 4));
}

TEST_CASE("double arithmetic agrees on a well-conditioned program") {
  LinearProgram<double> lp(2);
  Vector<double> a(2), b(2), c(2);
  a << 2, 1;
  b << 1, 3;
  c << 1, 1;
  lp.add_constraint(a, LinearProgram<double>::Sense::le, 2);
  lp.add_constraint(b, LinearProgram<double>::Sense::le, 3);
  lp.set_objective(c);
  const auto r = lp.maximize();
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == doctest::Approx(1.4));
}

TEST_CASE("dimension checks") {
  LP lp(2);
  CHECK_THROWS_AS(lp.add_constraint(vec({1}), LP::Sense::le, 1), Error);
  CHECK_THROWS_AS(lp.set_objective(vec({1, 2, 3})), Error);
}
