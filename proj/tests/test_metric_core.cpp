#include <doctest.h>

#include "support.hpp"

using namespace freelip;
using namespace freelip::testing;

TEST_CASE("validate accepts the equilateral triangle") {
  const ExactSpace s = equilateral();
  CHECK(s.size() == 3);
  CHECK(s.label(s.base()) == "a");
}

TEST_CASE("validate reports each broken axiom") {
  using K = Violation<Rational>::Kind;
  auto kinds = [](const Matrix<Rational>& d, std::vector<std::string> labels, Index base = 0) {
    std::vector<K> out;
    for (const auto& v : find_violations(d, labels, base)) out.push_back(v.kind);
    return out;
  };
  Matrix<Rational> tri(3, 3);
  tri << 0, 3, 1, 3, 0, 1, 1, 1, 0;
  const auto v = find_violations(tri, {"a", "b", "c"}, 0);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == K::triangle);
  CHECK(v[0].deficit == 1);
  CHECK_THROWS_AS(ExactSpace::create(tri, {"a", "b", "c"}, 0), ValidationError<Rational>);

  Matrix<Rational> asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK(kinds(asym, {"a", "b"}) == std::vector<K>{K::asymmetric});
  Matrix<Rational> neg(2, 2);
  neg << 0, -1, -1, 0;
  CHECK(kinds(neg, {"a", "b"}) == std::vector<K>{K::negative_distance});
  Matrix<Rational> zero(2, 2);
  zero << 0, 0, 0, 0;
  CHECK(kinds(zero, {"a", "b"}) == std::vector<K>{K::zero_distance_distinct_points});
  Matrix<Rational> diag(2, 2);
  diag << 1, 1, 1, 0;
  CHECK(kinds(diag, {"a", "b"}) == std::vector<K>{K::nonzero_diagonal});
  Matrix<Rational> ok(2, 2);
  ok << 0, 1, 1, 0;
  CHECK(kinds(ok, {"a", "a"}) == std::vector<K>{K::duplicate_label});
  CHECK(kinds(ok, {"a", "b"}, 5) == std::vector<K>{K::base_out_of_range});
  CHECK_THROWS_AS(find_violations(ok, {"a"}, 0), Error);
}

TEST_CASE("float validation tolerates rounding but not real violations") {
  Matrix<double> d(3, 3);
  d << 0, 2 + 1e-12, 1, 2 + 1e-12, 0, 1, 1, 1, 0;
  CHECK_NOTHROW(FloatSpace::create(d, {"a", "b", "c"}, 0));
  d(0, 1) = d(1, 0) = 2.001;
  CHECK_THROWS_AS(FloatSpace::create(d, {"a", "b", "c"}, 0), ValidationError<double>);
}

TEST_CASE("snowflaking back the l2 example breaks the triangle inequality") {
  // Raising the l2 example's distances to the power 1/alpha = 3/2 undoes a
  // would-be Hoelder transform; lambda_2 = 5/4 < 3/2 makes it non-metric.
  const FloatSpace l2 = gen_l2_nonholder(dyadic_l2_sequences(4), 4);
  Matrix<double> d = l2.distances().unaryExpr([](double x) { return std::pow(x, 1.5); });
  try {
    FloatSpace::create(d, l2.labels(), 0);
    FAIL("no violation");
  } catch (const ValidationError<double>& e) {
    bool found = false;
    for (const auto& v : e.violations()) {
      found = found || (v.kind == Violation<double>::Kind::triangle && v.i == 0 && v.j == 1 && v.k == 2);
    }
    CHECK(found);
  }
}

TEST_CASE("excess examples") {
  const ExactSpace eq = equilateral();
  CHECK(excess(eq, 2, 0, 1) == 1);
  CHECK(excess(eq, 0, 0, 1) == 0);
  CHECK_THROWS_AS(excess(eq, 2, 1, 1), Error);
  const ExactSpace c0 = gen_c0_counterexample(12);
  const Index p = c0.index_of("p"), e = c0.index_of("e");
  for (int n = 2; n <= 12; ++n) CHECK(excess(c0, c0.index_of("q" + std::to_string(n)), p, e) == Rational(2, n));
}

TEST_CASE("segment and aligned triples examples") {
  const ExactSpace eq = equilateral();
  CHECK(metric_segment(eq, 0, 1) == std::vector<Index>{0, 1});
  CHECK(aligned_triples(eq).empty());
  const ExactSpace mid = middle_point();
  CHECK(metric_segment(mid, 0, 1) == std::vector<Index>{0, 1, 2});
  const auto t = aligned_triples(mid);
  REQUIRE(t.size() == 1);
  CHECK(t[0].middle == 2);
  CHECK(t[0].end1 == 0);
  CHECK(t[0].end2 == 1);
}

TEST_CASE("metric_segment matches the defining filter on random spaces") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const ExactSpace s = random_exact_space(rng, 7, trial % 2 == 0);
    for (Index p = 0; p < 7; ++p) {
      for (Index q = 0; q < 7; ++q) {
        if (p == q) continue;
        std::vector<Index> brute;
        for (Index r = 0; r < 7; ++r)
          if (s.d(r, p) + s.d(r, q) == s.d(p, q)) brute.push_back(r);
        CHECK(metric_segment(s, p, q) == brute);
      }
    }
  }
}

TEST_CASE("concavity modulus examples") {
  const ExactSpace eq = equilateral();
  const auto t = concavity_modulus(eq, 0, 1, {Rational(1, 2)});
  REQUIRE(t.entries.size() == 1);
  CHECK(*t.entries[0].delta == 1);
  CHECK(*t.entries[0].witness == 2);

  const auto far = concavity_modulus(eq, 0, 1, {Rational(2)});
  CHECK_FALSE(far.entries[0].delta.has_value());

  const ExactSpace mid = middle_point();
  CHECK(*concavity_modulus(mid, 0, 1, {Rational(1, 2)}).entries[0].delta == 0);

  for (int n : {4, 10, 20}) {
    const ExactSpace c0 = gen_c0_counterexample(n);
    const auto m = concavity_modulus(c0, c0.index_of("p"), c0.index_of("e"), {Rational(1, 2)});
    CHECK(*m.entries[0].delta == Rational(2, n));
    CHECK(c0.label(*m.entries[0].witness) == "q" + std::to_string(n));
  }
  CHECK_THROWS_AS(concavity_modulus(eq, 0, 1, std::vector<Rational>{}), Error);
  CHECK_THROWS_AS(concavity_modulus(eq, 0, 1, {Rational(0)}), Error);
  CHECK_THROWS_AS(concavity_modulus(eq, 1, 1, {Rational(1)}), Error);
}

TEST_CASE("Hoelder transform of {0,1,4}") {
  Matrix<Rational> d(3, 3);
  d << 0, 1, 4, 1, 0, 3, 4, 3, 0;
  const ExactSpace line = ExactSpace::create(d, {"0", "1", "4"}, 0);
  CHECK(aligned_triples(line).size() == 1);
  const FloatSpace h = holder_transform(line, Rational(1, 2));
  CHECK(h.d(0, 2) == doctest::Approx(2.0));
  CHECK(h.d(0, 1) == doctest::Approx(1.0));
  CHECK(h.d(1, 2) == doctest::Approx(1.7320508075688772));
  CHECK(aligned_triples(h).empty());
  CHECK(h.metadata()["mode_change"] == "exact->float");
  for (const Rational& bad : {Rational(1), Rational(0), Rational(-1, 2), Rational(3, 2)}) {
    try {
      holder_transform(line, bad);
      FAIL("accepted exponent");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::bad_exponent);
    }
  }
}

TEST_CASE("Hoelder strictness rechecks small margins") {
  std::mt19937_64 rng(3);
  const ExactSpace s = random_exact_space(rng, 6, true);
  const HolderStrictness h = holder_strictness(s, Rational(3, 4));
  CHECK(h.strict);
  CHECK(h.min_relative_margin > 0);
}

TEST_CASE("excess invariants on random spaces") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const ExactSpace s = random_exact_space(rng, 6, trial % 3 == 0);
    const Rational c(Integer(7), Integer(3));
    const ExactSpace big = scaled(s, c);
    for (Index p = 0; p < 6; ++p) {
      for (Index q = 0; q < 6; ++q) {
        if (p == q) continue;
        CHECK(excess(s, p, p, q) == 0);
        CHECK(excess(s, q, p, q) == 0);
        const auto seg = metric_segment(s, p, q);
        for (Index r = 0; r < 6; ++r) {
          const Rational e = excess(s, r, p, q);
          CHECK(e >= 0);
          CHECK(e == excess(s, r, q, p));
          CHECK(excess(big, r, p, q) == c * e);
          Rational nearest = s.d(r, seg.front());
          for (Index m : seg) nearest = std::min(nearest, s.d(r, m));
          CHECK(e <= 2 * nearest);
        }
        CHECK(metric_segment(big, p, q) == seg);
        const auto grid = modulus_breakpoints(s, p, q);
        const auto t = concavity_modulus(s, p, q, grid);
        for (std::size_t i = 1; i < t.entries.size(); ++i) {
          const auto& lo = t.entries[i - 1].delta;
          const auto& hi = t.entries[i].delta;
          if (lo && hi) CHECK(*lo <= *hi);
          if (!lo) CHECK_FALSE(hi.has_value());
        }
      }
    }
    CHECK(aligned_triples(big).size() == aligned_triples(s).size());
  }
}

TEST_CASE("modulus scales with the metric") {
  std::mt19937_64 rng(5);
  const ExactSpace s = random_exact_space(rng, 6, false);
  const Rational c(Integer(5), Integer(2));
  const ExactSpace big = scaled(s, c);
  auto grid = modulus_breakpoints(s, 0, 1);
  std::vector<Rational> big_grid;
  for (const auto& e : grid) big_grid.push_back(c * e);
  const auto t = concavity_modulus(s, 0, 1, grid);
  const auto tb = concavity_modulus(big, 0, 1, big_grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(t.entries[i].delta.has_value() == tb.entries[i].delta.has_value());
    if (t.entries[i].delta) CHECK(*tb.entries[i].delta == c * *t.entries[i].delta);
  }
}

TEST_CASE("float excess uses the coordinates for Euclidean spaces") {
  Matrix<Rational> c(3, 2);
  c << 0, 0, 1, 0, Rational(1, 2), Rational(1, 1000000000);
  const FloatSpace s = euclidean_space(c, {"p", "q", "r"}, 0);
  // |r-p| = |r-q| = sqrt(1/4 + h^2), so the excess is about 2 h^2.
  CHECK(excess(s, 2, 0, 1) == doctest::Approx(2e-18).epsilon(1e-6));
  CHECK_FALSE(lies_between(s, 2, 0, 1));
  Matrix<Rational> line(3, 2);
  line << 0, 0, 2, 0, 1, 0;
  const FloatSpace l = euclidean_space(line, {"p", "q", "m"}, 0);
  CHECK(lies_between(l, 2, 0, 1));
  CHECK(excess(l, 2, 0, 1) == 0.0);
}
