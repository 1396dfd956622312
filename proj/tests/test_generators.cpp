#include <doctest.h>

#include "support.hpp"

using namespace freelip;

namespace {

double pow_d(double x, int n) { return std::pow(x, n); }

}  // namespace

TEST_CASE("spiral points sit in their balls and avoid every line") {
  for (const Rational& lambda : {Rational(1, 2), Rational(3, 4)}) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      const FloatSpace s = gen_planar_spiral(lambda, 6, seed);
      CHECK(s.size() == 14);
      REQUIRE(s.geometry() != nullptr);
      CHECK(aligned_triples(s).empty());
      const auto& c = s.geometry()->coords();
      for (int n = 1; n <= 6; ++n) {
        Rational step = 1;
        for (int k = 0; k < n; ++k) step *= lambda;
        const Rational radius2 = step * step * step * step;
        const Index pn = s.index_of("p" + std::to_string(n)), qn = s.index_of("q" + std::to_string(n));
        Vector<Rational> center_p(2), center_q(2);
        center_p << step, 0;
        center_q << 1 - step, 0;
        CHECK((c.row(pn).transpose() - center_p).squaredNorm() < radius2);
        CHECK((c.row(qn).transpose() - center_q).squaredNorm() < radius2);
      }
    }
  }
}

TEST_CASE("spiral bounds on excess and distance") {
  const double lambda = 0.5;
  const FloatSpace s = gen_planar_spiral(Rational(1, 2), 8, 3);
  const Index p = s.index_of("p"), q = s.index_of("q");
  for (int n = 1; n <= 8; ++n) {
    const Index pn = s.index_of("p" + std::to_string(n));
    const double l = pow_d(lambda, n), l2 = pow_d(lambda, 2 * n);
    CHECK(excess(s, pn, p, q) < 2 * l2);
    CHECK(s.d(pn, p) > l - l2);
    CHECK(s.d(pn, p) < l + l2);
  }
}

TEST_CASE("one-sided spiral keeps only the q side and p stays isolated") {
  const FloatSpace s = gen_planar_spiral(Rational(1, 2), 8, 4, true);
  CHECK(s.size() == 10);
  CHECK(aligned_triples(s).empty());
  CHECK_THROWS_AS(s.index_of("p1"), Error);
  // d(p,q_n) >= d(p,q) - lambda d(p,q) - lambda^2.
  const double bound = 1.0 - 0.5 - 0.25;
  for (int n = 1; n <= 8; ++n) CHECK(s.d(0, s.index_of("q" + std::to_string(n))) >= bound);
}

TEST_CASE("spiral parameter errors") {
  for (const Rational& bad : {Rational(0), Rational(1), Rational(3, 2)}) {
    try {
      gen_planar_spiral(bad, 3, 0);
      FAIL("accepted lambda");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::bad_lambda);
    }
  }
  CHECK_THROWS_AS(gen_planar_spiral(Rational(1, 2), 0, 0), Error);
}

TEST_CASE("c0 closed forms agree with sup-norm coordinates") {
  for (int depth : {2, 5, 12}) {
    const ExactSpace s = gen_c0_counterexample(depth);
    const Matrix<Rational> coords = c0_coordinates(depth);
    const ExactSpace from_coords = polyhedral_norm_space(coords, s.labels(), 0, NormKind::linf);
    CHECK(from_coords.distances() == s.distances());
    // Independent float evaluation of the sup norm.
    const Matrix<double> cd = coords.unaryExpr([](const Rational& r) { return to_double(r); });
    for (Index i = 0; i < s.size(); ++i)
      for (Index j = 0; j < s.size(); ++j)
        CHECK(to_double(s.d(i, j)) == doctest::Approx((cd.row(i) - cd.row(j)).cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("c0 fixture values") {
  const ExactSpace s = gen_c0_counterexample(10);
  CHECK(s.size() == 11);
  CHECK(s.label(s.base()) == "e");
  CHECK(s.d(s.index_of("p"), s.index_of("e")) == 2);
  for (int n = 2; n <= 10; ++n) {
    const Index qn = s.index_of("q" + std::to_string(n));
    CHECK(s.d(qn, 0) == Rational(n + 1, n));
    CHECK(s.d(qn, 1) == Rational(n + 1, n));
    for (int m = 2; m <= 10; ++m) {
      if (m == n) continue;
      const Rational dnm = s.d(qn, s.index_of("q" + std::to_string(m)));
      CHECK(dnm > 1);
      CHECK(dnm == 1 + Rational(1, std::min(n, m)));
    }
  }
  CHECK_THROWS_AS(gen_c0_counterexample(1), Error);
}

TEST_CASE("c0 modulus is 2/N on every scale up to 1") {
  const ExactSpace s = gen_c0_counterexample(9);
  const auto t = concavity_modulus(s, s.index_of("p"), s.index_of("e"),
                                   {Rational(1, 100), Rational(1, 3), Rational(1, 2), Rational(1)});
  for (const auto& e : t.entries) CHECK(*e.delta == Rational(2, 9));
}

TEST_CASE("l2 example meets its constraint with a certified margin") {
  const FloatSpace s = gen_l2_nonholder(dyadic_l2_sequences(8), 8);
  CHECK(s.size() == 9);
  CHECK(aligned_triples(s).empty());
  const auto& c = s.geometry()->coords();
  const L2Sequences seq = dyadic_l2_sequences(8);
  for (int n = 2; n <= 8; ++n) {
    const Index r = s.index_of("r" + std::to_string(n));
    const Rational b = c(r, n - 1);
    CHECK(b > 0);
    CHECK(c(r, 0) == seq.a[n - 1]);
    CHECK(l2_constraint_margin<Float100>(seq.a[n - 1], seq.lambda[n - 1], b) >= to_real<Float100>(kL2Margin));
    // Maximality: one more unit in the last dyadic place breaks the margin.
    const Rational next = b + Rational(Integer(1), Integer(1) << 64);
    CHECK(l2_constraint_margin<Float100>(seq.a[n - 1], seq.lambda[n - 1], next) < to_real<Float100>(kL2Margin));
  }
  CHECK(s.metadata()["margins"].size() == 7);
}

TEST_CASE("l2 sequence errors") {
  L2Sequences seq = dyadic_l2_sequences(4);
  CHECK_THROWS_AS(gen_l2_nonholder(seq, 6), Error);
  seq.lambda[2] = seq.lambda[1];
  try {
    gen_l2_nonholder(seq, 4);
    FAIL("accepted non-decreasing sequence");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_sequences);
  }
  L2Sequences big = dyadic_l2_sequences(3);
  big.a[0] = 1;
  CHECK_THROWS_AS(gen_l2_nonholder(big, 3), Error);
}

TEST_CASE("family truncations are nested") {
  FamilySpec c0;
  c0.id = FamilyId::c0_counterexample;
  const auto c0s = family_at_depths(c0, {4, 8});
  const ExactSpace& small = std::get<ExactSpace>(c0s[0]);
  const ExactSpace& large = std::get<ExactSpace>(c0s[1]);
  CHECK(large.restricted({0, 1, 2, 3, 4}).distances() == small.distances());

  FamilySpec spiral;
  spiral.id = FamilyId::planar_spiral;
  spiral.seed = 17;
  spiral.lambda = Rational(2, 3);
  const auto sp = family_at_depths(spiral, {3, 6});
  const FloatSpace& a = std::get<FloatSpace>(sp[0]);
  const FloatSpace& b = std::get<FloatSpace>(sp[1]);
  CHECK(b.geometry()->coords().topRows(a.size()) == a.geometry()->coords());
  CHECK(std::vector<std::string>(b.labels().begin(), b.labels().begin() + a.size()) == a.labels());

  CHECK(family_at_depths(c0, {}).empty());
  CHECK_THROWS_AS(family_at_depths(c0, {8, 4}), Error);
}

TEST_CASE("every generator output validates after a round trip") {
  FamilySpec holder;
  holder.id = FamilyId::holder_of;
  holder.alpha = Rational(1, 3);
  auto inner = std::make_shared<FamilySpec>();
  inner->id = FamilyId::c0_counterexample;
  holder.base = inner;
  FamilySpec l2;
  l2.id = FamilyId::l2_nonholder;
  FamilySpec spiral;
  spiral.id = FamilyId::planar_spiral_one_sided;
  for (const FamilySpec* spec : {&holder, &l2, &spiral, inner.get()}) {
    const AnySpace s = generate(*spec, 6);
    const AnySpace back = build_space(parse_space_json(space_to_json(s)));
    CHECK(space_digest(back) == space_digest(s));
  }
  CHECK(std::get<FloatSpace>(generate(holder, 6)).metadata()["alpha"] == "1/3");
  CHECK_THROWS_AS(parse_family("nope"), Error);
  CHECK(parse_family("spiral-one-sided") == FamilyId::planar_spiral_one_sided);
}
