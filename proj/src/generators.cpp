#include "freelip/generators.hpp"

#include <random>

#include "freelip/metric_core.hpp"

namespace freelip {

namespace {

constexpr int kRejectionBudget = 1000;
constexpr int kBisectionSteps = 64;

Rational power(const Rational& x, int n) {
  Rational out = 1;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

// Uniform dyadic k / 2^20 in [0, 1), straight from the engine bits so the
// stream is identical on every platform.
Rational unit_draw(std::mt19937_64& engine) {
  return Rational(Integer(engine() >> 44), Integer(1) << 20);
}

bool collinear_2d(const std::array<Rational, 2>& a, const std::array<Rational, 2>& b,
                  const std::array<Rational, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) == (b[1] - a[1]) * (c[0] - a[0]);
}

}  // namespace

FloatSpace gen_planar_spiral(const Rational& lambda, int depth, std::uint64_t seed, bool one_sided) {
  if (!(lambda > 0 && lambda < 1)) throw Error(Errc::bad_lambda, "lambda must lie in (0,1), got " + format_rational(lambda));
  if (depth < 1) throw Error(Errc::bad_depth, "spiral depth must be at least 1");

  using Point = std::array<Rational, 2>;
  const Point p{Rational(0), Rational(0)};
  const Point q{Rational(1), Rational(0)};
  std::vector<Point> points{p, q};
  std::vector<std::string> labels{"p", "q"};
  std::mt19937_64 engine(seed);

  auto place = [&](const Point& center, const Rational& radius, const std::string& label) {
    for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
      // Fixed offset shape (along 0, across radius/2) plus a jitter of
      // radius/64; the jitter only has to break collinearity.
      const Rational along = (unit_draw(engine) - Rational(1, 2)) / 32 * radius;
      const Rational perp = (Rational(1, 2) + unit_draw(engine) / 64) * radius;
      const bool flip = engine() & 1u;
      const Point z{center[0] + along, center[1] + (flip ? Rational(-perp) : perp)};
      bool ok = true;
      for (std::size_t a = 0; a < points.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < points.size() && ok; ++b) ok = !collinear_2d(points[a], points[b], z);
      }
      if (ok) {
        points.push_back(z);
        labels.push_back(label);
        return;
      }
    }
    throw Error(Errc::rejection_budget_exceeded, "could not place " + label + " off every line");
  };

  for (int n = 1; n <= depth; ++n) {
    const Rational step = power(lambda, n);
    const Rational radius = step * step;
    if (!one_sided) place({p[0] + step * (q[0] - p[0]), p[1] + step * (q[1] - p[1])}, radius, "p" + std::to_string(n));
    place({q[0] + step * (p[0] - q[0]), q[1] + step * (p[1] - q[1])}, radius, "q" + std::to_string(n));
  }

  Matrix<Rational> coords(static_cast<Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    coords(static_cast<Index>(i), 0) = points[i][0];
    coords(static_cast<Index>(i), 1) = points[i][1];
  }
  FloatSpace space = euclidean_space(coords, std::move(labels), 0);
  Metadata meta = Metadata::object();
  meta["family"] = one_sided ? "spiral-one-sided" : "spiral";
  meta["lambda"] = format_rational(lambda);
  meta["depth"] = depth;
  meta["seed"] = seed;
  meta["sampler"] = "offset along [-r/64, r/64), across +-[r/2, r/2 + r/64), r = lambda^(2n)";
  return space.with_metadata(std::move(meta));
}

Matrix<Rational> c0_coordinates(int depth) {
  if (depth < 2) throw Error(Errc::bad_depth, "c0 depth must be at least 2");
  Matrix<Rational> coords = Matrix<Rational>::Zero(depth + 1, depth);
  coords(1, 0) = 2;
  for (int n = 2; n <= depth; ++n) {
    coords(n, 0) = 1;
    coords(n, n - 1) = Rational(1) + Rational(1, n);
  }
  return coords;
}

ExactSpace gen_c0_counterexample(int depth) {
  if (depth < 2) throw Error(Errc::bad_depth, "c0 depth must be at least 2");
  const Index n = depth + 1;
  Matrix<Rational> dist = Matrix<Rational>::Zero(n, n);
  std::vector<std::string> labels{"e", "p"};
  dist(0, 1) = dist(1, 0) = 2;
  for (int k = 2; k <= depth; ++k) {
    labels.push_back("q" + std::to_string(k));
    const Rational to_ends = Rational(1) + Rational(1, k);
    dist(0, k) = dist(k, 0) = to_ends;
    dist(1, k) = dist(k, 1) = to_ends;
    for (int m = 2; m < k; ++m) dist(m, k) = dist(k, m) = Rational(1) + Rational(1, m);
  }
  ExactSpace space = ExactSpace::create(std::move(dist), std::move(labels), 0);
  Metadata meta = Metadata::object();
  meta["family"] = "c0";
  meta["depth"] = depth;
  return space.with_metadata(std::move(meta));
}

L2Sequences dyadic_l2_sequences(int depth) {
  L2Sequences s;
  for (int n = 1; n <= depth; ++n) {
    const Rational t(Integer(1), Integer(1) << n);
    s.a.push_back(t);
    s.lambda.push_back(Rational(1) + t);
  }
  return s;
}

FloatSpace gen_l2_nonholder(const L2Sequences& seq, int depth) {
  if (depth < 2) throw Error(Errc::bad_depth, "l2 depth must be at least 2");
  if (static_cast<int>(seq.a.size()) < depth || static_cast<int>(seq.lambda.size()) < depth) {
    throw Error(Errc::bad_sequences, "sequences shorter than the depth");
  }
  if (!(seq.a[0] < 1)) throw Error(Errc::bad_sequences, "a_1 must be below 1");
  for (int n = 0; n < depth; ++n) {
    if (!(seq.a[n] > 0) || !(seq.lambda[n] > 1)) throw Error(Errc::bad_sequences, "need a_n > 0 and lambda_n > 1");
    if (n > 0 && (!(seq.a[n] < seq.a[n - 1]) || !(seq.lambda[n] < seq.lambda[n - 1]))) {
      throw Error(Errc::bad_sequences, "a_n and lambda_n must be strictly decreasing");
    }
  }

  const Index count = depth + 1;
  Matrix<Rational> coords = Matrix<Rational>::Zero(count, depth);
  std::vector<std::string> labels{"0", "e1"};
  coords(1, 0) = 1;
  Metadata b_values = Metadata::array(), margins = Metadata::array();
  const Float50 required = to_real<Float50>(kL2Margin);
  for (int n = 2; n <= depth; ++n) {
    const Rational& a = seq.a[n - 1];
    const Rational& lam = seq.lambda[n - 1];
    if (l2_constraint_margin<Float50>(a, lam, Rational(0)) < required) {
      throw Error(Errc::constraint_unsatisfiable,
                  "no b > 0 reaches margin 2^-40 at n = " + std::to_string(n) + "; margin at b = 0 is " +
                      l2_constraint_margin<Float50>(a, lam, Rational(0)).str(12));
    }
    Rational lo = 0, hi = 1;
    for (int step = 0; step < kBisectionSteps; ++step) {
      const Rational mid = (lo + hi) / 2;
      if (l2_constraint_margin<Float50>(a, lam, mid) >= required) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    // Post-hoc certificate at twice the working precision.
    const Float100 margin = l2_constraint_margin<Float100>(a, lam, lo);
    if (lo == 0 || margin < to_real<Float100>(kL2Margin)) {
      throw Error(Errc::constraint_unsatisfiable, "bisection failed to certify b at n = " + std::to_string(n));
    }
    labels.push_back("r" + std::to_string(n));
    coords(n, 0) = a;
    coords(n, n - 1) = lo;
    b_values.push_back(format_rational(lo));
    margins.push_back(margin.str(17, std::ios_base::scientific));
  }
  FloatSpace space = euclidean_space(coords, std::move(labels), 0);
  Metadata meta = Metadata::object();
  meta["family"] = "l2";
  meta["depth"] = depth;
  Metadata a_json = Metadata::array(), l_json = Metadata::array();
  for (int n = 0; n < depth; ++n) {
    a_json.push_back(format_rational(seq.a[n]));
    l_json.push_back(format_rational(seq.lambda[n]));
  }
  meta["a"] = a_json;
  meta["lambda"] = l_json;
  meta["b"] = b_values;
  meta["margins"] = margins;
  return space.with_metadata(std::move(meta));
}

const char* family_name(FamilyId id) {
  switch (id) {
    case FamilyId::planar_spiral: return "spiral";
    case FamilyId::planar_spiral_one_sided: return "spiral-one-sided";
    case FamilyId::c0_counterexample: return "c0";
    case FamilyId::l2_nonholder: return "l2";
    case FamilyId::holder_of: return "holder";
    case FamilyId::constant: return "constant";
  }
  return "?";
}

FamilyId parse_family(std::string_view name) {
  for (FamilyId id : {FamilyId::planar_spiral, FamilyId::planar_spiral_one_sided, FamilyId::c0_counterexample,
                      FamilyId::l2_nonholder, FamilyId::holder_of, FamilyId::constant}) {
    if (name == family_name(id)) return id;
  }
  throw Error(Errc::unknown_family, "unknown family '" + std::string(name) + "'");
}

AnySpace generate(const FamilySpec& spec, int depth) {
  switch (spec.id) {
    case FamilyId::planar_spiral:
      return gen_planar_spiral(spec.lambda, depth, spec.seed, false);
    case FamilyId::planar_spiral_one_sided:
      return gen_planar_spiral(spec.lambda, depth, spec.seed, true);
    case FamilyId::c0_counterexample:
      return gen_c0_counterexample(depth);
    case FamilyId::l2_nonholder:
      return gen_l2_nonholder(spec.l2 ? *spec.l2 : dyadic_l2_sequences(depth), depth);
    case FamilyId::holder_of: {
      if (!spec.base) throw Error(Errc::unknown_family, "holder family without a base family");
      const AnySpace inner = generate(*spec.base, depth);
      return std::visit([&](const auto& s) -> AnySpace { return holder_transform(s, spec.alpha); }, inner);
    }
    case FamilyId::constant:
      if (!spec.space) throw Error(Errc::unknown_family, "constant family without a space");
      return *spec.space;
  }
  throw Error(Errc::unknown_family, "unhandled family");
}

std::vector<AnySpace> family_at_depths(const FamilySpec& spec, const std::vector<int>& depths) {
  std::vector<AnySpace> out;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (i > 0 && depths[i] <= depths[i - 1]) throw Error(Errc::bad_depth, "depths must be strictly increasing");
    out.push_back(generate(spec, depths[i]));
  }
  return out;
}

Metadata family_to_json(const FamilySpec& spec) {
  Metadata j = Metadata::object();
  j["family"] = family_name(spec.id);
  switch (spec.id) {
    case FamilyId::planar_spiral:
    case FamilyId::planar_spiral_one_sided:
      j["lambda"] = format_rational(spec.lambda);
      j["seed"] = spec.seed;
      break;
    case FamilyId::l2_nonholder:
      j["sequences"] = spec.l2 ? "explicit" : "dyadic";
      break;
    case FamilyId::holder_of:
      j["alpha"] = format_rational(spec.alpha);
      if (spec.base) j["base"] = family_to_json(*spec.base);
      break;
    default:
      break;
  }
  return j;
}

}  // namespace freelip
