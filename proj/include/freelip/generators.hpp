#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "freelip/metric_space.hpp"

namespace freelip {

using AnySpace = std::variant<ExactSpace, FloatSpace>;

template <class F>
decltype(auto) visit_space(const AnySpace& space, F&& f) {
  return std::visit(std::forward<F>(f), space);
}

/// Planar spiral: p = (0,0), q = (1,0); p_n is drawn in the ball of radius
/// lambda^(2n) around p + lambda^n (q - p), q_n in the ball of the same radius
/// around q + lambda^n (p - q). Every new point avoids all lines through two
/// earlier points (exact test). Points are emitted as p, q, p1, q1, p2, q2, ...
/// (or p, q, q1, q2, ... when one_sided), base p, float distances with exact
/// coordinates attached.
FloatSpace gen_planar_spiral(const Rational& lambda, int depth, std::uint64_t seed, bool one_sided = false);

/// The c0 subset {e = 0, p = 2e_1, q_n = e_1 + (1 + 1/n) e_n : 2 <= n <= depth}
/// under the sup norm, with closed-form rational distances. Base e.
ExactSpace gen_c0_counterexample(int depth);

/// The sup-norm c0 coordinates of the same points, for cross-checking the
/// closed forms.
Matrix<Rational> c0_coordinates(int depth);

struct L2Sequences {
  // Index n - 1 holds a_n and lambda_n.
  std::vector<Rational> a;
  std::vector<Rational> lambda;
};

/// a_n = 2^-n, lambda_n = 1 + 2^-n for n = 1..depth.
L2Sequences dyadic_l2_sequences(int depth);

/// Margin 1 - (a^2 + b^2)^(lambda/2) - ((1-a)^2 + b^2)^(lambda/2), evaluated in
/// the given real type.
template <class Real>
Real l2_constraint_margin(const Rational& a, const Rational& lambda, const Rational& b) {
  const Real ar = to_real<Real>(a), br = to_real<Real>(b), half = to_real<Real>(lambda) / 2;
  return Real(1) - pow(ar * ar + br * br, half) - pow((Real(1) - ar) * (Real(1) - ar) + br * br, half);
}

/// (a^2 + b^2)^(1/(2 alpha)) + ((1-a)^2 + b^2)^(1/(2 alpha)): the sum
/// d(0,r)^(1/alpha) + d(r,e_1)^(1/alpha) a Hoelder preimage metric would have.
template <class Real>
Real l2_holder_obstruction(const Rational& a, const Rational& b, const Rational& alpha) {
  const Real ar = to_real<Real>(a), br = to_real<Real>(b), e = Real(1) / (2 * to_real<Real>(alpha));
  return pow(ar * ar + br * br, e) + pow((Real(1) - ar) * (Real(1) - ar) + br * br, e);
}

inline const Rational kL2Margin = Rational(Integer(1), Integer(1) << 40);

/// {0, e_1, r_2, ..., r_depth} in l2 with r_n = a_n e_1 + b_n e_n, where b_n is
/// the largest k / 2^64 whose constraint margin is at least 2^-40.
FloatSpace gen_l2_nonholder(const L2Sequences& sequences, int depth);

enum class FamilyId {
  planar_spiral,
  planar_spiral_one_sided,
  c0_counterexample,
  l2_nonholder,
  holder_of,
  constant,
};

const char* family_name(FamilyId id);
FamilyId parse_family(std::string_view name);

struct FamilySpec {
  FamilyId id = FamilyId::c0_counterexample;
  Rational lambda = Rational(1, 2);
  std::uint64_t seed = 0;
  std::optional<L2Sequences> l2;  // defaults to the dyadic sequences
  Rational alpha = Rational(1, 2);
  std::shared_ptr<const FamilySpec> base;   // holder_of
  std::shared_ptr<const AnySpace> space;    // constant
};

/// The family truncated at each depth, in order. Depths must be increasing;
/// shallower truncations are prefixes of deeper ones.
std::vector<AnySpace> family_at_depths(const FamilySpec& spec, const std::vector<int>& depths);

AnySpace generate(const FamilySpec& spec, int depth);

Metadata family_to_json(const FamilySpec& spec);

}  // namespace freelip
