#pragma once

#include <utility>
#include <vector>

#include "freelip/lip_ball.hpp"
#include "freelip/metric_core.hpp"

namespace freelip {

/// (f(p) - f(q)) / d(p,q).
template <class Scalar>
Scalar phi(const MetricSpace<Scalar>& space, const Vector<Scalar>& f, Index p, Index q) {
  detail::require_distinct(p, q);
  if (f.size() != space.size()) throw Error(Errc::dimension_mismatch, "function is not defined on every point");
  return (f(p) - f(q)) / space.d(p, q);
}

/// Largest |phi| over pairs of distinct points; zero for constant functions.
template <class Scalar>
Scalar lipschitz_constant(const MetricSpace<Scalar>& space, const Vector<Scalar>& f) {
  if (f.size() != space.size()) throw Error(Errc::dimension_mismatch, "function is not defined on every point");
  Scalar best = Scalar(0);
  for (Index x = 0; x < space.size(); ++x) {
    for (Index y = x + 1; y < space.size(); ++y) {
      const Scalar v = abs_value(Scalar((f(x) - f(y)) / space.d(x, y)));
      if (v > best) best = v;
    }
  }
  return best;
}

/// Real values on the points with the Lipschitz constant cached.
template <class Scalar>
class LipFunction {
 public:
  LipFunction(const MetricSpace<Scalar>& space, Vector<Scalar> values)
      : values_(std::move(values)), lip_(lipschitz_constant(space, values_)) {}

  const Vector<Scalar>& values() const { return values_; }
  const Scalar& operator()(Index x) const { return values_(x); }
  const Scalar& lip_constant() const { return lip_; }

  /// f - f(base): the representative in Lip_0.
  LipFunction rebased(const MetricSpace<Scalar>& space) const {
    Vector<Scalar> v = values_;
    const Scalar at_base = values_(space.base());
    for (Index x = 0; x < v.size(); ++x) v(x) -= at_base;
    return LipFunction(space, std::move(v));
  }

  bool vanishes_at_base(const MetricSpace<Scalar>& space) const { return values_(space.base()) == 0; }

 private:
  Vector<Scalar> values_;
  Scalar lip_;
};

/// Extends g from the points in subset to the whole space, keeping both the
/// Lipschitz constant and the sup norm: the inf-convolution
/// min_y g(y) + L d(x,y), clipped to [-sup|g|, sup|g|].
template <class Scalar>
LipFunction<Scalar> mcshane_extend(const MetricSpace<Scalar>& space, const std::vector<Index>& subset,
                                   const Vector<Scalar>& g, bool rebase = false) {
  if (subset.empty()) throw Error(Errc::empty_subset, "cannot extend from an empty set");
  if (static_cast<Index>(subset.size()) != g.size()) {
    throw Error(Errc::dimension_mismatch, "subset and values differ in length");
  }
  Scalar lip = Scalar(0);
  Scalar sup = Scalar(0);
  for (std::size_t a = 0; a < subset.size(); ++a) {
    detail::require_point(space, subset[a]);
    sup = std::max(sup, abs_value(g(static_cast<Index>(a))));
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      if (subset[a] == subset[b]) throw Error(Errc::not_distinct, "subset lists a point twice");
      const Scalar v = abs_value(Scalar((g(static_cast<Index>(a)) - g(static_cast<Index>(b))) /
                                        space.d(subset[a], subset[b])));
      lip = std::max(lip, v);
    }
  }
  Vector<Scalar> f(space.size());
  for (Index x = 0; x < space.size(); ++x) {
    Scalar best = g(0) + lip * space.d(x, subset[0]);
    for (std::size_t a = 1; a < subset.size(); ++a) {
      const Scalar v = g(static_cast<Index>(a)) + lip * space.d(x, subset[a]);
      if (v < best) best = v;
    }
    if (best > sup) best = sup;
    if (best < -sup) best = -sup;
    f(x) = best;
  }
  // An inf-convolution reproduces g on its domain; store it verbatim so float
  // round-off cannot disturb the restriction.
  for (std::size_t a = 0; a < subset.size(); ++a) f(subset[a]) = g(static_cast<Index>(a));
  LipFunction<Scalar> out(space, std::move(f));
  return rebase ? out.rebased(space) : out;
}

/// min(1, min over r outside {p,q} of E(r;p,q) / d(r,q)). Zero exactly when
/// some point lies strictly between p and q.
template <class Scalar>
Scalar peaking_constant(const MetricSpace<Scalar>& space, Index p, Index q) {
  detail::require_distinct(p, q);
  Scalar c = Scalar(1);
  for (Index r = 0; r < space.size(); ++r) {
    if (r == p || r == q) continue;
    if (lies_between(space, r, p, q)) return Scalar(0);
    const Scalar ratio = excess(space, r, p, q) / space.d(r, q);
    if (ratio < c) c = ratio;
  }
  return c;
}

template <class Scalar>
struct PeakingCertificate {
  Scalar lip;           // L(f), must be 1
  Scalar phi_pq;        // must be 1
  Scalar max_away;      // max |phi(f,x,y)| over x,y != p; must be <= 1 - alpha
  bool verified;
};

template <class Scalar>
struct PeakingResult {
  LipFunction<Scalar> function;
  Scalar c;
  Scalar alpha;
  PeakingCertificate<Scalar> certificate;
};

/// g(p) = d(p,q), g(x) = (1 - alpha) d(x,q) elsewhere, extended and re-based.
/// Requires 0 < alpha < peaking_constant(p,q).
template <class Scalar>
PeakingResult<Scalar> peaking_candidate(const MetricSpace<Scalar>& space, Index p, Index q, const Scalar& alpha) {
  const Scalar c = peaking_constant(space, p, q);
  if (c == 0) throw Error(Errc::middle_point_exists, "a point lies strictly between " + space.label(p) + " and " + space.label(q));
  if (!(alpha > 0)) throw Error(Errc::bad_exponent, "alpha must be positive");
  if (!(alpha < c)) {
    throw Error(Errc::alpha_too_large, "alpha " + format_scalar(alpha) + " is not below c = " + format_scalar(c));
  }
  std::vector<Index> all(static_cast<std::size_t>(space.size()));
  Vector<Scalar> g(space.size());
  for (Index x = 0; x < space.size(); ++x) {
    all[static_cast<std::size_t>(x)] = x;
    g(x) = x == p ? space.d(p, q) : Scalar((Scalar(1) - alpha) * space.d(x, q));
  }
  LipFunction<Scalar> f = mcshane_extend(space, all, g, true);

  PeakingCertificate<Scalar> cert{f.lip_constant(), phi(space, f.values(), p, q), Scalar(0), false};
  for (Index x = 0; x < space.size(); ++x) {
    for (Index y = x + 1; y < space.size(); ++y) {
      if (x == p || y == p) continue;
      cert.max_away = std::max(cert.max_away, abs_value(phi(space, f.values(), x, y)));
    }
  }
  if constexpr (is_exact_v<Scalar>) {
    cert.verified = cert.lip == 1 && cert.phi_pq == 1 && cert.max_away <= 1 - alpha;
  } else {
    const double tol = space.relative_tolerance();
    cert.verified = std::abs(cert.lip - 1) <= tol && std::abs(cert.phi_pq - 1) <= tol &&
                    cert.max_away <= 1 - alpha + tol;
  }
  return {std::move(f), c, alpha, std::move(cert)};
}

template <class Scalar>
struct AttainmentInterval {
  Index x, y;
  Scalar low, high;  // range of phi(f,x,y) over 1-Lipschitz f with phi(f,p,q) = 1
};

template <class Scalar>
struct AttainmentSet {
  Index p, q;
  std::vector<std::pair<Index, Index>> members;
  std::vector<AttainmentInterval<Scalar>> intervals;  // all ordered pairs, lexicographic

  bool contains(Index x, Index y) const {
    return std::find(members.begin(), members.end(), std::make_pair(x, y)) != members.end();
  }
};

/// Pairs (x,y) at which every f in the Lipschitz unit ball with
/// phi(f,p,q) = 1 also attains its norm: the achievable range of phi(f,x,y)
/// collapses to +1 or -1.
template <class Scalar>
AttainmentSet<Scalar> attainment_set(const MetricSpace<Scalar>& space, Index p, Index q) {
  detail::require_distinct(p, q);
  const Index n = space.size();
  LipBallProgram<Scalar> ball(space);
  Vector<Scalar> pin = Vector<Scalar>::Zero(n);
  pin(p) = Scalar(1);
  pin(q) = Scalar(-1);
  ball.add_function_constraint(pin, LinearProgram<Scalar>::Sense::eq, space.d(p, q));

  Matrix<Scalar> low(n, n), high(n, n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = x + 1; y < n; ++y) {
      Vector<Scalar> obj = Vector<Scalar>::Zero(n);
      obj(x) = Scalar(1);
      obj(y) = Scalar(-1);
      const LpResult<Scalar> hi = ball.optimize(obj, true);
      const LpResult<Scalar> lo = ball.optimize(obj, false);
      if (hi.status != LpStatus::optimal || lo.status != LpStatus::optimal) {
        throw Error(Errc::lp_failure, "attainment program failed for (" + space.label(x) + "," + space.label(y) + ")");
      }
      high(x, y) = hi.value / space.d(x, y);
      low(x, y) = lo.value / space.d(x, y);
      high(y, x) = -low(x, y);
      low(y, x) = -high(x, y);
    }
  }
  AttainmentSet<Scalar> out{p, q, {}, {}};
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (x == y) continue;
      out.intervals.push_back({x, y, low(x, y), high(x, y)});
      bool member;
      if constexpr (is_exact_v<Scalar>) {
        member = low(x, y) == high(x, y) && abs_value(high(x, y)) == 1;
      } else {
        const double tol = space.relative_tolerance();
        member = high(x, y) - low(x, y) <= tol && std::abs(high(x, y)) >= 1 - tol;
      }
      if (member) out.members.emplace_back(x, y);
    }
  }
  return out;
}

}  // namespace freelip
