#pragma once

#include <utility>
#include <vector>

#include "freelip/lip_ball.hpp"
#include "freelip/metric_core.hpp"

namespace freelip {

// The free space over an n-point space is R^(n-1) with one coordinate per
// non-base point; j(e) = 0. Its unit ball is the convex hull of the
// molecules, because molecules norm the Lipschitz ball: L(f) is the largest
// value of <u_xy, f> over all pairs.

/// Non-base points in coordinate order.
template <class Scalar>
std::vector<Index> coordinate_points(const MetricSpace<Scalar>& space) {
  std::vector<Index> out;
  for (Index x = 0; x < space.size(); ++x)
    if (x != space.base()) out.push_back(x);
  return out;
}

namespace detail {
template <class Scalar>
Index coordinate_of(const MetricSpace<Scalar>& space, Index x) {
  return x < space.base() ? x : x - 1;
}
}  // namespace detail

template <class Scalar>
struct Molecule {
  Index p;
  Index q;
  Vector<Scalar> vector;
};

/// (j(p) - j(q)) / d(p,q) in free-space coordinates.
template <class Scalar>
Molecule<Scalar> molecule_vector(const MetricSpace<Scalar>& space, Index p, Index q) {
  detail::require_point(space, p);
  detail::require_point(space, q);
  detail::require_distinct(p, q);
  Vector<Scalar> v = Vector<Scalar>::Zero(space.size() - 1);
  const Scalar inv = Scalar(1) / space.d(p, q);
  if (p != space.base()) v(detail::coordinate_of(space, p)) += inv;
  if (q != space.base()) v(detail::coordinate_of(space, q)) -= inv;
  return {p, q, std::move(v)};
}

template <class Scalar>
struct FreeNorm {
  Scalar value;
  // Optimal 1-Lipschitz function vanishing at the base, over all points.
  Vector<Scalar> witness;
};

/// Norm of sum_x a_x j(x) (a over non-base points): the largest pairing with a
/// 1-Lipschitz function vanishing at the base.
template <class Scalar>
FreeNorm<Scalar> free_norm(const MetricSpace<Scalar>& space, const Vector<Scalar>& coefficients) {
  if (coefficients.size() != space.size() - 1) {
    throw Error(Errc::dimension_mismatch, "free vector has " + std::to_string(coefficients.size()) +
                                              " coordinates, space needs " + std::to_string(space.size() - 1));
  }
  Vector<Scalar> over_points = Vector<Scalar>::Zero(space.size());
  for (Index x = 0; x < space.size(); ++x)
    if (x != space.base()) over_points(x) = coefficients(detail::coordinate_of(space, x));
  LipBallProgram<Scalar> ball(space);
  FreeNorm<Scalar> out{Scalar(0), Vector<Scalar>()};
  const LpResult<Scalar> r = ball.optimize(over_points, true, &out.witness);
  if (r.status != LpStatus::optimal) throw Error(Errc::lp_failure, "norm program did not reach an optimum");
  out.value = r.value;
  return out;
}

struct OracleOptions {
  Index max_points = 12;
};

template <class Scalar>
struct VertexCertificate {
  bool vertex = false;
  // Non-vertex: convex weights on other molecules reproducing u_pq.
  std::vector<std::pair<std::pair<Index, Index>, Scalar>> weights;
  // Vertex: functional w with <w, u_pq> - margin >= <w, u_xy> for every other
  // molecule, normalized to the box |w_i| <= 1.
  Vector<Scalar> functional;
  Scalar margin = Scalar(0);
};

namespace detail {
template <class Scalar>
void require_oracle(const MetricSpace<Scalar>& space, const OracleOptions& options) {
  if constexpr (!is_exact_v<Scalar>) {
    throw Error(Errc::float_mode_unsupported, "the polytope oracle needs exact distances");
  }
  if (space.size() > options.max_points) {
    throw Error(Errc::oracle_unavailable, std::to_string(space.size()) + " points exceed the oracle limit of " +
                                              std::to_string(options.max_points));
  }
}
}  // namespace detail

/// Decides whether u_pq is a vertex of the convex hull of all molecules. Two
/// programs are solved: a convex-combination search over the other molecules
/// (and -u_pq), and a separation program for a strictly separating
/// functional. Exactly one must succeed.
template <class Scalar>
VertexCertificate<Scalar> is_vertex(const MetricSpace<Scalar>& space, Index p, Index q,
                                    const OracleOptions& options = {}) {
  detail::require_oracle(space, options);
  detail::require_distinct(p, q);
  const Index n = space.size();
  const Index dim = n - 1;
  const Vector<Scalar> target = molecule_vector(space, p, q).vector;

  std::vector<std::pair<Index, Index>> others;
  std::vector<Vector<Scalar>> vectors;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (x == y) continue;
      if ((x == p && y == q)) continue;
      others.emplace_back(x, y);
      vectors.push_back(molecule_vector(space, x, y).vector);
    }
  }
  const Index k = static_cast<Index>(others.size());

  VertexCertificate<Scalar> cert;

  // Convex combination: lambda >= 0, sum lambda = 1, sum lambda v = u_pq.
  LinearProgram<Scalar> combo(k);
  for (Index i = 0; i < dim; ++i) {
    Vector<Scalar> row(k);
    for (Index j = 0; j < k; ++j) row(j) = vectors[static_cast<std::size_t>(j)](i);
    combo.add_constraint(std::move(row), LinearProgram<Scalar>::Sense::eq, target(i));
  }
  combo.add_constraint(Vector<Scalar>::Ones(k), LinearProgram<Scalar>::Sense::eq, Scalar(1));
  const LpResult<Scalar> combination = combo.maximize();

  // Separation: maximize <w,u_pq> - s subject to <w,v> <= s, |w_i| <= 1.
  LinearProgram<Scalar> sep(dim + 1);
  for (Index i = 0; i <= dim; ++i) sep.set_free(i);
  for (const auto& v : vectors) {
    Vector<Scalar> row(dim + 1);
    row.head(dim) = v;
    row(dim) = Scalar(-1);
    sep.add_constraint(std::move(row), LinearProgram<Scalar>::Sense::le, Scalar(0));
  }
  for (Index i = 0; i < dim; ++i) {
    Vector<Scalar> row = Vector<Scalar>::Zero(dim + 1);
    row(i) = Scalar(1);
    sep.add_constraint(row, LinearProgram<Scalar>::Sense::le, Scalar(1));
    sep.add_constraint(row, LinearProgram<Scalar>::Sense::ge, Scalar(-1));
  }
  Vector<Scalar> objective(dim + 1);
  objective.head(dim) = target;
  objective(dim) = Scalar(-1);
  sep.set_objective(std::move(objective));
  const LpResult<Scalar> separation = sep.maximize();
  if (separation.status != LpStatus::optimal) throw Error(Errc::lp_failure, "separation program not solved");

  const bool separated = separation.value > 0;
  const bool combined = combination.status == LpStatus::optimal;
  if (separated == combined) {
    throw Error(Errc::lp_failure, "convex-combination and separation programs disagree for (" +
                                      space.label(p) + "," + space.label(q) + ")");
  }
  cert.vertex = separated;
  if (separated) {
    cert.functional = separation.x.head(dim);
    cert.margin = separation.value;
  } else {
    for (Index j = 0; j < k; ++j) {
      if (combination.x(j) != 0) cert.weights.emplace_back(others[static_cast<std::size_t>(j)], combination.x(j));
    }
  }
  return cert;
}

template <class Scalar>
struct DecompositionReport {
  Index p, q, r;
  Scalar coefficient_pr;  // d(p,r) / d(p,q)
  Scalar coefficient_rq;  // d(r,q) / d(p,q)
  Scalar coefficient_sum;
  bool identity_holds;  // u_pq = c_pr u_pr + c_rq u_rq componentwise
  bool convex;          // coefficients sum to 1, i.e. r lies between p and q
};

/// Expands u_pq through the intermediate point r.
template <class Scalar>
DecompositionReport<Scalar> decomposition_check(const MetricSpace<Scalar>& space, Index p, Index q, Index r) {
  if (p == q || p == r || q == r) throw Error(Errc::not_distinct, "p, q, r must be pairwise distinct");
  const Scalar dpq = space.d(p, q);
  DecompositionReport<Scalar> rep{p, q, r, Scalar(space.d(p, r) / dpq), Scalar(space.d(r, q) / dpq), Scalar(0), false, false};
  rep.coefficient_sum = rep.coefficient_pr + rep.coefficient_rq;
  const Vector<Scalar> lhs = molecule_vector(space, p, q).vector;
  const Vector<Scalar> rhs = rep.coefficient_pr * molecule_vector(space, p, r).vector +
                             rep.coefficient_rq * molecule_vector(space, r, q).vector;
  if constexpr (is_exact_v<Scalar>) {
    rep.identity_holds = lhs == rhs;
    rep.convex = rep.coefficient_sum == 1;
  } else {
    rep.identity_holds = (lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + lhs.cwiseAbs().maxCoeff());
    rep.convex = space.is_zero((rep.coefficient_sum - 1.0) * dpq);
  }
  return rep;
}

}  // namespace freelip
