#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "freelip/metric_space.hpp"

namespace freelip {

namespace detail {
inline void require_distinct(Index p, Index q) {
  if (p == q) throw Error(Errc::same_point, "point " + std::to_string(p) + " given twice");
}
template <class Scalar>
void require_point(const MetricSpace<Scalar>& space, Index i) {
  if (i < 0 || i >= space.size()) throw Error(Errc::unknown_label, "point index " + std::to_string(i) + " out of range");
}
}  // namespace detail

/// d(r,p) + d(r,q) - d(p,q): how far r is from lying between p and q.
template <class Scalar>
Scalar excess(const MetricSpace<Scalar>& space, Index r, Index p, Index q) {
  detail::require_point(space, r);
  detail::require_point(space, p);
  detail::require_point(space, q);
  detail::require_distinct(p, q);
  if constexpr (!is_exact_v<Scalar>) {
    if (const auto* g = space.geometry()) return g->excess(r, p, q);
  }
  return space.d(r, p) + space.d(r, q) - space.d(p, q);
}

/// r lies between p and q (excess zero). Exact in exact mode; coordinate
/// test for Euclidean point clouds; within tolerance otherwise.
template <class Scalar>
bool lies_between(const MetricSpace<Scalar>& space, Index r, Index p, Index q) {
  if (r == p || r == q) return true;
  if constexpr (!is_exact_v<Scalar>) {
    if (const auto* g = space.geometry()) return g->between(r, p, q);
  }
  return space.is_zero(excess(space, r, p, q));
}

/// All points between p and q, in index order. Always contains p and q.
template <class Scalar>
std::vector<Index> metric_segment(const MetricSpace<Scalar>& space, Index p, Index q) {
  detail::require_distinct(p, q);
  std::vector<Index> out;
  for (Index r = 0; r < space.size(); ++r) {
    if (lies_between(space, r, p, q)) out.push_back(r);
  }
  return out;
}

struct AlignedTriple {
  Index middle;
  Index end1;
  Index end2;
  friend bool operator==(const AlignedTriple&, const AlignedTriple&) = default;
};

/// Triples of distinct points in which one lies strictly between the other
/// two. Enumerated over sorted index triples; the ends are in index order.
template <class Scalar>
std::vector<AlignedTriple> aligned_triples(const MetricSpace<Scalar>& space) {
  std::vector<AlignedTriple> out;
  const Index n = space.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        if (lies_between(space, i, j, k)) {
          out.push_back({i, j, k});
        } else if (lies_between(space, j, i, k)) {
          out.push_back({j, i, k});
        } else if (lies_between(space, k, i, j)) {
          out.push_back({k, i, j});
        }
      }
    }
  }
  return out;
}

template <class Scalar>
struct ModulusEntry {
  Scalar epsilon;
  // nullopt is the +infinity sentinel: no point is admissible at this scale.
  std::optional<Scalar> delta;
  std::optional<Index> witness;
};

template <class Scalar>
struct ModulusTable {
  Index p;
  Index q;
  std::vector<ModulusEntry<Scalar>> entries;
};

/// Scales at which the concavity modulus of (p,q) can change: the distinct
/// values of min(d(p,r), d(q,r)) over r outside {p,q}, ascending.
template <class Scalar>
std::vector<Scalar> modulus_breakpoints(const MetricSpace<Scalar>& space, Index p, Index q) {
  detail::require_distinct(p, q);
  std::vector<Scalar> values;
  for (Index r = 0; r < space.size(); ++r) {
    if (r == p || r == q) continue;
    values.push_back(std::min(space.d(p, r), space.d(q, r)));
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

/// For each epsilon, the least excess over points at distance >= epsilon from
/// both p and q, with the lexicographically first minimizer.
template <class Scalar>
ModulusTable<Scalar> concavity_modulus(const MetricSpace<Scalar>& space, Index p, Index q,
                                        const std::vector<Scalar>& epsilon_grid) {
  detail::require_distinct(p, q);
  if (epsilon_grid.empty()) throw Error(Errc::parse, "empty epsilon grid");
  ModulusTable<Scalar> table{p, q, {}};
  for (const Scalar& eps : epsilon_grid) {
    if (!(eps > 0)) throw Error(Errc::parse, "epsilon must be positive");
    ModulusEntry<Scalar> entry{eps, std::nullopt, std::nullopt};
    for (Index r = 0; r < space.size(); ++r) {
      if (space.d(p, r) < eps || space.d(q, r) < eps) continue;
      const Scalar e = excess(space, r, p, q);
      if (!entry.delta || e < *entry.delta) {
        entry.delta = e;
        entry.witness = r;
      }
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

/// The snowflaked space with distances d^alpha, 0 < alpha < 1. Always float
/// mode; exact inputs record the mode change in the metadata.
template <class Scalar>
FloatSpace holder_transform(const MetricSpace<Scalar>& space, const Rational& alpha) {
  if (!(alpha > 0 && alpha < 1)) {
    throw Error(Errc::bad_exponent, "exponent " + format_rational(alpha) + " is not in (0,1)");
  }
  const double a = to_double(alpha);
  const Index n = space.size();
  Matrix<double> dist = Matrix<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = std::pow(to_double(space.d(i, j)), a);
  }
  FloatSpace out = FloatSpace::create(std::move(dist), space.labels(), space.base());
  Metadata meta = Metadata::object();
  meta["family"] = "holder";
  meta["alpha"] = format_rational(alpha);
  meta["mode_change"] = is_exact_v<Scalar> ? "exact->float" : "float->float";
  if (!space.metadata().empty()) meta["source"] = space.metadata();
  return out.with_metadata(std::move(meta));
}

struct HolderStrictness {
  // Least value of (d(p,r)^a + d(r,q)^a - d(p,q)^a) / max d^a over distinct
  // triples, as computed after any high-precision rechecks.
  double min_relative_margin = std::numeric_limits<double>::infinity();
  std::size_t rechecked = 0;
  bool strict = true;
};

/// Verifies the strict triangle inequality of the d^alpha metric. Margins
/// below recheck_below are recomputed in quad precision from the source
/// distances.
template <class Scalar>
HolderStrictness holder_strictness(const MetricSpace<Scalar>& space, const Rational& alpha,
                                   double tolerance = 1e-9, double recheck_below = 1e-6) {
  const double a = to_double(alpha);
  const Quad aq = to_quad(alpha);
  const Index n = space.size();
  Matrix<double> pw(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) pw(i, j) = std::pow(to_double(space.d(i, j)), a);
  const double scale = n ? pw.maxCoeff() : 1.0;
  HolderStrictness out;
  for (Index p = 0; p < n; ++p) {
    for (Index q = p + 1; q < n; ++q) {
      for (Index r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        double margin = (pw(p, r) + pw(r, q) - pw(p, q)) / scale;
        if (margin < recheck_below) {
          ++out.rechecked;
          const Quad dq_pr = pow(to_quad(space.d(p, r)), aq);
          const Quad dq_rq = pow(to_quad(space.d(r, q)), aq);
          const Quad dq_pq = pow(to_quad(space.d(p, q)), aq);
          margin = static_cast<double>((dq_pr + dq_rq - dq_pq) / Quad(scale));
        }
        out.min_relative_margin = std::min(out.min_relative_margin, margin);
        if (margin <= tolerance) out.strict = false;
      }
    }
  }
  return out;
}

}  // namespace freelip
