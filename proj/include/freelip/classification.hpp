#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "freelip/generators.hpp"
#include "freelip/metric_core.hpp"
#include "freelip/parallel.hpp"

namespace freelip {

// Every verdict here is theorem-backed only for finite (hence compact)
// spaces, where extreme and preserved extreme molecules coincide and both
// are characterized by the absence of a point strictly between p and q.
// Whether "no point strictly between" forces extremality for general spaces
// is open; family diagnostics below report trends, never limit statements.

template <class Scalar>
struct PropertyZ {
  bool holds = false;
  std::optional<Index> witness;
  // min over r outside {p,q} of E(r;p,q) / min(d(p,r), d(q,r)); nullopt when
  // there is no such r (+infinity).
  std::optional<Scalar> min_ratio;
  std::optional<Index> min_ratio_at;
};

/// Some r outside {p,q} has E(r;p,q) <= epsilon min(d(p,r), d(q,r)).
template <class Scalar>
PropertyZ<Scalar> property_z(const MetricSpace<Scalar>& space, Index p, Index q, const Scalar& epsilon) {
  detail::require_distinct(p, q);
  if (!(epsilon > 0)) throw Error(Errc::parse, "epsilon must be positive");
  PropertyZ<Scalar> out;
  for (Index r = 0; r < space.size(); ++r) {
    if (r == p || r == q) continue;
    const Scalar near = std::min(space.d(p, r), space.d(q, r));
    const Scalar ratio = lies_between(space, r, p, q) ? Scalar(0) : Scalar(excess(space, r, p, q) / near);
    if (!out.min_ratio || ratio < *out.min_ratio) {
      out.min_ratio = ratio;
      out.min_ratio_at = r;
    }
    if (!out.holds && ratio <= epsilon) {
      out.holds = true;
      out.witness = r;
    }
  }
  return out;
}

template <class Scalar>
struct PairVerdict {
  Index p;
  Index q;
  bool is_extreme;
  std::optional<Index> witness_middle;
  bool has_property_z;
  std::optional<Scalar> min_ratio;
  ModulusTable<Scalar> modulus;
  std::vector<std::string> notes;
};

/// u_pq is extreme (and preserved extreme) iff no point lies strictly between
/// p and q. The modulus is tabulated at the given scales, or at every
/// breakpoint of the step function when none are given.
template <class Scalar>
PairVerdict<Scalar> classify_pair(const MetricSpace<Scalar>& space, Index p, Index q,
                                  std::vector<Scalar> epsilon_grid = {}) {
  detail::require_point(space, p);
  detail::require_point(space, q);
  detail::require_distinct(p, q);
  std::optional<Index> middle;
  for (Index r = 0; r < space.size() && !middle; ++r) {
    if (r != p && r != q && lies_between(space, r, p, q)) middle = r;
  }
  if (epsilon_grid.empty()) epsilon_grid = modulus_breakpoints(space, p, q);
  if (epsilon_grid.empty()) epsilon_grid.push_back(space.d(p, q));

  // Any positive epsilon gives the exact min ratio; property (Z) on a finite
  // space is min_ratio == 0.
  PropertyZ<Scalar> z = property_z(space, p, q, Scalar(1));
  PairVerdict<Scalar> v{p, q, !middle, middle, bool(middle), z.min_ratio,
                        concavity_modulus(space, p, q, epsilon_grid), {}};
  if (middle) {
    v.notes.push_back(space.label(*middle) + " lies strictly between " + space.label(p) + " and " + space.label(q) +
                      ": u_pq is the convex combination (d(p,r)/d(p,q)) u_pr + (d(r,q)/d(p,q)) u_rq, not extreme");
    v.notes.push_back("property (Z) holds (excess 0 attained): not strongly exposed");
  } else {
    v.notes.push_back("no point lies strictly between " + space.label(p) + " and " + space.label(q) +
                      ": u_pq is a preserved extreme point (finite, hence compact, space)");
    v.notes.push_back("property (Z) fails (min ratio " + (z.min_ratio ? format_scalar(*z.min_ratio) : std::string("inf")) +
                      " > 0): u_pq is strongly exposed");
  }
  return v;
}

template <class Scalar>
struct ConcavityReport {
  bool is_concave;
  std::vector<AlignedTriple> violating_triples;
  std::vector<PairVerdict<Scalar>> verdicts;  // p < q, lexicographic
};

/// Verdicts for every pair p < q (u_qp = -u_pq shares its status).
template <class Scalar>
ConcavityReport<Scalar> classify_all(const MetricSpace<Scalar>& space, unsigned threads = 1) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index p = 0; p < space.size(); ++p)
    for (Index q = p + 1; q < space.size(); ++q) pairs.emplace_back(p, q);
  ConcavityReport<Scalar> report{true, aligned_triples(space), {}};
  report.verdicts = parallel_map(pairs.size(), threads, [&](std::size_t i) {
    return classify_pair(space, pairs[i].first, pairs[i].second);
  });
  for (const auto& v : report.verdicts) report.is_concave = report.is_concave && v.is_extreme;
  return report;
}

// ---------------------------------------------------------------------------
// Diagnostics over truncated families. Finite truncations can only show
// trends: a flag means the tabulated quantity at the deepest truncation is
// below threshold times its value at the shallowest.

inline constexpr double kDefaultDecayThreshold = 0.1;
inline const std::vector<int> kDefaultDepths{4, 8, 16, 32};

/// Which points form the sequence: labels prefix<n>, compared with the anchor
/// point. An empty prefix selects every point outside {p, q, anchor} with n
/// its ordinal.
struct SequenceSelector {
  std::string prefix;
  std::string anchor;
};

struct SequenceRecord {
  int n;
  std::string label;
  double excess;
  double distance_to_anchor;
  double ratio;
};

struct DepthValue {
  int depth;
  double value;
};

struct SequenceDiagnostics {
  std::string p, q, anchor;
  std::vector<SequenceRecord> records;  // deepest truncation, ordered by n
  std::vector<DepthValue> per_depth;     // ratio of the last sequence point at each depth
  bool monotone_decreasing = false;
  double limit_estimate = 0.0;
  double threshold = kDefaultDecayThreshold;
  bool flag = false;
};

namespace detail {

template <class Scalar>
std::vector<std::pair<int, Index>> select_sequence(const MetricSpace<Scalar>& space, const SequenceSelector& sel,
                                                   Index p, Index q, Index anchor) {
  std::vector<std::pair<int, Index>> out;
  int ordinal = 0;
  for (Index i = 0; i < space.size(); ++i) {
    if (i == p || i == q || i == anchor) continue;
    const std::string& label = space.label(i);
    if (sel.prefix.empty()) {
      out.emplace_back(++ordinal, i);
      continue;
    }
    if (label.size() <= sel.prefix.size() || label.compare(0, sel.prefix.size(), sel.prefix) != 0) continue;
    int n = 0;
    const char* first = label.data() + sel.prefix.size();
    const char* last = label.data() + label.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec == std::errc() && ptr == last) out.emplace_back(n, i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool decays(const std::vector<DepthValue>& values, double threshold) {
  if (values.size() < 2) return false;
  return values.front().value > 0 && values.back().value < threshold * values.front().value;
}

inline bool strictly_decreasing(const std::vector<DepthValue>& values) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i].value < values[i - 1].value)) return false;
  return values.size() >= 2;
}

}  // namespace detail

/// Ratios E(x_n; p, q) / d(x_n, anchor) along a sequence accumulating at the
/// anchor. A decaying ratio is the finite shadow of a norm-attainment point
/// lying over the anchor.
inline SequenceDiagnostics sequence_diagnostics(const FamilySpec& spec, const std::string& p_label,
                                                const std::string& q_label, const std::vector<int>& depths,
                                                SequenceSelector selector,
                                                double threshold = kDefaultDecayThreshold) {
  if (selector.anchor.empty()) selector.anchor = q_label;
  SequenceDiagnostics out{p_label, q_label, selector.anchor, {}, {}, false, 0.0, threshold, false};
  const std::vector<AnySpace> spaces = family_at_depths(spec, depths);
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    std::visit(
        [&](const auto& space) {
          const Index p = space.index_of(p_label), q = space.index_of(q_label);
          const Index anchor = space.index_of(selector.anchor);
          const auto seq = detail::select_sequence(space, selector, p, q, anchor);
          std::vector<SequenceRecord> records;
          for (const auto& [n, i] : seq) {
            const double e = to_double(excess(space, i, p, q));
            const double dist = to_double(space.d(i, anchor));
            records.push_back({n, space.label(i), e, dist, e / dist});
          }
          if (!records.empty()) out.per_depth.push_back({depths[k], records.back().ratio});
          if (k + 1 == spaces.size()) out.records = std::move(records);
        },
        spaces[k]);
  }
  out.monotone_decreasing = detail::strictly_decreasing(out.per_depth);
  out.limit_estimate = out.per_depth.empty() ? 0.0 : out.per_depth.back().value;
  out.flag = detail::decays(out.per_depth, threshold);
  return out;
}

struct DepthVerdict {
  int depth;
  double min_ratio;  // +infinity when no third point exists
  bool has_property_z;
  std::string witness;
  std::string verdict;
};

struct StronglyExposedDiagnostics {
  std::string p, q;
  std::vector<DepthVerdict> per_depth;
  double threshold = kDefaultDecayThreshold;
  // Set when property (Z) holds at every depth, or when min_ratio decays
  // by the threshold factor across the schedule.
  bool limit_property_z = false;
};

inline StronglyExposedDiagnostics strongly_exposed_verdict(const FamilySpec& spec, const std::string& p_label,
                                                           const std::string& q_label, const std::vector<int>& depths,
                                                           double threshold = kDefaultDecayThreshold) {
  StronglyExposedDiagnostics out{p_label, q_label, {}, threshold, false};
  const std::vector<AnySpace> spaces = family_at_depths(spec, depths);
  std::vector<DepthValue> trend;
  bool all_z = !spaces.empty();
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    std::visit(
        [&](const auto& space) {
          using S = std::decay_t<decltype(space.d(0, 0))>;
          const Index p = space.index_of(p_label), q = space.index_of(q_label);
          const PropertyZ<S> z = property_z(space, p, q, S(1));
          DepthVerdict v{depths[k], std::numeric_limits<double>::infinity(), false, "", ""};
          if (z.min_ratio) {
            v.min_ratio = to_double(*z.min_ratio);
            v.has_property_z = *z.min_ratio == S(0);
            v.witness = space.label(*z.min_ratio_at);
          }
          v.verdict = v.has_property_z ? "property (Z) at depth " + std::to_string(depths[k]) + ": not strongly exposed"
                                       : "not property-Z at depth " + std::to_string(depths[k]) + ": strongly exposed";
          all_z = all_z && v.has_property_z;
          trend.push_back({depths[k], v.min_ratio});
          out.per_depth.push_back(std::move(v));
        },
        spaces[k]);
  }
  out.limit_property_z = all_z || detail::decays(trend, threshold);
  return out;
}

}  // namespace freelip
