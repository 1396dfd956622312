#pragma once

#include <optional>
#include <string>

#include "freelip/classification.hpp"
#include "freelip/generators.hpp"
#include "freelip/lipschitz.hpp"
#include "freelip/polytope_oracle.hpp"

namespace freelip {

using Json = nlohmann::ordered_json;

struct LoadOptions {
  std::optional<NumberMode> mode;
  std::optional<double> relative_tolerance;
  std::optional<std::string> base;
};

NumberMode parse_mode(std::string_view text);
const char* mode_name(NumberMode mode);

/// Raw input before validation: a matrix in the chosen number mode.
struct SpaceInput {
  std::vector<std::string> labels;
  Index base = 0;
  NumberMode mode = NumberMode::exact;
  double relative_tolerance = kDefaultRelativeTolerance;
  Matrix<Rational> exact;                           // exact mode
  Matrix<double> floating;                          // float mode
  std::shared_ptr<const EuclideanGeometry> geometry;  // l2 point clouds
  Metadata metadata = Metadata::object();
};

/// Parses the JSON matrix form {labels, base, matrix, mode} or the point-cloud
/// form {points: {label: [coords]}, norm, base}. Throws Error(Errc::parse).
SpaceInput parse_space_json(const Json& doc, const LoadOptions& options = {});
/// Square matrix with a header row of labels (an optional leading label
/// column is ignored).
SpaceInput parse_space_csv(std::string_view text, const LoadOptions& options = {});
/// Reads a file; ".csv" selects CSV, anything else JSON.
SpaceInput read_space_input(const std::string& path, const LoadOptions& options = {});

/// Validates. Throws ValidationError<Rational> or ValidationError<double>.
AnySpace build_space(const SpaceInput& input);

AnySpace load_space(const std::string& path, const LoadOptions& options = {});

/// Standard space JSON. Euclidean spaces are written as point clouds so the
/// exact coordinates survive a round trip.
Json space_to_json(const AnySpace& space);

/// SHA-256 over a canonical rendering: sorted labels, normalized distances,
/// mode, base label.
std::string space_digest(const AnySpace& space);

template <class Scalar>
Json scalar_json(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    return format_rational(x);
  } else {
    if (!std::isfinite(x)) return format_double(x);
    return x;
  }
}

template <class Scalar>
Json optional_scalar_json(const std::optional<Scalar>& x) {
  return x ? scalar_json(*x) : Json("inf");
}

template <class Scalar>
Json violations_json(const std::vector<Violation<Scalar>>& violations, const std::vector<std::string>& labels) {
  Json out = Json::array();
  auto name = [&](Index i) -> Json {
    if (i >= 0 && i < static_cast<Index>(labels.size())) return labels[static_cast<std::size_t>(i)];
    return i;
  };
  for (const auto& v : violations) {
    Json j;
    j["kind"] = violation_kind_name<Scalar>(v.kind);
    if (v.i >= 0 || v.kind == Violation<Scalar>::Kind::base_out_of_range) j["i"] = name(v.i);
    if (v.j >= 0) j["j"] = name(v.j);
    if (v.k >= 0) j["k"] = name(v.k);
    if (v.kind == Violation<Scalar>::Kind::triangle) j["deficit"] = scalar_json(v.deficit);
    out.push_back(std::move(j));
  }
  return out;
}

template <class Scalar>
Json modulus_json(const ModulusTable<Scalar>& table) {
  Json rows = Json::array();
  for (const auto& e : table.entries) {
    Json row = Json::array({scalar_json(e.epsilon), optional_scalar_json(e.delta)});
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Scalar>
Json modulus_table_json(const MetricSpace<Scalar>& space, const ModulusTable<Scalar>& table) {
  Json out;
  out["p"] = space.label(table.p);
  out["q"] = space.label(table.q);
  Json entries = Json::array();
  for (const auto& e : table.entries) {
    Json row;
    row["epsilon"] = scalar_json(e.epsilon);
    row["delta"] = optional_scalar_json(e.delta);
    row["witness"] = e.witness ? Json(space.label(*e.witness)) : Json(nullptr);
    entries.push_back(std::move(row));
  }
  out["entries"] = std::move(entries);
  return out;
}

template <class Scalar>
Json verdict_json(const MetricSpace<Scalar>& space, const PairVerdict<Scalar>& v) {
  Json out;
  out["p"] = space.label(v.p);
  out["q"] = space.label(v.q);
  out["extreme"] = v.is_extreme;
  out["witness"] = v.witness_middle ? Json(space.label(*v.witness_middle)) : Json(nullptr);
  out["property_z"] = v.has_property_z;
  out["min_ratio"] = optional_scalar_json(v.min_ratio);
  out["modulus"] = modulus_json(v.modulus);
  out["notes"] = v.notes;
  return out;
}

template <class Scalar>
Json triples_json(const MetricSpace<Scalar>& space, const std::vector<AlignedTriple>& triples) {
  Json out = Json::array();
  for (const auto& t : triples)
    out.push_back(Json::array({space.label(t.middle), space.label(t.end1), space.label(t.end2)}));
  return out;
}

template <class Scalar>
Json concavity_json(const MetricSpace<Scalar>& space, const ConcavityReport<Scalar>& report) {
  Json out;
  out["space_digest"] = space_digest(AnySpace(space));
  Json pairs = Json::array();
  for (const auto& v : report.verdicts) pairs.push_back(verdict_json(space, v));
  out["pairs"] = std::move(pairs);
  out["concave"] = report.is_concave;
  out["aligned_triples"] = triples_json(space, report.violating_triples);
  return out;
}

template <class Scalar>
Json function_json(const MetricSpace<Scalar>& space, const Vector<Scalar>& f) {
  Json out = Json::object();
  for (Index x = 0; x < space.size(); ++x) out[space.label(x)] = scalar_json(f(x));
  return out;
}

template <class Scalar>
Json attainment_json(const MetricSpace<Scalar>& space, const AttainmentSet<Scalar>& set) {
  Json out;
  out["pair"] = Json::array({space.label(set.p), space.label(set.q)});
  Json members = Json::array();
  for (const auto& [x, y] : set.members) members.push_back(Json::array({space.label(x), space.label(y)}));
  out["members"] = std::move(members);
  Json intervals = Json::array();
  for (const auto& iv : set.intervals) {
    intervals.push_back(Json::array({space.label(iv.x), space.label(iv.y), scalar_json(iv.low), scalar_json(iv.high)}));
  }
  out["intervals"] = std::move(intervals);
  return out;
}

template <class Scalar>
Json vertex_certificate_json(const MetricSpace<Scalar>& space, Index p, Index q, const VertexCertificate<Scalar>& cert) {
  Json out;
  out["p"] = space.label(p);
  out["q"] = space.label(q);
  out["vertex"] = cert.vertex;
  if (cert.vertex) {
    Json functional = Json::object();
    const auto coords = coordinate_points(space);
    for (std::size_t i = 0; i < coords.size(); ++i)
      functional[space.label(coords[i])] = scalar_json(cert.functional(static_cast<Index>(i)));
    out["separating_functional"] = std::move(functional);
    out["margin"] = scalar_json(cert.margin);
  } else {
    Json weights = Json::object();
    for (const auto& [pair, w] : cert.weights) weights["u(" + space.label(pair.first) + "," + space.label(pair.second) + ")"] = scalar_json(w);
    out["weights"] = std::move(weights);
  }
  return out;
}

Json sequence_json(const SequenceDiagnostics& d);
Json strongly_exposed_json(const StronglyExposedDiagnostics& d);

/// CLI report wrapper; the payload alone is deterministic.
Json envelope(const std::string& command, const std::string& digest, Json payload, bool with_timestamp = true);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace freelip
