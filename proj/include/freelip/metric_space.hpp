#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "freelip/errors.hpp"
#include "freelip/scalar.hpp"

namespace freelip {

using Metadata = nlohmann::ordered_json;

inline constexpr double kDefaultRelativeTolerance = 1e-9;

/// Exact rational coordinates of points in a strictly convex (Euclidean)
/// space. Alignment is decided by collinearity and betweenness of the
/// coordinates, so it never depends on irrational distances.
class EuclideanGeometry {
 public:
  explicit EuclideanGeometry(Matrix<Rational> coords) : coords_(std::move(coords)) {}

  const Matrix<Rational>& coords() const { return coords_; }
  Index dimension() const { return coords_.cols(); }

  Rational squared_distance(Index i, Index j) const {
    return (coords_.row(i) - coords_.row(j)).squaredNorm();
  }

  /// x_i, x_j, x_k lie on a common line (Gram determinant of the two
  /// difference vectors vanishes).
  bool collinear(Index i, Index j, Index k) const {
    const Vector<Rational> u = (coords_.row(i) - coords_.row(k)).transpose();
    const Vector<Rational> v = (coords_.row(j) - coords_.row(k)).transpose();
    return u.squaredNorm() * v.squaredNorm() == u.dot(v) * u.dot(v);
  }

  /// x_r lies on the closed segment [x_p, x_q].
  bool between(Index r, Index p, Index q) const {
    if (!collinear(r, p, q)) return false;
    const Vector<Rational> u = (coords_.row(r) - coords_.row(p)).transpose();
    const Vector<Rational> w = (coords_.row(q) - coords_.row(r)).transpose();
    return u.dot(w) >= 0;
  }

  /// |r-p| + |r-q| - |p-q| evaluated without catastrophic cancellation.
  /// With u = r-p, v = r-q the excess equals
  ///   4 G / ((2|u||v| - 2 u.v) S)      for u.v <= 0,
  ///   2 (|u||v| + u.v) / S             for u.v > 0,
  /// where G = |u|^2|v|^2 - (u.v)^2 is exact and S = |u| + |v| + |p-q|.
  double excess(Index r, Index p, Index q) const {
    if (r == p || r == q) return 0.0;
    const Vector<Rational> u = (coords_.row(r) - coords_.row(p)).transpose();
    const Vector<Rational> v = (coords_.row(r) - coords_.row(q)).transpose();
    const Rational uu = u.squaredNorm();
    const Rational vv = v.squaredNorm();
    const Rational uv = u.dot(v);
    const Rational gram = uu * vv - uv * uv;
    const double nu = std::sqrt(to_double(uu));
    const double nv = std::sqrt(to_double(vv));
    const double uv_d = to_double(uv);
    const double s = nu + nv + std::sqrt(to_double(squared_distance(p, q)));
    if (uv <= 0) {
      if (gram == 0) return 0.0;
      return 4.0 * to_double(gram) / ((2.0 * nu * nv - 2.0 * uv_d) * s);
    }
    return 2.0 * (nu * nv + uv_d) / s;
  }

  EuclideanGeometry restricted(const std::vector<Index>& indices) const {
    Matrix<Rational> sub(static_cast<Index>(indices.size()), coords_.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) sub.row(static_cast<Index>(i)) = coords_.row(indices[i]);
    return EuclideanGeometry(std::move(sub));
  }

 private:
  Matrix<Rational> coords_;
};

template <class Scalar>
struct Violation {
  enum class Kind {
    nonzero_diagonal,
    asymmetric,
    negative_distance,
    zero_distance_distinct_points,
    triangle,
    duplicate_label,
    base_out_of_range,
  };
  Kind kind;
  Index i = -1;
  Index j = -1;
  Index k = -1;
  // For triangle violations: d(i,j) - d(i,k) - d(k,j) > 0.
  Scalar deficit = Scalar(0);
};

inline const char* violation_kind_name(int kind) {
  static constexpr const char* names[] = {"NonzeroDiagonal", "Asymmetric",
                                          "NegativeDistance", "ZeroDistanceDistinctPoints",
                                          "TriangleViolation", "DuplicateLabel",
                                          "BaseOutOfRange"};
  return names[kind];
}

template <class Scalar>
const char* violation_kind_name(typename Violation<Scalar>::Kind kind) {
  return violation_kind_name(static_cast<int>(kind));
}

template <class Scalar>
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation<Scalar>> violations)
      : Error(Errc::validation, std::to_string(violations.size()) + " metric axiom violation(s)"),
        violations_(std::move(violations)) {}
  const std::vector<Violation<Scalar>>& violations() const { return violations_; }

 private:
  std::vector<Violation<Scalar>> violations_;
};

/// Absolute tolerance for float-mode comparisons: relative tolerance times the
/// largest distance. Zero in exact mode.
template <class Scalar>
double absolute_tolerance(const Matrix<Scalar>& dist, double relative) {
  if constexpr (is_exact_v<Scalar>) {
    return 0.0;
  } else {
    double scale = dist.size() ? dist.cwiseAbs().maxCoeff() : 0.0;
    return relative * scale;
  }
}

/// Every violated metric axiom, in index order. Empty means the matrix is a
/// metric on the labelled points.
template <class Scalar>
std::vector<Violation<Scalar>> find_violations(const Matrix<Scalar>& dist,
                                               const std::vector<std::string>& labels, Index base,
                                               double relative_tolerance = kDefaultRelativeTolerance) {
  using V = Violation<Scalar>;
  if (dist.rows() != dist.cols() || dist.rows() != static_cast<Index>(labels.size())) {
    throw Error(Errc::dimension_mismatch, "distance matrix is " + std::to_string(dist.rows()) + "x" +
                                              std::to_string(dist.cols()) + " for " +
                                              std::to_string(labels.size()) + " labels");
  }
  const Index n = dist.rows();
  const double tol = absolute_tolerance(dist, relative_tolerance);
  const Scalar tol_s = Scalar(tol);
  std::vector<V> out;

  std::unordered_set<std::string> seen;
  for (Index i = 0; i < n; ++i) {
    if (!seen.insert(labels[i]).second) out.push_back({V::Kind::duplicate_label, i});
  }
  if (base < 0 || base >= n) out.push_back({V::Kind::base_out_of_range, base});

  for (Index i = 0; i < n; ++i) {
    if (abs_value(dist(i, i)) > tol_s) out.push_back({V::Kind::nonzero_diagonal, i, i});
    for (Index j = i + 1; j < n; ++j) {
      if (abs_value(Scalar(dist(i, j) - dist(j, i))) > tol_s) out.push_back({V::Kind::asymmetric, i, j});
      if (dist(i, j) < 0 || dist(j, i) < 0) {
        out.push_back({V::Kind::negative_distance, i, j});
      } else if (dist(i, j) == 0 || dist(j, i) == 0) {
        out.push_back({V::Kind::zero_distance_distinct_points, i, j});
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const Scalar deficit = dist(i, j) - dist(i, k) - dist(k, j);
        if (deficit > tol_s) out.push_back({V::Kind::triangle, i, j, k, deficit});
      }
    }
  }
  return out;
}

/// A validated finite pointed metric space. Immutable once constructed;
/// Scalar is Rational (exact mode) or double (float mode).
template <class Scalar>
class MetricSpace {
 public:
  static MetricSpace create(Matrix<Scalar> dist, std::vector<std::string> labels, Index base,
                            double relative_tolerance = kDefaultRelativeTolerance) {
    auto violations = find_violations(dist, labels, base, relative_tolerance);
    if (!violations.empty()) throw ValidationError<Scalar>(std::move(violations));
    MetricSpace space;
    // Symmetrize: float inputs may disagree within tolerance.
    for (Index i = 0; i < dist.rows(); ++i) {
      for (Index j = i + 1; j < dist.cols(); ++j) dist(j, i) = dist(i, j);
      dist(i, i) = Scalar(0);
    }
    space.dist_ = std::move(dist);
    space.labels_ = std::move(labels);
    space.base_ = base;
    space.relative_tolerance_ = is_exact_v<Scalar> ? 0.0 : relative_tolerance;
    space.tolerance_ = absolute_tolerance(space.dist_, relative_tolerance);
    return space;
  }

  static MetricSpace create(Matrix<Scalar> dist, std::vector<std::string> labels, Index base,
                            std::shared_ptr<const EuclideanGeometry> geometry,
                            double relative_tolerance = kDefaultRelativeTolerance) {
    MetricSpace space = create(std::move(dist), std::move(labels), base, relative_tolerance);
    space.geometry_ = std::move(geometry);
    return space;
  }

  Index size() const { return dist_.rows(); }
  const Scalar& d(Index i, Index j) const { return dist_(i, j); }
  const Matrix<Scalar>& distances() const { return dist_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  Index base() const { return base_; }
  NumberMode mode() const { return ScalarTraits<Scalar>::mode; }
  double tolerance() const { return tolerance_; }
  double relative_tolerance() const { return relative_tolerance_; }
  const EuclideanGeometry* geometry() const { return geometry_.get(); }
  const std::shared_ptr<const EuclideanGeometry>& geometry_ptr() const { return geometry_; }
  const Metadata& metadata() const { return metadata_; }

  Index index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw Error(Errc::unknown_label, "no point labelled '" + std::string(label) + "'");
    return static_cast<Index>(it - labels_.begin());
  }

  /// A nonnegative derived quantity (excess, gap) counts as zero.
  bool is_zero(const Scalar& v) const {
    if constexpr (is_exact_v<Scalar>) {
      return v == 0;
    } else {
      return std::abs(v) <= tolerance_;
    }
  }

  Scalar max_distance() const { return dist_.size() ? Scalar(dist_.maxCoeff()) : Scalar(0); }

  MetricSpace with_base(Index base) const {
    if (base < 0 || base >= size()) throw Error(Errc::unknown_label, "base index out of range");
    MetricSpace copy = *this;
    copy.base_ = base;
    return copy;
  }

  MetricSpace with_metadata(Metadata metadata) const {
    MetricSpace copy = *this;
    copy.metadata_ = std::move(metadata);
    return copy;
  }

  /// Sub-space on the given points, in the given order. The base point must be
  /// among them.
  MetricSpace restricted(const std::vector<Index>& indices) const {
    const Index m = static_cast<Index>(indices.size());
    Matrix<Scalar> sub(m, m);
    std::vector<std::string> labels;
    Index base = -1;
    for (Index a = 0; a < m; ++a) {
      labels.push_back(label(indices[a]));
      if (indices[a] == base_) base = a;
      for (Index b = 0; b < m; ++b) sub(a, b) = dist_(indices[a], indices[b]);
    }
    if (base < 0) throw Error(Errc::unknown_label, "restriction drops the base point");
    std::shared_ptr<const EuclideanGeometry> geometry;
    if (geometry_) geometry = std::make_shared<EuclideanGeometry>(geometry_->restricted(indices));
    MetricSpace out = create(std::move(sub), std::move(labels), base, geometry, is_exact_v<Scalar> ? kDefaultRelativeTolerance : relative_tolerance_);
    out.metadata_ = metadata_;
    return out;
  }

  /// Point i of the result is point perm[i] of this space.
  MetricSpace permuted(const std::vector<Index>& perm) const { return restricted(perm); }

 private:
  MetricSpace() = default;

  Matrix<Scalar> dist_;
  std::vector<std::string> labels_;
  Index base_ = 0;
  double tolerance_ = 0.0;
  double relative_tolerance_ = 0.0;
  std::shared_ptr<const EuclideanGeometry> geometry_;
  Metadata metadata_ = Metadata::object();
};

using ExactSpace = MetricSpace<Rational>;
using FloatSpace = MetricSpace<double>;

/// Every distance multiplied by c > 0.
template <class Scalar>
MetricSpace<Scalar> scaled(const MetricSpace<Scalar>& space, const Scalar& c) {
  Matrix<Scalar> dist = space.distances() * c;
  std::shared_ptr<const EuclideanGeometry> geometry;
  if (space.geometry()) {
    Rational factor;
    if constexpr (is_exact_v<Scalar>) {
      factor = c;
    } else {
      factor = rational_from_double(c);
    }
    geometry = std::make_shared<EuclideanGeometry>(Matrix<Rational>(space.geometry()->coords() * factor));
  }
  return MetricSpace<Scalar>::create(std::move(dist), space.labels(), space.base(), geometry,
                                     is_exact_v<Scalar> ? kDefaultRelativeTolerance : space.relative_tolerance());
}

enum class NormKind { l1, l2, linf };

const char* norm_name(NormKind norm);
NormKind parse_norm(std::string_view text);

/// Distances of rational points under the l1 or sup norm: exact.
ExactSpace polyhedral_norm_space(const Matrix<Rational>& coords, std::vector<std::string> labels,
                                 Index base, NormKind norm);

/// Euclidean distances in float mode; alignment stays exact through the
/// attached coordinates.
FloatSpace euclidean_space(const Matrix<Rational>& coords, std::vector<std::string> labels, Index base,
                           double relative_tolerance = kDefaultRelativeTolerance);

}  // namespace freelip
