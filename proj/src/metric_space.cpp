#include "freelip/metric_space.hpp"

namespace freelip {

const char* norm_name(NormKind norm) {
  switch (norm) {
    case NormKind::l1: return "l1";
    case NormKind::l2: return "l2";
    case NormKind::linf: return "linf";
  }
  return "?";
}

NormKind parse_norm(std::string_view text) {
  if (text == "l1") return NormKind::l1;
  if (text == "l2") return NormKind::l2;
  if (text == "linf") return NormKind::linf;
  throw Error(Errc::parse, "unknown norm '" + std::string(text) + "' (expected l1, l2 or linf)");
}

ExactSpace polyhedral_norm_space(const Matrix<Rational>& coords, std::vector<std::string> labels,
                                 Index base, NormKind norm) {
  if (norm == NormKind::l2) throw Error(Errc::parse, "l2 distances are not rational in general");
  const Index n = coords.rows();
  Matrix<Rational> dist = Matrix<Rational>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Vector<Rational> diff = (coords.row(i) - coords.row(j)).transpose();
      Rational value = 0;
      for (Index c = 0; c < diff.size(); ++c) {
        const Rational a = abs_value(diff(c));
        if (norm == NormKind::l1) {
          value += a;
        } else if (a > value) {
          value = a;
        }
      }
      dist(i, j) = dist(j, i) = value;
    }
  }
  return ExactSpace::create(std::move(dist), std::move(labels), base);
}

FloatSpace euclidean_space(const Matrix<Rational>& coords, std::vector<std::string> labels, Index base,
                           double relative_tolerance) {
  auto geometry = std::make_shared<const EuclideanGeometry>(coords);
  const Index n = coords.rows();
  Matrix<double> dist = Matrix<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) = std::sqrt(to_double(geometry->squared_distance(i, j)));
    }
  }
  return FloatSpace::create(std::move(dist), std::move(labels), base, std::move(geometry),
                            relative_tolerance);
}

}  // namespace freelip
