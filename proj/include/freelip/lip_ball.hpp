#pragma once

#include <vector>

#include "freelip/lp.hpp"
#include "freelip/metric_space.hpp"

namespace freelip {

/// The unit ball of Lip_0 over a finite space as a linear program.
///
/// Variables are g_x = f(x) + d(x, e) >= 0 for every non-base point x, so
/// the box |f(x)| <= d(x, e) implied by f(e) = 0 becomes nonnegativity.
/// Each ordered pair (x, y) contributes f(x) - f(y) <= d(x, y); by the
/// triangle inequality every right-hand side is nonnegative.
template <class Scalar>
class LipBallProgram {
 public:
  explicit LipBallProgram(const MetricSpace<Scalar>& space)
      : space_(space), lp_(space.size() - 1) {
    for (Index x = 0; x < space.size(); ++x) {
      if (x == space.base()) {
        column_.push_back(-1);
      } else {
        column_.push_back(static_cast<Index>(points_.size()));
        points_.push_back(x);
      }
    }
    const Index n = space.size();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        // f(e) - f(y) <= d(e, y) is g_y >= 0, already a bound.
        if (x == y || x == space.base()) continue;
        Vector<Scalar> row = Vector<Scalar>::Zero(lp_.num_vars());
        add_term(row, x, Scalar(1));
        add_term(row, y, Scalar(-1));
        lp_.add_constraint(std::move(row), LinearProgram<Scalar>::Sense::le,
                           Scalar(space.d(x, y) + shift(x) - shift(y)));
      }
    }
  }

  /// Adds sum_x coeffs[x] f(x) (sense) rhs, with coefficients over all points.
  void add_function_constraint(const Vector<Scalar>& coeffs, typename LinearProgram<Scalar>::Sense sense,
                               const Scalar& rhs) {
    Vector<Scalar> row = Vector<Scalar>::Zero(lp_.num_vars());
    Scalar offset = Scalar(0);
    for (Index x = 0; x < space_.size(); ++x) {
      if (coeffs(x) == 0) continue;
      add_term(row, x, coeffs(x));
      offset += coeffs(x) * shift(x);
    }
    lp_.add_constraint(std::move(row), sense, Scalar(rhs + offset));
  }

  /// Maximizes (or minimizes) sum_x coeffs[x] f(x). On success the optimal
  /// function values over all points (base included) are written to f.
  LpResult<Scalar> optimize(const Vector<Scalar>& coeffs, bool maximize, Vector<Scalar>* f = nullptr) {
    Vector<Scalar> c = Vector<Scalar>::Zero(lp_.num_vars());
    Scalar offset = Scalar(0);
    for (Index x = 0; x < space_.size(); ++x) {
      if (coeffs(x) == 0) continue;
      add_term(c, x, coeffs(x));
      offset += coeffs(x) * shift(x);
    }
    lp_.set_objective(std::move(c));
    LpResult<Scalar> r = maximize ? lp_.maximize() : lp_.minimize();
    if (r.status != LpStatus::optimal) return r;
    r.value -= offset;
    if (f) {
      *f = Vector<Scalar>::Zero(space_.size());
      for (Index x = 0; x < space_.size(); ++x) {
        if (x != space_.base()) (*f)(x) = r.x(column_[static_cast<std::size_t>(x)]) - shift(x);
      }
    }
    return r;
  }

  /// Non-base points in coordinate order.
  const std::vector<Index>& points() const { return points_; }

 private:
  Scalar shift(Index x) const { return x == space_.base() ? Scalar(0) : space_.d(x, space_.base()); }

  void add_term(Vector<Scalar>& row, Index x, const Scalar& a) const {
    if (x != space_.base()) row(column_[static_cast<std::size_t>(x)]) += a;
  }

  const MetricSpace<Scalar>& space_;
  LinearProgram<Scalar> lp_;
  std::vector<Index> column_;
  std::vector<Index> points_;
};

}  // namespace freelip
