#pragma once

#include <vector>

#include "freelip/errors.hpp"
#include "freelip/scalar.hpp"

namespace freelip {

enum class LpStatus { optimal, infeasible, unbounded };

template <class Scalar>
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Scalar value = Scalar(0);
  Vector<Scalar> x;
};

/// Dense two-phase primal simplex with Bland's rule. With Scalar = Rational
/// every pivot is exact and the method always terminates; with double a
/// fixed epsilon guards the sign tests.
///
///   maximize c'x  subject to  a_i'x (<=|>=|=) b_i,  x_j >= 0 unless free.
template <class Scalar>
class LinearProgram {
 public:
  enum class Sense { le, ge, eq };

  explicit LinearProgram(Index num_vars)
      : num_vars_(num_vars), free_(static_cast<std::size_t>(num_vars), false),
        objective_(Vector<Scalar>::Zero(num_vars)) {}

  Index num_vars() const { return num_vars_; }
  Index num_constraints() const { return static_cast<Index>(rows_.size()); }

  void set_free(Index j, bool is_free = true) { free_[static_cast<std::size_t>(j)] = is_free; }

  void add_constraint(Vector<Scalar> coeffs, Sense sense, Scalar rhs) {
    if (coeffs.size() != num_vars_) throw Error(Errc::dimension_mismatch, "constraint width differs from variable count");
    rows_.push_back({std::move(coeffs), sense, std::move(rhs)});
  }

  void set_objective(Vector<Scalar> c) {
    if (c.size() != num_vars_) throw Error(Errc::dimension_mismatch, "objective width differs from variable count");
    objective_ = std::move(c);
  }

  LpResult<Scalar> maximize() const { return solve(objective_); }

  LpResult<Scalar> minimize() const {
    LpResult<Scalar> r = solve(Vector<Scalar>(-objective_));
    r.value = -r.value;
    return r;
  }

 private:
  struct Row {
    Vector<Scalar> coeffs;
    Sense sense;
    Scalar rhs;
  };

  struct Tableau {
    Matrix<Scalar> t;  // constraint rows, last column is the right-hand side
    Vector<Scalar> reduced;  // reduced costs, last entry is minus the objective
    std::vector<Index> basis;
    Index cols = 0;  // structural + slack + artificial columns (rhs excluded)
  };

  static bool positive(const Scalar& v) { return v > ScalarTraits<Scalar>::lp_epsilon(); }
  static bool nonzero(const Scalar& v) { return abs_value(v) > ScalarTraits<Scalar>::lp_epsilon(); }

  static void pivot(Tableau& tab, Index row, Index col) {
    auto& t = tab.t;
    const Index width = t.cols();
    const Scalar inv = Scalar(1) / t(row, col);
    for (Index j = 0; j < width; ++j) {
      if (t(row, j) != 0) t(row, j) *= inv;
    }
    t(row, col) = Scalar(1);
    for (Index i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      const Scalar f = t(i, col);
      if (f == 0) continue;
      for (Index j = 0; j < width; ++j) {
        if (t(row, j) != 0) t(i, j) -= f * t(row, j);
      }
      t(i, col) = Scalar(0);
    }
    const Scalar f = tab.reduced(col);
    if (f != 0) {
      for (Index j = 0; j < width; ++j) {
        if (t(row, j) != 0) tab.reduced(j) -= f * t(row, j);
      }
      tab.reduced(col) = Scalar(0);
    }
    tab.basis[static_cast<std::size_t>(row)] = col;
  }

  // Runs simplex iterations over columns [0, usable). Returns false when
  // the objective is unbounded.
  static bool iterate(Tableau& tab, Index usable) {
    auto& t = tab.t;
    const Index rhs = t.cols() - 1;
    for (;;) {
      Index enter = -1;
      for (Index j = 0; j < usable; ++j) {
        if (positive(tab.reduced(j))) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      Scalar best_ratio = Scalar(0);
      for (Index i = 0; i < t.rows(); ++i) {
        if (!positive(t(i, enter))) continue;
        const Scalar ratio = t(i, rhs) / t(i, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && tab.basis[static_cast<std::size_t>(i)] < tab.basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(tab, leave, enter);
    }
  }

  static void price(Tableau& tab, const Vector<Scalar>& cost) {
    tab.reduced = Vector<Scalar>::Zero(tab.t.cols());
    tab.reduced.head(cost.size()) = cost;
    for (Index i = 0; i < tab.t.rows(); ++i) {
      const Index b = tab.basis[static_cast<std::size_t>(i)];
      const Scalar cb = b < cost.size() ? cost(b) : Scalar(0);
      if (cb == 0) continue;
      for (Index j = 0; j < tab.t.cols(); ++j) {
        if (tab.t(i, j) != 0) tab.reduced(j) -= cb * tab.t(i, j);
      }
    }
  }

  LpResult<Scalar> solve(const Vector<Scalar>& c) const {
    // Column layout: split structural columns, then slacks, then artificials.
    std::vector<Index> pos_col(static_cast<std::size_t>(num_vars_)), neg_col(static_cast<std::size_t>(num_vars_), -1);
    Index n_struct = 0;
    for (Index j = 0; j < num_vars_; ++j) {
      pos_col[static_cast<std::size_t>(j)] = n_struct++;
      if (free_[static_cast<std::size_t>(j)]) neg_col[static_cast<std::size_t>(j)] = n_struct++;
    }
    const Index m = num_constraints();
    std::vector<Sense> senses;
    std::vector<bool> flip;
    Index n_slack = 0, n_art = 0;
    for (const Row& row : rows_) {
      const bool f = row.rhs < 0;
      Sense s = row.sense;
      if (f && s != Sense::eq) s = (s == Sense::le) ? Sense::ge : Sense::le;
      senses.push_back(s);
      flip.push_back(f);
      if (s != Sense::eq) ++n_slack;
      if (s != Sense::le) ++n_art;
    }
    const Index first_art = n_struct + n_slack;
    Tableau tab;
    tab.cols = first_art + n_art;
    tab.t = Matrix<Scalar>::Zero(m, tab.cols + 1);
    tab.basis.assign(static_cast<std::size_t>(m), -1);
    Index slack = n_struct, art = first_art;
    for (Index i = 0; i < m; ++i) {
      const Row& row = rows_[static_cast<std::size_t>(i)];
      const Scalar sign = flip[static_cast<std::size_t>(i)] ? Scalar(-1) : Scalar(1);
      for (Index j = 0; j < num_vars_; ++j) {
        if (row.coeffs(j) == 0) continue;
        const Scalar a = sign * row.coeffs(j);
        tab.t(i, pos_col[static_cast<std::size_t>(j)]) = a;
        if (neg_col[static_cast<std::size_t>(j)] >= 0) tab.t(i, neg_col[static_cast<std::size_t>(j)]) = -a;
      }
      tab.t(i, tab.cols) = sign * row.rhs;
      switch (senses[static_cast<std::size_t>(i)]) {
        case Sense::le:
          tab.t(i, slack) = Scalar(1);
          tab.basis[static_cast<std::size_t>(i)] = slack++;
          break;
        case Sense::ge:
          tab.t(i, slack++) = Scalar(-1);
          tab.t(i, art) = Scalar(1);
          tab.basis[static_cast<std::size_t>(i)] = art++;
          break;
        case Sense::eq:
          tab.t(i, art) = Scalar(1);
          tab.basis[static_cast<std::size_t>(i)] = art++;
          break;
      }
    }

    LpResult<Scalar> result;
    if (n_art > 0) {
      Vector<Scalar> phase1 = Vector<Scalar>::Zero(tab.cols);
      for (Index j = first_art; j < tab.cols; ++j) phase1(j) = Scalar(-1);
      price(tab, phase1);
      if (!iterate(tab, tab.cols)) throw Error(Errc::lp_failure, "phase one reported unbounded");
      if (positive(tab.reduced(tab.cols))) {
        result.status = LpStatus::infeasible;
        return result;
      }
      // Drive artificials out of the basis; rows where that is impossible are
      // redundant and dropped.
      std::vector<Index> keep;
      for (Index i = 0; i < tab.t.rows(); ++i) {
        if (tab.basis[static_cast<std::size_t>(i)] < first_art) {
          keep.push_back(i);
          continue;
        }
        Index col = -1;
        for (Index j = 0; j < first_art; ++j) {
          if (nonzero(tab.t(i, j))) {
            col = j;
            break;
          }
        }
        if (col >= 0) {
          pivot(tab, i, col);
          keep.push_back(i);
        }
      }
      if (static_cast<Index>(keep.size()) != tab.t.rows()) {
        Matrix<Scalar> t(static_cast<Index>(keep.size()), tab.t.cols());
        std::vector<Index> basis;
        for (std::size_t r = 0; r < keep.size(); ++r) {
          t.row(static_cast<Index>(r)) = tab.t.row(keep[r]);
          basis.push_back(tab.basis[static_cast<std::size_t>(keep[r])]);
        }
        tab.t = std::move(t);
        tab.basis = std::move(basis);
      }
    }

    Vector<Scalar> phase2 = Vector<Scalar>::Zero(tab.cols);
    for (Index j = 0; j < num_vars_; ++j) {
      phase2(pos_col[static_cast<std::size_t>(j)]) = c(j);
      if (neg_col[static_cast<std::size_t>(j)] >= 0) phase2(neg_col[static_cast<std::size_t>(j)]) = -c(j);
    }
    price(tab, phase2);
    if (!iterate(tab, first_art)) {
      result.status = LpStatus::unbounded;
      return result;
    }

    Vector<Scalar> column_value = Vector<Scalar>::Zero(tab.cols);
    for (Index i = 0; i < tab.t.rows(); ++i) column_value(tab.basis[static_cast<std::size_t>(i)]) = tab.t(i, tab.cols);
    result.status = LpStatus::optimal;
    result.x = Vector<Scalar>::Zero(num_vars_);
    for (Index j = 0; j < num_vars_; ++j) {
      result.x(j) = column_value(pos_col[static_cast<std::size_t>(j)]);
      if (neg_col[static_cast<std::size_t>(j)] >= 0) result.x(j) -= column_value(neg_col[static_cast<std::size_t>(j)]);
    }
    result.value = c.dot(result.x);
    return result;
  }

  Index num_vars_;
  std::vector<bool> free_;
  Vector<Scalar> objective_;
  std::vector<Row> rows_;
};

}  // namespace freelip
