/**
 * Exact primal simplex for box-constrained rational linear programs:
 *
 *   maximize c.w   subject to   A w = b,   0 <= w <= 1.
 *
 * Dependent rows of A are eliminated up front, feasibility is established
 * once with artificial variables, and later calls to maximize() warm-start
 * from the previous basis. Intended for repeated small instances (many
 * objectives over one feasible region), not for large-scale LP.
 */

#ifndef KSINEQ_SIMPLEX_HPP
#define KSINEQ_SIMPLEX_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ksineq/linalg.hpp"

namespace ksineq {

class BoundedSimplex {
 public:
  BoundedSimplex(const RationalMatrix& A, const RationalVector& b) : n_(A.cols()) {
    RationalMatrix aug(A.rows(), n_ + 1);
    aug.leftCols(n_) = A;
    aug.col(n_) = b;
    const std::vector<Eigen::Index> pivot_cols = reduced_row_echelon(aug);
    if (!pivot_cols.empty() && pivot_cols.back() == n_) return;  // 0 = nonzero: no solution at all

    rows_ = static_cast<int>(pivot_cols.size());
    ncols_ = static_cast<int>(n_) + rows_;
    tab_.assign(static_cast<std::size_t>(rows_), std::vector<Rational>(static_cast<std::size_t>(ncols_), Rational(0)));
    xb_.assign(static_cast<std::size_t>(rows_), Rational(0));
    basis_.resize(static_cast<std::size_t>(rows_));
    status_.assign(static_cast<std::size_t>(ncols_), Status::AT_LOWER);
    bounded_.assign(static_cast<std::size_t>(ncols_), true);
    enabled_.assign(static_cast<std::size_t>(ncols_), true);

    for (int i = 0; i < rows_; ++i) {
      const bool flip = aug(i, n_) < 0;  // keep artificial start values nonnegative
      for (Eigen::Index j = 0; j < n_; ++j) {
        tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = flip ? Rational(-aug(i, j)) : aug(i, j);
      }
      tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(n_ + i)] = 1;
      xb_[static_cast<std::size_t>(i)] = flip ? Rational(-aug(i, n_)) : aug(i, n_);
      basis_[static_cast<std::size_t>(i)] = static_cast<int>(n_) + i;
      status_[static_cast<std::size_t>(n_ + i)] = Status::BASIC;
      bounded_[static_cast<std::size_t>(n_ + i)] = false;  // artificials live in [0, inf)
    }

    // Phase 1: drive the artificial variables to zero.
    std::vector<Rational> phase1(static_cast<std::size_t>(ncols_), Rational(0));
    for (int j = static_cast<int>(n_); j < ncols_; ++j) phase1[static_cast<std::size_t>(j)] = -1;
    run(phase1);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] >= static_cast<int>(n_) && xb_[static_cast<std::size_t>(i)] != 0) {
        return;  // residual infeasibility: the box excludes every solution of Aw = b
      }
    }
    // Swap any artificial still sitting in the basis (at value 0) for a
    // structural variable; always possible because the rows are independent.
    for (int i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < static_cast<int>(n_)) continue;
      int j = 0;
      while (j < static_cast<int>(n_) && tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0) ++j;
      if (j == static_cast<int>(n_)) throw std::logic_error("dependent row survived preprocessing");
      const int old = basis_[static_cast<std::size_t>(i)];
      xb_[static_cast<std::size_t>(i)] = status_[static_cast<std::size_t>(j)] == Status::AT_UPPER ? Rational(1) : Rational(0);
      basis_[static_cast<std::size_t>(i)] = j;
      status_[static_cast<std::size_t>(old)] = Status::AT_LOWER;
      status_[static_cast<std::size_t>(j)] = Status::BASIC;
      eliminate(i, j);
    }
    for (int j = static_cast<int>(n_); j < ncols_; ++j) enabled_[static_cast<std::size_t>(j)] = false;
    feasible_ = true;
  }

  bool feasible() const { return feasible_; }

  /// Optimal value of c.w; the optimal w is available via solution().
  Rational maximize(const RationalVector& c) {
    if (!feasible_) throw std::logic_error("maximize() on an infeasible program");
    if (c.size() != n_) throw std::invalid_argument("objective length mismatch");
    std::vector<Rational> cost(static_cast<std::size_t>(ncols_), Rational(0));
    for (Eigen::Index j = 0; j < n_; ++j) cost[static_cast<std::size_t>(j)] = c(j);
    run(cost);
    Rational value = 0;
    const RationalVector w = solution();
    for (Eigen::Index j = 0; j < n_; ++j) value += c(j) * w(j);
    return value;
  }

  RationalVector solution() const {
    RationalVector w(n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      w(j) = status_[static_cast<std::size_t>(j)] == Status::AT_UPPER ? Rational(1) : Rational(0);
    }
    for (int i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < static_cast<int>(n_)) {
        w(basis_[static_cast<std::size_t>(i)]) = xb_[static_cast<std::size_t>(i)];
      }
    }
    return w;
  }

 private:
  enum class Status : unsigned char { AT_LOWER, AT_UPPER, BASIC };
  static constexpr int kBlandThreshold = 25;    // degenerate pivots before anti-cycling kicks in
  static constexpr std::int64_t kMaxIter = 1'000'000;

  void eliminate(int pivot_row, int pivot_col) {
    auto& prow = tab_[static_cast<std::size_t>(pivot_row)];
    const Rational piv = prow[static_cast<std::size_t>(pivot_col)];
    if (piv != 1) {
      for (auto& entry : prow) {
        if (entry != 0) entry /= piv;
      }
    }
    for (int i = 0; i < rows_; ++i) {
      if (i == pivot_row) continue;
      auto& row = tab_[static_cast<std::size_t>(i)];
      const Rational factor = row[static_cast<std::size_t>(pivot_col)];
      if (factor == 0) continue;
      for (int j = 0; j < ncols_; ++j) {
        if (prow[static_cast<std::size_t>(j)] != 0) {
          row[static_cast<std::size_t>(j)] -= factor * prow[static_cast<std::size_t>(j)];
        }
      }
    }
  }

  // Pivot until no improving nonbasic variable remains. Dantzig pricing,
  // falling back to Bland's rule after a run of degenerate pivots so the
  // iteration provably terminates.
  void run(const std::vector<Rational>& cost) {
    int degenerate_streak = 0;
    for (std::int64_t iter = 0; iter < kMaxIter; ++iter) {
      std::vector<std::pair<int, Rational>> priced_rows;  // rows whose basic variable has nonzero cost
      for (int i = 0; i < rows_; ++i) {
        const Rational& cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
        if (cb != 0) priced_rows.emplace_back(i, cb);
      }
      const bool bland = degenerate_streak >= kBlandThreshold;
      int enter = -1;
      int sigma = 0;
      Rational best_score;
      for (int j = 0; j < ncols_; ++j) {
        if (!enabled_[static_cast<std::size_t>(j)] || status_[static_cast<std::size_t>(j)] == Status::BASIC) continue;
        Rational d = cost[static_cast<std::size_t>(j)];
        for (const auto& [i, cb] : priced_rows) {
          const Rational& t = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          if (t != 0) d -= cb * t;
        }
        int dir = 0;
        if (status_[static_cast<std::size_t>(j)] == Status::AT_LOWER && d > 0) dir = 1;
        if (status_[static_cast<std::size_t>(j)] == Status::AT_UPPER && d < 0) dir = -1;
        if (dir == 0) continue;
        const Rational score = dir > 0 ? d : Rational(-d);
        if (enter < 0 || (!bland && score > best_score)) {
          enter = j;
          sigma = dir;
          best_score = score;
        }
        if (bland) break;  // lowest eligible index
      }
      if (enter < 0) return;  // optimal

      // Ratio test: how far can the entering variable move before a basic
      // variable (or the entering variable itself) hits a bound.
      bool limited = bounded_[static_cast<std::size_t>(enter)];
      Rational t_best = limited ? Rational(1) : Rational(0);
      int leave_row = -1;
      bool leave_at_upper = false;
      for (int i = 0; i < rows_; ++i) {
        const Rational& coef = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (coef == 0) continue;
        const Rational g = sigma > 0 ? Rational(-coef) : coef;  // d(x_basic)/dt
        Rational t_i;
        bool hits_upper = false;
        if (g > 0) {
          const int bv = basis_[static_cast<std::size_t>(i)];
          if (!bounded_[static_cast<std::size_t>(bv)]) continue;
          t_i = (Rational(1) - xb_[static_cast<std::size_t>(i)]) / g;
          hits_upper = true;
        } else {
          t_i = xb_[static_cast<std::size_t>(i)] / Rational(-g);
        }
        const bool better =
            !limited || t_i < t_best ||
            (t_i == t_best && leave_row >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave_row)]);
        if (better) {
          limited = true;
          t_best = t_i;
          leave_row = i;
          leave_at_upper = hits_upper;
        }
      }
      if (!limited) throw std::logic_error("unbounded direction in a box-constrained program");

      if (t_best != 0) {
        for (int i = 0; i < rows_; ++i) {
          const Rational& coef = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
          if (coef != 0) xb_[static_cast<std::size_t>(i)] -= Rational(sigma) * t_best * coef;
        }
        degenerate_streak = 0;
      } else {
        ++degenerate_streak;
      }

      if (leave_row < 0) {
        // The entering variable traversed its whole span: flip bounds.
        status_[static_cast<std::size_t>(enter)] =
            status_[static_cast<std::size_t>(enter)] == Status::AT_LOWER ? Status::AT_UPPER : Status::AT_LOWER;
        continue;
      }
      const int old = basis_[static_cast<std::size_t>(leave_row)];
      const Rational entering_value =
          status_[static_cast<std::size_t>(enter)] == Status::AT_LOWER ? Rational(sigma) * t_best
                                                                       : Rational(1) + Rational(sigma) * t_best;
      status_[static_cast<std::size_t>(old)] = leave_at_upper ? Status::AT_UPPER : Status::AT_LOWER;
      status_[static_cast<std::size_t>(enter)] = Status::BASIC;
      basis_[static_cast<std::size_t>(leave_row)] = enter;
      xb_[static_cast<std::size_t>(leave_row)] = entering_value;
      eliminate(leave_row, enter);
    }
    throw std::logic_error("simplex iteration limit reached");
  }

  Eigen::Index n_ = 0;  // structural variables
  int rows_ = 0;
  int ncols_ = 0;
  bool feasible_ = false;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> xb_;
  std::vector<int> basis_;
  std::vector<Status> status_;
  std::vector<bool> bounded_;  // has upper bound 1 (false for artificials)
  std::vector<bool> enabled_;
};

}  // namespace ksineq

#endif  // KSINEQ_SIMPLEX_HPP
