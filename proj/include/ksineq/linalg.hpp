/**
 * Exact linear algebra over the rationals: reduced row echelon form, rank,
 * null-space bases, and affine parameterizations of solution sets.
 *
 * Everything here operates on Eigen matrices with a Rational scalar, so
 * results are exact for any integer or rational input.
 */

#ifndef KSINEQ_LINALG_HPP
#define KSINEQ_LINALG_HPP

#include <vector>

#include <Eigen/Dense>

#include "ksineq/rational.hpp"

namespace ksineq {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/**
 * Reduce `mat` in place to reduced row echelon form.
 *
 * @param mat Matrix to reduce; overwritten with its RREF.
 * @returns Pivot column indices, one per nonzero row, strictly increasing.
 */
inline std::vector<Eigen::Index> reduced_row_echelon(RationalMatrix& mat) {
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < mat.cols() && row < mat.rows(); ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = row; r < mat.rows(); ++r) {
      if (mat(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) mat.row(pivot).swap(mat.row(row));
    const Rational lead = mat(row, col);
    if (lead != 1) mat.row(row) /= lead;
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      if (r == row || mat(r, col) == 0) continue;
      // Copy the factor: the lazy row expression would otherwise read the
      // coefficient being eliminated mid-update.
      const Rational factor = mat(r, col);
      mat.row(r) -= factor * mat.row(row);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

/// Rank of a rational matrix, computed exactly.
inline Eigen::Index rank(RationalMatrix mat) {
  return static_cast<Eigen::Index>(reduced_row_echelon(mat).size());
}

/**
 * Basis of the null space of `mat`, returned as the columns of an
 * n-by-k matrix (k = nullity). Each basis vector sets one free variable
 * to 1 and the remaining free variables to 0, so the basis has full
 * column rank by construction. Free columns are visited in increasing
 * order, which makes the result deterministic.
 */
inline RationalMatrix null_space(RationalMatrix mat) {
  const Eigen::Index n = mat.cols();
  const std::vector<Eigen::Index> pivot_cols = reduced_row_echelon(mat);
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (const Eigen::Index c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;

  const Eigen::Index nullity = n - static_cast<Eigen::Index>(pivot_cols.size());
  RationalMatrix basis = RationalMatrix::Zero(n, nullity);
  Eigen::Index vec = 0;
  for (Eigen::Index free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[static_cast<std::size_t>(free_col)]) continue;
    basis(free_col, vec) = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      basis(pivot_cols[i], vec) = -mat(static_cast<Eigen::Index>(i), free_col);
    }
    ++vec;
  }
  return basis;
}

/**
 * Affine parameterization of {x : A x = b}. When the system is consistent
 * the solution set is exactly {particular + basis * t : t free}, with
 * `basis` of full column rank (possibly zero columns).
 */
struct AffineSolution {
  bool consistent = false;
  RationalVector particular;
  RationalMatrix basis;
};

/**
 * Solve A x = b exactly.
 *
 * The particular solution assigns 0 to every free variable. The null-space
 * basis matches null_space(A) column for column.
 */
inline AffineSolution solve_affine(const RationalMatrix& A, const RationalVector& b) {
  const Eigen::Index n = A.cols();
  RationalMatrix aug(A.rows(), n + 1);
  aug.leftCols(n) = A;
  aug.col(n) = b;
  const std::vector<Eigen::Index> pivot_cols = reduced_row_echelon(aug);

  AffineSolution out;
  if (!pivot_cols.empty() && pivot_cols.back() == n) return out;  // 0 = nonzero row
  out.consistent = true;

  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (const Eigen::Index c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;

  out.particular = RationalVector::Zero(n);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    out.particular(pivot_cols[i]) = aug(static_cast<Eigen::Index>(i), n);
  }

  const Eigen::Index nullity = n - static_cast<Eigen::Index>(pivot_cols.size());
  out.basis = RationalMatrix::Zero(n, nullity);
  Eigen::Index vec = 0;
  for (Eigen::Index free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[static_cast<std::size_t>(free_col)]) continue;
    out.basis(free_col, vec) = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      out.basis(pivot_cols[i], vec) = -aug(static_cast<Eigen::Index>(i), free_col);
    }
    ++vec;
  }
  return out;
}

}  // namespace ksineq

#endif  // KSINEQ_LINALG_HPP
