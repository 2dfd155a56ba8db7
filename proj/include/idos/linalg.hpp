#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "idos/errors.hpp"
#include "idos/field.hpp"

namespace idos {

// Dense row-major matrix over a single field context.
class FieldMatrix {
 public:
  FieldMatrix(const FieldCtx& ctx, int rows, int cols)
      : rows_(rows), cols_(cols), ctx_(&ctx), entries_(static_cast<std::size_t>(rows) * cols, ctx.zero()) {
    if (rows < 0 || cols < 0) throw BadParams("matrix dimensions must be non-negative");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldCtx& ctx() const { return *ctx_; }

  FieldElement& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  const FieldElement& at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }

  static FieldMatrix identity(const FieldCtx& ctx, int n) {
    FieldMatrix m(ctx, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = ctx.one();
    return m;
  }

  FieldMatrix submatrix(const std::vector<int>& row_ids, const std::vector<int>& col_ids) const {
    FieldMatrix m(*ctx_, static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size()));
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
      for (std::size_t j = 0; j < col_ids.size(); ++j) {
        m.at(static_cast<int>(i), static_cast<int>(j)) = at(row_ids[i], col_ids[j]);
      }
    }
    return m;
  }

 private:
  int rows_, cols_;
  const FieldCtx* ctx_;
  std::vector<FieldElement> entries_;
};

inline std::vector<FieldElement> mat_vec_mul(const FieldMatrix& a,
                                             const std::vector<FieldElement>& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw BadParams("matrix-vector size mismatch");
  const FieldCtx& f = a.ctx();
  std::vector<FieldElement> y(a.rows(), f.zero());
  for (int i = 0; i < a.rows(); ++i) {
    FieldElement acc = f.zero();
    for (int j = 0; j < a.cols(); ++j) {
      acc = f.add(acc, f.mul(a.at(i, j), x[j]));
    }
    y[i] = acc;
  }
  return y;
}

namespace detail {

// Forward elimination with first-nonzero pivoting (no magnitude order exists
// in a finite field; deterministic row order keeps runs reproducible).
// Eliminates within the leading `lead` columns; trailing columns ride along
// as the augmented part.
struct EliminationResult {
  FieldMatrix mat;
  std::vector<int> pivot_rows;  // pivot_rows[p] = row holding pivot p
  std::vector<int> pivot_cols;
  FieldElement pivot_product;
  bool swapped = false;
};

inline EliminationResult eliminate(FieldMatrix a, int lead) {
  const FieldCtx& f = a.ctx();
  EliminationResult res{std::move(a), {}, {}, f.one(), false};
  FieldMatrix& m = res.mat;
  int pivot_row = 0;
  for (int col = 0; col < lead && pivot_row < m.rows(); ++col) {
    int sel = -1;
    for (int r = pivot_row; r < m.rows(); ++r) {
      if (!m.at(r, col).is_zero()) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != pivot_row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(pivot_row, j));
      res.swapped = true;
    }
    res.pivot_product = f.mul(res.pivot_product, m.at(pivot_row, col));
    const FieldElement inv_p = f.inv(m.at(pivot_row, col));
    for (int r = pivot_row + 1; r < m.rows(); ++r) {
      if (m.at(r, col).is_zero()) continue;
      const FieldElement factor = f.mul(m.at(r, col), inv_p);
      for (int j = col; j < m.cols(); ++j) {
        m.at(r, j) = f.add(m.at(r, j), f.mul(factor, m.at(pivot_row, j)));
      }
    }
    res.pivot_rows.push_back(pivot_row);
    res.pivot_cols.push_back(col);
    ++pivot_row;
  }
  return res;
}

}  // namespace detail

inline int mat_rank(const FieldMatrix& a) {
  return static_cast<int>(detail::eliminate(a, a.cols()).pivot_cols.size());
}

// Determinant by elimination. Row swaps carry no sign in characteristic 2.
inline FieldElement mat_det(const FieldMatrix& a) {
  if (a.rows() != a.cols()) throw BadParams("determinant requires a square matrix");
  const FieldCtx& f = a.ctx();
  if (a.rows() == 0) return f.one();
  auto res = detail::eliminate(a, a.cols());
  if (static_cast<int>(res.pivot_cols.size()) < a.cols()) return f.zero();
  return res.pivot_product;
}

// Literal Leibniz-formula determinant, as an independent cross-check oracle.
// Signs collapse to +1 in characteristic 2.
inline FieldElement mat_det_leibniz(const FieldMatrix& a) {
  if (a.rows() != a.cols()) throw BadParams("determinant requires a square matrix");
  const int n = a.rows();
  if (n > 6) throw TooLarge("Leibniz determinant limited to size 6");
  const FieldCtx& f = a.ctx();
  if (n == 0) return f.one();
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  FieldElement acc = f.zero();
  do {
    FieldElement term = f.one();
    for (int i = 0; i < n && !term.is_zero(); ++i) {
      term = f.mul(term, a.at(sigma[i], i));
    }
    acc = f.add(acc, term);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return acc;
}

// Solves A x = b for square or tall A. Requires rank(A) = cols; tall systems
// must be consistent (surplus received symbols only add equations).
inline std::vector<FieldElement> mat_solve(const FieldMatrix& a,
                                           const std::vector<FieldElement>& b) {
  if (a.rows() < a.cols()) throw BadParams("mat_solve requires rows >= cols");
  if (static_cast<int>(b.size()) != a.rows()) throw BadParams("rhs size mismatch");
  const FieldCtx& f = a.ctx();
  FieldMatrix aug(f, a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  auto res = detail::eliminate(std::move(aug), a.cols());
  FieldMatrix& m = res.mat;
  const int rank = static_cast<int>(res.pivot_cols.size());
  if (rank < a.cols()) throw RankDeficient("coefficient matrix does not have full column rank");
  for (int r = rank; r < m.rows(); ++r) {
    if (!m.at(r, a.cols()).is_zero()) {
      throw Inconsistent("tall system has no solution");
    }
  }
  // Back substitution; pivots are on rows 0..rank-1 with pivot_cols[p] = p
  // (full column rank means every column got a pivot).
  std::vector<FieldElement> x(a.cols(), f.zero());
  for (int p = rank - 1; p >= 0; --p) {
    FieldElement acc = m.at(p, a.cols());
    for (int j = p + 1; j < a.cols(); ++j) {
      acc = f.add(acc, f.mul(m.at(p, j), x[j]));
    }
    x[p] = f.mul(acc, f.inv(m.at(p, p)));
  }
  return x;
}

// Square boolean support pattern.
struct BoolMatrix {
  int rows = 0, cols = 0;
  std::vector<std::uint8_t> entries;  // row-major

  bool at(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j] != 0; }
  void set(int i, int j, bool v) {
    entries[static_cast<std::size_t>(i) * cols + j] = v ? 1 : 0;
  }
  static BoolMatrix zeros(int r, int c) {
    return BoolMatrix{r, c, std::vector<std::uint8_t>(static_cast<std::size_t>(r) * c, 0)};
  }
};

namespace detail {

inline bool try_augment(const BoolMatrix& p, int col, std::vector<int>& row_of_col,
                        std::vector<int>& col_of_row, std::vector<char>& visited) {
  for (int r = 0; r < p.rows; ++r) {
    if (!p.at(r, col) || visited[r]) continue;
    visited[r] = 1;
    if (col_of_row[r] < 0 || try_augment(p, col_of_row[r], row_of_col, col_of_row, visited)) {
      col_of_row[r] = col;
      row_of_col[col] = r;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// True iff some permutation sigma has all entries (sigma(i), i) set, i.e. the
// Leibniz formula for the corresponding determinant has a non-trivial term.
// Augmenting-path bipartite matching.
inline bool support_has_nontrivial_term(const BoolMatrix& p) {
  if (p.rows != p.cols) throw BadParams("support test requires a square pattern");
  std::vector<int> row_of_col(p.cols, -1), col_of_row(p.rows, -1);
  for (int c = 0; c < p.cols; ++c) {
    std::vector<char> visited(p.rows, 0);
    if (!detail::try_augment(p, c, row_of_col, col_of_row, visited)) return false;
  }
  return true;
}

}  // namespace idos
