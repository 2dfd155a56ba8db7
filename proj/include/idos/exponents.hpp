#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "idos/errors.hpp"
#include "idos/field.hpp"
#include "idos/linalg.hpp"

namespace idos {

// Matrix over {-inf, 0, 1, 2, ...}. Lifts to a field matrix entrywise via
// alpha-exponentiation, with alpha^(-inf) = 0.
class ExponentMatrix {
 public:
  ExponentMatrix() : rows_(0), cols_(0) {}
  ExponentMatrix(int rows, int cols, Exponent fill = 0)
      : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw BadParams("matrix dimensions must be non-negative");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Exponent& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  Exponent at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

  ExponentMatrix submatrix(const std::vector<int>& row_ids,
                           const std::vector<int>& col_ids) const {
    ExponentMatrix m(static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size()));
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
      for (std::size_t j = 0; j < col_ids.size(); ++j) {
        m.at(static_cast<int>(i), static_cast<int>(j)) = at(row_ids[i], col_ids[j]);
      }
    }
    return m;
  }

  BoolMatrix finite_support() const {
    BoolMatrix b = BoolMatrix::zeros(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) b.set(i, j, at(i, j) != kNegInf);
    }
    return b;
  }

  friend bool operator==(const ExponentMatrix& a, const ExponentMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  int rows_, cols_;
  std::vector<Exponent> entries_;
};

inline FieldMatrix lift(const ExponentMatrix& m, const FieldCtx& ctx) {
  FieldMatrix out(ctx, m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out.at(i, j) = ctx.pow_alpha(m.at(i, j));
  }
  return out;
}

// Result of the dominant-permutation search. sigma_star maps column index to
// row index. A permutation is dominant when its entry sum strictly exceeds
// the sum of every other permutation; permutations crossing a -inf entry
// never qualify.
struct DominanceReport {
  bool exists = false;
  std::vector<int> sigma_star;  // column -> row, set when exists
  std::optional<std::int64_t> dominant_sum;
  std::optional<std::int64_t> runner_up_sum;  // best strictly smaller sum, if any
};

namespace detail {

inline constexpr std::int64_t kAssignInf = std::int64_t{1} << 60;

// Min-cost perfect assignment with potentials (O(n^3)); forbidden edges carry
// a large sentinel cost and infeasibility is detected by threshold, so no
// arithmetic is ever done on -inf entries themselves.
// Returns (value, row matched to each column) or nullopt when no assignment
// avoids the forbidden edges.
inline std::optional<std::pair<std::int64_t, std::vector<int>>> min_cost_assignment(
    const std::vector<std::vector<std::int64_t>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kAssignInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::int64_t delta = kAssignInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (delta >= kAssignInf / 2) return std::nullopt;  // row i cannot be matched
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::int64_t value = 0;
  std::vector<int> row_of_col(n);
  for (int j = 1; j <= n; ++j) {
    row_of_col[j - 1] = p[j] - 1;
    value += cost[p[j] - 1][j - 1];
  }
  return std::make_pair(value, std::move(row_of_col));
}

inline DominanceReport dominant_via_enumeration(const ExponentMatrix& m) {
  const int n = m.rows();
  DominanceReport rep;
  std::vector<int> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::int64_t best = 0, second = 0;
  bool have_best = false, have_second = false, best_tied = false;
  std::vector<int> best_perm;
  do {
    std::int64_t sum = 0;
    bool feasible = true;
    for (int col = 0; col < n; ++col) {
      const Exponent e = m.at(rows[col], col);
      if (e == kNegInf) {
        feasible = false;
        break;
      }
      sum += e;
    }
    if (!feasible) continue;
    if (!have_best || sum > best) {
      if (have_best) {
        // old best becomes a runner-up candidate
        if (!have_second || best > second) {
          second = best;
          have_second = true;
        }
      }
      best = sum;
      best_perm = rows;
      have_best = true;
      best_tied = false;
    } else if (sum == best) {
      best_tied = true;
    } else if (!have_second || sum > second) {
      second = sum;
      have_second = true;
    }
  } while (std::next_permutation(rows.begin(), rows.end()));
  if (!have_best || best_tied) return rep;
  rep.exists = true;
  rep.sigma_star = std::move(best_perm);
  rep.dominant_sum = best;
  if (have_second) rep.runner_up_sum = second;
  return rep;
}

// Best assignment plus second-best via single-edge exclusion (any assignment
// other than the optimum must avoid at least one of its edges).
inline DominanceReport dominant_via_assignment(const ExponentMatrix& m) {
  const int n = m.rows();
  DominanceReport rep;
  std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Exponent e = m.at(i, j);
      cost[i][j] = (e == kNegInf) ? kAssignInf : -e;
    }
  }
  auto best = min_cost_assignment(cost);
  if (!best) return rep;
  const std::int64_t best_sum = -best->first;
  const std::vector<int>& row_of_col = best->second;

  std::optional<std::int64_t> second;
  for (int j = 0; j < n; ++j) {
    const int i = row_of_col[j];
    const std::int64_t saved = cost[i][j];
    cost[i][j] = kAssignInf;
    auto alt = min_cost_assignment(cost);
    cost[i][j] = saved;
    if (alt) {
      const std::int64_t alt_sum = -alt->first;
      if (!second || alt_sum > *second) second = alt_sum;
    }
  }
  if (second && *second >= best_sum) return rep;  // tie: no strict winner
  rep.exists = true;
  rep.sigma_star = row_of_col;
  rep.dominant_sum = best_sum;
  rep.runner_up_sum = second;
  return rep;
}

}  // namespace detail

// Exhaustive enumeration up to size 9, ranked assignment beyond.
inline DominanceReport find_dominant_permutation(const ExponentMatrix& m) {
  if (m.rows() != m.cols()) throw BadParams("dominant permutation requires a square matrix");
  if (m.rows() == 0) return DominanceReport{};
  return m.rows() <= 9 ? detail::dominant_via_enumeration(m)
                       : detail::dominant_via_assignment(m);
}

// Row constraints for constrained dominant-submatrix searches: every forced
// row must be used, and only allowed rows may be used. An empty `allowed`
// means all rows.
struct SubmatrixConstraint {
  std::vector<int> forced;
  std::vector<int> allowed;
};

struct DominantSubmatrix {
  std::vector<int> rows;  // ascending, within the host matrix
  DominanceReport report;
};

// The unique y-row submatrix (y = cols) whose dominant permutation exists and
// whose dominant sum strictly exceeds that of every other candidate; nullopt
// when no strict winner exists.
inline std::optional<DominantSubmatrix> find_dominant_submatrix(
    const ExponentMatrix& m, const SubmatrixConstraint& constraint = {}) {
  const int x = m.rows(), y = m.cols();
  if (y > x) throw BadParams("dominant submatrix requires rows >= cols");

  std::vector<int> allowed = constraint.allowed;
  if (allowed.empty()) {
    allowed.resize(x);
    std::iota(allowed.begin(), allowed.end(), 0);
  }
  std::sort(allowed.begin(), allowed.end());
  std::vector<int> forced = constraint.forced;
  std::sort(forced.begin(), forced.end());
  for (int r : forced) {
    if (!std::binary_search(allowed.begin(), allowed.end(), r)) {
      throw PreconditionUnmet("forced rows must be a subset of allowed rows");
    }
  }
  std::vector<int> free_rows;
  for (int r : allowed) {
    if (!std::binary_search(forced.begin(), forced.end(), r)) free_rows.push_back(r);
  }
  const int need = y - static_cast<int>(forced.size());
  if (need < 0 || need > static_cast<int>(free_rows.size())) {
    throw PreconditionUnmet("constraint sizes incompatible with submatrix size");
  }

  std::optional<DominantSubmatrix> winner;
  bool tied = false;
  std::vector<int> pick(need);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<int> cols(y);
  std::iota(cols.begin(), cols.end(), 0);
  for (;;) {
    std::vector<int> rows = forced;
    for (int idx : pick) rows.push_back(free_rows[idx]);
    std::sort(rows.begin(), rows.end());
    DominanceReport rep = find_dominant_permutation(m.submatrix(rows, cols));
    if (rep.exists) {
      if (!winner || *rep.dominant_sum > *winner->report.dominant_sum) {
        winner = DominantSubmatrix{std::move(rows), std::move(rep)};
        tied = false;
      } else if (*rep.dominant_sum == *winner->report.dominant_sum) {
        tied = true;
      }
    }
    // next combination
    if (need == 0) break;
    int i = need - 1;
    while (i >= 0 && pick[i] == static_cast<int>(free_rows.size()) - need + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
  }
  if (!winner || tied) return std::nullopt;
  return winner;
}

// Certificate produced by the submatrix decomposition strategy: per-part
// dominant submatrices with pairwise disjoint rows assemble into a dominant
// permutation of the whole matrix with sum equal to the parts' total.
struct DecompositionPart {
  std::vector<int> columns;
  std::vector<int> rows;
  std::int64_t dominant_sum = 0;
};

struct DominanceCertificate {
  std::vector<DecompositionPart> parts;
  std::int64_t total_dominant_sum = 0;
  std::vector<int> sigma_star;  // column -> row for the assembled permutation
};

inline std::optional<DominanceCertificate> decompose_dominance(
    const ExponentMatrix& m, const std::vector<std::vector<int>>& column_partition,
    const std::vector<SubmatrixConstraint>& constraints = {}) {
  const int x = m.rows();
  if (m.cols() != x) throw BadParams("decomposition requires a square matrix");
  if (!constraints.empty() && constraints.size() != column_partition.size()) {
    throw BadParams("one constraint per part (or none) expected");
  }
  {
    std::vector<char> seen(x, 0);
    for (const auto& part : column_partition) {
      for (int c : part) {
        if (c < 0 || c >= x || seen[c]) throw BadParams("column sets must partition the columns");
        seen[c] = 1;
      }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](char c) { return c == 1; })) {
      throw BadParams("column sets must partition the columns");
    }
  }

  DominanceCertificate cert;
  cert.sigma_star.assign(x, -1);
  std::vector<char> used_rows(x, 0);
  std::vector<int> all_rows(x);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  for (std::size_t p = 0; p < column_partition.size(); ++p) {
    std::vector<int> cols = column_partition[p];
    std::sort(cols.begin(), cols.end());
    const ExponentMatrix sub = m.submatrix(all_rows, cols);
    auto dom = find_dominant_submatrix(
        sub, constraints.empty() ? SubmatrixConstraint{} : constraints[p]);
    if (!dom) return std::nullopt;
    for (int r : dom->rows) {
      if (used_rows[r]) return std::nullopt;  // parts overlap: strategy inapplicable
      used_rows[r] = 1;
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      cert.sigma_star[cols[c]] = dom->rows[dom->report.sigma_star[c]];
    }
    cert.total_dominant_sum += *dom->report.dominant_sum;
    cert.parts.push_back(DecompositionPart{cols, dom->rows, *dom->report.dominant_sum});
  }
  return cert;
}

// Builds GF(2^d), lifts M, and reports whether the lift is non-singular.
// Callable only when M has a dominant permutation and d exceeds its sum; in
// that regime the determinant is a non-zero GF(2) polynomial in alpha of
// degree below d, hence never vanishes.
inline bool check_dominance_implies_invertible(const ExponentMatrix& m, int d,
                                               std::uint64_t seed = 1) {
  DominanceReport rep = find_dominant_permutation(m);
  if (!rep.exists) throw PreconditionUnmet("matrix has no dominant permutation");
  if (static_cast<std::int64_t>(d) <= *rep.dominant_sum) {
    throw PreconditionUnmet("field degree must exceed the dominant sum");
  }
  FieldCtx ctx = FieldCtx::with_random_modulus(d, seed);
  return !mat_det(lift(m, ctx)).is_zero();
}

}  // namespace idos
