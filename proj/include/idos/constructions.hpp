#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idos/errors.hpp"
#include "idos/exponents.hpp"
#include "idos/field.hpp"

namespace idos {

// Code parameters: n code symbols and k message symbols per slot, encoder
// memory m, delay parameter tau.
struct CodeParams {
  int n = 0;
  int k = 0;
  int m = 0;
  int tau = 0;

  void validate() const {
    if (k < 1 || n <= k) throw BadParams("need n > k >= 1");
    if (m < 1) throw BadParams("need m >= 1");
    if (tau < 1) throw BadParams("need tau >= 1");
  }

  friend bool operator==(const CodeParams& a, const CodeParams& b) {
    return a.n == b.n && a.k == b.k && a.m == b.m && a.tau == b.tau;
  }
};

enum class Construction { A, B, Custom };

inline std::string construction_name(Construction c) {
  switch (c) {
    case Construction::A:
      return "A";
    case Construction::B:
      return "B";
    default:
      return "custom";
  }
}

// Unit-memory coefficient matrices:
//   M0(i,j) = (i-1)*j,  M1(i,j) = (n-i)*(k+1-j),  indices 1-based.
// M0 grows down each column, M1 grows up; together these make every k x k
// stack of M0 rows over M1 rows carry a dominant permutation.
inline std::pair<ExponentMatrix, ExponentMatrix> construct_a(int n, int k) {
  if (k < 1 || n <= k) throw BadParams("construction A needs n > k >= 1");
  ExponentMatrix m0(n, k), m1(n, k);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= k; ++j) {
      m0.at(i - 1, j - 1) = static_cast<Exponent>(i - 1) * j;
      m1.at(i - 1, j - 1) = static_cast<Exponent>(n - i) * (k + 1 - j);
    }
  }
  return {std::move(m1), std::move(m0)};
}

// General-memory coefficient matrices, exponents all distinct powers of two
// within each row and column:
//   Mt(i,j) = 2^(t*n + i + k - 1 - j),  indices 1-based.
// Returned in order M^(0), ..., M^(m).
inline std::vector<ExponentMatrix> construct_b(int n, int k, int m) {
  if (k < 1 || n <= k) throw BadParams("construction B needs n > k >= 1");
  if (m < 1) throw BadParams("construction B needs m >= 1");
  std::vector<ExponentMatrix> out;
  out.reserve(m + 1);
  for (int t = 0; t <= m; ++t) {
    ExponentMatrix mt(n, k);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= k; ++j) {
        const int e = t * n + i + k - 1 - j;
        // keeps dominant sums well inside int64 for any desk-scale window
        if (e >= 48) throw BadParams("construction B exponent 2^" + std::to_string(e) +
                                     " exceeds the supported range");
        mt.at(i - 1, j - 1) = Exponent{1} << e;
      }
    }
    out.push_back(std::move(mt));
  }
  return out;
}

// Smallest field degree satisfying the sufficient strict bounds:
//   A: d > (n-1) k^2 (tau+1)
//   B: d > 2^((m+1)n + k - 2) (tau+1) k
inline std::int64_t min_degree(const CodeParams& p, Construction c) {
  p.validate();
  switch (c) {
    case Construction::A: {
      if (p.m != 1) throw BadParams("construction A requires m = 1");
      return static_cast<std::int64_t>(p.n - 1) * p.k * p.k * (p.tau + 1) + 1;
    }
    case Construction::B: {
      const int e = (p.m + 1) * p.n + p.k - 2;
      if (e >= 40) throw BadParams("construction B degree bound overflows at these parameters");
      return (std::int64_t{1} << e) * (p.tau + 1) * p.k + 1;
    }
    default:
      throw BadParams("no degree bound for custom constructions");
  }
}

// A concrete generator description: parameters, the m+1 coefficient exponent
// matrices in the order [M^(m) ... M^(0)], and the field (degree + modulus).
struct GeneratorSpec {
  CodeParams params;
  Construction construction = Construction::Custom;
  int degree = 0;
  std::vector<int> modulus;  // exponent set, descending; may be empty until a field is attached
  std::vector<ExponentMatrix> exponent_matrices;  // [M^(m) ... M^(0)]

  // M^(t): coefficient of s(current - t).
  const ExponentMatrix& coeff(int t) const { return exponent_matrices[params.m - t]; }

  std::string id() const {
    return construction_name(construction) + "(n=" + std::to_string(params.n) +
           ",k=" + std::to_string(params.k) + ",m=" + std::to_string(params.m) +
           ",tau=" + std::to_string(params.tau) + ",d=" + std::to_string(degree) + ")";
  }

  void validate_structure() const {
    params.validate();
    if (static_cast<int>(exponent_matrices.size()) != params.m + 1) {
      throw BadParams("expected m+1 exponent matrices");
    }
    for (const auto& mt : exponent_matrices) {
      if (mt.rows() != params.n || mt.cols() != params.k) {
        throw BadParams("every exponent matrix must be n x k");
      }
      for (int i = 0; i < mt.rows(); ++i) {
        for (int j = 0; j < mt.cols(); ++j) {
          if (mt.at(i, j) != kNegInf && mt.at(i, j) < 0) {
            throw BadParams("finite exponents must be non-negative");
          }
        }
      }
    }
    if (degree < 1) throw BadParams("spec needs a field degree of at least 1");
    if (!modulus.empty() && modulus.front() != degree) {
      throw DegreeMismatch("spec modulus degree disagrees with spec degree");
    }
  }

  FieldCtx make_field(std::uint64_t seed = 1) const {
    return modulus.empty() ? FieldCtx::with_random_modulus(degree, seed)
                           : FieldCtx::with_modulus(degree, modulus);
  }
};

// Builds a ready-to-use spec for constructions A and B. The degree defaults
// to the smallest sufficient one; smaller degrees are rejected unless
// explicitly forced (verification results below the bound carry no guarantee).
inline GeneratorSpec make_generator_spec(const CodeParams& params, Construction construction,
                                         std::optional<int> degree = std::nullopt,
                                         std::uint64_t seed = 1, bool force_degree = false) {
  params.validate();
  GeneratorSpec spec;
  spec.params = params;
  spec.construction = construction;
  switch (construction) {
    case Construction::A: {
      if (params.m != 1) throw BadParams("construction A requires m = 1");
      auto [m1, m0] = construct_a(params.n, params.k);
      spec.exponent_matrices = {std::move(m1), std::move(m0)};
      break;
    }
    case Construction::B: {
      auto mats = construct_b(params.n, params.k, params.m);  // M^(0)..M^(m)
      spec.exponent_matrices.assign(mats.rbegin(), mats.rend());
      break;
    }
    default:
      throw BadParams("use explicit exponent matrices for custom specs");
  }
  if (degree && force_degree) {
    spec.degree = *degree;
  } else {
    const std::int64_t bound = min_degree(params, construction);
    if (degree) {
      if (*degree < bound) {
        throw BadParams("degree " + std::to_string(*degree) + " is below the sufficient bound " +
                        std::to_string(bound) + " (pass force to override)");
      }
      spec.degree = *degree;
    } else {
      if (bound > (1 << 22)) {
        throw BadParams("default degree " + std::to_string(bound) +
                        " is impractically large; pass an explicit degree");
      }
      spec.degree = static_cast<int>(bound);
    }
  }
  spec.modulus = FieldCtx::with_random_modulus(spec.degree, seed).modulus_exponents();
  return spec;
}

// n x (m+1)k generator [G^(m) ... G^(0)] with G^(t) = alpha^(M^(t)).
inline FieldMatrix build_generator(const GeneratorSpec& spec, const FieldCtx& ctx) {
  spec.validate_structure();
  if (ctx.degree() != spec.degree) {
    throw DegreeMismatch("field context degree disagrees with spec degree");
  }
  const int n = spec.params.n, k = spec.params.k, m = spec.params.m;
  FieldMatrix g(ctx, n, (m + 1) * k);
  for (int blk = 0; blk <= m; ++blk) {
    const FieldMatrix part = lift(spec.exponent_matrices[blk], ctx);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) g.at(i, blk * k + j) = part.at(i, j);
    }
  }
  return g;
}

// The n*ell x k*ell exponent matrix mapping stacked messages s(1..ell) to
// stacked code vectors c(1..ell): block (t, t') holds M^(t - t') when
// 0 <= t - t' <= m and -inf otherwise (messages at non-positive slots are
// fixed to zero).
inline ExponentMatrix build_stacked_exponents(const GeneratorSpec& spec, int ell) {
  if (ell < 1) throw BadParams("stack length must be at least 1");
  const int n = spec.params.n, k = spec.params.k, m = spec.params.m;
  ExponentMatrix out(n * ell, k * ell, kNegInf);
  for (int t = 1; t <= ell; ++t) {
    for (int tp = 1; tp <= ell; ++tp) {
      const int lag = t - tp;
      if (lag < 0 || lag > m) continue;
      const ExponentMatrix& blk = spec.coeff(lag);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) {
          out.at((t - 1) * n + i, (tp - 1) * k + j) = blk.at(i, j);
        }
      }
    }
  }
  return out;
}

// One violated structural condition for superregularity.
struct SuperregularViolation {
  std::string condition;  // "positivity" | "zero-propagation" | "row-doubling" | "col-doubling"
  int row = 0, col = 0;   // 1-based, first offending entry
};

// Checks the structural sufficient conditions under which a matrix of the
// form alpha^M is superregular: finite exponents are strictly positive, zeros
// propagate down columns or right along rows, and exponents at least double
// moving left along rows and down columns.
inline std::pair<bool, std::vector<SuperregularViolation>> check_superregular_conditions(
    const ExponentMatrix& m) {
  std::vector<SuperregularViolation> violations;
  const int R = m.rows(), C = m.cols();
  for (int i = 0; i < R; ++i) {
    for (int j = 0; j < C; ++j) {
      const Exponent e = m.at(i, j);
      if (e == kNegInf) {
        bool down_zero = true, right_zero = true;
        for (int i2 = i + 1; i2 < R && down_zero; ++i2) down_zero = m.at(i2, j) == kNegInf;
        for (int j2 = j + 1; j2 < C && right_zero; ++j2) right_zero = m.at(i, j2) == kNegInf;
        if (!down_zero && !right_zero) {
          violations.push_back({"zero-propagation", i + 1, j + 1});
        }
        continue;
      }
      if (e < 1) {
        violations.push_back({"positivity", i + 1, j + 1});
        continue;
      }
      for (int j2 = 0; j2 < j; ++j2) {
        if (m.at(i, j2) != kNegInf && 2 * e > m.at(i, j2)) {
          violations.push_back({"row-doubling", i + 1, j + 1});
          break;
        }
      }
      for (int i2 = i + 1; i2 < R; ++i2) {
        if (m.at(i2, j) != kNegInf && 2 * e > m.at(i2, j)) {
          violations.push_back({"col-doubling", i + 1, j + 1});
          break;
        }
      }
    }
  }
  return {violations.empty(), violations};
}

}  // namespace idos
