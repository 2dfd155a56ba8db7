#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "idos/codec.hpp"
#include "idos/constructions.hpp"
#include "idos/debt.hpp"
#include "idos/errors.hpp"
#include "idos/exponents.hpp"
#include "idos/field.hpp"
#include "idos/linalg.hpp"
#include "idos/rng.hpp"

namespace idos {

struct VerifyFailure {
  WindowPattern pattern;
  std::string reason;
};

struct VerificationReport {
  CodeParams params;
  std::string spec_id;
  std::string mode;
  std::uint64_t windows_checked = 0;   // count sequences
  std::uint64_t matrices_checked = 0;  // concrete received-set patterns
  std::vector<VerifyFailure> failures;
  std::optional<std::int64_t> max_dominant_sum;
  double elapsed_seconds = 0;  // informational; excluded from canonical serialization

  bool pass() const { return failures.empty(); }
};

enum class VerifyMode { Invertibility, Roundtrip, Both };

inline std::string verify_mode_name(VerifyMode m) {
  switch (m) {
    case VerifyMode::Invertibility:
      return "invertibility";
    case VerifyMode::Roundtrip:
      return "roundtrip";
    default:
      return "both";
  }
}

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Both;
  int jobs = 1;
  std::uint64_t max_cases = 1000000;
  std::uint64_t seed = 1;
  int roundtrip_streams = 3;
};

namespace detail {

// One encode -> erase -> decode pass over a single window pattern, preceded
// by m erasure-free warm-up slots so that known-message cancellation is
// exercised with non-zero history.
inline bool roundtrip_once(const GeneratorSpec& spec, const FieldCtx& ctx,
                           const WindowPattern& pattern, std::uint64_t seed,
                           std::string* why) {
  const CodeParams& p = spec.params;
  SplitMix64 rng(seed);
  EncoderState encoder(spec, ctx);
  DecoderState decoder(spec, ctx);

  const int warmup = p.m;
  std::vector<std::vector<FieldElement>> sent;
  std::int64_t slot = 0;
  bool window_recovered = false;

  auto deliver = [&](const std::vector<int>& indices,
                     const std::vector<FieldElement>& code) {
    std::vector<ReceivedSymbol> rx;
    for (int idx : indices) rx.push_back(ReceivedSymbol{idx, code[idx]});
    return decoder.ingest(slot, rx);
  };

  std::vector<int> all(p.n);
  for (int i = 0; i < p.n; ++i) all[i] = i;

  for (int w = 0; w < warmup; ++w) {
    std::vector<FieldElement> s;
    for (int j = 0; j < p.k; ++j) s.push_back(ctx.random_element(rng));
    sent.push_back(s);
    ++slot;
    const auto events = deliver(all, encoder.encode_step(s));
    for (const auto& ev : events) {
      if (ev.kind == DecoderEvent::Kind::ViolationDetected) {
        *why = "violation during warm-up";
        return false;
      }
    }
  }
  for (int t = 0; t < pattern.ell; ++t) {
    std::vector<FieldElement> s;
    for (int j = 0; j < p.k; ++j) s.push_back(ctx.random_element(rng));
    sent.push_back(s);
    ++slot;
    const auto events = deliver(pattern.received_sets[t], encoder.encode_step(s));
    for (const auto& ev : events) {
      if (ev.kind == DecoderEvent::Kind::ViolationDetected) {
        *why = "unexpected violation at slot " + std::to_string(ev.slot);
        return false;
      }
      if (ev.kind != DecoderEvent::Kind::Recovered) continue;
      if (t + 1 == pattern.ell && ev.window_start == warmup + 1 &&
          ev.window_end == warmup + pattern.ell) {
        for (int s_idx = 0; s_idx < pattern.ell; ++s_idx) {
          const auto& got = ev.messages[s_idx];
          const auto& want = sent[warmup + s_idx];
          for (int j = 0; j < p.k; ++j) {
            if (!(got[j] == want[j])) {
              *why = "recovered message differs at slot " +
                     std::to_string(warmup + s_idx + 1);
              return false;
            }
          }
        }
        window_recovered = true;
      }
    }
  }
  if (!window_recovered) {
    *why = "window not recovered when debt returned to zero";
    return false;
  }
  return true;
}

}  // namespace detail

// Exhaustive check that `spec` recovers every worst-case decode window:
// iterates all count sequences and all received-set choices, testing
// decoding-matrix invertibility and/or full encode-erase-decode roundtrips.
inline VerificationReport verify_idos(const GeneratorSpec& spec, const FieldCtx& ctx,
                                      const VerifyOptions& options = {}) {
  spec.validate_structure();
  if (ctx.degree() != spec.degree) {
    throw DegreeMismatch("field context degree disagrees with spec degree");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const CodeParams& p = spec.params;
  const auto sequences = enumerate_worst_case_windows(p);

  std::uint64_t estimated = 0;
  for (const auto& counts : sequences) {
    const std::uint64_t c = count_received_set_choices(counts, p.n);
    estimated = (estimated > UINT64_MAX - c) ? UINT64_MAX : estimated + c;
  }
  if (estimated > options.max_cases) {
    throw GuardrailExceeded("estimated " + std::to_string(estimated) +
                                " decoding matrices exceed the configured cap of " +
                                std::to_string(options.max_cases),
                            estimated, options.max_cases);
  }

  std::vector<WindowPattern> patterns;
  patterns.reserve(estimated);
  for (const auto& counts : sequences) {
    auto expanded = expand_received_sets(counts, p.n);
    std::move(expanded.begin(), expanded.end(), std::back_inserter(patterns));
  }

  const bool run_inv = options.mode != VerifyMode::Roundtrip;
  const bool run_rt = options.mode != VerifyMode::Invertibility;

  struct Partial {
    std::vector<VerifyFailure> failures;
    std::optional<std::int64_t> max_sum;
  };
  const int jobs = std::max(1, options.jobs);
  std::vector<Partial> partials(jobs);

  auto worker = [&](int w, std::size_t lo, std::size_t hi) {
    Partial& out = partials[w];
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const WindowPattern& pattern = patterns[idx];
      const ExponentMatrix m_dec = build_decode_window(spec, pattern);
      const DominanceReport dom = find_dominant_permutation(m_dec);
      if (dom.exists && (!out.max_sum || *dom.dominant_sum > *out.max_sum)) {
        out.max_sum = dom.dominant_sum;
      }
      if (run_inv) {
        if (mat_det(lift(m_dec, ctx)).is_zero()) {
          out.failures.push_back({pattern, "singular decoding matrix"});
          continue;
        }
      }
      if (run_rt) {
        for (int stream = 0; stream < options.roundtrip_streams; ++stream) {
          std::string why;
          const std::uint64_t seed =
              derive_seed(options.seed, (static_cast<std::uint64_t>(idx) << 8) | stream);
          if (!detail::roundtrip_once(spec, ctx, pattern, seed, &why)) {
            out.failures.push_back({pattern, "roundtrip stream " + std::to_string(stream) +
                                                 ": " + why});
            break;
          }
        }
      }
    }
  };

  if (jobs == 1) {
    worker(0, 0, patterns.size());
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (patterns.size() + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      const std::size_t lo = std::min(patterns.size(), w * chunk);
      const std::size_t hi = std::min(patterns.size(), lo + chunk);
      threads.emplace_back(worker, w, lo, hi);
    }
    for (auto& th : threads) th.join();
  }

  VerificationReport report;
  report.params = p;
  report.spec_id = spec.id();
  report.mode = verify_mode_name(options.mode);
  report.windows_checked = sequences.size();
  report.matrices_checked = patterns.size();
  for (auto& part : partials) {
    std::move(part.failures.begin(), part.failures.end(), std::back_inserter(report.failures));
    if (part.max_sum && (!report.max_dominant_sum || *part.max_sum > *report.max_dominant_sum)) {
      report.max_dominant_sum = part.max_sum;
    }
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// Executable form of the dominance argument behind the unit-memory
// construction: on every worst-case decoding matrix the dominant permutation
// exists, fixes each thick column's k rows onto that thick column, splits
// them across the two contributing slots in the exact (r_mu, k - r_mu)
// proportion, and its sum never exceeds (n-1) k^2 (tau+1).
inline VerificationReport verify_dominance_structure(int n, int k, int tau) {
  const auto t0 = std::chrono::steady_clock::now();
  const CodeParams params{n, k, 1, tau};
  params.validate();
  GeneratorSpec spec;
  spec.params = params;
  spec.construction = Construction::A;
  auto [m1, m0] = construct_a(n, k);
  spec.exponent_matrices = {std::move(m1), std::move(m0)};
  spec.degree = 1;  // no lifting happens here

  VerificationReport report;
  report.params = params;
  report.spec_id = spec.id();
  report.mode = "dominance-structure";

  const std::int64_t sum_bound = static_cast<std::int64_t>(n - 1) * k * k * (tau + 1);
  const auto sequences = enumerate_worst_case_windows(params);
  report.windows_checked = sequences.size();
  for (const auto& counts : sequences) {
    const int ell = static_cast<int>(counts.size());
    std::vector<std::int64_t> cumulative(ell + 1, 0);
    for (int t = 0; t < ell; ++t) cumulative[t + 1] = cumulative[t] + counts[t];
    for (const auto& pattern : expand_received_sets(counts, n)) {
      ++report.matrices_checked;
      const ExponentMatrix m_dec = build_decode_window(spec, pattern);
      const DominanceReport dom = find_dominant_permutation(m_dec);
      if (!dom.exists) {
        report.failures.push_back({pattern, "no dominant permutation"});
        continue;
      }
      if (!report.max_dominant_sum || *dom.dominant_sum > *report.max_dominant_sum) {
        report.max_dominant_sum = dom.dominant_sum;
      }
      // (ii) sigma* maps each thick column onto its own row block.
      bool ok = true;
      for (int blk = 0; blk < ell && ok; ++blk) {
        for (int c = blk * k; c < (blk + 1) * k && ok; ++c) {
          const int r = dom.sigma_star[c];
          if (r < blk * k || r >= (blk + 1) * k) {
            report.failures.push_back({pattern, "thick column " + std::to_string(blk + 1) +
                                                    " not fixed by the dominant permutation"});
            ok = false;
          }
        }
      }
      if (!ok) continue;
      // (iii) per-thick-column split across the slot row blocks.
      for (int mu = 0; mu <= ell - 1 && ok; ++mu) {
        const int blk = ell - mu;  // thick column index, 1-based
        std::int64_t suffix = 0;
        for (int i = blk + 1; i <= ell; ++i) suffix += counts[i - 1];
        const std::int64_t r_mu = static_cast<std::int64_t>(mu + 1) * k - suffix;
        std::int64_t in_own = 0, in_next = 0;
        for (int c = (blk - 1) * k; c < blk * k; ++c) {
          const int row = dom.sigma_star[c];  // 0-based
          if (row >= cumulative[blk - 1] && row < cumulative[blk]) {
            ++in_own;
          } else if (blk < ell && row >= cumulative[blk] && row < cumulative[blk + 1]) {
            ++in_next;
          }
        }
        if (in_own != r_mu || in_own + in_next != k) {
          report.failures.push_back(
              {pattern, "thick column " + std::to_string(blk) + " row split is (" +
                            std::to_string(in_own) + "," + std::to_string(in_next) +
                            "), expected (" + std::to_string(r_mu) + "," +
                            std::to_string(k - r_mu) + ")"});
          ok = false;
        }
      }
      if (!ok) continue;
      // (iv) field-degree bound on the dominant sum.
      if (*dom.dominant_sum > sum_bound) {
        report.failures.push_back({pattern, "dominant sum " + std::to_string(*dom.dominant_sum) +
                                                " exceeds bound " + std::to_string(sum_bound)});
      }
    }
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

struct SuperregularRouteReport {
  std::string spec_id;
  bool structure_ok = false;
  std::vector<SuperregularViolation> structure_violations;
  bool diagonals_ok = false;
  std::uint64_t diagonal_matrices_checked = 0;
  std::uint64_t minors_checked = 0;
  std::uint64_t minors_skipped_trivial = 0;
  std::vector<std::string> minor_failures;

  bool pass() const {
    return structure_ok && diagonals_ok && minor_failures.empty();
  }
};

// Checks the superregularity route for a general-memory spec: the stacked
// generator satisfies the structural conditions, every worst-case decoding
// matrix has an all-finite diagonal (so its determinant has a non-trivial
// term), and, when a field is supplied, all non-trivial minors of the stack
// up to `minor_cap` lift to non-singular matrices.
inline SuperregularRouteReport verify_superregular_route(const GeneratorSpec& spec, int ell,
                                                         const FieldCtx* ctx, int minor_cap) {
  spec.validate_structure();
  if (minor_cap > 0 && ctx == nullptr) {
    throw PreconditionUnmet("minor checks require a field context");
  }
  SuperregularRouteReport report;
  report.spec_id = spec.id();

  const ExponentMatrix stacked = build_stacked_exponents(spec, ell);
  auto [ok, violations] = check_superregular_conditions(stacked);
  report.structure_ok = ok;
  report.structure_violations = std::move(violations);

  report.diagonals_ok = true;
  for (const auto& counts : enumerate_worst_case_windows(spec.params)) {
    for (const auto& pattern : expand_received_sets(counts, spec.params.n)) {
      ++report.diagonal_matrices_checked;
      const ExponentMatrix m_dec = build_decode_window(spec, pattern);
      for (int i = 0; i < m_dec.rows(); ++i) {
        if (m_dec.at(i, i) == kNegInf) {
          report.diagonals_ok = false;
          break;
        }
      }
    }
  }

  if (minor_cap > 0) {
    const int max_size = std::min({minor_cap, stacked.rows(), stacked.cols()});
    auto for_each_combo = [](int n, int r, auto&& fn) {
      std::vector<int> pick(r);
      for (int i = 0; i < r; ++i) pick[i] = i;
      for (;;) {
        fn(pick);
        int i = r - 1;
        while (i >= 0 && pick[i] == n - r + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
      }
    };
    for (int s = 1; s <= max_size; ++s) {
      for_each_combo(stacked.rows(), s, [&](const std::vector<int>& rows) {
        for_each_combo(stacked.cols(), s, [&](const std::vector<int>& cols) {
          const ExponentMatrix sub = stacked.submatrix(rows, cols);
          if (!support_has_nontrivial_term(sub.finite_support())) {
            ++report.minors_skipped_trivial;
            return;
          }
          ++report.minors_checked;
          if (mat_det(lift(sub, *ctx)).is_zero()) {
            std::string what = "singular minor rows{";
            for (int r : rows) what += std::to_string(r + 1) + ",";
            what += "} cols{";
            for (int c : cols) what += std::to_string(c + 1) + ",";
            what += "}";
            report.minor_failures.push_back(std::move(what));
          }
        });
      });
    }
  }
  return report;
}

struct OracleSuiteReport {
  int requested = 0;
  int tested = 0;
  int passed = 0;
  std::int64_t max_dominant_sum = 0;

  bool pass() const { return tested == requested && passed == tested; }
};

// Randomized confirmation that dominance forces invertibility: draws random
// exponent matrices, keeps those possessing a dominant permutation, lifts
// each over a field of degree dominant_sum + 1 and asserts non-singularity.
inline OracleSuiteReport dominance_lift_suite(int trials, int size, int max_entry,
                                              std::uint64_t seed) {
  if (size < 1 || size > 6) throw BadParams("suite limited to sizes 1..6");
  if (max_entry < 0) throw BadParams("max_entry must be non-negative");
  OracleSuiteReport report;
  report.requested = trials;
  SplitMix64 rng(derive_seed(seed, 0x0DA1));
  const int draw_cap = trials * 1000;
  for (int draw = 0; draw < draw_cap && report.tested < trials; ++draw) {
    ExponentMatrix m(size, size);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        const std::uint64_t v = rng.next_below(static_cast<std::uint64_t>(max_entry) + 2);
        m.at(i, j) = (v == 0) ? kNegInf : static_cast<Exponent>(v - 1);
      }
    }
    const DominanceReport dom = find_dominant_permutation(m);
    if (!dom.exists) continue;
    ++report.tested;
    report.max_dominant_sum = std::max(report.max_dominant_sum, *dom.dominant_sum);
    const int d = static_cast<int>(*dom.dominant_sum) + 1;
    const FieldCtx ctx = FieldCtx::with_random_modulus(d, derive_seed(seed, report.tested));
    if (!mat_det(lift(m, ctx)).is_zero()) ++report.passed;
  }
  return report;
}

}  // namespace idos
