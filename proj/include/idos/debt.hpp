#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idos/constructions.hpp"
#include "idos/errors.hpp"

namespace idos {

enum class ViolationKind { DebtExceeded, DelayExceeded };

inline std::string violation_name(ViolationKind k) {
  return k == ViolationKind::DebtExceeded ? "DebtExceeded" : "DelayExceeded";
}

// Running information-debt bookkeeping: I(t) = max(k - n_t + I(t-1), 0),
// theta_last is the most recent slot with I = 0. A violation latches the
// first slot at which either recovery threshold is provably lost:
//   - delay: I > 0 at slot theta_last + tau + 1 (no window can close in time)
//   - debt:  I > m*k (older messages are informationally out of reach)
struct DebtState {
  std::int64_t t = 0;
  std::int64_t debt = 0;
  std::int64_t theta_last = 0;
  std::optional<ViolationKind> violation;
  std::int64_t violation_slot = 0;
};

inline DebtState debt_step(DebtState state, int n_t, const CodeParams& params) {
  if (n_t < 0 || n_t > params.n) throw BadParams("received count out of range");
  state.t += 1;
  state.debt = std::max<std::int64_t>(params.k - n_t + state.debt, 0);
  if (state.debt == 0) {
    state.theta_last = state.t;
  } else if (!state.violation) {
    if (state.t - state.theta_last >= params.tau + 1) {
      state.violation = ViolationKind::DelayExceeded;
      state.violation_slot = state.t;
    } else if (state.debt > static_cast<std::int64_t>(params.m) * params.k) {
      state.violation = ViolationKind::DebtExceeded;
      state.violation_slot = state.t;
    }
  }
  return state;
}

struct Classification {
  enum class Status { Acceptable, Violation, Incomplete } status;
  std::optional<ViolationKind> kind;
  std::int64_t slot = 0;

  bool acceptable() const { return status == Status::Acceptable; }
};

// Runs the recursion over a whole count sequence. Acceptable requires that no
// violation occurred and the run ends with zero debt (complete windows only);
// a run ending with positive debt but no violation is Incomplete.
inline Classification classify_pattern(const CodeParams& params, const std::vector<int>& counts) {
  params.validate();
  DebtState s;
  for (int c : counts) {
    s = debt_step(s, c, params);
    if (s.violation) {
      return Classification{Classification::Status::Violation, s.violation, s.violation_slot};
    }
  }
  if (s.debt != 0) return Classification{Classification::Status::Incomplete, std::nullopt, s.t};
  return Classification{Classification::Status::Acceptable, std::nullopt, 0};
}

// All worst-case decode-window count sequences: length ell in [1, tau+1],
// exactly k*ell symbols total, debt positive strictly inside the window and
// bounded by m*k, i.e. for every proper prefix
//   k*ell' - m*k <= sum(n_1..n_ell') < k*ell'.
// Ordered by increasing ell, then lexicographically.
inline std::vector<std::vector<int>> enumerate_worst_case_windows(const CodeParams& params) {
  params.validate();
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  const std::int64_t mk = static_cast<std::int64_t>(params.m) * params.k;

  for (int ell = 1; ell <= params.tau + 1; ++ell) {
    const std::int64_t target = static_cast<std::int64_t>(params.k) * ell;
    cur.assign(ell, 0);
    auto rec = [&](auto&& self, int slot, std::int64_t sum) -> void {
      if (slot == ell) {
        if (sum == target) out.push_back(cur);
        return;
      }
      for (int v = 0; v <= params.n; ++v) {
        const std::int64_t s = sum + v;
        if (s > target) break;
        if (slot + 1 < ell) {
          const std::int64_t lo = static_cast<std::int64_t>(params.k) * (slot + 1) - mk;
          const std::int64_t hi = static_cast<std::int64_t>(params.k) * (slot + 1);  // exclusive
          if (s < lo || s >= hi) continue;
          // remaining slots can still reach the target
          if (s + static_cast<std::int64_t>(params.n) * (ell - slot - 1) < target) continue;
        } else if (s != target) {
          continue;
        }
        cur[slot] = v;
        self(self, slot + 1, s);
      }
    };
    rec(rec, 0, 0);
  }
  return out;
}

struct SequenceCheck {
  bool ok = true;
  std::string violated_clause;  // "a", "b", "c" or "d" when !ok
};

// Necessary conditions satisfied by every worst-case window count sequence
// (unit-memory regime): the final slot carries at least k symbols, interior
// slots are non-empty, suffix sums straddle multiples of k, and adjacent
// slots jointly carry at least k.
inline SequenceCheck check_worst_case_counts(const std::vector<int>& counts,
                                             const CodeParams& params) {
  const int ell = static_cast<int>(counts.size());
  if (ell == 0) return {false, "a"};
  const int k = params.k;
  if (counts[ell - 1] < k) return {false, "a"};
  for (int i = 1; i < ell; ++i) {
    if (counts[i] == 0) return {false, "b"};
  }
  for (int mu = 1; mu <= ell - 1; ++mu) {
    std::int64_t tail = 0;       // sum over slots [ell-mu+2 .. ell], 1-based
    std::int64_t tail_full = 0;  // sum over slots [ell-mu+1 .. ell]
    for (int i = ell - mu + 2; i <= ell; ++i) tail += counts[i - 1];
    for (int i = ell - mu + 1; i <= ell; ++i) tail_full += counts[i - 1];
    if (!(tail <= static_cast<std::int64_t>(mu) * k && static_cast<std::int64_t>(mu) * k < tail_full)) {
      return {false, "c"};
    }
  }
  for (int i = 0; i + 1 < ell; ++i) {
    if (counts[i] + counts[i + 1] < k) return {false, "d"};
  }
  return {};
}

// A window pattern: counts plus the concrete received index sets (0-based
// symbol indices; serialized 1-based).
struct WindowPattern {
  int ell = 0;
  std::vector<int> counts;
  std::vector<std::vector<int>> received_sets;
};

inline std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t acc = 1;
  for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
  return acc;
}

inline std::uint64_t count_received_set_choices(const std::vector<int>& counts, int n) {
  std::uint64_t total = 1;
  for (int c : counts) {
    const std::uint64_t choices = binomial(n, c);
    if (choices != 0 && total > UINT64_MAX / choices) return UINT64_MAX;
    total *= choices;
  }
  return total;
}

// Every way of realizing the counts as index sets R_t, one size-n_t subset of
// [0, n) per slot, in lexicographic order per slot and product order overall.
inline std::vector<WindowPattern> expand_received_sets(const std::vector<int>& counts, int n) {
  std::vector<std::vector<std::vector<int>>> per_slot;
  for (int c : counts) {
    if (c < 0 || c > n) throw BadParams("received count out of range");
    std::vector<std::vector<int>> subsets;
    std::vector<int> pick(c);
    for (int i = 0; i < c; ++i) pick[i] = i;
    for (;;) {
      subsets.push_back(pick);
      if (c == 0) break;
      int i = c - 1;
      while (i >= 0 && pick[i] == n - c + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < c; ++j) pick[j] = pick[j - 1] + 1;
    }
    per_slot.push_back(std::move(subsets));
  }
  std::vector<WindowPattern> out;
  std::vector<std::size_t> idx(counts.size(), 0);
  for (;;) {
    WindowPattern p;
    p.ell = static_cast<int>(counts.size());
    p.counts = counts;
    for (std::size_t s = 0; s < counts.size(); ++s) p.received_sets.push_back(per_slot[s][idx[s]]);
    out.push_back(std::move(p));
    int s = static_cast<int>(counts.size()) - 1;
    while (s >= 0 && ++idx[s] == per_slot[s].size()) {
      idx[s] = 0;
      --s;
    }
    if (s < 0) break;
  }
  return out;
}

}  // namespace idos
