#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "idos/constructions.hpp"
#include "idos/debt.hpp"
#include "idos/errors.hpp"
#include "idos/exponents.hpp"
#include "idos/field.hpp"
#include "idos/linalg.hpp"

namespace idos {

// Time-invariant convolutional encoder: c(t) = G [s(t-m); ...; s(t)] with
// s(t) = 0 for t <= 0.
class EncoderState {
 public:
  EncoderState(const GeneratorSpec& spec, const FieldCtx& ctx)
      : spec_(&spec), ctx_(&ctx), generator_(build_generator(spec, ctx)) {
    history_.assign(spec.params.m, std::vector<FieldElement>(spec.params.k, ctx.zero()));
  }

  const GeneratorSpec& spec() const { return *spec_; }

  std::vector<FieldElement> encode_step(const std::vector<FieldElement>& s_t) {
    const int k = spec_->params.k, m = spec_->params.m;
    if (static_cast<int>(s_t.size()) != k) throw BadParams("message vector must have k symbols");
    std::vector<FieldElement> stacked;
    stacked.reserve(static_cast<std::size_t>(m + 1) * k);
    for (const auto& past : history_) stacked.insert(stacked.end(), past.begin(), past.end());
    stacked.insert(stacked.end(), s_t.begin(), s_t.end());
    std::vector<FieldElement> c = mat_vec_mul(generator_, stacked);
    history_.pop_front();
    history_.push_back(s_t);
    return c;
  }

 private:
  const GeneratorSpec* spec_;
  const FieldCtx* ctx_;
  FieldMatrix generator_;
  std::deque<std::vector<FieldElement>> history_;  // s(t-m) .. s(t-1)
};

// kl x kl (or taller, with surplus symbols) exponent matrix of one decode
// window: rows (t-1)*n + j of the stacked generator for j in R_t.
inline ExponentMatrix build_decode_window(const GeneratorSpec& spec, const WindowPattern& pattern) {
  if (pattern.received_sets.size() != pattern.counts.size()) {
    throw BadParams("pattern needs explicit received sets");
  }
  const ExponentMatrix stacked = build_stacked_exponents(spec, pattern.ell);
  std::vector<int> rows;
  for (int t = 0; t < pattern.ell; ++t) {
    for (int j : pattern.received_sets[t]) rows.push_back(t * spec.params.n + j);
  }
  std::vector<int> cols(stacked.cols());
  for (int j = 0; j < stacked.cols(); ++j) cols[j] = j;
  return stacked.submatrix(rows, cols);
}

struct ReceivedSymbol {
  int index = 0;  // 0-based position within the slot's n symbols
  FieldElement value;
};

struct DecoderEvent {
  enum class Kind { WindowClosed, Recovered, ViolationDetected } kind;
  // WindowClosed / Recovered
  std::int64_t window_start = 0;  // first slot of the window
  std::int64_t window_end = 0;    // slot at which debt returned to zero
  bool clean = false;             // window untouched by violations or lost history
  std::vector<std::vector<FieldElement>> messages;  // Recovered only, one vector per slot
  // ViolationDetected
  std::optional<ViolationKind> violation;
  std::int64_t slot = 0;
};

// Sliding-window decoder. Buffers received symbols, tracks information debt,
// and solves one linear system per window whenever the debt returns to zero.
// Messages recovered before the current window are cancelled out of the
// received values first.
//
// After a violation the recovery guarantee is gone: the messages of the
// broken window are declared lost and symbols from slots that still mix with
// them (up to violation slot + m) are excluded from later systems. Decoding
// then continues opportunistically; recoveries that leaned on that reduced
// evidence are flagged as best-effort rather than clean.
class DecoderState {
 public:
  DecoderState(const GeneratorSpec& spec, const FieldCtx& ctx)
      : spec_(&spec), ctx_(&ctx) {
    spec.validate_structure();
    if (ctx.degree() != spec.degree) {
      throw DegreeMismatch("field context degree disagrees with spec degree");
    }
    for (int t = 0; t <= spec.params.m; ++t) coeffs_.push_back(lift(spec.coeff(t), ctx));
  }

  const GeneratorSpec& spec() const { return *spec_; }
  std::int64_t window_start_slot() const { return theta_; }

  const std::map<std::int64_t, std::vector<FieldElement>>& known_messages() const {
    return known_;
  }

  std::vector<DecoderEvent> ingest(std::int64_t t, const std::vector<ReceivedSymbol>& received) {
    if (t != debt_.t + 1) {
      throw OutOfOrderSlot("expected slot " + std::to_string(debt_.t + 1) + ", got " +
                           std::to_string(t));
    }
    const CodeParams& p = spec_->params;
    for (const auto& r : received) {
      if (r.index < 0 || r.index >= p.n) throw BadParams("received symbol index out of range");
    }
    std::vector<DecoderEvent> events;
    debt_ = debt_step(debt_, static_cast<int>(received.size()), p);

    if (debt_.violation) {
      DecoderEvent ev;
      ev.kind = DecoderEvent::Kind::ViolationDetected;
      ev.violation = debt_.violation;
      ev.slot = debt_.violation_slot;
      events.push_back(std::move(ev));
      // Messages in (theta_, t] are abandoned; slots up to t + m still mix
      // with them and cannot feed clean systems.
      theta_ = t;
      taint_horizon_ = t + p.m;
      pending_.clear();
      window_reported_ = false;
      DebtState fresh;
      fresh.t = t;
      fresh.theta_last = t;
      debt_ = fresh;
      return events;
    }

    pending_.emplace(t, received);

    if (debt_.debt == 0) {
      const bool clean = theta_ >= taint_horizon_;
      if (!window_reported_) {
        DecoderEvent closed;
        closed.kind = DecoderEvent::Kind::WindowClosed;
        closed.window_start = theta_ + 1;
        closed.window_end = t;
        closed.clean = clean;
        events.push_back(closed);
        window_reported_ = true;  // retries after a failed solve are not new windows
      }

      if (auto messages = try_solve_window(t)) {
        DecoderEvent rec;
        rec.kind = DecoderEvent::Kind::Recovered;
        rec.window_start = theta_ + 1;
        rec.window_end = t;
        rec.clean = clean;
        rec.messages = std::move(*messages);
        for (std::int64_t s = theta_ + 1; s <= t; ++s) {
          known_[s] = rec.messages[static_cast<std::size_t>(s - theta_ - 1)];
        }
        events.push_back(std::move(rec));
        theta_ = t;
        pending_.clear();
        window_reported_ = false;
      } else if (t - theta_ >= 2 * (p.tau + 1)) {
        // Unrecoverable stretch (possible only for codes that fail
        // verification, or right after a violation): drop it so state stays
        // bounded.
        theta_ = t;
        taint_horizon_ = t + p.m;
        pending_.clear();
        window_reported_ = false;
      }
    }
    return events;
  }

 private:
  // Attempt to solve for s(theta_+1 .. t) from usable buffered symbols.
  // Returns one message vector per window slot on success.
  std::optional<std::vector<std::vector<FieldElement>>> try_solve_window(std::int64_t t) {
    const CodeParams& p = spec_->params;
    const int ell = static_cast<int>(t - theta_);
    const int unknowns = p.k * ell;

    std::vector<int> rows;
    std::vector<FieldElement> rhs;
    const ExponentMatrix stacked = build_stacked_exponents(*spec_, ell);
    for (const auto& [slot, symbols] : pending_) {
      if (slot <= taint_horizon_) continue;  // mixes with lost messages
      const int local_t = static_cast<int>(slot - theta_);
      for (const auto& sym : symbols) {
        rows.push_back((local_t - 1) * p.n + sym.index);
        rhs.push_back(cancel_known(slot, sym));
      }
    }
    if (static_cast<int>(rows.size()) < unknowns) return std::nullopt;

    std::vector<int> cols(unknowns);
    for (int j = 0; j < unknowns; ++j) cols[j] = j;
    const FieldMatrix system = lift(stacked.submatrix(rows, cols), *ctx_);
    std::vector<FieldElement> solution;
    try {
      solution = mat_solve(system, rhs);
    } catch (const RankDeficient&) {
      return std::nullopt;
    } catch (const Inconsistent&) {
      return std::nullopt;
    }
    std::vector<std::vector<FieldElement>> messages(ell);
    for (int s = 0; s < ell; ++s) {
      messages[s].assign(solution.begin() + static_cast<std::size_t>(s) * p.k,
                         solution.begin() + static_cast<std::size_t>(s + 1) * p.k);
    }
    return messages;
  }

  // Remove the contribution of messages recovered before the window:
  // c_hat = c - sum_i G^(i) s(slot - i) over i with slot - i <= theta_.
  FieldElement cancel_known(std::int64_t slot, const ReceivedSymbol& sym) const {
    const CodeParams& p = spec_->params;
    FieldElement acc = sym.value;
    for (int i = 1; i <= p.m; ++i) {
      const std::int64_t src = slot - i;
      if (src > theta_) continue;  // inside the window: stays unknown
      if (src <= 0) continue;      // fixed to zero by convention
      auto it = known_.find(src);
      if (it == known_.end()) continue;  // lost to a violation: contribution unknown
      const FieldMatrix& g = coeffs_[i];
      for (int j = 0; j < p.k; ++j) {
        acc = ctx_->add(acc, ctx_->mul(g.at(sym.index, j), it->second[j]));
      }
    }
    return acc;
  }

  const GeneratorSpec* spec_;
  const FieldCtx* ctx_;
  std::vector<FieldMatrix> coeffs_;  // lifted G^(0) .. G^(m)
  DebtState debt_;
  std::int64_t theta_ = 0;          // all wanted messages <= theta_ are resolved
  std::int64_t taint_horizon_ = 0;  // slots <= this mix with lost messages
  bool window_reported_ = false;    // current window already emitted WindowClosed
  std::map<std::int64_t, std::vector<ReceivedSymbol>> pending_;
  std::map<std::int64_t, std::vector<FieldElement>> known_;
};

}  // namespace idos
