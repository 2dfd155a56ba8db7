#pragma once

#include <cstdint>
#include <vector>

#include "idos/codec.hpp"
#include "idos/constructions.hpp"
#include "idos/errors.hpp"
#include "idos/rng.hpp"

namespace idos {

struct SimulationStats {
  std::uint64_t seed = 0;
  double epsilon = 0;
  std::int64_t slots_run = 0;
  std::uint64_t windows_completed = 0;      // recoveries of any kind
  std::uint64_t acceptable_windows = 0;     // clean window closures
  std::uint64_t recovered_windows = 0;      // clean recoveries
  std::uint64_t best_effort_recoveries = 0;
  std::uint64_t violations_debt = 0;
  std::uint64_t violations_delay = 0;
  std::int64_t max_observed_delay = 0;      // over clean closures, in slots
};

// Drives the codec over an i.i.d. symbol-erasure channel: every one of the n
// symbols per slot is erased independently with probability epsilon. Erasure
// draws consume their stream in slot-major, symbol-minor order; message draws
// come from an independent sub-stream, slot-major, component-minor, one limb
// block per component. Fixed seed means bit-identical stats.
inline SimulationStats simulate_channel(const GeneratorSpec& spec, const FieldCtx& ctx,
                                        double epsilon, std::int64_t slots,
                                        std::uint64_t seed) {
  if (epsilon < 0.0 || epsilon > 1.0) throw BadParams("epsilon must lie in [0, 1]");
  if (slots < 0) throw BadParams("slot count must be non-negative");
  SimulationStats stats;
  stats.seed = seed;
  stats.epsilon = epsilon;

  SplitMix64 erasure_rng(derive_seed(seed, 0xE7A5));
  SplitMix64 message_rng(derive_seed(seed, 0x3E55));
  EncoderState encoder(spec, ctx);
  DecoderState decoder(spec, ctx);
  const CodeParams& p = spec.params;

  for (std::int64_t t = 1; t <= slots; ++t) {
    std::vector<FieldElement> s;
    s.reserve(p.k);
    for (int j = 0; j < p.k; ++j) s.push_back(ctx.random_element(message_rng));
    const std::vector<FieldElement> c = encoder.encode_step(s);

    std::vector<ReceivedSymbol> rx;
    for (int j = 0; j < p.n; ++j) {
      if (erasure_rng.next_double() >= epsilon) rx.push_back(ReceivedSymbol{j, c[j]});
    }
    for (const auto& ev : decoder.ingest(t, rx)) {
      switch (ev.kind) {
        case DecoderEvent::Kind::WindowClosed:
          if (ev.clean) {
            ++stats.acceptable_windows;
            stats.max_observed_delay =
                std::max(stats.max_observed_delay, ev.window_end - ev.window_start + 1);
          }
          break;
        case DecoderEvent::Kind::Recovered:
          ++stats.windows_completed;
          if (ev.clean) {
            ++stats.recovered_windows;
          } else {
            ++stats.best_effort_recoveries;
          }
          break;
        case DecoderEvent::Kind::ViolationDetected:
          if (*ev.violation == ViolationKind::DebtExceeded) {
            ++stats.violations_debt;
          } else {
            ++stats.violations_delay;
          }
          break;
      }
    }
    ++stats.slots_run;
  }
  return stats;
}

}  // namespace idos
