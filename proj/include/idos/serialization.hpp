#pragma once

// JSON (de)serialization for every externally visible object. Conventions:
//   - field elements: "0x" + exactly ceil(d/4) lowercase hex digits, MSB first
//   - moduli: arrays of exponents in strictly descending order
//   - -inf exponent entries: null
//   - indices (symbol positions, permutation images, matrix coordinates in
//     violation reports): 1-based on the wire, 0-based in memory
// Reports use insertion-ordered JSON so identical runs serialize identically.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idos/codec.hpp"
#include "idos/constructions.hpp"
#include "idos/debt.hpp"
#include "idos/errors.hpp"
#include "idos/exponents.hpp"
#include "idos/field.hpp"
#include "idos/linalg.hpp"
#include "idos/simulate.hpp"
#include "idos/verify.hpp"

namespace idos {

using ojson = nlohmann::ordered_json;

inline ojson exponent_matrix_to_json(const ExponentMatrix& m) {
  ojson entries = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (m.at(i, j) == kNegInf) {
        entries.push_back(nullptr);
      } else {
        entries.push_back(m.at(i, j));
      }
    }
  }
  return ojson{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ExponentMatrix exponent_matrix_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
    throw ParseError("exponent matrix needs rows, cols and entries");
  }
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || static_cast<int>(entries.size()) != rows * cols) {
    throw ParseError("exponent matrix entry count mismatch");
  }
  ExponentMatrix m(rows, cols);
  int idx = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j2 = 0; j2 < cols; ++j2, ++idx) {
      const auto& e = entries[idx];
      if (e.is_null()) {
        m.at(i, j2) = kNegInf;
      } else if (e.is_number_integer()) {
        const std::int64_t v = e.get<std::int64_t>();
        if (v < 0) throw ParseError("finite exponents must be non-negative");
        m.at(i, j2) = v;
      } else {
        throw ParseError("exponent entries must be integers or null");
      }
    }
  }
  return m;
}

inline ojson field_matrix_to_json(const FieldMatrix& m) {
  ojson entries = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) entries.push_back(m.ctx().to_hex(m.at(i, j)));
  }
  return ojson{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline FieldMatrix field_matrix_from_json(const ojson& j, const FieldCtx& ctx) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || static_cast<int>(entries.size()) != rows * cols) {
    throw ParseError("field matrix entry count mismatch");
  }
  FieldMatrix m(ctx, rows, cols);
  int idx = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j2 = 0; j2 < cols; ++j2, ++idx) {
      m.at(i, j2) = ctx.from_hex(entries[idx].get<std::string>());
    }
  }
  return m;
}

inline ojson generator_spec_to_json(const GeneratorSpec& spec) {
  ojson mats = ojson::array();
  for (const auto& m : spec.exponent_matrices) mats.push_back(exponent_matrix_to_json(m));
  return ojson{{"n", spec.params.n},
               {"k", spec.params.k},
               {"m", spec.params.m},
               {"tau", spec.params.tau},
               {"construction", construction_name(spec.construction)},
               {"degree", spec.degree},
               {"modulus", spec.modulus},
               {"exponent_matrices", std::move(mats)}};
}

inline GeneratorSpec generator_spec_from_json(const ojson& j) {
  GeneratorSpec spec;
  try {
    spec.params.n = j.at("n").get<int>();
    spec.params.k = j.at("k").get<int>();
    spec.params.m = j.at("m").get<int>();
    spec.params.tau = j.at("tau").get<int>();
    const std::string c = j.at("construction").get<std::string>();
    if (c == "A" || c == "a") {
      spec.construction = Construction::A;
    } else if (c == "B" || c == "b") {
      spec.construction = Construction::B;
    } else if (c == "custom") {
      spec.construction = Construction::Custom;
    } else {
      throw ParseError("unknown construction '" + c + "'");
    }
    spec.degree = j.at("degree").get<int>();
    if (j.contains("modulus") && !j.at("modulus").is_null()) {
      spec.modulus = j.at("modulus").get<std::vector<int>>();
    }
    for (const auto& m : j.at("exponent_matrices")) {
      spec.exponent_matrices.push_back(exponent_matrix_from_json(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad generator spec: ") + e.what());
  }
  spec.validate_structure();
  return spec;
}

inline ojson window_pattern_to_json(const WindowPattern& p) {
  ojson sets = ojson::array();
  for (const auto& rt : p.received_sets) {
    ojson s = ojson::array();
    for (int idx : rt) s.push_back(idx + 1);
    sets.push_back(std::move(s));
  }
  return ojson{{"ell", p.ell}, {"counts", p.counts}, {"received_sets", std::move(sets)}};
}

inline WindowPattern window_pattern_from_json(const ojson& j) {
  WindowPattern p;
  p.ell = j.at("ell").get<int>();
  p.counts = j.at("counts").get<std::vector<int>>();
  if (j.contains("received_sets") && !j.at("received_sets").is_null()) {
    for (const auto& s : j.at("received_sets")) {
      std::vector<int> rt;
      for (const auto& idx : s) {
        const int v = idx.get<int>();
        if (v < 1) throw ParseError("received indices are 1-based");
        rt.push_back(v - 1);
      }
      p.received_sets.push_back(std::move(rt));
    }
  }
  if (static_cast<int>(p.counts.size()) != p.ell) {
    throw ParseError("window pattern counts disagree with ell");
  }
  return p;
}

inline ojson dominance_report_to_json(const DominanceReport& r) {
  ojson j{{"exists", r.exists}};
  if (r.exists) {
    ojson sigma = ojson::array();
    for (int row : r.sigma_star) sigma.push_back(row + 1);
    j["sigma_star"] = std::move(sigma);
    j["dominant_sum"] = *r.dominant_sum;
    j["runner_up_sum"] = r.runner_up_sum ? ojson(*r.runner_up_sum) : ojson(nullptr);
  }
  return j;
}

inline ojson dominance_certificate_to_json(const DominanceCertificate& c) {
  ojson parts = ojson::array();
  for (const auto& p : c.parts) {
    ojson cols = ojson::array(), rows = ojson::array();
    for (int x : p.columns) cols.push_back(x + 1);
    for (int x : p.rows) rows.push_back(x + 1);
    parts.push_back(ojson{{"columns", std::move(cols)},
                          {"rows", std::move(rows)},
                          {"dominant_sum", p.dominant_sum}});
  }
  ojson sigma = ojson::array();
  for (int row : c.sigma_star) sigma.push_back(row + 1);
  return ojson{{"parts", std::move(parts)},
               {"total_dominant_sum", c.total_dominant_sum},
               {"sigma_star", std::move(sigma)}};
}

// Canonical verification report: stable field order, no timing (so reports
// from identical runs are byte-identical regardless of worker count).
inline ojson verification_report_to_json(const VerificationReport& r) {
  ojson failures = ojson::array();
  for (const auto& f : r.failures) {
    failures.push_back(ojson{{"pattern", window_pattern_to_json(f.pattern)},
                             {"reason", f.reason}});
  }
  return ojson{{"spec_id", r.spec_id},
               {"params", ojson{{"n", r.params.n},
                                {"k", r.params.k},
                                {"m", r.params.m},
                                {"tau", r.params.tau}}},
               {"mode", r.mode},
               {"verdict", r.pass() ? "PASS" : "FAIL"},
               {"windows_checked", r.windows_checked},
               {"matrices_checked", r.matrices_checked},
               {"max_dominant_sum",
                r.max_dominant_sum ? ojson(*r.max_dominant_sum) : ojson(nullptr)},
               {"failures", std::move(failures)}};
}

inline ojson superregular_report_to_json(const SuperregularRouteReport& r) {
  ojson violations = ojson::array();
  for (const auto& v : r.structure_violations) {
    violations.push_back(ojson{{"condition", v.condition}, {"row", v.row}, {"col", v.col}});
  }
  return ojson{{"spec_id", r.spec_id},
               {"verdict", r.pass() ? "PASS" : "FAIL"},
               {"structure_ok", r.structure_ok},
               {"structure_violations", std::move(violations)},
               {"diagonals_ok", r.diagonals_ok},
               {"diagonal_matrices_checked", r.diagonal_matrices_checked},
               {"minors_checked", r.minors_checked},
               {"minors_skipped_trivial", r.minors_skipped_trivial},
               {"minor_failures", r.minor_failures}};
}

inline ojson simulation_stats_to_json(const SimulationStats& s) {
  return ojson{{"seed", s.seed},
               {"epsilon", s.epsilon},
               {"slots_run", s.slots_run},
               {"windows_completed", s.windows_completed},
               {"acceptable_windows", s.acceptable_windows},
               {"recovered_windows", s.recovered_windows},
               {"best_effort_recoveries", s.best_effort_recoveries},
               {"violations_debt", s.violations_debt},
               {"violations_delay", s.violations_delay},
               {"max_observed_delay", s.max_observed_delay}};
}

// CSV with the same values, in the same order, as the JSON form. Scalar cells
// are rendered through the JSON dumper so both formats always agree.
inline std::string simulation_stats_to_csv(const SimulationStats& s) {
  const ojson j = simulation_stats_to_json(s);
  std::string header, row;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += it.key();
    row += it.value().dump();
  }
  return header + "\n" + row + "\n";
}

// Trace lines (JSON lines): encoder output, decoder input, decoder events.
inline ojson trace_sent_line(std::int64_t t, const std::vector<FieldElement>& code,
                             const FieldCtx& ctx) {
  ojson sent = ojson::array();
  for (const auto& e : code) sent.push_back(ctx.to_hex(e));
  return ojson{{"t", t}, {"sent", std::move(sent)}};
}

inline ojson trace_received_line(std::int64_t t, const std::vector<ReceivedSymbol>& symbols,
                                 const FieldCtx& ctx) {
  ojson rx = ojson::array();
  for (const auto& s : symbols) {
    rx.push_back(ojson{{"idx", s.index + 1}, {"val", ctx.to_hex(s.value)}});
  }
  return ojson{{"t", t}, {"received", std::move(rx)}};
}

inline std::optional<ojson> decoder_event_to_json(const DecoderEvent& ev, const FieldCtx& ctx) {
  switch (ev.kind) {
    case DecoderEvent::Kind::Recovered: {
      ojson slots = ojson::array(), messages = ojson::array();
      for (std::int64_t s = ev.window_start; s <= ev.window_end; ++s) slots.push_back(s);
      for (const auto& m : ev.messages) {
        ojson row = ojson::array();
        for (const auto& e : m) row.push_back(ctx.to_hex(e));
        messages.push_back(std::move(row));
      }
      return ojson{{"event", ev.clean ? "recovered" : "recovered_best_effort"},
                   {"slots", std::move(slots)},
                   {"messages", std::move(messages)}};
    }
    case DecoderEvent::Kind::ViolationDetected:
      return ojson{{"event", "violation"},
                   {"kind", violation_name(*ev.violation)},
                   {"slot", ev.slot}};
    default:
      return std::nullopt;  // window-closure telemetry stays internal
  }
}

}  // namespace idos
