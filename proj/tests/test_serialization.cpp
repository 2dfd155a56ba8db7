#include <catch2/catch_amalgamated.hpp>

#include "idos/serialization.hpp"

using namespace idos;

TEST_CASE("exponent matrices roundtrip through JSON with null as -inf", "[serialization]") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = 1 + static_cast<int>(rng.next_below(5));
    const int cols = 1 + static_cast<int>(rng.next_below(5));
    ExponentMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        m.at(i, j) = rng.next_below(4) == 0 ? kNegInf
                                            : static_cast<Exponent>(rng.next_below(1000));
      }
    }
    const ojson j = exponent_matrix_to_json(m);
    REQUIRE(exponent_matrix_from_json(j) == m);
  }

  const ojson j = exponent_matrix_to_json(ExponentMatrix(1, 2, kNegInf));
  CHECK(j["entries"][0].is_null());
  CHECK_THROWS_AS(exponent_matrix_from_json(ojson{{"rows", 2}, {"cols", 2}, {"entries", {1}}}),
                  ParseError);
  CHECK_THROWS_AS(
      exponent_matrix_from_json(ojson{{"rows", 1}, {"cols", 1}, {"entries", {-4}}}),
      ParseError);
}

TEST_CASE("generator specs roundtrip through JSON", "[serialization]") {
  const GeneratorSpec spec = make_generator_spec(CodeParams{4, 2, 1, 2}, Construction::A);
  const ojson j = generator_spec_to_json(spec);
  CHECK(j["n"] == 4);
  CHECK(j["construction"] == "A");
  CHECK(j["degree"] == 37);
  CHECK(j["modulus"][0] == 37);
  CHECK(j["exponent_matrices"].size() == 2);

  const GeneratorSpec back = generator_spec_from_json(j);
  CHECK(back.params == spec.params);
  CHECK(back.degree == spec.degree);
  CHECK(back.modulus == spec.modulus);
  CHECK(back.exponent_matrices[0] == spec.exponent_matrices[0]);
  CHECK(back.exponent_matrices[1] == spec.exponent_matrices[1]);

  ojson bad = j;
  bad["exponent_matrices"].erase(1);
  CHECK_THROWS_AS(generator_spec_from_json(bad), BadParams);
  ojson unknown = j;
  unknown["construction"] = "z";
  CHECK_THROWS_AS(generator_spec_from_json(unknown), ParseError);
}

TEST_CASE("field matrices roundtrip through hex JSON", "[serialization]") {
  const FieldCtx ctx = FieldCtx::with_random_modulus(17, 5);
  SplitMix64 rng(8);
  FieldMatrix m(ctx, 3, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) m.at(i, j) = ctx.random_element(rng);
  }
  const ojson j = field_matrix_to_json(m);
  CHECK(j["entries"].size() == 6);
  const FieldMatrix back = field_matrix_from_json(j, ctx);
  for (int i = 0; i < 3; ++i) {
    for (int j2 = 0; j2 < 2; ++j2) CHECK(back.at(i, j2) == m.at(i, j2));
  }
}

TEST_CASE("window patterns serialize with 1-based indices", "[serialization]") {
  WindowPattern p;
  p.ell = 2;
  p.counts = {1, 3};
  p.received_sets = {{0}, {0, 1, 2}};
  const ojson j = window_pattern_to_json(p);
  CHECK(j["received_sets"][0][0] == 1);
  CHECK(j["received_sets"][1][2] == 3);
  const WindowPattern back = window_pattern_from_json(j);
  CHECK(back.counts == p.counts);
  CHECK(back.received_sets == p.received_sets);
  CHECK_THROWS_AS(
      window_pattern_from_json(ojson{{"ell", 1}, {"counts", {1}}, {"received_sets", {{0}}}}),
      ParseError);
}

TEST_CASE("dominance reports and certificates serialize 1-based", "[serialization]") {
  ExponentMatrix m(2, 2);
  m.at(0, 0) = 0;
  m.at(0, 1) = 0;
  m.at(1, 0) = 1;
  m.at(1, 1) = 2;
  const ojson rep = dominance_report_to_json(find_dominant_permutation(m));
  CHECK(rep["exists"] == true);
  CHECK(rep["sigma_star"] == ojson::array({1, 2}));
  CHECK(rep["dominant_sum"] == 2);
  CHECK(rep["runner_up_sum"] == 1);

  const ojson none = dominance_report_to_json(find_dominant_permutation(ExponentMatrix(2, 2, 0)));
  CHECK(none["exists"] == false);
  CHECK_FALSE(none.contains("sigma_star"));

  ExponentMatrix diag(2, 2);
  diag.at(0, 0) = 5;
  diag.at(0, 1) = 0;
  diag.at(1, 0) = 0;
  diag.at(1, 1) = 7;
  const auto cert = decompose_dominance(diag, {{0}, {1}});
  REQUIRE(cert.has_value());
  const ojson cj = dominance_certificate_to_json(*cert);
  CHECK(cj["parts"].size() == 2);
  CHECK(cj["parts"][0]["rows"] == ojson::array({1}));
  CHECK(cj["total_dominant_sum"] == 12);
  CHECK(cj["sigma_star"] == ojson::array({1, 2}));
}

TEST_CASE("verification reports serialize canonically", "[serialization]") {
  const GeneratorSpec spec = make_generator_spec(CodeParams{2, 1, 1, 1}, Construction::A);
  const FieldCtx ctx = spec.make_field();
  const VerificationReport rep = verify_idos(spec, ctx, {});
  const ojson j = verification_report_to_json(rep);
  CHECK(j["verdict"] == "PASS");
  CHECK(j["failures"].empty());
  CHECK_FALSE(j.contains("elapsed"));  // timing never enters the canonical report

  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"spec_id", "params", "mode", "verdict",
                                         "windows_checked", "matrices_checked",
                                         "max_dominant_sum", "failures"});
  CHECK(j.dump() == verification_report_to_json(rep).dump());
}

TEST_CASE("trace lines and decoder events", "[serialization]") {
  const FieldCtx ctx = FieldCtx::with_modulus(3, {3, 1, 0});
  const ojson sent = trace_sent_line(4, {ctx.one(), ctx.alpha()}, ctx);
  CHECK(sent["t"] == 4);
  CHECK(sent["sent"] == ojson::array({"0x1", "0x2"}));

  const ojson received =
      trace_received_line(4, {ReceivedSymbol{0, ctx.one()}, ReceivedSymbol{2, ctx.alpha()}}, ctx);
  CHECK(received["received"][0]["idx"] == 1);
  CHECK(received["received"][1]["idx"] == 3);
  CHECK(received["received"][1]["val"] == "0x2");

  DecoderEvent rec;
  rec.kind = DecoderEvent::Kind::Recovered;
  rec.window_start = 2;
  rec.window_end = 3;
  rec.clean = true;
  rec.messages = {{ctx.one()}, {ctx.alpha()}};
  const auto rj = decoder_event_to_json(rec, ctx);
  REQUIRE(rj.has_value());
  CHECK((*rj)["event"] == "recovered");
  CHECK((*rj)["slots"] == ojson::array({2, 3}));
  CHECK((*rj)["messages"][1][0] == "0x2");

  rec.clean = false;
  CHECK((*decoder_event_to_json(rec, ctx))["event"] == "recovered_best_effort");

  DecoderEvent viol;
  viol.kind = DecoderEvent::Kind::ViolationDetected;
  viol.violation = ViolationKind::DebtExceeded;
  viol.slot = 9;
  const auto vj = decoder_event_to_json(viol, ctx);
  REQUIRE(vj.has_value());
  CHECK((*vj)["kind"] == "DebtExceeded");

  DecoderEvent closed;
  closed.kind = DecoderEvent::Kind::WindowClosed;
  CHECK_FALSE(decoder_event_to_json(closed, ctx).has_value());
}
