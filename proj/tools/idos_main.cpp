// Command-line front end: construct generator specs, verify them
// exhaustively, analyze dominance, run encode/decode traces, and simulate an
// i.i.d. symbol-erasure channel.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "idos/serialization.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw idos::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw idos::Error("cannot write " + path);
  out << content;
}

idos::ojson parse_json(const std::string& text, const std::string& what) {
  idos::ojson j = idos::ojson::parse(text, nullptr, false);
  if (j.is_discarded()) throw idos::Error("invalid JSON in " + what);
  return j;
}

idos::GeneratorSpec load_spec(const std::string& path) {
  return idos::generator_spec_from_json(parse_json(read_file(path), path));
}

std::uint64_t default_max_cases() {
  if (const char* env = std::getenv("IDOS_MAX_CASES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

struct ConstructArgs {
  std::string construction;
  int n = 0, k = 0, m = 0, tau = 0;
  std::optional<int> degree;
  std::string modulus_file;
  std::uint64_t seed = 1;
  bool force = false;
  std::string output;
};

int run_construct(const ConstructArgs& a) {
  idos::Construction c;
  if (a.construction == "a" || a.construction == "A") {
    c = idos::Construction::A;
  } else if (a.construction == "b" || a.construction == "B") {
    c = idos::Construction::B;
  } else {
    std::cerr << "error: construction must be 'a' or 'b'\n";
    return kExitUsage;
  }
  idos::CodeParams params{a.n, a.k, a.m, a.tau};
  idos::GeneratorSpec spec = idos::make_generator_spec(params, c, a.degree, a.seed, a.force);
  if (!a.modulus_file.empty()) {
    const auto j = parse_json(read_file(a.modulus_file), a.modulus_file);
    spec.modulus = j.get<std::vector<int>>();
    if (spec.modulus.empty() || spec.modulus.front() != spec.degree) {
      throw idos::DegreeMismatch("modulus file degree disagrees with spec degree");
    }
    idos::FieldCtx::with_modulus(spec.degree, spec.modulus);  // rejects reducible moduli
  }
  write_output(a.output, idos::generator_spec_to_json(spec).dump(2) + "\n");
  return 0;
}

struct VerifyArgs {
  std::string spec_file;
  std::string mode = "both";
  int jobs = 1;
  std::uint64_t max_cases = default_max_cases();
  std::uint64_t seed = 1;
  std::string output;
};

int run_verify(const VerifyArgs& a) {
  const idos::GeneratorSpec spec = load_spec(a.spec_file);
  const idos::FieldCtx ctx = spec.make_field(a.seed);
  idos::VerifyOptions options;
  if (a.mode == "invertibility") {
    options.mode = idos::VerifyMode::Invertibility;
  } else if (a.mode == "roundtrip") {
    options.mode = idos::VerifyMode::Roundtrip;
  } else if (a.mode == "both") {
    options.mode = idos::VerifyMode::Both;
  } else {
    std::cerr << "error: mode must be invertibility, roundtrip or both\n";
    return kExitUsage;
  }
  options.jobs = a.jobs;
  options.max_cases = a.max_cases;
  options.seed = a.seed;
  try {
    const idos::VerificationReport report = idos::verify_idos(spec, ctx, options);
    write_output(a.output, idos::verification_report_to_json(report).dump(2) + "\n");
    std::cerr << "verified " << report.matrices_checked << " decoding matrices in "
              << report.elapsed_seconds << " s\n";
    return report.pass() ? 0 : 1;
  } catch (const idos::GuardrailExceeded& e) {
    std::cerr << "guardrail: " << e.what() << "\n";
    return 2;
  }
}

struct DompermArgs {
  std::string matrix_file;
  std::string partition;
  std::string output;
};

std::vector<std::vector<int>> parse_partition(const std::string& text) {
  std::vector<std::vector<int>> parts;
  std::stringstream outer(text);
  std::string part;
  while (std::getline(outer, part, ';')) {
    std::vector<int> cols;
    std::stringstream inner(part);
    std::string tok;
    while (std::getline(inner, tok, ',')) {
      if (tok.empty()) continue;
      const int v = std::stoi(tok);
      if (v < 1) throw idos::BadParams("partition columns are 1-based");
      cols.push_back(v - 1);
    }
    if (!cols.empty()) parts.push_back(std::move(cols));
  }
  if (parts.empty()) throw idos::BadParams("empty partition");
  return parts;
}

int run_domperm(const DompermArgs& a) {
  const idos::ExponentMatrix m =
      idos::exponent_matrix_from_json(parse_json(read_file(a.matrix_file), a.matrix_file));
  if (a.partition.empty()) {
    const idos::DominanceReport report = idos::find_dominant_permutation(m);
    write_output(a.output, idos::dominance_report_to_json(report).dump(2) + "\n");
    return 0;
  }
  const auto partition = parse_partition(a.partition);
  const auto cert = idos::decompose_dominance(m, partition);
  if (!cert) {
    write_output(a.output, idos::ojson{{"certificate", nullptr}}.dump(2) + "\n");
    return 0;
  }
  write_output(a.output,
               idos::ojson{{"certificate", idos::dominance_certificate_to_json(*cert)}}.dump(2) +
                   "\n");
  return 0;
}

struct EncodeArgs {
  std::string spec_file;
  std::string messages_file;
  std::string output;
};

int run_encode(const EncodeArgs& a) {
  const idos::GeneratorSpec spec = load_spec(a.spec_file);
  const idos::FieldCtx ctx = spec.make_field();
  idos::EncoderState encoder(spec, ctx);
  std::istringstream lines(read_file(a.messages_file));
  std::string line;
  std::int64_t expect = 1;
  std::ostringstream out;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const idos::ojson j = parse_json(line, a.messages_file);
    const std::int64_t t = j.at("t").get<std::int64_t>();
    if (t != expect) throw idos::Error("message slots must be 1,2,3,... without gaps");
    ++expect;
    std::vector<idos::FieldElement> s;
    for (const auto& hex : j.at("message")) s.push_back(ctx.from_hex(hex.get<std::string>()));
    const auto code = encoder.encode_step(s);
    out << idos::trace_sent_line(t, code, ctx).dump() << "\n";
  }
  write_output(a.output, out.str());
  return 0;
}

struct DecodeArgs {
  std::string spec_file;
  std::string trace_file;
  std::string output;
};

int run_decode(const DecodeArgs& a) {
  const idos::GeneratorSpec spec = load_spec(a.spec_file);
  const idos::FieldCtx ctx = spec.make_field();
  idos::DecoderState decoder(spec, ctx);
  std::istringstream lines(read_file(a.trace_file));
  std::string line;
  std::ostringstream out;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const idos::ojson j = parse_json(line, a.trace_file);
    if (!j.contains("received")) continue;  // tolerate mixed traces
    const std::int64_t t = j.at("t").get<std::int64_t>();
    std::vector<idos::ReceivedSymbol> rx;
    for (const auto& sym : j.at("received")) {
      const int idx = sym.at("idx").get<int>();
      if (idx < 1) throw idos::ParseError("received indices are 1-based");
      rx.push_back(
          idos::ReceivedSymbol{idx - 1, ctx.from_hex(sym.at("val").get<std::string>())});
    }
    for (const auto& ev : decoder.ingest(t, rx)) {
      if (const auto ev_json = idos::decoder_event_to_json(ev, ctx)) {
        out << ev_json->dump() << "\n";
      }
    }
  }
  write_output(a.output, out.str());
  return 0;
}

struct SimulateArgs {
  std::string spec_file;
  double epsilon = 0;
  std::int64_t slots = 0;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
};

int run_simulate(const SimulateArgs& a) {
  if (a.format != "json" && a.format != "csv") {
    std::cerr << "error: format must be json or csv\n";
    return kExitUsage;
  }
  const idos::GeneratorSpec spec = load_spec(a.spec_file);
  const idos::FieldCtx ctx = spec.make_field();
  const idos::SimulationStats stats =
      idos::simulate_channel(spec, ctx, a.epsilon, a.slots, a.seed);
  if (a.format == "csv") {
    write_output(a.output, idos::simulation_stats_to_csv(stats));
  } else {
    write_output(a.output, idos::simulation_stats_to_json(stats).dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-debt-optimal streaming code toolkit"};
  app.require_subcommand(1);

  ConstructArgs construct_args;
  auto* construct = app.add_subcommand(
      "construct", "build a generator spec for construction a (unit memory) or b (general)");
  construct->add_option("construction,--construction", construct_args.construction,
                        "a or b")->required();
  construct->add_option("n,--n", construct_args.n, "code symbols per slot")->required();
  construct->add_option("k,--k", construct_args.k, "message symbols per slot")->required();
  construct->add_option("m,--m", construct_args.m, "encoder memory")->required();
  construct->add_option("tau,--tau", construct_args.tau, "delay parameter")->required();
  construct->add_option("--degree", construct_args.degree,
                        "field degree d (default: smallest sufficient)");
  construct->add_option("--modulus", construct_args.modulus_file,
                        "JSON file with modulus exponents, descending");
  construct->add_option("--seed", construct_args.seed, "seed for the modulus search");
  construct->add_flag("--force", construct_args.force, "allow degrees below the sufficient bound");
  construct->add_option("-o,--output", construct_args.output, "output file (default stdout)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "exhaustively verify a generator spec");
  verify->add_option("--spec", verify_args.spec_file, "generator spec JSON")->required();
  verify->add_option("--mode", verify_args.mode, "invertibility | roundtrip | both");
  verify->add_option("--jobs", verify_args.jobs, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--max-cases", verify_args.max_cases,
                     "guardrail on decoding-matrix count (env IDOS_MAX_CASES)");
  verify->add_option("--seed", verify_args.seed, "seed for roundtrip message streams");
  verify->add_option("-o,--output", verify_args.output, "output file (default stdout)");

  DompermArgs domperm_args;
  auto* domperm = app.add_subcommand("domperm", "dominant-permutation analysis of a matrix");
  domperm->add_option("--matrix", domperm_args.matrix_file, "exponent matrix JSON")->required();
  domperm->add_option("--partition", domperm_args.partition,
                      "column partition like '1,2;3,4' for a decomposition certificate");
  domperm->add_option("-o,--output", domperm_args.output, "output file (default stdout)");

  EncodeArgs encode_args;
  auto* encode = app.add_subcommand("encode", "encode a message stream into a trace");
  encode->add_option("--spec", encode_args.spec_file, "generator spec JSON")->required();
  encode->add_option("--messages", encode_args.messages_file,
                     "JSON lines {\"t\":..,\"message\":[\"0x..\",..]}")
      ->required();
  encode->add_option("-o,--output", encode_args.output, "output file (default stdout)");

  DecodeArgs decode_args;
  auto* decode = app.add_subcommand("decode", "decode a received trace into recovery events");
  decode->add_option("--spec", decode_args.spec_file, "generator spec JSON")->required();
  decode->add_option("--trace", decode_args.trace_file,
                     "JSON lines {\"t\":..,\"received\":[{\"idx\":..,\"val\":..},..]}")
      ->required();
  decode->add_option("-o,--output", decode_args.output, "output file (default stdout)");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "run an i.i.d. symbol-erasure channel");
  simulate->add_option("--spec", simulate_args.spec_file, "generator spec JSON")->required();
  simulate->add_option("--epsilon", simulate_args.epsilon, "per-symbol erasure probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--slots", simulate_args.slots, "number of slots")->required();
  simulate->add_option("--seed", simulate_args.seed, "channel/message seed")->required();
  simulate->add_option("--format", simulate_args.format, "json | csv");
  simulate->add_option("-o,--output", simulate_args.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (construct->parsed()) return run_construct(construct_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (domperm->parsed()) return run_domperm(domperm_args);
    if (encode->parsed()) return run_encode(encode_args);
    if (decode->parsed()) return run_decode(decode_args);
    if (simulate->parsed()) return run_simulate(simulate_args);
  } catch (const idos::BadParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const idos::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const idos::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
