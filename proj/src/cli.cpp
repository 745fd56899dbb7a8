#include "q2mpc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "q2mpc/formats.hpp"
#include "q2mpc/trials.hpp"

namespace q2mpc {
namespace {

int code_for(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const MalformedCircuit*>(&e) ||
      dynamic_cast<const UnknownWire*>(&e) || dynamic_cast<const UnassignedInput*>(&e) ||
      dynamic_cast<const NotPrime*>(&e) || dynamic_cast<const FieldTooSmall*>(&e) ||
      dynamic_cast<const FieldTooSmallForPoints*>(&e) ||
      dynamic_cast<const PlayerOutOfRange*>(&e) ||
      dynamic_cast<const PlayerCountMismatch*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e))
    return 2;
  if (dynamic_cast<const StructureViolation*>(&e) || dynamic_cast<const Unqualified*>(&e))
    return 3;
  return 4;
}

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string set_text(const PlayerSet& s) {
  std::string out = "{";
  bool first = true;
  for (int p : s) {
    out += (first ? "" : " ") + std::to_string(p);
    first = false;
  }
  return out + "}";
}

// Common --msp / --threshold / --structure trio of check and run.
struct ProgramArgs {
  std::string msp_path;
  std::string threshold;  // "n,t,q"
  std::string structure_path;

  void attach(CLI::App* cmd, bool msp_required) {
    auto* m = cmd->add_option("--msp", msp_path, "span program file");
    auto* t = cmd->add_option("--threshold", threshold,
                              "threshold program spec n,t,q instead of a file");
    cmd->add_option("--structure", structure_path, "adversary structure file");
    m->excludes(t);
    if (msp_required) {
      // one of the two sources must be present; checked after parsing so the
      // error lands in the report instead of CLI11's stream
    }
  }

  bool from_threshold() const { return !threshold.empty(); }

  std::tuple<int, int, uint64_t> threshold_params() const {
    int n = 0, t = 0;
    unsigned long long q = 0;
    char tail = 0;
    if (std::sscanf(threshold.c_str(), "%d,%d,%llu%c", &n, &t, &q, &tail) != 3 || n <= 0 ||
        t < 0)
      throw ParseError("expected --threshold n,t,q, got '" + threshold + "'", 0);
    return {n, t, q};
  }

  Msp load_msp() const {
    if (from_threshold()) {
      auto [n, t, q] = threshold_params();
      return threshold_msp(n, t, q);
    }
    if (msp_path.empty()) throw ParseError("one of --msp or --threshold is required", 0);
    return parse_msp(read_file(msp_path));
  }

  std::optional<AdversaryStructure> load_structure() const {
    if (!structure_path.empty()) return parse_structure(read_file(structure_path));
    if (from_threshold()) {
      auto [n, t, q] = threshold_params();
      (void)q;
      return AdversaryStructure::threshold(n, t);
    }
    return std::nullopt;
  }

  std::string describe_msp() const {
    if (from_threshold()) {
      auto [n, t, q] = threshold_params();
      return "threshold n=" + std::to_string(n) + " t=" + std::to_string(t) +
             " q=" + std::to_string(q);
    }
    return "file " + msp_path;
  }

  std::string describe_structure() const {
    if (!structure_path.empty()) return "file " + structure_path;
    if (from_threshold()) {
      auto [n, t, q] = threshold_params();
      (void)q;
      return "threshold t=" + std::to_string(t) + " over " + std::to_string(n) + " players";
    }
    return "none";
  }
};

CliResult cmd_check(const ProgramArgs& prog) {
  std::ostringstream out;
  Msp msp = prog.load_msp();
  std::optional<AdversaryStructure> st = prog.load_structure();
  if (!st) throw ParseError("check needs --structure (or --threshold to derive one)", 0);

  out << "msp: " << prog.describe_msp() << "\n";
  out << "players: " << msp.players() << "\n";
  out << "matrix: " << msp.rows() << " x " << msp.cols() << "\n";
  out << "structure: " << prog.describe_structure() << " (" << st->maximal().size()
      << " maximal sets)\n";

  bool q2 = st->is_qk(2);
  bool q3 = st->is_qk(3);
  bool rejected = msp.rejects(*st);
  bool mult = msp.recombination_vector().has_value();
  out << "is_q2: " << (q2 ? "yes" : "no") << "\n";
  out << "is_q3: " << (q3 ? "yes" : "no") << "\n";
  out << "rejected_by_msp: " << (rejected ? "yes" : "no") << "\n";
  out << "has_multiplication: " << (mult ? "yes" : "no") << "\n";
  if (mult) {
    out << "recombination:";
    for (const Fel& r : *msp.recombination_vector()) out << " " << r.v;
    out << "\n";
  }
  bool ok = q2 && rejected && mult;
  out << "verdict: " << (ok ? "ok" : "failed") << "\n";
  return {ok ? 0 : 3, out.str()};
}

struct TrialOut {
  std::string line;
  std::string outputs_key;
  std::string transcript;
  std::string error;
  PlayerSet disq;
  bool match = false;
  int restarts = 0;
  long long rounds = 0, messages = 0, bounded = 0;
};

CliResult cmd_run(const ProgramArgs& prog, const std::string& circuit_path,
                  const std::string& adversary_text, const std::string& corrupt_text,
                  int k, uint64_t seed, int trials, const std::string& inputs_text,
                  bool rushing, bool overpowered, bool with_transcript) {
  std::ostringstream out;
  Circuit circuit = parse_circuit(read_file(circuit_path));
  circuit.validate();
  Msp msp = prog.load_msp();
  std::optional<AdversaryStructure> st = prog.load_structure();

  AdversaryScript script = parse_strategy(adversary_text);
  script.rushing = rushing;
  script.overpowered = overpowered;
  for (size_t pos = 0; pos < corrupt_text.size();) {
    size_t comma = corrupt_text.find(',', pos);
    std::string item = corrupt_text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      if (item.find_first_not_of("0123456789") != std::string::npos || item.size() > 7)
        throw ParseError("bad --corrupt entry '" + item + "'", 0);
      script.corrupt.insert((int)std::stoul(item));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (st && !overpowered && !st->contains(script.corrupt))
    throw StructureViolation("corrupt set " + set_text(script.corrupt) +
                             " is outside the tolerated structure");

  const Field base = msp.field();
  WireValues fixed_inputs;
  for (size_t pos = 0; pos < inputs_text.size();) {
    size_t comma = inputs_text.find(',', pos);
    std::string item = inputs_text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      size_t eq = item.find('=');
      if (eq == std::string::npos || eq == 0 ||
          item.find_first_not_of("0123456789", eq + 1) != std::string::npos ||
          eq + 1 >= item.size())
        throw ParseError("bad --inputs entry '" + item + "'", 0);
      fixed_inputs[item.substr(0, eq)] = base.fe(std::stoull(item.substr(eq + 1)));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  auto wires = circuit.input_wires();
  if (!fixed_inputs.empty())
    for (const auto& [w, owner] : wires) {
      (void)owner;
      if (!fixed_inputs.count(w))
        throw ParseError("--inputs is missing a value for wire " + w, 0);
    }

  int mul_gates = 0;
  for (const Gate& g : circuit.gates)
    if (g.kind == GateKind::mul) ++mul_gates;

  out << "circuit: " << circuit_path << " (" << circuit.gates.size() << " gates, " << mul_gates
      << " mul)\n";
  out << "msp: " << prog.describe_msp() << "  players: " << msp.players() << "\n";
  out << "adversary: " << adversary_text << " corrupt=" << set_text(script.corrupt)
      << " rushing=" << (rushing ? "yes" : "no")
      << (overpowered ? " overpowered=yes" : "") << "\n";
  out << "k: " << k << "  seed: " << seed << "  trials: " << trials << "\n";
  if (fixed_inputs.empty())
    out << "inputs: random per trial\n";
  else {
    out << "inputs: fixed";
    for (const auto& [w, v] : fixed_inputs) out << " " << w << "=" << v.v;
    out << "\n";
  }

  auto kernel = [&](int index, uint64_t trial_seed) -> TrialOut {
    TrialOut t;
    try {
      WireValues ins = fixed_inputs;
      if (ins.empty()) {
        SplitMix draw(SplitMix::stream_seed(trial_seed, (uint64_t)msp.players() + 17));
        for (const auto& [w, owner] : wires) {
          (void)owner;
          ins[w] = base.fe(draw.raw());
        }
      }
      auto adv = make_adversary(script);
      Network net(msp.players(), trial_seed, {with_transcript});
      RunOutcome r = run_mpc(net, *adv, circuit, ins, msp, k);
      WireValues plain = evaluate_plain(circuit, ins);

      std::ostringstream key;
      bool first = true;
      for (const auto& [w, v] : r.outputs) {
        key << (first ? "" : " ") << w << "=" << v.v;
        first = false;
      }
      t.outputs_key = key.str();
      t.match = r.outputs == plain;
      t.disq = r.disqualified;
      t.restarts = r.restarts;
      t.rounds = r.stats.rounds;
      t.messages = r.stats.messages;
      t.bounded = r.stats.bounded_events;

      std::ostringstream line;
      line << "trial " << index << ": inputs";
      for (const auto& [w, v] : ins) line << " " << w << "=" << v.v;
      line << " | outputs " << t.outputs_key << " | " << (t.match ? "match" : "MISMATCH")
           << " | disqualified " << set_text(t.disq) << " | restarts " << t.restarts;
      t.line = line.str();
      if (with_transcript) t.transcript = to_string(net.transcript());
    } catch (const Error& e) {
      t.error = e.what();
      t.line = "trial " + std::to_string(index) + ": protocol failure: " + t.error;
    }
    return t;
  };

  std::vector<TrialOut> results = run_trials(trials, seed, kernel);

  std::map<std::string, int> histogram;
  std::map<int, int> disq_counts;
  long long total_restarts = 0, total_rounds = 0, total_messages = 0, total_bounded = 0;
  int max_restarts = 0, mismatches = 0;
  std::string first_error;
  for (const TrialOut& t : results) {
    out << t.line << "\n";
    if (with_transcript && !t.transcript.empty()) out << t.transcript;
    if (!t.error.empty()) {
      if (first_error.empty()) first_error = t.error;
      continue;
    }
    ++histogram[t.outputs_key];
    for (int p : t.disq) ++disq_counts[p];
    total_restarts += t.restarts;
    max_restarts = std::max(max_restarts, t.restarts);
    total_rounds += t.rounds;
    total_messages += t.messages;
    total_bounded += t.bounded;
    if (!t.match) ++mismatches;
  }

  double p = std::ldexp(1.0, -k);
  double bound = p * trials;
  double sigma = std::sqrt(trials * p * (1.0 - p));
  out << "aggregate:\n";
  out << "  output histogram:";
  for (const auto& [key, count] : histogram) out << " [" << key << "] x" << count;
  out << "\n";
  out << "  undetected cheats: " << mismatches << "  (bound 2^-" << k << " * " << trials
      << " = " << fmt(bound) << ", 3 sigma band [" << fmt(std::max(0.0, bound - 3 * sigma))
      << ", " << fmt(bound + 3 * sigma) << "])\n";
  out << "  disqualifications:";
  if (disq_counts.empty()) out << " none";
  for (const auto& [pl, count] : disq_counts) out << " P" << pl << " x" << count;
  out << "\n";
  out << "  restarts: total " << total_restarts << "  max " << max_restarts << "\n";
  out << "  mean rounds: " << fmt((double)total_rounds / trials, 1) << "  mean messages: "
      << fmt((double)total_messages / trials, 1) << "\n";
  out << "  mean bounded events: " << fmt((double)total_bounded / trials, 1) << "\n";

  if (!first_error.empty()) {
    out << "protocol failure: " << first_error << "\n";
    return {4, out.str()};
  }
  return {0, out.str()};
}

CliResult cmd_gen_msp(const std::string& kind, int n, int t, uint64_t q) {
  if (kind != "threshold") throw ParseError("unknown generator '" + kind + "'", 0);
  return {0, serialize(threshold_msp(n, t, q))};
}

}  // namespace

CliResult cli_main(const std::vector<std::string>& args) {
  CLI::App app{"MPC simulator for Q2 adversary structures"};
  app.require_subcommand(1);

  ProgramArgs check_prog;
  auto* check = app.add_subcommand("check", "verify a span program against a structure");
  check_prog.attach(check, true);

  ProgramArgs run_prog;
  std::string circuit_path, adversary_text = "honest", corrupt_text, inputs_text;
  int k = 8, trials = 1;
  uint64_t seed = 0;
  bool no_rushing = false, overpowered = false, with_transcript = false;
  auto* run = app.add_subcommand("run", "execute a circuit under an adversary script");
  run->add_option("--circuit", circuit_path, "circuit file")->required();
  run_prog.attach(run, true);
  run->add_option("--adversary", adversary_text, "strategy name[:key=val,...]");
  run->add_option("--corrupt", corrupt_text, "comma-separated corrupt player indices");
  run->add_option("--k", k, "security parameter")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "master seed (default 0)");
  run->add_option("--trials", trials, "trial count")->check(CLI::PositiveNumber);
  run->add_option("--inputs", inputs_text, "fixed inputs wire=value,... (default: random)");
  run->add_flag("--no-rushing", no_rushing, "adversary sends before seeing honest traffic");
  run->add_flag("--overpowered", overpowered, "skip the corrupt-set structure check");
  run->add_flag("--transcript", with_transcript, "append each trial's full transcript");

  std::string gen_kind;
  int gen_n = 0, gen_t = 0;
  uint64_t gen_q = 0;
  auto* gen = app.add_subcommand("gen-msp", "emit a span program file");
  gen->add_option("kind", gen_kind, "generator kind (threshold)")->required();
  gen->add_option("--n", gen_n, "player count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--t", gen_t, "corruption threshold")->required()
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--q", gen_q, "field modulus")->required()->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (check->parsed()) return cmd_check(check_prog);
    if (run->parsed())
      return cmd_run(run_prog, circuit_path, adversary_text, corrupt_text, k, seed, trials,
                     inputs_text, !no_rushing, overpowered, with_transcript);
    return cmd_gen_msp(gen_kind, gen_n, gen_t, gen_q);
  } catch (const CLI::CallForHelp&) {
    return {0, app.help()};
  } catch (const CLI::ParseError& e) {
    return {2, std::string("argument error: ") + e.what() + "\n"};
  } catch (const ParseError& e) {
    std::string loc = e.line > 0 ? " (line " + std::to_string(e.line) + ", column " +
                                       std::to_string(e.column) + ")"
                                 : "";
    return {2, std::string("parse error: ") + e.what() + loc + "\n"};
  } catch (const Error& e) {
    return {code_for(e), std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace q2mpc
