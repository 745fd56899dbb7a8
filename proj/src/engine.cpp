#include "q2mpc/engine.hpp"

#include <algorithm>

#include "q2mpc/errors.hpp"

namespace q2mpc {

void Circuit::validate() const {
  Field fk(q);  // primality and size checks
  std::set<std::string> assigned;
  int outputs = 0;
  auto need = [&](const std::string& w) {
    if (!assigned.count(w)) throw UnknownWire("wire used before assignment: " + w);
  };
  auto define = [&](const std::string& w) {
    if (w.empty()) throw MalformedCircuit("empty wire name");
    if (!assigned.insert(w).second) throw MalformedCircuit("wire assigned twice: " + w);
  };
  auto coeff = [&](const Fel& l) {
    if (l.q != q) throw MalformedCircuit("coefficient outside the circuit field");
  };
  for (const Gate& g : gates) {
    switch (g.kind) {
      case GateKind::input:
        if (g.owner < 0) throw MalformedCircuit("input gate without an owner: " + g.out);
        define(g.out);
        break;
      case GateKind::const_add:
      case GateKind::scalar_mul:
        coeff(g.lambda);
        need(g.in1);
        define(g.out);
        break;
      case GateKind::add:
      case GateKind::mul:
        need(g.in1);
        need(g.in2);
        define(g.out);
        break;
      case GateKind::output:
        need(g.out);
        ++outputs;
        break;
    }
  }
  if (outputs == 0) throw MalformedCircuit("circuit has no output gate");
}

std::vector<std::pair<std::string, int>> Circuit::input_wires() const {
  std::vector<std::pair<std::string, int>> ws;
  for (const Gate& g : gates)
    if (g.kind == GateKind::input) ws.emplace_back(g.out, g.owner);
  return ws;
}

std::vector<std::string> Circuit::output_wires() const {
  std::vector<std::string> ws;
  for (const Gate& g : gates)
    if (g.kind == GateKind::output) ws.push_back(g.out);
  return ws;
}

WireValues evaluate_plain(const Circuit& c, const WireValues& inputs) {
  c.validate();
  WireValues vals;
  WireValues out;
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::input: {
        auto it = inputs.find(g.out);
        if (it == inputs.end()) throw UnassignedInput("no value for input wire " + g.out);
        if (it->second.q != c.q) throw MismatchedFields();
        vals[g.out] = it->second;
        break;
      }
      case GateKind::const_add:
        vals[g.out] = g.lambda + vals.at(g.in1);
        break;
      case GateKind::scalar_mul:
        vals[g.out] = g.lambda * vals.at(g.in1);
        break;
      case GateKind::add:
        vals[g.out] = vals.at(g.in1) + vals.at(g.in2);
        break;
      case GateKind::mul:
        vals[g.out] = vals.at(g.in1) * vals.at(g.in2);
        break;
      case GateKind::output:
        out[g.out] = vals.at(g.out);
        break;
    }
  }
  return out;
}

Field auth_field_for(const Msp& msp, int k) {
  if (k < 1 || k > 62) throw DimensionMismatch("security parameter out of range");
  uint64_t span = checked_pow(msp.field().modulus(), (size_t)msp.rows());
  if (span == 0) throw FieldTooSmall("row vectors too wide to pack");
  uint64_t floor = std::max(span, uint64_t(1) << k);
  return Field(next_prime_above(floor), FieldRole::authentication);
}

RunOutcome run_mpc(Network& net, Adversary& adv, const Circuit& c, const WireValues& inputs,
                   const Msp& msp, int k) {
  c.validate();
  if (msp.field().modulus() != c.q) throw MspMismatch("circuit and span program fields differ");
  if (!adv.overpowered) {
    PlayerSet honest;
    for (int p = 0; p < msp.players(); ++p)
      if (!adv.corrupt.count(p)) honest.insert(p);
    if (msp.qualified(adv.corrupt))
      throw StructureViolation("corrupt set can reconstruct on its own");
    if (!msp.qualified(honest))
      throw StructureViolation("honest players cannot reconstruct");
  }
  for (const auto& [wire, owner] : c.input_wires()) {
    if (owner >= msp.players())
      throw PlayerOutOfRange("input owner " + std::to_string(owner));
    if (!inputs.count(wire)) throw UnassignedInput("no value for input wire " + wire);
  }

  const Field ff = auth_field_for(msp, k);
  const Field& base = msp.field();

  PlayerSet silenced;  // cut out of every later subprotocol
  PlayerSet caught;    // reported, silenced or not
  WireValues fixed;    // opened or defaulted inputs, public from now on
  int restarts = 0;

  for (;;) {
    std::map<std::string, VssCommitment> wires;
    std::map<std::string, VssCommitment> dealt_inputs;
    bool restart = false;

    for (const Gate& g : c.gates) {
      switch (g.kind) {
        case GateKind::input: {
          auto fx = fixed.find(g.out);
          if (fx != fixed.end()) {
            wires.emplace(g.out, vss_public(msp, ff, k, fx->second));
            break;
          }
          VssDealResult r = vss_deal(net, adv, msp, ff, k, g.owner, inputs.at(g.out), silenced);
          if (r.outcome != VssOutcome::success) {
            net.annotate("engine", g.owner, "input commitment rejected, input fixed to zero");
            silenced.insert(g.owner);
            caught.insert(g.owner);
            fixed.emplace(g.out, base.zero());
            wires.emplace(g.out, vss_public(msp, ff, k, base.zero()));
          } else {
            dealt_inputs.emplace(g.out, *r.commitment);
            wires.emplace(g.out, std::move(*r.commitment));
          }
          break;
        }
        case GateKind::const_add: {
          VssCommitment pub = vss_public(msp, ff, k, g.lambda);
          std::vector<VssTerm> terms{{base.one(), &wires.at(g.in1)}, {base.one(), &pub}};
          wires.emplace(g.out, vss_linear(net, adv, terms));
          break;
        }
        case GateKind::scalar_mul: {
          std::vector<VssTerm> terms{{g.lambda, &wires.at(g.in1)}};
          wires.emplace(g.out, vss_linear(net, adv, terms));
          break;
        }
        case GateKind::add: {
          std::vector<VssTerm> terms{{base.one(), &wires.at(g.in1)},
                                     {base.one(), &wires.at(g.in2)}};
          wires.emplace(g.out, vss_linear(net, adv, terms));
          break;
        }
        case GateKind::mul: {
          MultResult r = vss_mult(net, adv, wires.at(g.in1), wires.at(g.in2), silenced);
          caught.insert(r.cheaters.begin(), r.cheaters.end());
          if (r.product) {
            wires.emplace(g.out, std::move(*r.product));
            break;
          }
          // A withheld conversion leaves no product. The cheaters' committed
          // inputs are opened by the others and become public constants, and
          // the evaluation starts over without the cheaters.
          for (int p : r.cheaters) silenced.insert(p);
          for (const auto& [wire, commit] : dealt_inputs) {
            if (!r.cheaters.count(commit.dealer.value())) continue;
            Fel v = vss_open(net, adv, commit);
            fixed.emplace(wire, v);
            net.annotate("engine", *commit.dealer, "input " + wire + " opened publicly");
          }
          restart = true;
          break;
        }
        case GateKind::output:
          break;
      }
      if (restart) break;
    }

    if (restart) {
      ++restarts;
      net.stats().restarts++;
      net.annotate("engine", -1, "restarting from the input stage");
      // Every restart silences at least one fresh cheater, so the honest
      // complement bounds the number of rounds through this loop.
      if (restarts > msp.players()) throw ProtocolAbort("restart budget exhausted");
      continue;
    }

    RunOutcome out;
    for (const Gate& g : c.gates)
      if (g.kind == GateKind::output && !out.outputs.count(g.out))
        out.outputs[g.out] = vss_open(net, adv, wires.at(g.out));
    out.disqualified = caught;
    out.restarts = restarts;
    out.stats = net.stats();
    return out;
  }
}

}  // namespace q2mpc
