#pragma once

#include <string>
#include <vector>

#include "q2mpc/engine.hpp"

namespace testgen {

struct GeneratedCase {
  q2mpc::Circuit circuit;
  q2mpc::WireValues inputs;
};

// Random topologically ordered circuit within the given gate budgets. Owners
// and input values come from the same stream, so (seed, q, players) pins the
// whole case.
inline GeneratedCase random_circuit(uint64_t seed, uint64_t q, int players, int max_gates = 12,
                                    int max_muls = 4) {
  using namespace q2mpc;
  SplitMix rng(seed);
  Field f(q);
  GeneratedCase out;
  out.circuit.q = q;
  std::vector<std::string> wires;
  auto fresh = [&] { return "w" + std::to_string(wires.size()); };
  auto any = [&]() -> const std::string& { return wires[rng.raw() % wires.size()]; };

  int n_inputs = 1 + (int)(rng.raw() % 3);
  int budget = max_gates - n_inputs - 1;  // one slot reserved for the output
  int n_ops = 1 + (int)(rng.raw() % (uint64_t)budget);
  for (int i = 0; i < n_inputs; ++i) {
    Gate g;
    g.kind = GateKind::input;
    g.out = fresh();
    g.owner = (int)(rng.raw() % (uint64_t)players);
    out.inputs[g.out] = f.fe(rng.raw());
    wires.push_back(g.out);
    out.circuit.gates.push_back(std::move(g));
  }
  int muls = 0;
  for (int i = 0; i < n_ops; ++i) {
    Gate g;
    g.out = fresh();
    int kind = (int)(rng.raw() % 4);
    if (kind == 3 && muls >= max_muls) kind = (int)(rng.raw() % 3);
    switch (kind) {
      case 0:
        g.kind = GateKind::const_add;
        g.lambda = f.fe(rng.raw());
        g.in1 = any();
        break;
      case 1:
        g.kind = GateKind::scalar_mul;
        g.lambda = f.fe(rng.raw());
        g.in1 = any();
        break;
      case 2:
        g.kind = GateKind::add;
        g.in1 = any();
        g.in2 = any();
        break;
      default:
        g.kind = GateKind::mul;
        g.in1 = any();
        g.in2 = any();
        ++muls;
        break;
    }
    wires.push_back(g.out);
    out.circuit.gates.push_back(std::move(g));
  }
  Gate o;
  o.kind = GateKind::output;
  o.out = wires.back();
  out.circuit.gates.push_back(std::move(o));
  return out;
}

}  // namespace testgen
