#pragma once

#include <map>
#include <string>
#include <utility>

#include "q2mpc/mult.hpp"

namespace q2mpc {

enum class GateKind { input, const_add, scalar_mul, add, mul, output };

struct Gate {
  GateKind kind = GateKind::input;
  std::string out;         // wire produced; for output gates, the wire revealed
  std::string in1, in2;
  Fel lambda;              // coefficient of const_add / scalar_mul
  int owner = -1;          // input gates only
};

// Arithmetic circuit over a prime field. Gates are stored in evaluation
// order; every wire is assigned exactly once before it is used.
struct Circuit {
  uint64_t q = 0;
  std::vector<Gate> gates;

  void validate() const;
  std::vector<std::pair<std::string, int>> input_wires() const;
  std::vector<std::string> output_wires() const;
};

using WireValues = std::map<std::string, Fel>;

// Single-party reference evaluation, the correctness oracle for run_mpc.
WireValues evaluate_plain(const Circuit& c, const WireValues& inputs);

// Authentication field used for the share checks: the smallest prime
// exceeding both q^d (so any tuple of row values packs injectively) and 2^k
// (so a single guessed key forges with probability below 2^-k).
Field auth_field_for(const Msp& msp, int k);

struct RunOutcome {
  WireValues outputs;
  PlayerSet disqualified;  // every player caught cheating at any point
  int restarts = 0;
  Stats stats;
};

// Full protocol run. Each input owner commits to its value, gates are then
// evaluated over the commitments (linear gates by local share algebra,
// products by the proven row-product reduction), and output wires are opened
// publicly. When a product names cheaters whose cooperation was withheld,
// their committed inputs are opened, fixed as public constants, and the
// evaluation restarts from the input stage without them.
RunOutcome run_mpc(Network& net, Adversary& adv, const Circuit& c, const WireValues& inputs,
                   const Msp& msp, int k);

}  // namespace q2mpc
