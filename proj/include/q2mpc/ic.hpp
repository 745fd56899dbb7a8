#pragma once

#include <utility>

#include "q2mpc/simnet.hpp"

namespace q2mpc {

// Transfer of a value s from dealer D through intermediary INT so that
// receiver R will later accept it. D hands INT the secret with keys and R a
// set of check pairs (b, c), c = s + b*y; a cut-and-choose opening convinces
// INT that R's surviving pairs match, so an honest INT is never rejected.

enum class GicOutcome {
  established,          // surviving keys/pairs authenticate s
  published,            // INT demanded publication; s is public
  dealer_disqualified,  // D refused to publish
};

struct GicSpec {
  Field f;  // authentication field
  int k = 1;
  int dealer = 0;
  int inter = 0;
  int recipient = 0;
};

struct GicIntState {
  Fel secret;             // s as INT holds it
  std::vector<Fel> keys;  // k surviving keys, or the single replacement key
  bool fresh = false;     // true on the dispute path (one replacement triple)
};

struct GicRecvState {
  std::vector<CheckPair> pairs;  // aligned index-wise with the surviving keys
  bool fresh = false;
};

struct GicResult {
  GicOutcome outcome = GicOutcome::established;
  GicIntState inter;  // meaningful when established
  GicRecvState recv;
  Fel published;  // meaningful when outcome == published
};

struct GicJob {
  GicSpec spec;
  Fel s;
};

GicResult gic_generate(Network& net, Adversary& adv, const GicSpec& spec, const Fel& s);

// Runs many instances in lockstep so the batch costs the same six rounds as a
// single instance. Results are index-aligned with the jobs.
std::vector<GicResult> gic_generate_batch(Network& net, Adversary& adv,
                                          const std::vector<GicJob>& jobs);

// R's acceptance test: some submitted key must explain the claimed value
// against R's surviving pair at the same position.
bool gic_authenticate(const GicIntState& submitted, const GicRecvState& held, const Fel& claimed);

// States for lambda*s from states for s; keys unchanged, pairs scaled.
std::pair<GicIntState, GicRecvState> gic_scale(const GicIntState& i, const GicRecvState& r,
                                               const Fel& lambda);

}  // namespace q2mpc
