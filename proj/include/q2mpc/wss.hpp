#pragma once

#include "q2mpc/ic.hpp"

namespace q2mpc {

// Commitment by one dealer: an MSP sharing of a where every ordered pair
// (holder i, verifier j) carries authentication data for the F-encoding of
// i's share vector. The dealer can later open a, and only a, to everyone.

struct WssPairAuth {
  GicOutcome outcome = GicOutcome::established;
  GicIntState inter;  // held by the row owner i
  GicRecvState recv;  // held by the verifier j
  Fel published;      // the certified encoding, public when outcome == published
};

struct WssCommitment {
  WssCommitment(Msp m, Field f, int sec, int d)
      : msp(std::move(m)), ff(f), k(sec), dealer(d), k_scale(msp.field().one()),
        f_scale(ff.one()) {}

  Msp msp;
  Field ff;  // authentication field
  int k = 1;
  int dealer = 0;
  std::vector<Fel> a_star;             // dealer-side extended secret, current
  std::vector<std::vector<Fel>> rows;  // rows[p]: current values of msp.rows_of(p)
  std::vector<std::vector<WssPairAuth>> auth;  // auth[i][j], diagonal unused

  // Players no longer participating: their rows were dealt by broadcast, are
  // known to everyone, and carry no authentication instances.
  PlayerSet public_players;

  // Set instead of throwing in the batched entry points, so one refusal
  // cannot take down unrelated commitments dealt in the same rounds.
  bool disqualified = false;

  // The authentication data stays pinned to the originally certified rows;
  // local scalings accumulate here and claims are renormalized at open.
  Fel k_scale;
  Fel f_scale;

  Fel value() const { return a_star.at(0); }  // dealer-side view of a
};

struct WssJob {
  Msp msp;
  Field ff;
  int k = 1;
  int dealer = 0;
  Fel value;
  PlayerSet public_players;
};

// SHARE by the dealer, then one authentication instance per ordered pair.
// The batch shares the deal round and the six authentication rounds. Throws
// DealerDisqualified when a dealer refuses to publish a disputed value.
std::vector<WssCommitment> wss_commit_batch(Network& net, Adversary& adv,
                                            const std::vector<WssJob>& jobs);
WssCommitment wss_commit(Network& net, Adversary& adv, const Msp& msp, const Field& ff, int k,
                         int dealer, const Fel& a);

struct WssOpenResult {
  std::optional<Fel> value;  // nullopt: dealer disqualified
  PlayerSet accusers;
};

// Public open: the dealer broadcasts a_*, every holder authenticates its
// vector toward every verifier, and accepted-but-inconsistent vectors draw
// accusations; the dealer is disqualified iff the accusers are qualified.
// With an audience the exchange goes to that player only and it alone
// decides, rejecting on any accepted inconsistency.
std::vector<WssOpenResult> wss_open_batch(Network& net, Adversary& adv,
                                          const std::vector<const WssCommitment*>& cs,
                                          std::optional<int> audience = std::nullopt);
WssOpenResult wss_open(Network& net, Adversary& adv, const WssCommitment& c,
                       std::optional<int> audience = std::nullopt);

// Local scaling: rows scale in K, authentication data in F, and the claim
// made at open time is renormalized accordingly. Zero collapses to the
// canonical public commitment to 0.
WssCommitment wss_scale(const WssCommitment& c, const Fel& lambda);

// Publicly computable commitment to a constant (rho = 0); every pair is in
// the published state, so opening can never be blocked.
WssCommitment wss_const(const Msp& msp, const Field& ff, int k, int dealer, const Fel& value,
                        const PlayerSet& public_players = {});

// Share vectors add locally; fresh authentication instances are generated
// for the summed vectors (six rounds, batched).
std::vector<WssCommitment> wss_add_batch(
    Network& net, Adversary& adv,
    const std::vector<std::pair<const WssCommitment*, const WssCommitment*>>& sums);
WssCommitment wss_add(Network& net, Adversary& adv, const WssCommitment& c1,
                      const WssCommitment& c2);

// Cut and choose over k rounds: commit to a random b, form [a+b], and open
// whichever of the two a public coin picks. Any failed open refutes the
// original commitment; a bad one survives a fair round with probability 1/2.
bool wss_prove_correct(Network& net, Adversary& adv, const WssCommitment& c, int k);

}  // namespace q2mpc
