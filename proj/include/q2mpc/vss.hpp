#pragma once

#include "q2mpc/wss.hpp"

namespace q2mpc {

// One row of a verified sharing. A live row is weakly committed by its owner;
// a row whose owner was removed (or excluded up front) is public instead.
// A row with neither only appears when a dealer sabotaged the authentication
// refresh of a linear combination; reconstruction skips its owner.
struct VssRow {
  std::optional<WssCommitment> wss;
  std::optional<Fel> public_value;
};

struct VssCommitment {
  VssCommitment(Msp m, Field f, int sec)
      : msp(std::move(m)), ff(f), k(sec) {}

  Msp msp;
  Field ff;  // authentication field for the row commitments
  int k = 1;

  std::optional<int> dealer;  // absent for linear combinations
  std::vector<VssRow> rows;   // indexed by msp row
  PlayerSet removed;          // owners whose rows were forced public

  // Dealer-side extended secret, kept current through scalings; absent for
  // linear combinations where no single party knows the coefficient vector.
  std::optional<std::vector<Fel>> a_star;

  Fel value() const { return a_star.value().at(0); }
};

enum class VssOutcome { success, dealer_corrupt };

struct VssDealResult {
  VssOutcome outcome = VssOutcome::dealer_corrupt;
  std::optional<VssCommitment> commitment;  // present on success
};

// Full verified deal of a by the dealer: share, row commitments, kn blinded
// cut-and-choose challenge rounds, removal bookkeeping. Players listed in
// pre_removed take no part; all their row values are broadcast instead.
VssDealResult vss_deal(Network& net, Adversary& adv, const Msp& msp, const Field& ff, int k,
                       int dealer, const Fel& a, const PlayerSet& pre_removed = {});

// Public reconstruction. Every live row is weakly opened; failed or mutually
// inconsistent openers are dropped and the secret is recombined from the
// lexicographically first qualified set with complete rows. The dealer plays
// no special part. Throws ReconstructionImpossible if no such set remains.
Fel vss_open(Network& net, Adversary& adv, const VssCommitment& c);

struct VssTerm {
  Fel lambda;
  const VssCommitment* c = nullptr;
};

// Shared computation of sum lambda_t a_t. Public rows combine locally; live
// rows combine through row commitment scaling and addition, which refreshes
// authentication. An owner refusing that refresh loses its row.
VssCommitment vss_linear(Network& net, Adversary& adv, const std::vector<VssTerm>& terms);

// Everyone can hold a sharing of a public constant without any interaction.
VssCommitment vss_public(const Msp& msp, const Field& ff, int k, const Fel& value);

enum class ConvertOutcome { converted, dealer_refused, dealer_corrupt };

struct ConvertResult {
  ConvertOutcome outcome = ConvertOutcome::dealer_refused;
  std::optional<VssCommitment> commitment;
};

// Upgrade a weak commitment to a verified one by rerunning the challenge
// phase on the rows currently held. Needs the dealer's cooperation; the old
// authentication data is discarded.
ConvertResult wss_to_vss(Network& net, Adversary& adv, const WssCommitment& c,
                         const PlayerSet& pre_removed = {});

}  // namespace q2mpc
