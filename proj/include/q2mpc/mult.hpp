#pragma once

#include "q2mpc/vss.hpp"

namespace q2mpc {

struct CpClaim {
  const VssCommitment* a = nullptr;
  const VssCommitment* b = nullptr;
  const VssCommitment* c = nullptr;
  Fel av, bv, cv;  // the prover's own values behind the three commitments
};

// Cut-and-choose proof that the value behind c is the product of the values
// behind a and b. Each round deals a blinded pair, then a rotating public
// coin decides which linear combination is opened and checked against zero.
// A false claim survives a round only when the coin favors the prover.
bool vss_cp(Network& net, Adversary& adv, int dealer, const CpClaim& claim, int k,
            const PlayerSet& pre_removed = {});

struct MultResult {
  // Absent product means a conversion was refused; rerun the computation
  // with the cheaters silenced. A present product can still carry cheaters
  // whose row products were forced public.
  std::optional<VssCommitment> product;
  PlayerSet cheaters;
};

// Shared product [uv]: the rows of both factors are upgraded to verified
// sharings, every owner commits to its local row product and proves it, and
// the recombination vector folds the row products into one sharing. Rows
// with a rejected proof are opened and recombined publicly.
MultResult vss_mult(Network& net, Adversary& adv, const VssCommitment& u,
                    const VssCommitment& v, const PlayerSet& pre_removed = {});

}  // namespace q2mpc
