#include "q2mpc/mult.hpp"

namespace q2mpc {

bool vss_cp(Network& net, Adversary& adv, int dealer, const CpClaim& claim, int k,
            const PlayerSet& pre_removed) {
  ++net.stats().cp_checks;
  ++net.stats().bounded_events;
  const Msp& msp = claim.a->msp;
  const Field& kf = msp.field();
  const Field& ff = claim.a->ff;
  const int kfam = claim.a->k;  // blinded pairs must combine with the claim
  const int n = msp.players();
  const int kn = k * n;
  const Fel minus_one = kf.zero() - kf.one();

  std::vector<int> flip_set;
  for (int p = 0; p < n; ++p)
    if (!pre_removed.count(p)) flip_set.push_back(p);

  for (int j = 1; j <= kn; ++j) {
    // blinded pair first, so the prover cannot adapt it to the coin
    Fel bp = net.rng(dealer).uniform(kf, Draw::scalar);
    Fel cp = claim.av * bp;
    if (auto forced = adv.cp_blind_product(dealer, claim.av, claim.bv, claim.cv, bp)) cp = *forced;
    VssDealResult rb = vss_deal(net, adv, msp, ff, kfam, dealer, bp, pre_removed);
    if (rb.outcome != VssOutcome::success) return false;
    VssDealResult rc = vss_deal(net, adv, msp, ff, kfam, dealer, cp, pre_removed);
    if (rc.outcome != VssOutcome::success) return false;

    int flipper = flip_set[(size_t)(j % (int)flip_set.size())];
    int bit = net.rng(flipper).flip(Draw::coin);
    if (auto forced = adv.bias_coin(flipper)) bit = *forced;
    net.set_instance(net.new_instance());
    net.broadcast(flipper, CoinFlip{bit});
    net.next_round();

    try {
      if (bit == 1) {
        Fel beta = vss_open(net, adv, *rb.commitment);
        net.annotate("cp", -1, "opened blind " + std::to_string(beta.v));
        VssCommitment z =
            vss_linear(net, adv, {{beta, claim.a}, {minus_one, &*rc.commitment}});
        Fel zero = vss_open(net, adv, z);
        net.annotate("cp", -1, "opened zero " + std::to_string(zero.v));
        if (zero.v != 0) return false;
      } else {
        VssCommitment s =
            vss_linear(net, adv, {{kf.one(), claim.b}, {kf.one(), &*rb.commitment}});
        Fel beta = vss_open(net, adv, s);
        net.annotate("cp", -1, "opened masked " + std::to_string(beta.v));
        VssCommitment z = vss_linear(
            net, adv, {{beta, claim.a}, {minus_one, &*rc.commitment}, {minus_one, claim.c}});
        Fel zero = vss_open(net, adv, z);
        net.annotate("cp", -1, "opened zero " + std::to_string(zero.v));
        if (zero.v != 0) return false;
      }
    } catch (const ReconstructionImpossible&) {
      return false;
    }
  }
  return true;
}

MultResult vss_mult(Network& net, Adversary& adv, const VssCommitment& u,
                    const VssCommitment& v, const PlayerSet& pre_removed) {
  ++net.stats().mults;
  const Msp& msp = u.msp;
  const Field& kf = msp.field();
  const int d = msp.rows();
  const auto& recomb = msp.recombination_vector();
  if (!recomb) throw StructureViolation("program has no multiplication property");

  MultResult res;

  // upgrade both factors' row commitments; public rows stay public
  std::vector<std::optional<VssCommitment>> mu((size_t)d), nu((size_t)d);
  std::vector<Fel> muv((size_t)d, kf.zero()), nuv((size_t)d, kf.zero());
  for (int l = 0; l < d; ++l)
    for (int side = 0; side < 2; ++side) {
      const VssCommitment& src = side == 0 ? u : v;
      auto& dst = side == 0 ? mu[(size_t)l] : nu[(size_t)l];
      Fel& val = side == 0 ? muv[(size_t)l] : nuv[(size_t)l];
      const VssRow& row = src.rows[(size_t)l];
      if (row.public_value) {
        dst = vss_public(msp, src.ff, src.k, *row.public_value);
        val = *row.public_value;
      } else if (row.wss) {
        ConvertResult cr = wss_to_vss(net, adv, *row.wss, pre_removed);
        if (cr.outcome == ConvertOutcome::converted) {
          val = row.wss->value();
          dst = std::move(*cr.commitment);
        } else {
          res.cheaters.insert(msp.owners()[(size_t)l]);
        }
      } else {
        // a dead row: its owner was thrown out of an earlier combination
        res.cheaters.insert(msp.owners()[(size_t)l]);
      }
    }
  if (!res.cheaters.empty()) return res;

  // every owner commits to its row product; proofs guard the committed ones
  std::vector<std::optional<VssCommitment>> om((size_t)d);
  for (int l = 0; l < d; ++l) {
    int owner = msp.owners()[(size_t)l];
    const bool mu_pub = u.rows[(size_t)l].public_value.has_value();
    const bool nu_pub = v.rows[(size_t)l].public_value.has_value();
    Fel truth = muv[(size_t)l] * nuv[(size_t)l];
    if (mu_pub && nu_pub) {
      om[(size_t)l] = vss_public(msp, u.ff, u.k, truth);
      continue;
    }
    if (mu_pub || nu_pub) {
      // one factor is public: the product is a local scaling
      const VssCommitment& live = mu_pub ? *nu[(size_t)l] : *mu[(size_t)l];
      Fel scalar = mu_pub ? muv[(size_t)l] : nuv[(size_t)l];
      om[(size_t)l] = vss_linear(net, adv, {{scalar, &live}});
      continue;
    }
    Fel dealt = adv.product_value(owner, l, truth);
    VssDealResult ro = vss_deal(net, adv, msp, u.ff, u.k, owner, dealt, pre_removed);
    bool ok = ro.outcome == VssOutcome::success;
    if (ok) {
      CpClaim claim{&*mu[(size_t)l], &*nu[(size_t)l], &*ro.commitment,
                    muv[(size_t)l], nuv[(size_t)l], dealt};
      ok = vss_cp(net, adv, owner, claim, u.k, pre_removed);
    }
    if (ok) {
      om[(size_t)l] = std::move(*ro.commitment);
    } else {
      // the owner is out: open its factors and recombine this row publicly
      net.annotate("mult", owner, "row product rejected");
      res.cheaters.insert(owner);
      Fel m = vss_open(net, adv, *mu[(size_t)l]);
      Fel w = vss_open(net, adv, *nu[(size_t)l]);
      om[(size_t)l] = vss_public(msp, u.ff, u.k, m * w);
    }
  }

  std::vector<VssTerm> terms;
  for (int l = 0; l < d; ++l) terms.push_back({(*recomb)[(size_t)l], &*om[(size_t)l]});
  res.product = vss_linear(net, adv, terms);
  return res;
}

}  // namespace q2mpc
