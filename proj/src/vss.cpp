#include "q2mpc/vss.hpp"

#include <algorithm>

namespace q2mpc {

namespace {

std::vector<RowShare> rows_for(const Msp& msp, int p, const std::vector<Fel>& alpha) {
  std::vector<RowShare> rs;
  for (int l : msp.rows_of(p)) rs.push_back({l, alpha[(size_t)l]});
  return rs;
}

// Challenge phase shared by a fresh deal and an upgraded weak commitment.
// On entry the rows in `alpha` have been handed out (privately to in-play
// owners, publicly for `pre`) and the caller holds the top-level instance id.
//
// Layout is rigid so honest runs are structurally identical: each batch of
// commitments or additions is followed by one response round for removals it
// caused, and each of the kn challenge rounds spends exactly eight rounds.
VssDealResult challenge_core(Network& net, Adversary& adv, const Msp& msp, const Field& ff,
                             int k, int dealer, const std::vector<Fel>& a_star,
                             const std::vector<Fel>& alpha, const PlayerSet& pre, int inst) {
  if (k < 1) throw DimensionMismatch("security parameter must be positive");
  ++net.stats().bounded_events;
  const int n = msp.players();
  const int d = msp.rows();
  const int kn = k * n;

  PlayerSet removed;
  auto out_of_play = [&](int p) { return pre.count(p) > 0 || removed.count(p) > 0; };

  std::vector<std::optional<Fel>> pub_alpha((size_t)d);
  for (int l = 0; l < d; ++l)
    if (pre.count(msp.owners()[(size_t)l])) pub_alpha[(size_t)l] = alpha[(size_t)l];

  std::vector<std::optional<WssCommitment>> row_wss((size_t)d);
  std::vector<std::vector<Fel>> c_star;   // blinding secrets, extended
  std::vector<std::vector<Fel>> gamma;    // blinding row values as dealt
  std::vector<std::vector<std::optional<Fel>>> pub_gamma;
  std::vector<std::vector<std::optional<WssCommitment>>> gam_wss, sum_wss;
  std::vector<std::vector<Fel>> bstars;   // challenge vectors broadcast so far
  std::vector<int> bits;
  bool caught = false;

  // Removes a player: the dealer broadcasts everything it gave the player,
  // which from then on stands in for the player's rows and must line up with
  // every challenge vector, past and future.
  auto respond_remove = [&](int subject) {
    removed.insert(subject);
    net.annotate("vss", subject, "removed");
    bool lie = adv.vss_lie_on_accusation(dealer);
    BroadcastShares bs;
    bs.subject = subject;
    for (int l : msp.rows_of(subject)) {
      row_wss[(size_t)l].reset();
      for (auto& per : gam_wss) per[(size_t)l].reset();
      for (auto& per : sum_wss) per[(size_t)l].reset();
      Fel v = lie ? msp.row_value(a_star, l) : alpha[(size_t)l];
      bs.alpha.push_back({l, v});
      pub_alpha[(size_t)l] = v;
    }
    bs.gammas.resize(gamma.size());
    for (size_t j = 0; j < gamma.size(); ++j)
      for (int l : msp.rows_of(subject)) {
        Fel v = lie ? msp.row_value(c_star[j], l) : gamma[j][(size_t)l];
        bs.gammas[j].push_back({l, v});
        pub_gamma[j][(size_t)l] = v;
      }
    net.set_instance(inst);
    net.broadcast(dealer, bs);
    for (size_t j = 0; j < bstars.size(); ++j)
      for (int l : msp.rows_of(subject)) {
        Fel beta = bits[j] == 1 ? *pub_gamma[j][(size_t)l]
                                : *pub_alpha[(size_t)l] + *pub_gamma[j][(size_t)l];
        if (!(beta == msp.row_value(bstars[j], l))) caught = true;
      }
  };

  auto corrupt = [&]() {
    net.annotate("vss", dealer, "dealer corrupt");
    VssDealResult r;
    r.outcome = VssOutcome::dealer_corrupt;
    return r;
  };

  // every in-play owner weakly commits to its rows
  {
    std::vector<WssJob> jobs;
    std::vector<int> jrow;
    for (int l = 0; l < d; ++l) {
      int o = msp.owners()[(size_t)l];
      if (out_of_play(o)) continue;
      jobs.push_back({msp, ff, k, o, alpha[(size_t)l], pre});
      jrow.push_back(l);
    }
    auto cs = wss_commit_batch(net, adv, jobs);
    PlayerSet bad;
    for (size_t x = 0; x < cs.size(); ++x) {
      if (cs[x].disqualified)
        bad.insert(msp.owners()[(size_t)jrow[x]]);
      else
        row_wss[(size_t)jrow[x]] = std::move(cs[x]);
    }
    for (int p : bad) respond_remove(p);
    net.next_round();
    if (caught) return corrupt();
  }

  // all kn blinding sharings dealt up front
  pub_gamma.assign((size_t)kn, std::vector<std::optional<Fel>>((size_t)d));
  net.set_instance(inst);
  for (int j = 0; j < kn; ++j) {
    Fel cj = net.rng(dealer).uniform(msp.field(), Draw::blind_secret);
    Msp::Sharing sh = msp.share(cj, net.rng(dealer), Draw::blind_rho);
    adv.tamper_dealt(dealer, Adversary::DealKind::vss_blind, j + 1, msp, sh.alpha);
    c_star.push_back(std::move(sh.a_star));
    gamma.push_back(sh.alpha);
    for (int p = 0; p < n; ++p) {
      auto rs = rows_for(msp, p, gamma.back());
      if (rs.empty()) continue;
      if (out_of_play(p)) {
        for (const RowShare& r : rs) pub_gamma[(size_t)j][(size_t)r.row] = r.value;
        net.broadcast(dealer, ShareDeal{std::move(rs)});
      } else if (p != dealer) {
        net.send(dealer, p, ShareDeal{std::move(rs)});
      }
    }
  }
  net.next_round();

  gam_wss.assign((size_t)kn, std::vector<std::optional<WssCommitment>>((size_t)d));
  sum_wss.assign((size_t)kn, std::vector<std::optional<WssCommitment>>((size_t)d));
  {
    std::vector<WssJob> jobs;
    std::vector<std::pair<int, int>> at;
    for (int j = 0; j < kn; ++j)
      for (int l = 0; l < d; ++l) {
        int o = msp.owners()[(size_t)l];
        if (out_of_play(o)) continue;
        jobs.push_back({msp, ff, k, o, gamma[(size_t)j][(size_t)l], pre});
        at.push_back({j, l});
      }
    auto cs = wss_commit_batch(net, adv, jobs);
    PlayerSet bad;
    for (size_t x = 0; x < cs.size(); ++x) {
      if (cs[x].disqualified)
        bad.insert(msp.owners()[(size_t)at[x].second]);
      else
        gam_wss[(size_t)at[x].first][(size_t)at[x].second] = std::move(cs[x]);
    }
    for (int p : bad) respond_remove(p);
    net.next_round();
    if (caught) return corrupt();
  }
  {
    std::vector<std::pair<const WssCommitment*, const WssCommitment*>> pairs;
    std::vector<std::pair<int, int>> at;
    for (int j = 0; j < kn; ++j)
      for (int l = 0; l < d; ++l) {
        if (!row_wss[(size_t)l] || !gam_wss[(size_t)j][(size_t)l]) continue;
        pairs.push_back({&*row_wss[(size_t)l], &*gam_wss[(size_t)j][(size_t)l]});
        at.push_back({j, l});
      }
    auto cs = wss_add_batch(net, adv, pairs);
    PlayerSet bad;
    for (size_t x = 0; x < cs.size(); ++x) {
      if (cs[x].disqualified)
        bad.insert(msp.owners()[(size_t)at[x].second]);
      else
        sum_wss[(size_t)at[x].first][(size_t)at[x].second] = std::move(cs[x]);
    }
    for (int p : bad) respond_remove(p);
    net.next_round();
    if (caught) return corrupt();
  }

  // kn cut-and-choose rounds; the flip rotates over the players that entered
  std::vector<int> flip_set;
  for (int p = 0; p < n; ++p)
    if (!pre.count(p)) flip_set.push_back(p);
  for (int j = 1; j <= kn; ++j) {
    size_t jj = (size_t)(j - 1);
    int flipper = flip_set[(size_t)(j % (int)flip_set.size())];
    int bit = net.rng(flipper).flip(Draw::coin);
    if (auto forced = adv.bias_coin(flipper)) bit = *forced;
    net.set_instance(inst);
    net.broadcast(flipper, CoinFlip{bit});
    net.next_round();
    bits.push_back(bit);

    std::vector<Fel> b = c_star[jj];
    if (bit == 0)
      for (size_t x = 0; x < b.size(); ++x) b[x] = b[x] + a_star[x];
    net.set_instance(inst);
    net.broadcast(dealer, OpenVector{b});
    net.next_round();
    bstars.push_back(b);

    // rows already public are checked by everyone on the spot
    for (int l = 0; l < d; ++l) {
      if (!out_of_play(msp.owners()[(size_t)l])) continue;
      Fel beta = bit == 1 ? *pub_gamma[jj][(size_t)l]
                          : *pub_alpha[(size_t)l] + *pub_gamma[jj][(size_t)l];
      if (!(beta == msp.row_value(b, l))) caught = true;
    }
    if (caught) return corrupt();

    std::vector<int> accusers;
    for (int p = 0; p < n; ++p) {
      if (out_of_play(p) || p == dealer) continue;
      bool mismatch = false;
      for (int l : msp.rows_of(p)) {
        Fel beta = bit == 1 ? gamma[jj][(size_t)l] : alpha[(size_t)l] + gamma[jj][(size_t)l];
        if (!(beta == msp.row_value(b, l))) mismatch = true;
      }
      if (mismatch) accusers.push_back(p);
    }
    net.set_instance(inst);
    for (int p : accusers) net.broadcast(p, Accusation{dealer});
    net.next_round();

    for (int p : accusers) respond_remove(p);
    net.next_round();
    if (caught) return corrupt();

    // open the blinded row commitments still in play
    std::vector<const WssCommitment*> ptrs;
    std::vector<int> prow;
    for (int l = 0; l < d; ++l) {
      const auto& oc = bit == 1 ? gam_wss[jj][(size_t)l] : sum_wss[jj][(size_t)l];
      if (oc) {
        ptrs.push_back(&*oc);
        prow.push_back(l);
      }
    }
    auto res = wss_open_batch(net, adv, ptrs, std::nullopt);
    PlayerSet bad;
    for (size_t x = 0; x < res.size(); ++x) {
      int l = prow[x];
      bool ok = res[x].value.has_value() && *res[x].value == msp.row_value(b, l);
      if (!ok) bad.insert(msp.owners()[(size_t)l]);
    }
    for (int p : bad) respond_remove(p);
    net.next_round();
    if (caught) return corrupt();
  }

  PlayerSet all_removed = removed;
  for (int p : pre) all_removed.insert(p);
  if (msp.qualified(all_removed)) return corrupt();

  VssDealResult out;
  out.outcome = VssOutcome::success;
  VssCommitment c(msp, ff, k);
  c.dealer = dealer;
  c.a_star = a_star;
  c.removed = all_removed;
  c.rows.resize((size_t)d);
  for (int l = 0; l < d; ++l) {
    if (all_removed.count(msp.owners()[(size_t)l]))
      c.rows[(size_t)l].public_value = *pub_alpha[(size_t)l];
    else
      c.rows[(size_t)l].wss = std::move(*row_wss[(size_t)l]);
  }
  out.commitment = std::move(c);
  return out;
}

}  // namespace

VssDealResult vss_deal(Network& net, Adversary& adv, const Msp& msp, const Field& ff, int k,
                       int dealer, const Fel& a, const PlayerSet& pre_removed) {
  if (pre_removed.count(dealer)) throw PlayerOutOfRange("dealer cannot be pre-removed");
  ++net.stats().vss_deals;
  int inst = net.new_instance();
  net.set_instance(inst);
  Msp::Sharing sh = msp.share(a, net.rng(dealer), Draw::top_rho);
  adv.tamper_dealt(dealer, Adversary::DealKind::vss_top, 0, msp, sh.alpha);
  for (int p = 0; p < msp.players(); ++p) {
    auto rs = rows_for(msp, p, sh.alpha);
    if (rs.empty()) continue;
    if (pre_removed.count(p))
      net.broadcast(dealer, ShareDeal{std::move(rs)});
    else if (p != dealer)
      net.send(dealer, p, ShareDeal{std::move(rs)});
  }
  net.next_round();
  return challenge_core(net, adv, msp, ff, k, dealer, sh.a_star, sh.alpha, pre_removed, inst);
}

ConvertResult wss_to_vss(Network& net, Adversary& adv, const WssCommitment& c,
                         const PlayerSet& pre_removed) {
  ++net.stats().conversions;
  if (adv.refuse_conversion(c.dealer)) {
    net.annotate("vss", c.dealer, "conversion refused");
    return {ConvertOutcome::dealer_refused, std::nullopt};
  }
  PlayerSet pre = pre_removed;
  for (int p : c.public_players) pre.insert(p);
  if (pre.count(c.dealer)) throw PlayerOutOfRange("dealer cannot be pre-removed");

  std::vector<Fel> alpha((size_t)c.msp.rows(), c.msp.field().zero());
  for (int p = 0; p < c.msp.players(); ++p) {
    auto ids = c.msp.rows_of(p);
    for (size_t x = 0; x < ids.size(); ++x) alpha[(size_t)ids[x]] = c.rows[(size_t)p][x];
  }

  // rows of players excluded since the original deal become public up front
  int inst = net.new_instance();
  net.set_instance(inst);
  for (int p : pre) {
    if (c.public_players.count(p)) continue;
    auto rs = rows_for(c.msp, p, alpha);
    if (!rs.empty()) net.broadcast(c.dealer, ShareDeal{std::move(rs)});
  }
  net.next_round();

  auto r = challenge_core(net, adv, c.msp, c.ff, c.k, c.dealer, c.a_star, alpha, pre, inst);
  if (r.outcome == VssOutcome::success)
    return {ConvertOutcome::converted, std::move(r.commitment)};
  return {ConvertOutcome::dealer_corrupt, std::nullopt};
}

Fel vss_open(Network& net, Adversary& adv, const VssCommitment& c) {
  ++net.stats().vss_opens;
  const Msp& msp = c.msp;
  const int d = msp.rows();
  std::vector<std::optional<Fel>> avail((size_t)d);
  std::vector<const WssCommitment*> ptrs;
  std::vector<int> prow;
  for (int l = 0; l < d; ++l) {
    if (c.rows[(size_t)l].public_value)
      avail[(size_t)l] = c.rows[(size_t)l].public_value;
    else if (c.rows[(size_t)l].wss) {
      ptrs.push_back(&*c.rows[(size_t)l].wss);
      prow.push_back(l);
    }
  }
  if (!ptrs.empty()) {
    auto res = wss_open_batch(net, adv, ptrs, std::nullopt);
    for (size_t x = 0; x < res.size(); ++x)
      if (res[x].value) avail[(size_t)prow[x]] = res[x].value;
  }

  // Drop players until the surviving rows fit one extended secret. A failed
  // single drop means collusion; then drop the smallest player outright.
  PlayerSet excluded;
  auto consistent = [&](const PlayerSet& excl) {
    Matrix m;
    std::vector<Fel> rhs;
    for (int l = 0; l < d; ++l) {
      if (!avail[(size_t)l] || excl.count(msp.owners()[(size_t)l])) continue;
      m.push_back(msp.matrix()[(size_t)l]);
      rhs.push_back(*avail[(size_t)l]);
    }
    if (m.empty()) return true;
    return solve_linear(m, rhs).has_value();
  };
  auto has_rows = [&](int p) {
    for (int l : msp.rows_of(p))
      if (avail[(size_t)l]) return true;
    return false;
  };
  while (!consistent(excluded)) {
    int pick = -1;
    for (int p = 0; p < msp.players() && pick < 0; ++p) {
      if (excluded.count(p) || !has_rows(p)) continue;
      PlayerSet t = excluded;
      t.insert(p);
      if (consistent(t)) pick = p;
    }
    if (pick < 0)
      for (int p = 0; p < msp.players() && pick < 0; ++p)
        if (!excluded.count(p) && has_rows(p)) pick = p;
    if (pick < 0) break;
    excluded.insert(pick);
  }

  PlayerSet usable;
  for (int p = 0; p < msp.players(); ++p) {
    if (excluded.count(p)) continue;
    auto ids = msp.rows_of(p);
    if (ids.empty()) continue;
    bool all = true;
    for (int l : ids)
      if (!avail[(size_t)l]) all = false;
    if (all) usable.insert(p);
  }
  auto b = smallest_qualified(msp, usable);
  if (!b) throw ReconstructionImpossible("no qualified set of consistent rows");
  std::vector<int> ids = msp.rows_of(*b);
  std::vector<Fel> vals;
  for (int l : ids) vals.push_back(*avail[(size_t)l]);
  return msp.reconstruct(ids, vals, *b);
}

VssCommitment vss_linear(Network& net, Adversary& adv, const std::vector<VssTerm>& terms) {
  if (terms.empty()) throw DimensionMismatch("linear combination needs at least one term");
  const VssCommitment& c0 = *terms[0].c;
  for (const VssTerm& t : terms) {
    const VssCommitment& c = *t.c;
    if (!(c.msp.field() == c0.msp.field()) || c.msp.matrix() != c0.msp.matrix() ||
        c.msp.owners() != c0.msp.owners() || c.msp.players() != c0.msp.players() ||
        !(c.ff == c0.ff) || c.k != c0.k)
      throw MspMismatch();
  }
  const Msp& msp = c0.msp;
  const int d = msp.rows();

  VssCommitment out(msp, c0.ff, c0.k);
  out.rows.resize((size_t)d);
  for (const VssTerm& t : terms)
    for (int p : t.c->removed) out.removed.insert(p);

  // public-only rows fold locally; rows with any live part go through the
  // commitment arithmetic, with public parts injected as constants
  std::vector<std::vector<WssCommitment>> pieces((size_t)d);
  std::vector<std::optional<WssCommitment>> cur((size_t)d);
  std::vector<bool> live((size_t)d, false);
  for (int l = 0; l < d; ++l) {
    int owner = msp.owners()[(size_t)l];
    bool dead = false, any_live = false;
    for (const VssTerm& t : terms) {
      const VssRow& r = t.c->rows[(size_t)l];
      if (!r.wss && !r.public_value) dead = true;
      if (r.wss) any_live = true;
    }
    if (dead) {
      out.removed.insert(owner);
      continue;
    }
    if (!any_live) {
      Fel acc = msp.field().zero();
      for (const VssTerm& t : terms)
        acc = acc + t.lambda * *t.c->rows[(size_t)l].public_value;
      out.rows[(size_t)l].public_value = acc;
      continue;
    }
    for (const VssTerm& t : terms) {
      const VssRow& r = t.c->rows[(size_t)l];
      if (r.wss)
        pieces[(size_t)l].push_back(wss_scale(*r.wss, t.lambda));
      else
        pieces[(size_t)l].push_back(
            wss_const(msp, c0.ff, c0.k, owner, t.lambda * *r.public_value));
    }
    cur[(size_t)l] = std::move(pieces[(size_t)l].front());
    live[(size_t)l] = true;
  }

  for (size_t depth = 1; depth < terms.size(); ++depth) {
    std::vector<std::pair<const WssCommitment*, const WssCommitment*>> pairs;
    std::vector<int> at;
    for (int l = 0; l < d; ++l) {
      if (!live[(size_t)l]) continue;
      pairs.push_back({&*cur[(size_t)l], &pieces[(size_t)l][depth]});
      at.push_back(l);
    }
    if (pairs.empty()) break;
    auto cs = wss_add_batch(net, adv, pairs);
    for (size_t x = 0; x < cs.size(); ++x) {
      int l = at[x];
      if (cs[x].disqualified) {
        live[(size_t)l] = false;
        cur[(size_t)l].reset();
        out.removed.insert(msp.owners()[(size_t)l]);
      } else {
        cur[(size_t)l] = std::move(cs[x]);
      }
    }
  }
  for (int l = 0; l < d; ++l)
    if (live[(size_t)l]) out.rows[(size_t)l].wss = std::move(cur[(size_t)l]);
  return out;
}

VssCommitment vss_public(const Msp& msp, const Field& ff, int k, const Fel& value) {
  VssCommitment c(msp, ff, k);
  std::vector<Fel> a_star((size_t)msp.cols(), msp.field().zero());
  a_star[0] = value;
  c.rows.resize((size_t)msp.rows());
  for (int l = 0; l < msp.rows(); ++l)
    c.rows[(size_t)l].public_value = msp.row_value(a_star, l);
  c.a_star = std::move(a_star);
  return c;
}

}  // namespace q2mpc
