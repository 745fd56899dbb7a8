#include "q2mpc/wss.hpp"

#include <algorithm>

namespace q2mpc {

namespace {

std::vector<std::vector<Fel>> split_rows(const Msp& msp, const std::vector<Fel>& alpha) {
  std::vector<std::vector<Fel>> per((size_t)msp.players());
  for (int r = 0; r < msp.rows(); ++r) per[(size_t)msp.owners()[(size_t)r]].push_back(alpha[(size_t)r]);
  return per;
}

// The claimed value a verifier authenticates: undo the accumulated scaling,
// encode, and re-apply it in F so the claim lines up with the GIC data.
Fel claim_for(const WssCommitment& c, const std::vector<Fel>& values) {
  Fel kinv = inv(c.k_scale);
  std::vector<Fel> orig;
  orig.reserve(values.size());
  for (const Fel& v : values) orig.push_back(v * kinv);
  return c.f_scale * encode_shares(orig, c.ff);
}

bool same_msp(const Msp& a, const Msp& b) {
  return a.field() == b.field() && a.matrix() == b.matrix() && a.owners() == b.owners() &&
         a.players() == b.players();
}

// Fresh pairwise authentication of the current rows of every commitment,
// all in one six-round batch. Resets the scaling accumulators. A dealer that
// walks out mid-dispute only poisons its own commitment's flag.
void generate_auth(Network& net, Adversary& adv, const std::vector<WssCommitment*>& cs) {
  std::vector<GicJob> jobs;
  for (WssCommitment* c : cs) {
    int n = c->msp.players();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || c->public_players.count(i) || c->public_players.count(j)) continue;
        GicSpec sp;
        sp.f = c->ff;
        sp.k = c->k;
        sp.dealer = c->dealer;
        sp.inter = i;
        sp.recipient = j;
        jobs.push_back({sp, encode_shares(c->rows[(size_t)i], c->ff)});
      }
  }
  auto results = gic_generate_batch(net, adv, jobs);
  size_t cursor = 0;
  for (WssCommitment* c : cs) {
    int n = c->msp.players();
    c->auth.assign((size_t)n, std::vector<WssPairAuth>((size_t)n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || c->public_players.count(i) || c->public_players.count(j)) continue;
        GicResult& r = results[cursor++];
        WssPairAuth& pa = c->auth[(size_t)i][(size_t)j];
        pa.outcome = r.outcome;
        if (r.outcome == GicOutcome::established) {
          pa.inter = std::move(r.inter);
          pa.recv = std::move(r.recv);
        } else if (r.outcome == GicOutcome::published) {
          pa.published = r.published;
        } else {
          c->disqualified = true;
        }
      }
    c->k_scale = c->msp.field().one();
    c->f_scale = c->ff.one();
  }
}

}  // namespace

std::vector<WssCommitment> wss_commit_batch(Network& net, Adversary& adv,
                                            const std::vector<WssJob>& jobs) {
  std::vector<WssCommitment> out;
  out.reserve(jobs.size());
  for (const WssJob& job : jobs) {
    WssCommitment c(job.msp, job.ff, job.k, job.dealer);
    c.public_players = job.public_players;
    net.set_instance(net.new_instance());
    Msp::Sharing sh = job.msp.share(job.value, net.rng(job.dealer), Draw::sub_rho);
    adv.tamper_dealt(job.dealer, Adversary::DealKind::wss, 0, job.msp, sh.alpha);
    c.a_star = std::move(sh.a_star);
    c.rows = split_rows(job.msp, sh.alpha);
    for (int p = 0; p < job.msp.players(); ++p) {
      if (c.rows[(size_t)p].empty()) continue;
      std::vector<RowShare> rs;
      auto ids = job.msp.rows_of(p);
      for (size_t x = 0; x < ids.size(); ++x) rs.push_back({ids[x], c.rows[(size_t)p][x]});
      if (c.public_players.count(p))
        net.broadcast(job.dealer, ShareDeal{std::move(rs)});
      else if (p != job.dealer)
        net.send(job.dealer, p, ShareDeal{std::move(rs)});
    }
    ++net.stats().wss_commits;
    out.push_back(std::move(c));
  }
  net.next_round();

  std::vector<WssCommitment*> ptrs;
  for (WssCommitment& c : out) ptrs.push_back(&c);
  generate_auth(net, adv, ptrs);
  return out;
}

WssCommitment wss_commit(Network& net, Adversary& adv, const Msp& msp, const Field& ff, int k,
                         int dealer, const Fel& a) {
  WssCommitment c = std::move(wss_commit_batch(net, adv, {{msp, ff, k, dealer, a, {}}}).at(0));
  if (c.disqualified) throw DealerDisqualified("authentication dispute left unpublished");
  return c;
}

std::vector<WssOpenResult> wss_open_batch(Network& net, Adversary& adv,
                                          const std::vector<const WssCommitment*>& cs,
                                          std::optional<int> audience) {
  struct Work {
    int instance = 0;
    std::vector<Fel> a_bc;                       // vector the dealer reveals
    std::vector<std::vector<std::vector<Fel>>> claimed;  // [i][j] row values as sent
    std::vector<std::vector<std::vector<Fel>>> keys;     // [i][j] keys as sent
    WssOpenResult res;
  };
  std::vector<Work> work(cs.size());

  // dealer reveals a_*
  for (size_t x = 0; x < cs.size(); ++x) {
    const WssCommitment& c = *cs[x];
    Work& w = work[x];
    w.instance = net.new_instance();
    net.set_instance(w.instance);
    w.a_bc = c.a_star;
    adv.tamper_open_vector(c.dealer, c.msp, w.a_bc);
    if (audience)
      net.send(c.dealer, *audience, OpenVector{w.a_bc});
    else
      net.broadcast(c.dealer, OpenVector{w.a_bc});
    ++net.stats().wss_opens;
  }
  net.next_round();

  // every holder forwards its rows and keys to each verifier
  for (size_t x = 0; x < cs.size(); ++x) {
    const WssCommitment& c = *cs[x];
    Work& w = work[x];
    net.set_instance(w.instance);
    int n = c.msp.players();
    w.claimed.assign((size_t)n, std::vector<std::vector<Fel>>((size_t)n));
    w.keys.assign((size_t)n, std::vector<std::vector<Fel>>((size_t)n));
    for (int i = 0; i < n; ++i) {
      auto ids = c.msp.rows_of(i);
      if (ids.empty() || c.public_players.count(i)) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i || c.public_players.count(j)) continue;
        if (audience && j != *audience) continue;
        std::vector<RowShare> rs;
        for (size_t r = 0; r < ids.size(); ++r) rs.push_back({ids[r], c.rows[(size_t)i][r]});
        const WssPairAuth& pa = c.auth[(size_t)i][(size_t)j];
        std::vector<Fel> ks =
            pa.outcome == GicOutcome::established ? pa.inter.keys : std::vector<Fel>{};
        adv.forge_auth_rows(i, c.msp.field(), c.ff, rs, ks, net.rng(i));
        std::vector<Fel> vals;
        for (const RowShare& r : rs) vals.push_back(r.value);
        w.claimed[(size_t)i][(size_t)j] = std::move(vals);
        w.keys[(size_t)i][(size_t)j] = ks;
        net.send(i, j, WssAuthShares{i, std::move(rs), std::move(ks), audience.has_value()});
      }
    }
  }
  net.next_round();

  // verdicts; public opens spend one more round on accusations
  for (size_t x = 0; x < cs.size(); ++x) {
    const WssCommitment& c = *cs[x];
    Work& w = work[x];
    net.set_instance(w.instance);
    int n = c.msp.players();
    for (int j = 0; j < n; ++j) {
      if (c.public_players.count(j)) continue;
      if (audience && j != *audience) continue;
      if (!audience && j == c.dealer) continue;
      bool inconsistent = false;
      for (int i = 0; i < n; ++i) {
        auto ids = c.msp.rows_of(i);
        if (ids.empty()) continue;
        const std::vector<Fel>* vals;
        if (i == j || c.public_players.count(i)) {
          vals = &c.rows[(size_t)i];
        } else {
          vals = &w.claimed[(size_t)i][(size_t)j];
          const WssPairAuth& pa = c.auth[(size_t)i][(size_t)j];
          Fel claim = claim_for(c, *vals);
          bool accepted;
          if (pa.outcome == GicOutcome::established) {
            GicIntState submitted;
            submitted.keys = w.keys[(size_t)i][(size_t)j];
            accepted = gic_authenticate(submitted, pa.recv, claim);
            ++net.stats().gic_auths;
          } else {
            accepted = claim == pa.published;
          }
          if (!accepted) continue;
        }
        for (size_t r = 0; r < ids.size(); ++r)
          if (!c.msp.check_row(w.a_bc, ids[r], (*vals)[r])) inconsistent = true;
      }
      if (audience)
        w.res.value = inconsistent ? std::optional<Fel>() : std::optional<Fel>(w.a_bc[0]);
      else if (inconsistent)
        w.res.accusers.insert(j);
    }
  }
  if (!audience) {
    for (size_t x = 0; x < cs.size(); ++x) {
      net.set_instance(work[x].instance);
      for (int j : work[x].res.accusers) net.broadcast(j, Accusation{cs[x]->dealer});
    }
    net.next_round();
    for (size_t x = 0; x < cs.size(); ++x) {
      Work& w = work[x];
      if (cs[x]->msp.qualified(w.res.accusers))
        w.res.value = std::nullopt;
      else
        w.res.value = w.a_bc[0];
    }
  }

  std::vector<WssOpenResult> out;
  for (Work& w : work) out.push_back(std::move(w.res));
  return out;
}

WssOpenResult wss_open(Network& net, Adversary& adv, const WssCommitment& c,
                       std::optional<int> audience) {
  return wss_open_batch(net, adv, {&c}, audience).at(0);
}

WssCommitment wss_scale(const WssCommitment& c, const Fel& lambda) {
  if (lambda.v == 0)
    return wss_const(c.msp, c.ff, c.k, c.dealer, c.msp.field().zero(), c.public_players);
  WssCommitment s = c;
  for (Fel& v : s.a_star) v = v * lambda;
  for (auto& pr : s.rows)
    for (Fel& v : pr) v = v * lambda;
  Fel lift = c.ff.fe(lambda.v);
  for (size_t i = 0; i < s.auth.size(); ++i)
    for (size_t j = 0; j < s.auth[i].size(); ++j) {
      if (i == j || s.public_players.count((int)i) || s.public_players.count((int)j)) continue;
      WssPairAuth& pa = s.auth[i][j];
      if (pa.outcome == GicOutcome::established) {
        auto scaled = gic_scale(pa.inter, pa.recv, lift);
        pa.inter = std::move(scaled.first);
        pa.recv = std::move(scaled.second);
      } else {
        pa.published = lift * pa.published;
      }
    }
  s.k_scale = s.k_scale * lambda;
  s.f_scale = s.f_scale * lift;
  return s;
}

WssCommitment wss_const(const Msp& msp, const Field& ff, int k, int dealer, const Fel& value,
                        const PlayerSet& public_players) {
  WssCommitment c(msp, ff, k, dealer);
  c.public_players = public_players;
  c.a_star.assign((size_t)msp.cols(), msp.field().zero());
  c.a_star[0] = value;
  std::vector<Fel> alpha;
  for (int r = 0; r < msp.rows(); ++r) alpha.push_back(msp.row_value(c.a_star, r));
  c.rows = split_rows(msp, alpha);
  int n = msp.players();
  c.auth.assign((size_t)n, std::vector<WssPairAuth>((size_t)n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || public_players.count(i) || public_players.count(j)) continue;
      WssPairAuth& pa = c.auth[(size_t)i][(size_t)j];
      pa.outcome = GicOutcome::published;
      pa.published = encode_shares(c.rows[(size_t)i], ff);
    }
  return c;
}

std::vector<WssCommitment> wss_add_batch(
    Network& net, Adversary& adv,
    const std::vector<std::pair<const WssCommitment*, const WssCommitment*>>& sums) {
  std::vector<WssCommitment> out;
  out.reserve(sums.size());
  for (const auto& [c1, c2] : sums) {
    if (c1->dealer != c2->dealer) throw DealerMismatch();
    if (!same_msp(c1->msp, c2->msp) || !(c1->ff == c2->ff) || c1->k != c2->k)
      throw MspMismatch();
    WssCommitment c(c1->msp, c1->ff, c1->k, c1->dealer);
    // A summed row is public only when both inputs were; a mixed row stays
    // with its holder and simply goes unopened if the holder is gone.
    for (int p : c1->public_players)
      if (c2->public_players.count(p)) c.public_players.insert(p);
    c.a_star.resize(c1->a_star.size());
    for (size_t x = 0; x < c.a_star.size(); ++x) c.a_star[x] = c1->a_star[x] + c2->a_star[x];
    c.rows.resize(c1->rows.size());
    for (size_t p = 0; p < c.rows.size(); ++p) {
      c.rows[p].resize(c1->rows[p].size());
      for (size_t r = 0; r < c.rows[p].size(); ++r)
        c.rows[p][r] = c1->rows[p][r] + c2->rows[p][r];
    }
    ++net.stats().wss_adds;
    out.push_back(std::move(c));
  }
  std::vector<WssCommitment*> ptrs;
  for (WssCommitment& c : out) ptrs.push_back(&c);
  generate_auth(net, adv, ptrs);
  return out;
}

WssCommitment wss_add(Network& net, Adversary& adv, const WssCommitment& c1,
                      const WssCommitment& c2) {
  WssCommitment c = std::move(wss_add_batch(net, adv, {{&c1, &c2}}).at(0));
  if (c.disqualified) throw DealerDisqualified("authentication dispute left unpublished");
  return c;
}

bool wss_prove_correct(Network& net, Adversary& adv, const WssCommitment& c, int k) {
  ++net.stats().wss_proofs;
  ++net.stats().bounded_events;
  int n = c.msp.players();
  for (int j = 1; j <= k; ++j) {
    net.set_instance(net.new_instance());
    Fel b = net.rng(c.dealer).uniform(c.msp.field(), Draw::blind_secret);
    WssCommitment cb = std::move(
        wss_commit_batch(net, adv, {{c.msp, c.ff, c.k, c.dealer, b, c.public_players}}).at(0));
    if (cb.disqualified) return false;
    WssCommitment csum = std::move(wss_add_batch(net, adv, {{&c, &cb}}).at(0));
    if (csum.disqualified) return false;

    int flipper = j % n;
    int bit = net.rng(flipper).flip(Draw::coin);
    if (auto forced = adv.bias_coin(flipper)) bit = *forced;
    net.set_instance(net.new_instance());
    net.broadcast(flipper, CoinFlip{bit});
    net.next_round();

    WssOpenResult r = wss_open(net, adv, bit == 1 ? cb : csum);
    if (!r.value.has_value()) return false;
  }
  return true;
}

}  // namespace q2mpc
