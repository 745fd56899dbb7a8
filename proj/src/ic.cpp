#include "q2mpc/ic.hpp"

namespace q2mpc {

namespace {

struct Work {
  int instance = 0;
  Fel s_dealer;  // what D builds triples from
  Fel s_int;     // what INT was told
  std::vector<Fel> keys;
  std::vector<CheckPair> pairs;
  std::vector<int> opened_idx;
  std::vector<CheckPair> opened;
  bool dealer_ok = true;
  bool int_ok = true;
  Fel fresh_key;
  CheckPair fresh_pair;
  GicResult out;
};

}  // namespace

std::vector<GicResult> gic_generate_batch(Network& net, Adversary& adv,
                                          const std::vector<GicJob>& jobs) {
  std::vector<Work> work(jobs.size());

  // deal: 2k triples per instance
  for (size_t n = 0; n < jobs.size(); ++n) {
    const GicSpec& sp = jobs[n].spec;
    const Field& f = sp.f;
    if (sp.k < 1) throw DimensionMismatch("security parameter must be positive");
    Work& w = work[n];
    w.instance = net.new_instance();
    net.set_instance(w.instance);
    w.s_dealer = jobs[n].s;
    w.s_int = jobs[n].s;
    for (int i = 0; i < 2 * sp.k; ++i) {
      Fel y = net.rng(sp.dealer).uniform(f, Draw::gic_key);
      Fel b = net.rng(sp.dealer).uniform_nonzero(f, Draw::gic_mask);
      w.keys.push_back(y);
      w.pairs.push_back({b, w.s_dealer + b * y});
    }
    adv.tamper_gic_deal(sp.dealer, f, w.s_int, w.keys, w.pairs);
    net.send(sp.dealer, sp.inter, GicDeal{w.s_int, w.keys});
    net.send(sp.dealer, sp.recipient, GicChecks{w.pairs});
    ++net.stats().gic_generates;
    ++net.stats().bounded_events;
  }
  net.next_round();

  // INT broadcasts the opening subset
  for (size_t n = 0; n < jobs.size(); ++n) {
    const GicSpec& sp = jobs[n].spec;
    Work& w = work[n];
    net.set_instance(w.instance);
    w.opened_idx = net.rng(sp.inter).ksubset(sp.k, 2 * sp.k, Draw::gic_subset);
    net.broadcast(sp.inter, GicIndexSet{w.opened_idx});
  }
  net.next_round();

  // R broadcasts the selected pairs
  for (size_t n = 0; n < jobs.size(); ++n) {
    const GicSpec& sp = jobs[n].spec;
    Work& w = work[n];
    net.set_instance(w.instance);
    for (int i : w.opened_idx) w.opened.push_back(w.pairs[(size_t)i]);
    adv.tamper_gic_open(sp.recipient, w.opened);
    net.broadcast(sp.recipient, GicOpened{w.opened_idx, w.opened});
  }
  net.next_round();

  // D approves, or replaces with one fresh triple
  for (size_t n = 0; n < jobs.size(); ++n) {
    const GicSpec& sp = jobs[n].spec;
    const Field& f = sp.f;
    Work& w = work[n];
    net.set_instance(w.instance);
    bool match = true;
    for (size_t i = 0; i < w.opened_idx.size(); ++i) {
      if (!(w.opened[i] == w.pairs[(size_t)w.opened_idx[i]])) match = false;
    }
    w.dealer_ok = match && !adv.gic_force_dispute(sp.dealer);
    net.broadcast(sp.dealer, GicVerdict{w.dealer_ok});
    if (!w.dealer_ok) {
      Fel y = net.rng(sp.dealer).uniform(f, Draw::gic_key);
      Fel b = net.rng(sp.dealer).uniform_nonzero(f, Draw::gic_mask);
      w.fresh_key = y;
      w.fresh_pair = {b, w.s_dealer + b * y};
      adv.tamper_gic_fresh(sp.dealer, f, w.fresh_key, w.fresh_pair);
      net.send(sp.dealer, sp.inter, GicFreshKey{w.fresh_key});
      net.broadcast(sp.dealer, GicFresh{w.fresh_pair});
    }
  }
  net.next_round();

  // INT predicts whether R would accept
  for (size_t n = 0; n < jobs.size(); ++n) {
    const GicSpec& sp = jobs[n].spec;
    Work& w = work[n];
    net.set_instance(w.instance);
    bool yes;
    if (w.dealer_ok) {
      yes = true;
      for (size_t i = 0; i < w.opened_idx.size(); ++i) {
        const CheckPair& p = w.opened[i];
        if (p.c != w.s_int + p.b * w.keys[(size_t)w.opened_idx[i]]) yes = false;
      }
    } else {
      yes = w.fresh_pair.c == w.s_int + w.fresh_pair.b * w.fresh_key;
    }
    if (adv.gic_int_refuse(sp.inter)) yes = false;
    w.int_ok = yes;
    net.broadcast(sp.inter, GicIntVerdict{yes});
  }
  net.next_round();

  // publication of disputed secrets
  for (size_t n = 0; n < jobs.size(); ++n) {
    const GicSpec& sp = jobs[n].spec;
    Work& w = work[n];
    if (w.int_ok) continue;
    net.set_instance(w.instance);
    if (adv.gic_refuse_publish(sp.dealer)) {
      w.out.outcome = GicOutcome::dealer_disqualified;
      net.annotate("disqualified", sp.dealer, "refused to publish a disputed value");
    } else {
      net.broadcast(sp.dealer, GicPublish{w.s_dealer});
      w.out.outcome = GicOutcome::published;
      w.out.published = w.s_dealer;
    }
  }
  net.next_round();

  std::vector<GicResult> results;
  for (size_t n = 0; n < jobs.size(); ++n) {
    Work& w = work[n];
    if (w.int_ok) {
      w.out.outcome = GicOutcome::established;
      w.out.inter.secret = w.s_int;
      if (w.dealer_ok) {
        size_t cursor = 0;
        for (int i = 0; i < 2 * jobs[n].spec.k; ++i) {
          if (cursor < w.opened_idx.size() && w.opened_idx[cursor] == i) {
            ++cursor;
            continue;
          }
          w.out.inter.keys.push_back(w.keys[(size_t)i]);
          w.out.recv.pairs.push_back(w.pairs[(size_t)i]);
        }
      } else {
        w.out.inter.keys.push_back(w.fresh_key);
        w.out.inter.fresh = true;
        w.out.recv.pairs.push_back(w.fresh_pair);
        w.out.recv.fresh = true;
      }
    }
    results.push_back(std::move(w.out));
  }
  return results;
}

GicResult gic_generate(Network& net, Adversary& adv, const GicSpec& spec, const Fel& s) {
  return gic_generate_batch(net, adv, {{spec, s}}).at(0);
}

bool gic_authenticate(const GicIntState& submitted, const GicRecvState& held, const Fel& claimed) {
  size_t m = std::min(submitted.keys.size(), held.pairs.size());
  for (size_t i = 0; i < m; ++i) {
    if (held.pairs[i].c == claimed + held.pairs[i].b * submitted.keys[i]) return true;
  }
  return false;
}

std::pair<GicIntState, GicRecvState> gic_scale(const GicIntState& i, const GicRecvState& r,
                                               const Fel& lambda) {
  if (lambda.v == 0) throw ZeroScalar("information checking data cannot be scaled by zero");
  GicIntState si = i;
  GicRecvState sr = r;
  si.secret = lambda * i.secret;
  for (CheckPair& p : sr.pairs) {
    p.b = lambda * p.b;
    p.c = lambda * p.c;
  }
  return {std::move(si), std::move(sr)};
}

}  // namespace q2mpc
