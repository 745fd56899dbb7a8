#include <doctest.h>

#include "q2mpc/wss.hpp"

using namespace q2mpc;

namespace {

struct Rig {
  Msp msp;
  Field ff;
  Rig() : msp(threshold_msp(3, 1, 7)), ff(347, FieldRole::authentication) {}
};

std::unique_ptr<Adversary> scripted(const std::string& text, PlayerSet corrupt) {
  AdversaryScript s = parse_strategy(text);
  s.corrupt = std::move(corrupt);
  return make_adversary(s);
}

// Tampers only the dealer's first deal, so later commits stay clean.
struct FirstDealBad : Adversary {
  int seen = 0;
  void tamper_dealt(int dealer, DealKind kind, int, const Msp& msp, std::vector<Fel>& alpha) override {
    if (!is_corrupt(dealer) || kind != DealKind::wss) return;
    if (seen++ > 0) return;
    int row = 0;
    for (int p = 0; p < msp.players(); ++p)
      if (!is_corrupt(p)) { row = msp.rows_of(p).front(); break; }
    alpha[(size_t)row] = alpha[(size_t)row] + msp.field().one();
  }
};

struct DisputeAndRefuse : Adversary {
  bool gic_force_dispute(int dealer) override { return is_corrupt(dealer); }
  void tamper_gic_fresh(int dealer, const Field& f, Fel&, CheckPair& pair) override {
    if (is_corrupt(dealer)) pair.c = pair.c + f.one();
  }
  bool gic_refuse_publish(int dealer) override { return is_corrupt(dealer); }
};

struct DisputeOnly : Adversary {
  bool gic_force_dispute(int dealer) override { return is_corrupt(dealer); }
};

}  // namespace

TEST_CASE("committing deals consistent rows and six authentication instances") {
  Rig rig;
  Network net(3, 1);
  Adversary adv;
  WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));

  // seed 1 makes the dealer draw rho = 2
  CHECK(c.a_star == std::vector<Fel>{rig.msp.field().fe(3), rig.msp.field().fe(2)});
  CHECK(c.rows[0] == std::vector<Fel>{rig.msp.field().fe(5)});
  CHECK(c.rows[1] == std::vector<Fel>{rig.msp.field().fe(0)});
  CHECK(c.rows[2] == std::vector<Fel>{rig.msp.field().fe(2)});
  CHECK(net.stats().gic_generates == 6);
  CHECK(net.stats().wss_commits == 1);
  CHECK(net.stats().rounds == 7);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const WssPairAuth& pa = c.auth[(size_t)i][(size_t)j];
      CHECK(pa.outcome == GicOutcome::established);
      CHECK(pa.inter.secret == encode_shares(c.rows[(size_t)i], rig.ff));
      CHECK(gic_authenticate(pa.inter, pa.recv, pa.inter.secret));
    }
}

TEST_CASE("zero secret with zero randomness authenticates zero everywhere") {
  Rig rig;
  Network net(3, 16);  // dealer draws rho = 0
  Adversary adv;
  WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().zero());
  for (int p = 0; p < 3; ++p) CHECK(c.rows[(size_t)p][0].v == 0);
  CHECK(c.auth[1][2].inter.secret == rig.ff.zero());
}

TEST_CASE("inconsistent dealing completes but is caught at open") {
  Rig rig;
  Network net(3, 5);
  auto adv = scripted("inconsistent_wss_dealer", {0});
  WssCommitment c = wss_commit(net, *adv, rig.msp, rig.ff, 4, 0, rig.msp.field().fe(3));

  // perturbed row reaches its owner and is certified as handed out
  int bad = rig.msp.rows_of(1).front();
  CHECK_FALSE(rig.msp.check_row(c.a_star, bad, c.rows[1][0]));

  WssOpenResult r = wss_open(net, *adv, c);
  CHECK_FALSE(r.value.has_value());
  CHECK(rig.msp.qualified(r.accusers));
  CHECK(r.accusers.count(1) == 1);
  CHECK(r.accusers.count(2) == 1);
}

TEST_CASE("honest open returns the committed value without accusations") {
  Rig rig;
  Network net(3, 9);
  Adversary adv;
  WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 1, rig.msp.field().fe(3));
  WssOpenResult r = wss_open(net, adv, c);
  REQUIRE(r.value.has_value());
  CHECK(*r.value == rig.msp.field().fe(3));
  CHECK(r.accusers.empty());
}

TEST_CASE("a dealer revealing a different vector is disqualified") {
  Rig rig;
  Network net(3, 9);
  auto adv = scripted("lying_opener", {1});
  WssCommitment c = wss_commit(net, *adv, rig.msp, rig.ff, 2, 1, rig.msp.field().fe(3));
  WssOpenResult r = wss_open(net, *adv, c);
  CHECK_FALSE(r.value.has_value());
  CHECK(rig.msp.qualified(r.accusers));
}

TEST_CASE("single audience open") {
  Rig rig;
  SUBCASE("honest dealer convinces the audience") {
    Network net(3, 12);
    Adversary adv;
    WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(4));
    WssOpenResult r = wss_open(net, adv, c, 2);
    REQUIRE(r.value.has_value());
    CHECK(*r.value == rig.msp.field().fe(4));
    // nothing about the open is broadcast
    for (const Message& m : net.transcript().messages)
      if (m.round >= 7) CHECK(m.channel == Channel::private_msg);
  }
  SUBCASE("lying dealer is rejected by the audience") {
    Network net(3, 12);
    auto adv = scripted("lying_opener", {0});
    WssCommitment c = wss_commit(net, *adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(4));
    WssOpenResult r = wss_open(net, *adv, c, 2);
    CHECK_FALSE(r.value.has_value());
  }
}

TEST_CASE("scaling transforms shares and authentication together") {
  Rig rig;
  Network net(3, 21);
  Adversary adv;
  WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));

  SUBCASE("by two opens to six") {
    WssCommitment s = wss_scale(c, rig.msp.field().fe(2));
    CHECK(s.k_scale == rig.msp.field().fe(2));
    WssOpenResult r = wss_open(net, adv, s);
    REQUIRE(r.value.has_value());
    CHECK(*r.value == rig.msp.field().fe(6));
    CHECK(r.accusers.empty());
  }
  SUBCASE("by one is the identity") {
    WssCommitment s = wss_scale(c, rig.msp.field().one());
    WssOpenResult r = wss_open(net, adv, s);
    CHECK(*r.value == rig.msp.field().fe(3));
  }
  SUBCASE("by zero collapses to the public zero commitment") {
    long long traffic = net.stats().messages;
    WssCommitment s = wss_scale(c, rig.msp.field().zero());
    CHECK(net.stats().messages == traffic);  // scaling is local
    WssOpenResult r = wss_open(net, adv, s);
    REQUIRE(r.value.has_value());
    CHECK(r.value->v == 0);
  }
  SUBCASE("twice by two composes") {
    WssCommitment s = wss_scale(wss_scale(c, rig.msp.field().fe(2)), rig.msp.field().fe(2));
    WssOpenResult r = wss_open(net, adv, s);
    CHECK(*r.value == rig.msp.field().fe(5));  // 12 mod 7
  }
}

TEST_CASE("addition sums shares and regenerates authentication") {
  Rig rig;
  SUBCASE("three plus two opens to five") {
    Network net(3, 31);
    Adversary adv;
    WssCommitment c1 = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));
    WssCommitment c2 = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(2));
    WssCommitment s = wss_add(net, adv, c1, c2);
    for (int p = 0; p < 3; ++p) CHECK(s.rows[(size_t)p][0] == c1.rows[(size_t)p][0] + c2.rows[(size_t)p][0]);
    WssOpenResult r = wss_open(net, adv, s);
    REQUIRE(r.value.has_value());
    CHECK(*r.value == rig.msp.field().fe(5));
  }
  SUBCASE("adding a zero commitment is the identity") {
    Network net(3, 16);  // rho = 0 for the first commit
    Adversary adv;
    WssCommitment z = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().zero());
    WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(4));
    WssCommitment s = wss_add(net, adv, c, z);
    WssOpenResult r = wss_open(net, adv, s);
    CHECK(*r.value == rig.msp.field().fe(4));
  }
  SUBCASE("a bad summand poisons the sum") {
    Network net(3, 33);
    FirstDealBad adv;
    adv.corrupt = {0};
    WssCommitment c1 = wss_commit(net, adv, rig.msp, rig.ff, 4, 0, rig.msp.field().fe(3));
    WssCommitment c2 = wss_commit(net, adv, rig.msp, rig.ff, 4, 0, rig.msp.field().fe(2));
    WssCommitment s = wss_add(net, adv, c1, c2);
    WssOpenResult r = wss_open(net, adv, s);
    CHECK_FALSE(r.value.has_value());
  }
  SUBCASE("mismatched dealers and programs are rejected") {
    Network net(3, 40);
    Adversary adv;
    WssCommitment c1 = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));
    WssCommitment c2 = wss_commit(net, adv, rig.msp, rig.ff, 2, 1, rig.msp.field().fe(2));
    CHECK_THROWS_AS((void)wss_add(net, adv, c1, c2), DealerMismatch);
    WssCommitment c3 = wss_commit(net, adv, threshold_msp(3, 1, 11), rig.ff, 2, 0,
                                  Fel{3, 11});
    CHECK_THROWS_AS((void)wss_add(net, adv, c1, c3), MspMismatch);
  }
}

TEST_CASE("public constant commitments open without dealer risk") {
  Rig rig;
  Network net(3, 44);
  Adversary adv;
  WssCommitment c = wss_const(rig.msp, rig.ff, 2, 1, rig.msp.field().fe(6));
  WssOpenResult r = wss_open(net, adv, c);
  REQUIRE(r.value.has_value());
  CHECK(*r.value == rig.msp.field().fe(6));

  WssCommitment real = wss_commit(net, adv, rig.msp, rig.ff, 2, 1, rig.msp.field().fe(3));
  WssCommitment s = wss_add(net, adv, real, c);
  WssOpenResult r2 = wss_open(net, adv, s);
  CHECK(*r2.value == rig.msp.field().fe(2));  // 9 mod 7
}

TEST_CASE("authentication disputes during commit") {
  Rig rig;
  SUBCASE("published fallback keeps the commitment usable") {
    Network net(3, 50);
    DisputeOnly adv;
    adv.corrupt = {0};
    // dealer disputes every instance; fresh triples are honest, so all is well
    WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));
    WssOpenResult r = wss_open(net, adv, c);
    CHECK(*r.value == rig.msp.field().fe(3));
  }
  SUBCASE("refusing to publish disqualifies at commit time") {
    Network net(3, 50);
    DisputeAndRefuse adv;
    adv.corrupt = {0};
    CHECK_THROWS_AS((void)wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3)),
                    DealerDisqualified);
  }
  SUBCASE("published value still binds the holder") {
    Network net(3, 51);
    // dispute with an inconsistent fresh triple forces publication
    struct IntRefuses : DisputeOnly {
      void tamper_gic_fresh(int dealer, const Field& f, Fel&, CheckPair& pair) override {
        if (is_corrupt(dealer)) pair.c = pair.c + f.one();
      }
    } adv2;
    adv2.corrupt = {0};
    WssCommitment c = wss_commit(net, adv2, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(c.auth[(size_t)i][(size_t)j].outcome == GicOutcome::published);
    WssOpenResult r = wss_open(net, adv2, c);
    CHECK(*r.value == rig.msp.field().fe(3));
  }
}

TEST_CASE("cut and choose proof of commitment correctness") {
  Rig rig;
  SUBCASE("honest commitment passes all rounds") {
    Network net(3, 60);
    Adversary adv;
    WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));
    CHECK(wss_prove_correct(net, adv, c, 8));
  }
  SUBCASE("inconsistent commitment is refuted at moderate k") {
    Network net(3, 61);
    FirstDealBad adv;
    adv.corrupt = {0};
    WssCommitment c = wss_commit(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3));
    CHECK_FALSE(wss_prove_correct(net, adv, c, 8));
  }
}
