#include <doctest.h>

#include "q2mpc/simnet.hpp"

using namespace q2mpc;

namespace {

Field f7(7);

struct EchoLead final : PartyMachine {
  std::vector<uint64_t> got;
  bool finished = false;
  void on_round(Network& net, int self, int round, const std::vector<Message>& inbox) override {
    if (round == 0) {
      net.broadcast(self, TestPing{7});
      return;
    }
    for (const Message& m : inbox) {
      if (auto* p = std::get_if<TestPing>(&m.payload); p && m.channel == Channel::private_msg)
        got.push_back(p->value);
    }
    if (got.size() == 2) finished = true;
  }
  bool done() const override { return finished; }
};

struct EchoFollower final : PartyMachine {
  bool finished = false;
  void on_round(Network& net, int self, int, const std::vector<Message>& inbox) override {
    for (const Message& m : inbox) {
      if (auto* p = std::get_if<TestPing>(&m.payload); p && m.channel == Channel::broadcast) {
        net.send(self, m.sender, TestPing{p->value + 1});
        finished = true;
      }
    }
  }
  bool done() const override { return finished; }
};

// Broadcasts 99 if it has already seen traffic this round, 1 otherwise.
struct PeekReporter final : PartyMachine {
  bool finished = false;
  void on_round(Network& net, int self, int round, const std::vector<Message>& inbox) override {
    if (round > 0) {
      finished = true;
      return;
    }
    net.broadcast(self, TestPing{inbox.empty() ? uint64_t{1} : uint64_t{99}});
  }
  bool done() const override { return finished; }
};

struct Opener final : PartyMachine {
  bool finished = false;
  void on_round(Network& net, int self, int, const std::vector<Message>&) override {
    net.broadcast(self, TestPing{5});
    finished = true;
  }
  bool done() const override { return finished; }
};

}  // namespace

TEST_CASE("per-party streams derive from the master seed") {
  Network net(3, 42);
  for (int p = 0; p < 3; ++p) CHECK(net.stream_seed(p) == SplitMix::stream_seed(42, (uint64_t)p));
  CHECK(net.stream_seed(0) != net.stream_seed(1));
  CHECK(net.transcript().stream_seeds.size() == 3);
  CHECK_THROWS_AS(net.stream_seed(3), PlayerOutOfRange);
  CHECK_THROWS_AS(Network(1, 42), PlayerCountMismatch);
}

TEST_CASE("round traffic is sealed sorted by sender") {
  Network net(3, 1);
  net.broadcast(2, CoinFlip{1});
  net.send(0, 1, TestPing{5});
  CHECK(net.pending().size() == 2);
  net.next_round();
  CHECK(net.pending().empty());
  CHECK(net.round() == 1);
  const auto& ms = net.transcript().messages;
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].sender == 0);
  CHECK(ms[1].sender == 2);
  CHECK(ms[0].round == 0);
  CHECK(net.stats().messages == 2);

  CHECK(to_string(ms[0]) == "r0 P0 >P1 i0 ping 5");
  CHECK(to_string(ms[1]) == "r0 P2 * i0 coin heads");
  CHECK(to_string(Payload{CoinFlip{0}}) == "coin tails");
}

TEST_CASE("payload formatting is stable") {
  CHECK(to_string(Payload{ShareDeal{{{0, f7.fe(5)}, {2, f7.fe(1)}}}}) == "share-deal [0:5,2:1]");
  CHECK(to_string(Payload{GicChecks{{{f7.fe(2), f7.fe(3)}}}}) == "gic-checks [(2,3)]");
  CHECK(to_string(Payload{OpenVector{{f7.fe(3), f7.fe(2)}}}) == "open-vector [3,2]");
  CHECK(to_string(Payload{Accusation{2}}) == "accuse P2");
  CHECK(to_string(Payload{PublicValue{"out", f7.fe(4)}}) == "public out=4");
  CHECK(to_string(Payload{GicVerdict{false}}) == "gic-dealer-dispute");
  CHECK(to_string(Payload{GicAuthValue{f7.fe(6), {f7.fe(1)}, true}}) == "auth s=6 single y=[1]");
}

TEST_CASE("instance tags") {
  Network net(2, 9);
  CHECK(net.instance() == 0);
  int a = net.new_instance();
  CHECK(a == 1);
  net.set_instance(a);
  net.send(0, 1, TestPing{1});
  net.set_instance(0);
  net.broadcast(1, TestPing{2});
  net.next_round();
  CHECK(net.transcript().messages[0].instance == 1);
  CHECK(net.transcript().messages[1].instance == 0);
  CHECK(net.new_instance() == 2);
}

TEST_CASE("coalition view") {
  Network net(3, 7);
  net.send(0, 1, TestPing{5});
  net.send(0, 2, TestPing{6});
  net.broadcast(1, CoinFlip{0});
  net.annotate("input", 1, "x=3");
  net.annotate("input", 2, "y=4");
  net.next_round();
  const Transcript& t = net.transcript();

  View v1 = view_of(t, {1});
  CHECK(v1.received.size() == 2);  // its ping and the broadcast
  CHECK(v1.stream_seeds == std::vector<uint64_t>{net.stream_seed(1)});
  REQUIRE(v1.inputs.size() == 1);
  CHECK(v1.inputs[0].text == "x=3");

  View v0 = view_of(t, {0});
  CHECK(v0.received.size() == 1);  // broadcast only; what it sent is derivable
  View v12 = view_of(t, {1, 2});
  CHECK(v12.received.size() == 3);
  CHECK(v12.inputs.size() == 2);
  CHECK_THROWS_AS(view_of(t, {7}), PlayerOutOfRange);
}

TEST_CASE("recording can be disabled") {
  Network net(2, 3, NetOptions{false});
  net.send(0, 1, TestPing{1});
  net.annotate("note", -1, "ignored");
  net.next_round();
  CHECK(net.transcript().messages.empty());
  CHECK(net.transcript().annotations.empty());
  CHECK(net.stats().messages == 1);
  CHECK(net.round() == 1);
}

TEST_CASE("lockstep run with reply routing") {
  auto build = [] {
    std::vector<std::unique_ptr<PartyMachine>> ps;
    ps.push_back(std::make_unique<EchoLead>());
    ps.push_back(std::make_unique<EchoFollower>());
    ps.push_back(std::make_unique<EchoFollower>());
    return ps;
  };
  auto parties = build();
  Adversary honest;
  Transcript t = run_protocol(parties, honest, 42);
  REQUIRE(t.messages.size() == 3);
  CHECK(t.messages[0].channel == Channel::broadcast);
  CHECK(std::get<TestPing>(t.messages[1].payload).value == 8);
  CHECK(std::get<TestPing>(t.messages[2].payload).value == 8);
  CHECK(static_cast<EchoLead*>(parties[0].get())->got == std::vector<uint64_t>{8, 8});
  for (const auto& p : parties) CHECK(p->done());

  auto again = build();
  Transcript t2 = run_protocol(again, honest, 42);
  CHECK(to_string(t) == to_string(t2));
}

TEST_CASE("rushing corruption sees honest traffic of the same round") {
  auto build = [] {
    std::vector<std::unique_ptr<PartyMachine>> ps;
    ps.push_back(std::make_unique<Opener>());
    ps.push_back(std::make_unique<PeekReporter>());
    ps.push_back(std::make_unique<PeekReporter>());
    return ps;
  };
  Adversary adv;
  adv.corrupt = {2};
  auto parties = build();
  Transcript t = run_protocol(parties, adv, 1);
  uint64_t honest_peek = 0, corrupt_peek = 0;
  for (const Message& m : t.messages) {
    if (m.round != 0) continue;
    if (m.sender == 1) honest_peek = std::get<TestPing>(m.payload).value;
    if (m.sender == 2) corrupt_peek = std::get<TestPing>(m.payload).value;
  }
  CHECK(honest_peek == 1);   // honest parties act blind within the round
  CHECK(corrupt_peek == 99); // the corrupt one already saw the opener

  Adversary sync;
  sync.corrupt = {2};
  sync.rushing = false;
  auto parties2 = build();
  Transcript t2 = run_protocol(parties2, sync, 1);
  for (const Message& m : t2.messages) {
    if (m.round == 0 && m.sender == 2) CHECK(std::get<TestPing>(m.payload).value == 1);
  }
}

TEST_CASE("recorded draws replay exactly") {
  std::vector<TraceEntry> trace;
  {
    RecordingRng rec(std::make_unique<SplitMix>(11), &trace);
    rec.uniform(f7, Draw::top_rho);
    rec.uniform_nonzero(f7, Draw::gic_mask);
    rec.flip(Draw::coin);
    rec.ksubset(2, 5, Draw::gic_subset);
  }
  REQUIRE(trace.size() == 4);
  CHECK(trace[0].tag == Draw::top_rho);
  CHECK(trace[1].values[0] != 0);
  CHECK(trace[3].values.size() == 2);

  SplitMix fresh(11);
  ReplayRng rep(trace);
  CHECK(rep.uniform(f7, Draw::generic) == fresh.uniform(f7));
  CHECK(rep.uniform_nonzero(f7, Draw::generic) == fresh.uniform_nonzero(f7));
  CHECK(rep.flip() == fresh.flip());
  CHECK(rep.ksubset(2, 5) == fresh.ksubset(2, 5));
  CHECK(rep.exhausted());
  CHECK_THROWS_AS(rep.flip(), ReplayExhausted);

  ReplayRng bad(trace);
  CHECK_THROWS_AS(bad.flip(), ReplayExhausted);  // kind mismatch
  ReplayRng wrongfield(trace);
  Field f11(11);
  CHECK_THROWS_AS(wrongfield.uniform(f11, Draw::generic), ReplayExhausted);

  ReplayRng shape(trace);
  shape.uniform(f7, Draw::generic);
  shape.uniform_nonzero(f7, Draw::generic);
  shape.flip();
  CHECK_THROWS_AS(shape.ksubset(3, 5), ReplayExhausted);
}

TEST_CASE("subset draws are sorted distinct prefixes") {
  SplitMix rng(3);
  bool seen[5][5] = {};
  for (int i = 0; i < 200; ++i) {
    auto s = rng.ksubset(2, 5);
    REQUIRE(s.size() == 2);
    CHECK(s[0] < s[1]);
    CHECK(s[0] >= 0);
    CHECK(s[1] < 5);
    seen[s[0]][s[1]] = true;
  }
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) CHECK(seen[a][b]);
  }
}

TEST_CASE("strategy parsing") {
  AdversaryScript s = parse_strategy("honest");
  CHECK(s.name == "honest");
  CHECK(s.params.empty());

  s = parse_strategy("inconsistent_wss_dealer:row=2");
  CHECK(s.name == "inconsistent_wss_dealer");
  CHECK(s.params.at("row") == "2");

  s = parse_strategy("forging_intermediary:naive,guesses=3");
  CHECK(s.params.count("naive") == 1);
  CHECK(s.params.at("guesses") == "3");

  CHECK_THROWS_AS(parse_strategy("no_such_thing"), ParseError);
  CHECK(strategy_registry().size() == 7);
}

TEST_CASE("scripted tampering hooks") {
  Msp m = threshold_msp(3, 1, 7);

  SUBCASE("wss dealer perturbs the first row of the lowest honest player") {
    AdversaryScript s = parse_strategy("inconsistent_wss_dealer");
    s.corrupt = {0};
    auto adv = make_adversary(s);
    std::vector<Fel> alpha{f7.fe(5), f7.fe(0), f7.fe(2)};
    adv->tamper_dealt(0, Adversary::DealKind::wss, -1, m, alpha);
    CHECK(alpha == std::vector<Fel>{f7.fe(5), f7.fe(1), f7.fe(2)});
    adv->tamper_dealt(1, Adversary::DealKind::wss, -1, m, alpha);  // honest dealer untouched
    CHECK(alpha == std::vector<Fel>{f7.fe(5), f7.fe(1), f7.fe(2)});
  }

  SUBCASE("vss dealer shifts a top row and compensates in every blinding") {
    AdversaryScript s = parse_strategy("inconsistent_vss_dealer");
    s.corrupt = {0};
    auto adv = make_adversary(s);
    std::vector<Fel> top{f7.fe(5), f7.fe(0), f7.fe(2)};
    std::vector<Fel> blind{f7.fe(1), f7.fe(1), f7.fe(1)};
    adv->tamper_dealt(0, Adversary::DealKind::vss_top, -1, m, top);
    adv->tamper_dealt(0, Adversary::DealKind::vss_blind, 0, m, blind);
    CHECK(top == std::vector<Fel>{f7.fe(5), f7.fe(1), f7.fe(2)});
    CHECK(blind == std::vector<Fel>{f7.fe(1), f7.fe(0), f7.fe(1)});
    CHECK(adv->bias_coin(0) == 0);               // wants tails
    CHECK_FALSE(adv->bias_coin(1).has_value());  // honest coins stay fair
  }

  SUBCASE("opener lies in the first coordinate") {
    AdversaryScript s = parse_strategy("lying_opener");
    s.corrupt = {1};
    auto adv = make_adversary(s);
    std::vector<Fel> a_star{f7.fe(3), f7.fe(2)};
    adv->tamper_open_vector(1, m, a_star);
    CHECK(a_star == std::vector<Fel>{f7.fe(4), f7.fe(2)});
  }

  SUBCASE("naive forger leaves keys alone, default forger adjusts them") {
    Field big(347);
    SplitMix rng(5);
    AdversaryScript s = parse_strategy("forging_intermediary:naive");
    s.corrupt = {1};
    auto adv = make_adversary(s);
    Fel claimed = big.fe(40);
    std::vector<Fel> keys{big.fe(7), big.fe(9)};
    adv->forge_auth_value(1, big, claimed, keys, rng);
    CHECK(claimed == big.fe(41));
    CHECK(keys == std::vector<Fel>{big.fe(7), big.fe(9)});

    auto adv2 = make_adversary([] {
      AdversaryScript t = parse_strategy("forging_intermediary");
      t.corrupt = {1};
      return t;
    }());
    adv2->forge_auth_value(1, big, claimed, keys, rng);
    CHECK(claimed == big.fe(42));
    CHECK(keys != std::vector<Fel>{big.fe(7), big.fe(9)});
  }

  SUBCASE("product lies and refusals") {
    AdversaryScript s = parse_strategy("wrong_product_dealer");
    s.corrupt = {2};
    auto adv = make_adversary(s);
    CHECK(adv->product_value(2, 0, f7.fe(3)) == f7.fe(4));
    CHECK(adv->product_value(1, 0, f7.fe(3)) == f7.fe(3));

    AdversaryScript r = parse_strategy("refuse_conversion");
    r.corrupt = {1};
    auto adv3 = make_adversary(r);
    CHECK(adv3->refuse_conversion(1));
    CHECK_FALSE(adv3->refuse_conversion(0));
  }

  SUBCASE("honest script never intervenes") {
    AdversaryScript s = parse_strategy("honest");
    s.corrupt = {0, 1};
    auto adv = make_adversary(s);
    std::vector<Fel> alpha{f7.fe(5), f7.fe(0), f7.fe(2)};
    adv->tamper_dealt(0, Adversary::DealKind::wss, -1, m, alpha);
    CHECK(alpha == std::vector<Fel>{f7.fe(5), f7.fe(0), f7.fe(2)});
    CHECK_FALSE(adv->bias_coin(0).has_value());
    CHECK_FALSE(adv->refuse_conversion(0));
  }
}
