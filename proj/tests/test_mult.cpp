#include <doctest.h>

#include "q2mpc/mult.hpp"

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

VssCommitment deal_ok(Network& net, Adversary& adv, const Rig& rig, int k, int dealer,
                      uint64_t value) {
  VssDealResult r = vss_deal(net, adv, rig.msp, rig.ff, k, dealer, rig.msp.field().fe(value));
  REQUIRE(r.outcome == VssOutcome::success);
  return std::move(*r.commitment);
}

// Claims a wrong product with honest blinders; only a heads coin hides the
// mismatch, so the prover leans on its own flips landing heads.
struct HeadsProver : Adversary {
  std::optional<int> bias_coin(int flipper) override {
    return is_corrupt(flipper) ? std::optional<int>(1) : std::nullopt;
  }
};

// Claims a wrong product with blinders precompensated for the tails check.
struct TailsProver : Adversary {
  std::optional<Fel> cp_blind_product(int dealer, const Fel& a, const Fel& b, const Fel& c,
                                      const Fel& bprime) override {
    if (!is_corrupt(dealer)) return std::nullopt;
    return a * (b + bprime) - c;
  }
  std::optional<int> bias_coin(int flipper) override {
    return is_corrupt(flipper) ? std::optional<int>(0) : std::nullopt;
  }
};

}  // namespace

TEST_CASE("a true product claim passes every challenge round") {
  Rig rig;
  Network net(3, 21);
  Adversary adv;
  const Field& k = rig.msp.field();
  VssCommitment a = deal_ok(net, adv, rig, 2, 0, 3);
  VssCommitment b = deal_ok(net, adv, rig, 2, 0, 2);
  VssCommitment c = deal_ok(net, adv, rig, 2, 0, 6);
  CpClaim claim{&a, &b, &c, k.fe(3), k.fe(2), k.fe(6)};
  CHECK(vss_cp(net, adv, 0, claim, 2));
  CHECK(net.stats().cp_checks == 1);
}

TEST_CASE("false product claims die on the first unlucky coin") {
  Rig rig;
  const Field& k = rig.msp.field();

  SUBCASE("prover hoping for heads") {
    int caught = 0;
    for (uint64_t seed = 1; seed <= 6; ++seed) {
      Network net(3, seed, NetOptions{false});
      HeadsProver adv;
      adv.corrupt = {0};
      VssCommitment a = deal_ok(net, adv, rig, 2, 0, 3);
      VssCommitment b = deal_ok(net, adv, rig, 2, 0, 2);
      VssCommitment c = deal_ok(net, adv, rig, 2, 0, 0);  // 3 * 2 != 0
      CpClaim claim{&a, &b, &c, k.fe(3), k.fe(2), k.fe(0)};
      if (!vss_cp(net, adv, 0, claim, 3)) ++caught;
    }
    CHECK(caught == 6);  // needs all 8 honest coins heads to slip through
  }
  SUBCASE("prover hoping for tails") {
    int caught = 0;
    for (uint64_t seed = 1; seed <= 6; ++seed) {
      Network net(3, seed, NetOptions{false});
      TailsProver adv;
      adv.corrupt = {0};
      VssCommitment a = deal_ok(net, adv, rig, 2, 0, 3);
      VssCommitment b = deal_ok(net, adv, rig, 2, 0, 2);
      VssCommitment c = deal_ok(net, adv, rig, 2, 0, 0);
      CpClaim claim{&a, &b, &c, k.fe(3), k.fe(2), k.fe(0)};
      if (!vss_cp(net, adv, 0, claim, 3)) ++caught;
    }
    CHECK(caught == 6);
  }
}

TEST_CASE("honest multiplication opens to the product") {
  Rig rig;
  Network net(3, 31, NetOptions{false});
  Adversary adv;
  VssCommitment u = deal_ok(net, adv, rig, 2, 0, 3);
  VssCommitment v = deal_ok(net, adv, rig, 2, 1, 2);
  MultResult r = vss_mult(net, adv, u, v);
  REQUIRE(r.product.has_value());
  CHECK(r.cheaters.empty());
  CHECK(net.stats().mults == 1);
  CHECK(net.stats().conversions == 6);  // both factors, one per row
  CHECK(net.stats().cp_checks == 3);
  CHECK(vss_open(net, adv, *r.product) == rig.msp.field().fe(6));
}

TEST_CASE("squaring reuses one commitment on both sides") {
  Rig rig;
  Network net(3, 33, NetOptions{false});
  Adversary adv;
  VssCommitment u = deal_ok(net, adv, rig, 2, 2, 3);
  MultResult r = vss_mult(net, adv, u, u);
  REQUIRE(r.product.has_value());
  CHECK(vss_open(net, adv, *r.product) == rig.msp.field().fe(2));  // 9 mod 7
}

TEST_CASE("wrong row product is exposed, opened and replaced") {
  Rig rig;
  Network net(3, 35);
  auto adv = scripted("wrong_product_dealer", {1});
  VssCommitment u = deal_ok(net, *adv, rig, 2, 0, 3);
  VssCommitment v = deal_ok(net, *adv, rig, 2, 2, 2);
  MultResult r = vss_mult(net, *adv, u, v);
  REQUIRE(r.product.has_value());
  CHECK(r.cheaters == PlayerSet{1});
  // the forced-public row product is the true one, so the result stands
  CHECK(vss_open(net, *adv, *r.product) == rig.msp.field().fe(6));
  bool noted = false;
  for (const Annotation& a : net.transcript().annotations)
    if (a.kind == "mult" && a.party == 1) noted = true;
  CHECK(noted);
}

TEST_CASE("refused upgrade reports the cheater and no product") {
  Rig rig;
  Network net(3, 37, NetOptions{false});
  auto adv = scripted("refuse_conversion", {2});
  VssCommitment u = deal_ok(net, *adv, rig, 2, 0, 3);
  VssCommitment v = deal_ok(net, *adv, rig, 2, 1, 2);
  MultResult r = vss_mult(net, *adv, u, v);
  CHECK(!r.product.has_value());
  CHECK(r.cheaters == PlayerSet{2});
}

TEST_CASE("rows already public skip conversion and proof") {
  Rig rig;
  Network net(3, 39, NetOptions{false});
  Adversary adv;
  VssDealResult ru = vss_deal(net, adv, rig.msp, rig.ff, 2, 0, rig.msp.field().fe(3), {2});
  REQUIRE(ru.outcome == VssOutcome::success);
  VssCommitment v = deal_ok(net, adv, rig, 2, 1, 4);
  MultResult r = vss_mult(net, adv, *ru.commitment, v);
  REQUIRE(r.product.has_value());
  CHECK(r.cheaters.empty());
  // the public row needs no upgrade and its product needs no proof
  CHECK(net.stats().conversions == 5);
  CHECK(net.stats().cp_checks == 2);
  CHECK(vss_open(net, adv, *r.product) == rig.msp.field().fe(5));  // 12 mod 7
}

TEST_CASE("multiplication requires the recombination property") {
  Field ff(347, FieldRole::authentication);
  Msp wide = threshold_msp(3, 2, 7);  // 2t+1 > n: no recombination vector
  Network net(3, 41, NetOptions{false});
  Adversary adv;
  VssDealResult ru = vss_deal(net, adv, wide, ff, 1, 0, wide.field().fe(3));
  VssDealResult rv = vss_deal(net, adv, wide, ff, 1, 1, wide.field().fe(2));
  REQUIRE(ru.outcome == VssOutcome::success);
  REQUIRE(rv.outcome == VssOutcome::success);
  CHECK_THROWS_AS(vss_mult(net, adv, *ru.commitment, *rv.commitment), StructureViolation);
}
