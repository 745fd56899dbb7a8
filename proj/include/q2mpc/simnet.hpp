#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "q2mpc/msp.hpp"
#include "q2mpc/rng.hpp"
#include "q2mpc/structures.hpp"

namespace q2mpc {

struct RowShare {
  int row = 0;
  Fel value;
  friend bool operator==(const RowShare& a, const RowShare& b) {
    return a.row == b.row && a.value == b.value;
  }
};

struct CheckPair {
  Fel b, c;
  friend bool operator==(const CheckPair& x, const CheckPair& y) {
    return x.b == y.b && x.c == y.c;
  }
};

// --- message payloads ---------------------------------------------------

struct TestPing { uint64_t value = 0; };
struct ShareDeal { std::vector<RowShare> rows; };
struct GicDeal { Fel secret; std::vector<Fel> keys; };
struct GicChecks { std::vector<CheckPair> pairs; };
struct GicIndexSet { std::vector<int> indices; };
struct GicOpened { std::vector<int> indices; std::vector<CheckPair> pairs; };
struct GicVerdict { bool approved = true; };
struct GicFresh { CheckPair pair; };
struct GicFreshKey { Fel key; };
struct GicIntVerdict { bool approved = true; };
struct GicPublish { Fel secret; };
struct GicAuthValue { Fel claimed; std::vector<Fel> keys; bool single = false; };
struct WssAuthShares { int owner = 0; std::vector<RowShare> rows; std::vector<Fel> keys; bool single = false; };
struct OpenVector { std::vector<Fel> coords; };
struct Accusation { int accused = 0; };
struct CoinFlip { int bit = 0; };  // 1 = heads (open the blinding), 0 = tails
struct BroadcastShares {
  int subject = 0;
  std::vector<RowShare> alpha;
  std::vector<std::vector<RowShare>> gammas;  // per challenge round
};
struct PublicValue { std::string label; Fel value; };

using Payload =
    std::variant<TestPing, ShareDeal, GicDeal, GicChecks, GicIndexSet, GicOpened, GicVerdict,
                 GicFresh, GicFreshKey, GicIntVerdict, GicPublish, GicAuthValue, WssAuthShares,
                 OpenVector, Accusation, CoinFlip, BroadcastShares, PublicValue>;

enum class Channel { private_msg, broadcast };

struct Message {
  int round = 0;
  int sender = 0;
  Channel channel = Channel::broadcast;
  int receiver = -1;  // meaningful for private_msg
  int instance = 0;   // protocol instance tag
  Payload payload;
};

struct Annotation {
  int round = 0;
  std::string kind;
  int party = -1;  // -1: public event
  std::string text;
};

struct Transcript {
  uint64_t master_seed = 0;
  int n = 0;
  std::vector<uint64_t> stream_seeds;
  std::vector<Message> messages;
  std::vector<Annotation> annotations;
};

struct View {
  std::vector<Message> received;
  std::vector<uint64_t> stream_seeds;
  std::vector<Annotation> inputs;
};

std::string to_string(const Payload& p);
std::string to_string(const Message& m);
std::string to_string(const Transcript& t);
std::string to_string(const View& v);

// Messages received by coalition B: private messages addressed to a member
// plus every broadcast; plus B's stream seeds and B's input annotations.
View view_of(const Transcript& t, const PlayerSet& b);

struct Stats {
  long long messages = 0, rounds = 0;
  long long gic_generates = 0, gic_auths = 0;
  long long wss_commits = 0, wss_opens = 0, wss_adds = 0, wss_proofs = 0;
  long long vss_deals = 0, vss_opens = 0, conversions = 0;
  long long cp_checks = 0, mults = 0, restarts = 0;
  // subprotocol instances whose failure probability is bounded by 2^-k
  long long bounded_events = 0;
};

// --- adversary ----------------------------------------------------------

struct AdversaryScript {
  std::string name = "honest";
  std::map<std::string, std::string> params;
  PlayerSet corrupt;
  bool rushing = true;
  bool overpowered = false;
};

// "name" or "name:key=val,key=val"
AdversaryScript parse_strategy(const std::string& text);
std::vector<std::string> strategy_registry();

class Adversary {
 public:
  PlayerSet corrupt;
  bool rushing = true;
  bool overpowered = false;

  virtual ~Adversary() = default;
  bool is_corrupt(int p) const { return corrupt.count(p) > 0; }

  enum class DealKind { wss, vss_top, vss_blind };

  // Perturb the row values a corrupt dealer hands out.
  virtual void tamper_dealt(int dealer, DealKind kind, int blind_round, const Msp& msp,
                            std::vector<Fel>& alpha) {
    (void)dealer; (void)kind; (void)blind_round; (void)msp; (void)alpha;
  }
  // Forced outcome for a corrupt flipper's public coin.
  virtual std::optional<int> bias_coin(int flipper) {
    (void)flipper;
    return std::nullopt;
  }
  // Perturb the vector a corrupt dealer broadcasts when opening.
  virtual void tamper_open_vector(int dealer, const Msp& msp, std::vector<Fel>& a_star) {
    (void)dealer; (void)msp; (void)a_star;
  }
  // Corrupt D skewing the initial triples (keys/pairs/what INT is told).
  virtual void tamper_gic_deal(int dealer, const Field& f, Fel& s_for_int, std::vector<Fel>& keys,
                               std::vector<CheckPair>& pairs) {
    (void)dealer; (void)f; (void)s_for_int; (void)keys; (void)pairs;
  }
  // Corrupt R lying when broadcasting the opened check pairs.
  virtual void tamper_gic_open(int recipient, std::vector<CheckPair>& opened) {
    (void)recipient; (void)opened;
  }
  // Corrupt D issuing an inconsistent replacement triple.
  virtual void tamper_gic_fresh(int dealer, const Field& f, Fel& key, CheckPair& pair) {
    (void)dealer; (void)f; (void)key; (void)pair;
  }
  virtual bool gic_force_dispute(int dealer) { (void)dealer; return false; }
  virtual bool gic_int_refuse(int inter) { (void)inter; return false; }
  virtual bool gic_refuse_publish(int dealer) { (void)dealer; return false; }
  // Corrupt dealer answering an accusation with fabricated-but-consistent data.
  virtual bool vss_lie_on_accusation(int dealer) { (void)dealer; return false; }
  // Corrupt prover's choice of the blinded product commitment (default a * b').
  virtual std::optional<Fel> cp_blind_product(int dealer, const Fel& a, const Fel& b, const Fel& c,
                                              const Fel& bprime) {
    (void)dealer; (void)a; (void)b; (void)c; (void)bprime;
    return std::nullopt;
  }
  // Corrupt intermediary rewriting what it authenticates (value form).
  virtual void forge_auth_value(int inter, const Field& f, Fel& claimed, std::vector<Fel>& keys,
                                Rng& rng) {
    (void)inter; (void)f; (void)claimed; (void)keys; (void)rng;
  }
  // Same, share-vector form; delta must be applied consistently to the keys.
  virtual void forge_auth_rows(int inter, const Field& fk, const Field& ff,
                               std::vector<RowShare>& rows, std::vector<Fel>& keys, Rng& rng) {
    (void)inter; (void)fk; (void)ff; (void)rows; (void)keys; (void)rng;
  }
  virtual bool refuse_conversion(int dealer) { (void)dealer; return false; }
  virtual Fel product_value(int owner, int row, const Fel& truth) {
    (void)owner; (void)row;
    return truth;
  }
};

std::unique_ptr<Adversary> make_adversary(const AdversaryScript& script);

// --- network ------------------------------------------------------------

struct NetOptions {
  bool record = true;
};

class Network {
 public:
  Network(int n, uint64_t master_seed, const NetOptions& opts = {});

  int n() const { return n_; }
  int round() const { return round_; }
  bool recording() const { return opts_.record; }

  Rng& rng(int p);
  void set_rng(int p, std::unique_ptr<Rng> r);  // test hook
  uint64_t stream_seed(int p) const;

  void send(int from, int to, Payload p);
  void broadcast(int from, Payload p);
  void next_round();  // sorts the round's traffic by sender and seals it

  void annotate(const std::string& kind, int party, const std::string& text);

  int new_instance() { return ++last_instance_; }
  void set_instance(int id) { instance_ = id; }
  int instance() const { return instance_; }

  const Transcript& transcript() const { return log_; }
  // Pending (unsealed) traffic of the current round; rushing peek support.
  const std::vector<Message>& pending() const { return pending_; }

  Stats& stats() { return stats_; }
  const Stats& stats() const { return stats_; }

 private:
  void check_party(int p) const;

  int n_;
  NetOptions opts_;
  int round_ = 0;
  int instance_ = 0;
  int last_instance_ = 0;
  std::vector<std::unique_ptr<Rng>> streams_;
  std::vector<uint64_t> seeds_;
  std::vector<Message> pending_;
  Transcript log_;
  Stats stats_;
};

// --- generic machine runner --------------------------------------------

class PartyMachine {
 public:
  virtual ~PartyMachine() = default;
  virtual void on_round(Network& net, int self, int round, const std::vector<Message>& inbox) = 0;
  virtual bool done() const = 0;
};

// Runs machines in lockstep rounds until all report done (or max_rounds).
// With adv.rushing, corrupt machines act after honest ones each round and
// additionally see the honest traffic already addressed to them that round.
Transcript run_protocol(std::vector<std::unique_ptr<PartyMachine>>& parties, const Adversary& adv,
                        uint64_t seed, int max_rounds = 64);

}  // namespace q2mpc
