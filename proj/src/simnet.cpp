#include "q2mpc/simnet.hpp"

#include <algorithm>
#include <sstream>

namespace q2mpc {

namespace {

void put_fel(std::ostringstream& os, const Fel& f) { os << f.v; }

void put_fels(std::ostringstream& os, const std::vector<Fel>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    put_fel(os, v[i]);
  }
  os << ']';
}

void put_rows(std::ostringstream& os, const std::vector<RowShare>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i].row << ':' << v[i].value.v;
  }
  os << ']';
}

void put_pairs(std::ostringstream& os, const std::vector<CheckPair>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << '(' << v[i].b.v << ',' << v[i].c.v << ')';
  }
  os << ']';
}

struct PayloadPrinter {
  std::ostringstream& os;
  void operator()(const TestPing& p) { os << "ping " << p.value; }
  void operator()(const ShareDeal& p) {
    os << "share-deal ";
    put_rows(os, p.rows);
  }
  void operator()(const GicDeal& p) {
    os << "gic-deal s=" << p.secret.v << " y=";
    put_fels(os, p.keys);
  }
  void operator()(const GicChecks& p) {
    os << "gic-checks ";
    put_pairs(os, p.pairs);
  }
  void operator()(const GicIndexSet& p) {
    os << "gic-open-set [";
    for (size_t i = 0; i < p.indices.size(); ++i) os << (i ? "," : "") << p.indices[i];
    os << ']';
  }
  void operator()(const GicOpened& p) {
    os << "gic-opened ";
    put_pairs(os, p.pairs);
  }
  void operator()(const GicVerdict& p) { os << "gic-dealer-" << (p.approved ? "ok" : "dispute"); }
  void operator()(const GicFresh& p) {
    os << "gic-fresh (" << p.pair.b.v << ',' << p.pair.c.v << ')';
  }
  void operator()(const GicFreshKey& p) { os << "gic-fresh-key " << p.key.v; }
  void operator()(const GicIntVerdict& p) { os << "gic-int-" << (p.approved ? "ok" : "demand"); }
  void operator()(const GicPublish& p) { os << "gic-publish " << p.secret.v; }
  void operator()(const GicAuthValue& p) {
    os << "auth s=" << p.claimed.v << (p.single ? " single y=" : " y=");
    put_fels(os, p.keys);
  }
  void operator()(const WssAuthShares& p) {
    os << "auth-shares P" << p.owner << ' ';
    put_rows(os, p.rows);
    os << (p.single ? " single y=" : " y=");
    put_fels(os, p.keys);
  }
  void operator()(const OpenVector& p) {
    os << "open-vector ";
    put_fels(os, p.coords);
  }
  void operator()(const Accusation& p) { os << "accuse P" << p.accused; }
  void operator()(const CoinFlip& p) { os << "coin " << (p.bit ? "heads" : "tails"); }
  void operator()(const BroadcastShares& p) {
    os << "published-shares P" << p.subject << " a=";
    put_rows(os, p.alpha);
    os << " g=[";
    for (size_t i = 0; i < p.gammas.size(); ++i) {
      if (i) os << ';';
      put_rows(os, p.gammas[i]);
    }
    os << ']';
  }
  void operator()(const PublicValue& p) { os << "public " << p.label << '=' << p.value.v; }
};

}  // namespace

std::string to_string(const Payload& p) {
  std::ostringstream os;
  std::visit(PayloadPrinter{os}, p);
  return os.str();
}

std::string to_string(const Message& m) {
  std::ostringstream os;
  os << "r" << m.round << " P" << m.sender;
  if (m.channel == Channel::broadcast)
    os << " * ";
  else
    os << " >P" << m.receiver << ' ';
  os << 'i' << m.instance << ' ';
  std::visit(PayloadPrinter{os}, m.payload);
  return os.str();
}

std::string to_string(const Transcript& t) {
  std::ostringstream os;
  os << "seed " << t.master_seed << " n " << t.n << '\n';
  os << "streams";
  for (uint64_t s : t.stream_seeds) os << ' ' << s;
  os << '\n';
  for (const Message& m : t.messages) os << to_string(m) << '\n';
  for (const Annotation& a : t.annotations)
    os << "@r" << a.round << ' ' << a.kind << " P" << a.party << ' ' << a.text << '\n';
  return os.str();
}

std::string to_string(const View& v) {
  std::ostringstream os;
  os << "streams";
  for (uint64_t s : v.stream_seeds) os << ' ' << s;
  os << '\n';
  for (const Message& m : v.received) os << to_string(m) << '\n';
  for (const Annotation& a : v.inputs) os << "input P" << a.party << ' ' << a.text << '\n';
  return os.str();
}

View view_of(const Transcript& t, const PlayerSet& b) {
  View v;
  for (int p : b) {
    if (p < 0 || p >= t.n) throw PlayerOutOfRange();
    v.stream_seeds.push_back(t.stream_seeds[(size_t)p]);
  }
  for (const Message& m : t.messages) {
    if (m.channel == Channel::broadcast || b.count(m.receiver)) v.received.push_back(m);
  }
  for (const Annotation& a : t.annotations) {
    if (a.kind == "input" && b.count(a.party)) v.inputs.push_back(a);
  }
  return v;
}

// --- network ------------------------------------------------------------

Network::Network(int n, uint64_t master_seed, const NetOptions& opts) : n_(n), opts_(opts) {
  if (n < 2) throw PlayerCountMismatch("simulation needs at least two parties");
  log_.master_seed = master_seed;
  log_.n = n;
  for (int p = 0; p < n; ++p) {
    uint64_t s = SplitMix::stream_seed(master_seed, (uint64_t)p);
    seeds_.push_back(s);
    streams_.push_back(std::make_unique<SplitMix>(s));
  }
  log_.stream_seeds = seeds_;
}

void Network::check_party(int p) const {
  if (p < 0 || p >= n_) throw PlayerOutOfRange("party " + std::to_string(p));
}

Rng& Network::rng(int p) {
  check_party(p);
  return *streams_[(size_t)p];
}

void Network::set_rng(int p, std::unique_ptr<Rng> r) {
  check_party(p);
  streams_[(size_t)p] = std::move(r);
}

uint64_t Network::stream_seed(int p) const {
  check_party(p);
  return seeds_[(size_t)p];
}

void Network::send(int from, int to, Payload p) {
  check_party(from);
  check_party(to);
  pending_.push_back({round_, from, Channel::private_msg, to, instance_, std::move(p)});
  ++stats_.messages;
}

void Network::broadcast(int from, Payload p) {
  check_party(from);
  pending_.push_back({round_, from, Channel::broadcast, -1, instance_, std::move(p)});
  ++stats_.messages;
}

void Network::next_round() {
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Message& a, const Message& b) { return a.sender < b.sender; });
  if (opts_.record) {
    for (Message& m : pending_) log_.messages.push_back(std::move(m));
  }
  pending_.clear();
  ++round_;
  stats_.rounds = round_;
}

void Network::annotate(const std::string& kind, int party, const std::string& text) {
  if (opts_.record) log_.annotations.push_back({round_, kind, party, text});
}

// --- adversary scripts --------------------------------------------------

AdversaryScript parse_strategy(const std::string& text) {
  AdversaryScript s;
  std::string name = text;
  std::string rest;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    rest = text.substr(colon + 1);
  }
  s.name = name;
  const auto known = strategy_registry();
  if (std::find(known.begin(), known.end(), name) == known.end())
    throw ParseError("unknown adversary strategy '" + name + "'", 0);
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t comma = rest.find(',', pos);
    std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        s.params[item] = "";
      else
        s.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return s;
}

std::vector<std::string> strategy_registry() {
  return {"honest",
          "inconsistent_wss_dealer",
          "inconsistent_vss_dealer",
          "forging_intermediary",
          "wrong_product_dealer",
          "refuse_conversion",
          "lying_opener"};
}

namespace {

int param_int(const AdversaryScript& s, const std::string& key, int fallback) {
  auto it = s.params.find(key);
  if (it == s.params.end()) return fallback;
  return std::stoi(it->second);
}

// First row owned by the lowest-indexed honest player.
int default_low_row(const Adversary& adv, const Msp& msp) {
  for (int p = 0; p < msp.players(); ++p) {
    if (adv.is_corrupt(p)) continue;
    auto rs = msp.rows_of(p);
    if (!rs.empty()) return rs.front();
  }
  return 0;
}

// Last row owned by the lowest-indexed honest player; with multi-row owners
// this perturbs inside one player's row block.
int default_high_row(const Adversary& adv, const Msp& msp) {
  for (int p = 0; p < msp.players(); ++p) {
    if (adv.is_corrupt(p)) continue;
    auto rs = msp.rows_of(p);
    if (!rs.empty()) return rs.back();
  }
  return 0;
}

struct ScriptedAdversary final : Adversary {
  AdversaryScript script;

  explicit ScriptedAdversary(AdversaryScript s) : script(std::move(s)) {
    corrupt = script.corrupt;
    rushing = script.rushing;
    overpowered = script.overpowered;
  }

  void tamper_dealt(int dealer, DealKind kind, int blind_round, const Msp& msp,
                    std::vector<Fel>& alpha) override {
    (void)blind_round;
    if (!is_corrupt(dealer)) return;
    const Field& k = msp.field();
    if (script.name == "inconsistent_wss_dealer" && kind == DealKind::wss) {
      int row = param_int(script, "row", default_low_row(*this, msp));
      alpha[(size_t)row] = alpha[(size_t)row] + k.one();
    } else if (script.name == "inconsistent_vss_dealer") {
      int row = param_int(script, "row", default_high_row(*this, msp));
      if (kind == DealKind::vss_top) {
        alpha[(size_t)row] = alpha[(size_t)row] + k.one();
      } else if (kind == DealKind::vss_blind) {
        // tails-ready: blinding compensates the top-level perturbation
        alpha[(size_t)row] = alpha[(size_t)row] - k.one();
      }
    }
  }

  std::optional<int> bias_coin(int flipper) override {
    if (!is_corrupt(flipper)) return std::nullopt;
    if (script.name == "inconsistent_vss_dealer") return 0;  // tails
    return std::nullopt;
  }

  void tamper_open_vector(int dealer, const Msp& msp, std::vector<Fel>& a_star) override {
    if (!is_corrupt(dealer)) return;
    if (script.name == "lying_opener") a_star[0] = a_star[0] + msp.field().one();
  }

  void forge_auth_value(int inter, const Field& f, Fel& claimed, std::vector<Fel>& keys,
                        Rng& rng) override {
    if (!is_corrupt(inter) || script.name != "forging_intermediary") return;
    Fel delta = f.one();
    claimed = claimed + delta;
    if (script.params.count("naive")) return;
    for (Fel& y : keys) {
      Fel guess = rng.uniform_nonzero(f, Draw::guess);
      y = y - delta / guess;
    }
  }

  void forge_auth_rows(int inter, const Field& fk, const Field& ff, std::vector<RowShare>& rows,
                       std::vector<Fel>& keys, Rng& rng) override {
    if (!is_corrupt(inter) || script.name != "forging_intermediary") return;
    if (rows.empty()) return;
    std::vector<Fel> before, after;
    for (const RowShare& r : rows) before.push_back(r.value);
    rows[0].value = rows[0].value + fk.one();
    for (const RowShare& r : rows) after.push_back(r.value);
    Fel delta = encode_shares(after, ff) - encode_shares(before, ff);
    if (script.params.count("naive")) return;
    for (Fel& y : keys) {
      Fel guess = rng.uniform_nonzero(ff, Draw::guess);
      y = y - delta / guess;
    }
  }

  bool refuse_conversion(int dealer) override {
    return is_corrupt(dealer) && script.name == "refuse_conversion";
  }

  Fel product_value(int owner, int row, const Fel& truth) override {
    if (!is_corrupt(owner) || script.name != "wrong_product_dealer") return truth;
    int target = param_int(script, "row", -1);
    if (target >= 0 && row != target) return truth;
    return truth + Fel{1 % truth.q, truth.q};
  }
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const AdversaryScript& script) {
  return std::make_unique<ScriptedAdversary>(script);
}

// --- machine runner -----------------------------------------------------

Transcript run_protocol(std::vector<std::unique_ptr<PartyMachine>>& parties, const Adversary& adv,
                        uint64_t seed, int max_rounds) {
  const int n = (int)parties.size();
  Network net(n, seed);
  std::vector<std::vector<Message>> inbox((size_t)n);
  for (int round = 0; round < max_rounds; ++round) {
    bool all_done = true;
    for (const auto& p : parties) all_done = all_done && p->done();
    if (all_done) break;

    auto deliver_turn = [&](int p, bool peek) {
      if (parties[(size_t)p]->done()) return;
      std::vector<Message> in = inbox[(size_t)p];
      if (peek) {
        for (const Message& m : net.pending()) {
          if (!adv.is_corrupt(m.sender) &&
              (m.channel == Channel::broadcast || m.receiver == p))
            in.push_back(m);
        }
      }
      parties[(size_t)p]->on_round(net, p, round, in);
    };
    if (adv.rushing) {
      for (int p = 0; p < n; ++p)
        if (!adv.is_corrupt(p)) deliver_turn(p, false);
      for (int p = 0; p < n; ++p)
        if (adv.is_corrupt(p)) deliver_turn(p, true);
    } else {
      for (int p = 0; p < n; ++p) deliver_turn(p, false);
    }

    size_t already = net.transcript().messages.size();
    net.next_round();
    for (auto& box : inbox) box.clear();
    const auto& all = net.transcript().messages;
    for (size_t i = already; i < all.size(); ++i) {
      const Message& m = all[i];
      if (m.channel == Channel::broadcast) {
        for (int p = 0; p < n; ++p) inbox[(size_t)p].push_back(m);
      } else {
        inbox[(size_t)m.receiver].push_back(m);
      }
    }
  }
  return net.transcript();
}

}  // namespace q2mpc
