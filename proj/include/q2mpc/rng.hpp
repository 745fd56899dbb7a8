#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "q2mpc/field.hpp"

namespace q2mpc {

// Semantic tag attached to each draw. Protocol code labels what it samples so
// recorded traces can be transformed entry-wise by the secrecy tests.
enum class Draw {
  generic,
  top_rho,       // dealer randomness of a top-level sharing
  blind_secret,  // per-round blinding secret c^(j)
  blind_rho,     // randomness of a blinding sharing
  sub_rho,       // randomness of a player's sub-sharing (share commitment)
  gic_key,       // information-checking key y
  gic_mask,      // information-checking multiplier b
  gic_subset,    // intermediary's opened index subset
  coin,          // public challenge coin
  scalar,        // protocol-level scalar choice (e.g. product-proof blinder)
  guess,         // adversarial guessing draws
};

struct TraceEntry {
  enum Kind { uniform, nonzero, subset, coin, raw64 } kind = raw64;
  Draw tag = Draw::generic;
  uint64_t modulus = 0;            // for uniform / nonzero
  int k = 0, m = 0;                // for subset
  std::vector<uint64_t> values;    // drawn value(s)
};

class Rng {
 public:
  virtual ~Rng() = default;
  virtual uint64_t raw() = 0;

  virtual Fel uniform(const Field& f, Draw tag = Draw::generic) {
    (void)tag;
    return f.fe(raw() % f.modulus());
  }
  virtual Fel uniform_nonzero(const Field& f, Draw tag = Draw::generic) {
    (void)tag;
    return f.fe(1 + raw() % (f.modulus() - 1));
  }
  // Uniform k-subset of {0..m-1} as a sorted index list (Fisher-Yates prefix).
  virtual std::vector<int> ksubset(int k, int m, Draw tag = Draw::generic) {
    (void)tag;
    std::vector<int> arr(m);
    std::iota(arr.begin(), arr.end(), 0);
    for (int i = 0; i < k; ++i) {
      int j = i + (int)(raw() % (uint64_t)(m - i));
      std::swap(arr[i], arr[j]);
    }
    arr.resize(k);
    std::sort(arr.begin(), arr.end());
    return arr;
  }
  virtual int flip(Draw tag = Draw::coin) {
    (void)tag;
    return (int)(raw() & 1);
  }
};

// Counter-split deterministic generator; the master seed expands to
// independent per-party streams via splitmix64 of (seed, stream index).
class SplitMix final : public Rng {
 public:
  explicit SplitMix(uint64_t seed) : state_(seed) {}
  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }
  static uint64_t stream_seed(uint64_t master, uint64_t index) {
    return mix(master ^ mix(index + 0x632be59bd9b4e019ull));
  }
  uint64_t raw() override {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

 private:
  uint64_t state_;
};

// Wraps another generator and records every draw (post-reduction values).
class RecordingRng final : public Rng {
 public:
  RecordingRng(std::unique_ptr<Rng> inner, std::vector<TraceEntry>* out)
      : inner_(std::move(inner)), out_(out) {}
  uint64_t raw() override {
    uint64_t v = inner_->raw();
    out_->push_back({TraceEntry::raw64, Draw::generic, 0, 0, 0, {v}});
    return v;
  }
  Fel uniform(const Field& f, Draw tag = Draw::generic) override {
    Fel v = inner_->uniform(f, tag);
    out_->push_back({TraceEntry::uniform, tag, f.modulus(), 0, 0, {v.v}});
    return v;
  }
  Fel uniform_nonzero(const Field& f, Draw tag = Draw::generic) override {
    Fel v = inner_->uniform_nonzero(f, tag);
    out_->push_back({TraceEntry::nonzero, tag, f.modulus(), 0, 0, {v.v}});
    return v;
  }
  std::vector<int> ksubset(int k, int m, Draw tag = Draw::generic) override {
    std::vector<int> v = inner_->ksubset(k, m, tag);
    TraceEntry e{TraceEntry::subset, tag, 0, k, m, {}};
    for (int i : v) e.values.push_back((uint64_t)i);
    out_->push_back(std::move(e));
    return v;
  }
  int flip(Draw tag = Draw::coin) override {
    int b = inner_->flip(tag);
    out_->push_back({TraceEntry::coin, tag, 0, 0, 0, {(uint64_t)b}});
    return b;
  }

 private:
  std::unique_ptr<Rng> inner_;
  std::vector<TraceEntry>* out_;
};

// Replays a recorded (possibly transformed) trace. Kind/modulus mismatches and
// exhaustion throw, which catches any control-flow divergence between runs.
class ReplayRng final : public Rng {
 public:
  explicit ReplayRng(std::vector<TraceEntry> entries) : entries_(std::move(entries)) {}

  uint64_t raw() override { return take(TraceEntry::raw64, 0).values.at(0); }
  Fel uniform(const Field& f, Draw = Draw::generic) override {
    return {take(TraceEntry::uniform, f.modulus()).values.at(0) % f.modulus(), f.modulus()};
  }
  Fel uniform_nonzero(const Field& f, Draw = Draw::generic) override {
    uint64_t v = take(TraceEntry::nonzero, f.modulus()).values.at(0);
    if (v == 0 || v >= f.modulus()) throw ReplayExhausted("nonzero replay value out of range");
    return {v, f.modulus()};
  }
  std::vector<int> ksubset(int k, int m, Draw = Draw::generic) override {
    const TraceEntry& e = take(TraceEntry::subset, 0);
    if (e.k != k || e.m != m) throw ReplayExhausted("subset replay shape mismatch");
    std::vector<int> out;
    for (uint64_t v : e.values) out.push_back((int)v);
    return out;
  }
  int flip(Draw = Draw::coin) override { return (int)take(TraceEntry::coin, 0).values.at(0); }

  bool exhausted() const { return pos_ == entries_.size(); }

 private:
  const TraceEntry& take(TraceEntry::Kind kind, uint64_t modulus) {
    if (pos_ >= entries_.size()) throw ReplayExhausted();
    const TraceEntry& e = entries_[pos_++];
    if (e.kind != kind) throw ReplayExhausted("replay kind mismatch");
    if (modulus != 0 && e.modulus != modulus) throw ReplayExhausted("replay modulus mismatch");
    return e;
  }

  std::vector<TraceEntry> entries_;
  size_t pos_ = 0;
};

}  // namespace q2mpc
