#include "q2mpc/structures.hpp"

#include <algorithm>

namespace q2mpc {

namespace {

bool subset_of(const PlayerSet& a, const PlayerSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

AdversaryStructure::AdversaryStructure(int n, std::vector<PlayerSet> maximal_sets) : n_(n) {
  if (n < 1) throw PlayerCountMismatch("structure needs at least one player");
  for (const PlayerSet& s : maximal_sets) {
    for (int p : s) {
      if (p < 0 || p >= n) throw PlayerOutOfRange("player index outside 0..n-1 in structure");
    }
  }
  // Deduplicate, then drop strict subsets.
  std::sort(maximal_sets.begin(), maximal_sets.end());
  maximal_sets.erase(std::unique(maximal_sets.begin(), maximal_sets.end()), maximal_sets.end());
  for (size_t i = 0; i < maximal_sets.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < maximal_sets.size() && !dominated; ++j) {
      if (i != j && maximal_sets[i] != maximal_sets[j] && subset_of(maximal_sets[i], maximal_sets[j]))
        dominated = true;
    }
    if (dominated)
      ++redundant_;
    else
      maximal_.push_back(maximal_sets[i]);
  }
  if (maximal_.empty()) maximal_.push_back({});  // the empty coalition is always tolerated
}

bool AdversaryStructure::contains(const PlayerSet& b) const {
  for (int p : b) {
    if (p < 0 || p >= n_) throw PlayerOutOfRange();
  }
  for (const PlayerSet& m : maximal_) {
    if (subset_of(b, m)) return true;
  }
  return false;
}

bool AdversaryStructure::is_qk(int k) const {
  // Walk k-combinations with repetition of the maximal sets; reject if any
  // union covers every player.
  std::vector<int> pick((size_t)k, 0);
  const int m = (int)maximal_.size();
  while (true) {
    PlayerSet u;
    for (int idx : pick) u.insert(maximal_[idx].begin(), maximal_[idx].end());
    if ((int)u.size() == n_) return false;
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == m - 1) --pos;
    if (pos < 0) break;
    int next = pick[pos] + 1;
    for (int i = pos; i < k; ++i) pick[i] = next;
  }
  return true;
}

AdversaryStructure AdversaryStructure::threshold(int n, int t) {
  if (t < 0 || t >= n) throw PlayerCountMismatch("threshold t must satisfy 0 <= t < n");
  std::vector<PlayerSet> sets;
  std::vector<int> idx(t);
  if (t == 0) {
    sets.push_back({});
  } else {
    // all t-subsets of {0..n-1}
    for (int i = 0; i < t; ++i) idx[i] = i;
    while (true) {
      sets.emplace_back(idx.begin(), idx.end());
      int pos = t - 1;
      while (pos >= 0 && idx[pos] == n - t + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < t; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return AdversaryStructure(n, std::move(sets));
}

}  // namespace q2mpc
