#pragma once

#include <set>
#include <vector>

#include "q2mpc/errors.hpp"

namespace q2mpc {

using PlayerSet = std::set<int>;

// Monotone adversary structure given by its maximal sets (an antichain).
class AdversaryStructure {
 public:
  AdversaryStructure() = default;
  // Normalizes to an antichain; strict subsets of other sets are dropped and
  // counted so callers can warn about redundant input.
  AdversaryStructure(int n, std::vector<PlayerSet> maximal_sets);

  int n() const { return n_; }
  const std::vector<PlayerSet>& maximal() const { return maximal_; }
  int redundant_input_sets() const { return redundant_; }

  bool contains(const PlayerSet& b) const;

  // True iff no k maximal sets (chosen with repetition) union to all players.
  bool is_qk(int k) const;

  static AdversaryStructure threshold(int n, int t);

 private:
  int n_ = 0;
  std::vector<PlayerSet> maximal_;
  int redundant_ = 0;
};

}  // namespace q2mpc
