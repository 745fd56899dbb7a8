#pragma once

#include <optional>
#include <set>
#include <vector>

#include "q2mpc/field.hpp"
#include "q2mpc/rng.hpp"
#include "q2mpc/structures.hpp"

namespace q2mpc {

using Row = std::vector<Fel>;
using Matrix = std::vector<Row>;

// Solve A x = b over a prime field by Gaussian elimination. Pivot rule is
// fixed (first row with a nonzero entry, columns left to right) and free
// variables are set to zero, so the returned solution is deterministic.
// nullopt when the system is inconsistent.
std::optional<std::vector<Fel>> solve_linear(const Matrix& a, const std::vector<Fel>& b);

// Monotone span program (K, M, psi) with target vector (1,0,...,0).
class Msp {
 public:
  Msp(Field k, Matrix m, std::vector<int> owners, int n_players);

  const Field& field() const { return k_; }
  const Matrix& matrix() const { return m_; }
  const std::vector<int>& owners() const { return owners_; }
  int rows() const { return (int)m_.size(); }
  int cols() const { return e_; }
  int players() const { return n_; }

  std::vector<int> rows_of(int player) const;
  std::vector<int> rows_of(const PlayerSet& players) const;

  // True iff the target vector lies in the row span of B's rows.
  bool qualified(const PlayerSet& b) const;
  bool rejects(const AdversaryStructure& s) const;

  // Coefficients lambda over B's rows with sum lambda_l M_l = target.
  std::optional<std::vector<Fel>> reconstruction_vector(const PlayerSet& b) const;

  struct Sharing {
    std::vector<Fel> a_star;  // (a, rho_2..rho_e), dealer-private
    std::vector<Fel> alpha;   // all d row values
  };
  Sharing share(const Fel& a, const std::vector<Fel>& rho) const;
  Sharing share(const Fel& a, Rng& rng, Draw tag = Draw::top_rho) const;

  // Row values for a subset of rows; positions index into `row_ids`.
  Fel reconstruct(const std::vector<int>& row_ids, const std::vector<Fel>& values,
                  const PlayerSet& b) const;

  bool check_row(const std::vector<Fel>& a_star, int row, const Fel& value) const;
  Fel row_value(const std::vector<Fel>& a_star, int row) const;

  // r with <r, M b * M b'> = b_1 b'_1 for all b, b'; absent when the program
  // has no multiplication property.
  const std::optional<std::vector<Fel>>& recombination_vector() const { return recomb_; }

  // All-players qualified iff target reachable; sanity helper.
  bool surjective_owner_map() const;

 private:
  Field k_;
  Matrix m_;
  std::vector<int> owners_;
  int n_ = 0;
  int e_ = 0;
  std::optional<std::vector<Fel>> recomb_;
};

// Vandermonde construction: row i is (1, x_i, ..., x_i^t) with x_i = i+1,
// owner psi(i) = i. Requires q > n so the points are distinct and nonzero.
Msp threshold_msp(int n, int t, uint64_t q);

// Lexicographically smallest qualified subset of `available` (shorter prefix
// first), or nullopt. Drives the deterministic choice made at opens.
std::optional<PlayerSet> smallest_qualified(const Msp& msp, const PlayerSet& available);

}  // namespace q2mpc
