#include "q2mpc/msp.hpp"

#include <algorithm>
#include <map>

namespace q2mpc {

std::optional<std::vector<Fel>> solve_linear(const Matrix& a, const std::vector<Fel>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("matrix/vector row counts differ");
  const int rows = (int)a.size();
  const int cols = rows == 0 ? 0 : (int)a[0].size();
  for (const Row& r : a) {
    if ((int)r.size() != cols) throw DimensionMismatch("ragged matrix");
  }
  Matrix m = a;
  std::vector<Fel> rhs = b;

  std::vector<int> pivot_col_of_row(rows, -1);
  int pivot_row = 0;
  for (int col = 0; col < cols && pivot_row < rows; ++col) {
    int sel = -1;
    for (int r = pivot_row; r < rows; ++r) {
      if (m[r][col].v != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(m[sel], m[pivot_row]);
    std::swap(rhs[sel], rhs[pivot_row]);
    Fel piv_inv = inv(m[pivot_row][col]);
    for (int c = col; c < cols; ++c) m[pivot_row][c] = m[pivot_row][c] * piv_inv;
    rhs[pivot_row] = rhs[pivot_row] * piv_inv;
    for (int r = pivot_row + 1; r < rows; ++r) {
      if (m[r][col].v == 0) continue;
      Fel f = m[r][col];
      for (int c = col; c < cols; ++c) m[r][c] = m[r][c] - f * m[pivot_row][c];
      rhs[r] = rhs[r] - f * rhs[pivot_row];
    }
    pivot_col_of_row[pivot_row] = col;
    ++pivot_row;
  }
  for (int r = pivot_row; r < rows; ++r) {
    if (rhs[r].v != 0) return std::nullopt;
  }
  // Back-substitute; free variables stay zero.
  std::vector<Fel> x;
  if (cols > 0) x.assign((size_t)cols, Fel{0, m[0][0].q});
  for (int r = pivot_row - 1; r >= 0; --r) {
    int pc = pivot_col_of_row[r];
    Fel acc = rhs[r];
    for (int c = pc + 1; c < cols; ++c) acc = acc - m[r][c] * x[c];
    x[pc] = acc;
  }
  return x;
}

Msp::Msp(Field k, Matrix m, std::vector<int> owners, int n_players)
    : k_(std::move(k)), m_(std::move(m)), owners_(std::move(owners)), n_(n_players) {
  if (m_.empty()) throw DimensionMismatch("span program needs at least one row");
  e_ = (int)m_[0].size();
  if (e_ < 1) throw DimensionMismatch("span program needs at least one column");
  for (const Row& r : m_) {
    if ((int)r.size() != e_) throw DimensionMismatch("ragged span program matrix");
    for (const Fel& x : r) {
      if (x.q != k_.modulus()) throw MismatchedFields();
    }
  }
  if (owners_.size() != m_.size()) throw DimensionMismatch("owner map must label every row");
  std::vector<bool> seen((size_t)n_, false);
  for (int o : owners_) {
    if (o < 0 || o >= n_) throw PlayerOutOfRange("row owner outside 0..n-1");
    seen[(size_t)o] = true;
  }
  for (bool s : seen) {
    if (!s) throw PlayerCountMismatch("owner map must be surjective");
  }

  // Multiplication property: r with sum_l r_l M_lj M_lk = [j=k=1].
  const int d = rows();
  Matrix sys;
  std::vector<Fel> rhs;
  for (int j = 0; j < e_; ++j) {
    for (int c = 0; c < e_; ++c) {
      Row row;
      row.reserve((size_t)d);
      for (int l = 0; l < d; ++l) row.push_back(m_[l][j] * m_[l][c]);
      sys.push_back(std::move(row));
      rhs.push_back(k_.fe(j == 0 && c == 0 ? 1 : 0));
    }
  }
  recomb_ = solve_linear(sys, rhs);
}

std::vector<int> Msp::rows_of(int player) const {
  if (player < 0 || player >= n_) throw PlayerOutOfRange();
  std::vector<int> out;
  for (int l = 0; l < rows(); ++l) {
    if (owners_[l] == player) out.push_back(l);
  }
  return out;
}

std::vector<int> Msp::rows_of(const PlayerSet& players) const {
  std::vector<int> out;
  for (int l = 0; l < rows(); ++l) {
    if (players.count(owners_[l])) out.push_back(l);
  }
  return out;
}

std::optional<std::vector<Fel>> Msp::reconstruction_vector(const PlayerSet& b) const {
  std::vector<int> rs = rows_of(b);
  Matrix sys;
  std::vector<Fel> rhs;
  for (int j = 0; j < e_; ++j) {
    Row row;
    for (int l : rs) row.push_back(m_[l][j]);
    sys.push_back(std::move(row));
    rhs.push_back(k_.fe(j == 0 ? 1 : 0));
  }
  return solve_linear(sys, rhs);
}

bool Msp::qualified(const PlayerSet& b) const { return reconstruction_vector(b).has_value(); }

bool Msp::rejects(const AdversaryStructure& s) const {
  if (s.n() != n_) throw PlayerCountMismatch("structure and span program disagree on n");
  for (const PlayerSet& m : s.maximal()) {
    if (qualified(m)) return false;
  }
  return true;
}

Msp::Sharing Msp::share(const Fel& a, const std::vector<Fel>& rho) const {
  if (a.q != k_.modulus()) throw MismatchedFields();
  if ((int)rho.size() != e_ - 1) throw DimensionMismatch("need e-1 randomness values");
  Sharing s;
  s.a_star.push_back(a);
  for (const Fel& r : rho) {
    if (r.q != k_.modulus()) throw MismatchedFields();
    s.a_star.push_back(r);
  }
  for (int l = 0; l < rows(); ++l) s.alpha.push_back(row_value(s.a_star, l));
  return s;
}

Msp::Sharing Msp::share(const Fel& a, Rng& rng, Draw tag) const {
  std::vector<Fel> rho;
  for (int i = 1; i < e_; ++i) rho.push_back(rng.uniform(k_, tag));
  return share(a, rho);
}

Fel Msp::reconstruct(const std::vector<int>& row_ids, const std::vector<Fel>& values,
                     const PlayerSet& b) const {
  if (row_ids.size() != values.size()) throw DimensionMismatch();
  auto lambda = reconstruction_vector(b);
  if (!lambda) throw Unqualified("set cannot reconstruct under this span program");
  std::map<int, Fel> have;
  for (size_t i = 0; i < row_ids.size(); ++i) have.emplace(row_ids[i], values[i]);
  std::vector<int> rs = rows_of(b);
  Fel acc = k_.zero();
  for (size_t i = 0; i < rs.size(); ++i) {
    auto it = have.find(rs[i]);
    if (it == have.end()) throw MissingShare("no value for row " + std::to_string(rs[i]));
    acc = acc + (*lambda)[i] * it->second;
  }
  return acc;
}

Fel Msp::row_value(const std::vector<Fel>& a_star, int row) const {
  if (row < 0 || row >= rows()) throw DimensionMismatch("row out of range");
  if ((int)a_star.size() != e_) throw DimensionMismatch("extended secret must have e entries");
  Fel acc = k_.zero();
  for (int c = 0; c < e_; ++c) acc = acc + m_[row][c] * a_star[c];
  return acc;
}

bool Msp::check_row(const std::vector<Fel>& a_star, int row, const Fel& value) const {
  return row_value(a_star, row) == value;
}

bool Msp::surjective_owner_map() const { return true; }  // enforced at construction

Msp threshold_msp(int n, int t, uint64_t q) {
  if (n < 1 || t < 0 || t >= n) throw PlayerCountMismatch("need 0 <= t < n");
  Field k(q);
  if (q <= (uint64_t)n) throw FieldTooSmallForPoints("need q > n distinct nonzero points");
  Matrix m;
  std::vector<int> owners;
  for (int i = 0; i < n; ++i) {
    Fel x = k.fe((uint64_t)i + 1);
    Row row;
    Fel p = k.one();
    for (int c = 0; c <= t; ++c) {
      row.push_back(p);
      p = p * x;
    }
    m.push_back(std::move(row));
    owners.push_back(i);
  }
  return Msp(std::move(k), std::move(m), std::move(owners), n);
}

std::optional<PlayerSet> smallest_qualified(const Msp& msp, const PlayerSet& available) {
  std::vector<int> avail(available.begin(), available.end());
  const int n = (int)avail.size();
  if (n > 20) throw DimensionMismatch("subset search capped at 20 players");
  std::vector<std::vector<int>> subsets;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(avail[(size_t)i]);
    }
    subsets.push_back(std::move(s));
  }
  std::sort(subsets.begin(), subsets.end());
  for (const auto& s : subsets) {
    PlayerSet ps(s.begin(), s.end());
    if (msp.qualified(ps)) return ps;
  }
  return std::nullopt;
}

}  // namespace q2mpc
