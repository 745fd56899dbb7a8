#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "q2mpc/errors.hpp"

namespace q2mpc {

// Largest modulus we accept. Sums of two reduced values stay below 2^63 and
// products fit an unsigned 128-bit intermediate.
inline constexpr uint64_t kMaxModulus = uint64_t{1} << 62;

bool is_prime_u64(uint64_t n);
uint64_t next_prime_above(uint64_t n);  // smallest prime strictly greater than n

// base^exp, or 0 on overflow past kMaxModulus.
uint64_t checked_pow(uint64_t base, uint64_t exp);

// A field element remembers its modulus; mixing moduli throws MismatchedFields.
struct Fel {
  uint64_t v = 0;
  uint64_t q = 0;

  friend bool operator==(const Fel& a, const Fel& b) { return a.v == b.v && a.q == b.q; }
  friend bool operator!=(const Fel& a, const Fel& b) { return !(a == b); }
  friend bool operator<(const Fel& a, const Fel& b) {
    return a.q != b.q ? a.q < b.q : a.v < b.v;
  }
};

namespace detail {
inline void check_same(const Fel& a, const Fel& b) {
  if (a.q == 0 || b.q == 0 || a.q != b.q) throw MismatchedFields();
}
}  // namespace detail

inline Fel operator+(const Fel& a, const Fel& b) {
  detail::check_same(a, b);
  uint64_t s = a.v + b.v;
  if (s >= a.q) s -= a.q;
  return {s, a.q};
}

inline Fel operator-(const Fel& a, const Fel& b) {
  detail::check_same(a, b);
  uint64_t s = a.v >= b.v ? a.v - b.v : a.v + a.q - b.v;
  return {s, a.q};
}

inline Fel operator-(const Fel& a) {
  if (a.q == 0) throw MismatchedFields();
  return {a.v == 0 ? 0 : a.q - a.v, a.q};
}

inline Fel operator*(const Fel& a, const Fel& b) {
  detail::check_same(a, b);
  unsigned __int128 p = (unsigned __int128)a.v * b.v;
  return {(uint64_t)(p % a.q), a.q};
}

uint64_t inverse_mod(uint64_t a, uint64_t q);  // throws DivisionByZero on a == 0

inline Fel inv(const Fel& a) {
  if (a.q == 0) throw MismatchedFields();
  return {inverse_mod(a.v, a.q), a.q};
}

inline Fel operator/(const Fel& a, const Fel& b) { return a * inv(b); }

std::string to_string(const Fel& a);

enum class FieldRole { computation, authentication };

// A prime field GF(q). Construction validates primality and the size bound.
class Field {
 public:
  Field() = default;
  Field(uint64_t q, FieldRole role = FieldRole::computation);

  uint64_t modulus() const { return q_; }
  FieldRole role() const { return role_; }

  Fel fe(uint64_t raw) const { return {raw % q_, q_}; }
  Fel zero() const { return {0, q_}; }
  Fel one() const { return {1 % q_, q_}; }

  bool operator==(const Field& o) const { return q_ == o.q_; }
  bool operator!=(const Field& o) const { return q_ != o.q_; }

 private:
  uint64_t q_ = 0;
  FieldRole role_ = FieldRole::computation;
};

// Little-endian base-|K| packing of a share sequence into one element of the
// target field. Requires target.modulus > |K|^len so the packing is injective.
Fel encode_shares(const std::vector<Fel>& shares, const Field& target);
std::vector<Fel> decode_shares(const Fel& packed, const Field& source_k, size_t count);

}  // namespace q2mpc
