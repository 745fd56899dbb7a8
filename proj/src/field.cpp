#include "q2mpc/field.hpp"

namespace q2mpc {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return (uint64_t)((unsigned __int128)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // Deterministic Miller-Rabin base set, exact for all 64-bit inputs.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

uint64_t next_prime_above(uint64_t n) {
  uint64_t c = n + 1;
  if (c <= 2) return 2;
  if ((c & 1) == 0) ++c;
  while (!is_prime_u64(c)) {
    c += 2;
    if (c > kMaxModulus) throw FieldTooSmall("no admissible prime below the modulus cap");
  }
  return c;
}

uint64_t checked_pow(uint64_t base, uint64_t exp) {
  unsigned __int128 acc = 1;
  for (uint64_t i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > kMaxModulus) return 0;
  }
  return (uint64_t)acc;
}

uint64_t inverse_mod(uint64_t a, uint64_t q) {
  a %= q;
  if (a == 0) throw DivisionByZero();
  // Extended Euclid on (a, q); q prime so gcd is 1.
  int64_t t = 0, newt = 1;
  int64_t r = (int64_t)q, newr = (int64_t)a;
  while (newr != 0) {
    int64_t quot = r / newr;
    int64_t tmp = t - quot * newt;
    t = newt;
    newt = tmp;
    tmp = r - quot * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += (int64_t)q;
  return (uint64_t)t;
}

std::string to_string(const Fel& a) {
  return std::to_string(a.v) + " (mod " + std::to_string(a.q) + ")";
}

Field::Field(uint64_t q, FieldRole role) : q_(q), role_(role) {
  if (q > kMaxModulus) throw FieldTooSmall("modulus exceeds the 64-bit arithmetic cap");
  if (!is_prime_u64(q)) throw NotPrime("modulus " + std::to_string(q) + " is not prime");
}

Fel encode_shares(const std::vector<Fel>& shares, const Field& target) {
  uint64_t base = shares.empty() ? 0 : shares[0].q;
  for (const Fel& s : shares) {
    if (s.q != base) throw MismatchedFields();
  }
  if (!shares.empty()) {
    uint64_t span = checked_pow(base, shares.size());
    if (span == 0 || target.modulus() <= span)
      throw FieldTooSmall("target field cannot hold the packed share sequence");
  }
  unsigned __int128 acc = 0;
  unsigned __int128 place = 1;
  for (const Fel& s : shares) {
    acc += place * s.v;
    place *= base;
  }
  return target.fe((uint64_t)acc);
}

std::vector<Fel> decode_shares(const Fel& packed, const Field& source_k, size_t count) {
  uint64_t base = source_k.modulus();
  uint64_t span = checked_pow(base, count);
  if (span == 0 || packed.q <= span) throw FieldTooSmall("packed field cannot hold the share sequence");
  std::vector<Fel> out;
  out.reserve(count);
  uint64_t rest = packed.v;
  for (size_t i = 0; i < count; ++i) {
    out.push_back(source_k.fe(rest % base));
    rest /= base;
  }
  return out;
}

}  // namespace q2mpc
