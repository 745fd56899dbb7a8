#include <doctest.h>

#include "q2mpc/field.hpp"

using namespace q2mpc;

namespace {

// independent primality oracle, trial division
bool slow_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
  for (uint64_t n = 0; n < 2000; ++n) CHECK(is_prime_u64(n) == slow_prime(n));
  CHECK(is_prime_u64(2147483647ull));       // 2^31 - 1
  CHECK_FALSE(is_prime_u64(2147483649ull)); // 3 * 715827883
  CHECK(is_prime_u64(1000000007ull));
  CHECK_FALSE(is_prime_u64(1000000007ull * 3));
}

TEST_CASE("next_prime_above returns the first prime strictly beyond") {
  CHECK(next_prime_above(0) == 2);
  CHECK(next_prime_above(2) == 3);
  CHECK(next_prime_above(7) == 11);
  CHECK(next_prime_above(10) == 11);
  uint64_t p = next_prime_above(161051);  // 11^5
  CHECK(p > 161051);
  CHECK(slow_prime(p));
  for (uint64_t c = 161052; c < p; ++c) CHECK_FALSE(slow_prime(c));
}

TEST_CASE("checked_pow") {
  CHECK(checked_pow(7, 0) == 1);
  CHECK(checked_pow(7, 3) == 343);
  CHECK(checked_pow(11, 5) == 161051);
  CHECK(checked_pow(2, 61) == (uint64_t{1} << 61));
  CHECK(checked_pow(2, 63) == 0);  // past the cap
}

TEST_CASE("element arithmetic in GF(7)") {
  Field f(7);
  CHECK(f.fe(3) + f.fe(5) == f.fe(1));
  CHECK(f.fe(3) - f.fe(5) == f.fe(5));
  CHECK(-f.fe(3) == f.fe(4));
  CHECK(f.fe(3) * f.fe(5) == f.fe(1));
  CHECK(inv(f.fe(3)) == f.fe(5));
  CHECK(f.fe(1) / f.fe(3) == f.fe(5));
  CHECK(f.fe(9) == f.fe(2));  // fe reduces
  CHECK(f.zero() == f.fe(0));
  CHECK(f.one() == f.fe(1));
}

TEST_CASE("field axioms hold exhaustively in GF(11)") {
  Field f(11);
  for (uint64_t a = 0; a < 11; ++a) {
    for (uint64_t b = 0; b < 11; ++b) {
      CHECK(f.fe(a) + f.fe(b) == f.fe((a + b) % 11));
      CHECK(f.fe(a) * f.fe(b) == f.fe(a * b % 11));
      CHECK(f.fe(a) + f.fe(b) == f.fe(b) + f.fe(a));
      CHECK(f.fe(a) * f.fe(b) == f.fe(b) * f.fe(a));
      for (uint64_t c = 0; c < 11; ++c) {
        CHECK((f.fe(a) + f.fe(b)) + f.fe(c) == f.fe(a) + (f.fe(b) + f.fe(c)));
        CHECK((f.fe(a) * f.fe(b)) * f.fe(c) == f.fe(a) * (f.fe(b) * f.fe(c)));
        CHECK(f.fe(a) * (f.fe(b) + f.fe(c)) == f.fe(a) * f.fe(b) + f.fe(a) * f.fe(c));
      }
    }
    if (a != 0) CHECK(f.fe(a) * inv(f.fe(a)) == f.one());
    CHECK(f.fe(a) + (-f.fe(a)) == f.zero());
  }
}

TEST_CASE("error conditions") {
  Field f7(7), f11(11);
  CHECK_THROWS_AS(f7.fe(3) + f11.fe(3), MismatchedFields);
  CHECK_THROWS_AS(f7.fe(3) * f11.fe(3), MismatchedFields);
  CHECK_THROWS_AS(inv(f7.zero()), DivisionByZero);
  CHECK_THROWS_AS(f7.fe(1) / f7.zero(), DivisionByZero);
  CHECK_THROWS_AS(Field(6), NotPrime);
  CHECK_THROWS_AS(Field(1), NotPrime);
  CHECK_THROWS_AS(Field((uint64_t{1} << 62) + 1), FieldTooSmall);
}

TEST_CASE("field roles are carried but do not affect arithmetic") {
  Field k(7, FieldRole::computation);
  Field f(347, FieldRole::authentication);
  CHECK(k.role() == FieldRole::computation);
  CHECK(f.role() == FieldRole::authentication);
  CHECK(k.fe(3) + k.fe(4) == k.zero());
}

TEST_CASE("share packing into a larger field") {
  Field k(7);
  Field f(347);  // > 7^3 = 343

  SUBCASE("worked examples") {
    CHECK(encode_shares({k.fe(5), k.fe(0)}, f) == f.fe(5));
    CHECK(encode_shares({k.fe(1), k.fe(1)}, f) == f.fe(8));
    CHECK(encode_shares({k.fe(2), k.fe(3), k.fe(1)}, f) == f.fe(2 + 3 * 7 + 49));
  }

  SUBCASE("round trip is exhaustive for three GF(7) shares") {
    for (uint64_t a = 0; a < 7; ++a) {
      for (uint64_t b = 0; b < 7; ++b) {
        for (uint64_t c = 0; c < 7; ++c) {
          std::vector<Fel> in{k.fe(a), k.fe(b), k.fe(c)};
          CHECK(decode_shares(encode_shares(in, f), k, 3) == in);
        }
      }
    }
  }

  SUBCASE("distinct share vectors pack to distinct elements") {
    std::vector<Fel> seen;
    for (uint64_t a = 0; a < 7; ++a) {
      for (uint64_t b = 0; b < 7; ++b) {
        Fel e = encode_shares({k.fe(a), k.fe(b)}, f);
        for (const Fel& s : seen) CHECK(s != e);
        seen.push_back(e);
      }
    }
  }

  SUBCASE("target must strictly exceed the packed span") {
    Field f13(13);
    CHECK_THROWS_AS(encode_shares({k.fe(1), k.fe(1)}, f13), FieldTooSmall);  // 13 <= 49
    CHECK_THROWS_AS(encode_shares({k.fe(1)}, k), FieldTooSmall);            // 7 <= 7
    CHECK_THROWS_AS(decode_shares(f13.fe(5), k, 2), FieldTooSmall);
    CHECK_THROWS_AS(encode_shares({k.fe(1), f13.fe(1)}, f), MismatchedFields);
  }
}
