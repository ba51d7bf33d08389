#include "doctest.h"

#include <random>
#include <set>
#include <stdexcept>

#include "rspolar/gf.hpp"

using rspolar::GaloisField;
using rspolar::Symbol;

namespace {

// order of x modulo poly, by repeated shift-and-reduce; 0 if x^e never returns to 1
unsigned order_of_x(unsigned t, std::uint32_t poly) {
  std::uint32_t v = 1;
  for (unsigned e = 1; e <= (1u << t); ++e) {
    v <<= 1;
    if (v & (1u << t)) v ^= poly;
    if (v == 1) return e;
  }
  return 0;
}

}  // namespace

TEST_CASE("construction accepts primitive and rejects non-primitive polynomials") {
  CHECK(order_of_x(4, 0x13) == 15);
  CHECK_NOTHROW(GaloisField(4, 0x13));

  CHECK(order_of_x(4, 0x1F) == 5);
  CHECK_THROWS_AS(GaloisField(4, 0x1F), std::invalid_argument);

  CHECK(order_of_x(2, 0x7) == 3);
  CHECK_NOTHROW(GaloisField(2, 0x7));

  CHECK_THROWS_AS(GaloisField(4, 0x7), std::invalid_argument);   // wrong degree
  CHECK_THROWS_AS(GaloisField(1, 0x3), std::invalid_argument);
  CHECK_THROWS_AS(GaloisField(17, 0x3), std::invalid_argument);
  CHECK_THROWS_AS(GaloisField(4, 0x15), std::invalid_argument);  // (x^2+x+1)^2, reducible
}

TEST_CASE("default polynomials are primitive for every supported degree") {
  for (unsigned t = 2; t <= 16; ++t) {
    CAPTURE(t);
    const auto poly = GaloisField::default_polynomial(t);
    CHECK(order_of_x(t, poly) == (1u << t) - 1);
    CHECK_NOTHROW(GaloisField(t, poly));
  }
  CHECK(GaloisField::default_polynomial(4) == 0x13);
}

TEST_CASE("powers of x cover the nonzero elements of GF(16)") {
  const GaloisField gf(4, 0x13);
  std::set<Symbol> seen;
  for (int e = 0; e < 15; ++e) seen.insert(gf.alpha_pow(e));
  CHECK(seen.size() == 15);
  CHECK(seen.count(0) == 0);
}

TEST_CASE("multiplication in GF(16)") {
  const GaloisField gf(4, 0x13);
  for (Symbol a = 0; a < 16; ++a) {
    CHECK(gf.mul(1, a) == a);
    CHECK(gf.mul(0, a) == 0);
  }
  CHECK(gf.mul(2, 8) == 3);
  CHECK(gf.mul_slow(2, 8) == 3);
}

TEST_CASE("inverse in GF(16)") {
  const GaloisField gf(4, 0x13);
  CHECK(gf.inv(1) == 1);
  Symbol brute = 0;
  for (Symbol b = 1; b < 16; ++b)
    if (gf.mul_slow(2, b) == 1) brute = b;
  CHECK(brute == 9);
  CHECK(gf.inv(2) == 9);
  CHECK_THROWS_AS(gf.inv(0), std::domain_error);
  CHECK_THROWS_AS(gf.div(3, 0), std::domain_error);
  for (Symbol a = 1; a < 16; ++a) CHECK(gf.mul(a, gf.inv(a)) == 1);
}

TEST_CASE("table and carry-less multiplication agree") {
  for (unsigned t : {2u, 3u, 4u, 8u}) {
    const GaloisField gf(t, GaloisField::default_polynomial(t));
    for (std::uint32_t a = 0; a < gf.order(); ++a)
      for (std::uint32_t b = 0; b < gf.order(); ++b)
        REQUIRE(gf.mul(Symbol(a), Symbol(b)) == gf.mul_slow(Symbol(a), Symbol(b)));
  }
  const GaloisField big(16, GaloisField::default_polynomial(16));
  std::mt19937 rng(7);
  for (int i = 0; i < 100000; ++i) {
    const Symbol a = rng() & 0xFFFF, b = rng() & 0xFFFF;
    REQUIRE(big.mul(a, b) == big.mul_slow(a, b));
  }
}

TEST_CASE("field axioms hold exhaustively") {
  for (unsigned t : {4u, 8u}) {
    const GaloisField gf(t, GaloisField::default_polynomial(t));
    const std::uint32_t q = gf.order();
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        const Symbol ab = gf.mul(Symbol(a), Symbol(b));
        REQUIRE(ab == gf.mul(Symbol(b), Symbol(a)));
        for (std::uint32_t c = 0; c < q; ++c) {
          REQUIRE(gf.mul(ab, Symbol(c)) == gf.mul(Symbol(a), gf.mul(Symbol(b), Symbol(c))));
          REQUIRE(gf.mul(Symbol(a), Symbol(b ^ c)) == (ab ^ gf.mul(Symbol(a), Symbol(c))));
        }
      }
    for (std::uint32_t a = 1; a < q; ++a) REQUIRE(gf.pow(Symbol(a), q - 1) == 1);
  }
}

TEST_CASE("pow and log are consistent") {
  const GaloisField gf(4, 0x13);
  for (Symbol a = 1; a < 16; ++a) {
    CHECK(gf.alpha_pow(gf.log(a)) == a);
    CHECK(gf.pow(a, -1) == gf.inv(a));
    CHECK(gf.pow(a, 0) == 1);
  }
  CHECK(gf.alpha_pow(-1) == gf.inv(2));
  CHECK(gf.pow(0, 0) == 1);
  CHECK(gf.pow(0, 5) == 0);
  CHECK_THROWS_AS(gf.log(0), std::domain_error);
}

TEST_CASE("binary image is a linear bijection") {
  const GaloisField gf(4, 0x13);
  std::set<std::vector<std::uint8_t>> images;
  for (Symbol a = 0; a < 16; ++a) {
    std::vector<std::uint8_t> bits(4);
    gf.to_bits(a, bits);
    images.insert(bits);
    CHECK(gf.from_bits(bits) == a);
    for (Symbol b = 0; b < 16; ++b) {
      std::vector<std::uint8_t> bb(4), sum(4);
      gf.to_bits(b, bb);
      gf.to_bits(a ^ b, sum);
      for (int i = 0; i < 4; ++i) CHECK(sum[i] == (bits[i] ^ bb[i]));
    }
  }
  CHECK(images.size() == 16);
  std::vector<std::uint8_t> three(4);
  gf.to_bits(3, three);
  CHECK(three == std::vector<std::uint8_t>{1, 1, 0, 0});  // constant term first
}
