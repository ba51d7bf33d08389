#include "rspolar/gf.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <string>

namespace rspolar {

namespace {

// Conway-style primitive polynomials, index = degree.
constexpr std::array<std::uint32_t, 17> kDefaultPoly = {
    0,      0,      0x7,    0xB,    0x13,   0x25,    0x43,   0x89,   0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

}  // namespace

std::uint32_t GaloisField::default_polynomial(unsigned t) {
  if (t < 2 || t > 16) throw std::invalid_argument("GF degree must be in [2, 16]");
  return kDefaultPoly[t];
}

GaloisField::GaloisField(unsigned t, std::uint32_t prim_poly) : t_(t), prim_poly_(prim_poly) {
  if (t < 2 || t > 16) throw std::invalid_argument("GF degree must be in [2, 16]");
  if (std::bit_width(prim_poly) != t + 1)
    throw std::invalid_argument("polynomial degree does not match t=" + std::to_string(t));

  const std::uint32_t q = 1u << t;
  exp_.assign(2 * (q - 1), 0);
  log_.assign(q, 0);

  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    if (i > 0 && x == 1)
      throw std::invalid_argument("polynomial is not primitive: x has order " + std::to_string(i));
    exp_[i] = static_cast<Symbol>(x);
    log_[x] = i;
    x <<= 1;
    if (x & q) x ^= prim_poly;
  }
  if (x != 1) throw std::invalid_argument("polynomial is reducible");
  for (std::uint32_t i = q - 1; i < 2 * (q - 1); ++i) exp_[i] = exp_[i - (q - 1)];
}

Symbol GaloisField::div(Symbol a, Symbol b) const {
  if (b == 0) throw std::domain_error("division by zero in GF(2^t)");
  if (a == 0) return 0;
  return exp_[log_[a] + (order() - 1) - log_[b]];
}

Symbol GaloisField::inv(Symbol a) const {
  if (a == 0) throw std::domain_error("zero has no inverse in GF(2^t)");
  return exp_[(order() - 1) - log_[a]];
}

Symbol GaloisField::pow(Symbol a, long long e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw std::domain_error("zero raised to a negative power");
    return 0;
  }
  const long long period = order() - 1;
  long long r = (static_cast<long long>(log_[a]) * (e % period)) % period;
  if (r < 0) r += period;
  return exp_[static_cast<std::size_t>(r)];
}

Symbol GaloisField::alpha_pow(long long e) const {
  const long long period = order() - 1;
  long long r = e % period;
  if (r < 0) r += period;
  return exp_[static_cast<std::size_t>(r)];
}

unsigned GaloisField::log(Symbol a) const {
  if (a == 0) throw std::domain_error("log of zero in GF(2^t)");
  return log_[a];
}

Symbol GaloisField::mul_slow(Symbol a, Symbol b) const {
  std::uint32_t acc = 0;
  for (unsigned i = 0; i < t_; ++i)
    if (b & (1u << i)) acc ^= static_cast<std::uint32_t>(a) << i;
  for (int i = 2 * static_cast<int>(t_) - 2; i >= static_cast<int>(t_); --i)
    if (acc & (1u << i)) acc ^= prim_poly_ << (i - t_);
  return static_cast<Symbol>(acc);
}

void GaloisField::to_bits(Symbol s, std::span<std::uint8_t> out) const {
  for (unsigned b = 0; b < t_; ++b) out[b] = (s >> b) & 1u;
}

Symbol GaloisField::from_bits(std::span<const std::uint8_t> bits) const {
  Symbol s = 0;
  for (unsigned b = 0; b < t_; ++b) s |= static_cast<Symbol>((bits[b] & 1u) << b);
  return s;
}

}  // namespace rspolar
