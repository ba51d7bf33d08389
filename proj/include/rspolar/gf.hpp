#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rspolar {

/// Field element of GF(2^t) in polynomial basis: bit b is the coefficient of x^b.
using Symbol = std::uint16_t;

/// Arithmetic over GF(2^t), 2 <= t <= 16, backed by log/antilog tables.
///
/// Addition is XOR and has no method of its own. Instances are immutable
/// after construction and may be shared freely between threads.
class GaloisField {
 public:
  /// Builds the tables for the field generated by `prim_poly` (degree exactly
  /// t, bit t set). Throws std::invalid_argument if the polynomial is not
  /// primitive, i.e. x does not generate a cyclic group of order 2^t - 1.
  GaloisField(unsigned t, std::uint32_t prim_poly);

  /// Conventional primitive polynomial for degree t (x^4 + x + 1 for t = 4).
  static std::uint32_t default_polynomial(unsigned t);

  unsigned degree() const { return t_; }
  std::uint32_t polynomial() const { return prim_poly_; }
  std::uint32_t order() const { return 1u << t_; }

  Symbol mul(Symbol a, Symbol b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Symbol div(Symbol a, Symbol b) const;
  Symbol inv(Symbol a) const;
  Symbol pow(Symbol a, long long e) const;

  /// alpha^e for the primitive element alpha = x; e may be negative.
  Symbol alpha_pow(long long e) const;
  /// Discrete log base alpha; a must be nonzero.
  unsigned log(Symbol a) const;

  /// Carry-less multiply with reduction, no tables. Reference path for tests.
  Symbol mul_slow(Symbol a, Symbol b) const;

  /// Binary image: the t polynomial-basis coefficients, constant term first.
  void to_bits(Symbol s, std::span<std::uint8_t> out) const;
  Symbol from_bits(std::span<const std::uint8_t> bits) const;

 private:
  unsigned t_;
  std::uint32_t prim_poly_;
  std::vector<Symbol> exp_;  // doubled so mul skips the modulo
  std::vector<std::uint32_t> log_;
};

}  // namespace rspolar
