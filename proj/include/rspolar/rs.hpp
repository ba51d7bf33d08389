#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rspolar/gf.hpp"

namespace rspolar {

enum class RsStatus { corrected, failure };

struct RsDecodeResult {
  RsStatus status = RsStatus::failure;
  std::vector<Symbol> codeword;  // valid only when corrected
  std::size_t corrections = 0;

  bool ok() const { return status == RsStatus::corrected; }
};

struct GmdCandidate {
  std::vector<Symbol> codeword;
  unsigned alpha = 0;  // number of erased least-reliable positions
};

using GmdCandidateList = std::vector<GmdCandidate>;

/// Reed-Solomon code of length m <= 2^t - 1 and radius tau over GF(2^t).
///
/// Codeword position j carries the coefficient of x^j, so its locator is
/// alpha^j. The generator has roots alpha^1 .. alpha^{2 tau}. Encoding is
/// systematic with the message in positions [0, kappa). Lengths below
/// 2^t - 1 are shortened codes. tau = 0 is the trivial code with no parity.
class ReedSolomon {
 public:
  ReedSolomon(std::shared_ptr<const GaloisField> field, std::size_t m, std::size_t tau);

  const GaloisField& field() const { return *field_; }
  std::size_t length() const { return m_; }
  std::size_t radius() const { return tau_; }
  std::size_t dimension() const { return m_ - 2 * tau_; }
  std::size_t min_distance() const { return 2 * tau_ + 1; }
  const std::vector<Symbol>& generator() const { return generator_; }

  std::vector<Symbol> encode(std::span<const Symbol> message) const;

  /// Syndromes S_1..S_{2 tau} of a received word (all zero iff codeword).
  std::vector<Symbol> syndromes(std::span<const Symbol> word) const;
  bool is_codeword(std::span<const Symbol> word) const;

  /// Bounded-distance errors-and-erasures decoding. Succeeds whenever
  /// 2e + f <= 2 tau. Throws std::domain_error if more than 2 tau positions
  /// are erased; every other irregularity is reported as failure.
  RsDecodeResult decode(std::span<const Symbol> received,
                        std::span<const std::size_t> erasures = {}) const;

  /// Conventional GMD: for alpha = 0, 2, ..., d - 1 erase the alpha least
  /// reliable positions (higher score = more reliable, ties by position)
  /// and collect each distinct decoded codeword with the first alpha that
  /// produced it.
  GmdCandidateList gmd_list(std::span<const Symbol> received,
                            std::span<const double> reliabilities) const;

 private:
  Symbol eval(std::span<const Symbol> poly, Symbol x) const;

  std::shared_ptr<const GaloisField> field_;
  std::size_t m_;
  std::size_t tau_;
  std::vector<Symbol> generator_;
  // parity_rows_[j] = x^j * x^{-kappa} mod g(x), one row per message position
  std::vector<std::vector<Symbol>> parity_rows_;
};

}  // namespace rspolar
