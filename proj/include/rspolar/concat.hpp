#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rspolar/gf.hpp"
#include "rspolar/polar.hpp"
#include "rspolar/rs.hpp"

namespace rspolar {

using BitMatrix = std::vector<std::vector<Bit>>;        // m polar blocks x n bits
using LlrMatrix = std::vector<std::vector<double>>;     // m polar blocks x n LLRs
using SymbolMatrix = std::vector<std::vector<Symbol>>;  // r outer rows x m symbols

enum class DecodeMode { serial, successive_hard, gmd, gmd_aml, gmd_eml };

std::string to_string(DecodeMode mode);
DecodeMode decode_mode_from_string(const std::string& name);

/// Whether the m independent polar blocks of a frame are processed by an
/// OpenMP team or by a plain loop. Both produce identical output.
enum class Execution { serial, parallel };

/// Interleaved RS-polar concatenation.
///
/// r = k/t outer RS codes of length m over GF(2^t), one per group of t
/// consecutive information positions (ascending index, i.e. SC order).
/// Symbol j of outer codeword i becomes the i-th t-bit group of polar block j.
class ConcatCode {
 public:
  ConcatCode(PolarCode polar, std::shared_ptr<const GaloisField> field, std::size_t m,
             std::vector<std::size_t> taus);

  const PolarCode& polar() const { return polar_; }
  const GaloisField& field() const { return *field_; }
  const std::shared_ptr<const GaloisField>& field_ptr() const { return field_; }
  unsigned symbol_bits() const { return field_->degree(); }
  std::size_t blocks() const { return m_; }
  std::size_t outer_count() const { return outer_.size(); }
  const ReedSolomon& outer(std::size_t i) const { return outer_[i]; }
  const std::vector<std::size_t>& taus() const { return taus_; }

  std::size_t payload_bits() const { return payload_bits_; }
  std::size_t frame_bits() const { return polar_.length() * m_; }
  double total_rate() const {
    return static_cast<double>(payload_bits_) / static_cast<double>(frame_bits());
  }

  /// Information positions carrying outer row i (t of them, ascending).
  std::span<const std::size_t> group(std::size_t i) const;

  /// Splits the payload into r messages and RS-encodes each.
  SymbolMatrix outer_encode(std::span<const Bit> payload) const;
  /// Inverse of the message split: reads the systematic part of each row.
  std::vector<Bit> payload_from(const SymbolMatrix& codewords) const;
  /// Polar information word of block j: the binary images of column j.
  std::vector<Bit> inner_input(const SymbolMatrix& codewords, std::size_t j) const;

  BitMatrix encode(std::span<const Bit> payload, Execution exec = Execution::parallel) const;

 private:
  PolarCode polar_;
  std::shared_ptr<const GaloisField> field_;
  std::size_t m_;
  std::vector<std::size_t> taus_;
  std::vector<ReedSolomon> outer_;
  std::size_t payload_bits_ = 0;
};

/// Hard symbol, its reliability, and approximate probabilities of all 2^t
/// symbols from t bit LLRs, treating the bits as independent.
struct SymbolSoft {
  Symbol hard = 0;
  double reliability = 0.0;
  std::vector<double> probs;
};

SymbolSoft symbol_reliability_from_llrs(std::span<const double> bit_llrs);

struct DecodeOptions {
  DecodeMode mode = DecodeMode::gmd_eml;
  Execution exec = Execution::parallel;
  CheckNode node = CheckNode::exact;
  /// Skip outer decoding entirely; the stage hard word is fed back as is.
  bool bypass_outer = false;
  /// Called with the stage's hard word before outer decoding (fault injection).
  std::function<void(std::size_t stage, std::vector<Symbol>& hard)> stage_hook;
};

struct DecodeResult {
  std::vector<Bit> payload;
  SymbolMatrix codewords;  // final outer rows (corrected, or hard on failure)
  SymbolMatrix hard;       // inner hard decisions presented to each outer decoder
  std::vector<std::uint8_t> row_failed;
  std::size_t failed_rows = 0;
};

/// Inner decoders first, then every outer row independently.
DecodeResult decode_serial(const ConcatCode& code, const LlrMatrix& llrs,
                           Execution exec = Execution::parallel, CheckNode node = CheckNode::exact);

/// Stage-by-stage decoding with feedback of each corrected outer row into
/// all m SC decoders before the next group of bits is decoded.
DecodeResult decode_successive(const ConcatCode& code, const LlrMatrix& llrs,
                               const DecodeOptions& options);

/// Dispatches on options.mode.
DecodeResult decode(const ConcatCode& code, const LlrMatrix& llrs, const DecodeOptions& options);

}  // namespace rspolar
