#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rspolar/channel.hpp"
#include "rspolar/gf.hpp"

namespace rspolar {

bool is_power_of_two(std::size_t n);

/// x = u B_n F^{(x)log2 n}: Arikan butterfly followed by bit reversal.
/// The transform is an involution over GF(2).
std::vector<Bit> polar_transform(std::span<const Bit> bits);

/// A binary polar code: length n, information set, and the per-bit-channel
/// error estimates it was selected from (may be empty).
class PolarCode {
 public:
  PolarCode(std::size_t n, std::vector<std::size_t> info_positions,
            std::vector<double> reliabilities = {});

  /// Information set = the k positions with the smallest estimated error
  /// probability, ties to the smaller index, returned ascending.
  static PolarCode select_frozen(std::span<const double> reliabilities, std::size_t k);

  std::size_t length() const { return n_; }
  std::size_t dimension() const { return info_.size(); }
  unsigned depth() const { return depth_; }
  bool is_frozen(std::size_t i) const { return frozen_[i] != 0; }
  const std::vector<std::uint8_t>& frozen_mask() const { return frozen_; }
  const std::vector<std::size_t>& info_positions() const { return info_; }
  std::vector<std::size_t> frozen_positions() const;
  const std::vector<double>& reliabilities() const { return reliabilities_; }
  std::size_t bit_reversed(std::size_t i) const { return bitrev_[i]; }

  std::vector<Bit> encode(std::span<const Bit> info) const;

 private:
  std::size_t n_;
  unsigned depth_;
  std::vector<std::size_t> info_;
  std::vector<std::uint8_t> frozen_;
  std::vector<double> reliabilities_;
  std::vector<std::size_t> bitrev_;
};

enum class CheckNode { exact, min_sum };

struct SpanResult {
  std::vector<Bit> bits;     // hard decisions on the span's info positions
  std::vector<double> llrs;  // decision LLRs, computed before each decision
};

class ScState;

/// Exact probabilities of the 2^t candidate values of the next symbol, with
/// the continuation each path leaves behind. A continuation is stored as the
/// portion of the SC lattice the span can touch plus the span's decisions;
/// everything outside that portion is shared with the base state.
struct SymbolLikelihoods {
  unsigned t = 0;
  std::vector<double> probs;       // normalized, index = symbol value
  std::vector<double> log_metric;  // unnormalized path log-probabilities

  // continuation storage, laid out per candidate
  std::size_t base_next = 0;
  std::size_t base_info = 0;
  std::size_t span_end = 0;  // one past the last leaf of the span
  std::size_t alpha_len = 0;
  std::size_t beta_len = 0;
  std::vector<double> alpha;
  std::vector<Bit> beta;
  std::vector<Bit> leaves;     // (span_end - base_next) decisions per candidate
  std::vector<double> llrs;    // t info decision LLRs per candidate

  Symbol most_likely() const;
};

/// Successive-cancellation decoder state for one polar block.
///
/// Holds the LLR lattice, the partial-sum lattice and the decisions so far.
/// LLRs for a leaf are computed lazily when the leaf is decoded, so a state
/// between leaves depends only on the decisions already committed. The code
/// object must outlive the state.
class ScState {
 public:
  ScState(const PolarCode& code, std::span<const double> channel_llrs,
          CheckNode node = CheckNode::exact);

  const PolarCode& code() const { return *code_; }
  std::size_t next_bit() const { return next_; }
  std::size_t decided_info() const { return info_done_; }
  std::size_t remaining_info() const { return code_->dimension() - info_done_; }
  std::span<const Bit> decisions() const { return std::span(u_.data(), next_); }

  /// Decodes through the next `count` information positions, deciding frozen
  /// positions on the way as 0. `forced` (empty or length n, -1 = free) pins
  /// individual leaves regardless of their LLR.
  SpanResult decode_span(std::size_t count, std::span<const std::int8_t> forced = {});

  /// Replaces the decisions of the most recent span and recomputes the
  /// lattice as if SC had decided them. No-op when the bits are unchanged.
  void resume_with(std::span<const Bit> corrected);

  /// Bits and LLRs of the most recent span.
  const std::vector<Bit>& last_span_bits() const { return span_bits_; }
  const std::vector<double>& last_span_llrs() const { return span_llrs_; }

  /// Explores all 2^t decision paths over the next t information positions.
  /// The state is left unchanged.
  SymbolLikelihoods symbol_paths(unsigned t);

  /// Continues along the saved path for `symbol`.
  void take_path(const SymbolLikelihoods& paths, Symbol symbol);

 private:
  double leaf_llr(std::size_t i);
  void commit(std::size_t i, Bit b);
  unsigned touched_layer(std::size_t first, std::size_t last) const;
  std::size_t alpha_prefix(unsigned layer) const;
  std::size_t beta_prefix(unsigned layer) const;
  void save_span_start(std::size_t last_leaf);
  void run_span(std::size_t last_leaf, std::span<const std::int8_t> forced,
                std::span<const Bit> info_override);

  void explore(std::size_t leaf, unsigned depth, Symbol sym, double metric,
               SymbolLikelihoods& out, std::vector<double>& path_llrs);

  const PolarCode* code_;
  CheckNode node_;
  unsigned depth_;
  std::size_t n_;
  std::vector<double> channel_;  // decoder order (bit reversal undone)
  std::vector<double> alpha_;    // layers 0..L-1, layer l at offset 2^l - 1
  std::vector<Bit> beta_;        // layers 0..L, left-child codewords
  std::vector<Bit> u_;
  std::size_t next_ = 0;
  std::size_t info_done_ = 0;

  // most recent span, for resume_with
  std::size_t span_begin_ = 0;
  std::size_t span_info_begin_ = 0;
  unsigned span_layer_ = 0;
  std::vector<double> snap_alpha_;
  std::vector<Bit> snap_beta_;
  std::vector<Bit> span_bits_;
  std::vector<double> span_llrs_;

  // scratch for symbol_paths
  std::vector<double> stack_alpha_;
  std::vector<Bit> stack_beta_;
};

struct ScResult {
  std::vector<Bit> info_bits;
  std::vector<double> info_llrs;
  ScState state;
};

/// One-shot SC decoding of all k information bits.
ScResult sc_decode(const PolarCode& code, std::span<const double> llrs,
                   std::span<const std::int8_t> forced = {}, CheckNode node = CheckNode::exact);

struct GenieStats {
  std::vector<double> error_prob;   // P(raw decision wrong | past corrected)
  std::vector<double> first_error;  // P(position is the first raw error)
  std::vector<double> tie_rate;     // P(decision LLR exactly 0), the erasure rate on a BEC
  std::size_t trials = 0;
};

/// Genie-aided Monte Carlo estimate of every bit-channel's error probability.
/// Sends the all-zero word; a tie (LLR exactly 0) counts as half an error.
GenieStats estimate_bitchannels_mc_stats(std::size_t n, const ChannelParams& channel,
                                         std::size_t trials, std::uint64_t seed,
                                         bool parallel = true);

std::vector<double> estimate_bitchannels_mc(std::size_t n, const ChannelParams& channel,
                                            std::size_t trials, std::uint64_t seed,
                                            bool parallel = true);

/// Exact bit-channel erasure probabilities on BEC(eps): z- = 2z - z^2, z+ = z^2.
std::vector<double> estimate_bitchannels_bec(std::size_t n, double eps);

}  // namespace rspolar
