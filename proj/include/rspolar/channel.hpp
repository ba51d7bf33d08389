#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rspolar {

using Bit = std::uint8_t;

/// Saturation magnitude for LLRs; hard-known bits are +-kLlrMax.
inline constexpr double kLlrMax = 40.0;

/// Per-trial random stream. (seed, stream) fully determines the sequence,
/// so trials can run on any worker in any order.
using Rng = std::mt19937_64;
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

enum class ChannelKind { awgn, bec };

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& name);

struct ChannelParams {
  ChannelKind kind = ChannelKind::awgn;
  double ebn0_db = 0.0;  // awgn
  double rate = 1.0;     // overall code rate for the Eb/N0 -> sigma conversion
  double eps = 0.0;      // bec erasure probability
  std::uint64_t seed = 0;

  void validate() const;
};

/// sigma^2 = 1 / (2 R 10^(EbN0/10)) for unit-energy BPSK.
double noise_variance(double ebn0_db, double rate);

/// BPSK (0 -> +1, 1 -> -1) over AWGN with LLR = 2y / sigma^2, or BEC with
/// LLR 0 for an erasure and +-kLlrMax otherwise. Draws from `rng`.
void transmit(const ChannelParams& params, std::span<const Bit> bits, Rng& rng,
              std::span<double> llrs);

/// Convenience overload drawing from make_stream(params.seed, stream).
std::vector<double> transmit(const ChannelParams& params, std::span<const Bit> bits,
                             std::uint64_t stream);

}  // namespace rspolar
