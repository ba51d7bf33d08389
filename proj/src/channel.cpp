#include "rspolar/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rspolar {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

std::string to_string(ChannelKind kind) { return kind == ChannelKind::awgn ? "awgn" : "bec"; }

ChannelKind channel_kind_from_string(const std::string& name) {
  if (name == "awgn") return ChannelKind::awgn;
  if (name == "bec") return ChannelKind::bec;
  throw std::invalid_argument("unknown channel '" + name + "' (expected awgn or bec)");
}

void ChannelParams::validate() const {
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("channel rate must be in (0, 1]");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("erasure probability must be in [0, 1]");
  if (!std::isfinite(ebn0_db)) throw std::invalid_argument("Eb/N0 must be finite");
}

double noise_variance(double ebn0_db, double rate) {
  return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

void transmit(const ChannelParams& params, std::span<const Bit> bits, Rng& rng,
              std::span<double> llrs) {
  if (llrs.size() != bits.size()) throw std::invalid_argument("LLR buffer size mismatch");
  if (params.kind == ChannelKind::awgn) {
    const double var = noise_variance(params.ebn0_db, params.rate);
    const double sigma = std::sqrt(var);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const double y = (bits[i] ? -1.0 : 1.0) + sigma * noise(rng);
      llrs[i] = std::clamp(2.0 * y / var, -kLlrMax, kLlrMax);
    }
  } else {
    std::bernoulli_distribution erased(params.eps);
    for (std::size_t i = 0; i < bits.size(); ++i)
      llrs[i] = erased(rng) ? 0.0 : (bits[i] ? -kLlrMax : kLlrMax);
  }
}

std::vector<double> transmit(const ChannelParams& params, std::span<const Bit> bits,
                             std::uint64_t stream) {
  Rng rng = make_stream(params.seed, stream);
  std::vector<double> llrs(bits.size());
  transmit(params, bits, rng, llrs);
  return llrs;
}

}  // namespace rspolar
