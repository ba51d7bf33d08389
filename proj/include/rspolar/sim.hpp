#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "rspolar/channel.hpp"
#include "rspolar/concat.hpp"
#include "rspolar/polar.hpp"

namespace rspolar {

/// Mode name of the uncoded-outer baseline: a plain polar code under SC.
inline constexpr const char* kPolarBaseline = "polar";

struct SimConfig {
  // exactly one of these is set
  std::shared_ptr<const ConcatCode> concat;
  std::shared_ptr<const PolarCode> polar;

  ChannelKind channel = ChannelKind::awgn;
  std::vector<double> points;      // Eb/N0 in dB (awgn) or erasure probability (bec)
  std::vector<std::string> modes;  // DecodeMode names, or "polar" for the baseline
  std::uint64_t trials = 1000;
  std::uint64_t max_frame_errors = 200;  // 0 disables early stop
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;
  std::uint64_t batch = 256;
  CheckNode node = CheckNode::exact;
  std::string spec_label;  // echoed into outputs

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
  double code_rate() const;
  std::size_t blocks_per_frame() const;
};

struct SimRow {
  double snr_db = 0.0;
  std::string mode;
  std::uint64_t trials = 0;
  std::uint64_t frame_errors = 0;
  std::uint64_t block_errors = 0;
  std::uint64_t block_count = 0;
  double bler = 0.0;
  double fer = 0.0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
};

struct TrialOutcome {
  bool frame_error = false;
  std::uint32_t block_errors = 0;
};

/// One Monte Carlo trial. Payload, codeword noise and decoding are all drawn
/// from make_stream(seed, trial), independent of the point and the mode.
TrialOutcome run_trial(const SimConfig& config, const ChannelParams& channel,
                       const std::string& mode, std::uint64_t trial);

/// Runs one (point, mode) cell. Trials execute in batches, in parallel when
/// configured; the stop rule is applied in trial order afterwards, so the
/// result does not depend on the number of threads.
SimRow run_cell(const SimConfig& config, double point, const std::string& mode);

std::vector<SimRow> run_sweep(const SimConfig& config);

inline constexpr const char* kCsvHeader = "snr_db,mode,trials,block_errors,bler,frame_errors,fer,seed";

std::string results_csv(const SimConfig& config, const std::vector<SimRow>& rows);
nlohmann::json results_json(const SimConfig& config, const std::vector<SimRow>& rows,
                            bool with_timing = false);

}  // namespace rspolar
