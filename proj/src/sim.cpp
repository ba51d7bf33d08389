#include "rspolar/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rspolar/io.hpp"

namespace rspolar {

namespace {

void fill_random_bits(Rng& rng, std::vector<Bit>& bits) {
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<Bit>((word >> (i % 64)) & 1u);
  }
}

ChannelParams channel_at(const SimConfig& config, double point) {
  ChannelParams p;
  p.kind = config.channel;
  p.rate = config.code_rate();
  p.seed = config.seed;
  if (config.channel == ChannelKind::awgn)
    p.ebn0_db = point;
  else
    p.eps = point;
  return p;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

void SimConfig::validate() const {
  if (static_cast<bool>(concat) == static_cast<bool>(polar))
    throw std::invalid_argument("simulation needs exactly one code (concatenated or polar)");
  if (points.empty()) throw std::invalid_argument("SNR list is empty");
  if (modes.empty()) throw std::invalid_argument("mode list is empty");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (batch == 0) throw std::invalid_argument("batch must be >= 1");
  for (const std::string& m : modes) {
    if (m == kPolarBaseline) {
      if (!polar) throw std::invalid_argument("mode 'polar' needs a plain polar code");
    } else {
      decode_mode_from_string(m);
      if (!concat) throw std::invalid_argument("mode '" + m + "' needs a concatenated code");
    }
  }
  for (double p : points) {
    ChannelParams c = channel_at(*this, p);
    c.validate();
  }
}

double SimConfig::code_rate() const {
  if (concat) return concat->total_rate();
  return static_cast<double>(polar->dimension()) / static_cast<double>(polar->length());
}

std::size_t SimConfig::blocks_per_frame() const { return concat ? concat->blocks() : 1; }

TrialOutcome run_trial(const SimConfig& config, const ChannelParams& channel,
                       const std::string& mode, std::uint64_t trial) {
  Rng rng = make_stream(config.seed, trial);
  TrialOutcome out;

  if (config.polar) {
    const PolarCode& code = *config.polar;
    std::vector<Bit> info(code.dimension());
    fill_random_bits(rng, info);
    const std::vector<Bit> x = code.encode(info);
    std::vector<double> llrs(x.size());
    transmit(channel, x, rng, llrs);
    const ScResult res = sc_decode(code, llrs, {}, config.node);
    out.frame_error = res.info_bits != info;
    out.block_errors = out.frame_error ? 1 : 0;
    return out;
  }

  const ConcatCode& code = *config.concat;
  std::vector<Bit> payload(code.payload_bits());
  fill_random_bits(rng, payload);
  const SymbolMatrix truth = code.outer_encode(payload);
  LlrMatrix llrs(code.blocks());
  for (std::size_t j = 0; j < code.blocks(); ++j) {
    const std::vector<Bit> x = code.polar().encode(code.inner_input(truth, j));
    llrs[j].resize(x.size());
    transmit(channel, x, rng, llrs[j]);
  }

  DecodeOptions opts;
  opts.mode = decode_mode_from_string(mode);
  opts.exec = Execution::serial;
  opts.node = config.node;
  const DecodeResult res = decode(code, llrs, opts);

  out.frame_error = res.payload != payload;
  for (std::size_t j = 0; j < code.blocks(); ++j) {
    bool bad = false;
    for (std::size_t i = 0; i < code.outer_count() && !bad; ++i) bad = res.codewords[i][j] != truth[i][j];
    out.block_errors += bad;
  }
  return out;
}

SimRow run_cell(const SimConfig& config, double point, const std::string& mode) {
  config.validate();
  const ChannelParams channel = channel_at(config, point);
  const auto start = std::chrono::steady_clock::now();

  SimRow row;
  row.snr_db = point;
  row.mode = mode;
  row.seed = config.seed;

  std::vector<TrialOutcome> batch;
  bool stop = false;
  for (std::uint64_t first = 0; first < config.trials && !stop; first += config.batch) {
    const std::uint64_t count = std::min(config.batch, config.trials - first);
    batch.assign(count, {});
    const long long cnt = static_cast<long long>(count);
#pragma omp parallel for if (config.exec == Execution::parallel) schedule(dynamic, 1)
    for (long long i = 0; i < cnt; ++i)
      batch[i] = run_trial(config, channel, mode, first + static_cast<std::uint64_t>(i));

    for (const TrialOutcome& o : batch) {
      ++row.trials;
      row.frame_errors += o.frame_error;
      row.block_errors += o.block_errors;
      if (config.max_frame_errors > 0 && row.frame_errors >= config.max_frame_errors) {
        stop = true;
        break;
      }
    }
  }

  row.block_count = row.trials * config.blocks_per_frame();
  row.bler = static_cast<double>(row.block_errors) / static_cast<double>(row.block_count);
  row.fer = static_cast<double>(row.frame_errors) / static_cast<double>(row.trials);
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<SimRow> run_sweep(const SimConfig& config) {
  config.validate();
  std::vector<SimRow> rows;
  for (double p : config.points)
    for (const std::string& mode : config.modes) rows.push_back(run_cell(config, p, mode));
  return rows;
}

std::string results_csv(const SimConfig& config, const std::vector<SimRow>& rows) {
  std::ostringstream out;
  out << "# rspolar simulate format_version=" << kFormatVersion << " spec=" << config.spec_label
      << " channel=" << to_string(config.channel) << " rate=" << fmt("%.6f", config.code_rate())
      << " trials=" << config.trials << " max_frame_errors=" << config.max_frame_errors
      << " seed=" << config.seed << "\n";
  out << kCsvHeader << "\n";
  for (const SimRow& r : rows)
    out << fmt("%g", r.snr_db) << ',' << r.mode << ',' << r.trials << ',' << r.block_errors << ','
        << fmt("%.6e", r.bler) << ',' << r.frame_errors << ',' << fmt("%.6e", r.fer) << ',' << r.seed
        << "\n";
  return out.str();
}

nlohmann::json results_json(const SimConfig& config, const std::vector<SimRow>& rows, bool with_timing) {
  nlohmann::json doc = {{"format_version", kFormatVersion},
                        {"kind", "sim_results"},
                        {"config",
                         {{"spec", config.spec_label},
                          {"channel", to_string(config.channel)},
                          {"rate", config.code_rate()},
                          {"blocks_per_frame", config.blocks_per_frame()},
                          {"points", config.points},
                          {"modes", config.modes},
                          {"trials", config.trials},
                          {"max_frame_errors", config.max_frame_errors},
                          {"seed", config.seed},
                          {"check_node", config.node == CheckNode::exact ? "exact" : "min_sum"}}},
                        {"rows", nlohmann::json::array()}};
  for (const SimRow& r : rows) {
    nlohmann::json j = {{"snr_db", r.snr_db},           {"mode", r.mode},
                        {"trials", r.trials},           {"frame_errors", r.frame_errors},
                        {"block_errors", r.block_errors}, {"block_count", r.block_count},
                        {"bler", r.bler},               {"fer", r.fer},
                        {"seed", r.seed}};
    if (with_timing) j["wall_time"] = r.wall_time;
    doc["rows"].push_back(std::move(j));
  }
  return doc;
}

}  // namespace rspolar
