// Serial reference vs OpenMP kernels on the n=512, m=15, t=4 instance.
// Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "rspolar/design.hpp"
#include "rspolar/sim.hpp"

using namespace rspolar;

namespace {

const std::shared_ptr<const ConcatCode>& instance() {
  static const auto code = [] {
    const auto z = estimate_bitchannels_bec(512, 0.6);
    const auto cand = design_for_dimension(z, 4, 15, 204, 1.0 / 3.0);
    return std::make_shared<const ConcatCode>(make_concat(z, cand, std::make_shared<const GaloisField>(4, 0x13), 15));
  }();
  return code;
}

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_Encode(benchmark::State& state) {
  const auto& code = *instance();
  std::mt19937 rng(1);
  std::vector<Bit> payload(code.payload_bits());
  for (Bit& b : payload) b = static_cast<Bit>(rng() & 1);
  for (auto _ : state) benchmark::DoNotOptimize(code.encode(payload, exec_of(state)));
}

void BM_Decode(benchmark::State& state, DecodeMode mode) {
  const auto& code = *instance();
  const auto x = code.encode(std::vector<Bit>(code.payload_bits(), 0));
  ChannelParams ch;
  ch.ebn0_db = 1.5;
  ch.rate = code.total_rate();
  LlrMatrix llrs;
  for (std::size_t j = 0; j < x.size(); ++j) llrs.push_back(transmit(ch, x[j], j));
  DecodeOptions opt;
  opt.mode = mode;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(decode(code, llrs, opt));
}

void BM_GenieEstimate(benchmark::State& state) {
  ChannelParams ch;
  ch.ebn0_db = 2.0;
  ch.rate = 1.0 / 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_bitchannels_mc(512, ch, 2000, 7, state.range(0) != 0));
}

void BM_SweepCell(benchmark::State& state) {
  SimConfig cfg;
  cfg.concat = instance();
  cfg.points = {1.5};
  cfg.modes = {"gmd"};
  cfg.trials = 200;
  cfg.max_frame_errors = 0;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(cfg, 1.5, "gmd"));
}

}  // namespace

BENCHMARK(BM_Encode)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Decode, serial_mode, DecodeMode::serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decode, gmd_eml, DecodeMode::gmd_eml)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenieEstimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepCell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
