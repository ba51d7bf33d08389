// rspolar: design, estimate, encode, decode, simulate and bound for the
// interleaved RS-polar concatenated scheme.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "rspolar/design.hpp"
#include "rspolar/io.hpp"
#include "rspolar/sim.hpp"

using namespace rspolar;
using nlohmann::json;

namespace {

// Compact scientific form: 4.55e-04 rather than 4.550000e-04.
std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  std::string s = buf;
  const auto e = s.find('e');
  auto end = e;
  while (end > 0 && s[end - 1] == '0') --end;
  if (end > 0 && s[end - 1] == '.') --end;
  return s.substr(0, end) + s.substr(e);
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file_atomic(path, content);
}

std::vector<Bit> unpack(const std::string& bytes) {
  std::vector<Bit> bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bits.size(); ++i)
    bits[i] = (static_cast<unsigned char>(bytes[i / 8]) >> (i % 8)) & 1u;
  return bits;
}

std::string pack(const std::vector<Bit>& bits) {
  std::string out((bits.size() + 7) / 8, '\0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] = static_cast<char>(out[i / 8] | (1 << (i % 8)));
  return out;
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string mode = "mc";
  std::size_t n = 512;
  double eps = 0.5;
  double ebn0 = 2.0;
  double rate = 1.0 / 3.0;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::string out;
};

ReliabilityFile run_estimate(const EstimateArgs& a) {
  if (!is_power_of_two(a.n) || a.n < 2) throw std::invalid_argument("--n must be a power of 2, >= 2");
  ReliabilityFile rel;
  rel.method = a.mode;
  if (a.mode == "bec") {
    rel.channel.kind = ChannelKind::bec;
    rel.channel.eps = a.eps;
    rel.values = estimate_bitchannels_bec(a.n, a.eps);
  } else if (a.mode == "mc") {
    rel.channel.kind = ChannelKind::awgn;
    rel.channel.ebn0_db = a.ebn0;
    rel.channel.rate = a.rate;
    rel.trials = a.trials;
    rel.seed = a.seed;
    rel.values = estimate_bitchannels_mc(a.n, rel.channel, a.trials, a.seed);
  } else {
    throw std::invalid_argument("--mode must be mc or bec");
  }
  return rel;
}

struct DesignArgs {
  EstimateArgs est;
  std::string reliabilities;
  std::size_t m = 15;
  unsigned t = 4;
  std::optional<double> target_rate;
  std::size_t k_min = 170, k_max = 256;
  std::optional<std::size_t> k;
  std::optional<std::size_t> tau;  // uniform radius instead of the rate-matched design
  bool polar_only = false;
  bool list = false;
  std::string out;
};

int cmd_design(const DesignArgs& a) {
  ReliabilityFile rel;
  if (!a.reliabilities.empty()) {
    rel = load_reliabilities(a.reliabilities);
  } else {
    EstimateArgs est = a.est;
    est.mode = "mc";
    rel = run_estimate(est);
  }
  const std::size_t n = rel.values.size();
  const double target = a.target_rate.value_or(1.0 / 3.0);

  DesignMetadata meta;
  meta.ebn0_db = rel.channel.ebn0_db;
  meta.estimate_rate = rel.channel.rate;
  meta.trials = rel.trials;
  meta.seed = rel.seed;
  meta.target_rate = target;

  if (a.polar_only) {
    const std::size_t k = a.k.value_or(static_cast<std::size_t>(std::floor(target * n)));
    const PolarCode code = PolarCode::select_frozen(rel.values, k);
    meta.method = "polar";
    emit(a.out, to_json(code, meta).dump(2) + "\n");
    std::cerr << "polar code n=" << n << " k=" << k << " rate=" << double(k) / n << "\n";
    return 0;
  }

  auto field = std::make_shared<const GaloisField>(a.t, GaloisField::default_polynomial(a.t));

  if (a.tau) {
    if (!a.k) throw std::invalid_argument("--tau needs --k");
    if (*a.k % a.t != 0) throw std::invalid_argument("--k must be a multiple of t");
    const PolarCode inner = PolarCode::select_frozen(rel.values, *a.k);
    const ConcatCode code(inner, field, a.m, std::vector<std::size_t>(*a.k / a.t, *a.tau));
    meta.method = "uniform";
    emit(a.out, to_json(code, meta).dump(2) + "\n");
    std::cerr << "uniform design k=" << *a.k << " tau=" << *a.tau << " rate=" << code.total_rate() << "\n";
    return 0;
  }

  const std::size_t lo = a.k ? *a.k : a.k_min;
  const std::size_t hi = a.k ? *a.k : a.k_max;
  const auto cands = design_target_rate(rel.values, a.t, a.m, target, lo, hi);
  if (a.list)
    for (const auto& c : cands) std::cerr << "k=" << c.k << " rate=" << c.rate << " pe=" << sci(c.pe) << "\n";

  // every candidate is within tolerance of the rate; prefer the one whose
  // sub-blocks met the strictest error target
  const DesignCandidate* best = &cands.front();
  for (const auto& c : cands)
    if (c.pe < best->pe) best = &c;
  const ConcatCode code = make_concat(rel.values, *best, field, a.m);
  meta.method = "target_rate";
  meta.pe = best->pe;
  emit(a.out, to_json(code, meta).dump(2) + "\n");
  std::cerr << "design k=" << best->k << " rate=" << best->rate << " pe=" << sci(best->pe) << "\n";
  return 0;
}

int cmd_estimate(const EstimateArgs& a) {
  const ReliabilityFile rel = run_estimate(a);
  if (a.out.empty()) {
    for (std::size_t i = 0; i < rel.values.size(); ++i) std::cout << i << ' ' << sci(rel.values[i]) << "\n";
  } else {
    write_file_atomic(a.out, to_json(rel).dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct CodecArgs {
  std::string spec;
  std::string in;
  std::string out;
  std::string mode = "gmd_eml";
  bool llr_input = false;
  std::optional<std::size_t> length;
};

std::size_t payload_bits(const CodeFile& f) {
  return f.is_concat() ? f.concat->payload_bits() : f.polar->dimension();
}

std::size_t frame_bits(const CodeFile& f) {
  return f.is_concat() ? f.concat->frame_bits() : f.polar->length();
}

int cmd_encode(const CodecArgs& a) {
  const CodeFile f = load_code(a.spec);
  std::vector<Bit> bits = unpack(read_all(a.in));
  const std::size_t k = payload_bits(f);
  const std::size_t frames = std::max<std::size_t>(1, (bits.size() + k - 1) / k);
  bits.resize(frames * k, 0);
  std::vector<Bit> out;
  out.reserve(frames * frame_bits(f));
  for (std::size_t fr = 0; fr < frames; ++fr) {
    const std::span<const Bit> payload(bits.data() + fr * k, k);
    if (f.is_concat()) {
      for (const auto& block : f.concat->encode(payload)) out.insert(out.end(), block.begin(), block.end());
    } else {
      const auto x = f.polar->encode(payload);
      out.insert(out.end(), x.begin(), x.end());
    }
  }
  write_file_atomic(a.out, pack(out));
  std::cerr << frames << " frame(s), " << out.size() << " code bits\n";
  return 0;
}

int cmd_decode(const CodecArgs& a) {
  const CodeFile f = load_code(a.spec);
  const std::string raw = read_all(a.in);
  std::vector<double> llrs;
  if (a.llr_input) {
    if (raw.size() % sizeof(double) != 0) throw std::invalid_argument("LLR file is not a whole number of doubles");
    llrs.resize(raw.size() / sizeof(double));
    std::memcpy(llrs.data(), raw.data(), raw.size());
  } else {
    for (Bit b : unpack(raw)) llrs.push_back(b ? -kLlrMax : kLlrMax);
  }
  const std::size_t nb = frame_bits(f);
  const std::size_t frames = llrs.size() / nb;
  if (frames == 0 || (a.llr_input && llrs.size() % nb != 0))
    throw std::invalid_argument("input does not hold a whole number of frames");

  std::vector<Bit> payload;
  for (std::size_t fr = 0; fr < frames; ++fr) {
    const double* base = llrs.data() + fr * nb;
    if (f.is_concat()) {
      const ConcatCode& code = *f.concat;
      const std::size_t n = code.polar().length();
      LlrMatrix m(code.blocks());
      for (std::size_t j = 0; j < code.blocks(); ++j) m[j].assign(base + j * n, base + (j + 1) * n);
      DecodeOptions opt;
      opt.mode = decode_mode_from_string(a.mode);
      const DecodeResult r = decode(code, m, opt);
      payload.insert(payload.end(), r.payload.begin(), r.payload.end());
    } else {
      const ScResult r = sc_decode(*f.polar, std::span(base, nb));
      payload.insert(payload.end(), r.info_bits.begin(), r.info_bits.end());
    }
  }
  std::string bytes = pack(payload);
  if (a.length) {
    if (*a.length > bytes.size()) throw std::invalid_argument("--length exceeds the decoded payload");
    bytes.resize(*a.length);
  } else {
    bytes.resize(payload.size() / 8);
  }
  write_file_atomic(a.out, bytes);
  std::cerr << frames << " frame(s) decoded\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct SimArgs {
  std::string spec;
  std::vector<double> snr;
  std::vector<std::string> modes;
  std::string channel = "awgn";
  std::uint64_t trials = 1000;
  std::uint64_t max_errors = 200;
  std::uint64_t seed = 1;
  std::uint64_t batch = 256;
  int threads = 0;
  bool serial = false;
  bool min_sum = false;
  bool timing = false;
  std::string csv;
  std::string json_out;
};

int cmd_simulate(const SimArgs& a) {
  const CodeFile f = load_code(a.spec);
  SimConfig cfg;
  if (f.is_concat())
    cfg.concat = std::make_shared<const ConcatCode>(*f.concat);
  else
    cfg.polar = std::make_shared<const PolarCode>(*f.polar);
  cfg.channel = channel_kind_from_string(a.channel);
  cfg.points = a.snr;
  cfg.modes = a.modes.empty() ? std::vector<std::string>{f.is_concat() ? "gmd_eml" : kPolarBaseline} : a.modes;
  cfg.trials = a.trials;
  cfg.max_frame_errors = a.max_errors;
  cfg.seed = a.seed;
  cfg.batch = a.batch;
  cfg.exec = a.serial ? Execution::serial : Execution::parallel;
  cfg.node = a.min_sum ? CheckNode::min_sum : CheckNode::exact;
  cfg.spec_label = std::filesystem::path(a.spec).filename().string();
  cfg.validate();  // everything is checked before the first trial
  set_threads(a.threads);

  std::vector<SimRow> rows;
  for (double p : cfg.points)
    for (const std::string& mode : cfg.modes) {
      rows.push_back(run_cell(cfg, p, mode));
      const SimRow& r = rows.back();
      std::cerr << mode << " @ " << p << ": bler " << sci(r.bler) << " fer " << sci(r.fer) << " ("
                << r.trials << " trials, " << r.wall_time << " s)\n";
    }
  const std::string csv = results_csv(cfg, rows);
  if (a.csv.empty() && a.json_out.empty()) std::cout << csv;
  if (!a.csv.empty()) write_file_atomic(a.csv, csv);
  if (!a.json_out.empty()) write_file_atomic(a.json_out, results_json(cfg, rows, a.timing).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::optional<std::size_t> m;
  std::optional<std::size_t> tau;
  std::optional<double> pe;
  std::optional<double> n;
  std::optional<double> outer_rate;
  std::optional<double> eps;
  std::optional<double> frame_length;
  std::optional<double> q;
  std::optional<double> threshold;
};

int cmd_bound(const BoundArgs& a) {
  bool any = false;
  if (a.m && a.tau && a.pe) {
    std::cout << sci(fep_bound(*a.m, *a.tau, *a.pe)) << "\n";
    any = true;
  }
  if (a.m && a.q && a.threshold) {
    // least tau with C(m, tau+1) q^(tau+1) < threshold, as in the rate-adaptive design
    const std::size_t cap = (*a.m - 1) / 2;
    std::size_t tau = 0;
    while (tau <= cap && fep_bound(*a.m, tau, *a.q) >= *a.threshold) ++tau;
    if (tau > cap)
      std::cout << "tau infeasible (cap " << cap << ")\n";
    else
      std::cout << "tau " << tau << " bound " << sci(fep_bound(*a.m, tau, *a.q)) << "\n";
    any = true;
  }
  if (a.n && a.m && a.outer_rate && a.eps) {
    const double l2 = lemma1_log2_bound(*a.n, double(*a.m), *a.outer_rate, *a.eps);
    std::cout << "bound " << sci(std::exp2(l2)) << " log2 " << l2 << "\n";
    any = true;
  }
  if (a.frame_length && a.eps) {
    const Theorem1Params p = theorem1_params(*a.frame_length, *a.eps);
    std::cout << "n " << p.n << " m " << p.m << " R_o " << p.outer_rate
              << (p.rate_feasible ? "" : " (infeasible: R_o <= 0)") << "\n";
    if (p.rate_feasible && p.outer_rate < 1.0)
      std::cout << "log2 bound " << lemma1_log2_bound(p.n, p.m, p.outer_rate, *a.eps) << "\n";
    any = true;
  }
  if (!any)
    throw std::invalid_argument(
        "bound needs --m --tau --pe, --m --q --threshold, --n --m --ro --eps, or --N --eps");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RS-polar concatenated codes: design, simulation and bounds"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate polar bit-channel error probabilities");
  estimate->add_option("--mode", est.mode, "mc (genie Monte Carlo on AWGN) or bec (exact)")
      ->check(CLI::IsMember({"mc", "bec"}))->capture_default_str();
  estimate->add_option("--n", est.n, "Polar length")->capture_default_str();
  estimate->add_option("--eps", est.eps, "BEC erasure probability")->capture_default_str();
  estimate->add_option("--ebn0", est.ebn0, "Eb/N0 in dB")->capture_default_str();
  estimate->add_option("--rate", est.rate, "Rate used for the Eb/N0 conversion")->capture_default_str();
  estimate->add_option("--trials", est.trials, "Monte Carlo trials")->capture_default_str();
  estimate->add_option("--seed", est.seed, "Seed")->capture_default_str();
  estimate->add_option("-o,--out", est.out, "Reliability JSON (default: print)");

  DesignArgs des;
  auto* design = app.add_subcommand("design", "Design a concatenated (or plain polar) code");
  design->add_option("--reliabilities", des.reliabilities, "Reliability JSON; estimated when absent");
  design->add_option("--n", des.est.n, "Polar length")->capture_default_str();
  design->add_option("--m", des.m, "Outer length / number of polar blocks")->capture_default_str();
  design->add_option("--t", des.t, "Symbol bits")->capture_default_str();
  design->add_option("--rate", des.target_rate, "Target total rate (default 1/3)");
  design->add_option("--ebn0", des.est.ebn0, "Design Eb/N0 in dB")->capture_default_str();
  design->add_option("--estimate-rate", des.est.rate, "Rate for the estimation channel")->capture_default_str();
  design->add_option("--trials", des.est.trials, "Estimation trials")->capture_default_str();
  design->add_option("--seed", des.est.seed, "Estimation seed")->capture_default_str();
  design->add_option("--kmin", des.k_min, "Smallest inner dimension")->capture_default_str();
  design->add_option("--kmax", des.k_max, "Largest inner dimension")->capture_default_str();
  design->add_option("--k", des.k, "Fix the inner dimension");
  design->add_option("--tau", des.tau, "Uniform outer radius (needs --k)");
  design->add_flag("--polar", des.polar_only, "Write a plain polar code of the target rate");
  design->add_flag("--list", des.list, "Print every feasible candidate");
  design->add_option("-o,--out", des.out, "Output spec JSON (default: print)");

  CodecArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode a binary payload file");
  encode->add_option("--spec", enc.spec, "Code spec JSON")->required()->check(CLI::ExistingFile);
  encode->add_option("-i,--in", enc.in, "Payload bytes (bits LSB first)")->required()->check(CLI::ExistingFile);
  encode->add_option("-o,--out", enc.out, "Packed code bits")->required();

  CodecArgs dec;
  auto* decode_cmd = app.add_subcommand("decode", "Decode hard bits or LLRs back to the payload");
  decode_cmd->add_option("--spec", dec.spec, "Code spec JSON")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("-i,--in", dec.in, "Packed hard bits, or float64 LLRs with --llr")
      ->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("-o,--out", dec.out, "Payload bytes")->required();
  decode_cmd->add_option("--mode", dec.mode, "Decoder")
      ->check(CLI::IsMember({"serial", "successive_hard", "gmd", "gmd_aml", "gmd_eml"}))->capture_default_str();
  decode_cmd->add_flag("--llr", dec.llr_input, "Input is native float64 LLRs");
  decode_cmd->add_option("--length", dec.length, "Truncate the output to this many bytes");

  SimArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo BLER/FER sweep");
  simulate->add_option("--spec", sim.spec, "Code spec JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--snr", sim.snr, "Eb/N0 points in dB (or erasure probabilities for bec)")
      ->required()->delimiter(',');
  simulate->add_option("--modes", sim.modes, "Decoders (default gmd_eml, or polar for a polar spec)")
      ->delimiter(',');
  simulate->add_option("--channel", sim.channel, "awgn or bec")->check(CLI::IsMember({"awgn", "bec"}))
      ->capture_default_str();
  simulate->add_option("--trials", sim.trials, "Trials per point")->capture_default_str();
  simulate->add_option("--max-errors", sim.max_errors, "Stop a point after this many frame errors (0 = never)")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  simulate->add_option("--batch", sim.batch, "Trials per parallel batch")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "OpenMP threads (0 = runtime default)");
  simulate->add_flag("--serial", sim.serial, "Run trials on one thread");
  simulate->add_flag("--min-sum", sim.min_sum, "Min-sum check nodes instead of the exact rule");
  simulate->add_flag("--timing", sim.timing, "Include wall time in the JSON output");
  simulate->add_option("--csv", sim.csv, "CSV output");
  simulate->add_option("--json", sim.json_out, "JSON output");

  BoundArgs bnd;
  auto* bound = app.add_subcommand("bound", "Evaluate the frame error bounds");
  bound->add_option("--m", bnd.m, "Outer length");
  bound->add_option("--tau", bnd.tau, "Outer radius");
  bound->add_option("--pe", bnd.pe, "Symbol error probability");
  bound->add_option("--q", bnd.q, "Symbol error probability for the radius search");
  bound->add_option("--threshold", bnd.threshold, "Per-code frame error threshold for the radius search");
  bound->add_option("--n", bnd.n, "Inner length");
  bound->add_option("--ro", bnd.outer_rate, "Outer rate");
  bound->add_option("--eps", bnd.eps, "Polarization exponent margin");
  bound->add_option("--N", bnd.frame_length, "Frame length");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) return cmd_estimate(est);
    if (*design) return cmd_design(des);
    if (*encode) return cmd_encode(enc);
    if (*decode_cmd) return cmd_decode(dec);
    if (*simulate) return cmd_simulate(sim);
    if (*bound) return cmd_bound(bnd);
  } catch (const std::exception& e) {
    std::cerr << "rspolar: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
