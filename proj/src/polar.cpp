#include "rspolar/polar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rspolar {

namespace {

unsigned log2_exact(std::size_t n) { return static_cast<unsigned>(std::countr_zero(n)); }

std::size_t reverse_bits(std::size_t i, unsigned width) {
  std::size_t r = 0;
  for (unsigned b = 0; b < width; ++b) r |= ((i >> b) & 1u) << (width - 1 - b);
  return r;
}

inline double saturate(double x) { return std::clamp(x, -kLlrMax, kLlrMax); }

// 2 atanh(tanh(a/2) tanh(b/2)) = sign * ln((1 + xy) / (x + y)), x = e^-|a|, y = e^-|b|.
// Inputs are saturated at kLlrMax, so neither exponential underflows.
inline double check_exact(double a, double b) {
  const double x = std::exp(-std::fabs(a));
  const double y = std::exp(-std::fabs(b));
  const double mag = std::log((1.0 + x * y) / (x + y));
  return saturate(((a < 0) != (b < 0)) ? -mag : mag);
}

inline double check_min_sum(double a, double b) {
  const double mag = std::min(std::fabs(a), std::fabs(b));
  return ((a < 0) != (b < 0)) ? -mag : mag;
}

inline double variable(double left, double right, Bit partial) {
  return saturate(partial ? right - left : right + left);
}

inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// log P(bit | llr) with llr = ln P(0)/P(1)
inline double log_prob(Bit bit, double llr) { return bit ? -softplus(llr) : -softplus(-llr); }

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<Bit> polar_transform(std::span<const Bit> bits) {
  const std::size_t n = bits.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("polar transform length must be a power of 2");
  std::vector<Bit> v(bits.begin(), bits.end());
  for (std::size_t s = 1; s < n; s <<= 1)
    for (std::size_t blk = 0; blk < n; blk += 2 * s)
      for (std::size_t j = blk; j < blk + s; ++j) v[j] ^= v[j + s];
  const unsigned width = log2_exact(n);
  std::vector<Bit> x(n);
  for (std::size_t i = 0; i < n; ++i) x[reverse_bits(i, width)] = v[i] & 1u;
  return x;
}

// ---------------------------------------------------------------------------
// PolarCode

PolarCode::PolarCode(std::size_t n, std::vector<std::size_t> info_positions,
                     std::vector<double> reliabilities)
    : n_(n), info_(std::move(info_positions)), reliabilities_(std::move(reliabilities)) {
  if (n < 2 || !is_power_of_two(n)) throw std::invalid_argument("polar length must be a power of 2, >= 2");
  depth_ = log2_exact(n);
  frozen_.assign(n, 1);
  for (std::size_t i = 0; i < info_.size(); ++i) {
    if (info_[i] >= n) throw std::invalid_argument("information position out of range");
    if (i > 0 && info_[i] <= info_[i - 1])
      throw std::invalid_argument("information positions must be strictly increasing");
    frozen_[info_[i]] = 0;
  }
  if (!reliabilities_.empty()) {
    if (reliabilities_.size() != n) throw std::invalid_argument("reliability vector length must equal n");
    for (double p : reliabilities_)
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bit-channel error estimates must lie in [0, 1]");
  }
  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) bitrev_[i] = reverse_bits(i, depth_);
}

PolarCode PolarCode::select_frozen(std::span<const double> reliabilities, std::size_t k) {
  const std::size_t n = reliabilities.size();
  if (k == 0 || k > n) throw std::invalid_argument("k must be in (0, n]");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return reliabilities[a] < reliabilities[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return PolarCode(n, std::move(idx), std::vector<double>(reliabilities.begin(), reliabilities.end()));
}

std::vector<std::size_t> PolarCode::frozen_positions() const {
  std::vector<std::size_t> out;
  out.reserve(n_ - info_.size());
  for (std::size_t i = 0; i < n_; ++i)
    if (frozen_[i]) out.push_back(i);
  return out;
}

std::vector<Bit> PolarCode::encode(std::span<const Bit> info) const {
  if (info.size() != info_.size()) throw std::invalid_argument("polar info length mismatch");
  std::vector<Bit> u(n_, 0);
  for (std::size_t i = 0; i < info.size(); ++i) u[info_[i]] = info[i] & 1u;
  return polar_transform(u);
}

// ---------------------------------------------------------------------------
// ScState

ScState::ScState(const PolarCode& code, std::span<const double> channel_llrs, CheckNode node)
    : code_(&code), node_(node), depth_(code.depth()), n_(code.length()) {
  if (channel_llrs.size() != n_) throw std::invalid_argument("channel LLR length must equal n");
  channel_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) channel_[i] = saturate(channel_llrs[code.bit_reversed(i)]);
  alpha_.assign(n_ - 1, 0.0);
  beta_.assign(2 * n_ - 1, 0);
  u_.assign(n_, 0);
}

double ScState::leaf_llr(std::size_t i) {
  const unsigned start = (i == 0) ? depth_ - 1 : static_cast<unsigned>(std::countr_zero(i));
  for (int l = static_cast<int>(start); l >= 0; --l) {
    const std::size_t s = std::size_t{1} << l;
    const double* parent =
        (static_cast<unsigned>(l) + 1 == depth_) ? channel_.data() : alpha_.data() + 2 * s - 1;
    double* cur = alpha_.data() + s - 1;
    if ((i >> l) & 1u) {
      const Bit* left = beta_.data() + s - 1;
      for (std::size_t j = 0; j < s; ++j) cur[j] = variable(parent[j], parent[j + s], left[j]);
    } else if (node_ == CheckNode::exact) {
      for (std::size_t j = 0; j < s; ++j) cur[j] = check_exact(parent[j], parent[j + s]);
    } else {
      for (std::size_t j = 0; j < s; ++j) cur[j] = check_min_sum(parent[j], parent[j + s]);
    }
  }
  return alpha_[0];
}

void ScState::commit(std::size_t i, Bit b) {
  u_[i] = b;
  // the completed node is a left child at layer tw (or the root)
  const unsigned tw = static_cast<unsigned>(std::countr_one(i));
  Bit* dst = beta_.data() + (std::size_t{1} << tw) - 1;
  dst[0] = b;
  for (unsigned l = 0; l < tw; ++l) {
    const std::size_t s = std::size_t{1} << l;
    const Bit* left = beta_.data() + s - 1;
    for (std::size_t j = 0; j < s; ++j) {
      const Bit c = dst[j];
      dst[s + j] = c;
      dst[j] = left[j] ^ c;
    }
  }
}

unsigned ScState::touched_layer(std::size_t first, std::size_t last) const {
  unsigned h = 0;
  for (std::size_t i = first; i <= last; ++i) {
    const unsigned start = (i == 0) ? depth_ - 1 : static_cast<unsigned>(std::countr_zero(i));
    const unsigned tw = static_cast<unsigned>(std::countr_one(i));
    h = std::max({h, start, tw});
  }
  return h;
}

std::size_t ScState::alpha_prefix(unsigned layer) const {
  return (std::size_t{1} << (std::min(layer, depth_ - 1) + 1)) - 1;
}

std::size_t ScState::beta_prefix(unsigned layer) const { return (std::size_t{1} << (layer + 1)) - 1; }

void ScState::save_span_start(std::size_t last_leaf) {
  span_begin_ = next_;
  span_info_begin_ = info_done_;
  span_layer_ = touched_layer(next_, last_leaf);
  snap_alpha_.assign(alpha_.begin(), alpha_.begin() + static_cast<std::ptrdiff_t>(alpha_prefix(span_layer_)));
  snap_beta_.assign(beta_.begin(), beta_.begin() + static_cast<std::ptrdiff_t>(beta_prefix(span_layer_)));
}

void ScState::run_span(std::size_t last_leaf, std::span<const std::int8_t> forced,
                       std::span<const Bit> info_override) {
  span_bits_.clear();
  span_llrs_.clear();
  std::size_t info_idx = 0;
  for (std::size_t i = next_; i <= last_leaf; ++i) {
    const double llr = leaf_llr(i);
    Bit b;
    if (!forced.empty() && forced[i] >= 0) {
      b = static_cast<Bit>(forced[i] & 1);
    } else if (code_->is_frozen(i)) {
      b = 0;
    } else if (!info_override.empty()) {
      b = info_override[info_idx] & 1u;
    } else {
      b = llr < 0.0 ? 1 : 0;
    }
    if (!code_->is_frozen(i)) {
      span_bits_.push_back(b);
      span_llrs_.push_back(llr);
      ++info_idx;
    }
    commit(i, b);
  }
  next_ = last_leaf + 1;
  info_done_ += info_idx;
}

SpanResult ScState::decode_span(std::size_t count, std::span<const std::int8_t> forced) {
  if (count == 0) throw std::invalid_argument("span must cover at least one information bit");
  if (count > remaining_info()) throw std::out_of_range("span exceeds remaining information positions");
  if (!forced.empty() && forced.size() != n_) throw std::invalid_argument("forced map must have length n");
  const std::size_t last = code_->info_positions()[info_done_ + count - 1];
  save_span_start(last);
  run_span(last, forced, {});
  return {span_bits_, span_llrs_};
}

void ScState::resume_with(std::span<const Bit> corrected) {
  if (corrected.size() != span_bits_.size() || span_bits_.empty())
    throw std::invalid_argument("corrected bits must match the most recent span");
  if (std::equal(corrected.begin(), corrected.end(), span_bits_.begin())) return;

  const std::vector<Bit> bits(corrected.begin(), corrected.end());
  std::copy(snap_alpha_.begin(), snap_alpha_.end(), alpha_.begin());
  std::copy(snap_beta_.begin(), snap_beta_.end(), beta_.begin());
  next_ = span_begin_;
  info_done_ = span_info_begin_;
  const std::size_t last = code_->info_positions()[info_done_ + bits.size() - 1];
  run_span(last, {}, bits);
}

SymbolLikelihoods ScState::symbol_paths(unsigned t) {
  if (t == 0 || t > 16) throw std::invalid_argument("symbol width must be in [1, 16]");
  if (t > remaining_info()) throw std::out_of_range("fewer than t information positions remain");

  const std::size_t last = code_->info_positions()[info_done_ + t - 1];
  save_span_start(last);

  SymbolLikelihoods out;
  out.t = t;
  out.base_next = next_;
  out.base_info = info_done_;
  out.span_end = last + 1;
  out.alpha_len = snap_alpha_.size();
  out.beta_len = snap_beta_.size();
  const std::size_t q = std::size_t{1} << t;
  const std::size_t leaves = out.span_end - next_;
  out.probs.assign(q, 0.0);
  out.log_metric.assign(q, 0.0);
  out.alpha.resize(q * out.alpha_len);
  out.beta.resize(q * out.beta_len);
  out.leaves.resize(q * leaves);
  out.llrs.resize(q * t);

  stack_alpha_.resize(t * out.alpha_len);
  stack_beta_.resize(t * out.beta_len);
  std::vector<double> path_llrs(t);
  explore(next_, 0, 0, 0.0, out, path_llrs);

  // leave the base state as it was
  std::copy(snap_alpha_.begin(), snap_alpha_.end(), alpha_.begin());
  std::copy(snap_beta_.begin(), snap_beta_.end(), beta_.begin());

  const double top = *std::max_element(out.log_metric.begin(), out.log_metric.end());
  double total = 0.0;
  for (std::size_t s = 0; s < q; ++s) total += out.probs[s] = std::exp(out.log_metric[s] - top);
  for (double& p : out.probs) p /= total;
  return out;
}

void ScState::explore(std::size_t leaf, unsigned depth, Symbol sym, double metric,
                      SymbolLikelihoods& out, std::vector<double>& path_llrs) {
  std::size_t i = leaf;
  for (; code_->is_frozen(i); ++i) {
    metric += log_prob(0, leaf_llr(i));
    commit(i, 0);
  }
  const double llr = leaf_llr(i);
  path_llrs[depth] = llr;

  double* sa = stack_alpha_.data() + depth * out.alpha_len;
  Bit* sb = stack_beta_.data() + depth * out.beta_len;
  std::copy_n(alpha_.begin(), out.alpha_len, sa);
  std::copy_n(beta_.begin(), out.beta_len, sb);

  for (Bit bit = 0; bit < 2; ++bit) {
    if (bit == 1) {
      std::copy_n(sa, out.alpha_len, alpha_.begin());
      std::copy_n(sb, out.beta_len, beta_.begin());
    }
    commit(i, bit);
    const Symbol next_sym = static_cast<Symbol>(sym | (bit << depth));
    const double next_metric = metric + log_prob(bit, llr);
    if (depth + 1 == out.t) {
      const std::size_t leaves = out.span_end - out.base_next;
      out.log_metric[next_sym] = next_metric;
      std::copy_n(alpha_.begin(), out.alpha_len, out.alpha.begin() + next_sym * out.alpha_len);
      std::copy_n(beta_.begin(), out.beta_len, out.beta.begin() + next_sym * out.beta_len);
      std::copy_n(u_.begin() + out.base_next, leaves, out.leaves.begin() + next_sym * leaves);
      std::copy(path_llrs.begin(), path_llrs.end(), out.llrs.begin() + next_sym * out.t);
    } else {
      explore(i + 1, depth + 1, next_sym, next_metric, out, path_llrs);
    }
  }
}

void ScState::take_path(const SymbolLikelihoods& paths, Symbol symbol) {
  if (paths.base_next != next_ || paths.base_info != info_done_)
    throw std::invalid_argument("symbol paths were computed from a different state");
  const std::size_t q = std::size_t{1} << paths.t;
  if (symbol >= q) throw std::out_of_range("symbol outside the field");

  const std::size_t leaves = paths.span_end - paths.base_next;
  std::copy_n(paths.alpha.begin() + symbol * paths.alpha_len, paths.alpha_len, alpha_.begin());
  std::copy_n(paths.beta.begin() + symbol * paths.beta_len, paths.beta_len, beta_.begin());
  std::copy_n(paths.leaves.begin() + symbol * leaves, leaves, u_.begin() + paths.base_next);
  next_ = paths.span_end;
  info_done_ += paths.t;

  span_bits_.resize(paths.t);
  for (unsigned b = 0; b < paths.t; ++b) span_bits_[b] = (symbol >> b) & 1u;
  span_llrs_.assign(paths.llrs.begin() + symbol * paths.t, paths.llrs.begin() + (symbol + 1) * paths.t);
}

Symbol SymbolLikelihoods::most_likely() const {
  return static_cast<Symbol>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

ScResult sc_decode(const PolarCode& code, std::span<const double> llrs,
                   std::span<const std::int8_t> forced, CheckNode node) {
  ScState state(code, llrs, node);
  if (code.dimension() == 0) return {{}, {}, std::move(state)};
  SpanResult r = state.decode_span(code.dimension(), forced);
  return {std::move(r.bits), std::move(r.llrs), std::move(state)};
}

// ---------------------------------------------------------------------------
// bit-channel estimation

GenieStats estimate_bitchannels_mc_stats(std::size_t n, const ChannelParams& channel,
                                         std::size_t trials, std::uint64_t seed, bool parallel) {
  if (trials == 0) throw std::invalid_argument("estimation needs at least one trial");
  channel.validate();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const PolarCode code(n, std::move(all));

  // counts in half-errors so ties stay integral and the sum order-independent
  std::vector<unsigned long long> halves(n, 0), first(n, 0), ties(n, 0);
  const std::vector<Bit> zeros(n, 0);
  const std::vector<std::int8_t> genie(n, 0);
  ChannelParams params = channel;
  params.seed = seed;

#pragma omp parallel if (parallel)
  {
    std::vector<unsigned long long> local_halves(n, 0), local_first(n, 0), local_ties(n, 0);
    std::vector<double> llrs(n);
#pragma omp for schedule(static)
    for (long long s = 0; s < static_cast<long long>(trials); ++s) {
      Rng rng = make_stream(seed, static_cast<std::uint64_t>(s));
      transmit(params, zeros, rng, llrs);
      const ScResult res = sc_decode(code, llrs, genie);
      bool seen = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double l = res.info_llrs[i];
        if (l < 0.0) {
          local_halves[i] += 2;
          if (!seen) local_first[i] += 1;
          seen = true;
        } else if (l == 0.0) {
          local_halves[i] += 1;
          local_ties[i] += 1;
        }
      }
    }
#pragma omp critical
    for (std::size_t i = 0; i < n; ++i) {
      halves[i] += local_halves[i];
      first[i] += local_first[i];
      ties[i] += local_ties[i];
    }
  }

  GenieStats out;
  out.trials = trials;
  out.error_prob.resize(n);
  out.first_error.resize(n);
  out.tie_rate.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.error_prob[i] = static_cast<double>(halves[i]) / (2.0 * static_cast<double>(trials));
    out.first_error[i] = static_cast<double>(first[i]) / static_cast<double>(trials);
    out.tie_rate[i] = static_cast<double>(ties[i]) / static_cast<double>(trials);
  }
  return out;
}

std::vector<double> estimate_bitchannels_mc(std::size_t n, const ChannelParams& channel,
                                            std::size_t trials, std::uint64_t seed, bool parallel) {
  return estimate_bitchannels_mc_stats(n, channel, trials, seed, parallel).error_prob;
}

std::vector<double> estimate_bitchannels_bec(std::size_t n, double eps) {
  if (!is_power_of_two(n)) throw std::invalid_argument("polar length must be a power of 2");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("erasure probability must be in [0, 1]");
  const unsigned depth = log2_exact(n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = eps;
    for (int l = static_cast<int>(depth) - 1; l >= 0; --l) v = ((i >> l) & 1u) ? v * v : 2.0 * v - v * v;
    z[i] = v;
  }
  return z;
}

}  // namespace rspolar
