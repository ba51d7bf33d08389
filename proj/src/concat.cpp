#include "rspolar/concat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rspolar {

std::string to_string(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::serial: return "serial";
    case DecodeMode::successive_hard: return "successive_hard";
    case DecodeMode::gmd: return "gmd";
    case DecodeMode::gmd_aml: return "gmd_aml";
    case DecodeMode::gmd_eml: return "gmd_eml";
  }
  return "?";
}

DecodeMode decode_mode_from_string(const std::string& name) {
  for (DecodeMode m : {DecodeMode::serial, DecodeMode::successive_hard, DecodeMode::gmd,
                       DecodeMode::gmd_aml, DecodeMode::gmd_eml})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown decode mode '" + name + "'");
}

ConcatCode::ConcatCode(PolarCode polar, std::shared_ptr<const GaloisField> field, std::size_t m,
                       std::vector<std::size_t> taus)
    : polar_(std::move(polar)), field_(std::move(field)), m_(m), taus_(std::move(taus)) {
  if (!field_) throw std::invalid_argument("concatenated code needs a field");
  const unsigned t = field_->degree();
  const std::size_t k = polar_.dimension();
  if (k == 0 || k % t != 0) throw std::invalid_argument("t must divide the polar dimension k");
  if (taus_.size() != k / t) throw std::invalid_argument("need one radius per outer code (k/t)");
  outer_.reserve(taus_.size());
  for (std::size_t tau : taus_) {
    outer_.emplace_back(field_, m_, tau);
    payload_bits_ += t * outer_.back().dimension();
  }
}

std::span<const std::size_t> ConcatCode::group(std::size_t i) const {
  const unsigned t = symbol_bits();
  return std::span(polar_.info_positions()).subspan(i * t, t);
}

SymbolMatrix ConcatCode::outer_encode(std::span<const Bit> payload) const {
  if (payload.size() != payload_bits_) throw std::invalid_argument("payload length mismatch");
  const unsigned t = symbol_bits();
  SymbolMatrix rows(outer_.size());
  std::size_t pos = 0;
  std::vector<Symbol> msg;
  for (std::size_t i = 0; i < outer_.size(); ++i) {
    msg.assign(outer_[i].dimension(), 0);
    for (Symbol& s : msg) {
      s = field_->from_bits(payload.subspan(pos, t));
      pos += t;
    }
    rows[i] = outer_[i].encode(msg);
  }
  return rows;
}

std::vector<Bit> ConcatCode::payload_from(const SymbolMatrix& codewords) const {
  const unsigned t = symbol_bits();
  std::vector<Bit> out(payload_bits_);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < outer_.size(); ++i)
    for (std::size_t j = 0; j < outer_[i].dimension(); ++j) {
      field_->to_bits(codewords[i][j], std::span(out).subspan(pos, t));
      pos += t;
    }
  return out;
}

std::vector<Bit> ConcatCode::inner_input(const SymbolMatrix& codewords, std::size_t j) const {
  const unsigned t = symbol_bits();
  std::vector<Bit> info(polar_.dimension());
  for (std::size_t i = 0; i < outer_.size(); ++i)
    field_->to_bits(codewords[i][j], std::span(info).subspan(i * t, t));
  return info;
}

BitMatrix ConcatCode::encode(std::span<const Bit> payload, Execution exec) const {
  const SymbolMatrix rows = outer_encode(payload);
  BitMatrix blocks(m_);
  const long long m = static_cast<long long>(m_);
#pragma omp parallel for if (exec == Execution::parallel) schedule(static)
  for (long long j = 0; j < m; ++j)
    blocks[j] = polar_.encode(inner_input(rows, static_cast<std::size_t>(j)));
  return blocks;
}

SymbolSoft symbol_reliability_from_llrs(std::span<const double> bit_llrs) {
  const std::size_t t = bit_llrs.size();
  if (t == 0 || t > 16) throw std::invalid_argument("symbol width must be in [1, 16]");
  SymbolSoft out;
  // P(bit = 0) = 1 / (1 + e^{-llr})
  std::vector<double> p0(t), p1(t);
  out.reliability = 1.0;
  for (std::size_t b = 0; b < t; ++b) {
    const double l = bit_llrs[b];
    p0[b] = 1.0 / (1.0 + std::exp(-l));
    p1[b] = 1.0 / (1.0 + std::exp(l));
    if (l < 0.0) out.hard |= static_cast<Symbol>(1u << b);
    out.reliability *= 1.0 / (1.0 + std::exp(-std::fabs(l)));
  }
  const std::size_t q = std::size_t{1} << t;
  out.probs.resize(q);
  double total = 0.0;
  for (std::size_t s = 0; s < q; ++s) {
    double p = 1.0;
    for (std::size_t b = 0; b < t; ++b) p *= ((s >> b) & 1u) ? p1[b] : p0[b];
    total += out.probs[s] = p;
  }
  for (double& p : out.probs) p /= total;
  return out;
}

namespace {

std::vector<Bit> symbol_bits_of(const GaloisField& gf, Symbol s) {
  std::vector<Bit> bits(gf.degree());
  gf.to_bits(s, bits);
  return bits;
}

std::size_t hamming(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::size_t d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) d += a[j] != b[j];
  return d;
}

double log_likelihood(std::span<const Symbol> word, const std::vector<std::vector<double>>& probs) {
  double acc = 0.0;
  for (std::size_t j = 0; j < word.size(); ++j)
    acc += std::log(std::max(probs[j][word[j]], std::numeric_limits<double>::min()));
  return acc;
}

struct StageChoice {
  std::vector<Symbol> word;
  bool failed = false;
};

StageChoice outer_stage(const ReedSolomon& rs, DecodeMode mode, const std::vector<Symbol>& hard,
                        const std::vector<double>& rel,
                        const std::vector<std::vector<double>>& probs) {
  if (mode == DecodeMode::successive_hard || mode == DecodeMode::serial) {
    RsDecodeResult res = rs.decode(hard);
    if (!res.ok()) return {hard, true};
    return {std::move(res.codeword), false};
  }

  GmdCandidateList list = rs.gmd_list(hard, rel);
  if (list.empty()) return {hard, true};
  std::size_t best = 0;
  if (mode == DecodeMode::gmd) {
    std::size_t best_d = hamming(list[0].codeword, hard);
    for (std::size_t c = 1; c < list.size(); ++c) {
      const std::size_t d = hamming(list[c].codeword, hard);
      if (d < best_d) best_d = d, best = c;
    }
  } else {
    double best_ll = log_likelihood(list[0].codeword, probs);
    for (std::size_t c = 1; c < list.size(); ++c) {
      const double ll = log_likelihood(list[c].codeword, probs);
      if (ll > best_ll) best_ll = ll, best = c;
    }
  }
  return {std::move(list[best].codeword), false};
}

void check_shape(const ConcatCode& code, const LlrMatrix& llrs) {
  if (llrs.size() != code.blocks()) throw std::invalid_argument("LLR matrix must have m rows");
  for (const auto& row : llrs)
    if (row.size() != code.polar().length()) throw std::invalid_argument("LLR rows must have length n");
}

}  // namespace

DecodeResult decode_serial(const ConcatCode& code, const LlrMatrix& llrs, Execution exec, CheckNode node) {
  check_shape(code, llrs);
  const std::size_t m = code.blocks();
  const std::size_t r = code.outer_count();
  const GaloisField& gf = code.field();
  const unsigned t = code.symbol_bits();

  DecodeResult out;
  out.hard.assign(r, std::vector<Symbol>(m, 0));
  const long long mm = static_cast<long long>(m);
#pragma omp parallel for if (exec == Execution::parallel) schedule(static)
  for (long long j = 0; j < mm; ++j) {
    const ScResult res = sc_decode(code.polar(), llrs[j], {}, node);
    for (std::size_t i = 0; i < r; ++i)
      out.hard[i][j] = gf.from_bits(std::span(res.info_bits).subspan(i * t, t));
  }

  out.codewords.resize(r);
  out.row_failed.assign(r, 0);
  const std::vector<double> no_rel;
  const std::vector<std::vector<double>> no_probs;
  for (std::size_t i = 0; i < r; ++i) {
    StageChoice c = outer_stage(code.outer(i), DecodeMode::serial, out.hard[i], no_rel, no_probs);
    out.codewords[i] = std::move(c.word);
    out.row_failed[i] = c.failed;
    out.failed_rows += c.failed;
  }
  out.payload = code.payload_from(out.codewords);
  return out;
}

DecodeResult decode_successive(const ConcatCode& code, const LlrMatrix& llrs, const DecodeOptions& options) {
  if (options.mode == DecodeMode::serial) throw std::invalid_argument("serial mode is not successive");
  check_shape(code, llrs);
  const std::size_t m = code.blocks();
  const std::size_t r = code.outer_count();
  const GaloisField& gf = code.field();
  const unsigned t = code.symbol_bits();
  const bool exact_paths = options.mode == DecodeMode::gmd_eml;
  const bool want_probs = options.mode == DecodeMode::gmd_aml || exact_paths;
  const bool parallel = options.exec == Execution::parallel;

  std::vector<ScState> states;
  states.reserve(m);
  for (std::size_t j = 0; j < m; ++j) states.emplace_back(code.polar(), llrs[j], options.node);

  DecodeResult out;
  out.hard.resize(r);
  out.codewords.resize(r);
  out.row_failed.assign(r, 0);

  std::vector<Symbol> hard(m);
  std::vector<double> rel(m);
  std::vector<std::vector<double>> probs(want_probs ? m : 0);
  std::vector<SymbolLikelihoods> paths(exact_paths ? m : 0);
  const long long mm = static_cast<long long>(m);

  for (std::size_t stage = 0; stage < r; ++stage) {
#pragma omp parallel for if (parallel) schedule(static)
    for (long long jj = 0; jj < mm; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      if (exact_paths) {
        paths[j] = states[j].symbol_paths(t);
        hard[j] = paths[j].most_likely();
        rel[j] = paths[j].probs[hard[j]];
        probs[j] = paths[j].probs;
      } else {
        const SpanResult span = states[j].decode_span(t);
        hard[j] = gf.from_bits(span.bits);
        if (!options.bypass_outer) {
          SymbolSoft soft = symbol_reliability_from_llrs(span.llrs);
          rel[j] = soft.reliability;
          if (want_probs) probs[j] = std::move(soft.probs);
        }
      }
    }

    if (options.stage_hook) options.stage_hook(stage, hard);
    out.hard[stage] = hard;

    StageChoice choice{hard, false};
    if (!options.bypass_outer) choice = outer_stage(code.outer(stage), options.mode, hard, rel, probs);
    out.row_failed[stage] = choice.failed;
    out.failed_rows += choice.failed;

#pragma omp parallel for if (parallel) schedule(static)
    for (long long jj = 0; jj < mm; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      if (exact_paths)
        states[j].take_path(paths[j], choice.word[j]);
      else
        states[j].resume_with(symbol_bits_of(gf, choice.word[j]));
    }
    out.codewords[stage] = std::move(choice.word);
  }

  out.payload = code.payload_from(out.codewords);
  return out;
}

DecodeResult decode(const ConcatCode& code, const LlrMatrix& llrs, const DecodeOptions& options) {
  if (options.mode == DecodeMode::serial) return decode_serial(code, llrs, options.exec, options.node);
  return decode_successive(code, llrs, options);
}

}  // namespace rspolar
