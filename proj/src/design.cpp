#include "rspolar/design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rspolar {

double binomial(std::size_t m, std::size_t l) {
  if (l > m) return 0.0;
  l = std::min(l, m - l);
  double c = 1.0;
  for (std::size_t i = 1; i <= l; ++i) c = c * static_cast<double>(m - l + i) / static_cast<double>(i);
  return c;
}

double binomial_tail(std::size_t m, std::size_t tau, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("probability must be in [0, 1]");
  double sum = 0.0;
  for (std::size_t l = tau + 1; l <= m; ++l)
    sum += binomial(m, l) * std::pow(q, static_cast<double>(l)) *
           std::pow(1.0 - q, static_cast<double>(m - l));
  return sum;
}

double fep_bound(std::size_t m, std::size_t tau, double pe) {
  if (!(pe >= 0.0 && pe <= 1.0)) throw std::domain_error("pe must be in [0, 1]");
  if (tau + 1 > m) throw std::domain_error("tau + 1 exceeds m");
  return binomial(m, tau + 1) * std::pow(pe, static_cast<double>(tau + 1));
}

double lemma1_log2_bound(double n, double m, double outer_rate, double eps) {
  if (!(outer_rate > 0.0 && outer_rate < 1.0)) throw std::domain_error("R_o must be in (0, 1)");
  if (!(n > 0.0 && m > 0.0)) throw std::domain_error("lengths must be positive");
  if (!(eps >= 0.0 && eps < 0.5)) throw std::domain_error("eps must be in [0, 0.5)");
  return -(std::pow(n, 0.5 - eps) * (1.0 - outer_rate) / 2.0 - 1.0) * m;
}

double lemma1_bound(double n, double m, double outer_rate, double eps) {
  return std::exp2(lemma1_log2_bound(n, m, outer_rate, eps));
}

Theorem1Params theorem1_params(double frame_length, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("eps must be in (0, 0.5)");
  if (!(frame_length >= 1.0)) throw std::domain_error("N must be >= 1");
  Theorem1Params p;
  p.n = std::pow(frame_length, eps);
  p.m = std::pow(frame_length, 1.0 - eps);
  p.outer_rate = 1.0 - 4.0 * std::pow(frame_length, -eps * (0.5 - eps));
  p.rate_feasible = p.outer_rate > 0.0;
  return p;
}

RateAssignment design_rate_adaptive(std::span<const double> info_error_probs, unsigned t,
                                    std::size_t m, double target_fep, bool positive_only) {
  if (!(target_fep > 0.0)) throw std::domain_error("target frame error probability must be positive");
  const std::size_t k = info_error_probs.size();
  if (t == 0 || k == 0 || k % t != 0) throw std::invalid_argument("t must divide k");
  if (m == 0) throw std::invalid_argument("m must be positive");

  const double threshold = static_cast<double>(t) * target_fep / static_cast<double>(k);
  const std::size_t cap = (m - 1) / 2;
  RateAssignment out;
  for (std::size_t i = 0; i < k / t; ++i) {
    double ok = 1.0;
    for (std::size_t b = 0; b < t; ++b) ok *= 1.0 - info_error_probs[i * t + b];
    const double q = 1.0 - ok;
    std::size_t tau = positive_only ? 1 : 0;
    while (tau <= cap && fep_bound(m, tau, q) >= threshold) ++tau;
    if (tau > cap) {
      out.feasible = false;
      tau = cap;
    }
    out.q.push_back(q);
    out.taus.push_back(tau);
  }
  return out;
}

std::vector<double> union_bound_rows(std::span<const double> info_error_probs, unsigned t) {
  if (t == 0 || info_error_probs.size() % t != 0) throw std::invalid_argument("t must divide k");
  std::vector<double> q(info_error_probs.size() / t);
  for (std::size_t j = 0; j < q.size(); ++j) {
    double s = 0.0;
    for (std::size_t b = 0; b < t; ++b) s += info_error_probs[j * t + b];
    q[j] = std::min(1.0, s);
  }
  return q;
}

RateAssignment radii_for_target(std::span<const double> row_error_probs, std::size_t m, double pe) {
  const std::size_t cap = (m - 1) / 2;
  RateAssignment out;
  out.q.assign(row_error_probs.begin(), row_error_probs.end());
  for (double q : row_error_probs) {
    std::size_t tau = 0;
    while (tau < cap && binomial_tail(m, tau, q) >= pe) ++tau;
    if (binomial_tail(m, tau, q) >= pe) out.feasible = false;
    out.taus.push_back(tau);
  }
  return out;
}

namespace {

double total_rate(const std::vector<std::size_t>& taus, unsigned t, std::size_t n, std::size_t m) {
  std::size_t payload = 0;
  for (std::size_t tau : taus) payload += t * (m - 2 * tau);
  return static_cast<double>(payload) / static_cast<double>(n * m);
}

}  // namespace

DesignCandidate design_for_dimension(std::span<const double> reliabilities, unsigned t,
                                     std::size_t m, std::size_t k, double target_rate,
                                     const TargetRateOptions& options) {
  const std::size_t n = reliabilities.size();
  if (k == 0 || k > n || k % t != 0) throw std::invalid_argument("k must be a positive multiple of t within n");
  const PolarCode inner = PolarCode::select_frozen(reliabilities, k);
  std::vector<double> p;
  for (std::size_t pos : inner.info_positions()) p.push_back(reliabilities[pos]);
  const std::vector<double> q = union_bound_rows(p, t);

  DesignCandidate best;
  best.k = k;
  best.info_positions = inner.info_positions();
  best.q = q;
  double best_gap = INFINITY;
  auto consider = [&](double log_pe) {
    const double pe = std::pow(10.0, log_pe);
    RateAssignment ra = radii_for_target(q, m, pe);
    const double rate = total_rate(ra.taus, t, n, m);
    const double gap = std::fabs(rate - target_rate);
    if (gap < best_gap) {
      best_gap = gap;
      best.taus = std::move(ra.taus);
      best.pe = pe;
      best.rate = rate;
    }
    return rate;
  };

  // rate is nondecreasing in pe: a looser target never needs more parity
  double lo = options.log10_pe_min;
  double hi = options.log10_pe_max;
  consider(lo);
  consider(hi);
  for (int it = 0; it < options.max_iterations && best_gap > options.stop_tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (consider(mid) < target_rate)
      lo = mid;
    else
      hi = mid;
  }
  best.feasible = best_gap <= options.rate_tolerance;
  return best;
}

std::vector<DesignCandidate> design_target_rate(std::span<const double> reliabilities, unsigned t,
                                                std::size_t m, double target_rate,
                                                std::size_t k_min, std::size_t k_max,
                                                const TargetRateOptions& options) {
  if (t == 0) throw std::invalid_argument("t must be positive");
  std::vector<DesignCandidate> out;
  const std::size_t first = ((std::max<std::size_t>(k_min, 1) + t - 1) / t) * t;
  for (std::size_t k = first; k <= std::min(k_max, reliabilities.size()); k += t) {
    DesignCandidate c = design_for_dimension(reliabilities, t, m, k, target_rate, options);
    if (c.feasible) out.push_back(std::move(c));
  }
  if (out.empty()) throw std::runtime_error("no inner dimension in range reaches the target rate");
  return out;
}

ConcatCode make_concat(std::span<const double> reliabilities, const DesignCandidate& candidate,
                       std::shared_ptr<const GaloisField> field, std::size_t m) {
  PolarCode inner(reliabilities.size(), candidate.info_positions,
                  std::vector<double>(reliabilities.begin(), reliabilities.end()));
  return ConcatCode(std::move(inner), std::move(field), m, candidate.taus);
}

}  // namespace rspolar
