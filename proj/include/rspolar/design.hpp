#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rspolar/concat.hpp"

namespace rspolar {

double binomial(std::size_t m, std::size_t l);

/// P(more than tau of m independent symbols are wrong), each wrong w.p. q.
double binomial_tail(std::size_t m, std::size_t tau, double q);

/// Frame error bound C(m, tau+1) pe^(tau+1) for a bounded-distance outer code.
double fep_bound(std::size_t m, std::size_t tau, double pe);

/// 2^{-(n^{0.5-eps}(1-R_o)/2 - 1) m}
double lemma1_bound(double n, double m, double outer_rate, double eps);
/// log2 of lemma1_bound, usable where the bound itself underflows.
double lemma1_log2_bound(double n, double m, double outer_rate, double eps);

struct Theorem1Params {
  double n = 0.0;
  double m = 0.0;
  double outer_rate = 0.0;
  bool rate_feasible = false;  // false when the closed form gives R_o <= 0
};

/// n = N^eps, m = N^{1-eps}, R_o = 1 - 4 N^{-eps(0.5-eps)}.
Theorem1Params theorem1_params(double frame_length, double eps);

struct RateAssignment {
  std::vector<double> q;          // symbol error probability per outer row
  std::vector<std::size_t> taus;
  bool feasible = true;           // false if some row hit the radius cap
};

/// Per-row radius from the product-form symbol error probability
/// Q_i = 1 - prod (1 - P_j) over the row's t positions: the least tau_i with
/// C(m, tau_i+1) Q_i^(tau_i+1) < t * target_fep / k. With `positive_only`
/// tau_i starts at 1.
RateAssignment design_rate_adaptive(std::span<const double> info_error_probs, unsigned t,
                                    std::size_t m, double target_fep, bool positive_only = false);

/// Radii for one per-sub-block target pe: the least tau with
/// binomial_tail(m, tau, Q_j) < pe, where Q_j is the union bound over the row.
RateAssignment radii_for_target(std::span<const double> row_error_probs, std::size_t m, double pe);

/// Union-bound row error probabilities Q_j = min(1, sum of the t P's).
std::vector<double> union_bound_rows(std::span<const double> info_error_probs, unsigned t);

struct DesignCandidate {
  std::size_t k = 0;
  std::vector<std::size_t> info_positions;
  std::vector<double> q;
  std::vector<std::size_t> taus;
  double pe = 0.0;    // per-sub-block target the bisection settled on
  double rate = 0.0;  // total rate t * sum(m - 2 tau) / (n m)
  bool feasible = false;
};

struct TargetRateOptions {
  double rate_tolerance = 0.01;  // candidate is feasible within this band
  double stop_tolerance = 1e-3;  // bisection stops once this close
  int max_iterations = 40;
  double log10_pe_min = -30.0;
  double log10_pe_max = 0.0;
};

/// Rate-matched design for a single inner dimension k.
DesignCandidate design_for_dimension(std::span<const double> reliabilities, unsigned t,
                                     std::size_t m, std::size_t k, double target_rate,
                                     const TargetRateOptions& options = {});

/// design_for_dimension over every multiple of t in [k_min, k_max]. Throws
/// std::runtime_error when no candidate reaches the target within tolerance.
std::vector<DesignCandidate> design_target_rate(std::span<const double> reliabilities, unsigned t,
                                                std::size_t m, double target_rate,
                                                std::size_t k_min, std::size_t k_max,
                                                const TargetRateOptions& options = {});

ConcatCode make_concat(std::span<const double> reliabilities, const DesignCandidate& candidate,
                       std::shared_ptr<const GaloisField> field, std::size_t m);

}  // namespace rspolar
