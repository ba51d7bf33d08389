#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rspolar/design.hpp"

using namespace rspolar;

namespace {

// P(more than tau of m events), by enumerating all 2^m outcomes
double tail_by_enumeration(std::size_t m, std::size_t tau, double q) {
  double s = 0.0;
  for (std::size_t v = 0; v < (std::size_t{1} << m); ++v) {
    const auto w = static_cast<std::size_t>(std::popcount(v));
    if (w > tau) s += std::pow(q, double(w)) * std::pow(1 - q, double(m - w));
  }
  return s;
}

double choose(std::size_t m, std::size_t l) {
  // Pascal's triangle, independent of the multiplicative formula
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 0; i <= m; ++i) {
    c[i][0] = 1.0;
    for (std::size_t j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0.0);
  }
  return l <= m ? c[m][l] : 0.0;
}

}  // namespace

TEST_CASE("binomial coefficients") {
  for (std::size_t m = 0; m <= 30; ++m)
    for (std::size_t l = 0; l <= m + 1; ++l) REQUIRE(binomial(m, l) == choose(m, l));
  CHECK(binomial(15, 3) == 455.0);
}

TEST_CASE("binomial tail matches enumeration") {
  for (std::size_t m : {1u, 5u, 10u, 15u})
    for (std::size_t tau = 0; tau < m; ++tau)
      for (double q : {0.0, 1e-3, 0.05, 0.3, 0.9, 1.0})
        REQUIRE(binomial_tail(m, tau, q) == doctest::Approx(tail_by_enumeration(m, tau, q)).epsilon(1e-12));
  CHECK_THROWS_AS(binomial_tail(5, 1, 1.5), std::domain_error);
}

TEST_CASE("frame error bound") {
  CHECK(fep_bound(15, 2, 0.01) == doctest::Approx(4.55e-4).epsilon(1e-14));
  CHECK(fep_bound(15, 2, 0.0) == 0.0);
  CHECK(fep_bound(15, 1, 1e-3) == doctest::Approx(1.05e-4).epsilon(1e-14));
  CHECK_THROWS_AS(fep_bound(15, 2, -0.1), std::domain_error);
  CHECK_THROWS_AS(fep_bound(3, 3, 0.1), std::domain_error);
}

TEST_CASE("asymptotic parameters") {
  CHECK_THROWS_AS(theorem1_params(std::pow(2.0, 20), 0.5), std::domain_error);
  CHECK_THROWS_AS(theorem1_params(std::pow(2.0, 20), 0.0), std::domain_error);
  CHECK_THROWS_AS(theorem1_params(0.5, 0.25), std::domain_error);

  const auto p = theorem1_params(std::pow(2.0, 20), 0.25);
  CHECK(p.n == doctest::Approx(32.0));
  CHECK(p.m == doctest::Approx(32768.0));
  CHECK(p.outer_rate == doctest::Approx(1.0 - 4.0 * std::pow(2.0, -1.25)));
  CHECK(p.outer_rate == doctest::Approx(-0.6818).epsilon(1e-4));
  CHECK_FALSE(p.rate_feasible);

  double prev = -INFINITY;
  for (double e : {40.0, 60.0, 80.0}) {
    const auto q = theorem1_params(std::pow(2.0, e), 0.25);
    CHECK(q.outer_rate > prev);
    CHECK(q.outer_rate < 1.0);
    prev = q.outer_rate;
  }
  CHECK(prev == doctest::Approx(0.875));  // 1 - 4 * 2^-5
}

TEST_CASE("the frame-error bound at the asymptotic parameters is 2^(-N^(1-eps))") {
  int checked = 0;
  for (double e : {40.0, 60.0, 80.0, 100.0, 200.0})
    for (double eps : {0.1, 0.2, 0.25, 0.3, 0.4}) {
      const double N = std::pow(2.0, e);
      const auto p = theorem1_params(N, eps);
      if (!p.rate_feasible || p.outer_rate >= 1.0) continue;
      const double lhs = lemma1_log2_bound(p.n, p.m, p.outer_rate, eps);
      const double rhs = -std::pow(N, 1.0 - eps);
      CAPTURE(e);
      CAPTURE(eps);
      REQUIRE(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs));
      ++checked;
    }
  CHECK(checked >= 10);

  CHECK(lemma1_bound(1024, 8, 0.5, 0.1) == doctest::Approx(std::exp2(lemma1_log2_bound(1024, 8, 0.5, 0.1))));
  CHECK(lemma1_log2_bound(16, 4, 0.5, 0.0) == doctest::Approx(-(4.0 * 0.5 / 2.0 - 1.0) * 4.0));
  CHECK_THROWS_AS(lemma1_bound(16, 4, 1.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(lemma1_bound(16, 4, 0.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(lemma1_bound(0, 4, 0.5, 0.1), std::domain_error);
}

TEST_CASE("rate-adaptive radii") {
  SUBCASE("worked example: Q = 1e-3, threshold 1e-6 gives tau = 2") {
    // t = k = 4 makes the threshold equal to the target
    const double p = 1.0 - std::pow(1.0 - 1e-3, 0.25);
    const std::vector<double> P(4, p);
    const auto ra = design_rate_adaptive(P, 4, 15, 1e-6);
    CHECK(ra.q[0] == doctest::Approx(1e-3));
    CHECK(ra.taus == std::vector<std::size_t>{2});
    CHECK(ra.feasible);
  }
  SUBCASE("noiseless bit-channels need no parity unless forced") {
    const std::vector<double> P(8, 0.0);
    CHECK(design_rate_adaptive(P, 4, 15, 1e-3).taus == std::vector<std::size_t>{0, 0});
    CHECK(design_rate_adaptive(P, 4, 15, 1e-3, true).taus == std::vector<std::size_t>{1, 1});
  }
  SUBCASE("hopeless rows are capped and flagged") {
    const std::vector<double> P = {0.4, 0.4, 0.4, 0.4, 0.0, 0.0, 0.0, 0.0};
    const auto ra = design_rate_adaptive(P, 4, 15, 1e-6);
    CHECK_FALSE(ra.feasible);
    CHECK(ra.taus[0] == 7);
    CHECK(ra.taus[1] == 0);
  }
  CHECK_THROWS_AS(design_rate_adaptive(std::vector<double>(8, 0.1), 4, 15, 0.0), std::domain_error);
  CHECK_THROWS_AS(design_rate_adaptive(std::vector<double>(7, 0.1), 4, 15, 1e-3), std::invalid_argument);
}

TEST_CASE("designed radii always meet the frame error target, minimally") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> lg(-8.0, -0.5);
  int feasible = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const unsigned t = 2 + rng() % 4;
    const std::size_t r = 1 + rng() % 20;
    const std::size_t m = 3 + rng() % 13;
    const double target = std::pow(10.0, lg(rng) - 2.0);
    std::vector<double> P(r * t);
    for (double& p : P) p = std::pow(10.0, lg(rng));
    const auto ra = design_rate_adaptive(P, t, m, target);
    if (!ra.feasible) continue;
    ++feasible;
    const double thr = t * target / static_cast<double>(r * t);
    double total = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      double ok = 1.0;
      for (unsigned b = 0; b < t; ++b) ok *= 1.0 - P[i * t + b];
      const double q = 1.0 - ok;
      const std::size_t tau = ra.taus[i];
      const double term = choose(m, tau + 1) * std::pow(q, double(tau + 1));
      REQUIRE(term < thr);
      if (tau > 0) REQUIRE(choose(m, tau) * std::pow(q, double(tau)) >= thr);
      total += term;
    }
    REQUIRE(total < target);
  }
  CHECK(feasible > 50);
}

TEST_CASE("union bound rows and the binomial-tail radii") {
  const std::vector<double> P = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.0, 0.0};
  const auto q = union_bound_rows(P, 4);
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(1.0));
  const auto q2 = union_bound_rows(std::vector<double>{0.01, 0.02}, 2);
  CHECK(q2[0] == doctest::Approx(0.03));
  CHECK_THROWS_AS(union_bound_rows(P, 3), std::invalid_argument);

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> lg(-6.0, -0.3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> rows(10);
    for (double& x : rows) x = std::pow(10.0, lg(rng));
    const double pe = std::pow(10.0, lg(rng) - 3.0);
    const auto ra = radii_for_target(rows, 15, pe);
    const auto looser = radii_for_target(rows, 15, pe * 10.0);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      REQUIRE(looser.taus[j] <= ra.taus[j]);
      const double tail = tail_by_enumeration(15, ra.taus[j], rows[j]);
      if (ra.taus[j] < 7) REQUIRE(tail < pe * (1 + 1e-9));
      if (ra.taus[j] > 0) REQUIRE(tail_by_enumeration(15, ra.taus[j] - 1, rows[j]) >= pe * (1 - 1e-9));
    }
  }
}

TEST_CASE("target-rate design on BEC reliabilities") {
  const auto z = estimate_bitchannels_bec(512, 0.5);
  const auto cands = design_target_rate(z, 4, 15, 1.0 / 3.0, 170, 256);
  REQUIRE_FALSE(cands.empty());
  for (const auto& c : cands) {
    REQUIRE(c.k % 4 == 0);
    REQUIRE(c.k >= 172);
    REQUIRE(c.k <= 256);
    REQUIRE(c.feasible);
    REQUIRE(std::fabs(c.rate - 1.0 / 3.0) <= 0.01);
    REQUIRE(c.taus.size() == c.k / 4);
    REQUIRE(c.info_positions.size() == c.k);

    // the reported rate is what the built code actually carries
    const auto code = make_concat(z, c, std::make_shared<const GaloisField>(4, 0x13), 15);
    REQUIRE(code.total_rate() == doctest::Approx(c.rate));
    REQUIRE(code.encode(std::vector<Bit>(code.payload_bits(), 0)).size() == 15);
  }
  CHECK_THROWS_AS(design_target_rate(z, 4, 15, 0.95, 170, 200), std::runtime_error);
  CHECK_THROWS_AS(design_for_dimension(z, 4, 15, 171, 1.0 / 3.0), std::invalid_argument);
}

TEST_CASE("design bisection trace: raising pe never raises a radius") {
  const auto z = estimate_bitchannels_bec(256, 0.45);
  const auto code = PolarCode::select_frozen(z, 96);
  std::vector<double> p;
  for (std::size_t i : code.info_positions()) p.push_back(z[i]);
  const auto rows = union_bound_rows(p, 4);
  std::vector<std::size_t> prev;
  for (double lp = -30.0; lp <= 0.0; lp += 0.5) {
    const auto ra = radii_for_target(rows, 15, std::pow(10.0, lp));
    if (!prev.empty())
      for (std::size_t j = 0; j < rows.size(); ++j) REQUIRE(ra.taus[j] <= prev[j]);
    prev = ra.taus;
  }
}
