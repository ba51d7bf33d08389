#include "rspolar/rs.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rspolar {

ReedSolomon::ReedSolomon(std::shared_ptr<const GaloisField> field, std::size_t m, std::size_t tau)
    : field_(std::move(field)), m_(m), tau_(tau) {
  if (!field_) throw std::invalid_argument("ReedSolomon needs a field");
  if (m == 0 || m > field_->order() - 1)
    throw std::invalid_argument("RS length must be in [1, 2^t - 1]");
  if (2 * tau > m - 1) throw std::invalid_argument("RS radius exceeds floor((m-1)/2)");

  const GaloisField& gf = *field_;
  const std::size_t nroots = 2 * tau_;

  // g(x) = prod_{i=1}^{2 tau} (x - alpha^i), low-order coefficient first
  generator_.assign(1, 1);
  for (std::size_t i = 1; i <= nroots; ++i) {
    const Symbol root = gf.alpha_pow(static_cast<long long>(i));
    std::vector<Symbol> next(generator_.size() + 1, 0);
    for (std::size_t j = 0; j < generator_.size(); ++j) {
      next[j + 1] ^= generator_[j];
      next[j] ^= gf.mul(generator_[j], root);
    }
    generator_ = std::move(next);
  }

  if (nroots == 0) return;

  // x^{q-1} = 1 mod g, so x^{-kappa} = x^{q-1-kappa}. Walk x^e mod g upward.
  const std::size_t kappa = dimension();
  const std::size_t start = (gf.order() - 1) - kappa;
  std::vector<Symbol> rem(nroots, 0);
  auto times_x = [&](std::vector<Symbol>& r) {
    const Symbol top = r[nroots - 1];
    for (std::size_t j = nroots - 1; j > 0; --j) r[j] = r[j - 1] ^ gf.mul(top, generator_[j]);
    r[0] = gf.mul(top, generator_[0]);
  };
  rem[0] = 1;
  for (std::size_t e = 0; e < start; ++e) times_x(rem);
  parity_rows_.reserve(kappa);
  for (std::size_t j = 0; j < kappa; ++j) {
    parity_rows_.push_back(rem);
    times_x(rem);
  }
}

Symbol ReedSolomon::eval(std::span<const Symbol> poly, Symbol x) const {
  Symbol acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = field_->mul(acc, x) ^ poly[i];
  return acc;
}

std::vector<Symbol> ReedSolomon::encode(std::span<const Symbol> message) const {
  const std::size_t kappa = dimension();
  if (message.size() != kappa) throw std::invalid_argument("RS message length mismatch");
  std::vector<Symbol> cw(m_, 0);
  std::copy(message.begin(), message.end(), cw.begin());
  if (tau_ == 0) return cw;
  // c(x) = msg(x) + x^kappa p(x) with p = msg * x^{-kappa} mod g
  for (std::size_t j = 0; j < kappa; ++j) {
    if (message[j] == 0) continue;
    const auto& row = parity_rows_[j];
    for (std::size_t p = 0; p < row.size(); ++p) cw[kappa + p] ^= field_->mul(message[j], row[p]);
  }
  return cw;
}

std::vector<Symbol> ReedSolomon::syndromes(std::span<const Symbol> word) const {
  std::vector<Symbol> s(2 * tau_);
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = eval(word, field_->alpha_pow(static_cast<long long>(i + 1)));
  return s;
}

bool ReedSolomon::is_codeword(std::span<const Symbol> word) const {
  if (word.size() != m_) return false;
  for (Symbol s : syndromes(word))
    if (s != 0) return false;
  return true;
}

RsDecodeResult ReedSolomon::decode(std::span<const Symbol> received,
                                   std::span<const std::size_t> erasures) const {
  if (received.size() != m_) throw std::invalid_argument("RS received length mismatch");
  const std::size_t nroots = 2 * tau_;
  if (erasures.size() > nroots) throw std::domain_error("more erasures than 2*tau");
  for (std::size_t p : erasures)
    if (p >= m_) throw std::invalid_argument("erasure position out of range");

  const GaloisField& gf = *field_;
  RsDecodeResult out;
  out.codeword.assign(received.begin(), received.end());

  const std::vector<Symbol> synd = syndromes(received);
  if (std::all_of(synd.begin(), synd.end(), [](Symbol s) { return s == 0; })) {
    out.status = RsStatus::corrected;
    return out;
  }

  const std::size_t f = erasures.size();

  // Erasure locator Gamma(x) = prod (1 - X_k x), X_k = alpha^{pos}
  std::vector<Symbol> lambda(nroots + 1, 0);
  lambda[0] = 1;
  for (std::size_t p : erasures) {
    const Symbol xk = gf.alpha_pow(static_cast<long long>(p));
    for (std::size_t j = nroots; j > 0; --j) lambda[j] ^= gf.mul(lambda[j - 1], xk);
  }
  std::vector<Symbol> prev = lambda;  // B(x)
  std::size_t len = f;                // L

  // Berlekamp-Massey seeded with the erasure locator.
  std::vector<Symbol> tmp(nroots + 1);
  for (std::size_t r = f + 1; r <= nroots; ++r) {
    Symbol delta = 0;
    for (std::size_t j = 0; j <= r - 1; ++j)
      delta ^= gf.mul(lambda[j], synd[r - 1 - j]);

    if (delta == 0) {
      std::rotate(prev.rbegin(), prev.rbegin() + 1, prev.rend());
      prev[0] = 0;
      continue;
    }
    tmp = lambda;
    for (std::size_t j = 1; j <= nroots; ++j) tmp[j] ^= gf.mul(delta, prev[j - 1]);
    if (2 * len <= r + f - 1) {
      const Symbol dinv = gf.inv(delta);
      for (std::size_t j = 0; j <= nroots; ++j) prev[j] = gf.mul(dinv, lambda[j]);
      len = r + f - len;
    } else {
      std::rotate(prev.rbegin(), prev.rbegin() + 1, prev.rend());
      prev[0] = 0;
    }
    lambda.swap(tmp);
  }

  std::size_t deg = 0;
  for (std::size_t j = 0; j <= nroots; ++j)
    if (lambda[j] != 0) deg = j;
  if (deg != len || 2 * (len - f) + f > nroots) return out;

  // Chien search restricted to the m valid positions.
  std::vector<std::size_t> roots;
  for (std::size_t j = 0; j < m_; ++j)
    if (eval(lambda, gf.alpha_pow(-static_cast<long long>(j))) == 0) roots.push_back(j);
  if (roots.size() != deg) return out;

  // Omega(x) = S(x) Lambda(x) mod x^{2 tau}
  std::vector<Symbol> omega(nroots, 0);
  for (std::size_t i = 0; i < nroots; ++i)
    for (std::size_t j = 0; j <= i; ++j) omega[i] ^= gf.mul(synd[i - j], lambda[j]);

  // Formal derivative: odd-degree terms survive in characteristic 2.
  std::vector<Symbol> dlambda(nroots, 0);
  for (std::size_t j = 1; j <= nroots; j += 2) dlambda[j - 1] = lambda[j];

  for (std::size_t pos : roots) {
    const Symbol xinv = gf.alpha_pow(-static_cast<long long>(pos));
    const Symbol den = eval(dlambda, xinv);
    if (den == 0) return out;
    const Symbol mag = gf.div(eval(omega, xinv), den);
    out.codeword[pos] ^= mag;
  }

  if (!is_codeword(out.codeword)) return out;
  out.corrections = 0;
  for (std::size_t j = 0; j < m_; ++j)
    if (out.codeword[j] != received[j]) ++out.corrections;
  out.status = RsStatus::corrected;
  return out;
}

GmdCandidateList ReedSolomon::gmd_list(std::span<const Symbol> received,
                                       std::span<const double> reliabilities) const {
  if (reliabilities.size() != m_) throw std::invalid_argument("GMD reliability length mismatch");
  std::vector<std::size_t> order(m_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reliabilities[a] < reliabilities[b];
  });

  GmdCandidateList list;
  const std::size_t d = min_distance();
  for (std::size_t alpha = 0; alpha + 1 <= d; alpha += 2) {
    RsDecodeResult res = decode(received, std::span(order.data(), alpha));
    if (!res.ok()) continue;
    const bool seen = std::any_of(list.begin(), list.end(), [&](const GmdCandidate& c) {
      return c.codeword == res.codeword;
    });
    if (!seen) list.push_back({std::move(res.codeword), static_cast<unsigned>(alpha)});
  }
  return list;
}

}  // namespace rspolar
