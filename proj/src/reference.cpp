#include "jsrlab/reference.hpp"

#include <cmath>

namespace jsrlab::reference {

JsrBracket jsr_bounds(const MatrixTuple& tuple, std::size_t horizon, NormKind kind) {
  if (horizon == 0) throw Error(Errc::InvalidInput, "horizon must be at least 1");
  JsrBracket out;
  out.norm_kind = kind;
  out.upper_horizon = horizon;
  double best = -1.0;
  for (std::size_t len = 1; len <= horizon; ++len) {
    const double inv = 1.0 / static_cast<double>(len);
    odometer(tuple.size(), len, [&](const Word& w) {
      const Matrix prod = word_product(tuple, w);
      ++out.evaluated;
      const double r = std::pow(spectral_radius(prod), inv);
      if (detail::better_witness(r, canonical_rotation(w), best, out.lower_witness)) {
        best = r;
        out.lower_witness = canonical_rotation(w);
      }
      if (len == horizon) out.upper = std::max(out.upper, std::pow(induced_norm(prod, kind), inv));
    });
  }
  out.lower = best;
  return out;
}

double expectation(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t n, NormKind kind) {
  const Vector& nu = chain.nu();
  double total = 0.0;
  odometer(chain.size(), n, [&](const Word& w) {
    double prob = nu(w[0]);
    for (std::size_t t = 1; t < w.size(); ++t) prob *= chain.p()(w[t - 1], w[t]);
    if (prob == 0.0) return;
    total += prob * std::pow(induced_norm(word_product(tuple, w), kind), 1.0 / static_cast<double>(n));
  });
  return total;
}

double expectation(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t n, NormKind kind) {
  const std::size_t m = chain.order();
  auto lookup = [](const HigherOrderChain::Tensor& t, const Word& k) {
    auto it = t.find(k);
    return it == t.end() ? 0.0 : it->second;
  };
  double total = 0.0;
  odometer(chain.size(), n, [&](const Word& w) {
    double prob = 0.0;
    if (n <= m) {
      // Marginal of nu on the first n letters.
      odometer(chain.size(), m - n, [&](const Word& tail) {
        Word key = w;
        key.insert(key.end(), tail.begin(), tail.end());
        prob += lookup(chain.nu(), key);
      });
    } else {
      prob = lookup(chain.nu(), Word(w.begin(), w.begin() + static_cast<long>(m)));
      for (std::size_t t = m; t < n && prob != 0.0; ++t) {
        prob *= lookup(chain.p(), Word(w.begin() + static_cast<long>(t - m), w.begin() + static_cast<long>(t + 1)));
      }
    }
    if (prob == 0.0) return;
    total += prob * std::pow(induced_norm(word_product(tuple, w), kind), 1.0 / static_cast<double>(n));
  });
  return total;
}

}  // namespace jsrlab::reference
