#pragma once

// Random order-2 chains with an exactly invariant nu.

#include "jsrlab/higher_order.hpp"
#include "oracles.hpp"

namespace testing_chains {

/// Random order-2 chain on n letters: random sparse rows for every window,
/// nu read off the stationary law of the lifted order-1 chain (which is
/// strongly connected because every window can move to every letter).
inline jsrlab::HigherOrderChain random_order2(std::size_t n, jsrlab::Rng& rng) {
  using jsrlab::Letter;
  using jsrlab::Word;
  jsrlab::HigherOrderChain::Tensor p;
  const auto s = static_cast<Eigen::Index>(n * n);
  jsrlab::Matrix lifted = jsrlab::Matrix::Zero(s, s);
  for (Letter a = 0; a < n; ++a) {
    for (Letter b = 0; b < n; ++b) {
      std::vector<double> row(n);
      double sum = 0.0;
      for (auto& v : row) sum += (v = rng.uniform() < 0.3 ? 0.0 : 0.1 + rng.uniform());
      if (sum == 0.0) sum = row[b] = 1.0;
      for (Letter c = 0; c < n; ++c) {
        if (row[c] == 0.0) continue;
        p[Word{a, b, c}] = row[c] / sum;
        lifted(a * n + b, b * n + c) = row[c] / sum;
      }
    }
  }
  // Rows may leave the lifted graph reducible; the lazy power iteration still
  // converges to an invariant law, then a few exact steps clean it up.
  jsrlab::Vector nu = oracle::stationary(lifted, 4000);
  for (int k = 0; k < 4; ++k) {
    Eigen::RowVectorXd r = nu.transpose() * lifted;
    nu = r.transpose() / r.sum();
  }
  jsrlab::HigherOrderChain::Tensor nut;
  for (Letter a = 0; a < n; ++a)
    for (Letter b = 0; b < n; ++b)
      if (nu(a * n + b) > 1e-14) nut[Word{a, b}] = nu(a * n + b);
  double total = 0.0;
  for (auto& [k, v] : nut) total += v;
  for (auto& [k, v] : nut) v /= total;
  return jsrlab::HigherOrderChain(2, n, std::move(p), std::move(nut));
}

}  // namespace testing_chains
