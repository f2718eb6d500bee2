#pragma once

// Independent reference computations and random instance generators for the
// tests. Nothing here calls into the code paths under test beyond the basic
// model types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "jsrlab/markov.hpp"
#include "jsrlab/rng.hpp"
#include "jsrlab/system.hpp"

namespace oracle {

using jsrlab::Letter;
using jsrlab::Matrix;
using jsrlab::Rng;
using jsrlab::Vector;
using jsrlab::Word;

inline double spectral_radius(const Matrix& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.cast<std::complex<double>>(), false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return r;
}

inline double norm_two(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// A_{w_k} ... A_{w_1} multiplied left to right from the last letter.
inline Matrix product(const std::vector<Matrix>& mats, const Word& w) {
  Matrix out = Matrix::Identity(mats.front().rows(), mats.front().cols());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = out * mats[*it];
  return out;
}

inline std::vector<Word> all_words(std::size_t n, std::size_t len) {
  std::vector<Word> out;
  Word w(len, 0);
  while (true) {
    out.push_back(w);
    std::size_t pos = len;
    while (pos > 0 && w[pos - 1] + 1 == n) w[--pos] = 0;
    if (pos == 0) return out;
    ++w[pos - 1];
  }
}

inline Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t s = 1; s < w.size(); ++s) {
    Word r(w.begin() + static_cast<long>(s), w.end());
    r.insert(r.end(), w.begin(), w.begin() + static_cast<long>(s));
    best = std::min(best, r);
  }
  return best;
}

/// Simple cycles of the graph of p, as least rotations, by brute force over
/// all tuples of distinct vertices.
inline std::set<Word> simple_cycles(const Matrix& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::set<Word> out;
  for (std::size_t k = 1; k <= n; ++k) {
    for (const Word& w : all_words(n, k)) {
      std::set<Letter> distinct(w.begin(), w.end());
      if (distinct.size() != k) continue;
      bool ok = true;
      for (std::size_t t = 0; t < k && ok; ++t) ok = p(w[t], w[(t + 1) % k]) > 0.0;
      if (ok) out.insert(least_rotation(w));
    }
  }
  return out;
}

/// All closed walks of length <= max_len (every rotation is a separate walk).
inline std::vector<Word> closed_walks(const Matrix& p, std::size_t max_len) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<Word> out;
  for (std::size_t k = 1; k <= max_len; ++k) {
    for (const Word& w : all_words(n, k)) {
      bool ok = true;
      for (std::size_t t = 0; t < k && ok; ++t) ok = p(w[t], w[(t + 1) % k]) > 0.0;
      if (ok) out.push_back(w);
    }
  }
  return out;
}

/// Invariant probability of a strongly connected stochastic matrix by power
/// iteration on the lazy chain (I + P) / 2.
inline Vector stationary(const Matrix& p, int iters = 20000) {
  const Eigen::Index n = p.rows();
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Matrix lazy = 0.5 * (Matrix::Identity(n, n) + p);
  for (int i = 0; i < iters; ++i) v = v * lazy;
  return v.transpose() / v.sum();
}

inline Matrix random_orthogonal(Eigen::Index d, Rng& rng) {
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

inline Matrix random_matrix(Eigen::Index d, Rng& rng) {
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

/// Well-conditioned invertible matrix: orthogonal times diag in [1, 3].
inline Matrix random_well_conditioned(Eigen::Index d, Rng& rng) {
  Vector s(d);
  for (Eigen::Index i = 0; i < d; ++i) s(i) = 1.0 + 2.0 * rng.uniform();
  return random_orthogonal(d, rng) * s.asDiagonal() * random_orthogonal(d, rng);
}

/// Random stochastic matrix; each entry is kept with probability `density`
/// and every row keeps at least one entry.
inline Matrix random_stochastic(Eigen::Index n, double density, Rng& rng) {
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (rng.uniform() < density) p(i, j) = 0.1 + rng.uniform();
    if (p.row(i).sum() == 0.0) p(i, static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(n))) = 1.0;
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

/// Strongly connected random stochastic matrix: a random Hamiltonian cycle
/// plus random extra edges.
inline Matrix random_strongly_connected(Eigen::Index n, double density, Rng& rng) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.next() % i]);
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < perm.size(); ++i) p(perm[i], perm[(i + 1) % perm.size()]) = 0.1 + rng.uniform();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (rng.uniform() < density) p(i, j) = 0.1 + rng.uniform();
  for (Eigen::Index i = 0; i < n; ++i) p.row(i) /= p.row(i).sum();
  return p;
}

/// Renormalizes a stationary vector so that nu P = nu holds to rounding.
inline jsrlab::MarkovChain chain_with_stationary(const Matrix& p) {
  Vector nu = stationary(p);
  for (int k = 0; k < 3; ++k) {
    Eigen::RowVectorXd row = nu.transpose() * p;
    nu = row.transpose() / row.sum();
  }
  return jsrlab::MarkovChain(p, nu);
}

}  // namespace oracle
