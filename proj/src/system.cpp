#include "jsrlab/system.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "jsrlab/rng.hpp"

namespace jsrlab {

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string format_word(const Word& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << (w[i] + 1);
  }
  os << ')';
  return os.str();
}

MatrixTuple::MatrixTuple(std::vector<Matrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw Error(Errc::InvalidInput, "a matrix tuple needs at least one matrix");
  for (const auto& m : mats_) {
    validate_matrix(m);
    if (m.rows() != mats_.front().rows()) {
      throw Error(Errc::InvalidInput, "all matrices of a tuple must share the same dimension");
    }
  }
}

void validate_word(const Word& w, std::size_t n_letters) {
  if (w.empty()) throw Error(Errc::InvalidInput, "empty index word");
  for (Letter l : w) {
    if (l >= n_letters) {
      throw Error(Errc::IndexOutOfRange, "letter " + std::to_string(l + 1) + " outside [1, " +
                                             std::to_string(n_letters) + "]");
    }
  }
}

Matrix word_product(const MatrixTuple& tuple, const Word& w) {
  validate_word(w, tuple.size());
  Matrix product = tuple[w.front()];
  for (std::size_t i = 1; i < w.size(); ++i) product = tuple[w[i]] * product;
  return product;
}

std::string_view to_string(IrreducibilityStatus status) noexcept {
  switch (status) {
    case IrreducibilityStatus::Irreducible: return "Irreducible";
    case IrreducibilityStatus::Reducible: return "Reducible";
    case IrreducibilityStatus::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::vector<Matrix> generated_algebra_basis(std::span<const Matrix> gens, double tol) {
  if (gens.empty()) return {};
  const Eigen::Index d = gens.front().rows();
  const Eigen::Index full = d * d;
  Matrix flat(full, 0);  // orthonormal columns (vectorized matrices)
  std::vector<Matrix> basis;

  auto try_add = [&](const Matrix& m, double reference) {
    if (flat.cols() == full) return;
    Vector v = Eigen::Map<const Vector>(m.data(), full);
    for (int pass = 0; pass < 2; ++pass) v -= flat * (flat.transpose() * v);
    const double r = v.norm();
    if (r > tol * reference) {
      flat.conservativeResize(Eigen::NoChange, flat.cols() + 1);
      flat.col(flat.cols() - 1) = v / r;
      basis.push_back(Eigen::Map<const Matrix>(flat.col(flat.cols() - 1).data(), d, d));
    }
  };

  try_add(Matrix::Identity(d, d), 1.0);
  for (const auto& g : gens) try_add(g, std::max(g.norm(), 1e-300));
  for (std::size_t idx = 0; idx < basis.size() && flat.cols() < full; ++idx) {
    const Matrix b = basis[idx];
    for (const auto& g : gens) {
      if (flat.cols() == full) break;
      try_add(g * b, std::max(g.norm(), 1e-300));
    }
  }
  return basis;
}

namespace {

// Enumerates products of words of length 1..max_len over gens, stopping once
// `limit` products were produced. Returns false if truncated.
bool collect_word_products(std::span<const Matrix> gens, std::size_t max_len, std::size_t limit,
                           std::vector<Matrix>& out) {
  std::vector<Matrix> level(gens.begin(), gens.end());
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (const auto& m : level) {
      if (out.size() >= limit) return false;
      out.push_back(m);
    }
    if (len == max_len) break;
    std::vector<Matrix> next;
    next.reserve(level.size() * gens.size());
    for (const auto& m : level) {
      for (const auto& g : gens) next.push_back(g * m);
    }
    level = std::move(next);
  }
  return true;
}

}  // namespace

IrreducibilityVerdict irreducibility_check(std::span<const Matrix> gens,
                                           const IrreducibilityOptions& opts) {
  if (gens.empty()) throw Error(Errc::InvalidInput, "irreducibility check needs at least one matrix");
  for (const auto& g : gens) validate_matrix(g);
  const Eigen::Index d = gens.front().rows();

  IrreducibilityVerdict verdict;
  verdict.trials = opts.trials;
  if (d == 1) {
    verdict.status = IrreducibilityStatus::Irreducible;
    return verdict;
  }

  std::vector<Matrix> transposed;
  transposed.reserve(gens.size());
  for (const auto& g : gens) transposed.push_back(g.transpose());

  // A proper subspace found for the transposes gives one for gens via the
  // orthogonal complement.
  auto test_seed = [&](const Matrix& seed) -> bool {
    const Matrix direct = invariant_closure(gens, seed, opts.tol);
    if (direct.cols() > 0 && direct.cols() < d) {
      verdict.status = IrreducibilityStatus::Reducible;
      verdict.subspace = direct;
      return true;
    }
    const Matrix dual = invariant_closure(transposed, seed, opts.tol);
    if (dual.cols() > 0 && dual.cols() < d) {
      Eigen::JacobiSVD<Matrix> svd(dual.transpose(), Eigen::ComputeFullV);
      verdict.status = IrreducibilityStatus::Reducible;
      verdict.subspace = svd.matrixV().rightCols(d - dual.cols());
      return true;
    }
    return false;
  };

  std::vector<Matrix> words;
  const bool complete_words =
      collect_word_products(gens, opts.candidate_word_len, opts.max_candidate_words, words);
  for (const auto& w : words) {
    for (const auto& cand : eigen_candidate_subspaces(w)) {
      if (test_seed(cand)) return verdict;
    }
    for (const auto& cand : eigen_candidate_subspaces(w.transpose())) {
      if (test_seed(cand)) return verdict;
    }
  }

  std::vector<Matrix> algebra;
  if (d <= 16) algebra = generated_algebra_basis(gens, opts.tol);
  verdict.algebra_dim = static_cast<Eigen::Index>(algebra.size());
  for (const auto& b : algebra) {
    for (const auto& cand : eigen_candidate_subspaces(b)) {
      if (test_seed(cand)) return verdict;
    }
  }

  Rng rng(opts.seed);
  for (int t = 0; t < opts.trials; ++t) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.normal();
    if (test_seed(v)) return verdict;
    // A generic element of the algebra restricts to any invariant subspace,
    // so its eigenvectors are candidates too.
    if (!algebra.empty()) {
      Matrix combo = Matrix::Zero(d, d);
      for (const auto& b : algebra) combo += rng.normal() * b;
      for (const auto& cand : eigen_candidate_subspaces(combo)) {
        if (test_seed(cand)) return verdict;
      }
    }
  }

  if (verdict.algebra_dim == d * d) {
    verdict.status = IrreducibilityStatus::Irreducible;
  } else if (!algebra.empty() && complete_words) {
    verdict.status = IrreducibilityStatus::Irreducible;
  } else {
    verdict.status = IrreducibilityStatus::Unknown;
  }
  return verdict;
}

}  // namespace jsrlab
