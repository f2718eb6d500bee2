#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jsrlab/linalg.hpp"

namespace jsrlab {

/// Index of a matrix in a tuple. Letters are zero-based inside the library;
/// the JSON/CLI layer shifts them to the one-based convention on output.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

/// Renders a word one-based, e.g. "(1,1,2)".
std::string format_word(const Word& w);

/// The N-tuple (A_1, ..., A_N) of d x d matrices defining a switched system.
class MatrixTuple {
 public:
  explicit MatrixTuple(std::vector<Matrix> mats);

  std::size_t size() const noexcept { return mats_.size(); }
  Eigen::Index dim() const noexcept { return mats_.front().rows(); }
  const Matrix& operator[](std::size_t i) const { return mats_[i]; }
  const std::vector<Matrix>& matrices() const noexcept { return mats_; }
  std::span<const Matrix> span() const noexcept { return mats_; }

 private:
  std::vector<Matrix> mats_;
};

/// Throws InvalidInput for an empty word, IndexOutOfRange for a bad letter.
void validate_word(const Word& w, std::size_t n_letters);

/// A(w) = A_{w_k} ... A_{w_1}: the first letter is applied first.
Matrix word_product(const MatrixTuple& tuple, const Word& w);

enum class IrreducibilityStatus { Irreducible, Reducible, Unknown };

struct IrreducibilityVerdict {
  IrreducibilityStatus status = IrreducibilityStatus::Unknown;
  /// Orthonormal basis of a proper invariant subspace when Reducible.
  Matrix subspace;
  int trials = 0;
  /// Dimension of the matrix algebra generated by the tuple (0 if skipped).
  Eigen::Index algebra_dim = 0;
};

std::string_view to_string(IrreducibilityStatus status) noexcept;

struct IrreducibilityOptions {
  int trials = 32;
  std::uint64_t seed = 0;
  /// Eigenvectors of all words up to this length seed the subspace search.
  std::size_t candidate_word_len = 3;
  /// Cap on the number of words whose eigenvectors are examined.
  std::size_t max_candidate_words = 4096;
  double tol = 1e-9;
};

/// Searches for a common invariant subspace of the matrices. Reducible verdicts
/// carry a re-verifiable basis; Irreducible is certain when the generated
/// algebra is all of M_d(R) and best-effort otherwise.
IrreducibilityVerdict irreducibility_check(std::span<const Matrix> gens,
                                           const IrreducibilityOptions& opts = {});

inline IrreducibilityVerdict irreducibility_check(const MatrixTuple& tuple, int trials = 32,
                                                  std::uint64_t seed = 0) {
  IrreducibilityOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  return irreducibility_check(tuple.span(), opts);
}

/// Linearly independent basis (Frobenius) of the unital algebra generated by
/// gens; stops early once the dimension reaches max_dim.
std::vector<Matrix> generated_algebra_basis(std::span<const Matrix> gens, double tol = 1e-9);

}  // namespace jsrlab
