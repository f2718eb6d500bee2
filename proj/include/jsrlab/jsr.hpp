#pragma once

#include <cstddef>

#include "jsrlab/linalg.hpp"
#include "jsrlab/parallel.hpp"
#include "jsrlab/system.hpp"

namespace jsrlab {

/// Enclosure [lower, upper] of the joint spectral radius.
struct JsrBracket {
  double lower = 0.0;
  double upper = 0.0;
  /// lower = rho(A(lower_witness))^(1/|lower_witness|); canonical rotation.
  Word lower_witness;
  /// Brute force: the word length behind `upper`. Gripenberg: deepest level.
  std::size_t upper_horizon = 0;
  NormKind norm_kind = NormKind::Two;
  bool budget_exhausted = false;
  /// Word products evaluated.
  std::size_t evaluated = 0;

  double width() const noexcept { return upper - lower; }
};

inline constexpr std::size_t kEnumerationCap = 10'000'000;

/// upper = max ||A(w)||^(1/n) over words of length exactly n;
/// lower = max rho(A(w))^(1/|w|) over Lyndon words of length <= n.
/// Throws BudgetExceeded when N^n exceeds `cap`.
JsrBracket jsr_bounds_bruteforce(const MatrixTuple& tuple, std::size_t horizon,
                                 NormKind kind = NormKind::Two, Exec exec = Exec::Parallel,
                                 std::size_t cap = kEnumerationCap);

struct GripenbergOptions {
  double tol = 1e-9;
  /// Maximum number of word products evaluated.
  std::size_t budget = 200'000;
  NormKind kind = NormKind::Two;
};

/// Best-first branch and bound. A node w carries
///   p(w) = min over prefixes u of w of ||A(u)||^(1/|u|)
/// and is discarded once p(w) <= lower + tol. Running out of budget does not
/// throw: the returned bracket is still valid and flagged.
JsrBracket jsr_gripenberg(const MatrixTuple& tuple, const GripenbergOptions& opts = {});

/// v_D(x) = max over words w with |w| <= D of scale^(-|w|) ||A(w) x||,
/// evaluated through v_D(x) = max(||x||, max_i v_{D-1}(A_i x) / scale).
class BarabanovApprox {
 public:
  /// Throws InvalidInput for scale <= 0, BudgetExceeded when N^depth > cap.
  BarabanovApprox(MatrixTuple tuple, double scale, std::size_t depth, NormKind kind = NormKind::Two,
                  std::size_t cap = kEnumerationCap);

  double operator()(const Vector& x) const { return eval(x, depth_); }
  /// Same evaluator truncated at a smaller depth.
  double eval(const Vector& x, std::size_t depth) const;

  std::size_t depth() const noexcept { return depth_; }
  double scale() const noexcept { return scale_; }
  NormKind kind() const noexcept { return kind_; }

 private:
  MatrixTuple tuple_;
  double scale_;
  std::size_t depth_;
  NormKind kind_;
};

BarabanovApprox barabanov_approx(const MatrixTuple& tuple, double scale, std::size_t depth,
                                 NormKind kind = NormKind::Two);

namespace detail {
/// Ranking used when merging lower-bound witnesses: a larger value wins unless
/// it is within 1e-12 (relative) of the incumbent, in which case the shorter,
/// then lexicographically smaller, word wins.
bool better_witness(double value, const Word& w, double best, const Word& best_word);
}  // namespace detail

}  // namespace jsrlab
