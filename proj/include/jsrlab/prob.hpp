#pragma once

#include <cstdint>
#include <vector>

#include "jsrlab/higher_order.hpp"
#include "jsrlab/jsr.hpp"
#include "jsrlab/markov.hpp"
#include "jsrlab/parallel.hpp"

namespace jsrlab {

/// E_n = sum over (nu, P)-words w of length n of Prob(w) ||A(w)||^(1/n).
struct ExpectationCurve {
  std::vector<std::size_t> horizons;
  std::vector<double> values;
  NormKind norm_kind = NormKind::Two;
  bool exact = true;
};

struct ExpectationOptions {
  NormKind kind = NormKind::Two;
  /// Cap on the number of positive-probability words at the largest horizon.
  std::size_t cap = kEnumerationCap;
  Exec exec = Exec::Parallel;
};

/// E_1..E_max_horizon from a single depth-first pass. Horizons past the cap
/// are dropped; the curve is empty (and BudgetExceeded thrown) only when even
/// n = 1 is out of reach.
ExpectationCurve expectation_curve(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t max_horizon,
                                   const ExpectationOptions& opts = {});
/// Order-m version: windows drive the transitions. For n <= m the marginal of
/// nu on the first n letters is used.
ExpectationCurve expectation_curve(const MatrixTuple& tuple, const HigherOrderChain& chain,
                                   std::size_t max_horizon, const ExpectationOptions& opts = {});

/// Single horizon; throws BudgetExceeded past the cap.
double exact_expectation(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t n,
                         const ExpectationOptions& opts = {});
double exact_expectation(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t n,
                         const ExpectationOptions& opts = {});

struct ProbUpper {
  /// min over the curve; E_n >= rho_p for every n.
  double upper = 0.0;
  std::size_t argmin = 0;
  ExpectationCurve curve;
  /// True when the curve stops short of the requested horizon.
  bool budget_exhausted = false;
};

ProbUpper prob_jsr_upper(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t max_horizon,
                         const ExpectationOptions& opts = {});
ProbUpper prob_jsr_upper(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t max_horizon,
                         const ExpectationOptions& opts = {});

struct McEstimate {
  std::size_t horizon = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  /// Sample standard deviation over sqrt(samples); zero for a single sample.
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

/// Sample k draws its path from Rng::stream(seed, k), so the estimate does not
/// depend on the thread count.
McEstimate mc_estimate(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t n, std::size_t samples,
                       std::uint64_t seed, NormKind kind = NormKind::Two, Exec exec = Exec::Parallel);
McEstimate mc_estimate(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t n,
                       std::size_t samples, std::uint64_t seed, NormKind kind = NormKind::Two,
                       Exec exec = Exec::Parallel);

/// Path of `horizon` letters of an order-m chain: the first window ~ nu, then
/// successors of the trailing window.
Word sample_path(const HigherOrderChain& chain, std::size_t horizon, Rng& rng);

}  // namespace jsrlab
