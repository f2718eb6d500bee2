#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jsrlab/linalg.hpp"
#include "jsrlab/system.hpp"
#include "jsrlab/words.hpp"

namespace jsrlab {

/// Entries of nu at or below this value count as zero in combinatorial tests.
inline constexpr double kNuZero = 1e-12;

/// Order-1 switching law: a stochastic matrix and, optionally, an invariant
/// probability row vector.
class MarkovChain {
 public:
  /// Validates row sums (1e-12), clamps entries in [-1e-15, 0) to zero and,
  /// when nu is given, checks nu P = nu (1e-10) and sum(nu) = 1 (1e-12).
  explicit MarkovChain(Matrix p, std::optional<Vector> nu = std::nullopt);

  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.rows()); }
  const Matrix& p() const noexcept { return p_; }
  bool has_nu() const noexcept { return nu_.has_value(); }
  /// Throws InvalidInput when the chain carries no invariant probability.
  const Vector& nu() const;
  const Digraph& graph() const noexcept { return graph_; }

  /// Same transition matrix with a (validated) invariant probability.
  MarkovChain with_nu(Vector nu) const { return MarkovChain(p_, std::move(nu)); }

 private:
  Matrix p_;
  std::optional<Vector> nu_;
  Digraph graph_;
};

struct SccDecomposition {
  /// Recurrent blocks first (each sorted, blocks ordered by least index),
  /// then the transient states in increasing order.
  std::vector<std::size_t> permutation;
  std::vector<std::vector<std::size_t>> recurrent_blocks;
  std::vector<Matrix> recurrent_matrices;
  std::vector<std::size_t> transient;
  Matrix transient_matrix;
  double transient_spectral_radius = 0.0;
  /// Block index of every state, or -1 for transient states.
  std::vector<int> block_of;
};

/// Strongly connected components of the graph of P (Tarjan). Closed
/// components are the recurrent blocks.
SccDecomposition scc_decompose(const MarkovChain& chain);

/// P with rows and columns reordered by the permutation.
Matrix permuted(const Matrix& p, const std::vector<std::size_t>& permutation);

struct InvariantDecomposition {
  SccDecomposition scc;
  /// Unique invariant probability of each recurrent block, extended by zeros.
  std::vector<Vector> extremes;

  /// Coefficients alpha with nu = sum alpha_j extremes[j]; nullopt when nu is
  /// not such a convex combination within 1e-10.
  std::optional<std::vector<double>> decompose(const Vector& nu) const;
  /// Mixture sum alpha_j extremes[j].
  Vector mix(const std::vector<double>& alpha) const;
};

/// Throws NumericalFailure if a block's stationary solve misses residual 1e-10.
InvariantDecomposition invariant_probabilities(const MarkovChain& chain);

enum class CycleKind { SimpleCycle, ClosedWalk };

struct CycleRecord {
  Word indices;
  CycleKind kind = CycleKind::SimpleCycle;
  Letter starting_index = 0;
  bool probability_positive = false;
};

/// Johnson's algorithm; each simple cycle reported once in its
/// lexicographically least rotation. Throws BudgetExceeded past max_cycles.
std::vector<CycleRecord> enumerate_simple_cycles(const MarkovChain& chain, bool require_nu_positive,
                                                 std::size_t max_cycles = 1'000'000);

/// Streaming enumeration of closed walks (P-cycles, letters may repeat) of
/// length 1..max_len, start by start, depth first.
class ClosedWalkEnumerator {
 public:
  ClosedWalkEnumerator(const MarkovChain& chain, std::size_t max_len, bool require_nu_positive);

  std::optional<CycleRecord> next();

 private:
  bool admissible_start(Letter s) const;
  bool advance();

  MarkovChain chain_;
  std::size_t max_len_;
  bool require_nu_;
  Letter start_ = 0;
  Word path_;
  // Next successor slot to try at every depth.
  std::vector<std::size_t> cursor_;
  bool pending_emit_ = false;
  bool done_ = false;
};

/// Path of `horizon` letters: first letter ~ nu, then rows of P.
/// Throws DegenerateDistribution on a zero distribution.
Word sample_path(const MarkovChain& chain, std::size_t horizon, std::uint64_t seed);

class Rng;
Word sample_path(const MarkovChain& chain, std::size_t horizon, Rng& rng);

/// Index drawn from unnormalized nonnegative weights.
std::size_t sample_index(const Vector& weights, Rng& rng);

}  // namespace jsrlab
