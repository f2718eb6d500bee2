#pragma once

#include <map>
#include <optional>
#include <utility>

#include "jsrlab/markov.hpp"
#include "jsrlab/system.hpp"

namespace jsrlab {

/// Shift-invariant Markov chain of order m over N letters, stored as sparse
/// tensors: nu over m-tuples and P over (m+1)-tuples.
///
/// A row P(t, .) may be left undefined for an m-tuple t that cannot be
/// reached from the support of nu; every defined row must sum to one.
class HigherOrderChain {
 public:
  using Tensor = std::map<Word, double>;

  HigherOrderChain(std::size_t order, std::size_t n_states, Tensor p, Tensor nu);

  /// The order-1 tensor view of an ordinary chain (requires nu).
  static HigherOrderChain from_markov(const MarkovChain& chain);

  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return n_; }
  const Tensor& p() const noexcept { return p_; }
  const Tensor& nu() const noexcept { return nu_; }

  /// Successors of the window with positive probability, in increasing order.
  const std::vector<std::pair<Letter, double>>& successors(const Word& window) const;
  bool has_row(const Word& window) const { return rows_.count(window) != 0; }

  /// Order-1 chain of an order-1 tensor; undefined rows become self-loops.
  MarkovChain to_markov() const;

 private:
  std::size_t order_;
  std::size_t n_;
  Tensor p_;
  Tensor nu_;
  std::map<Word, std::vector<std::pair<Letter, double>>> rows_;
};

struct LiftedSystem {
  MarkovChain chain;
  MatrixTuple tuple;
};

/// Canonical order-1 lift on the N^m windows (lexicographic state order).
/// Undefined rows are completed by repeating the last letter, which keeps the
/// overlap structure and is unreachable from the support of nu.
LiftedSystem lift_to_order_one(const HigherOrderChain& chain, const MatrixTuple& tuple,
                               std::size_t max_states = 4096);

/// Lexicographic state index of an m-tuple.
std::size_t window_index(const Word& window, std::size_t n_states);

/// Chain of order `order` (default |w|) that deterministically cycles through
/// w: nu uniform over the |w| cyclic windows, unit transition to the periodic
/// successor. Throws InvalidInput when two equal windows have different
/// successors.
HigherOrderChain build_cycle_chain(const Word& w, std::size_t n_states,
                                   std::optional<std::size_t> order = std::nullopt);
HigherOrderChain build_cycle_chain(const Word& w, const MatrixTuple& tuple,
                                   std::optional<std::size_t> order = std::nullopt);

/// True iff the |w| cyclic windows of length m are pairwise distinct.
bool distinct_window_check(const Word& w, std::size_t m);

struct FinitenessWitness {
  Word word;
  /// Minimal period of the word; the order of the cycle chain it defines.
  std::size_t order = 0;
  double rho = 0.0;  // rho(A(w))^(1/|w|)
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
  /// True when the bracket is closed within tol and the word touches it.
  bool certified = false;
};

struct FinitenessOptions {
  std::size_t max_word_len = 8;
  double tol = 1e-9;
  std::size_t budget = 200'000;
};

/// Shortest Lyndon word (then lexicographically least) whose normalized
/// spectral radius reaches the deterministic lower bracket within tol.
std::optional<FinitenessWitness> finiteness_search(const MatrixTuple& tuple,
                                                   const FinitenessOptions& opts = {});

}  // namespace jsrlab
