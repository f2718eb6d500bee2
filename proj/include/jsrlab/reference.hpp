#pragma once

#include "jsrlab/higher_order.hpp"
#include "jsrlab/jsr.hpp"
#include "jsrlab/markov.hpp"

// Straightforward serial implementations kept as a baseline for the tests and
// the benchmark. Every word is enumerated with an odometer and its product is
// rebuilt from scratch; no necklace reduction, no pruning, no threads.
namespace jsrlab::reference {

/// Same bracket as jsr_bounds_bruteforce (lower over all words of length <= n).
JsrBracket jsr_bounds(const MatrixTuple& tuple, std::size_t horizon, NormKind kind = NormKind::Two);

/// E_n summed over all N^n words, zero-probability words included.
double expectation(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t n,
                   NormKind kind = NormKind::Two);
double expectation(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t n,
                   NormKind kind = NormKind::Two);

/// Calls visit(word) for every word of length `len` over `letters` letters.
template <class Visit>
void odometer(std::size_t letters, std::size_t len, Visit&& visit) {
  Word w(len, 0);
  while (true) {
    visit(static_cast<const Word&>(w));
    std::size_t pos = len;
    while (pos > 0 && w[pos - 1] + 1 == letters) w[--pos] = 0;
    if (pos == 0) return;
    ++w[pos - 1];
  }
}

}  // namespace jsrlab::reference
