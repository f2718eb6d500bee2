#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jsrlab/system.hpp"

namespace jsrlab {

/// Directed graph on letters; edge i -> j means the letter j may follow i.
class Digraph {
 public:
  explicit Digraph(std::size_t n) : n_(n), adj_(n * n, 0), out_(n) {}

  static Digraph complete(std::size_t n);
  /// Edges where p(i, j) > 0.
  static Digraph from_positive(const Matrix& p);

  std::size_t size() const noexcept { return n_; }
  bool edge(std::size_t i, std::size_t j) const noexcept { return adj_[i * n_ + j] != 0; }
  /// Successors of i in increasing order.
  const std::vector<Letter>& successors(std::size_t i) const noexcept { return out_[i]; }
  void add_edge(std::size_t i, std::size_t j);

 private:
  std::size_t n_;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<Letter>> out_;
};

/// Lexicographically least rotation.
Word canonical_rotation(const Word& w);
/// Smallest p dividing |w| such that w is the (|w|/p)-th power of its prefix.
std::size_t minimal_period(const Word& w);
bool is_lyndon(const Word& w);

enum class NecklaceMode {
  /// Every necklace (canonical rotation), powers included.
  All,
  /// Lyndon words only: canonical and primitive.
  Primitive,
  /// Canonical words with pairwise-distinct letters.
  DistinctLetters,
};

/// Depth-first, lexicographic enumeration of canonical necklace
/// representatives of length 1..max_len whose consecutive letters and closing
/// letter pair are graph edges. The visitor receives the word and, when gens is
/// non-empty, the product A(w); returning false stops the walk. Restricting
/// `first` enumerates one subtree, which is how the parallel kernels split work.
template <class Visit>
bool for_each_necklace(const Digraph& graph, std::span<const Matrix> gens, std::size_t max_len,
                       NecklaceMode mode, std::optional<Letter> first, Visit&& visit) {
  const std::size_t n = graph.size();
  if (max_len == 0 || n == 0) return true;
  Word word;
  word.reserve(max_len);
  std::vector<Matrix> prods(gens.empty() ? 0 : max_len);
  std::vector<std::uint8_t> used(n, 0);

  // period follows the Fredricksen-Kessler-Maiorana prenecklace recursion.
  auto recurse = [&](auto&& self, std::size_t period) -> bool {
    const std::size_t t = word.size();
    const Letter last = word.back();
    if (graph.edge(last, word.front())) {
      bool emit = false;
      switch (mode) {
        case NecklaceMode::All: emit = t % period == 0; break;
        case NecklaceMode::Primitive: emit = period == t; break;
        case NecklaceMode::DistinctLetters: emit = true; break;
      }
      if (emit) {
        static const Matrix kEmpty;
        if (!visit(static_cast<const Word&>(word), gens.empty() ? kEmpty : prods[t - 1])) return false;
      }
    }
    if (t == max_len) return true;
    for (Letter c : graph.successors(last)) {
      std::size_t next_period = period;
      if (mode == NecklaceMode::DistinctLetters) {
        if (c <= word.front() || used[c]) continue;
        next_period = t + 1;
      } else {
        const Letter ref = word[t - period];
        if (c < ref) continue;
        if (c > ref) next_period = t + 1;
      }
      word.push_back(c);
      used[c] = 1;
      if (!gens.empty()) prods[t].noalias() = gens[c] * prods[t - 1];
      const bool go_on = self(self, next_period);
      used[c] = 0;
      word.pop_back();
      if (!go_on) return false;
    }
    return true;
  };

  for (Letter a = 0; a < n; ++a) {
    if (first && *first != a) continue;
    word.assign(1, a);
    used.assign(n, 0);
    used[a] = 1;
    if (!gens.empty()) prods[0] = gens[a];
    if (!recurse(recurse, 1)) return false;
  }
  return true;
}

/// Depth-first enumeration of all words of length exactly `len` following
/// graph edges, in lexicographic order, with running products.
template <class Visit>
bool for_each_word(const Digraph& graph, std::span<const Matrix> gens, std::size_t len,
                   std::optional<Letter> first, Visit&& visit) {
  const std::size_t n = graph.size();
  if (len == 0 || n == 0) return true;
  Word word;
  word.reserve(len);
  std::vector<Matrix> prods(gens.empty() ? 0 : len);
  auto recurse = [&](auto&& self) -> bool {
    const std::size_t t = word.size();
    if (t == len) {
      static const Matrix kEmpty;
      return visit(static_cast<const Word&>(word), gens.empty() ? kEmpty : prods[t - 1]);
    }
    for (Letter c : graph.successors(word.back())) {
      word.push_back(c);
      if (!gens.empty()) prods[t].noalias() = gens[c] * prods[t - 1];
      const bool go_on = self(self);
      word.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  for (Letter a = 0; a < n; ++a) {
    if (first && *first != a) continue;
    word.assign(1, a);
    if (!gens.empty()) prods[0] = gens[a];
    if (!recurse(recurse)) return false;
  }
  return true;
}

/// Number of graph walks with `len` letters (saturating at UINT64_MAX),
/// starting from the letters flagged in `starts` (all letters if empty).
std::uint64_t count_walks(const Digraph& graph, std::size_t len,
                          std::span<const std::uint8_t> starts = {});

}  // namespace jsrlab
