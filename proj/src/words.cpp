#include "jsrlab/words.hpp"

#include <algorithm>
#include <limits>

namespace jsrlab {

Digraph Digraph::complete(std::size_t n) {
  Digraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.add_edge(i, j);
  return g;
}

Digraph Digraph::from_positive(const Matrix& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  Digraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) g.add_edge(i, j);
  return g;
}

void Digraph::add_edge(std::size_t i, std::size_t j) {
  if (adj_[i * n_ + j]) return;
  adj_[i * n_ + j] = 1;
  auto& out = out_[i];
  out.insert(std::upper_bound(out.begin(), out.end(), static_cast<Letter>(j)), static_cast<Letter>(j));
}

Word canonical_rotation(const Word& w) {
  Word best = w;
  Word rot = w;
  for (std::size_t s = 1; s < w.size(); ++s) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

std::size_t minimal_period(const Word& w) {
  const std::size_t k = w.size();
  for (std::size_t p = 1; p < k; ++p) {
    if (k % p) continue;
    bool periodic = true;
    for (std::size_t i = p; i < k && periodic; ++i) periodic = w[i] == w[i - p];
    if (periodic) return p;
  }
  return k;
}

bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  Word rot = w;
  for (std::size_t s = 1; s < w.size(); ++s) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (!(w < rot)) return false;
  }
  return true;
}

std::uint64_t count_walks(const Digraph& graph, std::size_t len, std::span<const std::uint8_t> starts) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::size_t n = graph.size();
  if (len == 0) return 0;
  std::vector<std::uint64_t> cur(n, 0);
  for (std::size_t i = 0; i < n; ++i) cur[i] = starts.empty() || starts[i] ? 1 : 0;
  for (std::size_t step = 1; step < len; ++step) {
    std::vector<std::uint64_t> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!cur[i]) continue;
      for (Letter j : graph.successors(i)) {
        next[j] = kMax - next[j] < cur[i] ? kMax : next[j] + cur[i];
      }
    }
    cur = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto c : cur) total = kMax - total < c ? kMax : total + c;
  return total;
}

}  // namespace jsrlab
