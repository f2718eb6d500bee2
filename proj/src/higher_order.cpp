#include "jsrlab/higher_order.hpp"

#include <cmath>
#include <deque>
#include <set>

#include "jsrlab/jsr.hpp"

namespace jsrlab {

namespace {

void check_key(const Word& key, std::size_t len, std::size_t n, const char* what) {
  if (key.size() != len) {
    throw Error(Errc::InvalidInput, std::string(what) + " entry " + format_word(key) + " should have " +
                                        std::to_string(len) + " indices");
  }
  for (Letter l : key) {
    if (l >= n) throw Error(Errc::IndexOutOfRange, std::string(what) + " entry " + format_word(key));
  }
}

double checked_value(double v, const Word& key, const char* what) {
  if (!std::isfinite(v)) throw Error(Errc::NonFinite, std::string(what) + " entry " + format_word(key));
  if (v < -1e-15) {
    throw Error(Errc::InvalidInput, std::string(what) + " entry " + format_word(key) + " is negative");
  }
  return v < 0.0 ? 0.0 : v;
}

}  // namespace

HigherOrderChain::HigherOrderChain(std::size_t order, std::size_t n_states, Tensor p, Tensor nu)
    : order_(order), n_(n_states) {
  if (order_ == 0 || n_ == 0) throw Error(Errc::InvalidInput, "order and state count must be positive");
  for (auto& [key, v] : p) {
    check_key(key, order_ + 1, n_, "P");
    const double x = checked_value(v, key, "P");
    if (x > 0.0) p_.emplace(key, x);
  }
  for (auto& [key, v] : nu) {
    check_key(key, order_, n_, "nu");
    const double x = checked_value(v, key, "nu");
    if (x > 0.0) nu_.emplace(key, x);
  }

  std::map<Word, double> row_sums;
  for (const auto& [key, v] : p_) {
    Word window(key.begin(), key.end() - 1);
    rows_[window].emplace_back(key.back(), v);
    row_sums[window] += v;
  }
  for (const auto& [window, s] : row_sums) {
    if (std::abs(s - 1.0) > 1e-12) {
      throw Error(Errc::InvalidInput, "P row " + format_word(window) + " sums to " + std::to_string(s));
    }
  }

  double total = 0.0;
  for (const auto& [key, v] : nu_) total += v;
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(Errc::InvalidInput, "nu tensor sums to " + std::to_string(total) + ", not 1");
  }

  std::set<Word> seen;
  std::deque<Word> queue;
  for (const auto& [key, v] : nu_) {
    seen.insert(key);
    queue.push_back(key);
  }
  while (!queue.empty()) {
    Word window = std::move(queue.front());
    queue.pop_front();
    auto it = rows_.find(window);
    if (it == rows_.end()) {
      throw Error(Errc::InvalidInput, "P row " + format_word(window) + " is reachable but undefined");
    }
    for (const auto& [c, prob] : it->second) {
      Word next(window.begin() + 1, window.end());
      next.push_back(c);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }

  // Shift invariance: sum_{i1} nu(i1..im) P(i1..im+1) = nu(i2..im+1).
  std::map<Word, double> shifted;
  for (const auto& [window, v] : nu_) {
    for (const auto& [c, prob] : rows_.at(window)) {
      Word key(window.begin() + 1, window.end());
      key.push_back(c);
      shifted[key] += v * prob;
    }
  }
  auto lookup = [](const std::map<Word, double>& m, const Word& k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  };
  for (const auto& [key, v] : shifted) {
    if (std::abs(v - lookup(nu_, key)) > 1e-10) {
      throw Error(Errc::InvalidInput, "nu is not shift-invariant at " + format_word(key));
    }
  }
  for (const auto& [key, v] : nu_) {
    if (std::abs(v - lookup(shifted, key)) > 1e-10) {
      throw Error(Errc::InvalidInput, "nu is not shift-invariant at " + format_word(key));
    }
  }
}

HigherOrderChain HigherOrderChain::from_markov(const MarkovChain& chain) {
  Tensor p, nu;
  const auto n = static_cast<Eigen::Index>(chain.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (chain.p()(i, j) > 0.0) p[{static_cast<Letter>(i), static_cast<Letter>(j)}] = chain.p()(i, j);
    }
    if (chain.nu()(i) > 0.0) nu[{static_cast<Letter>(i)}] = chain.nu()(i);
  }
  return HigherOrderChain(1, chain.size(), std::move(p), std::move(nu));
}

const std::vector<std::pair<Letter, double>>& HigherOrderChain::successors(const Word& window) const {
  static const std::vector<std::pair<Letter, double>> kNone;
  auto it = rows_.find(window);
  return it == rows_.end() ? kNone : it->second;
}

MarkovChain HigherOrderChain::to_markov() const {
  if (order_ != 1) throw Error(Errc::InvalidInput, "to_markov needs an order-1 chain; lift it first");
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix p = Matrix::Zero(n, n);
  Vector nu = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Word w{static_cast<Letter>(i)};
    if (!has_row(w)) p(i, i) = 1.0;
    for (const auto& [c, prob] : successors(w)) p(i, static_cast<Eigen::Index>(c)) = prob;
  }
  for (const auto& [key, v] : nu_) nu(static_cast<Eigen::Index>(key.front())) = v;
  return MarkovChain(std::move(p), std::move(nu));
}

std::size_t window_index(const Word& window, std::size_t n_states) {
  std::size_t idx = 0;
  for (Letter l : window) idx = idx * n_states + l;
  return idx;
}

LiftedSystem lift_to_order_one(const HigherOrderChain& chain, const MatrixTuple& tuple,
                               std::size_t max_states) {
  const std::size_t n = chain.size();
  const std::size_t m = chain.order();
  if (tuple.size() != n) {
    throw Error(Errc::InvalidInput, "tuple has " + std::to_string(tuple.size()) + " matrices but chain has " +
                                        std::to_string(n) + " states");
  }
  std::size_t states = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (states > max_states / n + 1) {
      states = max_states + 1;
      break;
    }
    states *= n;
  }
  if (states > max_states) {
    throw Error(Errc::StateExplosion, "N^m exceeds the state cap " + std::to_string(max_states));
  }

  const auto s = static_cast<Eigen::Index>(states);
  Matrix p = Matrix::Zero(s, s);
  Vector nu = Vector::Zero(s);
  std::vector<Matrix> lifted;
  lifted.reserve(states);
  Word window(m, 0);
  for (std::size_t idx = 0; idx < states; ++idx) {
    // window = base-n digits of idx
    std::size_t rest = idx;
    for (std::size_t pos = m; pos-- > 0;) {
      window[pos] = static_cast<Letter>(rest % n);
      rest /= n;
    }
    Word shifted(window.begin() + 1, window.end());
    shifted.push_back(0);
    const auto row = static_cast<Eigen::Index>(idx);
    if (chain.has_row(window)) {
      for (const auto& [c, prob] : chain.successors(window)) {
        shifted.back() = c;
        p(row, static_cast<Eigen::Index>(window_index(shifted, n))) = prob;
      }
    } else {
      shifted.back() = window.back();
      p(row, static_cast<Eigen::Index>(window_index(shifted, n))) = 1.0;
    }
    auto it = chain.nu().find(window);
    if (it != chain.nu().end()) nu(row) = it->second;
    lifted.push_back(tuple[window.back()]);
  }
  return {MarkovChain(std::move(p), std::move(nu)), MatrixTuple(std::move(lifted))};
}

HigherOrderChain build_cycle_chain(const Word& w, std::size_t n_states, std::optional<std::size_t> order) {
  validate_word(w, n_states);
  const std::size_t k = w.size();
  const std::size_t m = order.value_or(k);
  if (m == 0) throw Error(Errc::InvalidInput, "order must be positive");
  HigherOrderChain::Tensor p, nu;
  for (std::size_t j = 0; j < k; ++j) {
    Word window(m);
    for (std::size_t i = 0; i < m; ++i) window[i] = w[(j + i) % k];
    const Letter succ = w[(j + m) % k];
    Word key = window;
    key.push_back(succ);
    for (Letter other = 0; other < n_states; ++other) {
      if (other == succ) continue;
      Word alt = window;
      alt.push_back(other);
      if (p.count(alt)) {
        throw Error(Errc::InvalidInput, "window " + format_word(window) + " of " + format_word(w) +
                                            " has two successors; raise the order");
      }
    }
    p[key] = 1.0;
    nu[window] += 1.0 / static_cast<double>(k);
  }
  return HigherOrderChain(m, n_states, std::move(p), std::move(nu));
}

HigherOrderChain build_cycle_chain(const Word& w, const MatrixTuple& tuple, std::optional<std::size_t> order) {
  return build_cycle_chain(w, tuple.size(), order);
}

bool distinct_window_check(const Word& w, std::size_t m) {
  if (w.empty() || m == 0) throw Error(Errc::InvalidInput, "need a non-empty word and m >= 1");
  const std::size_t k = w.size();
  std::set<Word> windows;
  for (std::size_t j = 0; j < k; ++j) {
    Word window(m);
    for (std::size_t i = 0; i < m; ++i) window[i] = w[(j + i) % k];
    if (!windows.insert(std::move(window)).second) return false;
  }
  return true;
}

std::optional<FinitenessWitness> finiteness_search(const MatrixTuple& tuple, const FinitenessOptions& opts) {
  if (opts.max_word_len == 0) throw Error(Errc::InvalidInput, "max_word_len must be at least 1");
  const JsrBracket bracket = jsr_gripenberg(tuple, {.tol = opts.tol, .budget = opts.budget});

  std::optional<FinitenessWitness> best;
  const Digraph graph = Digraph::complete(tuple.size());
  // Length-major order: the shortest witness wins, lexicographic within a length.
  for (std::size_t len = 1; len <= opts.max_word_len && !best; ++len) {
    for_each_necklace(graph, tuple.span(), len, NecklaceMode::Primitive, std::nullopt,
                      [&](const Word& w, const Matrix& prod) {
                        if (w.size() != len) return true;
                        const double r = std::pow(spectral_radius(prod), 1.0 / static_cast<double>(len));
                        if (r >= bracket.lower - opts.tol) {
                          FinitenessWitness fw;
                          fw.word = w;
                          fw.order = minimal_period(w);
                          fw.rho = r;
                          fw.bracket_lower = bracket.lower;
                          fw.bracket_upper = bracket.upper;
                          fw.certified = !bracket.budget_exhausted && r >= bracket.upper - opts.tol;
                          best = std::move(fw);
                          return false;
                        }
                        return true;
                      });
  }
  return best;
}

}  // namespace jsrlab
