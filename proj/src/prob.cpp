#include "jsrlab/prob.hpp"

#include <cmath>
#include <limits>

#include "jsrlab/rng.hpp"

namespace jsrlab {

namespace {

double root(double x, std::size_t k) {
  return k == 1 ? x : std::pow(x, 1.0 / static_cast<double>(k));
}

void check_sizes(const MatrixTuple& tuple, std::size_t states) {
  if (tuple.size() != states) {
    throw Error(Errc::InvalidInput, "tuple has " + std::to_string(tuple.size()) + " matrices but the chain has " +
                                        std::to_string(states) + " states");
  }
}

/// Largest h <= max_h with count(h) <= cap.
template <class Count>
std::size_t feasible_horizon(std::size_t max_h, std::size_t cap, Count&& count) {
  std::size_t h = 0;
  while (h < max_h && count(h + 1) <= cap) ++h;
  if (h == 0) throw Error(Errc::BudgetExceeded, "even horizon 1 exceeds the word cap " + std::to_string(cap));
  return h;
}

ExpectationCurve make_curve(std::vector<double> values, NormKind kind) {
  ExpectationCurve c;
  c.norm_kind = kind;
  c.values = std::move(values);
  for (std::size_t t = 0; t < c.values.size(); ++t) c.horizons.push_back(t + 1);
  return c;
}

McEstimate summarize(std::vector<double> values, std::size_t n, std::uint64_t seed) {
  McEstimate est;
  est.horizon = n;
  est.samples = values.size();
  est.seed = seed;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    est.std_error = sd / std::sqrt(static_cast<double>(values.size()));
  }
  return est;
}

ProbUpper upper_from_curve(ExpectationCurve curve, std::size_t requested) {
  ProbUpper out;
  out.budget_exhausted = curve.values.size() < requested;
  out.upper = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < curve.values.size(); ++t) {
    if (curve.values[t] < out.upper) {
      out.upper = curve.values[t];
      out.argmin = curve.horizons[t];
    }
  }
  out.curve = std::move(curve);
  return out;
}

}  // namespace

ExpectationCurve expectation_curve(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t max_horizon,
                                   const ExpectationOptions& opts) {
  check_sizes(tuple, chain.size());
  if (max_horizon == 0) throw Error(Errc::InvalidInput, "horizon must be at least 1");
  const Vector& nu = chain.nu();
  const Digraph& graph = chain.graph();
  const std::size_t n = chain.size();
  std::vector<std::uint8_t> starts(n, 0);
  for (std::size_t i = 0; i < n; ++i) starts[i] = nu(static_cast<Eigen::Index>(i)) > 0.0;

  const std::size_t h = feasible_horizon(max_horizon, opts.cap, [&](std::size_t len) {
    return count_walks(graph, len, starts);
  });

  std::vector<std::vector<double>> sums(n, std::vector<double>(h, 0.0));
  for_each_partition(n, opts.exec, [&](std::size_t a) {
    if (!starts[a]) return;
    std::vector<Matrix> prods(h);
    std::vector<double> probs(h);
    auto& acc = sums[a];
    auto dfs = [&](auto&& self, Letter last, std::size_t t) -> void {
      acc[t] += probs[t] * root(induced_norm(prods[t], opts.kind), t + 1);
      if (t + 1 == h) return;
      for (Letter c : graph.successors(last)) {
        probs[t + 1] = probs[t] * chain.p()(last, c);
        prods[t + 1].noalias() = tuple[c] * prods[t];
        self(self, c, t + 1);
      }
    };
    prods[0] = tuple[a];
    probs[0] = nu(static_cast<Eigen::Index>(a));
    dfs(dfs, static_cast<Letter>(a), 0);
  });

  std::vector<double> values(h, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t t = 0; t < h; ++t) values[t] += sums[a][t];
  return make_curve(std::move(values), opts.kind);
}

ExpectationCurve expectation_curve(const MatrixTuple& tuple, const HigherOrderChain& chain,
                                   std::size_t max_horizon, const ExpectationOptions& opts) {
  check_sizes(tuple, chain.size());
  if (max_horizon == 0) throw Error(Errc::InvalidInput, "horizon must be at least 1");
  const std::size_t m = chain.order();
  std::vector<std::pair<Word, double>> windows(chain.nu().begin(), chain.nu().end());

  // counts[len - 1] = number of positive-probability words of length len.
  std::vector<std::uint64_t> counts;
  {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::map<Word, std::uint64_t> frontier;
    for (const auto& [w, v] : windows) frontier[w] = 1;
    std::size_t prefixes = 0;
    for (std::size_t len = 1; len <= std::min(m, max_horizon); ++len) {
      std::map<Word, int> distinct;
      for (const auto& [w, v] : windows) distinct[Word(w.begin(), w.begin() + static_cast<long>(len))];
      prefixes = distinct.size();
      counts.push_back(prefixes);
    }
    for (std::size_t len = m + 1; len <= max_horizon; ++len) {
      std::map<Word, std::uint64_t> next;
      for (const auto& [w, k] : frontier) {
        for (const auto& [c, prob] : chain.successors(w)) {
          Word s(w.begin() + 1, w.end());
          s.push_back(c);
          auto& slot = next[s];
          slot = kMax - slot < k ? kMax : slot + k;
        }
      }
      frontier = std::move(next);
      std::uint64_t total = 0;
      for (const auto& [w, k] : frontier) total = kMax - total < k ? kMax : total + k;
      counts.push_back(total);
    }
  }
  const std::size_t h = feasible_horizon(max_horizon, opts.cap, [&](std::size_t len) { return counts[len - 1]; });

  std::vector<double> values(h, 0.0);
  for (std::size_t len = 1; len <= std::min(m, h); ++len) {
    std::map<Word, double> marginal;
    for (const auto& [w, v] : windows) marginal[Word(w.begin(), w.begin() + static_cast<long>(len))] += v;
    for (const auto& [prefix, v] : marginal) {
      values[len - 1] += v * root(induced_norm(word_product(tuple, prefix), opts.kind), len);
    }
  }
  if (h <= m) return make_curve(std::move(values), opts.kind);

  std::vector<std::vector<double>> sums(windows.size(), std::vector<double>(h, 0.0));
  for_each_partition(windows.size(), opts.exec, [&](std::size_t k) {
    const auto& [start, weight] = windows[k];
    std::vector<Matrix> prods(h);
    std::vector<double> probs(h);
    Word word = start;
    auto& acc = sums[k];
    auto dfs = [&](auto&& self, std::size_t t) -> void {
      acc[t] += probs[t] * root(induced_norm(prods[t], opts.kind), t + 1);
      if (t + 1 == h) return;
      const Word window(word.end() - static_cast<long>(m), word.end());
      for (const auto& [c, prob] : chain.successors(window)) {
        probs[t + 1] = probs[t] * prob;
        prods[t + 1].noalias() = tuple[c] * prods[t];
        word.push_back(c);
        self(self, t + 1);
        word.pop_back();
      }
    };
    prods[m - 1] = word_product(tuple, start);
    probs[m - 1] = weight;
    // Horizon m is already covered by the marginals; start accumulating at m+1.
    const Word window(word.end() - static_cast<long>(m), word.end());
    for (const auto& [c, prob] : chain.successors(window)) {
      probs[m] = probs[m - 1] * prob;
      prods[m].noalias() = tuple[c] * prods[m - 1];
      word.push_back(c);
      dfs(dfs, m);
      word.pop_back();
    }
  });
  for (std::size_t k = 0; k < windows.size(); ++k)
    for (std::size_t t = m; t < h; ++t) values[t] += sums[k][t];
  return make_curve(std::move(values), opts.kind);
}

double exact_expectation(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t n,
                         const ExpectationOptions& opts) {
  const ExpectationCurve c = expectation_curve(tuple, chain, n, opts);
  if (c.values.size() < n) {
    throw Error(Errc::BudgetExceeded, "horizon " + std::to_string(n) + " exceeds the word cap");
  }
  return c.values.back();
}

double exact_expectation(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t n,
                         const ExpectationOptions& opts) {
  const ExpectationCurve c = expectation_curve(tuple, chain, n, opts);
  if (c.values.size() < n) {
    throw Error(Errc::BudgetExceeded, "horizon " + std::to_string(n) + " exceeds the word cap");
  }
  return c.values.back();
}

ProbUpper prob_jsr_upper(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t max_horizon,
                         const ExpectationOptions& opts) {
  return upper_from_curve(expectation_curve(tuple, chain, max_horizon, opts), max_horizon);
}

ProbUpper prob_jsr_upper(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t max_horizon,
                         const ExpectationOptions& opts) {
  return upper_from_curve(expectation_curve(tuple, chain, max_horizon, opts), max_horizon);
}

McEstimate mc_estimate(const MatrixTuple& tuple, const MarkovChain& chain, std::size_t n, std::size_t samples,
                       std::uint64_t seed, NormKind kind, Exec exec) {
  check_sizes(tuple, chain.size());
  if (n == 0 || samples == 0) throw Error(Errc::InvalidInput, "horizon and samples must be at least 1");
  std::vector<double> values(samples);
  for_each_partition(samples, exec, [&](std::size_t k) {
    Rng rng = Rng::stream(seed, k);
    values[k] = root(induced_norm(word_product(tuple, sample_path(chain, n, rng)), kind), n);
  });
  return summarize(std::move(values), n, seed);
}

McEstimate mc_estimate(const MatrixTuple& tuple, const HigherOrderChain& chain, std::size_t n,
                       std::size_t samples, std::uint64_t seed, NormKind kind, Exec exec) {
  check_sizes(tuple, chain.size());
  if (n == 0 || samples == 0) throw Error(Errc::InvalidInput, "horizon and samples must be at least 1");
  std::vector<double> values(samples);
  for_each_partition(samples, exec, [&](std::size_t k) {
    Rng rng = Rng::stream(seed, k);
    values[k] = root(induced_norm(word_product(tuple, sample_path(chain, n, rng)), kind), n);
  });
  return summarize(std::move(values), n, seed);
}

Word sample_path(const HigherOrderChain& chain, std::size_t horizon, Rng& rng) {
  if (horizon == 0) throw Error(Errc::InvalidInput, "horizon must be at least 1");
  const std::size_t m = chain.order();
  std::vector<const Word*> keys;
  Vector weights(static_cast<Eigen::Index>(chain.nu().size()));
  for (const auto& [w, v] : chain.nu()) {
    weights(static_cast<Eigen::Index>(keys.size())) = v;
    keys.push_back(&w);
  }
  Word path = *keys[sample_index(weights, rng)];
  while (path.size() < horizon) {
    const Word window(path.end() - static_cast<long>(m), path.end());
    const auto& succ = chain.successors(window);
    if (succ.empty()) throw Error(Errc::DegenerateDistribution, "window " + format_word(window) + " has no row");
    Vector row(static_cast<Eigen::Index>(succ.size()));
    for (std::size_t i = 0; i < succ.size(); ++i) row(static_cast<Eigen::Index>(i)) = succ[i].second;
    path.push_back(succ[sample_index(row, rng)].first);
  }
  path.resize(horizon);
  return path;
}

}  // namespace jsrlab
