#include "jsrlab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "jsrlab/rng.hpp"

namespace jsrlab {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kNegClamp = 1e-15;
constexpr double kStationaryTol = 1e-10;

void clamp_small_negatives(Eigen::Ref<Matrix> m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double& x = m(i, j);
      if (x < -kNegClamp) {
        throw Error(Errc::InvalidInput, std::string(what) + " has a negative entry at (" +
                                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
      if (x < 0.0) x = 0.0;
    }
  }
}

}  // namespace

MarkovChain::MarkovChain(Matrix p, std::optional<Vector> nu)
    : p_(std::move(p)), nu_(std::move(nu)), graph_(0) {
  if (p_.rows() == 0 || p_.rows() != p_.cols()) {
    throw Error(Errc::InvalidInput, "transition matrix must be square and non-empty");
  }
  if (!p_.allFinite()) throw Error(Errc::NonFinite, "transition matrix has non-finite entries");
  clamp_small_negatives(p_, "transition matrix");
  for (Eigen::Index i = 0; i < p_.rows(); ++i) {
    const double s = p_.row(i).sum();
    if (std::abs(s - 1.0) > kRowSumTol) {
      throw Error(Errc::InvalidInput,
                  "row " + std::to_string(i + 1) + " of P sums to " + std::to_string(s) + ", not 1");
    }
  }
  if (nu_) {
    Vector& v = *nu_;
    if (v.size() != p_.rows()) throw Error(Errc::InvalidInput, "nu length does not match P");
    if (!v.allFinite()) throw Error(Errc::NonFinite, "nu has non-finite entries");
    Eigen::Map<Matrix> as_matrix(v.data(), v.size(), 1);
    clamp_small_negatives(as_matrix, "nu");
    if (std::abs(v.sum() - 1.0) > kRowSumTol) {
      throw Error(Errc::InvalidInput, "nu sums to " + std::to_string(v.sum()) + ", not 1");
    }
    const double drift = (v.transpose() * p_ - v.transpose()).cwiseAbs().maxCoeff();
    if (drift > kStationaryTol) {
      throw Error(Errc::InvalidInput, "nu is not invariant under P (|nu P - nu| = " +
                                          std::to_string(drift) + ")");
    }
  }
  graph_ = Digraph::from_positive(p_);
}

const Vector& MarkovChain::nu() const {
  if (!nu_) throw Error(Errc::InvalidInput, "the chain has no invariant probability");
  return *nu_;
}

SccDecomposition scc_decompose(const MarkovChain& chain) {
  const std::size_t n = chain.size();
  const Digraph& g = chain.graph();

  // Tarjan's algorithm.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::size_t> stack;
  int counter = 0, n_comp = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (Letter w : g.successors(v)) {
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = n_comp;
      } while (w != v);
      ++n_comp;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) strong(v);

  std::vector<std::uint8_t> closed(static_cast<std::size_t>(n_comp), 1);
  for (std::size_t v = 0; v < n; ++v)
    for (Letter w : g.successors(v))
      if (comp[w] != comp[v]) closed[static_cast<std::size_t>(comp[v])] = 0;

  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(n_comp));
  for (std::size_t v = 0; v < n; ++v) members[static_cast<std::size_t>(comp[v])].push_back(v);

  SccDecomposition out;
  out.block_of.assign(n, -1);
  std::vector<std::size_t> order;
  for (int c = 0; c < n_comp; ++c)
    if (closed[static_cast<std::size_t>(c)]) order.push_back(static_cast<std::size_t>(c));
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return members[a].front() < members[b].front(); });
  for (std::size_t c : order) {
    const auto& block = members[c];
    const int id = static_cast<int>(out.recurrent_blocks.size());
    Matrix pb(static_cast<Eigen::Index>(block.size()), static_cast<Eigen::Index>(block.size()));
    for (std::size_t i = 0; i < block.size(); ++i) {
      out.block_of[block[i]] = id;
      out.permutation.push_back(block[i]);
      for (std::size_t j = 0; j < block.size(); ++j) {
        pb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            chain.p()(static_cast<Eigen::Index>(block[i]), static_cast<Eigen::Index>(block[j]));
      }
    }
    out.recurrent_blocks.push_back(block);
    out.recurrent_matrices.push_back(std::move(pb));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (out.block_of[v] < 0) {
      out.transient.push_back(v);
      out.permutation.push_back(v);
    }
  }
  const auto nt = static_cast<Eigen::Index>(out.transient.size());
  out.transient_matrix.resize(nt, nt);
  for (Eigen::Index i = 0; i < nt; ++i)
    for (Eigen::Index j = 0; j < nt; ++j)
      out.transient_matrix(i, j) = chain.p()(static_cast<Eigen::Index>(out.transient[static_cast<std::size_t>(i)]),
                                             static_cast<Eigen::Index>(out.transient[static_cast<std::size_t>(j)]));
  out.transient_spectral_radius = nt > 0 ? spectral_radius(out.transient_matrix) : 0.0;
  return out;
}

Matrix permuted(const Matrix& p, const std::vector<std::size_t>& permutation) {
  const auto n = static_cast<Eigen::Index>(permutation.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = p(static_cast<Eigen::Index>(permutation[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(permutation[static_cast<std::size_t>(j)]));
  return out;
}

InvariantDecomposition invariant_probabilities(const MarkovChain& chain) {
  InvariantDecomposition out;
  out.scc = scc_decompose(chain);
  const auto n = static_cast<Eigen::Index>(chain.size());
  for (std::size_t b = 0; b < out.scc.recurrent_blocks.size(); ++b) {
    const Matrix& pb = out.scc.recurrent_matrices[b];
    const Eigen::Index k = pb.rows();
    // (P_b^T - I) nu = 0 with the last equation replaced by sum(nu) = 1.
    Matrix system = pb.transpose() - Matrix::Identity(k, k);
    system.row(k - 1).setOnes();
    Vector rhs = Vector::Zero(k);
    rhs(k - 1) = 1.0;
    Vector local = system.fullPivLu().solve(rhs);
    for (Eigen::Index i = 0; i < k; ++i) local(i) = std::max(local(i), 0.0);
    local /= local.sum();
    const double residual = (local.transpose() * pb - local.transpose()).cwiseAbs().maxCoeff();
    if (!(residual <= kStationaryTol)) {
      throw Error(Errc::NumericalFailure, "stationary solve of block " + std::to_string(b + 1) +
                                              " has residual " + std::to_string(residual));
    }
    Vector full = Vector::Zero(n);
    const auto& block = out.scc.recurrent_blocks[b];
    for (std::size_t i = 0; i < block.size(); ++i) {
      full(static_cast<Eigen::Index>(block[i])) = local(static_cast<Eigen::Index>(i));
    }
    out.extremes.push_back(std::move(full));
  }
  return out;
}

std::optional<std::vector<double>> InvariantDecomposition::decompose(const Vector& nu) const {
  std::vector<double> alpha(extremes.size(), 0.0);
  for (std::size_t b = 0; b < scc.recurrent_blocks.size(); ++b) {
    for (std::size_t i : scc.recurrent_blocks[b]) alpha[b] += nu(static_cast<Eigen::Index>(i));
  }
  if ((mix(alpha) - nu).cwiseAbs().maxCoeff() > 1e-10) return std::nullopt;
  return alpha;
}

Vector InvariantDecomposition::mix(const std::vector<double>& alpha) const {
  Vector out = Vector::Zero(extremes.empty() ? 0 : extremes.front().size());
  for (std::size_t b = 0; b < extremes.size(); ++b) out += alpha[b] * extremes[b];
  return out;
}

std::vector<CycleRecord> enumerate_simple_cycles(const MarkovChain& chain, bool require_nu_positive,
                                                 std::size_t max_cycles) {
  const std::size_t n = chain.size();
  const Digraph& g = chain.graph();
  const Vector* nu = nullptr;
  if (require_nu_positive) nu = &chain.nu();
  else if (chain.has_nu()) nu = &chain.nu();
  auto positive = [&](std::size_t v) { return nu && (*nu)(static_cast<Eigen::Index>(v)) > kNuZero; };

  std::vector<CycleRecord> out;
  std::vector<std::uint8_t> blocked(n, 0);
  std::vector<std::vector<std::size_t>> blocked_by(n);
  Word stack;

  std::function<void(std::size_t)> unblock = [&](std::size_t u) {
    blocked[u] = 0;
    auto pending = std::move(blocked_by[u]);
    blocked_by[u].clear();
    for (std::size_t w : pending)
      if (blocked[w]) unblock(w);
  };

  auto emit = [&]() {
    CycleRecord rec;
    rec.indices = stack;  // starts at its least vertex, hence canonical
    rec.kind = CycleKind::SimpleCycle;
    rec.starting_index = stack.front();
    rec.probability_positive = false;
    for (Letter v : stack) {
      if (positive(v)) {
        rec.starting_index = v;
        rec.probability_positive = true;
        break;
      }
    }
    if (require_nu_positive && !rec.probability_positive) return;
    if (out.size() >= max_cycles) {
      throw Error(Errc::BudgetExceeded, "more than " + std::to_string(max_cycles) + " simple cycles");
    }
    out.push_back(std::move(rec));
  };

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t v = s; v < n; ++v) {
      blocked[v] = 0;
      blocked_by[v].clear();
    }
    std::function<bool(std::size_t)> circuit = [&](std::size_t v) -> bool {
      bool found = false;
      stack.push_back(static_cast<Letter>(v));
      blocked[v] = 1;
      for (Letter w : g.successors(v)) {
        if (w < s) continue;
        if (w == s) {
          emit();
          found = true;
        } else if (!blocked[w] && circuit(w)) {
          found = true;
        }
      }
      if (found) {
        unblock(v);
      } else {
        for (Letter w : g.successors(v)) {
          if (w < s) continue;
          auto& list = blocked_by[w];
          if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
        }
      }
      stack.pop_back();
      return found;
    };
    circuit(s);
  }
  return out;
}

ClosedWalkEnumerator::ClosedWalkEnumerator(const MarkovChain& chain, std::size_t max_len,
                                           bool require_nu_positive)
    : chain_(chain), max_len_(max_len), require_nu_(require_nu_positive) {
  if (max_len == 0) throw Error(Errc::InvalidInput, "max_len must be at least 1");
  if (require_nu_) (void)chain.nu();
}

bool ClosedWalkEnumerator::admissible_start(Letter s) const {
  return !require_nu_ || chain_.nu()(static_cast<Eigen::Index>(s)) > kNuZero;
}

bool ClosedWalkEnumerator::advance() {
  const Digraph& g = chain_.graph();
  while (true) {
    if (path_.empty()) {
      while (start_ < g.size() && !admissible_start(start_)) ++start_;
      if (start_ >= g.size()) return false;
      path_.assign(1, start_);
      cursor_.assign(1, 0);
      ++start_;
      pending_emit_ = true;
      return true;
    }
    while (!path_.empty()) {
      const std::size_t depth = path_.size() - 1;
      if (path_.size() < max_len_) {
        const auto& succ = g.successors(path_.back());
        if (cursor_[depth] < succ.size()) {
          path_.push_back(succ[cursor_[depth]++]);
          cursor_.push_back(0);
          pending_emit_ = true;
          return true;
        }
      }
      path_.pop_back();
      cursor_.pop_back();
    }
  }
}

std::optional<CycleRecord> ClosedWalkEnumerator::next() {
  while (!done_) {
    if (pending_emit_) {
      pending_emit_ = false;
      if (chain_.graph().edge(path_.back(), path_.front())) {
        CycleRecord rec;
        rec.indices = path_;
        rec.kind = CycleKind::ClosedWalk;
        rec.starting_index = path_.front();
        rec.probability_positive =
            chain_.has_nu() && chain_.nu()(static_cast<Eigen::Index>(path_.front())) > kNuZero;
        return rec;
      }
      continue;
    }
    if (!advance()) done_ = true;
  }
  return std::nullopt;
}

std::size_t sample_index(const Vector& weights, Rng& rng) {
  const double total = weights.sum();
  if (!(total > 1e-15)) throw Error(Errc::DegenerateDistribution, "distribution sums to zero");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    acc += weights(i);
    last_positive = static_cast<std::size_t>(i);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

Word sample_path(const MarkovChain& chain, std::size_t horizon, Rng& rng) {
  if (horizon == 0) throw Error(Errc::InvalidInput, "horizon must be at least 1");
  Word w;
  w.reserve(horizon);
  w.push_back(static_cast<Letter>(sample_index(chain.nu(), rng)));
  for (std::size_t t = 1; t < horizon; ++t) {
    const Vector row = chain.p().row(static_cast<Eigen::Index>(w.back())).transpose();
    w.push_back(static_cast<Letter>(sample_index(row, rng)));
  }
  return w;
}

Word sample_path(const MarkovChain& chain, std::size_t horizon, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0);
  return sample_path(chain, horizon, rng);
}

}  // namespace jsrlab
