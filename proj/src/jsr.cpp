#include "jsrlab/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "jsrlab/words.hpp"

namespace jsrlab {

namespace {

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kMax / base) return kMax;
    r *= base;
  }
  return r;
}

double root(double x, std::size_t k) {
  return k == 1 ? x : std::pow(x, 1.0 / static_cast<double>(k));
}

struct Witness {
  double value = -1.0;
  Word word;
  std::size_t evaluated = 0;

  void offer(double v, const Word& w) {
    if (detail::better_witness(v, w, value, word)) {
      value = v;
      word = w;
    }
  }
};

}  // namespace

namespace detail {

bool better_witness(double value, const Word& w, double best, const Word& best_word) {
  if (best_word.empty()) return true;
  const double slack = 1e-12 * std::max(1.0, std::abs(best));
  if (value > best + slack) return true;
  if (value < best - slack) return false;
  if (w.size() != best_word.size()) return w.size() < best_word.size();
  return w < best_word;
}

}  // namespace detail

JsrBracket jsr_bounds_bruteforce(const MatrixTuple& tuple, std::size_t horizon, NormKind kind, Exec exec,
                                 std::size_t cap) {
  if (horizon == 0) throw Error(Errc::InvalidInput, "horizon must be at least 1");
  const std::size_t n = tuple.size();
  if (saturating_pow(n, horizon) > cap) {
    throw Error(Errc::BudgetExceeded, std::to_string(n) + "^" + std::to_string(horizon) +
                                          " words exceed the enumeration cap " + std::to_string(cap));
  }
  const Digraph graph = Digraph::complete(n);
  std::vector<double> upper(n, 0.0);
  std::vector<Witness> lower(n);
  std::vector<std::size_t> counted(n, 0);

  for_each_partition(n, exec, [&](std::size_t a) {
    const auto first = static_cast<Letter>(a);
    for_each_word(graph, tuple.span(), horizon, first, [&](const Word&, const Matrix& prod) {
      upper[a] = std::max(upper[a], root(induced_norm(prod, kind), horizon));
      ++counted[a];
      return true;
    });
    for_each_necklace(graph, tuple.span(), horizon, NecklaceMode::Primitive, first,
                      [&](const Word& w, const Matrix& prod) {
                        lower[a].offer(root(spectral_radius(prod), w.size()), w);
                        ++counted[a];
                        return true;
                      });
  });

  JsrBracket out;
  out.norm_kind = kind;
  out.upper_horizon = horizon;
  Witness best;
  for (std::size_t a = 0; a < n; ++a) {
    out.upper = std::max(out.upper, upper[a]);
    if (!lower[a].word.empty()) best.offer(lower[a].value, lower[a].word);
    out.evaluated += counted[a];
  }
  out.lower = best.value;
  out.lower_witness = best.word;
  return out;
}

JsrBracket jsr_gripenberg(const MatrixTuple& tuple, const GripenbergOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(Errc::InvalidInput, "tol must be positive");
  const std::size_t n = tuple.size();

  // Words live in an arena as parent links so that deep searches stay linear.
  struct Link {
    std::size_t parent;
    Letter letter;
  };
  std::vector<Link> arena;
  constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();
  auto word_of = [&](std::size_t id) {
    Word w;
    for (; id != kRoot; id = arena[id].parent) w.push_back(arena[id].letter);
    std::reverse(w.begin(), w.end());
    return w;
  };

  struct Node {
    std::size_t id;
    std::size_t len;
    Matrix prod;
    double p;
  };
  // Highest p first; ties go to shorter, then earlier-created nodes.
  auto cmp = [](const Node& a, const Node& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.len != b.len) return a.len > b.len;
    return a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);

  JsrBracket out;
  out.norm_kind = opts.kind;
  Witness best;
  double pruned_max = 0.0;
  std::vector<Node> fresh;

  auto visit = [&](std::size_t parent, Letter letter, std::size_t len, Matrix prod, double parent_p) {
    ++out.evaluated;
    arena.push_back({parent, letter});
    const std::size_t id = arena.size() - 1;
    out.upper_horizon = std::max(out.upper_horizon, len);
    const double r = root(spectral_radius(prod), len);
    const double slack = 1e-12 * std::max(1.0, std::abs(best.value));
    // Only a candidate that can beat or tie the incumbent is spelled out.
    if (best.word.empty() || r > best.value + slack || (r >= best.value - slack && len <= best.word.size())) {
      best.offer(r, canonical_rotation(word_of(id)));
    }
    const double p = std::min(parent_p, root(induced_norm(prod, opts.kind), len));
    fresh.push_back({id, len, std::move(prod), p});
  };
  // Children are scored before any is filed so that the lower bound they
  // raise already applies to their siblings.
  auto file = [&] {
    for (auto& node : fresh) {
      if (node.p <= best.value + opts.tol) {
        pruned_max = std::max(pruned_max, node.p);
      } else {
        open.push(std::move(node));
      }
    }
    fresh.clear();
  };

  for (std::size_t i = 0; i < n; ++i) {
    visit(kRoot, static_cast<Letter>(i), 1, tuple[i], std::numeric_limits<double>::infinity());
  }
  file();

  while (!open.empty()) {
    if (open.top().p <= best.value + opts.tol) {
      pruned_max = std::max(pruned_max, open.top().p);
      open.pop();
      continue;
    }
    if (out.evaluated + n > opts.budget) {
      out.budget_exhausted = true;
      break;
    }
    Node node = open.top();
    open.pop();
    for (std::size_t i = 0; i < n; ++i) {
      visit(node.id, static_cast<Letter>(i), node.len + 1, tuple[i] * node.prod, node.p);
    }
    file();
  }

  out.lower = best.value;
  out.lower_witness = best.word;
  out.upper = std::max({pruned_max, open.empty() ? 0.0 : open.top().p, out.lower});
  return out;
}

BarabanovApprox::BarabanovApprox(MatrixTuple tuple, double scale, std::size_t depth, NormKind kind,
                                 std::size_t cap)
    : tuple_(std::move(tuple)), scale_(scale), depth_(depth), kind_(kind) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw Error(Errc::InvalidInput, "scale must be positive");
  if (saturating_pow(tuple_.size(), depth_) > cap) {
    throw Error(Errc::BudgetExceeded, "N^depth exceeds the enumeration cap " + std::to_string(cap));
  }
}

double BarabanovApprox::eval(const Vector& x, std::size_t depth) const {
  if (x.size() != tuple_.dim()) throw Error(Errc::InvalidInput, "vector has the wrong dimension");
  double v = vector_norm(x, kind_);
  if (depth == 0) return v;
  double inner = 0.0;
  for (std::size_t i = 0; i < tuple_.size(); ++i) {
    inner = std::max(inner, eval(tuple_[i] * x, depth - 1));
  }
  return std::max(v, inner / scale_);
}

BarabanovApprox barabanov_approx(const MatrixTuple& tuple, double scale, std::size_t depth, NormKind kind) {
  return BarabanovApprox(tuple, scale, depth, kind);
}

}  // namespace jsrlab
