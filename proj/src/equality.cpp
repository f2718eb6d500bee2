#include "jsrlab/equality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace jsrlab {

namespace {

double root(double x, std::size_t k) {
  return k == 1 ? x : std::pow(x, 1.0 / static_cast<double>(k));
}

bool is_singular(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return s(0) == 0.0 || s(s.size() - 1) <= 1e-12 * s(0);
}

struct PartitionScan {
  std::size_t checked = 0;
  std::optional<CycleRecord> violation;
  double value = 0.0;
};

}  // namespace

std::string_view to_string(VerdictStatus status) noexcept {
  switch (status) {
    case VerdictStatus::ConsistentUpTo: return "ConsistentUpTo";
    case VerdictStatus::Violated: return "Violated";
    case VerdictStatus::Trivial: return "Trivial";
  }
  return "?";
}

EqualityVerdict check_cycle_condition(const MatrixTuple& tuple, const MarkovChain& chain,
                                      const CycleCheckOptions& opts) {
  const JsrBracket bracket = jsr_gripenberg(tuple, {.tol = opts.tol, .budget = opts.budget, .kind = opts.kind});
  return check_cycle_condition(tuple, chain, bracket, opts);
}

EqualityVerdict check_cycle_condition(const MatrixTuple& tuple, const MarkovChain& chain,
                                      const JsrBracket& bracket, const CycleCheckOptions& opts) {
  if (tuple.size() != chain.size()) throw Error(Errc::InvalidInput, "tuple and chain sizes differ");
  if (opts.max_len == 0) throw Error(Errc::InvalidInput, "max_len must be at least 1");
  const Vector& nu = chain.nu();
  EqualityVerdict out;
  out.bracket = bracket;
  out.tol = opts.tol;
  out.max_len = opts.max_len;
  if (bracket.upper <= opts.tol) {
    out.status = VerdictStatus::Trivial;
    return out;
  }

  const std::size_t n = chain.size();
  std::vector<PartitionScan> scans(n);
  // Lowest first letter with a violation so far; later partitions stop early.
  std::atomic<std::size_t> found{n};
  for_each_partition(n, opts.exec, [&](std::size_t a) {
    auto& scan = scans[a];
    for_each_necklace(chain.graph(), tuple.span(), opts.max_len, NecklaceMode::Primitive, static_cast<Letter>(a),
                      [&](const Word& w, const Matrix& prod) {
                        if (found.load(std::memory_order_relaxed) < a) return false;
                        auto start = std::find_if(w.begin(), w.end(), [&](Letter l) { return nu(l) > kNuZero; });
                        if (start == w.end()) return true;
                        ++scan.checked;
                        const double v = root(spectral_radius(prod), w.size());
                        if (v > bracket.upper + opts.tol) {
                          throw Error(Errc::NumericalFailure, "cycle " + format_word(w) +
                                                                  " exceeds the upper bracket; bracket is unsound");
                        }
                        if (v < bracket.lower - opts.tol) {
                          scan.violation = CycleRecord{w, CycleKind::ClosedWalk, *start, true};
                          scan.value = v;
                          std::size_t cur = found.load();
                          while (a < cur && !found.compare_exchange_weak(cur, a)) {
                          }
                          return false;
                        }
                        return true;
                      });
  });

  for (std::size_t a = 0; a < n; ++a) {
    out.cycles_checked += scans[a].checked;
    if (scans[a].violation) {
      out.status = VerdictStatus::Violated;
      out.cycle = scans[a].violation;
      out.value = scans[a].value;
      out.ratio = bracket.lower > 0.0 ? scans[a].value / bracket.lower : 0.0;
      return out;
    }
  }
  out.status = VerdictStatus::ConsistentUpTo;
  return out;
}

DistinctCycleResult check_distinct_cycle(const MatrixTuple& tuple, const DistinctCycleOptions& opts) {
  const std::size_t n = tuple.size();
  if (n > opts.max_letters) {
    throw Error(Errc::BudgetExceeded, "distinct-cycle search is limited to " + std::to_string(opts.max_letters) +
                                          " matrices, got " + std::to_string(n));
  }
  DistinctCycleResult out;
  out.bracket = jsr_gripenberg(tuple, {.tol = opts.tol, .budget = opts.budget, .kind = opts.kind});
  const double lower = out.bracket.lower;
  const double upper = out.bracket.upper;
  for_each_necklace(Digraph::complete(n), tuple.span(), n, NecklaceMode::DistinctLetters, std::nullopt,
                    [&](const Word& w, const Matrix& prod) {
                      ++out.checked;
                      const double v = root(spectral_radius(prod), w.size());
                      if (v >= lower - opts.tol && v >= upper - opts.tol) {
                        out.witness = w;
                        out.value = v;
                        return false;
                      }
                      return true;
                    });
  return out;
}

std::optional<OrthogonalCertificate> orthogonal_similarity(const MatrixTuple& tuple, double scale,
                                                           const OrthogonalOptions& opts) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(Errc::InvalidInput, "scale must be positive");
  std::vector<CongruenceConstraint> constraints;
  std::vector<std::uint8_t> skipped(tuple.size(), 0);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (is_singular(tuple[i])) {
      if (!opts.skip_singular) return std::nullopt;
      skipped[i] = 1;
      continue;
    }
    constraints.push_back({tuple[i], scale * scale});
  }
  const auto q = solve_spd_system(constraints, tuple.dim(), opts.solver);
  if (!q) return std::nullopt;

  OrthogonalCertificate cert;
  cert.g = spd_sqrt(*q);
  cert.scale = scale;
  const Matrix g_inv = cert.g.inverse();
  const Matrix eye = Matrix::Identity(tuple.dim(), tuple.dim());
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (skipped[i]) {
      cert.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const Matrix b = cert.g * tuple[i] * g_inv / scale;
    const double r = induced_norm(b.transpose() * b - eye, NormKind::Two);
    if (!(r <= opts.residual_tol)) {
      throw Error(Errc::NumericalFailure, "similarity residual " + std::to_string(r) + " for matrix " +
                                              std::to_string(i + 1) + " exceeds tolerance");
    }
    cert.residuals.push_back(r);
  }
  return cert;
}

IrreducibilityVerdict semigroup_irreducibility(const MatrixTuple& tuple, const MarkovChain& chain, Letter s,
                                               std::size_t max_len, std::size_t cap) {
  if (tuple.size() != chain.size()) throw Error(Errc::InvalidInput, "tuple and chain sizes differ");
  if (s >= chain.size()) throw Error(Errc::IndexOutOfRange, "state " + std::to_string(s + 1));
  if (max_len == 0) throw Error(Errc::InvalidInput, "max_len must be at least 1");
  const Eigen::Index d = tuple.dim();
  const Eigen::Index full = d * d;

  // Products spanning the same linear space as every closed-walk product;
  // invariant subspaces of a set and of its span coincide.
  std::vector<Matrix> gens;
  std::vector<Vector> basis;
  std::size_t walks = 0;
  const Digraph& graph = chain.graph();
  for (std::size_t len = 1; len <= max_len && static_cast<Eigen::Index>(gens.size()) < full; ++len) {
    for_each_word(graph, tuple.span(), len, s, [&](const Word& w, const Matrix& prod) {
      if (!graph.edge(w.back(), s)) return true;
      if (++walks > cap) throw Error(Errc::BudgetExceeded, "closed walks exceed the cap " + std::to_string(cap));
      Vector v = Eigen::Map<const Vector>(prod.data(), full);
      const double scale = v.norm();
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= b.dot(v) * b;
      if (v.norm() > 1e-9 * std::max(1.0, scale)) {
        basis.push_back(v.normalized());
        gens.push_back(prod);
      }
      return static_cast<Eigen::Index>(gens.size()) < full;
    });
  }

  if (gens.empty()) {
    IrreducibilityVerdict v;
    if (d == 1) {
      v.status = IrreducibilityStatus::Irreducible;
    } else {
      v.status = IrreducibilityStatus::Reducible;
      v.subspace = Matrix::Identity(d, 1);
    }
    return v;
  }
  return irreducibility_check(gens);
}

bool AnalysisReport::budget_exhausted() const {
  if (rho_d && rho_d->budget_exhausted) return true;
  if (rho_p && rho_p->budget_exhausted) return true;
  return std::any_of(errors.begin(), errors.end(),
                     [](const SectionError& e) { return e.code == Errc::BudgetExceeded; });
}

AnalysisReport gap_report(const MatrixTuple& tuple, const std::optional<MarkovChain>& chain,
                          const ReportConfig& config) {
  AnalysisReport r;
  auto section = [&](const char* name, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      r.errors.push_back({name, e.code(), e.what()});
    } catch (const std::exception& e) {
      r.errors.push_back({name, Errc::NumericalFailure, e.what()});
    }
  };

  section("rho_d_bruteforce", [&] {
    r.rho_d_bruteforce = jsr_bounds_bruteforce(tuple, config.horizon, config.kind, config.exec);
  });
  section("rho_d", [&] {
    r.rho_d = jsr_gripenberg(tuple, {.tol = config.tol, .budget = config.budget, .kind = config.kind});
  });
  r.trivial = r.rho_d && r.rho_d->upper <= config.tol;

  if (chain) {
    const ExpectationOptions eo{.kind = config.kind, .cap = kEnumerationCap, .exec = config.exec};
    section("rho_p", [&] { r.rho_p = prob_jsr_upper(tuple, *chain, config.horizon, eo); });
    section("mc", [&] {
      const std::size_t n = config.mc_horizon ? config.mc_horizon : config.horizon;
      r.mc = mc_estimate(tuple, *chain, n, config.mc_samples, config.seed, config.kind, config.exec);
    });
    if (r.rho_d) {
      section("cycles", [&] {
        CycleCheckOptions co;
        co.max_len = config.max_cycle_len;
        co.tol = config.tol;
        co.budget = config.budget;
        co.kind = config.kind;
        co.exec = config.exec;
        r.cycles = check_cycle_condition(tuple, *chain, *r.rho_d, co);
      });
    }
  }
  section("distinct_cycle", [&] {
    r.distinct_cycle = check_distinct_cycle(tuple, {.tol = config.tol, .budget = config.budget, .kind = config.kind});
  });
  if (r.rho_d && r.rho_d->lower > config.tol) {
    section("orthogonality", [&] { r.orthogonality = orthogonal_similarity(tuple, r.rho_d->lower); });
  }
  section("finiteness", [&] {
    r.finiteness = finiteness_search(tuple, {.max_word_len = config.max_word_len, .tol = config.tol,
                                             .budget = config.budget});
  });

  if (chain && r.rho_d && !r.trivial) {
    auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
    double hi = 1.0;
    if (r.rho_p && r.rho_d->lower > 0.0) hi = clamp01(r.rho_p->upper / r.rho_d->lower);
    double lo = r.mc ? clamp01(r.mc->mean / r.rho_d->upper) : 0.0;
    r.ratio = std::make_pair(std::min(lo, hi), hi);
  }
  return r;
}

}  // namespace jsrlab
