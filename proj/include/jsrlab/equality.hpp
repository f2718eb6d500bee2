#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jsrlab/higher_order.hpp"
#include "jsrlab/jsr.hpp"
#include "jsrlab/markov.hpp"
#include "jsrlab/prob.hpp"

namespace jsrlab {

enum class VerdictStatus { ConsistentUpTo, Violated, Trivial };

std::string_view to_string(VerdictStatus status) noexcept;

/// Outcome of the cycle test. Always relative to `bracket` and `max_len`.
struct EqualityVerdict {
  VerdictStatus status = VerdictStatus::ConsistentUpTo;
  /// The violating cycle (Lyndon representative) when Violated.
  std::optional<CycleRecord> cycle;
  /// rho(A(cycle))^(1/k) and its ratio to bracket.lower when Violated.
  double value = 0.0;
  double ratio = 0.0;
  JsrBracket bracket;
  double tol = 0.0;
  std::size_t max_len = 0;
  /// Lyndon (nu, P)-cycles examined, in enumeration order.
  std::size_t cycles_checked = 0;
};

struct CycleCheckOptions {
  std::size_t max_len = 12;
  double tol = 1e-9;
  /// Gripenberg budget used for the reference bracket.
  std::size_t budget = 200'000;
  NormKind kind = NormKind::Two;
  Exec exec = Exec::Parallel;
};

/// Every (nu, P)-cycle of length <= max_len must satisfy
/// rho(A(cycle))^(1/k) in [lower - tol, upper + tol]. Only Lyndon closed walks
/// are evaluated: rotations and powers share the normalized spectral radius.
/// The first violation in lexicographic order is reported.
EqualityVerdict check_cycle_condition(const MatrixTuple& tuple, const MarkovChain& chain,
                                      const CycleCheckOptions& opts = {});
/// Same test against a bracket computed elsewhere.
EqualityVerdict check_cycle_condition(const MatrixTuple& tuple, const MarkovChain& chain,
                                      const JsrBracket& bracket, const CycleCheckOptions& opts = {});

struct DistinctCycleOptions {
  double tol = 1e-9;
  std::size_t budget = 200'000;
  NormKind kind = NormKind::Two;
  /// Largest N for which the search runs; BudgetExceeded beyond.
  std::size_t max_letters = 10;
};

struct DistinctCycleResult {
  /// Lexicographically least necklace of pairwise-distinct letters reaching
  /// both ends of the bracket within tol; empty when there is none.
  std::optional<Word> witness;
  double value = 0.0;
  JsrBracket bracket;
  std::size_t checked = 0;
};

DistinctCycleResult check_distinct_cycle(const MatrixTuple& tuple, const DistinctCycleOptions& opts = {});

/// G with every scale^-1 G A_i G^-1 orthogonal.
struct OrthogonalCertificate {
  Matrix g;
  double scale = 1.0;
  /// ||B_i^T B_i - I||_2 with B_i = scale^-1 G A_i G^-1; NaN for skipped
  /// singular generators.
  std::vector<double> residuals;
};

struct OrthogonalOptions {
  /// Leave singular generators out of the constraint set instead of
  /// answering nullopt.
  bool skip_singular = false;
  double residual_tol = 1e-8;
  SpdSolveOptions solver;
};

/// Solves A_i^T Q A_i = scale^2 Q for a positive definite Q and returns
/// G = Q^(1/2). Throws NumericalFailure if a solution fails the residual check.
std::optional<OrthogonalCertificate> orthogonal_similarity(const MatrixTuple& tuple, double scale,
                                                           const OrthogonalOptions& opts = {});

/// Common invariant subspace search on the products of closed walks through
/// state s of length <= max_len (the semigroup generated by P-cycles at s).
IrreducibilityVerdict semigroup_irreducibility(const MatrixTuple& tuple, const MarkovChain& chain, Letter s,
                                               std::size_t max_len, std::size_t cap = kEnumerationCap);

struct ReportConfig {
  std::size_t horizon = 6;
  NormKind kind = NormKind::Two;
  double tol = 1e-9;
  std::size_t budget = 200'000;
  std::size_t mc_samples = 1000;
  /// Horizon of the Monte Carlo estimate; 0 means `horizon`.
  std::size_t mc_horizon = 0;
  std::uint64_t seed = 0;
  std::size_t max_cycle_len = 12;
  std::size_t max_word_len = 8;
  Exec exec = Exec::Parallel;
};

struct SectionError {
  std::string section;
  Errc code;
  std::string message;
};

struct AnalysisReport {
  std::optional<JsrBracket> rho_d_bruteforce;
  std::optional<JsrBracket> rho_d;
  std::optional<ProbUpper> rho_p;
  std::optional<McEstimate> mc;
  std::optional<EqualityVerdict> cycles;
  std::optional<DistinctCycleResult> distinct_cycle;
  /// Set when the orthogonality test ran; the inner optional is the result.
  std::optional<std::optional<OrthogonalCertificate>> orthogonality;
  std::optional<std::optional<FinitenessWitness>> finiteness;
  /// [lo, hi] bracket on rho_p / rho_d; lo is an MC estimate, not a bound.
  std::optional<std::pair<double, double>> ratio;
  bool trivial = false;
  std::vector<SectionError> errors;

  bool budget_exhausted() const;
};

/// Runs every analysis that the inputs allow. Failures are recorded per
/// section and never abort the report.
AnalysisReport gap_report(const MatrixTuple& tuple, const std::optional<MarkovChain>& chain,
                          const ReportConfig& config = {});

}  // namespace jsrlab
