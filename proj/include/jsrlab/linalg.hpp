#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "jsrlab/error.hpp"

namespace jsrlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Hard cap on the ambient dimension d.
inline constexpr Eigen::Index kMaxDim = 64;

enum class NormKind { One, Two, Inf };

std::string_view to_string(NormKind kind) noexcept;
/// Accepts "one", "two", "inf" (case sensitive). Throws InvalidInput.
NormKind parse_norm_kind(std::string_view name);

/// Throws NonFinite / DimensionTooLarge / InvalidInput (non-square, empty).
void validate_matrix(const Matrix& m);

/// Largest eigenvalue modulus.
double spectral_radius(const Matrix& m);

/// Operator norm induced by the l1, l2 or l-infinity vector norm.
double induced_norm(const Matrix& m, NormKind kind = NormKind::Two);

/// Vector norm matching the induced matrix norm of the same kind.
double vector_norm(const Vector& x, NormKind kind = NormKind::Two);

/// Homogeneous condition  A^T Q A = factor * Q  on an unknown symmetric Q.
struct CongruenceConstraint {
  Matrix a;
  double factor = 1.0;
};

struct SpdSolveOptions {
  /// Singular values below rank_tol * sigma_max span the nullspace.
  double rank_tol = 1e-8;
  /// A singular value within [rank_tol, ambiguity_ratio * rank_tol] (relative)
  /// leaves the nullspace dimension undecided and raises IllConditioned.
  double ambiguity_ratio = 100.0;
  double residual_tol = 1e-8;
  int max_ascent_iterations = 2000;
};

/// Finds a symmetric positive definite Q (normalized to ||Q||_2 = 1) with
/// A^T Q A = c Q for every constraint, or nullopt when the solution space
/// contains no positive definite element.
std::optional<Matrix> solve_spd_system(std::span<const CongruenceConstraint> constraints,
                                       Eigen::Index dim, const SpdSolveOptions& opts = {});

/// Symmetric square root G (G G = q) of a symmetric positive definite matrix.
Matrix spd_sqrt(const Matrix& q);

/// Real invariant subspaces suggested by the eigenvectors of m: one column for
/// every real eigenvector, two columns (Re v, Im v) for every complex pair.
std::vector<Matrix> eigen_candidate_subspaces(const Matrix& m);

/// Orthonormal basis of the smallest subspace containing span(seed) that is
/// invariant under every matrix in gens.
Matrix invariant_closure(std::span<const Matrix> gens, const Matrix& seed, double tol = 1e-9);

/// Largest value of ||A q - proj(A q)|| over the (orthonormal) basis columns q
/// and the matrices A, scaled by max(1, ||A||).
double invariance_defect(std::span<const Matrix> gens, const Matrix& basis);

}  // namespace jsrlab
