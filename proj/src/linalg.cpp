#include "jsrlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jsrlab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DegenerateDistribution: return "DegenerateDistribution";
    case Errc::StateExplosion: return "StateExplosion";
  }
  return "Unknown";
}

std::string_view to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::One: return "one";
    case NormKind::Two: return "two";
    case NormKind::Inf: return "inf";
  }
  return "two";
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "one") return NormKind::One;
  if (name == "two") return NormKind::Two;
  if (name == "inf") return NormKind::Inf;
  throw Error(Errc::InvalidInput, "unknown norm '" + std::string(name) + "' (expected one|two|inf)");
}

void validate_matrix(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(Errc::InvalidInput, "matrix must be square and non-empty, got " +
                                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (m.rows() > kMaxDim) {
    throw Error(Errc::DimensionTooLarge,
                "dimension " + std::to_string(m.rows()) + " exceeds " + std::to_string(kMaxDim));
  }
  if (!m.allFinite()) throw Error(Errc::NonFinite, "matrix has NaN or infinite entries");
}

double spectral_radius(const Matrix& m) {
  validate_matrix(m);
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NumericalFailure, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double induced_norm(const Matrix& m, NormKind kind) {
  validate_matrix(m);
  switch (kind) {
    case NormKind::One: return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::Inf: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::Two: {
      if (m.rows() == 1) return std::abs(m(0, 0));
      const Matrix gram = m.transpose() * m;
      Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
      return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
    }
  }
  return 0.0;
}

double vector_norm(const Vector& x, NormKind kind) {
  switch (kind) {
    case NormKind::One: return x.lpNorm<1>();
    case NormKind::Two: return x.norm();
    case NormKind::Inf: return x.lpNorm<Eigen::Infinity>();
  }
  return x.norm();
}

namespace {

// Orthonormal coordinates on symmetric d x d matrices: e_i e_i^T and
// (e_i e_j^T + e_j e_i^T)/sqrt(2) for i < j.
struct SymCoords {
  Eigen::Index dim;
  Eigen::Index size() const { return dim * (dim + 1) / 2; }

  Vector to_coords(const Matrix& s) const {
    Vector v(size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      v(k++) = s(i, i);
      for (Eigen::Index j = i + 1; j < dim; ++j) v(k++) = std::sqrt(2.0) * 0.5 * (s(i, j) + s(j, i));
    }
    return v;
  }

  Matrix from_coords(const Vector& v) const {
    Matrix s(dim, dim);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      s(i, i) = v(k++);
      for (Eigen::Index j = i + 1; j < dim; ++j) {
        s(i, j) = s(j, i) = v(k++) / std::sqrt(2.0);
      }
    }
    return s;
  }
};

struct MinEigen {
  double value;
  Vector vector;
};

MinEigen min_eigen(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

// Maximizes lambda_min(sum_k x_k S_k) over the hyperplane trace = 1 with a
// projected supergradient method. Returns the best combination seen.
Matrix ascend_min_eigenvalue(const std::vector<Matrix>& basis, const Vector& traces,
                             double pd_margin, int max_iterations) {
  const double t2 = traces.squaredNorm();
  Vector x = traces / t2;
  auto combine = [&](const Vector& coeffs) {
    Matrix s = Matrix::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t k = 0; k < basis.size(); ++k) s += coeffs(static_cast<Eigen::Index>(k)) * basis[k];
    return s;
  };

  Matrix best = combine(x);
  MinEigen best_eig = min_eigen(best);
  const double step0 = x.norm();
  Vector current = x;
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix s = combine(current);
    const MinEigen eig = min_eigen(s);
    const double scale = s.norm();
    if (eig.value > best_eig.value) {
      best = s;
      best_eig = eig;
    }
    if (best_eig.value > pd_margin * std::max(scale, best.norm())) break;
    Vector g(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      g(static_cast<Eigen::Index>(k)) = eig.vector.dot(basis[k] * eig.vector);
    }
    g -= (g.dot(traces) / t2) * traces;
    const double gn = g.norm();
    if (gn == 0.0) break;
    current += (step0 / std::sqrt(static_cast<double>(it) + 1.0)) * g / gn;
  }
  return best;
}

}  // namespace

std::optional<Matrix> solve_spd_system(std::span<const CongruenceConstraint> constraints,
                                       Eigen::Index dim, const SpdSolveOptions& opts) {
  if (dim < 1 || dim > kMaxDim) throw Error(Errc::InvalidInput, "bad dimension for SPD solve");
  const SymCoords coords{dim};
  const Eigen::Index s = coords.size();

  if (constraints.empty()) return Matrix::Identity(dim, dim);

  Matrix lin(static_cast<Eigen::Index>(constraints.size()) * s, s);
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto& con = constraints[c];
    validate_matrix(con.a);
    if (con.a.rows() != dim) throw Error(Errc::InvalidInput, "constraint dimension mismatch");
    const double a_norm = induced_norm(con.a, NormKind::Two);
    const double weight = 1.0 / std::max(a_norm * a_norm + std::abs(con.factor), 1e-300);
    for (Eigen::Index k = 0; k < s; ++k) {
      Vector unit = Vector::Zero(s);
      unit(k) = 1.0;
      const Matrix e = coords.from_coords(unit);
      const Matrix image = con.a.transpose() * e * con.a - con.factor * e;
      lin.block(static_cast<Eigen::Index>(c) * s, k, s, 1) = weight * coords.to_coords(image);
    }
  }

  Eigen::JacobiSVD<Matrix> svd(lin, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;

  std::vector<Matrix> null_basis;
  for (Eigen::Index k = 0; k < s; ++k) {
    const double value = k < sigma.size() ? sigma(k) : 0.0;
    const double ratio = sigma_max > 0.0 ? value / sigma_max : 0.0;
    if (ratio <= opts.rank_tol) {
      null_basis.push_back(coords.from_coords(svd.matrixV().col(k)));
    } else if (ratio <= opts.rank_tol * opts.ambiguity_ratio) {
      throw Error(Errc::IllConditioned, "nullspace rank is ambiguous (singular value ratio " +
                                            std::to_string(ratio) + ")");
    }
  }
  if (null_basis.empty()) return std::nullopt;

  constexpr double kPdMargin = 1e-10;
  Matrix candidate;
  if (null_basis.size() == 1) {
    candidate = null_basis.front();
    if (candidate.trace() < 0.0) candidate = -candidate;
  } else {
    Vector traces(static_cast<Eigen::Index>(null_basis.size()));
    for (std::size_t k = 0; k < null_basis.size(); ++k) {
      traces(static_cast<Eigen::Index>(k)) = null_basis[k].trace();
    }
    if (traces.norm() <= 1e-12) return std::nullopt;
    candidate = ascend_min_eigenvalue(null_basis, traces, kPdMargin, opts.max_ascent_iterations);
  }
  candidate = 0.5 * (candidate + candidate.transpose());
  const double q_norm = induced_norm(candidate, NormKind::Two);
  if (q_norm == 0.0) return std::nullopt;
  candidate /= q_norm;
  if (min_eigen(candidate).value <= kPdMargin) return std::nullopt;

  for (const auto& con : constraints) {
    const double a_norm = induced_norm(con.a, NormKind::Two);
    const double scale = std::max(1.0, a_norm * a_norm + std::abs(con.factor));
    const Matrix residual = con.a.transpose() * candidate * con.a - con.factor * candidate;
    if (induced_norm(residual, NormKind::Two) > opts.residual_tol * scale) {
      throw Error(Errc::IllConditioned, "SPD candidate fails the congruence residual check");
    }
  }
  return candidate;
}

Matrix spd_sqrt(const Matrix& q) {
  validate_matrix(q);
  const Matrix sym = 0.5 * (q + q.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Vector& lambda = solver.eigenvalues();
  const double top = std::max(std::abs(lambda.maxCoeff()), std::abs(lambda.minCoeff()));
  if (lambda.minCoeff() <= 1e-12 * top || top == 0.0) {
    throw Error(Errc::NotPositiveDefinite, "smallest eigenvalue " + std::to_string(lambda.minCoeff()));
  }
  const Matrix& v = solver.eigenvectors();
  return v * lambda.cwiseSqrt().asDiagonal() * v.transpose();
}

std::vector<Matrix> eigen_candidate_subspaces(const Matrix& m) {
  validate_matrix(m);
  const Eigen::Index d = m.rows();
  std::vector<Matrix> out;
  Eigen::EigenSolver<Matrix> solver(m, true);
  if (solver.info() != Eigen::Success) return out;
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < d; ++k) {
    const std::complex<double> lambda = values(k);
    const double im_tol = 1e-12 * std::max(1.0, std::abs(lambda));
    Vector re = vectors.col(k).real();
    Vector im = vectors.col(k).imag();
    if (std::abs(lambda.imag()) <= im_tol) {
      // A real eigenvalue: the eigenvector can be taken real up to phase.
      Vector v = re.norm() >= im.norm() ? re : im;
      if (v.norm() > 0.0) out.emplace_back(v.normalized());
    } else if (lambda.imag() > 0.0) {
      Matrix pair(d, 2);
      pair.col(0) = re;
      pair.col(1) = im;
      out.push_back(std::move(pair));
    }
  }
  return out;
}

Matrix invariant_closure(std::span<const Matrix> gens, const Matrix& seed, double tol) {
  const Eigen::Index d = seed.rows();
  std::vector<double> gen_norms;
  gen_norms.reserve(gens.size());
  for (const auto& g : gens) gen_norms.push_back(std::max(induced_norm(g, NormKind::Two), 1e-300));

  Matrix basis(d, 0);
  auto try_add = [&](Vector w, double reference) {
    if (basis.cols() == d) return;
    for (int pass = 0; pass < 2; ++pass) w -= basis * (basis.transpose() * w);
    const double r = w.norm();
    if (r > tol * reference) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = w / r;
    }
  };

  for (Eigen::Index c = 0; c < seed.cols(); ++c) {
    const double n = seed.col(c).norm();
    if (n > 0.0) try_add(seed.col(c) / n, 1.0);
  }
  for (Eigen::Index idx = 0; idx < basis.cols() && basis.cols() < d; ++idx) {
    const Vector q = basis.col(idx);
    for (std::size_t g = 0; g < gens.size() && basis.cols() < d; ++g) {
      try_add(gens[g] * q, gen_norms[g]);
    }
  }
  return basis;
}

double invariance_defect(std::span<const Matrix> gens, const Matrix& basis) {
  double worst = 0.0;
  for (const auto& g : gens) {
    const double scale = std::max(1.0, induced_norm(g, NormKind::Two));
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      const Vector w = g * basis.col(c);
      const Vector r = w - basis * (basis.transpose() * w);
      worst = std::max(worst, r.norm() / scale);
    }
  }
  return worst;
}

}  // namespace jsrlab
