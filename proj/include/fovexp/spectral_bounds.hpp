#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "fovexp/linalg.hpp"
#include "fovexp/region.hpp"

namespace fovexp {

/// The triple (tau, M, K) defining A = tau * M^{-1} * K.
///
/// Construction validates tau > 0, matching square sizes, symmetry of M to
/// 1e-12 relative, and positive definiteness of M (sparse Cholesky).
class Pencil {
public:
  Pencil(double tau, SparseMatrixd mass, SparseMatrixd stiffness);

  double tau() const noexcept { return tau_; }
  const SparseMatrixd& mass() const noexcept { return mass_; }
  const SparseMatrixd& stiffness() const noexcept { return stiffness_; }
  Index size() const noexcept { return mass_.rows(); }

  Pencil with_tau(double tau) const;

private:
  double tau_;
  SparseMatrixd mass_;
  SparseMatrixd stiffness_;
};

/// K = D + S with D symmetric and S skew-symmetric; C = S / i is Hermitian.
struct SymSkewSplit {
  SparseMatrixd sym;
  SparseMatrixd skew;
};

SymSkewSplit split(const SparseMatrixd& k);

struct EigenSolveOptions {
  double rel_resid_tol = 1e-3;
  Index dense_cutoff = 3000;  ///< n <= cutoff uses a full dense eigensolve
  int max_iterations = 0;     ///< 0 means 5 * n
  std::uint64_t seed = 0;
};

/// Residual assigned to extremes from the dense path; it also sets the
/// rectangle inflation on that path.
inline constexpr double kDenseResidualTol = 1e-10;

struct ExtremeEig {
  double value = 0.0;
  double residual = 0.0;  ///< relative residual of the returned pair
  bool dense = false;
  int iterations = 0;
};

struct PencilExtremes {
  ExtremeEig min;
  ExtremeEig max;
};

/// Extreme eigenvalues of the symmetric pencil B x = lambda M x.
PencilExtremes extreme_eigs_sym_pencil(const SparseMatrixd& b, const SparseMatrixd& m,
                                       const EigenSolveOptions& opts = {});

enum class Extreme { Min, Max };
ExtremeEig extreme_eigs_sym_pencil(const SparseMatrixd& b, const SparseMatrixd& m, Extreme which,
                                   const EigenSolveOptions& opts = {});

/// Largest eigenvalue of the Hermitian pencil (S / i, M). Its spectrum is
/// symmetric about zero, so the smallest one is the negation.
///
/// The iterative path runs Lanczos on the M-self-adjoint operator
/// M^{-1} S^T M^{-1} S, whose eigenvalues are the squares; the reported
/// residual refers to that squared pencil.
ExtremeEig extreme_eig_skew_pencil(const SparseMatrixd& s, const SparseMatrixd& m,
                                   const EigenSolveOptions& opts = {});

BoundingRectangle bounding_rectangle(const Pencil& p, const EigenSolveOptions& opts = {});

/// Rectangle enclosing W(A) for an explicitly formed dense A, from the
/// Hermitian and skew-Hermitian parts of A itself.
BoundingRectangle numerical_range_rectangle(const MatrixXd& a, double rel_tol = kDenseResidualTol);

struct CondEstimate {
  double kappa_tilde = 1.0;
  double delta = 0.0;
  double kappa_safe = 1.0;
};

/// kappa(M) from the extreme eigenvalues of M. delta defaults to 0 on the
/// dense path and 0.05 on the iterative one.
CondEstimate cond_estimate(const SparseMatrixd& m, std::optional<double> delta = std::nullopt,
                           const EigenSolveOptions& opts = {});

inline bool is_lhp_certified(const BoundingRectangle& r) noexcept { return r.region.re_max <= 0.0; }

/// tau * M^{-1} * K, formed densely.
MatrixXd dense_operator(const Pencil& p);
/// L^{-1} (tau K) L^{-T} with M = L L^T: unitarily similar to M^{1/2} A M^{-1/2}.
MatrixXd transformed_operator(const Pencil& p);

/// Lanczos in the M-inner product for the pencil (B, M). `apply_b` must be
/// symmetric, `solve_m` applies M^{-1}. Exposed for tests.
using LinearMap = std::function<VectorXd(const VectorXd&)>;
PencilExtremes lanczos_extremes(Index n, const LinearMap& apply_b, const LinearMap& apply_m,
                                const LinearMap& solve_m, bool need_min, bool need_max,
                                const EigenSolveOptions& opts);

}  // namespace fovexp
