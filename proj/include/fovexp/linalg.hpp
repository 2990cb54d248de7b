#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "fovexp/error.hpp"

namespace fovexp {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;

/// Compressed-row storage; every stored operator (M, K, D, S) uses this.
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, int>;
using SparseMatrixd = SparseMatrix<double>;
using SparseMatrixcd = SparseMatrix<Complex>;

/// Relative pivot threshold below which a factorization is declared singular.
inline constexpr double kPivotThreshold = 1e-14;

/// LU factorization with partial pivoting, dense or sparse.
///
/// The dense branch exposes P, L, U so the reconstruction P*A = L*U can be
/// checked directly; the sparse branch keeps Eigen's supernodal factor behind
/// a shared pointer (the factor is immutable once built).
template <typename Scalar>
class LuFactor {
public:
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Sparse = SparseMatrix<Scalar>;

  static LuFactor factor(const Dense& a);
  static LuFactor factor(const Sparse& a);

  Vector solve(const Vector& b) const;

  Index size() const noexcept { return n_; }
  bool is_sparse() const noexcept {
    return std::holds_alternative<SparseFactor>(factor_);
  }

  // Dense branch only.
  Eigen::PermutationMatrix<Eigen::Dynamic> permutation() const;
  Dense lower() const;
  Dense upper() const;

private:
  using DenseFactor = Eigen::PartialPivLU<Dense>;
  using SparseSolver =
      Eigen::SparseLU<Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>, Eigen::COLAMDOrdering<int>>;
  using SparseFactor = std::shared_ptr<const SparseSolver>;

  LuFactor() = default;

  const DenseFactor& dense() const;

  Index n_ = 0;
  std::variant<DenseFactor, SparseFactor> factor_;
};

/// Dense Cholesky factor of a real SPD matrix: M = L * L^T.
class CholeskyFactor {
public:
  explicit CholeskyFactor(const MatrixXd& m);

  const MatrixXd& lower() const noexcept { return l_; }
  Index size() const noexcept { return l_.rows(); }

  VectorXd solve(const VectorXd& b) const;
  /// L^{-1} * X
  MatrixXd solve_lower(const MatrixXd& x) const;
  /// L^{-1} * B * L^{-T}, the congruence that realizes M^{-1/2}-like access.
  template <typename Derived>
  auto congruence(const Eigen::MatrixBase<Derived>& b) const {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Mat lc = l_.template cast<Scalar>();
    Mat tmp = lc.template triangularView<Eigen::Lower>().solve(b.eval());
    Mat out = lc.template triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
    return out;
  }

private:
  MatrixXd l_;
};

CholeskyFactor cholesky(const MatrixXd& m);

/// Sparse Cholesky with fill-reducing ordering, used by the iterative
/// eigenvalue path to apply M^{-1}.
class SparseCholesky {
public:
  explicit SparseCholesky(const SparseMatrixd& m);
  VectorXd solve(const VectorXd& b) const;
  Index size() const noexcept { return n_; }

private:
  using Solver = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>>;
  Index n_ = 0;
  std::shared_ptr<const Solver> solver_;
};

/// Largest relative asymmetry max|A - A^T| / max|A| (0 for the zero matrix).
double relative_asymmetry(const MatrixXd& a);
double relative_asymmetry(const SparseMatrixd& a);

struct SymmetricEigen {
  VectorXd values;   // ascending
  MatrixXd vectors;  // orthonormal columns
};

SymmetricEigen dense_sym_eig(const MatrixXd& s, bool compute_vectors = true);

/// Power iteration on A^T A. Returns ||A x_k||_2 for the final unit iterate,
/// which never exceeds ||A||_2.
template <typename MatrixType>
double spectral_norm_estimate(const MatrixType& a, int iters, std::uint64_t seed = 0) {
  require(iters >= 1, ErrorKind::InvalidArgument, "spectral_norm_estimate needs iters >= 1");
  const Index n = a.cols();
  if (n == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = normal(rng);
  x.normalize();
  double estimate = 0.0;
  for (int k = 0; k < iters; ++k) {
    VectorXd ax = a * x;
    estimate = std::max(estimate, ax.norm());
    VectorXd y = a.transpose() * ax;
    const double ny = y.norm();
    if (ny == 0.0) break;
    x = y / ny;
  }
  VectorXd ax = a * x;
  return std::max(estimate, ax.norm());
}

template <typename MatrixType, typename VectorType>
auto matvec(const MatrixType& a, const VectorType& x) {
  require(a.cols() == x.size(), ErrorKind::DimensionMismatch, "matvec: size mismatch");
  return (a * x).eval();
}

template <typename VectorType>
double norm2(const VectorType& x) {
  return x.norm();
}

extern template class LuFactor<double>;
extern template class LuFactor<Complex>;

}  // namespace fovexp
