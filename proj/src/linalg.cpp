#include "fovexp/linalg.hpp"

#include <cmath>

namespace fovexp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RepeatedRoots: return "RepeatedRoots";
    case ErrorKind::PoleInsideRegion: return "PoleInsideRegion";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::ScalingExhausted: return "ScalingExhausted";
    case ErrorKind::DegreeExhausted: return "DegreeExhausted";
    case ErrorKind::RefitFailed: return "RefitFailed";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::DegenerateMesh: return "DegenerateMesh";
    case ErrorKind::ResourceGuard: return "ResourceGuard";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename Scalar>
double max_abs(const SparseMatrix<Scalar>& a) {
  double m = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (typename SparseMatrix<Scalar>::InnerIterator it(a, k); it; ++it) {
      require(std::isfinite(std::abs(it.value())), ErrorKind::InvalidArgument,
              "lu_factor: non-finite entry");
      m = std::max(m, std::abs(it.value()));
    }
  return m;
}

}  // namespace

template <typename Scalar>
LuFactor<Scalar> LuFactor<Scalar>::factor(const Dense& a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "lu_factor: matrix not square");
  require(all_finite(a), ErrorKind::InvalidArgument, "lu_factor: non-finite entry");
  LuFactor f;
  f.n_ = a.rows();
  if (f.n_ == 0) {
    f.factor_ = DenseFactor();
    return f;
  }
  DenseFactor lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  require(scale > 0.0 && min_pivot >= kPivotThreshold * scale, ErrorKind::SingularMatrix,
          "lu_factor: pivot below relative threshold");
  f.factor_ = std::move(lu);
  return f;
}

template <typename Scalar>
LuFactor<Scalar> LuFactor<Scalar>::factor(const Sparse& a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "lu_factor: matrix not square");
  const double scale = max_abs(a);
  LuFactor f;
  f.n_ = a.rows();
  auto solver = std::make_shared<SparseSolver>();
  Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int> col = a;
  col.makeCompressed();
  solver->analyzePattern(col);
  solver->factorize(col);
  require(scale > 0.0 && solver->info() == Eigen::Success, ErrorKind::SingularMatrix,
          "lu_factor: sparse factorization hit a zero pivot");
  // SparseLU does not expose U's diagonal; an exactly singular pivot shows up
  // in info() and near-singular shifts surface as non-finite solves.
  f.factor_ = SparseFactor(std::move(solver));
  return f;
}

template <typename Scalar>
auto LuFactor<Scalar>::dense() const -> const DenseFactor& {
  const auto* d = std::get_if<DenseFactor>(&factor_);
  require(d != nullptr, ErrorKind::InvalidArgument, "LuFactor: dense accessor on sparse factor");
  return *d;
}

template <typename Scalar>
auto LuFactor<Scalar>::solve(const Vector& b) const -> Vector {
  require(b.size() == n_, ErrorKind::DimensionMismatch, "LuFactor::solve: size mismatch");
  if (n_ == 0) return Vector();
  Vector x;
  if (const auto* s = std::get_if<SparseFactor>(&factor_)) {
    x = (*s)->solve(b);
  } else {
    x = std::get<DenseFactor>(factor_).solve(b);
  }
  require(x.allFinite(), ErrorKind::SingularMatrix, "LuFactor::solve: non-finite solution");
  return x;
}

template <typename Scalar>
Eigen::PermutationMatrix<Eigen::Dynamic> LuFactor<Scalar>::permutation() const {
  return dense().permutationP();
}

template <typename Scalar>
auto LuFactor<Scalar>::lower() const -> Dense {
  Dense l = dense().matrixLU().template triangularView<Eigen::UnitLower>();
  return l;
}

template <typename Scalar>
auto LuFactor<Scalar>::upper() const -> Dense {
  Dense u = dense().matrixLU().template triangularView<Eigen::Upper>();
  return u;
}

template class LuFactor<double>;
template class LuFactor<Complex>;

double relative_asymmetry(const MatrixXd& a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "relative_asymmetry: not square");
  const double scale = a.cwiseAbs().maxCoeff();
  if (a.size() == 0 || scale == 0.0) return 0.0;
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

double relative_asymmetry(const SparseMatrixd& a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "relative_asymmetry: not square");
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  SparseMatrixd t = a.transpose();
  SparseMatrixd diff = a - t;
  double m = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrixd::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m / scale;
}

CholeskyFactor::CholeskyFactor(const MatrixXd& m) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "cholesky: matrix not square");
  require(m.allFinite(), ErrorKind::InvalidArgument, "cholesky: non-finite entry");
  require(relative_asymmetry(m) <= 1e-12, ErrorKind::NotSymmetric, "cholesky: matrix not symmetric");
  Eigen::LLT<MatrixXd> llt(m);
  require(llt.info() == Eigen::Success, ErrorKind::NotSPD, "cholesky: nonpositive pivot");
  l_ = llt.matrixL();
  require(l_.diagonal().minCoeff() > 0.0, ErrorKind::NotSPD, "cholesky: nonpositive pivot");
}

VectorXd CholeskyFactor::solve(const VectorXd& b) const {
  require(b.size() == size(), ErrorKind::DimensionMismatch, "cholesky solve: size mismatch");
  VectorXd y = l_.triangularView<Eigen::Lower>().solve(b);
  return l_.transpose().triangularView<Eigen::Upper>().solve(y);
}

MatrixXd CholeskyFactor::solve_lower(const MatrixXd& x) const {
  require(x.rows() == size(), ErrorKind::DimensionMismatch, "cholesky solve: size mismatch");
  return l_.triangularView<Eigen::Lower>().solve(x);
}

CholeskyFactor cholesky(const MatrixXd& m) { return CholeskyFactor(m); }

SparseCholesky::SparseCholesky(const SparseMatrixd& m) : n_(m.rows()) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "sparse cholesky: not square");
  require(relative_asymmetry(m) <= 1e-12, ErrorKind::NotSymmetric, "sparse cholesky: not symmetric");
  auto solver = std::make_shared<Solver>();
  Eigen::SparseMatrix<double> col = m;
  solver->compute(col);
  require(solver->info() == Eigen::Success, ErrorKind::NotSPD, "sparse cholesky: nonpositive pivot");
  solver_ = std::move(solver);
}

VectorXd SparseCholesky::solve(const VectorXd& b) const {
  require(b.size() == n_, ErrorKind::DimensionMismatch, "sparse cholesky solve: size mismatch");
  return solver_->solve(b);
}

SymmetricEigen dense_sym_eig(const MatrixXd& s, bool compute_vectors) {
  require(s.rows() == s.cols(), ErrorKind::DimensionMismatch, "dense_sym_eig: not square");
  require(relative_asymmetry(s) <= 1e-10, ErrorKind::NotSymmetric, "dense_sym_eig: not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(
      s, compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::NoConvergence, "dense_sym_eig: QR iteration failed");
  SymmetricEigen out;
  out.values = es.eigenvalues();
  if (compute_vectors) out.vectors = es.eigenvectors();
  return out;
}

}  // namespace fovexp
