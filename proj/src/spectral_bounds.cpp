#include "fovexp/spectral_bounds.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace fovexp {

Pencil::Pencil(double tau, SparseMatrixd mass, SparseMatrixd stiffness)
    : tau_(tau), mass_(std::move(mass)), stiffness_(std::move(stiffness)) {
  require(std::isfinite(tau_) && tau_ > 0.0, ErrorKind::InvalidArgument, "Pencil: tau must be positive");
  require(mass_.rows() == mass_.cols() && stiffness_.rows() == stiffness_.cols() &&
              mass_.rows() == stiffness_.rows(),
          ErrorKind::DimensionMismatch, "Pencil: M and K must be square of equal size");
  require(relative_asymmetry(mass_) <= 1e-12, ErrorKind::NotSymmetric, "Pencil: M is not symmetric");
  if (mass_.rows() > 0) SparseCholesky check(mass_);
  mass_.makeCompressed();
  stiffness_.makeCompressed();
}

Pencil Pencil::with_tau(double tau) const {
  Pencil p = *this;
  require(std::isfinite(tau) && tau > 0.0, ErrorKind::InvalidArgument, "Pencil: tau must be positive");
  p.tau_ = tau;
  return p;
}

SymSkewSplit split(const SparseMatrixd& k) {
  require(k.rows() == k.cols(), ErrorKind::DimensionMismatch, "split: K must be square");
  const SparseMatrixd kt = k.transpose();
  SymSkewSplit out;
  out.sym = (0.5 * (k + kt)).pruned(0.0);
  out.skew = (0.5 * (k - kt)).pruned(0.0);
  out.sym.makeCompressed();
  out.skew.makeCompressed();
  return out;
}

namespace {

// Largest eigenvalue of the Hermitian matrix -i G for real skew G: the
// spectrum is {+-sigma_k(G)}, so this is sqrt(lambda_max(G^T G)).
double skew_spectral_radius(const MatrixXd& g) {
  if (g.size() == 0) return 0.0;
  MatrixXd gtg = g.transpose() * g;
  gtg = 0.5 * (gtg + gtg.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gtg, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::NoConvergence, "skew part: eigensolver failed");
  return std::sqrt(std::max(es.eigenvalues()[g.rows() - 1], 0.0));
}

double max_abs(const SparseMatrixd& a) {
  double m = 0.0;
  for (Index r = 0; r < a.outerSize(); ++r)
    for (SparseMatrixd::InnerIterator it(a, r); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

bool use_dense(Index n, const EigenSolveOptions& opts) { return n <= opts.dense_cutoff; }

VectorXd dense_transformed_eigenvalues(const SparseMatrixd& b, const SparseMatrixd& m) {
  const CholeskyFactor l{MatrixXd(m)};
  MatrixXd g = l.congruence(MatrixXd(b));
  g = 0.5 * (g + g.transpose()).eval();
  return dense_sym_eig(g, false).values;
}

struct RitzPair {
  double value;
  double residual;
};

}  // namespace

PencilExtremes lanczos_extremes(Index n, const LinearMap& apply_b, const LinearMap& apply_m,
                                const LinearMap& solve_m, bool need_min, bool need_max,
                                const EigenSolveOptions& opts) {
  require(n >= 1, ErrorKind::InvalidArgument, "lanczos: empty operator");
  require(opts.rel_resid_tol > 0.0 && opts.rel_resid_tol < 1.0, ErrorKind::InvalidArgument,
          "lanczos: rel_resid_tol must lie in (0, 1)");
  const Index budget = opts.max_iterations > 0 ? opts.max_iterations : 5 * n;
  const Index k_max = std::min<Index>(budget, n);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
  };

  std::vector<VectorXd> q;
  std::vector<VectorXd> mq;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples q[j] and q[j+1]

  auto orthogonalize = [&](VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < q.size(); ++i) w -= mq[i].dot(w) * q[i];
  };
  auto push_basis = [&](VectorXd w, VectorXd mw, double nrm) {
    q.push_back(w / nrm);
    mq.push_back(mw / nrm);
  };

  {
    VectorXd v = random_vector();
    VectorXd mv = apply_m(v);
    push_basis(v, mv, std::sqrt(v.dot(mv)));
  }

  PencilExtremes result;
  Index next_check = 5;
  auto ritz = [&]() -> bool {
    const Index m = static_cast<Index>(alpha.size());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    VectorXd diag = Eigen::Map<const VectorXd>(alpha.data(), m);
    VectorXd sub = m > 1 ? VectorXd(Eigen::Map<const VectorXd>(beta.data(), m - 1)) : VectorXd(0);
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    auto pair = [&](Index idx) {
      const double theta = es.eigenvalues()[idx];
      VectorXd x = VectorXd::Zero(n);
      for (Index i = 0; i < m; ++i) x += es.eigenvectors()(i, idx) * q[static_cast<std::size_t>(i)];
      const VectorXd bx = apply_b(x);
      const VectorXd mx = apply_m(x);
      const double denom = std::abs(theta) * mx.norm() + bx.norm();
      const double res = denom > 0.0 ? (bx - theta * mx).norm() / denom : 0.0;
      return RitzPair{theta, res};
    };
    bool ok = true;
    const int iters = static_cast<int>(m);
    if (need_min) {
      const auto p = pair(0);
      result.min = {p.value, p.residual, false, iters};
      ok = ok && p.residual <= opts.rel_resid_tol;
    }
    if (need_max) {
      const auto p = pair(m - 1);
      result.max = {p.value, p.residual, false, iters};
      ok = ok && p.residual <= opts.rel_resid_tol;
    }
    return ok;
  };

  for (Index j = 0; j < k_max; ++j) {
    const VectorXd& qj = q.back();
    const VectorXd bq = apply_b(qj);
    VectorXd w = solve_m(bq);
    const double a = qj.dot(bq);
    alpha.push_back(a);
    w -= a * qj;
    if (j > 0) w -= beta.back() * q[q.size() - 2];
    orthogonalize(w);
    VectorXd mw = apply_m(w);
    double b = std::sqrt(std::max(w.dot(mw), 0.0));

    const Index m = j + 1;
    double scale = 0.0;
    for (double v : alpha) scale = std::max(scale, std::abs(v));
    for (double v : beta) scale = std::max(scale, std::abs(v));
    const bool breakdown = b <= 1e-13 * std::max(scale, std::numeric_limits<double>::min());

    if (m >= next_check || breakdown || m == k_max) {
      if (ritz()) return result;
      next_check = m + std::max<Index>(5, m / 10);
    }
    if (m == k_max) break;
    if (breakdown) {
      // Invariant subspace: continue from a fresh direction orthogonal to it.
      w = random_vector();
      orthogonalize(w);
      mw = apply_m(w);
      const double nw = std::sqrt(std::max(w.dot(mw), 0.0));
      if (nw == 0.0) break;
      beta.push_back(0.0);
      push_basis(w, mw, nw);
      continue;
    }
    beta.push_back(b);
    push_basis(w, mw, b);
  }
  if (ritz()) return result;
  throw Error(ErrorKind::NoConvergence, "lanczos: Ritz residual above tolerance after " +
                                            std::to_string(alpha.size()) + " steps");
}

PencilExtremes extreme_eigs_sym_pencil(const SparseMatrixd& b, const SparseMatrixd& m,
                                       const EigenSolveOptions& opts) {
  require(b.rows() == b.cols() && m.rows() == m.cols() && b.rows() == m.rows(),
          ErrorKind::DimensionMismatch, "extreme_eigs_sym_pencil: size mismatch");
  require(relative_asymmetry(b) <= 1e-12, ErrorKind::NotSymmetric, "extreme_eigs_sym_pencil: B not symmetric");
  const Index n = b.rows();
  require(n >= 1, ErrorKind::InvalidArgument, "extreme_eigs_sym_pencil: empty pencil");
  if (use_dense(n, opts)) {
    const VectorXd ev = dense_transformed_eigenvalues(b, m);
    return {{ev[0], kDenseResidualTol, true, 0}, {ev[n - 1], kDenseResidualTol, true, 0}};
  }
  const SparseCholesky chol(m);
  if (max_abs(b) == 0.0) return {{0.0, 0.0, false, 0}, {0.0, 0.0, false, 0}};
  return lanczos_extremes(
      n, [&](const VectorXd& v) { return VectorXd(b * v); },
      [&](const VectorXd& v) { return VectorXd(m * v); },
      [&](const VectorXd& v) { return chol.solve(v); }, true, true, opts);
}

ExtremeEig extreme_eigs_sym_pencil(const SparseMatrixd& b, const SparseMatrixd& m, Extreme which,
                                   const EigenSolveOptions& opts) {
  const auto both = extreme_eigs_sym_pencil(b, m, opts);
  return which == Extreme::Min ? both.min : both.max;
}

ExtremeEig extreme_eig_skew_pencil(const SparseMatrixd& s, const SparseMatrixd& m,
                                   const EigenSolveOptions& opts) {
  require(s.rows() == s.cols() && m.rows() == m.cols() && s.rows() == m.rows(),
          ErrorKind::DimensionMismatch, "extreme_eig_skew_pencil: size mismatch");
  const Index n = s.rows();
  require(n >= 1, ErrorKind::InvalidArgument, "extreme_eig_skew_pencil: empty pencil");
  {
    const SparseMatrixd st = s.transpose();
    SparseMatrixd sum = s + st;
    require(max_abs(sum) <= 1e-12 * std::max(max_abs(s), 1.0), ErrorKind::InvalidArgument,
            "extreme_eig_skew_pencil: S is not skew-symmetric");
  }
  if (use_dense(n, opts)) {
    if (max_abs(s) == 0.0) {
      CholeskyFactor check{MatrixXd(m)};
      return {0.0, kDenseResidualTol, true, 0};
    }
    const CholeskyFactor l{MatrixXd(m)};
    const MatrixXd g = l.congruence(MatrixXd(s));
    return {skew_spectral_radius(g), kDenseResidualTol, true, 0};
  }
  const SparseCholesky chol(m);
  if (max_abs(s) == 0.0) return {0.0, 0.0, false, 0};
  const SparseMatrixd st = s.transpose();
  auto r = lanczos_extremes(
      n, [&](const VectorXd& v) { return VectorXd(st * chol.solve(s * v)); },
      [&](const VectorXd& v) { return VectorXd(m * v); },
      [&](const VectorXd& v) { return chol.solve(v); }, false, true, opts);
  r.max.value = std::sqrt(std::max(r.max.value, 0.0));
  return r.max;
}

BoundingRectangle bounding_rectangle(const Pencil& p, const EigenSolveOptions& opts) {
  const auto parts = split(p.stiffness());
  const auto mu = extreme_eigs_sym_pencil(parts.sym, p.mass(), opts);
  const auto nu = extreme_eig_skew_pencil(parts.skew, p.mass(), opts);
  const double tau = p.tau();
  const Rectangle raw{tau * mu.min.value, tau * mu.max.value, -tau * nu.value, tau * nu.value};
  const double tol = mu.min.dense ? kDenseResidualTol : opts.rel_resid_tol;
  return BoundingRectangle::inflate(raw, tol);
}

BoundingRectangle numerical_range_rectangle(const MatrixXd& a, double rel_tol) {
  require(a.rows() == a.cols() && a.rows() >= 1, ErrorKind::DimensionMismatch,
          "numerical_range_rectangle: A must be square and nonempty");
  const Index n = a.rows();
  const MatrixXd herm = 0.5 * (a + a.transpose());
  const VectorXd mu = dense_sym_eig(herm, false).values;
  const double nu = skew_spectral_radius(0.5 * (a - a.transpose()));
  return BoundingRectangle::inflate({mu[0], mu[n - 1], -nu, nu}, rel_tol);
}

CondEstimate cond_estimate(const SparseMatrixd& m, std::optional<double> delta,
                           const EigenSolveOptions& opts) {
  require(m.rows() == m.cols() && m.rows() >= 1, ErrorKind::DimensionMismatch,
          "cond_estimate: M must be square and nonempty");
  const Index n = m.rows();
  CondEstimate c;
  double lo = 0.0, hi = 0.0;
  if (use_dense(n, opts)) {
    CholeskyFactor check{MatrixXd(m)};
    const VectorXd ev = dense_sym_eig(MatrixXd(m), false).values;
    lo = ev[0];
    hi = ev[n - 1];
    c.delta = delta.value_or(0.0);
  } else {
    SparseCholesky check(m);
    const auto ext = lanczos_extremes(
        n, [&](const VectorXd& v) { return VectorXd(m * v); }, [](const VectorXd& v) { return v; },
        [](const VectorXd& v) { return v; }, true, true, opts);
    lo = ext.min.value;
    hi = ext.max.value;
    c.delta = delta.value_or(0.05);
  }
  require(lo > 0.0, ErrorKind::NotSPD, "cond_estimate: M is not positive definite");
  require(c.delta >= 0.0 && c.delta < 1.0, ErrorKind::InvalidArgument, "cond_estimate: delta must lie in [0, 1)");
  c.kappa_tilde = std::max(hi / lo, 1.0);
  c.kappa_safe = c.kappa_tilde / (1.0 - c.delta);
  return c;
}

MatrixXd dense_operator(const Pencil& p) {
  const CholeskyFactor l{MatrixXd(p.mass())};
  MatrixXd kd = p.tau() * MatrixXd(p.stiffness());
  MatrixXd y = l.solve_lower(kd);
  return l.lower().transpose().triangularView<Eigen::Upper>().solve(y);
}

MatrixXd transformed_operator(const Pencil& p) {
  const CholeskyFactor l{MatrixXd(p.mass())};
  return l.congruence(p.tau() * MatrixXd(p.stiffness()));
}

}  // namespace fovexp
