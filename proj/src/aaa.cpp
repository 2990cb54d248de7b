#include "fovexp/aaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "fovexp/double_double.hpp"

namespace fovexp {

Complex BarycentricInterpolant::operator()(Complex z) const {
  Complex num{0.0, 0.0};
  Complex den{0.0, 0.0};
  for (std::size_t j = 0; j < support.size(); ++j) {
    const Complex d = z - support[j];
    if (d == Complex(0.0, 0.0)) return values[j];
    const Complex c = weights[j] / d;
    num += c * values[j];
    den += c;
  }
  return num / den;
}

std::vector<Complex> BarycentricInterpolant::poles() const {
  const Index m1 = static_cast<Index>(support.size());
  if (m1 <= 1) return {};
  Complex center{0.0, 0.0};
  for (const Complex& z : support) center += z;
  center /= static_cast<double>(m1);
  double radius = 0.0;
  for (const Complex& z : support) radius = std::max(radius, std::abs(z - center));
  Complex wsum = std::accumulate(weights.begin(), weights.end(), Complex(0.0, 0.0));
  double wabs = 0.0;
  for (const Complex& w : weights) wabs += std::abs(w);
  require(wabs > 0.0, ErrorKind::InvalidArgument, "barycentric poles: zero weights");
  // sum(w) -> 0 sends one pole to infinity; keep the formula well defined and
  // let the far-away eigenvalue be filtered below.
  if (std::abs(wsum) < 1e-300) wsum = Complex(1e-300, 0.0);

  // diag(z) + a 1^T has eigenvalues {c} U {zeros of sum w_j / (x - z_j)}
  // when a_j = -w_j (z_j - c) / sum(w).
  const Complex c = center + 10.0 * (radius + 1.0) * Complex(0.6, 0.8);
  MatrixXcd a(m1, m1);
  for (Index j = 0; j < m1; ++j) {
    const Complex aj = -weights[static_cast<std::size_t>(j)] * (support[static_cast<std::size_t>(j)] - c) / wsum;
    a.row(j).setConstant(aj);
    a(j, j) += support[static_cast<std::size_t>(j)];
  }
  Eigen::ComplexEigenSolver<MatrixXcd> es(a, false);
  require(es.info() == Eigen::Success, ErrorKind::NoConvergence, "barycentric poles: eigensolver failed");
  Index drop = 0;
  for (Index k = 1; k < m1; ++k)
    if (std::abs(es.eigenvalues()[k] - c) < std::abs(es.eigenvalues()[drop] - c)) drop = k;
  std::vector<Complex> raw;
  const double far = 1e8 * (radius + std::abs(center) + 1.0);
  for (Index k = 0; k < m1; ++k)
    if (k != drop && std::abs(es.eigenvalues()[k]) < far) raw.push_back(es.eigenvalues()[k]);

  auto denom = [&](Complex x, Complex& deriv) {
    Complex d{0.0, 0.0};
    deriv = {0.0, 0.0};
    for (std::size_t j = 0; j < support.size(); ++j) {
      const Complex inv = 1.0 / (x - support[j]);
      d += weights[j] * inv;
      deriv -= weights[j] * inv * inv;
    }
    return d;
  };
  for (Complex& p : raw) {
    for (int it = 0; it < 3; ++it) {
      Complex dd;
      const Complex d = denom(p, dd);
      if (dd == Complex(0.0, 0.0) || !std::isfinite(std::abs(d))) break;
      const Complex next = p - d / dd;
      Complex dd2;
      if (!(std::abs(denom(next, dd2)) < std::abs(d))) break;
      p = next;
    }
  }
  return raw;
}

Complex BarycentricInterpolant::residue(Complex pole) const {
  Complex num{0.0, 0.0};
  Complex dden{0.0, 0.0};
  for (std::size_t j = 0; j < support.size(); ++j) {
    const Complex inv = 1.0 / (pole - support[j]);
    num += weights[j] * values[j] * inv;
    dden -= weights[j] * inv * inv;
  }
  return num / dden;
}

namespace {

VectorXcd least_singular_vector(const MatrixXcd& loewner) {
  const Index cols = loewner.cols();
  if (cols == 1) return VectorXcd::Ones(1);
  if (loewner.rows() >= cols) {
    Eigen::HouseholderQR<MatrixXcd> qr(loewner);
    const MatrixXcd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<MatrixXcd> svd(r, Eigen::ComputeFullV);
    return svd.matrixV().col(cols - 1);
  }
  Eigen::JacobiSVD<MatrixXcd> svd(loewner, Eigen::ComputeFullV);
  return svd.matrixV().col(cols - 1);
}

}  // namespace

AaaResult aaa(std::span<const Complex> z, std::span<const Complex> f, double tol, int m_max, bool conjugate_pairs) {
  require(z.size() == f.size(), ErrorKind::DimensionMismatch, "aaa: samples and values differ in length");
  require(!z.empty(), ErrorKind::InvalidArgument, "aaa: no samples");
  require(m_max >= 0, ErrorKind::InvalidArgument, "aaa: m_max must be nonnegative");
  const std::size_t n = z.size();

  std::map<std::pair<double, double>, std::size_t> index_of;
  if (conjugate_pairs)
    for (std::size_t i = 0; i < n; ++i) index_of.emplace(std::make_pair(z[i].real(), z[i].imag()), i);

  std::vector<bool> is_support(n, false);
  std::vector<std::size_t> support_idx;
  AaaResult out;
  auto& r = out.interpolant;

  const Complex mean = std::accumulate(f.begin(), f.end(), Complex(0.0, 0.0)) / static_cast<double>(n);
  std::vector<Complex> approx(n, mean);

  auto current_error = [&](std::size_t& argmax) {
    double err = 0.0;
    argmax = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_support[i]) continue;
      const double e = std::abs(f[i] - approx[i]);
      if (argmax == n || e > err || !std::isfinite(e)) {
        err = std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
        argmax = i;
      }
    }
    return err;
  };

  std::size_t j = 0;
  double err = current_error(j);
  out.error_history.push_back(err);
  while (err > tol && j < n) {
    std::vector<std::size_t> add{j};
    if (conjugate_pairs && z[j].imag() != 0.0) {
      const auto it = index_of.find({z[j].real(), -z[j].imag()});
      require(it != index_of.end(), ErrorKind::InvalidArgument, "aaa: sample set is not conjugate-closed");
      if (!is_support[it->second]) add.push_back(it->second);
    }
    if (static_cast<int>(support_idx.size() + add.size()) - 1 > m_max)
      throw Error(ErrorKind::DegreeExhausted, "aaa: degree would exceed " + std::to_string(m_max) +
                                                  " with error " + std::to_string(err));
    for (std::size_t k : add) {
      is_support[k] = true;
      support_idx.push_back(k);
    }

    const Index m1 = static_cast<Index>(support_idx.size());
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i)
      if (!is_support[i]) rows.push_back(i);
    MatrixXcd loewner(static_cast<Index>(rows.size()), m1);
    for (Index col = 0; col < m1; ++col) {
      const std::size_t s = support_idx[static_cast<std::size_t>(col)];
      for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const std::size_t i = rows[ri];
        loewner(static_cast<Index>(ri), col) = (f[i] - f[s]) / (z[i] - z[s]);
      }
    }
    const VectorXcd w = least_singular_vector(loewner);

    r.support.clear();
    r.values.clear();
    r.weights.clear();
    for (Index col = 0; col < m1; ++col) {
      const std::size_t s = support_idx[static_cast<std::size_t>(col)];
      r.support.push_back(z[s]);
      r.values.push_back(f[s]);
      r.weights.push_back(w[col]);
    }
    for (std::size_t i : rows) approx[i] = r(z[i]);
    for (std::size_t s : support_idx) approx[s] = f[s];
    err = current_error(j);
    out.error_history.push_back(err);
  }
  if (support_idx.empty()) {
    // Constant data already within tolerance of its mean: a single support
    // point reproduces it.
    r.support = {z[0]};
    r.values = {mean};
    r.weights = {Complex(1.0, 0.0)};
  }
  out.max_error = err;
  return out;
}

namespace {

/// Pairs poles into exact conjugate pairs; unmatched nonreal poles gain
/// their conjugate.
// Makes a pole set closed under conjugation. Upper and lower half-plane
// poles are matched greedily by |p - conj(q)| and each pair is replaced by
// its conjugate-symmetric average. Unmatched poles within kRealTol of the
// axis become real (duplicates merged); the rest gain their conjugate. Pole
// positions of AAA fits of exp are ill-conditioned, so the averaging is
// harmless: residues are recomputed by the refit and the result certified.
std::vector<Complex> symmetrize_poles(const std::vector<Complex>& poles) {
  constexpr double kRealTol = 1e-2;
  std::vector<Complex> up, down;
  std::vector<double> reals;
  for (const Complex& b : poles) {
    const double scale = std::max(1.0, std::abs(b));
    if (std::abs(b.imag()) <= 1e-12 * scale) {
      reals.push_back(b.real());
    } else {
      (b.imag() > 0.0 ? up : down).push_back(b);
    }
  }
  struct Candidate {
    double dist;
    std::size_t i, j;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < up.size(); ++i)
    for (std::size_t j = 0; j < down.size(); ++j) cands.push_back({std::abs(up[i] - std::conj(down[j])), i, j});
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.dist < b.dist || (a.dist == b.dist && (a.i < b.i || (a.i == b.i && a.j < b.j)));
  });
  std::vector<bool> up_used(up.size(), false), down_used(down.size(), false);
  std::vector<Complex> upper;
  for (const auto& c : cands) {
    if (up_used[c.i] || down_used[c.j]) continue;
    up_used[c.i] = down_used[c.j] = true;
    upper.push_back(0.5 * (up[c.i] + std::conj(down[c.j])));
  }
  auto leftover = [&](const Complex& b) {
    const double scale = std::max(1.0, std::abs(b));
    if (std::abs(b.imag()) <= kRealTol * scale) {
      reals.push_back(b.real());
    } else {
      upper.emplace_back(b.real(), std::abs(b.imag()));
    }
  };
  for (std::size_t i = 0; i < up.size(); ++i)
    if (!up_used[i]) leftover(up[i]);
  for (std::size_t j = 0; j < down.size(); ++j)
    if (!down_used[j]) leftover(down[j]);

  std::sort(reals.begin(), reals.end());
  std::vector<Complex> out;
  for (std::size_t i = 0; i < reals.size(); ++i) {
    if (i > 0 && std::abs(reals[i] - reals[i - 1]) <= 1e-6 * std::max(1.0, std::abs(reals[i]))) continue;
    out.emplace_back(reals[i], 0.0);
  }
  for (const Complex& b : upper) {
    out.push_back(b);
    out.push_back(std::conj(b));
  }
  return out;
}

double diameter(const Rectangle& r) { return std::hypot(r.width(), r.height()); }

}  // namespace

std::vector<Complex> aaa_poles(const RegionBoundary& boundary, double target, int m_max, const ApproxOptions& opts) {
  require(!boundary.samples.empty(), ErrorKind::InvalidArgument, "aaa_poles: empty boundary");
  require(target > 0.0, ErrorKind::InvalidArgument, "aaa_poles: target must be positive");
  require(m_max >= 1, ErrorKind::InvalidArgument, "aaa_poles: m_max must be >= 1");
  const Rectangle& rect = boundary.rect;
  const bool symmetric = rect.conjugate_symmetric();
  const double tol = 0.5 * target;

  auto values_of = [](const std::vector<Complex>& zs) {
    std::vector<Complex> fs;
    fs.reserve(zs.size());
    for (const Complex& zz : zs) fs.push_back(std::exp(zz));
    return fs;
  };

  int per_side = std::max(boundary.per_side[0], 2);
  std::vector<Complex> samples = boundary.samples;
  AaaResult fit;
  for (;;) {
    fit = aaa(samples, values_of(samples), tol, m_max);
    if (samples.size() <= 1) break;
    const auto finer = sample_boundary(rect, 2 * per_side, Spacing::Chebyshev);
    double check = 0.0;
    for (const Complex& zz : finer.samples) check = std::max(check, std::abs(fit.interpolant(zz) - std::exp(zz)));
    if (check <= tol || 2 * per_side > opts.aaa_max_per_side) break;
    per_side *= 2;
    samples = finer.samples;
  }

  double fmax = 0.0;
  for (const Complex& v : fit.interpolant.values) fmax = std::max(fmax, std::abs(v));
  const double slack = 1e-8 * std::max(1.0, diameter(rect));
  std::vector<Complex> kept;
  for (const Complex& p : fit.interpolant.poles()) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) continue;
    if (rect.contains(p, slack)) continue;
    if (std::abs(fit.interpolant.residue(p)) < 1e-13 * std::max(fmax, 1e-300)) continue;
    kept.push_back(p);
  }
  if (symmetric) {
    kept = symmetrize_poles(kept);
    std::erase_if(kept, [&](Complex p) { return rect.contains(p, slack); });
  }
  if (static_cast<int>(kept.size()) > m_max)
    throw Error(ErrorKind::DegreeExhausted, "aaa_poles: " + std::to_string(kept.size()) + " poles exceed " +
                                                std::to_string(m_max));
  return kept;
}

CertifiedApproximant refit_partial_fractions(std::span<const Complex> poles, const RegionBoundary& boundary,
                                             double target, const ApproxOptions& opts) {
  require(!boundary.samples.empty(), ErrorKind::InvalidArgument, "refit: empty boundary");
  require(target > 0.0, ErrorKind::InvalidArgument, "refit: target must be positive");
  for (const Complex& b : poles)
    require(!boundary.rect.contains(b), ErrorKind::PoleInsideRegion, "refit: pole inside the rectangle");

  const Index n = static_cast<Index>(boundary.samples.size());
  const Index cols = static_cast<Index>(poles.size()) + 1;
  MatrixXcd basis(n, cols);
  VectorXcd rhs(n);
  for (Index i = 0; i < n; ++i) {
    const Complex zi = boundary.samples[static_cast<std::size_t>(i)];
    basis(i, 0) = 1.0;
    for (Index k = 1; k < cols; ++k) basis(i, k) = 1.0 / (poles[static_cast<std::size_t>(k - 1)] - zi);
    rhs[i] = std::exp(zi);
  }
  VectorXd col_scale(cols);
  for (Index k = 0; k < cols; ++k) {
    const double nk = basis.col(k).norm();
    col_scale[k] = nk > 0.0 ? 1.0 / nk : 1.0;
    basis.col(k) *= col_scale[k];
  }

  Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod(basis);
  VectorXcd x = cod.solve(rhs);

  // Iterative refinement with residuals accumulated in double-double.
  auto residual = [&](const VectorXcd& coef) {
    VectorXcd res(n);
    for (Index i = 0; i < n; ++i) {
      dd::Complex acc;
      acc.add(rhs[i]);
      for (Index k = 0; k < cols; ++k) acc.add_product(-basis(i, k), coef[k]);
      res[i] = acc.value();
    }
    return res;
  };
  VectorXcd res = residual(x);
  double best = res.norm();
  for (int it = 0; it < 3; ++it) {
    const VectorXcd trial = x + cod.solve(res);
    const VectorXcd trial_res = residual(trial);
    const double nr = trial_res.norm();
    if (!(nr < best)) break;
    x = trial;
    res = trial_res;
    best = nr;
  }

  PartialFractionRational pf;
  pf.gamma = x[0] * col_scale[0];
  for (Index k = 1; k < cols; ++k) {
    pf.poles.push_back(poles[static_cast<std::size_t>(k - 1)]);
    pf.weights.push_back(x[k] * col_scale[k]);
  }
  if (boundary.rect.conjugate_symmetric()) {
    PartialFractionRational sym = pf;
    if (enforce_conjugate_symmetry(sym, 1e-12)) pf = std::move(sym);
  }

  ScaledRational r{std::move(pf), 1};
  const double estimate = sup_error_on_rectangle(r, boundary.rect, opts.n_per_side, opts.safety);
  if (!(estimate <= target))
    throw Error(ErrorKind::RefitFailed, "refit: certified error " + std::to_string(estimate) +
                                            " exceeds target " + std::to_string(target));
  return CertifiedApproximant(std::move(r), boundary.rect, estimate, target, Method::RatInterp);
}

CertifiedApproximant certify_rat_interp(const Rectangle& rect, double target, const ApproxOptions& opts) {
  require(opts.refit_attempts >= 1, ErrorKind::InvalidArgument, "certify_rat_interp: refit_attempts must be >= 1");
  const auto start = sample_boundary(rect, opts.aaa_initial_per_side, Spacing::Chebyshev);
  const auto fit_samples = sample_boundary(rect, opts.n_per_side, Spacing::Uniform);
  double aaa_target = target;
  for (int attempt = 1;; ++attempt) {
    const auto poles = aaa_poles(start, aaa_target, opts.m_max, opts);
    try {
      return refit_partial_fractions(poles, fit_samples, target, opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RefitFailed || attempt == opts.refit_attempts) throw;
    }
    aaa_target *= 0.25;
  }
}

}  // namespace fovexp
