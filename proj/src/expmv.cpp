#include "fovexp/expmv.hpp"

#include <cmath>

#include "fovexp/expm.hpp"

namespace fovexp {

namespace {

constexpr double kOnePlusSqrt2 = 2.4142135623730951;

bool is_real(const VectorXcd& b) { return (b.imag().array() == 0.0).all(); }

/// One LU per solved pole of (beta M - tau K).
class ShiftedSystems {
public:
  ShiftedSystems(const PartialFractionRational& r, const Pencil& p, double tau, ShiftSolver solver,
                 bool real_economy)
      : r_(r), mass_(p.mass().cast<Complex>()) {
    if (real_economy) {
      if (auto g = conjugate_groups(r)) groups_ = std::move(*g);
    }
    if (groups_.empty()) {
      for (std::size_t k = 0; k < r.poles.size(); ++k) groups_.push_back({k, false});
      economy_ = false;
    } else {
      economy_ = true;
    }
    const SparseMatrixcd tk = (Complex(tau, 0.0) * p.stiffness().cast<Complex>()).eval();
    factors_.reserve(groups_.size());
    for (const auto& g : groups_) {
      const Complex beta = r.poles[g.index];
      const SparseMatrixcd shifted = (beta * mass_ - tk).eval();
      try {
        if (solver == ShiftSolver::Dense) {
          factors_.push_back(LuFactor<Complex>::factor(MatrixXcd(shifted)));
        } else {
          factors_.push_back(LuFactor<Complex>::factor(shifted));
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        throw Error(ErrorKind::SingularShift, "pole collides with the spectrum of A");
      }
    }
  }

  VectorXcd apply(const VectorXcd& b) const {
    require(b.size() == mass_.rows(), ErrorKind::DimensionMismatch, "apply_partial_fraction: b has wrong length");
    const VectorXcd mb = mass_ * b;
    const bool real_out = economy_;
    require(!economy_ || is_real(b), ErrorKind::InvalidArgument, "paired shifted solves need a real vector");
    VectorXcd out = r_.gamma * b;
    for (std::size_t j = 0; j < groups_.size(); ++j) {
      const auto& g = groups_[j];
      VectorXcd x;
      try {
        x = factors_[j].solve(mb);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        throw Error(ErrorKind::SingularShift, "shifted solve produced non-finite values");
      }
      const Complex alpha = r_.weights[g.index];
      if (real_out) {
        const double mult = g.doubled ? 2.0 : 1.0;
        out.real() += mult * (alpha * x).real();
      } else {
        out += alpha * x;
      }
    }
    if (real_out) out.imag().setZero();
    return out;
  }

private:
  const PartialFractionRational& r_;
  SparseMatrixcd mass_;
  std::vector<PoleGroup> groups_;
  std::vector<LuFactor<Complex>> factors_;
  bool economy_ = false;
};

MatrixXcd matrix_power(MatrixXcd base, int n) {
  MatrixXcd result = MatrixXcd::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) result = (result * base).eval();
    n >>= 1;
    if (n > 0) base = (base * base).eval();
  }
  return result;
}

}  // namespace

std::string_view to_string(RegionMode m) noexcept { return m == RegionMode::DenseOperator ? "i" : "ii"; }

RegionMode parse_region_mode(std::string_view s) {
  if (s == "i") return RegionMode::DenseOperator;
  if (s == "ii") return RegionMode::Transformed;
  throw Error(ErrorKind::InvalidArgument, "unknown region mode '" + std::string(s) + "' (expected i or ii)");
}

VectorXcd apply_partial_fraction(const PartialFractionRational& r, const Pencil& p, const VectorXcd& b,
                                 ShiftSolver solver) {
  require(b.size() == p.size(), ErrorKind::DimensionMismatch, "apply_partial_fraction: b has wrong length");
  const ShiftedSystems sys(r, p, p.tau(), solver, is_real(b));
  return sys.apply(b);
}

VectorXcd apply_scaled_rational(const ScaledRational& r, const Pencil& p, const VectorXcd& b, ShiftSolver solver) {
  require(r.scaling >= 1, ErrorKind::InvalidArgument, "apply_scaled_rational: scaling must be >= 1");
  require(b.size() == p.size(), ErrorKind::DimensionMismatch, "apply_scaled_rational: b has wrong length");
  const ShiftedSystems sys(r.form, p, p.tau() / r.scaling, solver, is_real(b));
  VectorXcd x = b;
  for (int k = 0; k < r.scaling; ++k) x = sys.apply(x);
  return x;
}

VectorXcd apply_scaled_pade(const PadeRational& pade, const Pencil& p, const VectorXcd& b, ShiftSolver solver) {
  return apply_scaled_rational({pade_to_partial_fractions(pade), pade.scaling}, p, b, solver);
}

MatrixXcd rational_of_matrix(const ScaledRational& r, const MatrixXd& a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "rational_of_matrix: A must be square");
  require(r.scaling >= 1, ErrorKind::InvalidArgument, "rational_of_matrix: scaling must be >= 1");
  const Index n = a.rows();
  const MatrixXcd as = a.cast<Complex>() / static_cast<double>(r.scaling);
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  MatrixXcd single = r.form.gamma * id;
  for (std::size_t k = 0; k < r.form.poles.size(); ++k) {
    const auto lu = LuFactor<Complex>::factor(MatrixXcd(r.form.poles[k] * id - as));
    MatrixXcd inv(n, n);
    for (Index j = 0; j < n; ++j) inv.col(j) = lu.solve(id.col(j));
    single += r.form.weights[k] * inv;
  }
  return matrix_power(single, r.scaling);
}

PencilBounds pencil_bounds(const Pencil& p, RegionMode mode, const ExpmvOptions& o) {
  PencilBounds pb;
  if (mode == RegionMode::DenseOperator) {
    require(p.size() <= o.eig.dense_cutoff, ErrorKind::ResourceGuard,
            "mode i forms A densely and needs n <= dense cutoff");
    pb.rectangle = numerical_range_rectangle(dense_operator(p));
  } else {
    pb.rectangle = bounding_rectangle(p, o.eig);
    pb.cond = cond_estimate(p.mass(), o.delta, o.eig);
  }
  return pb;
}

ExpmvResult expmv_controlled(const ExpmvRequest& req) {
  const Pencil& p = req.pencil;
  const ExpmvOptions& o = req.options;
  require(req.eps > 0.0 && std::isfinite(req.eps), ErrorKind::InvalidArgument, "expmv: eps must be positive");
  require(req.b.size() == p.size(), ErrorKind::DimensionMismatch, "expmv: b has wrong length");

  ExpmvCertificate cert;
  cert.eps = req.eps;
  cert.method = req.method;
  cert.region = o.region;

  if (o.rectangle && (o.cond || o.region == RegionMode::DenseOperator)) {
    cert.rectangle = *o.rectangle;
    if (o.cond) cert.cond = *o.cond;
  } else {
    const PencilBounds pb = pencil_bounds(p, o.region, o);
    cert.rectangle = pb.rectangle;
    cert.cond = pb.cond;
  }
  if (o.region == RegionMode::DenseOperator) {
    cert.cond = {};
    cert.norm_factor = kOnePlusSqrt2;
  } else {
    const double kfac = o.strict_kappa ? cert.cond.kappa_safe : std::sqrt(cert.cond.kappa_safe);
    cert.norm_factor = kOnePlusSqrt2 * kfac;
  }
  cert.lhp_certified = is_lhp_certified(cert.rectangle);
  cert.scalar_target = req.eps / cert.norm_factor;

  try {
    CertifiedApproximant approx = certify(req.method, cert.rectangle.region, cert.scalar_target, o.approx);
    cert.achieved = approx.sup_error_estimate();
    cert.degree = approx.degree();
    cert.scaling = approx.rational().scaling;
    cert.approximant = approx;
    VectorXcd x = apply_scaled_rational(approx.rational(), p, req.b, o.solver);
    return {std::move(x), std::move(cert)};
  } catch (const Error& e) {
    cert.failure = e.kind();
    cert.failure_message = e.what();
    throw ExpmvError(e, std::move(cert));
  }
}

VectorXcd expmv_dense_oracle(const Pencil& p, const VectorXcd& b) {
  require(b.size() == p.size(), ErrorKind::DimensionMismatch, "expmv_dense_oracle: b has wrong length");
  const MatrixXd e = expm_dense_oracle(dense_operator(p));
  return e.cast<Complex>() * b;
}

double oracle_relative_error(const Pencil& p, const VectorXcd& b, const VectorXcd& x) {
  const double nb = b.norm();
  require(nb > 0.0, ErrorKind::InvalidArgument, "oracle_relative_error: b is zero");
  return (x - expmv_dense_oracle(p, b)).norm() / nb;
}

Theorem1Report theorem1_bound_check(const Pencil& p, const CertifiedApproximant& r) {
  require(p.size() <= kTheorem1MaxSize, ErrorKind::ResourceGuard, "theorem1_bound_check: n exceeds 200");
  const BoundingRectangle enclosure = bounding_rectangle(p);
  const Rectangle& ar = r.rect();
  const Rectangle& er = enclosure.raw;
  require(er.re_min >= ar.re_min && er.re_max <= ar.re_max && er.im_min >= ar.im_min && er.im_max <= ar.im_max,
          ErrorKind::InvalidArgument, "theorem1_bound_check: approximant rectangle does not enclose the pencil");

  const MatrixXd a = dense_operator(p);
  const MatrixXcd diff = rational_of_matrix(r.rational(), a) - expm_dense_oracle(a).cast<Complex>();
  Eigen::JacobiSVD<MatrixXcd> svd(diff);

  const VectorXd mev = dense_sym_eig(MatrixXd(p.mass()), false).values;
  Theorem1Report rep;
  rep.kappa = mev[mev.size() - 1] / mev[0];
  rep.lhs = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  rep.rhs = kOnePlusSqrt2 * std::sqrt(rep.kappa) * r.sup_error_estimate();
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace fovexp
