#pragma once

#include <optional>
#include <string>

#include "fovexp/rational.hpp"
#include "fovexp/spectral_bounds.hpp"

namespace fovexp {

enum class ShiftSolver { Sparse, Dense };

/// Which enclosure the scalar approximation is certified on.
///   Transformed: rectangle around W(L^{-1} tau K L^{-T}) from the pencil,
///                with the kappa(M)^{1/2} factor in the target.
///   DenseOperator: rectangle around W(A) of the explicitly formed
///                  A = tau M^{-1} K, no kappa factor. Desk scale only.
enum class RegionMode { DenseOperator, Transformed };
std::string_view to_string(RegionMode m) noexcept;
RegionMode parse_region_mode(std::string_view s);

/// gamma*b + sum_k alpha_k x_k with (beta_k M - tau K) x_k = M b.
/// For real b and a conjugate-closed rational only one member of each pair
/// is solved and the output is exactly real.
VectorXcd apply_partial_fraction(const PartialFractionRational& r, const Pencil& p, const VectorXcd& b,
                                 ShiftSolver solver = ShiftSolver::Sparse);

/// (r(A/s))^s b: s successive applications with step tau/s, all sharing one
/// set of shifted factorizations.
VectorXcd apply_scaled_rational(const ScaledRational& r, const Pencil& p, const VectorXcd& b,
                                ShiftSolver solver = ShiftSolver::Sparse);
VectorXcd apply_scaled_pade(const PadeRational& pade, const Pencil& p, const VectorXcd& b,
                            ShiftSolver solver = ShiftSolver::Sparse);

/// Dense r(A) for a scaled partial-fraction rational.
MatrixXcd rational_of_matrix(const ScaledRational& r, const MatrixXd& a);

struct ExpmvOptions {
  EigenSolveOptions eig;
  ApproxOptions approx;
  /// Divide by kappa instead of kappa^{1/2} in the scalar target.
  bool strict_kappa = false;
  std::optional<double> delta;
  ShiftSolver solver = ShiftSolver::Sparse;
  RegionMode region = RegionMode::Transformed;
  /// Enclosure and kappa estimate already computed for this pencil and
  /// region mode; skips the eigenvalue work when set.
  std::optional<BoundingRectangle> rectangle;
  std::optional<CondEstimate> cond;
};

/// The enclosure used for `mode`, and kappa(M) for Transformed mode.
struct PencilBounds {
  BoundingRectangle rectangle;
  CondEstimate cond;
};
PencilBounds pencil_bounds(const Pencil& p, RegionMode mode, const ExpmvOptions& o = {});

struct ExpmvRequest {
  Pencil pencil;
  VectorXcd b;
  double eps = 1e-6;
  Method method = Method::SubPade;
  ExpmvOptions options{};
};

struct ExpmvCertificate {
  BoundingRectangle rectangle;
  bool lhp_certified = false;
  CondEstimate cond;
  double eps = 0.0;
  double scalar_target = 0.0;
  double achieved = 0.0;  ///< certified scalar sup-error; 0 until certified
  Index degree = 0;
  int scaling = 1;
  Method method = Method::SubPade;
  RegionMode region = RegionMode::Transformed;
  /// Error-norm multiplier: (1 + sqrt 2) * kappa_safe^{1/2} (or kappa_safe in
  /// strict mode, 1 in DenseOperator mode).
  double norm_factor = 1.0;
  std::optional<CertifiedApproximant> approximant;
  std::optional<ErrorKind> failure;
  std::string failure_message;

  bool ok() const noexcept { return !failure.has_value() && approximant.has_value(); }
  /// Certified bound on ||x - e^A b|| / ||b||.
  double certified_bound() const noexcept { return norm_factor * achieved; }
};

/// Approximation or application failure; carries everything certified so far.
class ExpmvError : public Error {
public:
  ExpmvError(const Error& cause, ExpmvCertificate cert) : Error(cause), certificate_(std::move(cert)) {}
  const ExpmvCertificate& certificate() const noexcept { return certificate_; }

private:
  ExpmvCertificate certificate_;
};

struct ExpmvResult {
  VectorXcd x;
  ExpmvCertificate certificate;
};

/// Bound, certify, apply. On ScalingExhausted / DegreeExhausted / RefitFailed
/// / SingularShift throws ExpmvError with the partial certificate.
ExpmvResult expmv_controlled(const ExpmvRequest& req);

/// e^A b with A = tau M^{-1} K formed densely.
VectorXcd expmv_dense_oracle(const Pencil& p, const VectorXcd& b);

/// ||x - e^A b|| / ||b|| against the dense oracle.
double oracle_relative_error(const Pencil& p, const VectorXcd& b, const VectorXcd& x);

struct Theorem1Report {
  double lhs = 0.0;    ///< ||r(A) - e^A||_2
  double rhs = 0.0;    ///< (1 + sqrt 2) kappa(M)^{1/2} sup_R |r - exp|
  double kappa = 1.0;  ///< dense kappa(M)
  bool holds = false;
};

inline constexpr Index kTheorem1MaxSize = 200;

/// Dense check of the norm inequality for a small pencil. The approximant's
/// rectangle must contain the pencil's enclosure of W(L^{-1} tau K L^{-T}).
Theorem1Report theorem1_bound_check(const Pencil& p, const CertifiedApproximant& r);

}  // namespace fovexp
