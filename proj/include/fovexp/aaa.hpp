#pragma once

#include <span>
#include <vector>

#include "fovexp/rational.hpp"
#include "fovexp/region.hpp"

namespace fovexp {

/// r(z) = sum_j w_j f_j / (z - z_j) / sum_j w_j / (z - z_j)
struct BarycentricInterpolant {
  std::vector<Complex> support;
  std::vector<Complex> values;
  std::vector<Complex> weights;

  Index degree() const noexcept { return support.empty() ? 0 : static_cast<Index>(support.size()) - 1; }
  Complex operator()(Complex z) const;

  /// Zeros of the denominator sum_j w_j / (z - z_j).
  std::vector<Complex> poles() const;
  Complex residue(Complex pole) const;
};

struct AaaResult {
  BarycentricInterpolant interpolant;
  double max_error = 0.0;  ///< over the non-support samples
  std::vector<double> error_history;
};

/// Discrete AAA on samples (z, f) with absolute tolerance `tol`. With
/// `conjugate_pairs` set, a nonreal support point is always added together
/// with its conjugate sample (which must be present). Throws DegreeExhausted
/// when the degree would exceed m_max with the error still above tol.
AaaResult aaa(std::span<const Complex> z, std::span<const Complex> f, double tol, int m_max,
              bool conjugate_pairs = false);

/// Poles of an AAA interpolant of e^z on the boundary of a rectangle.
///
/// The boundary is refined by doubling until an interpolant built on one
/// density also meets target/2 on the next. Poles inside the rectangle and
/// Froissart doublets are removed; for a conjugate-symmetric rectangle the
/// result is closed under conjugation.
std::vector<Complex> aaa_poles(const RegionBoundary& boundary, double target, int m_max,
                               const ApproxOptions& opts = {});

/// Least-squares fit of gamma + sum_k alpha_k / (beta_k - z) to e^z on the
/// boundary samples with fixed poles, refined with double-double residuals,
/// then certified on the rectangle. Throws RefitFailed if the certified
/// estimate exceeds `target`. Underdetermined fits return the minimum-norm
/// coefficients.
CertifiedApproximant refit_partial_fractions(std::span<const Complex> poles, const RegionBoundary& boundary,
                                             double target, const ApproxOptions& opts = {});

}  // namespace fovexp
