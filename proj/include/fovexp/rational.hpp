#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fovexp/linalg.hpp"
#include "fovexp/region.hpp"

namespace fovexp {

/// (4,5) Pade approximant of e^z in ratio form, coefficients in ascending
/// powers. `scaling` s selects the scaled form (r(z/s))^s.
struct PadeRational {
  std::array<double, 5> num{};
  std::array<double, 6> den{};
  int scaling = 1;

  Complex operator()(Complex z) const;
};

PadeRational pade45();

/// r(z) = gamma + sum_k weights[k] / (poles[k] - z).
struct PartialFractionRational {
  Complex gamma{0.0, 0.0};
  std::vector<Complex> poles;
  std::vector<Complex> weights;

  Index degree() const noexcept { return static_cast<Index>(poles.size()); }
  Complex operator()(Complex z) const;

  /// Throws PoleInsideRegion if a pole lies in the closed rectangle.
  void require_poles_outside(const Rectangle& r) const;

  /// True when every nonreal pole has a partner that is its exact conjugate
  /// with the exactly conjugate weight, real poles carry real weights, and
  /// gamma is real.
  bool conjugate_closed() const;
};

/// Pairs near-conjugate poles (relative distance below `rel_tol`) and
/// replaces each pair by an exact conjugate pair; near-real poles become real
/// and their weights real. Returns false if some pole has no partner.
bool enforce_conjugate_symmetry(PartialFractionRational& r, double rel_tol);

/// One representative per conjugate class: {index, doubled}. Used by the
/// real-vector application path to solve one shifted system per pair.
struct PoleGroup {
  std::size_t index;
  bool doubled;
};
std::optional<std::vector<PoleGroup>> conjugate_groups(const PartialFractionRational& r);

/// Poles of the denominator and residue weights; gamma is zero because the
/// numerator degree is below the denominator degree.
PartialFractionRational pade_to_partial_fractions(const PadeRational& p);

/// A partial-fraction rational applied in scaled form (r(z/s))^s.
struct ScaledRational {
  PartialFractionRational form;
  int scaling = 1;

  Complex operator()(Complex z) const;
  /// Poles of the scaled map: s * poles.
  std::vector<Complex> effective_poles() const;
  Index degree() const noexcept { return form.degree() * scaling; }
};

/// Integer power by repeated squaring.
Complex ipow(Complex z, int n);

inline constexpr double kSamplingSafety = 1.1;
inline constexpr int kDefaultSamplesPerSide = 500;

/// Max of |r(z) - e^z| over Chebyshev boundary samples of R, times `safety`.
/// By the maximum principle this bounds the sup over all of R once r has no
/// pole in R; a pole in the closed rectangle raises PoleInsideRegion.
double sup_error_on_rectangle(const ScaledRational& r, const Rectangle& rect,
                              int n_per_side = kDefaultSamplesPerSide, double safety = kSamplingSafety);
double sup_error_on_rectangle(const PadeRational& r, const Rectangle& rect,
                              int n_per_side = kDefaultSamplesPerSide, double safety = kSamplingSafety);
double sup_error_on_rectangle(const std::function<Complex(Complex)>& r, std::span<const Complex> poles,
                              const Rectangle& rect, int n_per_side = kDefaultSamplesPerSide,
                              double safety = kSamplingSafety);

enum class Method { SubPade, RatInterp };
std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);

/// A rational approximation of e^z together with the scalar error bound
/// that backs it; construction enforces sup_error_estimate <= target.
class CertifiedApproximant {
public:
  CertifiedApproximant(ScaledRational rational, Rectangle rect, double sup_error_estimate, double target,
                       Method method);

  const ScaledRational& rational() const noexcept { return rational_; }
  const Rectangle& rect() const noexcept { return rect_; }
  double sup_error_estimate() const noexcept { return sup_error_estimate_; }
  double target() const noexcept { return target_; }
  Method method() const noexcept { return method_; }
  Index degree() const noexcept { return rational_.degree(); }

  Complex operator()(Complex z) const { return rational_(z); }

private:
  ScaledRational rational_;
  Rectangle rect_;
  double sup_error_estimate_;
  double target_;
  Method method_;
};

struct ApproxOptions {
  int n_per_side = kDefaultSamplesPerSide;  ///< certification sampling
  double safety = kSamplingSafety;
  int s_max = 64;    ///< sub-pade: degree 5 * s_max = 320
  int m_max = 128;   ///< rat-interp: denominator degree cap
  int aaa_initial_per_side = 128;
  int aaa_max_per_side = 1024;
  /// rat-interp: AAA runs, each at a quarter of the previous tolerance,
  /// before a failed refit is reported.
  int refit_attempts = 4;
};

struct ScalingChoice {
  int s = 1;
  double sup_error = 0.0;
};

/// Smallest s in [1, s_max] with sup |e^z - r45(z/s)^s| <= target on R.
/// Candidates whose scaled poles fall in R are skipped.
ScalingChoice select_scaling(const Rectangle& rect, double target, const ApproxOptions& opts = {});

CertifiedApproximant certify_sub_pade(const Rectangle& rect, double target, const ApproxOptions& opts = {});
CertifiedApproximant certify_rat_interp(const Rectangle& rect, double target, const ApproxOptions& opts = {});
CertifiedApproximant certify(Method method, const Rectangle& rect, double target, const ApproxOptions& opts = {});

}  // namespace fovexp
