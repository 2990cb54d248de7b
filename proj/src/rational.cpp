#include "fovexp/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fovexp {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

template <std::size_t N>
Complex horner(const std::array<double, N>& c, Complex z) {
  Complex acc = c[N - 1];
  for (std::size_t k = N - 1; k-- > 0;) acc = acc * z + c[k];
  return acc;
}

using ComplexL = std::complex<long double>;

template <std::size_t N>
ComplexL horner_l(const std::array<double, N>& c, ComplexL z) {
  ComplexL acc = c[N - 1];
  for (std::size_t k = N - 1; k-- > 0;) acc = acc * z + static_cast<long double>(c[k]);
  return acc;
}

template <std::size_t N>
ComplexL horner_derivative_l(const std::array<double, N>& c, ComplexL z) {
  ComplexL acc = static_cast<long double>(N - 1) * c[N - 1];
  for (std::size_t k = N - 1; k-- > 1;) acc = acc * z + static_cast<long double>(k) * c[k];
  return acc;
}

}  // namespace

Complex ipow(Complex z, int n) {
  require(n >= 0, ErrorKind::InvalidArgument, "ipow: negative exponent");
  Complex result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

PadeRational pade45() {
  constexpr int k = 4;
  constexpr int m = 5;
  PadeRational r;
  for (int j = 0; j <= k; ++j)
    r.num[static_cast<std::size_t>(j)] =
        factorial(k + m - j) * factorial(k) / (factorial(k + m) * factorial(j) * factorial(k - j));
  for (int j = 0; j <= m; ++j)
    r.den[static_cast<std::size_t>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * factorial(k + m - j) * factorial(m) /
                                         (factorial(k + m) * factorial(j) * factorial(m - j));
  return r;
}

Complex PadeRational::operator()(Complex z) const {
  require(scaling >= 1, ErrorKind::InvalidArgument, "PadeRational: scaling must be >= 1");
  const Complex w = z / static_cast<double>(scaling);
  const Complex q = horner(den, w);
  require(q != Complex(0.0, 0.0), ErrorKind::PoleEvaluation, "PadeRational: evaluation at a pole");
  return ipow(horner(num, w) / q, scaling);
}

Complex PartialFractionRational::operator()(Complex z) const {
  Complex acc = gamma;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    const Complex d = poles[k] - z;
    require(d != Complex(0.0, 0.0), ErrorKind::PoleEvaluation, "partial fractions: evaluation at a pole");
    acc += weights[k] / d;
  }
  return acc;
}

void PartialFractionRational::require_poles_outside(const Rectangle& r) const {
  for (const Complex& b : poles)
    require(!r.contains(b), ErrorKind::PoleInsideRegion, "pole inside the target rectangle");
}

std::optional<std::vector<PoleGroup>> conjugate_groups(const PartialFractionRational& r) {
  if (r.gamma.imag() != 0.0) return std::nullopt;
  const std::size_t n = r.poles.size();
  std::vector<bool> matched(n, false);
  std::vector<PoleGroup> groups;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex b = r.poles[i];
    if (b.imag() == 0.0) {
      if (r.weights[i].imag() != 0.0) return std::nullopt;
      groups.push_back({i, false});
      matched[i] = true;
    } else if (b.imag() > 0.0) {
      bool found = false;
      for (std::size_t j = 0; j < n && !found; ++j) {
        if (!matched[j] && r.poles[j] == std::conj(b) && r.weights[j] == std::conj(r.weights[i])) {
          matched[j] = true;
          found = true;
        }
      }
      if (!found) return std::nullopt;
      matched[i] = true;
      groups.push_back({i, true});
    }
  }
  if (std::find(matched.begin(), matched.end(), false) != matched.end()) return std::nullopt;
  return groups;
}

bool PartialFractionRational::conjugate_closed() const { return conjugate_groups(*this).has_value(); }

bool enforce_conjugate_symmetry(PartialFractionRational& r, double rel_tol) {
  const std::size_t n = r.poles.size();
  std::vector<bool> used(n, false);
  PartialFractionRational out;
  out.gamma = {r.gamma.real(), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    const Complex b = r.poles[i];
    const double scale = std::max(1.0, std::abs(b));
    used[i] = true;
    if (std::abs(b.imag()) <= rel_tol * scale) {
      out.poles.emplace_back(b.real(), 0.0);
      out.weights.emplace_back(r.weights[i].real(), 0.0);
      continue;
    }
    std::size_t best = n;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(r.poles[j] - std::conj(b));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == n || best_dist > rel_tol * scale) return false;
    used[best] = true;
    Complex beta = 0.5 * (b + std::conj(r.poles[best]));
    Complex alpha = 0.5 * (r.weights[i] + std::conj(r.weights[best]));
    if (beta.imag() < 0.0) {
      beta = std::conj(beta);
      alpha = std::conj(alpha);
    }
    out.poles.push_back(beta);
    out.weights.push_back(alpha);
    out.poles.push_back(std::conj(beta));
    out.weights.push_back(std::conj(alpha));
  }
  r = std::move(out);
  return true;
}

PartialFractionRational pade_to_partial_fractions(const PadeRational& p) {
  constexpr int deg = 5;
  require(p.den[deg] != 0.0, ErrorKind::InvalidArgument, "pade_to_partial_fractions: degree-5 denominator expected");
  // Companion matrix of the monic denominator.
  MatrixXd companion = MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p.den[static_cast<std::size_t>(i)] / p.den[deg];
  Eigen::EigenSolver<MatrixXd> es(companion, false);
  require(es.info() == Eigen::Success, ErrorKind::NoConvergence, "pade_to_partial_fractions: root finding failed");

  // Newton polish and residues in extended precision keep r(0) = 1 to a few ulps.
  PartialFractionRational r;
  std::vector<ComplexL> poles_l;
  for (int k = 0; k < deg; ++k) {
    ComplexL b(es.eigenvalues()[k].real(), es.eigenvalues()[k].imag());
    for (int it = 0; it < 6; ++it) {
      const ComplexL dq = horner_derivative_l(p.den, b);
      if (dq == ComplexL(0.0L, 0.0L)) break;
      b -= horner_l(p.den, b) / dq;
    }
    poles_l.push_back(b);
    r.poles.emplace_back(static_cast<double>(b.real()), static_cast<double>(b.imag()));
  }
  for (int i = 0; i < deg; ++i)
    for (int j = i + 1; j < deg; ++j)
      require(std::abs(r.poles[static_cast<std::size_t>(i)] - r.poles[static_cast<std::size_t>(j)]) >= 1e-8,
              ErrorKind::RepeatedRoots, "pade_to_partial_fractions: repeated denominator roots");
  // p/q = sum res_k / (z - b_k) with res_k = p(b_k) / q'(b_k); flip sign for 1 / (b_k - z).
  for (const ComplexL& b : poles_l) {
    const ComplexL w = -horner_l(p.num, b) / horner_derivative_l(p.den, b);
    r.weights.emplace_back(static_cast<double>(w.real()), static_cast<double>(w.imag()));
  }
  const bool symmetric = enforce_conjugate_symmetry(r, 1e-10);
  require(symmetric, ErrorKind::NoConvergence, "pade_to_partial_fractions: roots are not conjugate-closed");
  return r;
}

Complex ScaledRational::operator()(Complex z) const {
  if (scaling == 1) return form(z);
  return ipow(form(z / static_cast<double>(scaling)), scaling);
}

std::vector<Complex> ScaledRational::effective_poles() const {
  std::vector<Complex> out;
  out.reserve(form.poles.size());
  for (const Complex& b : form.poles) out.push_back(static_cast<double>(scaling) * b);
  return out;
}

double sup_error_on_rectangle(const std::function<Complex(Complex)>& r, std::span<const Complex> poles,
                              const Rectangle& rect, int n_per_side, double safety) {
  for (const Complex& b : poles)
    require(!rect.contains(b), ErrorKind::PoleInsideRegion, "sup_error_on_rectangle: pole inside the rectangle");
  const auto boundary = sample_boundary(rect, n_per_side, Spacing::Chebyshev);
  double worst = 0.0;
  for (const Complex& z : boundary.samples) {
    const double e = std::abs(r(z) - std::exp(z));
    if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, e);
  }
  return safety * worst;
}

double sup_error_on_rectangle(const ScaledRational& r, const Rectangle& rect, int n_per_side, double safety) {
  const auto poles = r.effective_poles();
  return sup_error_on_rectangle([&r](Complex z) { return r(z); }, poles, rect, n_per_side, safety);
}

double sup_error_on_rectangle(const PadeRational& r, const Rectangle& rect, int n_per_side, double safety) {
  auto pf = pade_to_partial_fractions(r);
  const ScaledRational scaled{pf, r.scaling};
  const auto poles = scaled.effective_poles();
  return sup_error_on_rectangle([&r](Complex z) { return r(z); }, poles, rect, n_per_side, safety);
}

std::string_view to_string(Method m) noexcept {
  return m == Method::SubPade ? "sub-pade" : "rat-interp";
}

Method parse_method(std::string_view s) {
  if (s == "sub-pade") return Method::SubPade;
  if (s == "rat-interp") return Method::RatInterp;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(s) + "'");
}

CertifiedApproximant::CertifiedApproximant(ScaledRational rational, Rectangle rect, double sup_error_estimate,
                                           double target, Method method)
    : rational_(std::move(rational)),
      rect_(rect),
      sup_error_estimate_(sup_error_estimate),
      target_(target),
      method_(method) {
  require(rational_.scaling >= 1, ErrorKind::InvalidArgument, "CertifiedApproximant: scaling must be >= 1");
  require(rational_.form.poles.size() == rational_.form.weights.size(), ErrorKind::DimensionMismatch,
          "CertifiedApproximant: poles and weights differ in length");
  for (const Complex& b : rational_.effective_poles())
    require(!rect_.contains(b), ErrorKind::PoleInsideRegion, "CertifiedApproximant: pole inside the rectangle");
  require(std::isfinite(sup_error_estimate_) && sup_error_estimate_ <= target_, ErrorKind::InvalidArgument,
          "CertifiedApproximant: estimate exceeds target");
}

ScalingChoice select_scaling(const Rectangle& rect, double target, const ApproxOptions& opts) {
  require(target > 0.0, ErrorKind::InvalidArgument, "select_scaling: target must be positive");
  require(opts.s_max >= 1, ErrorKind::InvalidArgument, "select_scaling: s_max must be >= 1");
  const auto pf = pade_to_partial_fractions(pade45());
  const auto boundary = sample_boundary(rect, opts.n_per_side, Spacing::Chebyshev);
  std::vector<Complex> exp_values;
  exp_values.reserve(boundary.samples.size());
  for (const Complex& z : boundary.samples) exp_values.push_back(std::exp(z));

  for (int s = 1; s <= opts.s_max; ++s) {
    const ScaledRational r{pf, s};
    const auto poles = r.effective_poles();
    if (std::any_of(poles.begin(), poles.end(), [&](Complex b) { return rect.contains(b); })) continue;
    double worst = 0.0;
    for (std::size_t i = 0; i < boundary.samples.size() && worst <= target; ++i) {
      const double e = std::abs(r(boundary.samples[i]) - exp_values[i]);
      worst = std::isfinite(e) ? std::max(worst, opts.safety * e) : std::numeric_limits<double>::infinity();
    }
    if (worst <= target) return {s, worst};
  }
  throw Error(ErrorKind::ScalingExhausted,
              "select_scaling: no s <= " + std::to_string(opts.s_max) + " meets the target");
}

CertifiedApproximant certify_sub_pade(const Rectangle& rect, double target, const ApproxOptions& opts) {
  const auto choice = select_scaling(rect, target, opts);
  ScaledRational r{pade_to_partial_fractions(pade45()), choice.s};
  return CertifiedApproximant(std::move(r), rect, choice.sup_error, target, Method::SubPade);
}

CertifiedApproximant certify(Method method, const Rectangle& rect, double target, const ApproxOptions& opts) {
  return method == Method::SubPade ? certify_sub_pade(rect, target, opts) : certify_rat_interp(rect, target, opts);
}

}  // namespace fovexp
