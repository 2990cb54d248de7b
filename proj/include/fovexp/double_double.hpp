#pragma once

#include <cmath>
#include <complex>

namespace fovexp::dd {

// Error-free transformations; the pair (hi, lo) represents hi + lo exactly.

inline void two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void two_prod(double a, double b, double& p, double& e) noexcept {
  p = a * b;
  e = std::fma(a, b, -p);
}

struct Real {
  double hi = 0.0;
  double lo = 0.0;

  Real& operator+=(double x) noexcept {
    double s, e;
    two_sum(hi, x, s, e);
    e += lo;
    two_sum(s, e, hi, lo);
    return *this;
  }

  /// this += a * b with the product formed exactly.
  void add_product(double a, double b) noexcept {
    double p, e;
    two_prod(a, b, p, e);
    *this += p;
    *this += e;
  }

  double value() const noexcept { return hi + lo; }
};

/// Complex accumulator with double-double real and imaginary parts.
struct Complex {
  Real re;
  Real im;

  void add(std::complex<double> z) noexcept {
    re += z.real();
    im += z.imag();
  }

  void add_product(std::complex<double> a, std::complex<double> b) noexcept {
    re.add_product(a.real(), b.real());
    re.add_product(-a.imag(), b.imag());
    im.add_product(a.real(), b.imag());
    im.add_product(a.imag(), b.real());
  }

  std::complex<double> value() const noexcept { return {re.value(), im.value()}; }
};

}  // namespace fovexp::dd
