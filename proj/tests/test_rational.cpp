#include <doctest.h>

#include <cmath>

#include "fovexp/rational.hpp"

using namespace fovexp;

namespace {

long double fact(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

const Complex kI{0.0, 1.0};

}  // namespace

TEST_CASE("pade45 coefficients match the closed form") {
  const auto p = pade45();
  CHECK(p.scaling == 1);
  for (int j = 0; j <= 4; ++j) {
    const long double c = fact(9 - j) * fact(4) / (fact(9) * fact(j) * fact(4 - j));
    CHECK(std::abs(p.num[j] - static_cast<double>(c)) <= 1e-15 * std::abs(static_cast<double>(c)));
  }
  for (int j = 0; j <= 5; ++j) {
    const long double c = fact(9 - j) * fact(5) * (j % 2 ? -1 : 1) / (fact(9) * fact(j) * fact(5 - j));
    CHECK(std::abs(p.den[j] - static_cast<double>(c)) <= 1e-15 * std::abs(static_cast<double>(c)));
  }
  CHECK(p.num[0] / p.den[0] == 1.0);
}

TEST_CASE("pade45 order conditions by series division") {
  const auto p = pade45();
  long double c[10];
  for (int k = 0; k < 10; ++k) {
    long double s = k <= 4 ? static_cast<long double>(p.num[k]) : 0.0L;
    for (int j = 1; j <= std::min(k, 5); ++j) s -= static_cast<long double>(p.den[j]) * c[k - j];
    c[k] = s / static_cast<long double>(p.den[0]);
    const long double truth = 1.0L / fact(k);
    CHECK(static_cast<double>(std::fabs(c[k] - truth) / truth) <= 1e-14);
  }
}

TEST_CASE("pade45 scalar accuracy") {
  const auto p = pade45();
  CHECK(p(0.0) == Complex(1.0, 0.0));
  CHECK(std::abs(std::exp(0.1) - p(0.1)) <= 1e-15);
  const double err1 = std::abs(std::exp(1.0) - p(1.0).real());
  CHECK(err1 >= 1e-9);
  CHECK(err1 <= 1e-8);
  const double leading = static_cast<double>(fact(4) * fact(5) / (fact(9) * fact(10)));
  CHECK(err1 == doctest::Approx(leading).epsilon(0.15));
}

TEST_CASE("partial fractions agree with the ratio form") {
  const auto p = pade45();
  const auto pf = pade_to_partial_fractions(p);
  CHECK(pf.degree() == 5);
  CHECK(pf.gamma == Complex(0.0, 0.0));
  CHECK(pf.conjugate_closed());
  for (Complex z : {Complex(0), Complex(1), Complex(-1), kI, -kI, Complex(-10)})
    CHECK(std::abs(pf(z) - p(z)) <= 1e-12 * std::max(1.0, std::abs(p(z))));
  CHECK(std::abs(pf(0.0) - 1.0) <= 1e-12);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double r = 10.0 * std::sqrt((k + 0.5) / 100.0);
    const Complex z = std::polar(r, 2.399963 * k);
    worst = std::max(worst, std::abs(pf(z) - p(z)) / std::max(1.0, std::abs(p(z))));
  }
  CHECK(worst <= 1e-12);
  for (const Complex& b : pf.poles) {
    double q = 0.0;
    Complex acc = 0.0;
    for (int j = 5; j >= 0; --j) {
      acc = acc * b + p.den[j];
      q += std::abs(p.den[j]) * std::pow(std::abs(b), j);
    }
    CHECK(std::abs(acc) <= 1e-12 * q);
  }
  for (double x : {-3.0, -0.5, 0.7}) CHECK(std::abs(pf(x).imag()) <= 1e-12 * std::abs(pf(x)));
}

TEST_CASE("evaluation at a pole is an error") {
  const auto pf = pade_to_partial_fractions(pade45());
  try {
    (void)pf(pf.poles[0]);
    FAIL("expected PoleEvaluation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleEvaluation);
  }
}

TEST_CASE("conjugate symmetry enforcement") {
  PartialFractionRational r;
  r.poles = {Complex(1, 2), Complex(1 + 1e-12, -2), Complex(3, 1e-14)};
  r.weights = {Complex(0.5, 1), Complex(0.5, -1 + 1e-13), Complex(2, 1e-15)};
  CHECK_FALSE(r.conjugate_closed());
  CHECK(enforce_conjugate_symmetry(r, 1e-8));
  CHECK(r.conjugate_closed());
  const auto groups = conjugate_groups(r);
  REQUIRE(groups.has_value());
  CHECK(groups->size() == 2);
  PartialFractionRational lonely;
  lonely.poles = {Complex(1, 2)};
  lonely.weights = {Complex(1, 0)};
  CHECK_FALSE(enforce_conjugate_symmetry(lonely, 1e-8));
}

TEST_CASE("sup error on rectangles") {
  SUBCASE("point rectangle at the origin") {
    CHECK(sup_error_on_rectangle(pade45(), Rectangle{0, 0, 0, 0}) == 0.0);
  }
  SUBCASE("constant one on [-1, 0]") {
    const auto one = [](Complex) { return Complex(1.0, 0.0); };
    const double e = sup_error_on_rectangle(one, {}, Rectangle{-1, 0, 0, 0});
    CHECK(e == doctest::Approx(1.1 * (1.0 - std::exp(-1.0))).epsilon(1e-12));
  }
  SUBCASE("pole inside the rectangle") {
    const auto pf = pade_to_partial_fractions(pade45());
    const Complex b = pf.poles[0];
    const Rectangle r{b.real() - 1, b.real() + 1, b.imag() - 1, b.imag() + 1};
    try {
      (void)sup_error_on_rectangle(ScaledRational{pf, 1}, r);
      FAIL("expected PoleInsideRegion");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PoleInsideRegion);
    }
  }
  SUBCASE("scaled pade on a wide rectangle, denser resampling") {
    const Rectangle r{-20, 0, -5, 5};
    const double target = 1e-6 / (1.0 + std::sqrt(2.0));
    const auto choice = select_scaling(r, target);
    PadeRational p = pade45();
    p.scaling = choice.s;
    CHECK(choice.sup_error <= target);
    CHECK(sup_error_on_rectangle(p, r, 5000, 1.0) <= choice.sup_error);
  }
}

TEST_CASE("scaled forms") {
  PadeRational p = pade45();
  p.scaling = 4;
  const Complex z(-3.0, 1.0);
  CHECK(std::abs(p(z) - ipow(pade45()(z / 4.0), 4)) <= 1e-15 * std::abs(p(z)));
  const ScaledRational sr{pade_to_partial_fractions(pade45()), 4};
  CHECK(std::abs(sr(z) - p(z)) <= 1e-12 * std::max(1.0, std::abs(p(z))));
  CHECK(sr.degree() == 20);
  const auto eff = sr.effective_poles();
  for (std::size_t k = 0; k < eff.size(); ++k) CHECK(eff[k] == 4.0 * sr.form.poles[k]);
  CHECK(ipow(Complex(2, 0), 10) == Complex(1024, 0));
  CHECK(ipow(Complex(0, 1), 3) == Complex(0, -1));
}

TEST_CASE("scaling selection") {
  CHECK(select_scaling(Rectangle{0, 0, 0, 0}, 1e-12).s == 1);
  CHECK(select_scaling(Rectangle{-1, 0, -1, 1}, 1e-6 / (1.0 + std::sqrt(2.0))).s == 1);
  const Rectangle wide{-200, 0, -20, 20};
  int prev = 0;
  for (double target : {1e-2, 1e-4, 1e-6, 1e-8}) {
    try {
      const int s = select_scaling(wide, target).s;
      CHECK(s >= prev);
      prev = s;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ScalingExhausted);
      prev = 1 << 30;
    }
  }
  try {
    (void)select_scaling(Rectangle{-2000, 0, -200, 200}, 1e-10);
    FAIL("expected ScalingExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ScalingExhausted);
  }
}

TEST_CASE("sub-pade certificates") {
  const Rectangle r{-8, 0, -3, 3};
  const auto a = certify_sub_pade(r, 1e-7);
  CHECK(a.method() == Method::SubPade);
  CHECK(a.sup_error_estimate() <= a.target());
  CHECK(a.degree() == 5 * a.rational().scaling);
  CHECK(a.rational().form.conjugate_closed());
  CHECK(sup_error_on_rectangle(a.rational(), r, 4 * kDefaultSamplesPerSide, 1.0) <=
        a.sup_error_estimate() / 1.1 * 1.2);
  for (double x : {-7.0, -1.0, 0.0}) CHECK(std::abs(a(x).imag()) <= 1e-12 * std::abs(a(x)));
}

TEST_CASE("method names") {
  CHECK(to_string(Method::SubPade) == "sub-pade");
  CHECK(to_string(Method::RatInterp) == "rat-interp");
  CHECK(parse_method("rat-interp") == Method::RatInterp);
  CHECK_THROWS_AS(parse_method("krylov"), Error);
}

TEST_CASE("certified approximant rejects estimates above target") {
  const ScaledRational sr{pade_to_partial_fractions(pade45()), 1};
  CHECK_THROWS_AS(CertifiedApproximant(sr, Rectangle{-1, 0, 0, 0}, 2e-6, 1e-6, Method::SubPade), Error);
}
