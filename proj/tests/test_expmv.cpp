#include <doctest.h>

#include <cmath>

#include "fovexp/experiments.hpp"
#include "fovexp/expm.hpp"
#include "fovexp/expmv.hpp"
#include "test_support.hpp"

using namespace fovexp;
using test::to_sparse;

namespace {

const double kOnePlusSqrt2 = 1.0 + std::sqrt(2.0);

MatrixXd diag(std::initializer_list<double> v) {
  VectorXd d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d[i++] = x;
  return d.asDiagonal();
}

GeneratedProblem square(int divisions, double d) {
  ProblemSpec spec;
  spec.divisions = divisions;
  spec.d = d;
  return generate_problem(spec);
}

// Dense pencil with a nonnormal stiffness: negative definite symmetric part
// plus a strong skew part.
Pencil random_pencil(Index n, std::uint64_t seed, double tau) {
  const MatrixXd m = test::random_spd(n, seed, 3.0);
  const MatrixXd g = test::random_matrix(n, n, seed + 1);
  const MatrixXd k = -test::random_spd(n, seed + 2, 10.0) + 2.0 * (g - g.transpose());
  return Pencil(tau, to_sparse(m), to_sparse(k));
}

}  // namespace

TEST_CASE("partial fractions applied to the pencil") {
  const auto pf = pade_to_partial_fractions(pade45());
  SUBCASE("zero stiffness returns r(0) b") {
    const Pencil p(1.0, to_sparse(test::random_spd(6, 1)), SparseMatrixd(6, 6));
    const VectorXcd b = test::random_vector(6, 2).cast<Complex>();
    CHECK((apply_partial_fraction(pf, p, b) - b).norm() <= 1e-12 * b.norm());
  }
  SUBCASE("diagonal pencil is elementwise scalar evaluation") {
    const Pencil p(1.0, to_sparse(MatrixXd::Identity(2, 2)), to_sparse(diag({-1, -2})));
    VectorXcd b(2);
    b << 0.7, -1.3;
    const VectorXcd x = apply_partial_fraction(pf, p, b);
    CHECK(std::abs(x[0] - pf(-1.0) * b[0]) <= 1e-14);
    CHECK(std::abs(x[1] - pf(-2.0) * b[1]) <= 1e-14);
  }
  SUBCASE("random 50x50 against dense evaluation, both solvers") {
    const Pencil p = random_pencil(50, 10, 0.05);
    const VectorXcd b = test::random_vector(50, 13).cast<Complex>();
    const VectorXcd dense = rational_of_matrix({pf, 1}, dense_operator(p)) * b;
    for (ShiftSolver s : {ShiftSolver::Sparse, ShiftSolver::Dense}) {
      const VectorXcd x = apply_partial_fraction(pf, p, b, s);
      CHECK((x - dense).norm() <= 1e-10 * dense.norm());
    }
  }
  SUBCASE("complex b takes the unpaired path") {
    const Pencil p = random_pencil(30, 20, 0.05);
    const VectorXcd b = test::random_complex_matrix(30, 21).col(0);
    const VectorXcd dense = rational_of_matrix({pf, 1}, dense_operator(p)) * b;
    CHECK((apply_partial_fraction(pf, p, b) - dense).norm() <= 1e-10 * dense.norm());
  }
  SUBCASE("size mismatch") {
    const Pencil p(1.0, to_sparse(MatrixXd::Identity(2, 2)), to_sparse(diag({-1, -2})));
    CHECK_THROWS_AS(apply_partial_fraction(pf, p, VectorXcd::Ones(3)), Error);
  }
}

TEST_CASE("real input gives an exactly real output") {
  const auto g = square(12, 1e-2);
  const Pencil p(g.mesh.h_bar, g.system.mass, g.system.stiffness);
  const VectorXcd b = g.system.b0.cast<Complex>();
  const auto a = certify_rat_interp(bounding_rectangle(p).region, 1e-8);
  const VectorXcd x = apply_scaled_rational(a.rational(), p, b);
  CHECK(x.imag().norm() <= 1e-12 * x.norm());
  const VectorXcd xs = apply_scaled_pade(pade45(), p, b);
  CHECK(xs.imag().norm() <= 1e-12 * xs.norm());
}

TEST_CASE("scaled pade application") {
  SUBCASE("s = 1 is a single partial-fraction application") {
    const Pencil p = random_pencil(20, 30, 0.1);
    const VectorXcd b = test::random_vector(20, 31).cast<Complex>();
    const VectorXcd x1 = apply_scaled_pade(pade45(), p, b);
    const VectorXcd x2 = apply_partial_fraction(pade_to_partial_fractions(pade45()), p, b);
    CHECK((x1 - x2).norm() == 0.0);
  }
  SUBCASE("zero stiffness, any s") {
    const Pencil p(1.0, to_sparse(test::random_spd(5, 3)), SparseMatrixd(5, 5));
    const VectorXcd b = test::random_vector(5, 4).cast<Complex>();
    PadeRational pade = pade45();
    pade.scaling = 7;
    CHECK((apply_scaled_pade(pade, p, b) - b).norm() <= 1e-12 * b.norm());
  }
  SUBCASE("diagonal pencil with s = 4") {
    const Pencil p(1.0, to_sparse(MatrixXd::Identity(3, 3)), to_sparse(diag({-1, -5, -20})));
    PadeRational pade = pade45();
    pade.scaling = 4;
    VectorXcd b(3);
    b << 1.0, 2.0, -3.0;
    const VectorXcd x = apply_scaled_pade(pade, p, b);
    for (Index i = 0; i < 3; ++i) {
      const double lambda = -std::array{1.0, 5.0, 20.0}[static_cast<std::size_t>(i)];
      const Complex expected = ipow(pade45()(lambda / 4.0), 4) * b[i];
      CHECK(std::abs(x[i] - expected) <= 1e-13 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("singular shift is reported") {
  PartialFractionRational r;
  r.poles = {Complex(-1.0, 0.0)};
  r.weights = {Complex(1.0, 0.0)};
  const Pencil p(1.0, to_sparse(MatrixXd::Identity(2, 2)), to_sparse(diag({-1, -2})));
  try {
    (void)apply_partial_fraction(r, p, VectorXcd::Ones(2));
    FAIL("expected SingularShift");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularShift);
  }
}

TEST_CASE("controlled expmv on a diagonal pencil") {
  const Pencil p(1.0, to_sparse(MatrixXd::Identity(2, 2)), to_sparse(diag({-0.5, -3.0})));
  VectorXcd b(2);
  b << 1.0, 1.0;
  VectorXcd exact(2);
  exact << std::exp(-0.5), std::exp(-3.0);
  for (Method m : {Method::SubPade, Method::RatInterp}) {
    const auto res = expmv_controlled({p, b, 1e-6, m});
    CHECK((res.x - exact).norm() <= 1e-6 * b.norm());
    const auto& c = res.certificate;
    CHECK(c.ok());
    CHECK(c.achieved <= c.scalar_target);
    CHECK(c.scalar_target == doctest::Approx(1e-6 / (kOnePlusSqrt2 * std::sqrt(c.cond.kappa_safe))));
    CHECK(c.certified_bound() <= 1e-6);
    if (m == Method::SubPade) CHECK(c.degree == 5 * c.scaling);
    CHECK(c.lhp_certified);
  }
}

TEST_CASE("controlled expmv on a square P1 pencil") {
  const auto g = square(21, 1e-1);
  REQUIRE(g.system.mass.rows() == 400);
  const Pencil p(g.mesh.h_bar, g.system.mass, g.system.stiffness);
  const VectorXcd b = g.system.b0.cast<Complex>();
  const VectorXcd reference = expmv_dense_oracle(p, b);
  for (Method m : {Method::SubPade, Method::RatInterp}) {
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
      const auto res = expmv_controlled({p, b, eps, m});
      const double err = (res.x - reference).norm() / b.norm();
      CHECK(err <= eps);
      CHECK(err <= res.certificate.certified_bound());
      CHECK(res.certificate.certified_bound() <= eps);
    }
  }
}

TEST_CASE("controlled expmv on a square P1 pencil at ten times the step") {
  const auto g = square(21, 1e-1);
  const Pencil p(10.0 * g.mesh.h_bar, g.system.mass, g.system.stiffness);
  const VectorXcd b = g.system.b0.cast<Complex>();
  const VectorXcd reference = expmv_dense_oracle(p, b);
  for (Method m : {Method::SubPade, Method::RatInterp}) {
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
      try {
        const auto res = expmv_controlled({p, b, eps, m});
        CHECK((res.x - reference).norm() <= eps * b.norm());
      } catch (const ExpmvError& e) {
        CHECK(m == Method::RatInterp);
        CHECK(eps == 1e-8);
        CHECK(e.certificate().failure == ErrorKind::RefitFailed);
      }
    }
  }
}

TEST_CASE("strict mode divides by kappa") {
  const auto g = square(10, 1e-1);
  const Pencil p(g.mesh.h_bar, g.system.mass, g.system.stiffness);
  ExpmvRequest req{p, g.system.b0.cast<Complex>(), 1e-6, Method::SubPade};
  req.options.strict_kappa = true;
  const auto c = expmv_controlled(req).certificate;
  CHECK(c.scalar_target == doctest::Approx(1e-6 / (kOnePlusSqrt2 * c.cond.kappa_safe)));
}

TEST_CASE("dense-operator mode uses the rectangle of A itself") {
  const auto g = square(10, 1e-2);
  const Pencil p(g.mesh.h_bar, g.system.mass, g.system.stiffness);
  ExpmvRequest req{p, g.system.b0.cast<Complex>(), 1e-6, Method::RatInterp};
  req.options.region = RegionMode::DenseOperator;
  const auto res = expmv_controlled(req);
  CHECK(res.certificate.scalar_target == doctest::Approx(1e-6 / kOnePlusSqrt2));
  const auto ev = Eigen::EigenSolver<MatrixXd>(dense_operator(p), false).eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) CHECK(res.certificate.rectangle.region.contains(ev[i]));
  CHECK(oracle_relative_error(p, req.b, res.x) <= 1e-6);
  CHECK(parse_region_mode("i") == RegionMode::DenseOperator);
  CHECK(to_string(RegionMode::Transformed) == "ii");
  CHECK_THROWS_AS(parse_region_mode("iii"), Error);
}

TEST_CASE("exhaustion carries the partial certificate") {
  const auto g = square(10, 1e-1);
  const Pencil p(g.mesh.h_bar, g.system.mass, g.system.stiffness);
  ExpmvRequest req{p, g.system.b0.cast<Complex>(), 1e-8, Method::SubPade};
  req.options.approx.s_max = 1;
  req.options.rectangle = BoundingRectangle::inflate({-500, 0, -50, 50}, 1e-10);
  req.options.cond = CondEstimate{};
  try {
    (void)expmv_controlled(req);
    FAIL("expected ScalingExhausted");
  } catch (const ExpmvError& e) {
    CHECK(e.kind() == ErrorKind::ScalingExhausted);
    CHECK(e.certificate().failure == ErrorKind::ScalingExhausted);
    CHECK_FALSE(e.certificate().ok());
    CHECK(e.certificate().scalar_target > 0.0);
  }
}

TEST_CASE("request validation") {
  const Pencil p(1.0, to_sparse(MatrixXd::Identity(2, 2)), to_sparse(diag({-1, -2})));
  CHECK_THROWS_AS(expmv_controlled({p, VectorXcd::Ones(2), 0.0, Method::SubPade}), Error);
  CHECK_THROWS_AS(expmv_controlled({p, VectorXcd::Ones(3), 1e-6, Method::SubPade}), Error);
}

TEST_CASE("norm inequality at desk scale") {
  SUBCASE("symmetric negative definite K with M = I") {
    const Pencil p(1.0, to_sparse(MatrixXd::Identity(20, 20)), to_sparse(-test::random_spd(20, 70, 8.0)));
    const auto a = certify_sub_pade(bounding_rectangle(p).region, 1e-8);
    const auto rep = theorem1_bound_check(p, a);
    CHECK(rep.holds);
    CHECK(rep.kappa == doctest::Approx(1.0));
    CHECK(rep.lhs <= a.sup_error_estimate());
  }
  SUBCASE("nonnormal 20x20") {
    const Pencil p = random_pencil(20, 80, 0.3);
    for (Method m : {Method::SubPade, Method::RatInterp}) {
      const auto rep = theorem1_bound_check(p, certify(m, bounding_rectangle(p).region, 1e-9));
      CHECK(rep.holds);
      CHECK(rep.lhs <= rep.rhs);
    }
  }
  SUBCASE("tau sweep on a generated pencil") {
    const auto g = square(9, 1e-3);
    const Pencil base(g.mesh.h_bar, g.system.mass, g.system.stiffness);
    for (double f : {1.0, 5.0, 10.0}) {
      const Pencil p = base.with_tau(f * g.mesh.h_bar);
      for (Method m : {Method::SubPade, Method::RatInterp}) {
        const auto rep = theorem1_bound_check(p, certify(m, bounding_rectangle(p).region, 1e-7));
        CHECK(rep.holds);
      }
    }
  }
  SUBCASE("rectangle must enclose the pencil") {
    const Pencil p = random_pencil(10, 90, 0.3);
    const auto a = certify_sub_pade(Rectangle{-0.01, 0, -0.01, 0.01}, 1e-8);
    CHECK_THROWS_AS(theorem1_bound_check(p, a), Error);
  }
}
