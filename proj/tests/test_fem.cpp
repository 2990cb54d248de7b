#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fovexp/fem.hpp"
#include "fovexp/spectral_bounds.hpp"

using namespace fovexp;

namespace {

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  const double t = std::clamp(((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
  return std::hypot(p[0] - a[0] - t * vx, p[1] - a[1] - t * vy);
}

double outline_distance(const TriMesh& m, const Point2& p) {
  double best = 1e300;
  for (std::size_t i = 0; i < m.outline.size(); ++i)
    best = std::min(best, segment_distance(p, m.outline[i], m.outline[(i + 1) % m.outline.size()]));
  return best;
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

double brute_force_h_bar(const TriMesh& m) {
  std::vector<std::pair<int, int>> seen;
  double sum = 0.0;
  for (const auto& t : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      const std::pair<int, int> key{std::min(t[e], t[(e + 1) % 3]), std::max(t[e], t[(e + 1) % 3])};
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      const auto& a = m.vertices[key.first];
      const auto& b = m.vertices[key.second];
      sum += std::hypot(a[0] - b[0], a[1] - b[1]);
    }
  }
  return sum / static_cast<double>(seen.size());
}

void check_mesh_invariants(const TriMesh& m) {
  for (const auto& t : m.triangles) CHECK(signed_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]) > 0.0);
  REQUIRE(m.boundary.size() == m.vertices.size());
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    const double dist = outline_distance(m, m.vertices[v]);
    if (m.boundary[v]) {
      CHECK(dist <= 1e-12);
    } else {
      CHECK(dist > 1e-12);
    }
  }
  double total = 0.0;
  for (const auto& t : m.triangles) total += signed_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
  CHECK(total == doctest::Approx(polygon_area(m.outline)).epsilon(1e-12));
  CHECK(m.h_bar == doctest::Approx(brute_force_h_bar(m)).epsilon(1e-13));
}

}  // namespace

TEST_CASE("square mesh counts and geometry") {
  CHECK_THROWS_AS(mesh_square(1), Error);
  const auto m = mesh_square(2);
  CHECK(m.vertices.size() == 9);
  CHECK(m.triangles.size() == 8);
  CHECK(std::count(m.boundary.begin(), m.boundary.end(), true) == 8);
  CHECK(m.interior_count() == 1);
  for (int n : {2, 5, 12}) {
    const auto mesh = mesh_square(n);
    check_mesh_invariants(mesh);
    for (const auto& t : mesh.triangles)
      CHECK(signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) ==
            doctest::Approx(1.0 / (2.0 * n * n)).epsilon(1e-12));
    const double h = (2.0 * (n + 1) + n * std::sqrt(2.0)) / (3.0 * n * n + 2.0 * n);
    CHECK(mesh.h_bar == doctest::Approx(h).epsilon(1e-13));
    CHECK(unique_edges(mesh).size() == static_cast<std::size_t>(3 * n * n + 2 * n));
  }
}

TEST_CASE("edge length of a single triangle") {
  TriMesh m;
  m.vertices = {{0, 0}, {3, 0}, {0, 4}};
  m.triangles = {{0, 1, 2}};
  m.boundary = {true, true, true};
  CHECK(avg_edge_length(m) == doctest::Approx(4.0));
}

TEST_CASE("star mesh") {
  SUBCASE("three points, no refinement") {
    StarOptions o;
    o.points = 3;
    o.refine = 0;
    const auto m = mesh_star(o);
    CHECK(m.vertices.size() == 6);
    CHECK(m.triangles.size() == 4);
    CHECK(m.interior_count() == 0);
    check_mesh_invariants(m);
  }
  SUBCASE("refinement quadruples triangles and halves every edge") {
    StarOptions o;
    o.smoothing_sweeps = 0;
    TriMesh prev;
    for (int r = 0; r <= 3; ++r) {
      o.refine = r;
      const auto m = mesh_star(o);
      check_mesh_invariants(m);
      if (r > 0) {
        CHECK(m.triangles.size() == 4 * prev.triangles.size());
        std::vector<double> halves;
        for (const auto& e : unique_edges(prev)) {
          const auto& a = prev.vertices[e[0]];
          const auto& b = prev.vertices[e[1]];
          halves.push_back(0.5 * std::hypot(a[0] - b[0], a[1] - b[1]));
        }
        for (const auto& e : unique_edges(m)) {
          const auto& a = m.vertices[e[0]];
          const auto& b = m.vertices[e[1]];
          const double len = std::hypot(a[0] - b[0], a[1] - b[1]);
          CHECK(std::any_of(halves.begin(), halves.end(), [&](double h) { return std::abs(h - len) <= 1e-12; }));
        }
        // The mean is only near half: interior midlines weight short edges differently.
        CHECK(m.h_bar == doctest::Approx(0.5 * prev.h_bar).epsilon(0.03));
      }
      prev = m;
    }
  }
  SUBCASE("smoothed default mesh") {
    const auto m = mesh_star();
    check_mesh_invariants(m);
    CHECK(m.interior_count() >= 300);
    CHECK(m.interior_count() <= 2500);
  }
  SUBCASE("invalid parameters") {
    StarOptions o;
    o.points = 2;
    CHECK_THROWS_AS(mesh_star(o), Error);
    o.points = 5;
    o.r_inner = 3.0;
    CHECK_THROWS_AS(mesh_star(o), Error);
  }
}

TEST_CASE("element matrices on the reference triangle") {
  TriMesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.boundary = {true, true, true};
  const MatrixXd full = assemble_full_mass(m);
  MatrixXd expected(3, 3);
  expected << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expected /= 24.0;
  CHECK((full - expected).cwiseAbs().maxCoeff() <= 1e-16);
  CHECK_THROWS_AS(assemble_p1(m, 0.1), Error);
}

TEST_CASE("assembled systems") {
  const auto sq = mesh_square(8);
  StarOptions so;
  so.refine = 2;
  const auto st = mesh_star(so);
  for (const TriMesh* mesh : {&sq, &st}) {
    const double area = polygon_area(mesh->outline);
    CHECK(MatrixXd(assemble_full_mass(*mesh)).sum() == doctest::Approx(area).epsilon(1e-10));

    {  // pure diffusion is symmetric negative definite
      const auto sys = assemble_p1(*mesh, 0.3, {0.0, 0.0});
      const MatrixXd k = sys.stiffness;
      CHECK(relative_asymmetry(k) <= 1e-15);
      CHECK(dense_sym_eig(0.5 * (k + k.transpose()), false).values.maxCoeff() < 0.0);
    }
    {  // advection only adds a skew part
      const auto diff = assemble_p1(*mesh, 0.1, {0.0, 0.0});
      const auto sys = assemble_p1(*mesh, 0.1, {1.0, 1.0});
      const auto parts = split(sys.stiffness);
      const MatrixXd d = parts.sym;
      CHECK((d - MatrixXd(diff.stiffness)).cwiseAbs().maxCoeff() <= 1e-12 * MatrixXd(diff.stiffness).cwiseAbs().maxCoeff());
      CHECK(dense_sym_eig(d, false).values.maxCoeff() < 0.0);
      CHECK(MatrixXd(parts.skew).norm() > 0.0);
    }
    {  // mass matrix is SPD and well conditioned
      const auto sys = assemble_p1(*mesh, 0.1);
      CHECK_NOTHROW(cholesky(MatrixXd(sys.mass)));
      const double k = cond_estimate(sys.mass).kappa_tilde;
      CHECK(k >= 3.0);
      CHECK(k <= 6.0);
    }
    {  // unknowns are the interior vertices
      const auto sys = assemble_p1(*mesh, 0.1);
      CHECK(sys.mass.rows() == static_cast<Index>(mesh->interior_count()));
      for (int v : sys.dof_vertex) CHECK_FALSE(mesh->boundary[static_cast<std::size_t>(v)]);
      CHECK(sys.b0.size() == sys.mass.rows());
    }
  }
}

TEST_CASE("lowest diffusion mode on the unit square") {
  const double d = 0.1;
  const auto sys = assemble_p1(mesh_square(64), d, {0.0, 0.0});
  EigenSolveOptions o;
  o.rel_resid_tol = 1e-8;
  const double top = extreme_eigs_sym_pencil(sys.stiffness, sys.mass, Extreme::Max, o).value;
  const double expected = -2.0 * std::numbers::pi * std::numbers::pi * d;
  CHECK(std::abs(top - expected) <= 0.05 * std::abs(expected));
}

TEST_CASE("initial condition") {
  CHECK(initial_value(Domain::Square, 0.5, 0.5) == 1.0);
  CHECK(initial_value(Domain::Square, 0.0, 0.5) == doctest::Approx(std::exp(-std::sinh(4.375))).epsilon(1e-12));
  CHECK(initial_value(Domain::Square, 0.0, 0.5) == doctest::Approx(5.8e-18).epsilon(0.02));
  CHECK(initial_value(Domain::Star, 0.0, 0.0) == 1.0);
  CHECK(initial_value(Domain::Star, 1.0, -1.0) == doctest::Approx(std::exp(-2.0 * std::sinh(70.0 / 16.0))));
  const auto m = mesh_square(4);
  const VectorXd b = initial_vector(m, Domain::Square);
  CHECK(b.size() == 9);
  CHECK(b[4] == 1.0);
}

TEST_CASE("domain names") {
  CHECK(parse_domain("star") == Domain::Star);
  CHECK(to_string(Domain::Square) == "square");
  CHECK_THROWS_AS(parse_domain("disk"), Error);
}
