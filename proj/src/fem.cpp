#include "fovexp/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace fovexp {

namespace {

using Triangle = std::array<int, 3>;

bool inside_or_on(const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
  return signed_area(a, b, p) >= 0.0 && signed_area(b, c, p) >= 0.0 && signed_area(c, a, p) >= 0.0;
}

double min_angle(const Point2& a, const Point2& b, const Point2& c) {
  const auto angle = [](const Point2& p, const Point2& q, const Point2& r) {
    const double ux = q[0] - p[0], uy = q[1] - p[1], vx = r[0] - p[0], vy = r[1] - p[1];
    return std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

// Ear clipping of a simple counterclockwise polygon. Each step clips the
// valid ear with the largest minimum angle (lowest ring position on ties).
std::vector<Triangle> ear_clip(const std::vector<Point2>& poly) {
  std::vector<int> ring(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) ring[i] = static_cast<int>(i);
  std::vector<Triangle> out;
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    std::size_t best = m;
    double best_angle = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const int a = ring[(i + m - 1) % m], b = ring[i], c = ring[(i + 1) % m];
      if (signed_area(poly[a], poly[b], poly[c]) <= 0.0) continue;
      bool empty = true;
      for (int v : ring) {
        if (v == a || v == b || v == c) continue;
        if (inside_or_on(poly[v], poly[a], poly[b], poly[c])) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      const double q = min_angle(poly[a], poly[b], poly[c]);
      if (q > best_angle) {
        best_angle = q;
        best = i;
      }
    }
    require(best < m, ErrorKind::DegenerateMesh, "ear clipping found no ear; polygon is not simple");
    out.push_back({ring[(best + m - 1) % m], ring[best], ring[(best + 1) % m]});
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(best));
  }
  out.push_back({ring[0], ring[1], ring[2]});
  return out;
}

void refine_midpoints(TriMesh& mesh) {
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Point2& pa = mesh.vertices[a];
    const Point2& pb = mesh.vertices[b];
    const int idx = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])});
    mesh.boundary.push_back(edge_count.at(key) == 1);
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<Triangle> next;
  next.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    next.push_back({t[0], ab, ca});
    next.push_back({ab, t[1], bc});
    next.push_back({ca, bc, t[2]});
    next.push_back({ab, bc, ca});
  }
  mesh.triangles = std::move(next);
}

bool all_positive(const TriMesh& mesh) {
  return std::all_of(mesh.triangles.begin(), mesh.triangles.end(), [&](const Triangle& t) {
    return signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0;
  });
}

void smooth(TriMesh& mesh, int sweeps) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<std::vector<int>> nbr(nv);
  for (const auto& e : unique_edges(mesh)) {
    nbr[e[0]].push_back(e[1]);
    nbr[e[1]].push_back(e[0]);
  }
  for (int s = 0; s < sweeps; ++s) {
    std::vector<Point2> moved = mesh.vertices;
    for (std::size_t v = 0; v < nv; ++v) {
      if (mesh.boundary[v] || nbr[v].empty()) continue;
      Point2 acc{0.0, 0.0};
      for (int u : nbr[v]) {
        acc[0] += mesh.vertices[u][0];
        acc[1] += mesh.vertices[u][1];
      }
      moved[v] = {acc[0] / nbr[v].size(), acc[1] / nbr[v].size()};
    }
    std::swap(mesh.vertices, moved);
    if (!all_positive(mesh)) {
      std::swap(mesh.vertices, moved);
      return;
    }
  }
}

// Gradients of the three barycentric hat functions on a triangle of area `area`.
std::array<Point2, 3> hat_gradients(const Point2& p0, const Point2& p1, const Point2& p2, double area) {
  const double s = 1.0 / (2.0 * area);
  return {{{(p1[1] - p2[1]) * s, (p2[0] - p1[0]) * s},
           {(p2[1] - p0[1]) * s, (p0[0] - p2[0]) * s},
           {(p0[1] - p1[1]) * s, (p1[0] - p0[0]) * s}}};
}

double checked_area(const TriMesh& mesh, const Triangle& t) {
  const double a = signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  require(a > 0.0, ErrorKind::DegenerateMesh, "triangle with non-positive signed area");
  return a;
}

}  // namespace

std::string_view to_string(Domain d) noexcept { return d == Domain::Square ? "square" : "star"; }

Domain parse_domain(std::string_view s) {
  if (s == "square") return Domain::Square;
  if (s == "star") return Domain::Star;
  throw Error(ErrorKind::InvalidArgument, "unknown domain '" + std::string(s) + "' (expected square or star)");
}

std::size_t TriMesh::interior_count() const {
  return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), false));
}

double signed_area(const Point2& a, const Point2& b, const Point2& c) noexcept {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

TriMesh mesh_square(int divisions) {
  require(divisions >= 2, ErrorKind::InvalidArgument, "mesh_square: divisions must be >= 2");
  const int d = divisions;
  TriMesh mesh;
  mesh.domain = Domain::Square;
  mesh.vertices.reserve(static_cast<std::size_t>((d + 1) * (d + 1)));
  for (int j = 0; j <= d; ++j) {
    for (int i = 0; i <= d; ++i) {
      mesh.vertices.push_back({static_cast<double>(i) / d, static_cast<double>(j) / d});
      mesh.boundary.push_back(i == 0 || i == d || j == 0 || j == d);
    }
  }
  auto id = [d](int i, int j) { return j * (d + 1) + i; };
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  mesh.outline = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  mesh.h_bar = avg_edge_length(mesh);
  return mesh;
}

TriMesh mesh_star(const StarOptions& opts) {
  require(opts.points >= 3, ErrorKind::InvalidArgument, "mesh_star: points must be >= 3");
  require(opts.r_outer > opts.r_inner && opts.r_inner > 0.0, ErrorKind::InvalidArgument,
          "mesh_star: need r_outer > r_inner > 0");
  require(opts.refine >= 0 && opts.smoothing_sweeps >= 0, ErrorKind::InvalidArgument,
          "mesh_star: refine and smoothing sweeps must be >= 0");
  TriMesh mesh;
  mesh.domain = Domain::Star;
  const int nv = 2 * opts.points;
  for (int k = 0; k < nv; ++k) {
    const double theta = 0.5 * std::numbers::pi + k * std::numbers::pi / opts.points;
    const double r = (k % 2 == 0) ? opts.r_outer : opts.r_inner;
    mesh.outline.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  mesh.vertices = mesh.outline;
  mesh.boundary.assign(mesh.vertices.size(), true);
  mesh.triangles = ear_clip(mesh.outline);
  for (const auto& t : mesh.triangles) checked_area(mesh, t);
  for (int r = 0; r < opts.refine; ++r) refine_midpoints(mesh);
  smooth(mesh, opts.smoothing_sweeps);
  mesh.h_bar = avg_edge_length(mesh);
  return mesh;
}

std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh) {
  std::vector<std::array<int, 2>> edges;
  edges.reserve(3 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double avg_edge_length(const TriMesh& mesh) {
  const auto edges = unique_edges(mesh);
  require(!edges.empty(), ErrorKind::DegenerateMesh, "avg_edge_length: mesh has no edges");
  double sum = 0.0;
  for (const auto& e : edges) {
    const Point2& a = mesh.vertices[e[0]];
    const Point2& b = mesh.vertices[e[1]];
    sum += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return sum / static_cast<double>(edges.size());
}

AssembledSystem assemble_p1(const TriMesh& mesh, double d, const Point2& c) {
  require(d > 0.0, ErrorKind::InvalidArgument, "assemble_p1: d must be positive");
  require(mesh.boundary.size() == mesh.vertices.size(), ErrorKind::DimensionMismatch,
          "assemble_p1: boundary flags do not match vertices");
  AssembledSystem sys;
  sys.d = d;
  sys.c = c;
  std::vector<int> dof(mesh.vertices.size(), -1);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.boundary[v]) {
      dof[v] = static_cast<int>(sys.dof_vertex.size());
      sys.dof_vertex.push_back(static_cast<int>(v));
    }
  }
  const Index n = static_cast<Index>(sys.dof_vertex.size());
  require(n > 0, ErrorKind::DegenerateMesh, "assemble_p1: mesh has no interior vertices");

  std::vector<Eigen::Triplet<double>> mt, kt;
  mt.reserve(9 * mesh.triangles.size());
  kt.reserve(9 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const double area = checked_area(mesh, t);
    const auto g = hat_gradients(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], area);
    for (int i = 0; i < 3; ++i) {
      const int row = dof[t[i]];
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int col = dof[t[j]];
        if (col < 0) continue;
        mt.emplace_back(row, col, area / 12.0 * (i == j ? 2.0 : 1.0));
        const double diffusion = -d * area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
        const double advection = area / 3.0 * (c[0] * g[j][0] + c[1] * g[j][1]);
        kt.emplace_back(row, col, diffusion + advection);
      }
    }
  }
  sys.mass.resize(n, n);
  sys.mass.setFromTriplets(mt.begin(), mt.end());
  sys.stiffness.resize(n, n);
  sys.stiffness.setFromTriplets(kt.begin(), kt.end());
  sys.mass.makeCompressed();
  sys.stiffness.makeCompressed();
  sys.b0 = initial_vector(mesh, mesh.domain);
  return sys;
}

SparseMatrixd assemble_full_mass(const TriMesh& mesh) {
  const Index nv = static_cast<Index>(mesh.vertices.size());
  std::vector<Eigen::Triplet<double>> mt;
  mt.reserve(9 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const double area = checked_area(mesh, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mt.emplace_back(t[i], t[j], area / 12.0 * (i == j ? 2.0 : 1.0));
  }
  SparseMatrixd m(nv, nv);
  m.setFromTriplets(mt.begin(), mt.end());
  return m;
}

double initial_value(Domain domain, double x, double y) {
  const auto q = [](double s) { return std::sinh(70.0 * s * s * s * s); };
  if (domain == Domain::Square) return std::exp(-q(x - 0.5) - q(y - 0.5));
  return std::exp(-q(0.5 * x) - q(0.5 * y));
}

VectorXd initial_vector(const TriMesh& mesh, Domain domain) {
  VectorXd b(static_cast<Index>(mesh.interior_count()));
  Index k = 0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (mesh.boundary[v]) continue;
    b[k++] = initial_value(domain, mesh.vertices[v][0], mesh.vertices[v][1]);
  }
  return b;
}

}  // namespace fovexp
