#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "fovexp/linalg.hpp"

namespace fovexp {

enum class Domain { Square, Star };
std::string_view to_string(Domain d) noexcept;
Domain parse_domain(std::string_view s);

using Point2 = std::array<double, 2>;

/// Triangulation with counterclockwise triangles and per-vertex boundary
/// flags. `outline` is the closed boundary polygon of the domain.
struct TriMesh {
  Domain domain = Domain::Square;
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary;
  std::vector<Point2> outline;
  double h_bar = 0.0;

  std::size_t interior_count() const;
};

double signed_area(const Point2& a, const Point2& b, const Point2& c) noexcept;

/// Unit square, (divisions + 1)^2 grid vertices, two triangles per cell split
/// along the (1, 1) diagonal. Every interior vertex has six neighbours.
TriMesh mesh_square(int divisions);

struct StarOptions {
  int points = 5;
  double r_outer = 2.0;
  double r_inner = 0.8;
  int refine = 4;
  int smoothing_sweeps = 5;
};

/// Star polygon centered at the origin with tips at radius r_outer, ear
/// clipped, refined `refine` times by edge midpoints, then Laplacian-smoothed
/// on interior vertices. A smoothing sweep that would invert a triangle is
/// rolled back and ends smoothing.
TriMesh mesh_star(const StarOptions& opts = {});

/// Mean length over the unique edge set.
double avg_edge_length(const TriMesh& mesh);

/// Unique undirected edges as (lo, hi) vertex pairs, sorted.
std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh);

struct AssembledSystem {
  SparseMatrixd mass;
  SparseMatrixd stiffness;
  VectorXd b0;
  std::vector<int> dof_vertex;  ///< mesh vertex of each unknown
  double d = 0.0;
  Point2 c{0.0, 0.0};
};

/// P1 Galerkin for u_t = d Lap u + c . grad u with homogeneous Dirichlet
/// data eliminated: M_ij = int phi_i phi_j,
/// K_ij = -d int grad phi_i . grad phi_j + int phi_i (c . grad phi_j).
AssembledSystem assemble_p1(const TriMesh& mesh, double d, const Point2& c = {1.0, 1.0});

/// Mass matrix over all vertices, boundary included.
SparseMatrixd assemble_full_mass(const TriMesh& mesh);

/// Initial condition interpolated at interior vertices.
VectorXd initial_vector(const TriMesh& mesh, Domain domain);
double initial_value(Domain domain, double x, double y);

}  // namespace fovexp
