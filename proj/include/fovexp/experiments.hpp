#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fovexp/expmv.hpp"
#include "fovexp/fem.hpp"

namespace fovexp {

/// Generator parameters for one advection-diffusion test system.
struct ProblemSpec {
  Domain domain = Domain::Square;
  double d = 1e-1;
  int divisions = 30;  ///< square only
  int refine = 4;      ///< star only
};

struct GeneratedProblem {
  ProblemSpec spec;
  TriMesh mesh;
  AssembledSystem system;
};

GeneratedProblem generate_problem(const ProblemSpec& spec);

/// A pencil source for the sweep; tau = tau_factor * h_bar.
struct SweepMatrix {
  std::string shape;
  std::string element = "P1";
  double d = 0.0;
  double h_bar = 0.0;
  SparseMatrixd mass;
  SparseMatrixd stiffness;
  VectorXd b;
};

SweepMatrix sweep_matrix(const GeneratedProblem& p);

struct SweepConfig {
  std::vector<SweepMatrix> matrices;
  std::vector<double> tau_factors{1.0};
  std::vector<double> eps{1e-6};
  std::vector<Method> methods{Method::SubPade, Method::RatInterp};
  std::vector<RegionMode> modes{RegionMode::DenseOperator, RegionMode::Transformed};
  bool verify = true;  ///< run the dense oracle for measured_error
  ExpmvOptions options;
};

struct SweepRow {
  std::string shape;
  std::string element;
  double d = 0.0;
  Index n = 0;
  double h_bar = 0.0;
  double kappa_m = 0.0;
  double tau_factor = 0.0;
  Method method = Method::SubPade;
  RegionMode mode = RegionMode::Transformed;
  double eps = 0.0;
  std::optional<Index> degree;  ///< empty on failure
  std::optional<double> measured_error;
  std::optional<double> certified_bound;
  std::string status = "ok";  ///< "ok" or the failure kind
};

/// Rows ordered by matrix, tau factor, eps, method, mode (input order).
/// A failing run yields a row with degree "--" and never aborts the sweep.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// Column order of the sweep CSV.
inline constexpr const char* kSweepCsvHeader =
    "shape,element,d,n,h_bar,kappa_M,tau_factor,method,mode,eps,degree,measured_error,certified_bound,status";

std::string csv_row(const SweepRow& row);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace fovexp
