#include "fovexp/experiments.hpp"

#include <cstdio>
#include <ostream>

namespace fovexp {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "--"; }

}  // namespace

GeneratedProblem generate_problem(const ProblemSpec& spec) {
  GeneratedProblem p;
  p.spec = spec;
  if (spec.domain == Domain::Square) {
    p.mesh = mesh_square(spec.divisions);
  } else {
    StarOptions so;
    so.refine = spec.refine;
    p.mesh = mesh_star(so);
  }
  p.system = assemble_p1(p.mesh, spec.d);
  return p;
}

SweepMatrix sweep_matrix(const GeneratedProblem& p) {
  SweepMatrix m;
  m.shape = std::string(to_string(p.spec.domain));
  m.d = p.spec.d;
  m.h_bar = p.mesh.h_bar;
  m.mass = p.system.mass;
  m.stiffness = p.system.stiffness;
  m.b = p.system.b0;
  return m;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  std::vector<SweepRow> rows;
  for (const auto& mat : cfg.matrices) {
    require(mat.h_bar > 0.0, ErrorKind::InvalidArgument, "sweep: h_bar must be positive");
    const double kappa = cond_estimate(mat.mass, std::nullopt, cfg.options.eig).kappa_tilde;
    const VectorXcd b = mat.b.cast<Complex>();
    for (double tf : cfg.tau_factors) {
      const Pencil pencil(tf * mat.h_bar, mat.mass, mat.stiffness);
      std::optional<VectorXcd> reference;
      if (cfg.verify) reference = expmv_dense_oracle(pencil, b);
      std::vector<std::optional<PencilBounds>> bounds;
      std::vector<std::string> bound_failure;
      for (RegionMode mode : cfg.modes) {
        try {
          bounds.emplace_back(pencil_bounds(pencil, mode, cfg.options));
          bound_failure.emplace_back();
        } catch (const Error& e) {
          bounds.emplace_back();
          bound_failure.emplace_back(to_string(e.kind()));
        }
      }
      for (double eps : cfg.eps) {
        for (Method method : cfg.methods) {
          for (std::size_t mi = 0; mi < cfg.modes.size(); ++mi) {
            const RegionMode mode = cfg.modes[mi];
            SweepRow row;
            row.shape = mat.shape;
            row.element = mat.element;
            row.d = mat.d;
            row.n = pencil.size();
            row.h_bar = mat.h_bar;
            row.kappa_m = kappa;
            row.tau_factor = tf;
            row.method = method;
            row.mode = mode;
            row.eps = eps;
            if (!bounds[mi]) {
              row.status = bound_failure[mi];
              rows.push_back(std::move(row));
              continue;
            }
            ExpmvRequest req{pencil, b, eps, method, cfg.options};
            req.options.region = mode;
            req.options.rectangle = bounds[mi]->rectangle;
            req.options.cond = bounds[mi]->cond;
            try {
              const ExpmvResult res = expmv_controlled(req);
              row.degree = res.certificate.degree;
              row.certified_bound = res.certificate.certified_bound();
              if (reference) row.measured_error = (res.x - *reference).norm() / b.norm();
            } catch (const Error& e) {
              row.status = std::string(to_string(e.kind()));
            }
            rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return rows;
}

std::string csv_row(const SweepRow& r) {
  std::string s;
  s += r.shape + ',' + r.element + ',' + fmt(r.d) + ',' + std::to_string(r.n) + ',' + fmt(r.h_bar) + ',' +
       fmt(r.kappa_m) + ',' + fmt(r.tau_factor) + ',' + std::string(to_string(r.method)) + ',' +
       std::string(to_string(r.mode)) + ',' + fmt(r.eps) + ',';
  s += r.degree ? std::to_string(*r.degree) : "--";
  s += ',' + fmt_opt(r.measured_error) + ',' + fmt_opt(r.certified_bound) + ',' + r.status;
  return s;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

}  // namespace fovexp
