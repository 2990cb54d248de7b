#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fovexp/experiments.hpp"
#include "fovexp/expmv.hpp"
#include "fovexp/matrix_market.hpp"
#include "fovexp/serialize.hpp"

namespace fs = std::filesystem;
using namespace fovexp;
using io::Json;

namespace {

struct Args {
  std::string m_path, k_path, b_path;
  std::string domain = "square";
  int divisions = 30;
  int refine = 4;
  double d = 1e-1;
  double tau_factor = 1.0;
  std::optional<double> tau;
  std::optional<double> h_bar;
  double eps = 1e-6;
  std::string method = "sub-pade";
  std::string mode = "ii";
  bool verify = false;
  std::string out;
  std::uint64_t seed = 0;
  std::string config;
  // Solver and sampling options; settable from the JSON config only.
  int s_max = 64;
  int m_max = 128;
  int samples_per_side = kDefaultSamplesPerSide;
  double rel_resid_tol = 1e-3;
  bool strict_kappa = false;
  std::string solver = "sparse";
};

void take_solver_options(const Json& j, Args& a) {
  a.s_max = j.value("s_max", a.s_max);
  a.m_max = j.value("m_max", a.m_max);
  a.samples_per_side = j.value("samples_per_side", a.samples_per_side);
  a.rel_resid_tol = j.value("rel_resid_tol", a.rel_resid_tol);
  a.strict_kappa = j.value("strict_kappa", a.strict_kappa);
  a.solver = j.value("solver", a.solver);
  require(a.solver == "sparse" || a.solver == "dense", ErrorKind::InvalidArgument,
          "solver must be sparse or dense");
}

bool given(CLI::App& cmd, const char* flag) {
  const CLI::Option* opt = cmd.get_option_no_throw(flag);
  return opt != nullptr && opt->count() > 0;
}

// Fills options that were not given on the command line from the JSON config.
void apply_config(CLI::App& cmd, Args& a) {
  if (a.config.empty()) return;
  const Json j = io::read_json(a.config);
  auto take = [&](const char* key, const char* flag, auto& field) {
    if (j.contains(key) && !given(cmd, flag)) j.at(key).get_to(field);
  };
  take("m", "--m", a.m_path);
  take("k", "--k", a.k_path);
  take("b", "--b", a.b_path);
  take("domain", "--domain", a.domain);
  take("divisions", "--divisions", a.divisions);
  take("refine", "--refine", a.refine);
  take("d", "--d", a.d);
  take("tau_factor", "--tau-factor", a.tau_factor);
  take("eps", "--eps", a.eps);
  take("method", "--method", a.method);
  take("mode", "--mode", a.mode);
  take("verify", "--verify", a.verify);
  take("out", "--out", a.out);
  take("seed", "--seed", a.seed);
  if (j.contains("tau") && !given(cmd, "--tau")) a.tau = j.at("tau").get<double>();
  if (j.contains("h_bar") && !given(cmd, "--h-bar")) a.h_bar = j.at("h_bar").get<double>();
  take_solver_options(j, a);
}

void add_generator_options(CLI::App* c, Args& a) {
  c->add_option("--domain", a.domain, "square or star")->check(CLI::IsMember({"square", "star"}));
  c->add_option("--divisions", a.divisions, "square mesh divisions per side");
  c->add_option("--refine", a.refine, "star mesh refinement rounds");
  c->add_option("--d", a.d, "diffusion coefficient");
}

void add_pencil_options(CLI::App* c, Args& a) {
  c->add_option("--m", a.m_path, "mass matrix (Matrix Market)");
  c->add_option("--k", a.k_path, "stiffness matrix (Matrix Market)");
  c->add_option("--b", a.b_path, "start vector (text, one value per line)");
  add_generator_options(c, a);
  c->add_option("--tau-factor", a.tau_factor, "tau as a multiple of the mean edge length");
  c->add_option("--tau", a.tau, "explicit tau, overrides --tau-factor");
  c->add_option("--h-bar", a.h_bar, "mean edge length for file inputs");
  c->add_option("--seed", a.seed, "seed for randomized start vectors");
  c->add_option("--config", a.config, "JSON file with option defaults");
}

fs::path require_out_dir(const Args& a) {
  require(!a.out.empty(), ErrorKind::InvalidArgument, "--out is required");
  const fs::path out(a.out);
  require(fs::is_directory(out), ErrorKind::Io, "output directory does not exist: " + a.out);
  return out;
}

struct LoadedPencil {
  Pencil pencil;
  VectorXd b;
  double h_bar = 0.0;
  std::string shape;
  double d = 0.0;
};

GeneratedProblem generate(const Args& a) {
  ProblemSpec spec;
  spec.domain = parse_domain(a.domain);
  spec.d = a.d;
  spec.divisions = a.divisions;
  spec.refine = a.refine;
  return generate_problem(spec);
}

LoadedPencil load_pencil(const Args& a) {
  const bool files = !a.m_path.empty() || !a.k_path.empty();
  SparseMatrixd m, k;
  VectorXd b;
  double h_bar = 0.0;
  std::string shape = "file";
  double d = 0.0;
  if (files) {
    require(!a.m_path.empty() && !a.k_path.empty(), ErrorKind::InvalidArgument, "--m and --k must be given together");
    m = io::read_matrix_market(fs::path(a.m_path));
    k = io::read_matrix_market(fs::path(a.k_path));
    if (!a.b_path.empty()) b = io::read_vector(fs::path(a.b_path));
    const fs::path params = fs::path(a.m_path).parent_path() / "params.json";
    if (a.h_bar) {
      h_bar = *a.h_bar;
    } else if (fs::exists(params)) {
      const Json j = io::read_json(params);
      h_bar = j.value("h_bar", 0.0);
      shape = j.value("domain", shape);
      d = j.value("d", 0.0);
    }
  } else {
    const GeneratedProblem g = generate(a);
    m = g.system.mass;
    k = g.system.stiffness;
    b = g.system.b0;
    h_bar = g.mesh.h_bar;
    shape = std::string(to_string(g.spec.domain));
    d = g.spec.d;
  }
  double tau = 0.0;
  if (a.tau) {
    tau = *a.tau;
  } else {
    require(h_bar > 0.0, ErrorKind::InvalidArgument,
            "tau unresolved: give --tau, --h-bar, or a params.json next to the matrices");
    tau = a.tau_factor * h_bar;
  }
  return {Pencil(tau, std::move(m), std::move(k)), std::move(b), h_bar, shape, d};
}

ExpmvOptions expmv_options(const Args& a) {
  ExpmvOptions o;
  o.eig.seed = a.seed;
  o.eig.rel_resid_tol = a.rel_resid_tol;
  o.region = parse_region_mode(a.mode);
  o.approx.s_max = a.s_max;
  o.approx.m_max = a.m_max;
  o.approx.n_per_side = a.samples_per_side;
  o.strict_kappa = a.strict_kappa;
  o.solver = a.solver == "dense" ? ShiftSolver::Dense : ShiftSolver::Sparse;
  return o;
}

int cmd_generate(const Args& a) {
  const fs::path out = require_out_dir(a);
  const GeneratedProblem g = generate(a);
  io::write_matrix_market(out / "M.mtx", g.system.mass);
  io::write_matrix_market(out / "K.mtx", g.system.stiffness);
  io::write_vector(out / "b0.txt", g.system.b0);
  io::write_mesh(out / "mesh.txt", g.mesh);
  Json params{{"schema", io::kParamsSchema},
              {"domain", a.domain},
              {"d", a.d},
              {"c", Json::array({g.system.c[0], g.system.c[1]})},
              {"element", "P1"},
              {"n", g.system.mass.rows()},
              {"h_bar", g.mesh.h_bar},
              {"vertices", g.mesh.vertices.size()},
              {"triangles", g.mesh.triangles.size()},
              {"seed", a.seed}};
  if (g.spec.domain == Domain::Square) {
    params["divisions"] = a.divisions;
  } else {
    params["refine"] = a.refine;
  }
  io::write_json(out / "params.json", params);
  std::cout << "n = " << g.system.mass.rows() << ", h_bar = " << g.mesh.h_bar << '\n';
  return 0;
}

int cmd_bound(const Args& a) {
  const LoadedPencil lp = load_pencil(a);
  EigenSolveOptions eo;
  eo.seed = a.seed;
  eo.rel_resid_tol = a.rel_resid_tol;
  const bool dense_a = parse_region_mode(a.mode) == RegionMode::DenseOperator;
  const BoundingRectangle rect =
      dense_a ? numerical_range_rectangle(dense_operator(lp.pencil)) : bounding_rectangle(lp.pencil, eo);
  const CondEstimate cond = cond_estimate(lp.pencil.mass(), std::nullopt, eo);
  Json j = io::bound_json(rect, cond);
  j["tau"] = lp.pencil.tau();
  j["mode"] = a.mode;
  if (!a.out.empty()) io::write_json(require_out_dir(a) / "bound.json", j);
  std::cout << j.dump(2) << '\n';
  std::cout << (is_lhp_certified(rect) ? "LHP: certified" : "LHP: not certified") << '\n';
  return 0;
}

int cmd_expmv(const Args& a) {
  const LoadedPencil lp = load_pencil(a);
  require(lp.b.size() == lp.pencil.size(), ErrorKind::InvalidArgument, "start vector missing or of wrong length");
  const fs::path out = require_out_dir(a);
  ExpmvRequest req{lp.pencil, lp.b.cast<Complex>(), a.eps, parse_method(a.method), expmv_options(a)};

  SweepRow row;
  row.shape = lp.shape;
  row.element = "P1";
  row.d = lp.d;
  row.n = lp.pencil.size();
  row.h_bar = lp.h_bar;
  row.kappa_m = cond_estimate(lp.pencil.mass(), std::nullopt, req.options.eig).kappa_tilde;
  row.tau_factor = lp.h_bar > 0.0 ? lp.pencil.tau() / lp.h_bar : 0.0;
  row.method = req.method;
  row.mode = req.options.region;
  row.eps = a.eps;

  int status = 0;
  ExpmvCertificate cert;
  try {
    const ExpmvResult res = expmv_controlled(req);
    cert = res.certificate;
    if (cert.lhp_certified) std::cout << "LHP: certified\n";
    const bool real = (res.x.imag().array() == 0.0).all();
    if (real) {
      io::write_vector(out / "result.txt", VectorXd(res.x.real()));
    } else {
      io::write_vector(out / "result.txt", res.x);
    }
    row.degree = cert.degree;
    row.certified_bound = cert.certified_bound();
    if (a.verify) {
      row.measured_error = oracle_relative_error(lp.pencil, req.b, res.x);
      std::cout << "measured relative error: " << *row.measured_error << '\n';
    }
    std::cout << "degree " << cert.degree << ", certified bound " << cert.certified_bound() << '\n';
  } catch (const ExpmvError& e) {
    cert = e.certificate();
    row.status = std::string(to_string(e.kind()));
    std::cerr << "expmv failed: " << e.what() << '\n';
    status = 2;
  }
  Json cj = io::certificate_json(cert);
  cj["tau"] = lp.pencil.tau();
  if (row.measured_error) cj["measured_error"] = *row.measured_error;
  io::write_json(out / "certificate.json", cj);
  std::ofstream csv(out / "run.csv");
  write_csv(csv, {row});
  return status;
}

std::vector<double> doubles(const Json& j, const char* key, std::vector<double> fallback) {
  return j.contains(key) ? j.at(key).get<std::vector<double>>() : fallback;
}

int cmd_sweep(CLI::App& cmd, const Args& a) {
  SweepConfig cfg;
  cfg.options = expmv_options(a);
  cfg.verify = a.verify;
  if (!a.config.empty()) {
    const Json j = io::read_json(a.config);
    Args with_solver = a;
    take_solver_options(j, with_solver);
    cfg.options = expmv_options(with_solver);
    for (const auto& p : j.value("problems", Json::array())) {
      ProblemSpec spec;
      spec.domain = parse_domain(p.value("domain", std::string("square")));
      spec.d = p.value("d", spec.d);
      spec.divisions = p.value("divisions", spec.divisions);
      spec.refine = p.value("refine", spec.refine);
      cfg.matrices.push_back(sweep_matrix(generate_problem(spec)));
    }
    for (const auto& mj : j.value("matrices", Json::array())) {
      SweepMatrix sm;
      sm.shape = mj.value("shape", std::string("file"));
      sm.element = mj.value("element", std::string("P1"));
      sm.d = mj.value("d", 0.0);
      sm.h_bar = mj.at("h_bar").get<double>();
      sm.mass = io::read_matrix_market(fs::path(mj.at("m").get<std::string>()));
      sm.stiffness = io::read_matrix_market(fs::path(mj.at("k").get<std::string>()));
      sm.b = io::read_vector(fs::path(mj.at("b").get<std::string>()));
      cfg.matrices.push_back(std::move(sm));
    }
    cfg.tau_factors = doubles(j, "tau_factors", cfg.tau_factors);
    cfg.eps = doubles(j, "eps", cfg.eps);
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& s : j.at("methods")) cfg.methods.push_back(parse_method(s.get<std::string>()));
    }
    if (j.contains("modes")) {
      cfg.modes.clear();
      for (const auto& s : j.at("modes")) cfg.modes.push_back(parse_region_mode(s.get<std::string>()));
    }
    if (!given(cmd, "--verify")) cfg.verify = j.value("verify", cfg.verify);
    if (!given(cmd, "--seed")) cfg.options.eig.seed = j.value("seed", a.seed);
  } else {
    cfg.matrices.push_back(sweep_matrix(generate(a)));
    cfg.tau_factors = {a.tau_factor};
    cfg.eps = {a.eps};
    if (given(cmd, "--method")) cfg.methods = {parse_method(a.method)};
    if (given(cmd, "--mode")) cfg.modes = {parse_region_mode(a.mode)};
  }
  const auto rows = run_sweep(cfg);
  if (a.out.empty()) {
    write_csv(std::cout, rows);
  } else {
    const fs::path out(a.out);
    require(fs::is_directory(out.parent_path().empty() ? fs::path(".") : out.parent_path()), ErrorKind::Io,
            "output directory does not exist: " + out.parent_path().string());
    std::ofstream f(out);
    require(static_cast<bool>(f), ErrorKind::Io, "cannot open " + a.out);
    write_csv(f, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified rational approximation of exp(tau M^{-1} K) b"};
  app.require_subcommand(1);
  Args a;

  auto* gen = app.add_subcommand("generate", "write M.mtx, K.mtx, b0.txt, mesh.txt and params.json");
  add_generator_options(gen, a);
  gen->add_option("--out", a.out, "existing output directory")->required();
  gen->add_option("--seed", a.seed, "recorded in params.json");
  gen->add_option("--config", a.config, "JSON file with option defaults");

  auto* bound = app.add_subcommand("bound", "bounding rectangle, kappa(M) estimate and LHP status");
  add_pencil_options(bound, a);
  bound->add_option("--mode", a.mode, "i: rectangle of W(A) from dense A; ii: of the transformed pencil")
      ->check(CLI::IsMember({"i", "ii"}));
  bound->add_option("--out", a.out, "directory for bound.json");

  auto* expmv = app.add_subcommand("expmv", "certified exp(A) b");
  add_pencil_options(expmv, a);
  expmv->add_option("--eps", a.eps, "relative tolerance");
  expmv->add_option("--method", a.method)->check(CLI::IsMember({"sub-pade", "rat-interp"}));
  expmv->add_option("--mode", a.mode, "i: rectangle from dense A; ii: from the pencil")
      ->check(CLI::IsMember({"i", "ii"}));
  expmv->add_flag("--verify", a.verify, "compare with the dense oracle");
  expmv->add_option("--out", a.out, "existing output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "experiment grid to CSV");
  add_generator_options(sweep, a);
  sweep->add_option("--tau-factor", a.tau_factor);
  sweep->add_option("--eps", a.eps);
  sweep->add_option("--method", a.method)->check(CLI::IsMember({"sub-pade", "rat-interp"}));
  sweep->add_option("--mode", a.mode)->check(CLI::IsMember({"i", "ii"}));
  sweep->add_flag("--verify", a.verify, "measure errors with the dense oracle");
  sweep->add_option("--out", a.out, "CSV path (stdout if omitted)");
  sweep->add_option("--seed", a.seed);
  sweep->add_option("--config", a.config, "sweep grid as JSON");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) {
      apply_config(*gen, a);
      return cmd_generate(a);
    }
    if (*bound) {
      apply_config(*bound, a);
      return cmd_bound(a);
    }
    if (*expmv) {
      apply_config(*expmv, a);
      return cmd_expmv(a);
    }
    if (*sweep) return cmd_sweep(*sweep, a);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
