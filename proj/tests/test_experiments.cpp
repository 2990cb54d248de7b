#include <doctest.h>

#include <sstream>

#include "fovexp/experiments.hpp"

using namespace fovexp;

namespace {

SweepConfig small_config() {
  ProblemSpec spec;
  spec.divisions = 10;
  spec.d = 1e-2;
  SweepConfig cfg;
  cfg.matrices.push_back(sweep_matrix(generate_problem(spec)));
  cfg.tau_factors = {1.0, 10.0};
  cfg.eps = {1e-4, 1e-8};
  return cfg;
}

}  // namespace

TEST_CASE("generated problems") {
  ProblemSpec spec;
  spec.divisions = 20;
  const auto g = generate_problem(spec);
  CHECK(g.system.mass.rows() == 361);
  spec.domain = Domain::Star;
  spec.refine = 3;
  const auto s = generate_problem(spec);
  CHECK(s.system.mass.rows() == static_cast<Index>(s.mesh.interior_count()));
  CHECK_NOTHROW(cholesky(MatrixXd(s.system.mass)));
}

TEST_CASE("sweep rows, order and invariants") {
  const auto cfg = small_config();
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2 * 2 * 2 * 2);
  std::size_t i = 0;
  for (double tf : cfg.tau_factors)
    for (double eps : cfg.eps)
      for (Method m : cfg.methods)
        for (RegionMode mode : cfg.modes) {
          const auto& r = rows[i++];
          CHECK(r.tau_factor == tf);
          CHECK(r.eps == eps);
          CHECK(r.method == m);
          CHECK(r.mode == mode);
          CHECK(r.n == 81);
          if (r.status == "ok") {
            REQUIRE(r.degree.has_value());
            REQUIRE(r.measured_error.has_value());
            REQUIRE(r.certified_bound.has_value());
            CHECK(*r.measured_error <= r.eps);
            CHECK(*r.certified_bound >= *r.measured_error);
            CHECK(*r.certified_bound <= r.eps);
          } else {
            CHECK_FALSE(r.degree.has_value());
          }
        }
}

TEST_CASE("sweep csv") {
  SUBCASE("empty matrix list gives the header only") {
    SweepConfig cfg;
    std::ostringstream out;
    write_csv(out, run_sweep(cfg));
    CHECK(out.str() == std::string(kSweepCsvHeader) + "\n");
  }
  SUBCASE("deterministic output") {
    const auto cfg = small_config();
    std::ostringstream a, b;
    write_csv(a, run_sweep(cfg));
    write_csv(b, run_sweep(cfg));
    CHECK(a.str() == b.str());
  }
  SUBCASE("failure rows use the dash marker") {
    SweepRow r;
    r.shape = "square";
    r.element = "P1";
    r.status = "ScalingExhausted";
    const std::string line = csv_row(r);
    CHECK(line.find(",--,--,--,ScalingExhausted") != std::string::npos);
  }
}

TEST_CASE("sweep never aborts on failures") {
  auto cfg = small_config();
  cfg.options.approx.s_max = 1;
  cfg.options.approx.m_max = 2;
  cfg.tau_factors = {10.0};
  cfg.eps = {1e-8};
  const auto rows = run_sweep(cfg);
  CHECK(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.status != "ok");
}
