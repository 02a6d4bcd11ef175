#include <doctest.h>

#include <cmath>

#include "carnot/coarea.hpp"
#include "carnot/rng.hpp"

using namespace carnot;

namespace {

CoareaConfig quick_config(int pgrid = 24, int quad = 24, int threads = 4) {
  CoareaConfig cfg;
  cfg.rhs.quad.n = quad;
  cfg.rhs.quad.threads = threads;
  cfg.pgrid.n = pgrid;
  cfg.pgrid.threads = threads;
  cfg.pgrid.tracer.scan_per_axis = 32;
  return cfg;
}

}  // namespace

TEST_CASE("rhs integral on constant-factor fixtures") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  RhsConfig cfg;
  cfg.quad.n = 16;
  cfg.quad.threads = 4;

  const auto ident = rhs_integral(builtin_map("identity", s), box, 0, cfg);
  CHECK(ident.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ident.failures == 0);

  const auto d2 = rhs_integral(builtin_map("dilate:l=2", s), box, 0, cfg);
  CHECK(d2.value == doctest::Approx(8.0).epsilon(1e-3));

  const auto degen = rhs_integral(builtin_map("degenerate", s), box, 0, cfg);
  CHECK(degen.value <= 1e-9);
}

TEST_CASE("rhs integral of the shear against the closed-form integral") {
  // factor = sqrt(1 + 4 a^2 x^2); integral over [0,1]^3 with a = 0.5 is
  // int_0^1 sqrt(1+x^2) dx = (sqrt(2) + asinh(1)) / 2.
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  RhsConfig cfg;
  cfg.quad.n = 48;
  cfg.quad.threads = 4;
  const double expect = 0.5 * (std::sqrt(2.0) + std::asinh(1.0));
  const auto est = rhs_integral(builtin_map("shear:a=0.5", s), box, 0, cfg);
  CHECK(est.value == doctest::Approx(expect).epsilon(1e-4));
  // numeric-differential route agrees within its budget
  cfg.prefer_analytic = false;
  cfg.quad.n = 12;
  const auto est2 = rhs_integral(builtin_map("shear:a=0.5", s), box, 0, cfg);
  CHECK(est2.value == doctest::Approx(expect).epsilon(5e-3));
  CHECK(est2.failures == 0);
}

TEST_CASE("lhs integral: identity recovers the volume") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  PGridConfig cfg;
  cfg.n = 32;
  cfg.threads = 4;
  cfg.tracer.scan_per_axis = 32;
  const auto est = lhs_integral(builtin_map("identity", s), box, 0, cfg);
  CHECK(est.value == doctest::Approx(1.0).epsilon(0.02));
  CHECK(est.flagged_fraction == 0.0);
  CHECK(std::abs(est.value - 1.0) <= 3.0 * std::max(est.error, 5e-3));
}

TEST_CASE("lhs integral: degenerate map vanishes") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  PGridConfig cfg;
  cfg.n = 16;
  cfg.threads = 4;
  cfg.tracer.scan_per_axis = 24;
  const auto est = lhs_integral(builtin_map("degenerate", s), box, 0, cfg);
  CHECK(est.value == 0.0);
}

TEST_CASE("verify_coarea: identity is equality-ok near 1") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  const auto report = verify_coarea(builtin_map("identity", s), box, 0, quick_config());
  CHECK(report.verdict == "equality-ok");
  CHECK(report.lhs.value == doctest::Approx(1.0).epsilon(0.03));
  CHECK(report.rhs.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.equality_expected);
}

TEST_CASE("verify_coarea: degenerate map gives two zeros and equality") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  const auto report = verify_coarea(builtin_map("degenerate", s), box, 0, quick_config(16, 16));
  CHECK(report.verdict == "equality-ok");
  CHECK(report.lhs.value <= 1e-6);
  CHECK(report.rhs.value <= 1e-6);
}

TEST_CASE("verify_coarea settings echo") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  CoareaConfig cfg = quick_config(12, 12);
  cfg.pgrid.seed = 12345;
  const auto report = verify_coarea(builtin_map("identity", s), box, 0, cfg);
  CHECK(report.seed == 12345);
  CHECK(report.p_grid_n == 12);
  CHECK(report.quad_spec == "grid:12");
  CHECK(report.tau_track == cfg.pgrid.tracer.tau_track);
  CHECK(report.differential_mode == "analytic");
  CHECK(report.diagnostics.size() == 12 * 12);
}

TEST_CASE("verify_coarea is deterministic across worker counts") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  CoareaConfig one = quick_config(16, 16, 1);
  CoareaConfig four = quick_config(16, 16, 4);
  const auto a = verify_coarea(builtin_map("rotate:a=0.6", s), box, 0, one);
  const auto b = verify_coarea(builtin_map("rotate:a=0.6", s), box, 0, four);
  CHECK(a.lhs.value == b.lhs.value);
  CHECK(a.rhs.value == b.rhs.value);
  CHECK(a.lhs.error == b.lhs.error);
  CHECK(a.verdict == b.verdict);
}

TEST_CASE("left-invariance of verify_coarea under a random base point") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  const ContactMap map = builtin_map("aniso:l=2,m=3", s);
  const CoareaConfig cfg = quick_config(20, 20);

  const auto base = verify_coarea(map, box, 0, cfg);

  const Point g(s, {0.4, -0.7, 0.3});
  const ContactMap shifted = precompose_translation(map, g);
  const Region moved = box.translated(inverse(g));  // g^{-1} A
  const auto translated = verify_coarea(shifted, moved, 0, cfg);

  const double tol = base.lhs.error + translated.lhs.error + 0.02 * base.rhs.value;
  CHECK(std::abs(base.lhs.value - translated.lhs.value) <= tol);
  CHECK(std::abs(base.rhs.value - translated.rhs.value) <= 1e-9);
  CHECK(translated.verdict == base.verdict);
}

TEST_CASE("eilenberg ratio: identity boxes and dilation fixtures") {
  auto s = builtin_schema("heisenberg(1)");
  PGridConfig cfg;
  cfg.n = 20;
  cfg.threads = 4;
  cfg.tracer.scan_per_axis = 28;

  const ContactMap ident = builtin_map("identity", s);
  std::vector<double> ratios;
  for (double side : {1.0, 2.0}) {
    const Region box(s, {0, 0, 0}, {side, side, side});
    const auto res = eilenberg_bound_check(ident, box, 0, cfg);
    CHECK(res.bound == doctest::Approx(side * side * side));
    ratios.push_back(res.ratio);
  }
  const ContactMap d2 = builtin_map("dilate:l=2", s);
  const Region unit(s, {0, 0, 0}, {1, 1, 1});
  ratios.push_back(eilenberg_bound_check(d2, unit, 0, cfg).ratio);

  for (double r : ratios) CHECK(r == doctest::Approx(1.0).epsilon(0.08));

  const auto degen = eilenberg_bound_check(builtin_map("degenerate", s), unit, 0, cfg);
  CHECK(degen.ratio == 0.0);

  ContactMap no_lip = ident;
  no_lip.lipschitz_bound.reset();
  CHECK_THROWS_AS(eilenberg_bound_check(no_lip, unit, 0, cfg), std::invalid_argument);
}
