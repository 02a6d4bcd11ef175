#include <doctest.h>

#include <cmath>

#include "carnot/levelset.hpp"
#include "carnot/rng.hpp"

using namespace carnot;

TEST_CASE("identity map: the level set through an interior p is one axis segment") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  const ContactMap ident = builtin_map("identity", s);

  // p = (y0, z0) in Pi_1 coordinates; the preimage is p * L_1 clipped to
  // the box. For y0 = 0.4, z0 = 0.2 the segment has t in [0, 1] at
  // z = z0 + y0 t / 2 <= 1, all inside: length 1.
  const HyperplanePoint p(s, 0, {0.4, 0.2});
  const auto curves = level_set_trace(ident, p, 0, box);
  REQUIRE(curves.size() == 1);
  CHECK(!curves[0].stalled);
  CHECK(!curves[0].hit_step_limit);
  CHECK(curves[0].length == doctest::Approx(1.0).epsilon(5e-3));

  // Every sample lies on the level set.
  LevelSetContext ctx(ident, 0, box, TracerConfig{});
  for (const Point& q : curves[0].curve.points) CHECK(ctx.residual_norm(q, p.coords) <= 1e-6);
}

TEST_CASE("dilation map: generic p yields a single tight curve") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  const ContactMap d2 = builtin_map("dilate:l=2", s);
  TracerConfig cfg;
  const HyperplanePoint p(s, 0, {0.9, 1.1});
  const auto curves = level_set_trace(d2, p, 0, box, cfg);
  REQUIRE(curves.size() == 1);
  LevelSetContext ctx(d2, 0, box, cfg);
  for (const Point& q : curves[0].curve.points) CHECK(ctx.residual_norm(q, p.coords) <= 1e-7);
  CHECK(curves[0].length > 0.2);
}

TEST_CASE("degenerate map: no seeds survive anywhere") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  const ContactMap degen = builtin_map("degenerate", s);
  // Generic p: the fiber is empty for a.e. p (the projected image is a
  // single point), so the scan produces candidates but no polished seed.
  const HyperplanePoint p(s, 0, {0.37, 0.21});
  const auto curves = level_set_trace(degen, p, 0, box);
  CHECK(curves.empty());
}

TEST_CASE("shear map: curved level set is traced on the level set") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {-1, -1, -1}, {1, 1, 1});
  const ContactMap sh = builtin_map("shear:a=0.6", s);
  TracerConfig cfg;
  const HyperplanePoint p(s, 0, {0.15, 0.05});
  const auto curves = level_set_trace(sh, p, 0, box, cfg);
  REQUIRE(curves.size() >= 1);
  LevelSetContext ctx(sh, 0, box, cfg);
  double total = 0.0;
  for (const auto& c : curves) {
    for (const Point& q : c.curve.points) CHECK(ctx.residual_norm(q, p.coords) <= 1e-6);
    total += c.length;
  }
  CHECK(total > 1.0);  // crosses the box
}

TEST_CASE("covering oracle: identity segment within 10 percent, empty window is zero") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  const ContactMap ident = builtin_map("identity", s);

  const HyperplanePoint p(s, 0, {0.5, 0.3});
  BandConfig cfg;
  cfg.grid_res = 80;
  cfg.threads = 4;
  const double est = lhs_covering_oracle(ident, p, 0, box, 0.04, cfg);
  CHECK(est == doctest::Approx(1.0).epsilon(0.10));

  const HyperplanePoint outside(s, 0, {7.0, 9.0});
  CHECK(lhs_covering_oracle(ident, outside, 0, box, 0.04, cfg) == 0.0);
}

TEST_CASE("covering oracle cross-validates traced lengths") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  BandConfig bcfg;
  bcfg.grid_res = 80;
  bcfg.threads = 4;
  TracerConfig tcfg;

  for (const char* spec : {"dilate:l=2", "rotate:a=0.785398"}) {
    const ContactMap map = builtin_map(spec, s);
    LevelSetContext ctx(map, 0, box, tcfg, 32, 4);
    Rng rng(31);
    int compared = 0, agreed = 0;
    for (int t = 0; t < 60 && compared < 12; ++t) {
      Coords p{rng.uniform(ctx.q_lo()[0], ctx.q_hi()[0]), rng.uniform(ctx.q_lo()[1], ctx.q_hi()[1])};
      const auto curves = ctx.trace_at(p, 0.0, nullptr);
      double traced = 0.0;
      for (const auto& c : curves) traced += c.length;
      if (traced < 0.4) continue;  // too short for the 2*eps covering granularity
      const double covered = lhs_covering_oracle(map, HyperplanePoint(s, 0, p), 0, box, 0.04, bcfg);
      ++compared;
      if (std::abs(covered - traced) <= 0.15 * traced) ++agreed;
    }
    CAPTURE(spec);
    CHECK(compared >= 8);
    CHECK(agreed >= compared - 1);
  }
}
