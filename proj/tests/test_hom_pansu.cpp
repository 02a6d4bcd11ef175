#include <doctest.h>

#include <cmath>

#include "carnot/contact_map.hpp"
#include "carnot/pansu.hpp"
#include "carnot/rng.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {

Mat rand_block(int n, Rng& rng) {
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = rng.uniform(-2, 2);
  return b;
}

Point rand_point(const SchemaPtr& s, Rng& rng, double span = 1.0) {
  Coords c(static_cast<std::size_t>(s->dim()));
  for (double& v : c) v = rng.uniform(-span, span);
  return Point(s, std::move(c));
}

double mat_diff(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace

TEST_CASE("completion on heisenberg(1): vertical entry is the horizontal Jacobian") {
  auto s = builtin_schema("heisenberg(1)");
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const Mat b = rand_block(2, rng);
    const GradedHom h = complete_hom(b, s);
    const double jh = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    CHECK(h.matrix(2, 2) == doctest::Approx(jh).epsilon(1e-15));
    CHECK(h.matrix(2, 0) == 0.0);
    CHECK(h.matrix(0, 2) == 0.0);
    CHECK(h.det() == doctest::Approx(jh * jh).epsilon(1e-10));
    CHECK(h.bracket_defect() <= 1e-12);
  }
  const GradedHom id = complete_hom(Mat::identity(2), s);
  CHECK(mat_diff(id.matrix, Mat::identity(3)) == 0.0);
}

TEST_CASE("completion on free_step2(3) is the second compound matrix") {
  auto s = builtin_schema("free_step2(3)");
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const Mat b = rand_block(3, rng);
    const GradedHom h = complete_hom(b, s);
    const Mat want = oracles::compound2(b);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(h.matrix(3 + i, 3 + j) == doctest::Approx(want(i, j)).epsilon(1e-13));
    CHECK(h.bracket_defect() <= 1e-12);
  }
}

TEST_CASE("completion detects bracket-incompatible blocks") {
  // On heisenberg(2) the block must preserve the symplectic pairing up
  // to scale; a generic block does not.
  auto s = builtin_schema("heisenberg(2)");
  Rng rng(3);
  bool threw = false;
  for (int t = 0; t < 20 && !threw; ++t) {
    const Mat b = rand_block(4, rng);
    try {
      complete_hom(b, s);
    } catch (const std::runtime_error&) {
      threw = true;
    }
  }
  CHECK(threw);
  // A symplectic-like block completes fine: diag(a, b, 1/a, 1/b) pairs
  // (X_i, Y_i) with product 1.
  Mat b(4, 4);
  b(0, 0) = 2.0;
  b(1, 1) = 0.5;
  b(2, 2) = 0.5;
  b(3, 3) = 2.0;
  const GradedHom h = complete_hom(b, s);
  CHECK(h.matrix(4, 4) == doctest::Approx(1.0));
  CHECK(h.bracket_defect() <= 1e-12);
}

TEST_CASE("adjugate against the cofactor oracle") {
  auto s = builtin_schema("heisenberg(1)");
  CHECK(mat_diff(adjugate(Mat::identity(3)), Mat::identity(3)) == 0.0);

  const double lambda = 2.0;
  Mat d(3, 3);
  d(0, 0) = lambda;
  d(1, 1) = lambda;
  d(2, 2) = lambda * lambda;
  const Mat adj = adjugate(d);
  CHECK(adj(0, 0) == doctest::Approx(lambda * lambda * lambda));
  CHECK(adj(1, 1) == doctest::Approx(lambda * lambda * lambda));
  CHECK(adj(2, 2) == doctest::Approx(lambda * lambda));

  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    Mat m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = rng.uniform(-2, 2);
    CHECK(mat_diff(adjugate(m), oracles::adjugate_oracle(m)) <= 1e-12);
  }
  (void)s;
}

TEST_CASE("adjugate of a degenerate heisenberg hom vanishes") {
  auto s = builtin_schema("heisenberg(1)");
  Mat b(2, 2);
  b(0, 0) = 1.0;  // (x, y, z) -> (x, 0, 0)
  const GradedHom h = complete_hom(b, s);
  const Mat adj = adjugate(h.matrix);
  CHECK(adj.max_abs() == 0.0);
  CHECK(coarea_factor_of_hom(h, 0) == 0.0);
}

TEST_CASE("adjugate identity over random graded homs") {
  Rng rng(7);
  for (const char* name : {"heisenberg(1)", "free_step2(3)"}) {
    auto s = builtin_schema(name);
    const int n1 = s->horizontal_dim();
    double worst = 0.0;
    for (int t = 0; t < 300; ++t) {
      const GradedHom h = complete_hom(rand_block(n1, rng), s);
      worst = std::max(worst, adjugate_identity_defect(h));
    }
    CAPTURE(name);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("adjugate columns of graded homs are horizontal") {
  auto s = builtin_schema("free_step2(3)");
  Rng rng(9);
  const GradedHom h = complete_hom(rand_block(3, rng), s);
  const Mat adj = adjugate(h.matrix);
  for (int j = 0; j < s->horizontal_dim(); ++j)
    for (int i = s->horizontal_dim(); i < s->dim(); ++i) CHECK(std::abs(adj(i, j)) <= 1e-10 * adj.max_abs());
}

TEST_CASE("coarea factor examples") {
  auto s = builtin_schema("heisenberg(1)");
  const ContactMap ident = builtin_map("identity", s);
  const Point x(s, {0.3, -0.2, 0.1});
  CHECK(coarea_factor(ident, x, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coarea_factor(ident, x, 1) == doctest::Approx(1.0).epsilon(1e-12));

  const ContactMap d2 = builtin_map("dilate:l=2", s);
  CHECK(coarea_factor(d2, x, 0) == doctest::Approx(8.0).epsilon(1e-12));

  const ContactMap degen = builtin_map("degenerate", s);
  CHECK(coarea_factor(degen, x, 0) == 0.0);

  const ContactMap aniso = builtin_map("aniso:l=2,m=3", s);
  CHECK(coarea_factor(aniso, x, 0) == doctest::Approx(18.0).epsilon(1e-12));
  CHECK(coarea_factor(aniso, x, 1) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("finite-difference blocks match analytic differentials of all builtin maps") {
  auto s = builtin_schema("heisenberg(1)");
  Rng rng(11);
  const std::vector<std::string> specs = {"identity",      "translate:c1=0.4,c2=-0.3,c3=0.2",
                                          "dilate:l=2",    "hom:b11=1.2,b12=0.3,b21=-0.5,b22=0.9",
                                          "aniso:l=2,m=3", "rotate:a=0.7",
                                          "shear:a=0.5",   "degenerate",
                                          "fold"};
  for (const auto& spec : specs) {
    const ContactMap map = builtin_map(spec, s);
    double worst = 0.0;
    double worst_err = 0.0;
    for (int t = 0; t < 12; ++t) {
      const Point x = rand_point(s, rng);
      const BlockEstimate est = horizontal_block(map, x);
      CHECK(est.converged);
      const GradedHom truth = map.analytic_differential(x);
      worst = std::max(worst, mat_diff(est.block, truth.horizontal_block()));
      worst_err = std::max(worst_err, est.error);
    }
    CAPTURE(spec);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("finite-difference blocks on non-heisenberg schemas") {
  Rng rng(13);
  for (const char* name : {"heisenberg(2)", "free_step2(3)", "abelian(4)"}) {
    auto s = builtin_schema(name);
    const ContactMap d = builtin_map("dilate:l=1.5", s);
    const Point x = rand_point(s, rng);
    const BlockEstimate est = horizontal_block(d, x);
    CHECK(est.converged);
    CHECK(mat_diff(est.block, d.analytic_differential(x).horizontal_block()) <= 1e-6);
  }
}

TEST_CASE("pansu residual: exact for translations, decreasing for the shear") {
  // Quasi-norm residuals of roundoff-size coordinate errors measure as
  // sqrt(eps); rescaling by delta_{1/r} amplifies vertical roundoff by
  // 1/r^2 before the square root.
  auto s = builtin_schema("heisenberg(1)");
  const Point x(s, {0.2, 0.1, -0.3});

  const ContactMap ident = builtin_map("identity", s);
  CHECK(pansu_residual(ident, x, 0.5, 200) <= 1e-7);

  const ContactMap tr = builtin_map("translate:c1=1,c2=-2,c3=0.5", s);
  CHECK(pansu_residual(tr, x, 1.0, 200) <= 1e-7);
  CHECK(pansu_residual(tr, x, 0.01, 200) <= 1e-5);

  const ContactMap sh = builtin_map("shear:a=0.8", s);
  const double r1 = pansu_residual(sh, x, 0.5, 400);
  const double r2 = pansu_residual(sh, x, 0.1, 400);
  const double r3 = pansu_residual(sh, x, 0.01, 400);
  CHECK(r2 < r1);
  CHECK(r3 < r2);
}

TEST_CASE("pansu differential falls back to completion of the numeric block") {
  auto s = builtin_schema("heisenberg(1)");
  ContactMap sh = builtin_map("shear:a=0.5", s);
  const Point x(s, {0.4, -0.1, 0.2});
  const GradedHom truth = sh.analytic_differential(x);
  sh.analytic_differential = nullptr;  // force the numeric path
  const GradedHom numeric = pansu_differential(sh, x);
  CHECK(mat_diff(numeric.matrix, truth.matrix) <= 1e-6);
}

TEST_CASE("finite codistortion reports") {
  auto s = builtin_schema("heisenberg(1)");
  Rng rng(17);
  std::vector<Point> samples;
  for (int t = 0; t < 200; ++t) samples.push_back(rand_point(s, rng));

  const auto degen = finite_codistortion_defect(builtin_map("degenerate", s), samples);
  CHECK(degen.singular_samples == degen.samples);
  CHECK(degen.max_adj_at_singular == 0.0);
  CHECK(degen.finite_codistortion);

  const auto rot = finite_codistortion_defect(builtin_map("rotate:a=0.3", s), samples);
  CHECK(rot.singular_samples == 0);  // vacuous: no dets below threshold
  CHECK(rot.finite_codistortion);

  // Fold: the horizontal block degenerates on the plane x = 0; the
  // adjugate must vanish everywhere, including near the fold.
  std::vector<Point> near_fold = samples;
  for (int t = 0; t < 100; ++t) {
    Point p = rand_point(s, rng);
    p.x[0] = rng.uniform(-1e-3, 1e-3);
    near_fold.push_back(p);
  }
  const auto fold = finite_codistortion_defect(builtin_map("fold", s), near_fold);
  CHECK(fold.singular_samples == fold.samples);
  CHECK(fold.max_adj_at_singular <= 1e-8);
  CHECK(fold.finite_codistortion);
}

TEST_CASE("map registry rejects bad specs") {
  auto s = builtin_schema("heisenberg(1)");
  CHECK_THROWS_AS(builtin_map("mystery", s), std::invalid_argument);
  CHECK_THROWS_AS(builtin_map("dilate", s), std::invalid_argument);
  CHECK_THROWS_AS(builtin_map("aniso:l=2,m=3", builtin_schema("heisenberg(2)")), std::invalid_argument);
  CHECK_THROWS_AS(builtin_map("dilate:l=x", s), std::invalid_argument);
}

TEST_CASE("lipschitz estimates") {
  auto s = builtin_schema("heisenberg(1)");
  const Region box(s, {0, 0, 0}, {1, 1, 1});
  CHECK(*builtin_map("identity", s).lipschitz_bound == doctest::Approx(1.0));
  CHECK(*builtin_map("dilate:l=2", s).lipschitz_bound == doctest::Approx(2.0));
  CHECK(estimate_lipschitz(builtin_map("aniso:l=2,m=3", s), box) == doctest::Approx(3.0).epsilon(1e-6));
  // shear block [[1,0],[2a x,1]] has growing operator norm in x
  const double lip = estimate_lipschitz(builtin_map("shear:a=0.5", s), box);
  CHECK(lip >= 1.0);
  CHECK(lip <= 2.2);
}
