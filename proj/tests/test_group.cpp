#include <doctest.h>

#include <cmath>

#include "carnot/group.hpp"
#include "carnot/rng.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {

Point rand_point(const SchemaPtr& s, Rng& rng, double lo = -2.0, double hi = 2.0) {
  Coords c(static_cast<std::size_t>(s->dim()));
  for (double& v : c) v = rng.uniform(lo, hi);
  return Point(s, std::move(c));
}

double max_coord_diff(const Point& a, const Point& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const char* kFiliform4Schema = R"(name filiform4
dim 5
degrees 1 1 2 3 4
sc 1 2 3 1
sc 1 3 4 1
sc 1 4 5 1
bracket 3 = 1 2 1
bracket 4 = 1 3 1
bracket 5 = 1 4 1
)";

}  // namespace

TEST_CASE("heisenberg product matches the closed form exactly") {
  auto s = builtin_schema("heisenberg(1)");
  const Point a(s, {1, 0, 0});
  const Point b(s, {0, 1, 0});
  const Point ab = group_mul(a, b);
  CHECK(ab[0] == 1.0);
  CHECK(ab[1] == 1.0);
  CHECK(ab[2] == 0.5);

  Rng rng(42);
  for (int t = 0; t < 2000; ++t) {
    const Point x = rand_point(s, rng);
    const Point y = rand_point(s, rng);
    const auto expect = oracles::h1_mul({x[0], x[1], x[2]}, {y[0], y[1], y[2]});
    const Point got = group_mul(x, y);
    CHECK(got[0] == expect[0]);
    CHECK(got[1] == expect[1]);
    CHECK(got[2] == expect[2]);
  }
}

TEST_CASE("abelian product is componentwise addition") {
  auto s = builtin_schema("abelian(4)");
  Rng rng(1);
  const Point x = rand_point(s, rng);
  const Point y = rand_point(s, rng);
  const Point xy = group_mul(x, y);
  for (int i = 0; i < 4; ++i) CHECK(xy[i] == x[i] + y[i]);
}

TEST_CASE("associativity on all builtins") {
  Rng rng(7);
  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "free_step2(3)", "abelian(4)"}) {
    auto s = builtin_schema(name);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Point x = rand_point(s, rng);
      const Point y = rand_point(s, rng);
      const Point z = rand_point(s, rng);
      worst = std::max(worst, max_coord_diff(group_mul(group_mul(x, y), z), group_mul(x, group_mul(y, z))));
    }
    CAPTURE(name);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("associativity exercises the degree-3 and degree-4 series terms") {
  // A wrong 1/12 or -1/24 coefficient shows up as an O(1e-2) defect here.
  auto engel = parse_schema_text(R"(name engel
dim 4
degrees 1 1 2 3
sc 1 2 3 1
sc 2 1 3 -1
sc 1 3 4 1
sc 3 1 4 -1
bracket 3 = 1 2 1
bracket 4 = 1 3 1
)");
  auto fil = parse_schema_text(kFiliform4Schema);
  Rng rng(11);
  for (const auto& s : {engel, fil}) {
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
      const Point x = rand_point(s, rng);
      const Point y = rand_point(s, rng);
      const Point z = rand_point(s, rng);
      worst = std::max(worst, max_coord_diff(group_mul(group_mul(x, y), z), group_mul(x, group_mul(y, z))));
    }
    CAPTURE(s->name());
    CHECK(worst <= 1e-11);
  }
}

TEST_CASE("degree-1 coordinates add exactly") {
  Rng rng(3);
  for (const char* name : {"heisenberg(2)", "free_step2(3)"}) {
    auto s = builtin_schema(name);
    for (int t = 0; t < 200; ++t) {
      const Point x = rand_point(s, rng);
      const Point y = rand_point(s, rng);
      const Point xy = group_mul(x, y);
      for (int i = 0; i < s->horizontal_dim(); ++i) CHECK(xy[i] - x[i] - y[i] == 0.0);
    }
  }
}

TEST_CASE("product coordinate i never depends on coordinates of degree >= sigma_i") {
  auto s = parse_schema_text(kFiliform4Schema);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const Point x = rand_point(s, rng);
    const Point y = rand_point(s, rng);
    const Point base = group_mul(x, y);
    // Perturb every coordinate of degree >= sigma_i other than i itself;
    // coordinate i of the product must not move at all.
    for (int i = 0; i < s->dim(); ++i) {
      Coords cx = x.x, cy = y.x;
      bool perturbed = false;
      for (int m = 0; m < s->dim(); ++m) {
        if (m == i || s->degree(m) < s->degree(i)) continue;
        cx[static_cast<std::size_t>(m)] += rng.uniform(-1.0, 1.0);
        cy[static_cast<std::size_t>(m)] += rng.uniform(-1.0, 1.0);
        perturbed = true;
      }
      if (!perturbed) continue;
      const Point alt = group_mul(Point(s, cx), Point(s, cy));
      CHECK(alt[i] - x.x[static_cast<std::size_t>(i)] - y.x[static_cast<std::size_t>(i)] ==
            base[i] - x[i] - y[i]);
    }
  }
}

TEST_CASE("inverse is coordinate negation and a true group inverse") {
  auto s = builtin_schema("heisenberg(1)");
  const Point p(s, {1, 2, 3});
  const Point q = inverse(p);
  CHECK(q[0] == -1.0);
  CHECK(q[1] == -2.0);
  CHECK(q[2] == -3.0);
  CHECK(max_coord_diff(inverse(origin(s)), origin(s)) == 0.0);

  Rng rng(9);
  for (const char* name : {"heisenberg(1)", "free_step2(3)"}) {
    auto sch = builtin_schema(name);
    for (int t = 0; t < 200; ++t) {
      const Point x = rand_point(sch, rng);
      CHECK(max_coord_diff(group_mul(x, inverse(x)), origin(sch)) <= 1e-12);
    }
  }
}

TEST_CASE("dilation examples and the automorphism property") {
  auto s = builtin_schema("heisenberg(1)");
  const Point d = dilate(2.0, Point(s, {1, 1, 1}));
  CHECK(d[0] == 2.0);
  CHECK(d[1] == 2.0);
  CHECK(d[2] == 4.0);

  Rng rng(13);
  const Point x = rand_point(s, rng);
  CHECK(max_coord_diff(dilate(1.0, x), x) == 0.0);
  CHECK(max_coord_diff(dilate(2.0, dilate(3.0, x)), dilate(6.0, x)) == 0.0);
  CHECK_THROWS_AS(dilate(0.0, x), std::invalid_argument);
  CHECK_THROWS_AS(dilate(-1.0, x), std::invalid_argument);

  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "free_step2(3)"}) {
    auto sch = builtin_schema(name);
    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 10.0}) {
      for (int t = 0; t < 300; ++t) {
        const Point a = rand_point(sch, rng);
        const Point b = rand_point(sch, rng);
        worst = std::max(worst,
                         max_coord_diff(dilate(lambda, group_mul(a, b)), group_mul(dilate(lambda, a), dilate(lambda, b))));
      }
    }
    CAPTURE(name);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("bracket evaluates structure constants") {
  auto s = builtin_schema("heisenberg(1)");
  const AlgebraVector x = basis_vector(s, 0);
  const AlgebraVector y = basis_vector(s, 1);
  const AlgebraVector z = bracket(x, y);
  CHECK(z.v == Coords{0, 0, 1});

  Rng rng(17);
  Coords c(3);
  for (double& v : c) v = rng.uniform(-2, 2);
  const AlgebraVector u(s, c);
  const AlgebraVector uu = bracket(u, u);
  for (double v : uu.v) CHECK(v == 0.0);
}

TEST_CASE("jacobi sum vanishes on random triples") {
  auto s = builtin_schema("free_step2(3)");
  Rng rng(19);
  auto rand_vec = [&]() {
    Coords c(static_cast<std::size_t>(s->dim()));
    for (double& v : c) v = rng.uniform(-2, 2);
    return AlgebraVector(s, std::move(c));
  };
  for (int t = 0; t < 100; ++t) {
    const AlgebraVector a = rand_vec(), b = rand_vec(), c = rand_vec();
    const AlgebraVector s1 = bracket(a, bracket(b, c));
    const AlgebraVector s2 = bracket(b, bracket(c, a));
    const AlgebraVector s3 = bracket(c, bracket(a, b));
    for (int i = 0; i < s->dim(); ++i)
      CHECK(std::abs(s1.v[static_cast<std::size_t>(i)] + s2.v[static_cast<std::size_t>(i)] +
                     s3.v[static_cast<std::size_t>(i)]) <= 1e-12);
  }
}

TEST_CASE("schema mismatch raises") {
  auto a = builtin_schema("heisenberg(1)");
  auto b = builtin_schema("abelian(3)");
  CHECK_THROWS_AS(group_mul(origin(a), origin(b)), std::invalid_argument);
  // Structurally identical schemas from separate calls interoperate.
  auto a2 = builtin_schema("heisenberg(1)");
  CHECK_NOTHROW(group_mul(origin(a), origin(a2)));
}

TEST_CASE("log_between and exp_step invert each other") {
  auto s = builtin_schema("free_step2(3)");
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const Point x = rand_point(s, rng);
    const Point y = rand_point(s, rng);
    const AlgebraVector w = log_between(x, y);
    CHECK(max_coord_diff(exp_step(x, w), y) <= 1e-13);
  }
}
