#include <doctest.h>

#include "carnot/schema.hpp"

using namespace carnot;

namespace {

const char* kEngelSchema = R"(# Engel group: step 3, N = 4
name engel
dim 4
degrees 1 1 2 3
sc 1 2 3 1
sc 2 1 3 -1
sc 1 3 4 1
sc 3 1 4 -1
bracket 3 = 1 2 1
bracket 4 = 1 3 1
)";

const char* kFiliform4Schema = R"(# filiform step-4 chain
name filiform4
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

TEST_CASE("builtin heisenberg(1) presentation") {
  auto s = builtin_schema("heisenberg(1)");
  CHECK(s->dim() == 3);
  CHECK(s->degrees() == std::vector<int>{1, 1, 2});
  CHECK(s->strata_dims() == std::vector<int>{2, 1});
  CHECK(s->hdim() == 4);
  CHECK(s->horizontal_dim() == 2);
  CHECK(s->structure_constant(0, 1, 2) == 1.0);
  CHECK(s->structure_constant(1, 0, 2) == -1.0);
}

TEST_CASE("builtin abelian and heisenberg(n)") {
  auto a = builtin_schema("abelian(3)");
  CHECK(a->dim() == 3);
  CHECK(a->hdim() == 3);
  CHECK(a->step() == 1);
  for (const auto& e : a->entries()) CHECK(e.c.num == 0);

  auto h2 = builtin_schema("heisenberg(2)");
  CHECK(h2->dim() == 5);
  CHECK(h2->hdim() == 6);
  CHECK(h2->horizontal_dim() == 4);
}

TEST_CASE("builtin free_step2(3) dimensions from the pair count") {
  auto f = builtin_schema("free_step2(3)");
  CHECK(f->dim() == 6);
  CHECK(f->strata_dims() == std::vector<int>{3, 3});
  CHECK(f->hdim() == 9);
}

TEST_CASE("unknown builtin rejected") {
  CHECK_THROWS_AS(builtin_schema("sl2"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_schema("heisenberg"), std::invalid_argument);
}

TEST_CASE("dump/parse round trip preserves structure") {
  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "free_step2(3)", "abelian(4)"}) {
    auto s = builtin_schema(name);
    auto back = parse_schema_text(dump_schema(*s));
    CHECK(back->structurally_equal(*s));
    CHECK(back->name() == s->name());
    CHECK(back->bracket_table().size() == s->bracket_table().size());
  }
}

TEST_CASE("antisymmetry violation is the named failure") {
  const char* text = R"(name broken
dim 3
degrees 1 1 2
sc 1 2 3 1
sc 2 1 3 1
bracket 3 = 1 2 1
)";
  CHECK_THROWS_WITH_AS(parse_schema_text(text), doctest::Contains("antisymmetry"), SchemaError);
}

TEST_CASE("grading violation is the named failure") {
  const char* text = R"(name broken
dim 3
degrees 1 1 2
sc 1 2 3 1
sc 1 3 2 1
bracket 3 = 1 2 1
)";
  CHECK_THROWS_WITH_AS(parse_schema_text(text), doctest::Contains("grading"), SchemaError);
}

TEST_CASE("jacobi violation is detected exactly") {
  // Three generators, V2 = span{Z} with Z = [X1,X2] only, V3 = span{W}.
  // Setting [X3, Z] = W makes the (X1,X2,X3) Jacobi sum equal to W != 0:
  // [X1,[X2,X3]] + [X2,[X3,X1]] + [X3,[X1,X2]] = 0 + 0 + W.
  const char* text = R"(name broken
dim 5
degrees 1 1 1 2 3
sc 1 2 4 1
sc 1 4 5 1
sc 3 4 5 1
bracket 4 = 1 2 1
bracket 5 = 1 4 1
)";
  CHECK_THROWS_WITH_AS(parse_schema_text(text), doctest::Contains("jacobi"), SchemaError);
}

TEST_CASE("generation failure: abelian presentation with a fake stratum") {
  // no structure constants at all: V_2 cannot be generated
  const char* text = R"(name broken
dim 3
degrees 1 1 2
)";
  CHECK_THROWS_WITH_AS(parse_schema_text(text), doctest::Contains("generation"), SchemaError);
  // generated fine but the designated expression is missing
  const char* text2 = R"(name broken2
dim 3
degrees 1 1 2
sc 1 2 3 1
sc 2 1 3 -1
)";
  CHECK_THROWS_WITH_AS(parse_schema_text(text2), doctest::Contains("bracket_table"), SchemaError);
}

TEST_CASE("degrees must be nondecreasing") {
  CHECK_THROWS_WITH_AS(GroupSchema::create("bad", {1, 2, 1}, {}, {}), doctest::Contains("degrees"), SchemaError);
}

TEST_CASE("step above 4 rejected at load") {
  std::vector<int> degrees = {1, 1, 2, 3, 4, 5};
  CHECK_THROWS_WITH_AS(GroupSchema::create("deep", degrees, {}, {}), doctest::Contains("step"), SchemaError);
}

TEST_CASE("strata directive must match the degrees") {
  const char* text = R"(name h1
dim 3
degrees 1 1 2
strata 1 2
sc 1 2 3 1
sc 2 1 3 -1
bracket 3 = 1 2 1
)";
  CHECK_THROWS_WITH_AS(parse_schema_text(text), doctest::Contains("strata"), SchemaError);
}

TEST_CASE("parse error carries the line number") {
  try {
    parse_schema_text("name x\nwat 3\n", "f.schema");
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("f.schema:2") != std::string::npos);
  }
}

TEST_CASE("engel (step 3) and filiform (step 4) user schemas validate") {
  auto engel = parse_schema_text(kEngelSchema);
  CHECK(engel->step() == 3);
  CHECK(engel->hdim() == 7);
  auto fil = parse_schema_text(kFiliform4Schema);
  CHECK(fil->step() == 4);
  CHECK(fil->hdim() == 11);
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("1/2").value() == 0.5);
  CHECK(Rational::parse("-3/4").value() == -0.75);
  CHECK(Rational::parse("2/4").str() == "1/2");
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("x"));
}
