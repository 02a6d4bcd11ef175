/*
 * Copyright 2026 The Carnot Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "carnot/group.hpp"

#include <cmath>
#include <stdexcept>

namespace carnot {
namespace {

void require_finite(const Coords& c, const char* what) {
  for (double v : c)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": nonfinite coordinate");
}

void require_same_schema(const SchemaPtr& a, const SchemaPtr& b) {
  if (!same_schema(a, b)) throw std::invalid_argument("schema mismatch");
}

// Nilpotent BCH sum, exact through step 4:
//   u + v + 1/2 [u,v] + 1/12 [u,[u,v]] - 1/12 [v,[u,v]] - 1/24 [v,[u,[u,v]]].
Coords bch(const GroupSchema& s, const Coords& u, const Coords& v) {
  const int n = s.dim();
  auto brk = [&](const Coords& a, const Coords& b) {
    Coords out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      const double ai = a[static_cast<std::size_t>(i)];
      if (ai == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        const double bj = b[static_cast<std::size_t>(j)];
        if (bj == 0.0) continue;
        for (const auto& [k, c] : s.bracket_of_pair(i, j)) out[static_cast<std::size_t>(k)] += ai * bj * c;
      }
    }
    return out;
  };

  Coords z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i)];
  if (s.step() < 2) return z;

  const Coords w1 = brk(u, v);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] += 0.5 * w1[static_cast<std::size_t>(i)];
  if (s.step() < 3) return z;

  const Coords w2 = brk(u, w1);
  const Coords w3 = brk(v, w1);
  for (int i = 0; i < n; ++i)
    z[static_cast<std::size_t>(i)] += (w2[static_cast<std::size_t>(i)] - w3[static_cast<std::size_t>(i)]) / 12.0;
  if (s.step() < 4) return z;

  const Coords w4 = brk(v, w2);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] -= w4[static_cast<std::size_t>(i)] / 24.0;
  return z;
}

}  // namespace

Point::Point(SchemaPtr s, Coords c) : schema(std::move(s)), x(std::move(c)) {
  if (!schema) throw std::invalid_argument("Point: null schema");
  if (static_cast<int>(x.size()) != schema->dim()) throw std::invalid_argument("Point: wrong coordinate count");
  require_finite(x, "Point");
}

AlgebraVector::AlgebraVector(SchemaPtr s, Coords c) : schema(std::move(s)), v(std::move(c)) {
  if (!schema) throw std::invalid_argument("AlgebraVector: null schema");
  if (static_cast<int>(v.size()) != schema->dim())
    throw std::invalid_argument("AlgebraVector: wrong coefficient count");
  require_finite(v, "AlgebraVector");
}

bool AlgebraVector::is_horizontal(double tol) const {
  const int n1 = schema->horizontal_dim();
  for (int i = n1; i < dim(); ++i)
    if (std::abs(v[static_cast<std::size_t>(i)]) > tol) return false;
  return true;
}

double AlgebraVector::horizontal_norm() const {
  const int n1 = schema->horizontal_dim();
  double s = 0.0;
  for (int i = 0; i < n1; ++i) s += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

double AlgebraVector::vertical_norm() const {
  double s = 0.0;
  for (int i = schema->horizontal_dim(); i < dim(); ++i)
    s += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

Point origin(const SchemaPtr& schema) {
  return Point(schema, Coords(static_cast<std::size_t>(schema->dim()), 0.0));
}

AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
  require_same_schema(u.schema, v.schema);
  const GroupSchema& s = *u.schema;
  Coords out(static_cast<std::size_t>(s.dim()), 0.0);
  for (int i = 0; i < s.dim(); ++i) {
    const double ui = u.v[static_cast<std::size_t>(i)];
    if (ui == 0.0) continue;
    for (int j = 0; j < s.dim(); ++j) {
      const double vj = v.v[static_cast<std::size_t>(j)];
      if (vj == 0.0) continue;
      for (const auto& [k, c] : s.bracket_of_pair(i, j)) out[static_cast<std::size_t>(k)] += ui * vj * c;
    }
  }
  return AlgebraVector(u.schema, std::move(out));
}

Point group_mul(const Point& a, const Point& b) {
  require_same_schema(a.schema, b.schema);
  return Point(a.schema, bch(*a.schema, a.x, b.x));
}

Point inverse(const Point& a) {
  Coords c = a.x;
  for (double& v : c) v = -v;
  return Point(a.schema, std::move(c));
}

double powi(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

Point dilate(double lambda, const Point& a) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  Coords c = a.x;
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] *= powi(lambda, a.schema->degree(i));
  return Point(a.schema, std::move(c));
}

AlgebraVector dilate(double lambda, const AlgebraVector& a) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  Coords c = a.v;
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] *= powi(lambda, a.schema->degree(i));
  return AlgebraVector(a.schema, std::move(c));
}

Point exp_step(const Point& a, const AlgebraVector& v) {
  require_same_schema(a.schema, v.schema);
  return Point(a.schema, bch(*a.schema, a.x, v.v));
}

AlgebraVector log_between(const Point& a, const Point& b) {
  require_same_schema(a.schema, b.schema);
  Coords neg = a.x;
  for (double& c : neg) c = -c;
  return AlgebraVector(a.schema, bch(*a.schema, neg, b.x));
}

Point left_translate(const Point& g, const Point& x) { return group_mul(g, x); }

AlgebraVector basis_vector(const SchemaPtr& schema, int i, double t) {
  if (i < 0 || i >= schema->dim()) throw std::invalid_argument("basis_vector: index out of range");
  Coords c(static_cast<std::size_t>(schema->dim()), 0.0);
  c[static_cast<std::size_t>(i)] = t;
  return AlgebraVector(schema, std::move(c));
}

}  // namespace carnot
