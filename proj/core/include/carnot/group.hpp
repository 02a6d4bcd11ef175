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

#pragma once

#include <vector>

#include "carnot/schema.hpp"

namespace carnot {

using Coords = std::vector<double>;

/// Group element in canonical coordinates of the 1st kind. The chart
/// identifies the group with R^N, so exp and log are the identity on
/// coordinates.
struct Point {
  SchemaPtr schema;
  Coords x;

  Point() = default;
  Point(SchemaPtr s, Coords c);

  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  int dim() const { return static_cast<int>(x.size()); }
};

/// Lie-algebra element in the graded basis.
struct AlgebraVector {
  SchemaPtr schema;
  Coords v;

  AlgebraVector() = default;
  AlgebraVector(SchemaPtr s, Coords c);

  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  int dim() const { return static_cast<int>(v.size()); }

  /// True iff the support lies in stratum 1 (within tol, absolute).
  bool is_horizontal(double tol = 0.0) const;
  /// Euclidean norm of the stratum-1 part.
  double horizontal_norm() const;
  /// Euclidean norm of everything above stratum 1.
  double vertical_norm() const;
};

Point origin(const SchemaPtr& schema);

/// Lie bracket via structure constants. Bilinear and antisymmetric.
AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v);

/// Group product in exponential coordinates: the nilpotent
/// Baker-Campbell-Hausdorff sum, exact for steps up to 4. Degree-1
/// coordinates add exactly.
Point group_mul(const Point& a, const Point& b);

/// exp(V)^{-1} = exp(-V): coordinate negation.
Point inverse(const Point& a);

/// Anisotropic dilation: x_i -> lambda^{sigma_i} x_i. Throws on
/// lambda <= 0.
Point dilate(double lambda, const Point& a);
AlgebraVector dilate(double lambda, const AlgebraVector& a);

/// a * exp(V) -- one flow step along a left-invariant field.
Point exp_step(const Point& a, const AlgebraVector& v);

/// log(a^{-1} * b) as an algebra vector.
AlgebraVector log_between(const Point& a, const Point& b);

/// x -> g * x.
Point left_translate(const Point& g, const Point& x);

/// Basis vector X_i scaled by t.
AlgebraVector basis_vector(const SchemaPtr& schema, int i, double t = 1.0);

/// Integer power with exact repeated multiplication.
double powi(double base, int exp);

}  // namespace carnot
