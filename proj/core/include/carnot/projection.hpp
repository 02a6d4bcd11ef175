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

#include <functional>

#include "carnot/quadrature.hpp"
#include "carnot/quasinorm.hpp"

namespace carnot {

/// Point of the vertical hyperplane Pi_j = { x_j = 0 }, stored with the
/// constrained coordinate deleted so that Lebesgue quadrature on the
/// hyperplane is a plain (N-1)-dimensional box integral. Embedding
/// reinserts x_j = 0.
struct HyperplanePoint {
  SchemaPtr schema;
  int j = 0;       // horizontal index, 0-based
  Coords coords;   // N-1 chart coordinates, x_j deleted

  HyperplanePoint() = default;
  HyperplanePoint(SchemaPtr s, int j_, Coords c);
};

/// Insert x_j = 0.
Point embed(const HyperplanePoint& p);

/// Unique decomposition x = p * exp(x_j X_j): returns p = x * exp(-x_j X_j)
/// with the j-th coordinate deleted. j must be horizontal (0-based).
HyperplanePoint proj_P(const Point& x, int j);

/// pr_j(x) = x_j; additive under the group product for horizontal j.
double proj_scalar(const Point& x, int j);

/// Quasi-norm discrepancy of the projection conjugation identity
///   Pr_j(x y) = Pr_j(x) exp(x_j X_j) Pr_j(y) exp(-x_j X_j).
double conjugation_identity_defect(const Point& x, const Point& y, int j);

struct FubiniConfig {
  int outer_n = 128;        // per-axis midpoint resolution on the hyperplane window
  int inner_scan = 192;     // samples of the t-line used to bracket box crossings
  double window_pad = 0.0;  // relative padding of the projected window; the unpadded
                            // window aligns support jumps with cell boundaries
  int threads = 1;
};

struct FubiniResult {
  double lhs = 0.0;  // iterated integral over Pi_j x R
  double rhs = 0.0;  // Lebesgue integral over the box
  double rel_gap = 0.0;
  double rhs_error = 0.0;
};

/// Checks the Lebesgue-normalized decomposition identity
///   int_{Pi_j} int_R f(p exp(t X_j)) dt dL^{N-1}(p) = int f dL^N
/// on a coordinate box, extending f by zero outside the box. The inner
/// integral runs over exactly the parameter intervals where the line
/// p exp(t X_j) lies inside the box (crossings are bisected to roundoff).
FubiniResult fubini_check(const std::function<double(const Point&)>& f, const Region& box, int j,
                          const FubiniConfig& cfg = {});

}  // namespace carnot
