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

#include "carnot/group.hpp"

namespace carnot {

/// Sampled horizontal curve. Per-segment tangents are the group
/// logarithms log(x_k^{-1} x_{k+1}); for a horizontal curve their
/// vertical part vanishes to the sampling order.
struct PolyCurve {
  std::vector<Point> points;

  bool empty() const { return points.size() < 2; }
  std::size_t segments() const { return points.empty() ? 0 : points.size() - 1; }

  AlgebraVector segment_tangent(std::size_t k) const;
};

/// Builds a curve, rejecting consecutive duplicate points.
PolyCurve make_curve(std::vector<Point> points);

/// Sub-Riemannian length: sum of Euclidean norms of the horizontal
/// tangent parts, with X_1..X_{n_1} orthonormal. Throws when a segment
/// tangent is non-horizontal beyond tau_h (relative to the segment's
/// horizontal norm, with a small absolute floor).
double horizontal_length(const PolyCurve& curve, double tau_h = 1e-6);

}  // namespace carnot
