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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "carnot/group.hpp"

namespace carnot {

/// Coordinate box in the domain chart, optionally left-translated by an
/// anchor: the point set is { anchor * u : u in [lo, hi] }. Left
/// translation preserves Lebesgue measure, so volume and quadrature
/// weights are those of the plain box.
struct Region {
  SchemaPtr schema;
  Coords lo;
  Coords hi;
  Point anchor;  // defaults to the identity

  Region() = default;
  Region(SchemaPtr s, Coords lo_, Coords hi_);
  Region(SchemaPtr s, Coords lo_, Coords hi_, Point anchor_);

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(const Point& p, double margin = 0.0) const;
  /// Point at box-relative coordinates u in [0,1]^N.
  Point at_unit(const Coords& u) const;
  /// Chart coordinates of p relative to the anchor (inverse of the
  /// translation, not scaled to [0,1]).
  Coords local_coords(const Point& p) const;
  Region translated(const Point& g) const;  // { g * x : x in this }
};

struct QuadratureSpec {
  enum class Kind { Grid, MonteCarlo };
  Kind kind = Kind::Grid;
  int n = 32;              // per-axis resolution (Grid) or sample count (MonteCarlo)
  std::uint64_t seed = 1;  // MonteCarlo stream seed
  int threads = 1;

  static QuadratureSpec parse(const std::string& text);  // "grid:32" | "mc:20000"
  std::string str() const;
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;  // half-grid Richardson proxy or MC standard error
  std::int64_t evaluations = 0;
};

/// Midpoint / Monte-Carlo integral of f over the region with respect to
/// Lebesgue (= bi-invariant Haar) measure. Throws on nonfinite values
/// of f. Reduction order is fixed, so results are independent of the
/// worker count.
IntegralEstimate lebesgue_box_integral(const std::function<double(const Point&)>& f, const Region& region,
                                       const QuadratureSpec& spec);

}  // namespace carnot
