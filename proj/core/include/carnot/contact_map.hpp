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
#include <optional>
#include <string>

#include "carnot/hom.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

/// Mapping between group charts. Contactness is a checked property, not
/// an assumption: the scaled difference quotients of the forward map
/// must converge to a graded hom (see pansu_residual). The analytic
/// differential, when present, is the fixture ground truth for the
/// finite-difference estimator.
struct ContactMap {
  std::string name;
  SchemaPtr schema;
  std::function<Point(const Point&)> forward;
  std::function<GradedHom(const Point&)> analytic_differential;  // may be empty
  std::optional<double> lipschitz_bound;
  /// Set for fixtures known to satisfy |adj| = 0 wherever det = 0.
  bool finite_codistortion = false;

  bool has_analytic_differential() const { return static_cast<bool>(analytic_differential); }

  Point operator()(const Point& x) const { return forward(x); }
};

/// Builtin registry, addressed as "name" or "name:key=value,...".
///
///   identity                          any schema
///   translate:c1=..,...,cN=..         left translation (any schema)
///   dilate:l=LAMBDA                   group dilation (any schema)
///   hom:b11=..,b12=..,...             graded hom from its n_1 x n_1 block
///   aniso:l=..,m=..                   (l x, m y, l m z) on heisenberg(1)
///   rotate:a=ANGLE                    rotation about the vertical axis, heisenberg(1)
///   shear:a=..                        lifted quadratic shear (x, y+a x^2, z+a x^3/6)
///   degenerate                        (x, y, z) -> (x, 0, 0) on heisenberg(1)
///   fold                              (x, y, z) -> (x^2/2, 0, 0) on heisenberg(1)
///
/// Throws std::invalid_argument for unknown names, bad parameters, or a
/// schema the map is not defined on.
ContactMap builtin_map(const std::string& spec, const SchemaPtr& schema);

/// x -> map(g x); the differential at x is the map's differential at
/// g x (left translations have identity differential).
ContactMap precompose_translation(const ContactMap& map, const Point& g);

/// Sampled Lipschitz estimate: max horizontal-block operator norm over
/// a lattice of the region (analytic differential required).
double estimate_lipschitz(const ContactMap& map, const Region& region, int per_axis = 6);

}  // namespace carnot
