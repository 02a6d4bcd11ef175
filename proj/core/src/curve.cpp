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

#include "carnot/curve.hpp"

#include <stdexcept>
#include <string>

namespace carnot {

AlgebraVector PolyCurve::segment_tangent(std::size_t k) const {
  return log_between(points[k], points[k + 1]);
}

PolyCurve make_curve(std::vector<Point> points) {
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (points[k].x == points[k + 1].x)
      throw std::invalid_argument("make_curve: consecutive points coincide at segment " + std::to_string(k));
  }
  return PolyCurve{std::move(points)};
}

double horizontal_length(const PolyCurve& curve, double tau_h) {
  if (curve.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < curve.segments(); ++k) {
    const AlgebraVector w = curve.segment_tangent(k);
    const double h = w.horizontal_norm();
    const double v = w.vertical_norm();
    if (v > tau_h * h + 1e-15)
      throw std::runtime_error("horizontal_length: non-horizontal tangent at segment " + std::to_string(k) +
                               " (vertical " + std::to_string(v) + " vs horizontal " + std::to_string(h) + ")");
    total += h;
  }
  return total;
}

}  // namespace carnot
