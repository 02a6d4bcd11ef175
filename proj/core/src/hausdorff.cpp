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

#include "carnot/hausdorff.hpp"

#include <limits>
#include <stdexcept>

namespace carnot {

double hausdorff1_eps(const std::vector<Point>& samples, double eps, const QuasiNormConfig& norm) {
  if (samples.empty()) return 0.0;
  if (!(eps > 0.0)) throw std::invalid_argument("hausdorff1_eps: eps must be positive");

  // Thin very dense clouds; cover quality only needs spacing << eps.
  std::vector<const Point*> pts;
  const std::size_t max_points = 20000;
  const std::size_t stride = samples.size() > max_points ? samples.size() / max_points + 1 : 1;
  for (std::size_t i = 0; i < samples.size(); i += stride) pts.push_back(&samples[i]);

  const std::size_t n = pts.size();
  // Chained sweep: each center is placed as far as possible from the
  // previous one while staying within the ball diameter, so coverage
  // advances by ~2*eps along a curve per center. Between connected
  // components the next start is the farthest-from-centers point.
  // nearest[i] tracks the distance to the closest chosen center.
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> covered(n, false);
  std::size_t covered_count = 0;

  // First center: an extreme point (farthest from pts[0]).
  std::size_t current = 0;
  {
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = quasi_dist(*pts[0], *pts[i], norm);
      if (d > best) {
        best = d;
        current = i;
      }
    }
  }

  std::size_t centers = 0;
  while (covered_count < n) {
    const Point& c = *pts[current];
    ++centers;
    // Mark coverage and find both the chained successor (farthest
    // uncovered point within 2*eps of this center) and the global
    // farthest-from-centers fallback.
    double chain_d = -1.0;
    std::size_t chain_i = current;
    double far_d = -1.0;
    std::size_t far_i = current;
    for (std::size_t i = 0; i < n; ++i) {
      if (covered[i]) continue;
      const double d = quasi_dist(c, *pts[i], norm);
      if (d <= eps) {
        covered[i] = true;
        ++covered_count;
        continue;
      }
      if (d < nearest[i]) nearest[i] = d;
      if (d <= 2.0 * eps && d > chain_d) {
        chain_d = d;
        chain_i = i;
      }
      if (nearest[i] > far_d) {
        far_d = nearest[i];
        far_i = i;
      }
    }
    current = chain_d > 0.0 ? chain_i : far_i;
  }

  return kBeta1 * eps * static_cast<double>(centers);
}

}  // namespace carnot
