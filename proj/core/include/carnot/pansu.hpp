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

#include "carnot/contact_map.hpp"

namespace carnot {

/// Group-intrinsic finite-difference schedule for the horizontal block:
/// central differences along exp(+-t X_i) flows at t, t/2, t/4 with two
/// levels of Richardson extrapolation. Convergence of the extrapolation
/// tower is monitored, not assumed.
struct DiffConfig {
  double step = 1e-3;
  double tol = 1e-6;  // acceptable spread of the last extrapolation level
};

struct BlockEstimate {
  Mat block;            // n_1 x n_1
  double error = 0.0;   // extrapolation spread
  bool converged = true;
};

/// Column i is the degree-1 part of delta_{1/t}( phi(x)^{-1} phi(x exp(t X_i)) )
/// extrapolated to t -> 0. Throws if the map evaluation fails; a
/// non-converged tower is reported through the flag, not silently used.
BlockEstimate horizontal_block(const ContactMap& map, const Point& x, const DiffConfig& cfg = {});

/// Full Pansu differential at x: the analytic differential when the map
/// carries one, otherwise the finite-difference block completed through
/// the schema's bracket table. Throws on non-convergence.
GradedHom pansu_differential(const ContactMap& map, const Point& x, const DiffConfig& cfg = {},
                             bool prefer_analytic = true);

/// |adj D phi(x) <X_j>|, the Lebesgue-normalized coarea factor (0-based j).
double coarea_factor(const ContactMap& map, const Point& x, int j, const DiffConfig& cfg = {});

/// Max over sampled xi in the closed unit quasi-ball of
///   dist( delta_{1/r}(phi(x)^{-1} phi(x delta_r xi)), L(xi) ),
/// with L the estimated differential at x. Decreases in r at
/// differentiability points.
double pansu_residual(const ContactMap& map, const Point& x, double r, int samples, std::uint64_t seed = 7);

struct CodistortionThresholds {
  double det_base = 1e-9;  // scaled by max(1, |block|)^N
  double adj_base = 1e-8;  // scaled by max(1, |block|)^(N-1)
};

struct CodistortionReport {
  int samples = 0;
  int singular_samples = 0;     // |det| below threshold
  double max_adj_at_singular = 0.0;
  double det_threshold = 0.0;
  double adj_threshold = 0.0;
  bool finite_codistortion = true;  // defect stayed below the adj threshold
};

/// Evaluates |adj D phi| on the samples where |det D phi| falls below
/// the (scale-aware) threshold; finite codistortion means the adjugate
/// vanishes there too.
CodistortionReport finite_codistortion_defect(const ContactMap& map, const std::vector<Point>& samples,
                                              const CodistortionThresholds& thresholds = {},
                                              const DiffConfig& cfg = {});

}  // namespace carnot
