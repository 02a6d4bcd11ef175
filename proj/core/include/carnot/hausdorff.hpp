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
#include "carnot/quasinorm.hpp"

namespace carnot {

/// Normalization constant for 1-dimensional Hausdorff measure; fixed so
/// that the measure restricts to arclength on horizontal axes.
inline constexpr double kBeta1 = 2.0;

struct HausdorffConfig {
  double eps = 0.05;       // covering radius bound
  int grid_res = 96;       // per-axis band-scan resolution (covering oracle)
  QuasiNormConfig norm{};  // quasi-ball shape
};

/// Definition-faithful 1-dimensional Hausdorff epsilon-measure upper
/// estimate: greedy farthest-point cover of the sample cloud by
/// quasi-norm balls of radius eps; returns beta_1 * sum of radii.
/// The samples must resolve the underlying set at spacing well below
/// eps. Empty input yields 0.
double hausdorff1_eps(const std::vector<Point>& samples, double eps, const QuasiNormConfig& norm = {});

}  // namespace carnot
