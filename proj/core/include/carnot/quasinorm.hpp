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

#include "carnot/group.hpp"

namespace carnot {

/// Homogeneous quasi-norm used as the computable surrogate metric.
///
/// Max style takes the max over strata of the stratum-k Euclidean norm
/// raised to 1/k. It is exactly 1-homogeneous under dilations and
/// restricts to arclength on horizontal rays through the identity in
/// every horizontal direction. Smooth style is a power mean with
/// exponents chosen so the expression stays a polynomial root
/// (Koranyi-type).
struct QuasiNormConfig {
  enum class Style { Max, Smooth };
  Style style = Style::Max;
};

double quasi_norm(const Point& x, const QuasiNormConfig& cfg = {});
double quasi_norm(const AlgebraVector& v, const QuasiNormConfig& cfg = {});

/// Left-invariant quasi-distance ||x^{-1} y||.
double quasi_dist(const Point& x, const Point& y, const QuasiNormConfig& cfg = {});

}  // namespace carnot
