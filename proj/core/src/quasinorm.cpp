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

#include "carnot/quasinorm.hpp"

#include <cmath>
#include <numeric>

namespace carnot {
namespace {

double stratum_norm(const GroupSchema& s, const Coords& c, int k) {
  double acc = 0.0;
  for (int i = s.stratum_begin(k); i < s.stratum_end(k); ++i)
    acc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
  return std::sqrt(acc);
}

double kth_root(double v, int k) {
  switch (k) {
    case 1:
      return v;
    case 2:
      return std::sqrt(v);
    case 3:
      return std::cbrt(v);
    default:
      return std::pow(v, 1.0 / k);
  }
}

double norm_impl(const GroupSchema& s, const Coords& c, const QuasiNormConfig& cfg) {
  if (cfg.style == QuasiNormConfig::Style::Max) {
    double best = 0.0;
    for (int k = 1; k <= s.step(); ++k) best = std::max(best, kth_root(stratum_norm(s, c, k), k));
    return best;
  }
  // Smooth style: ( sum_k |x^(k)|^(p/k) )^(1/p) with p = 2*lcm(1..m),
  // so every exponent p/k is an even integer.
  int l = 1;
  for (int k = 2; k <= s.step(); ++k) l = std::lcm(l, k);
  const int p = 2 * l;
  double acc = 0.0;
  for (int k = 1; k <= s.step(); ++k) {
    const double nk = stratum_norm(s, c, k);
    acc += std::pow(nk, static_cast<double>(p) / k);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace

double quasi_norm(const Point& x, const QuasiNormConfig& cfg) { return norm_impl(*x.schema, x.x, cfg); }

double quasi_norm(const AlgebraVector& v, const QuasiNormConfig& cfg) { return norm_impl(*v.schema, v.v, cfg); }

double quasi_dist(const Point& x, const Point& y, const QuasiNormConfig& cfg) {
  return quasi_norm(group_mul(inverse(x), y), cfg);
}

}  // namespace carnot
