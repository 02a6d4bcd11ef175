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

#include "carnot/pansu.hpp"

#include <cmath>
#include <stdexcept>

#include "carnot/quasinorm.hpp"
#include "carnot/rng.hpp"

namespace carnot {
namespace {

// Degree-1 coordinates of phi(x)^{-1} phi(x exp(t X_i)) divided by 2t,
// summed over +-t: the central difference quotient of column i.
void column_quotient(const ContactMap& map, const Point& x, const Point& fx_inv, int i, double t, double* out,
                     int n1) {
  const Point plus = map(exp_step(x, basis_vector(x.schema, i, t)));
  const Point minus = map(exp_step(x, basis_vector(x.schema, i, -t)));
  const Point qp = group_mul(fx_inv, plus);
  const Point qm = group_mul(fx_inv, minus);
  for (int r = 0; r < n1; ++r) out[r] = (qp[r] - qm[r]) / (2.0 * t);
}

}  // namespace

BlockEstimate horizontal_block(const ContactMap& map, const Point& x, const DiffConfig& cfg) {
  if (!same_schema(map.schema, x.schema)) throw std::invalid_argument("horizontal_block: schema mismatch");
  const int n1 = x.schema->horizontal_dim();
  const Point fx_inv = inverse(map(x));

  BlockEstimate est;
  est.block = Mat(n1, n1);
  est.error = 0.0;

  std::vector<double> d1(static_cast<std::size_t>(n1)), d2(static_cast<std::size_t>(n1)),
      d4(static_cast<std::size_t>(n1));
  for (int i = 0; i < n1; ++i) {
    column_quotient(map, x, fx_inv, i, cfg.step, d1.data(), n1);
    column_quotient(map, x, fx_inv, i, cfg.step / 2.0, d2.data(), n1);
    column_quotient(map, x, fx_inv, i, cfg.step / 4.0, d4.data(), n1);
    for (int r = 0; r < n1; ++r) {
      // Central differences carry even-order error terms only.
      const double e1 = (4.0 * d2[static_cast<std::size_t>(r)] - d1[static_cast<std::size_t>(r)]) / 3.0;
      const double e2 = (4.0 * d4[static_cast<std::size_t>(r)] - d2[static_cast<std::size_t>(r)]) / 3.0;
      const double r2 = (16.0 * e2 - e1) / 15.0;
      est.block(r, i) = r2;
      est.error = std::max(est.error, std::abs(e2 - e1));
    }
  }
  const double scale = std::max(1.0, est.block.max_abs());
  est.converged = est.error <= cfg.tol * scale;
  return est;
}

GradedHom pansu_differential(const ContactMap& map, const Point& x, const DiffConfig& cfg, bool prefer_analytic) {
  if (prefer_analytic && map.has_analytic_differential()) return map.analytic_differential(x);
  const BlockEstimate est = horizontal_block(map, x, cfg);
  if (!est.converged)
    throw std::runtime_error("pansu_differential: finite-difference tower did not converge (spread " +
                             std::to_string(est.error) + ")");
  return complete_hom(est.block, x.schema);
}

double coarea_factor(const ContactMap& map, const Point& x, int j, const DiffConfig& cfg) {
  return coarea_factor_of_hom(pansu_differential(map, x, cfg), j);
}

double pansu_residual(const ContactMap& map, const Point& x, double r, int samples, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("pansu_residual: r must be positive");
  const GradedHom l = pansu_differential(map, x);
  const SchemaPtr& schema = x.schema;
  const int n = schema->dim();
  const Point fx_inv = inverse(map(x));

  double worst = 0.0;
  int accepted = 0;
  std::uint64_t stream = 0;
  while (accepted < samples) {
    Rng rng(seed, stream++);
    Coords xi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
    const Point cand(schema, std::move(xi));
    if (quasi_norm(cand) > 1.0) continue;  // rejection-sample the unit quasi-ball
    ++accepted;

    const Point moved = map(group_mul(x, dilate(r, cand)));
    const Point quotient = dilate(1.0 / r, group_mul(fx_inv, moved));
    const Point lin = l.apply(cand);
    worst = std::max(worst, quasi_dist(quotient, lin));
  }
  return worst;
}

CodistortionReport finite_codistortion_defect(const ContactMap& map, const std::vector<Point>& samples,
                                              const CodistortionThresholds& thresholds, const DiffConfig& cfg) {
  CodistortionReport report;
  report.samples = static_cast<int>(samples.size());
  if (samples.empty()) return report;
  const int n = samples.front().schema->dim();

  double scale = 1.0;
  std::vector<GradedHom> homs;
  homs.reserve(samples.size());
  for (const Point& x : samples) {
    homs.push_back(pansu_differential(map, x, cfg));
    scale = std::max(scale, homs.back().matrix.max_abs());
  }
  report.det_threshold = thresholds.det_base * powi(scale, n);
  report.adj_threshold = thresholds.adj_base * powi(scale, n - 1);

  for (const GradedHom& h : homs) {
    if (std::abs(h.det()) >= report.det_threshold) continue;
    ++report.singular_samples;
    const double a = adjugate(h.matrix).max_abs();
    report.max_adj_at_singular = std::max(report.max_adj_at_singular, a);
  }
  report.finite_codistortion = report.max_adj_at_singular <= report.adj_threshold;
  return report;
}

}  // namespace carnot
