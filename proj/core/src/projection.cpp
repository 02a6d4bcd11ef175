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

#include "carnot/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "carnot/parallel.hpp"

namespace carnot {
namespace {

void require_horizontal_index(const GroupSchema& s, int j) {
  if (j < 0 || j >= s.horizontal_dim())
    throw std::invalid_argument("projection index " + std::to_string(j + 1) + " is outside the horizontal range 1.." +
                                std::to_string(s.horizontal_dim()));
}

// Adaptive Simpson with jump-tolerant depth cap; integrands here are
// polynomials along the line except for indicator-type discontinuities.
double adaptive_simpson(const std::function<double(double)>& g, double a, double fa, double m, double fm, double b,
                        double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(g, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(g, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

double integrate_1d(const std::function<double(double)>& g, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = g(a);
  const double fm = g(m);
  const double fb = g(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(g, a, fa, m, fm, b, fb, whole, tol, 48);
}

}  // namespace

HyperplanePoint::HyperplanePoint(SchemaPtr s, int j_, Coords c) : schema(std::move(s)), j(j_), coords(std::move(c)) {
  if (!schema) throw std::invalid_argument("HyperplanePoint: null schema");
  require_horizontal_index(*schema, j);
  if (static_cast<int>(coords.size()) != schema->dim() - 1)
    throw std::invalid_argument("HyperplanePoint: expected N-1 coordinates");
}

Point embed(const HyperplanePoint& p) {
  Coords c(static_cast<std::size_t>(p.schema->dim()));
  for (int i = 0, at = 0; i < p.schema->dim(); ++i)
    c[static_cast<std::size_t>(i)] = (i == p.j) ? 0.0 : p.coords[static_cast<std::size_t>(at++)];
  return Point(p.schema, std::move(c));
}

HyperplanePoint proj_P(const Point& x, int j) {
  require_horizontal_index(*x.schema, j);
  const Point p = exp_step(x, basis_vector(x.schema, j, -x[j]));
  Coords c;
  c.reserve(static_cast<std::size_t>(x.dim() - 1));
  for (int i = 0; i < x.dim(); ++i)
    if (i != j) c.push_back(p[i]);
  return HyperplanePoint(x.schema, j, std::move(c));
}

double proj_scalar(const Point& x, int j) {
  require_horizontal_index(*x.schema, j);
  return x[j];
}

double conjugation_identity_defect(const Point& x, const Point& y, int j) {
  require_horizontal_index(*x.schema, j);
  const Point lhs = embed(proj_P(group_mul(x, y), j));
  const AlgebraVector xj = basis_vector(x.schema, j, x[j]);
  const AlgebraVector xj_neg = basis_vector(x.schema, j, -x[j]);
  Point rhs = embed(proj_P(x, j));
  rhs = exp_step(rhs, xj);
  rhs = group_mul(rhs, embed(proj_P(y, j)));
  rhs = exp_step(rhs, xj_neg);
  return quasi_dist(lhs, rhs);
}

FubiniResult fubini_check(const std::function<double(const Point&)>& f, const Region& box, int j,
                          const FubiniConfig& cfg) {
  const SchemaPtr& schema = box.schema;
  require_horizontal_index(*schema, j);
  const int dim = schema->dim();
  const int pdim = dim - 1;

  // Window of Pr_j over the box, bounded by sampling box corners, face
  // centers and a midpoint lattice, then padded. Points of the box that
  // project outside the padded window only cost zeros of the extended
  // integrand, never mass.
  Coords wlo(static_cast<std::size_t>(pdim), std::numeric_limits<double>::infinity());
  Coords whi(static_cast<std::size_t>(pdim), -std::numeric_limits<double>::infinity());
  auto absorb = [&](const Point& x) {
    const HyperplanePoint p = proj_P(x, j);
    for (int d = 0; d < pdim; ++d) {
      wlo[static_cast<std::size_t>(d)] = std::min(wlo[static_cast<std::size_t>(d)], p.coords[static_cast<std::size_t>(d)]);
      whi[static_cast<std::size_t>(d)] = std::max(whi[static_cast<std::size_t>(d)], p.coords[static_cast<std::size_t>(d)]);
    }
  };
  const int lattice = 5;
  std::int64_t nodes = 1;
  for (int d = 0; d < dim; ++d) nodes *= lattice;
  for (std::int64_t idx = 0; idx < nodes; ++idx) {
    Coords u(static_cast<std::size_t>(dim));
    std::int64_t rem = idx;
    for (int d = dim - 1; d >= 0; --d) {
      u[static_cast<std::size_t>(d)] = static_cast<double>(rem % lattice) / (lattice - 1);
      rem /= lattice;
    }
    absorb(box.at_unit(u));
  }
  for (int d = 0; d < pdim; ++d) {
    const double pad =
        cfg.window_pad * std::max(whi[static_cast<std::size_t>(d)] - wlo[static_cast<std::size_t>(d)], 1e-12);
    wlo[static_cast<std::size_t>(d)] -= pad;
    whi[static_cast<std::size_t>(d)] += pad;
    if (!(whi[static_cast<std::size_t>(d)] > wlo[static_cast<std::size_t>(d)])) {
      wlo[static_cast<std::size_t>(d)] -= 1e-9;
      whi[static_cast<std::size_t>(d)] += 1e-9;
    }
  }

  // The j-th coordinate of p exp(t X_j) is exactly t, and the j-th
  // local coordinate relative to the anchor shifts by anchor_j, so the
  // t-range is the box's j-axis extent offset by the anchor.
  const double tlo = box.anchor[j] + box.lo[static_cast<std::size_t>(j)];
  const double thi = box.anchor[j] + box.hi[static_cast<std::size_t>(j)];

  std::int64_t pcells = 1;
  for (int d = 0; d < pdim; ++d) pcells *= cfg.outer_n;
  double pcell_vol = 1.0;
  for (int d = 0; d < pdim; ++d)
    pcell_vol *= (whi[static_cast<std::size_t>(d)] - wlo[static_cast<std::size_t>(d)]) / cfg.outer_n;

  std::vector<double> inner(static_cast<std::size_t>(pcells));
  parallel_for(static_cast<std::size_t>(pcells), cfg.threads, [&](std::size_t idx) {
    Coords pc(static_cast<std::size_t>(pdim));
    std::int64_t rem = static_cast<std::int64_t>(idx);
    for (int d = pdim - 1; d >= 0; --d) {
      pc[static_cast<std::size_t>(d)] =
          wlo[static_cast<std::size_t>(d)] + (static_cast<double>(rem % cfg.outer_n) + 0.5) *
                                                 (whi[static_cast<std::size_t>(d)] - wlo[static_cast<std::size_t>(d)]) /
                                                 cfg.outer_n;
      rem /= cfg.outer_n;
    }
    const Point base = embed(HyperplanePoint(schema, j, pc));
    auto line_point = [&](double t) { return exp_step(base, basis_vector(schema, j, t)); };
    auto inside = [&](double t) { return box.contains(line_point(t)); };

    // Bracket entry/exit parameters on a scan of the t-extent, then
    // bisect each sign change to machine precision.
    std::vector<std::pair<double, double>> intervals;
    const int m = cfg.inner_scan;
    double prev_t = tlo;
    bool prev_in = inside(prev_t);
    double open_at = prev_in ? tlo : 0.0;
    for (int s = 1; s <= m; ++s) {
      const double t = tlo + (thi - tlo) * static_cast<double>(s) / m;
      const bool now_in = inside(t);
      if (now_in != prev_in) {
        double a = prev_t, b = t;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (a + b);
          if (inside(mid) == prev_in)
            a = mid;
          else
            b = mid;
        }
        const double crossing = 0.5 * (a + b);
        if (prev_in)
          intervals.push_back({open_at, crossing});
        else
          open_at = crossing;
      }
      prev_t = t;
      prev_in = now_in;
    }
    if (prev_in) intervals.push_back({open_at, thi});

    double acc = 0.0;
    for (const auto& [a, b] : intervals) {
      acc += integrate_1d([&](double t) { return f(line_point(t)); }, a, b, 1e-12);
    }
    inner[idx] = acc;
  });

  KahanSum lhs_sum;
  for (double v : inner) lhs_sum.add(v);

  FubiniResult out;
  out.lhs = lhs_sum.value() * pcell_vol;

  QuadratureSpec rhs_spec;
  rhs_spec.kind = QuadratureSpec::Kind::Grid;
  rhs_spec.n = cfg.outer_n;
  rhs_spec.threads = cfg.threads;
  const IntegralEstimate rhs = lebesgue_box_integral(f, box, rhs_spec);
  out.rhs = rhs.value;
  out.rhs_error = rhs.error;
  const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-12});
  out.rel_gap = std::abs(out.lhs - out.rhs) / scale;
  return out;
}

}  // namespace carnot
