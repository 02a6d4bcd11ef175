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

#include "carnot/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "carnot/parallel.hpp"

namespace carnot {
namespace {

double norm2(const Coords& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dist2(const Coords& a, const Coords& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Hyperplane residual of Pr_j(phi(x)) against a level value p, with a
// damped Gauss-Newton projection onto the level set. Shared by the
// tracer and the covering oracle's snap-to-set step.
struct ResidualSystem {
  const ContactMap* map;
  int j;
  Point p_embed_inv;  // inverse of the embedded level value

  ResidualSystem(const ContactMap& m, int j_, const Coords& p)
      : map(&m), j(j_), p_embed_inv(inverse(embed(HyperplanePoint(m.schema, j_, p)))) {}

  Coords residual(const Point& x) const {
    const HyperplanePoint q = proj_P((*map)(x), j);
    const Point diff = group_mul(p_embed_inv, embed(q));
    Coords r;
    r.reserve(static_cast<std::size_t>(diff.dim() - 1));
    for (int i = 0; i < diff.dim(); ++i)
      if (i != j) r.push_back(diff[i]);
    return r;
  }

  double residual_norm(const Point& x) const { return norm2(residual(x)); }

  Mat jacobian(const Point& x) const {
    const int dim = x.dim();
    const int pdim = dim - 1;
    Mat jac(pdim, dim);
    double scale = 1.0;
    for (int i = 0; i < dim; ++i) scale = std::max(scale, std::abs(x[i]));
    const double h = 1e-6 * scale;
    for (int c = 0; c < dim; ++c) {
      Coords xp = x.x, xm = x.x;
      xp[static_cast<std::size_t>(c)] += h;
      xm[static_cast<std::size_t>(c)] -= h;
      const Coords rp = residual(Point(x.schema, std::move(xp)));
      const Coords rm = residual(Point(x.schema, std::move(xm)));
      for (int r = 0; r < pdim; ++r)
        jac(r, c) = (rp[static_cast<std::size_t>(r)] - rm[static_cast<std::size_t>(r)]) / (2.0 * h);
    }
    return jac;
  }

  bool project(Point& x, double tol, int iters) const {
    Coords r = residual(x);
    double rn = norm2(r);
    for (int it = 0; it < iters && rn > tol; ++it) {
      const Mat jac = jacobian(x);
      const int pdim = jac.rows();
      Mat jjt(pdim, pdim);
      for (int a = 0; a < pdim; ++a)
        for (int b = 0; b < pdim; ++b) {
          double acc = 0.0;
          for (int c = 0; c < jac.cols(); ++c) acc += jac(a, c) * jac(b, c);
          jjt(a, b) = acc;
        }
      double trace = 0.0;
      for (int a = 0; a < pdim; ++a) trace += jjt(a, a);
      double lambda = 1e-12 * (1.0 + trace);

      bool improved = false;
      for (int attempt = 0; attempt < 8 && !improved; ++attempt) {
        Mat damped = jjt;
        for (int a = 0; a < pdim; ++a) damped(a, a) += lambda;
        std::vector<double> y;
        try {
          y = solve_linear(damped, r);
        } catch (const std::runtime_error&) {
          lambda = std::max(lambda * 100.0, 1e-9);
          continue;
        }
        Coords xn = x.x;
        for (int c = 0; c < jac.cols(); ++c) {
          double acc = 0.0;
          for (int a = 0; a < pdim; ++a) acc += jac(a, c) * y[static_cast<std::size_t>(a)];
          xn[static_cast<std::size_t>(c)] -= acc;
        }
        const Point cand(x.schema, std::move(xn));
        const Coords rc = residual(cand);
        const double rcn = norm2(rc);
        if (rcn < rn) {
          x = cand;
          r = rc;
          rn = rcn;
          improved = true;
        } else {
          lambda = std::max(lambda * 100.0, 1e-9);
        }
      }
      if (!improved) return rn <= tol;
    }
    return rn <= tol;
  }
};

// Euclidean distance from a point to a polyline (point-to-segment).
double dist_to_polyline(const Coords& x, const std::vector<Point>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Coords& a = pts[k].x;
    const Coords& b = pts[k + 1].x;
    double ab2 = 0.0, ax_ab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = b[i] - a[i];
      ab2 += d * d;
      ax_ab += (x[i] - a[i]) * d;
    }
    const double t = ab2 > 0.0 ? std::clamp(ax_ab / ab2, 0.0, 1.0) : 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = x[i] - (a[i] + t * (b[i] - a[i]));
      s += d * d;
    }
    best = std::min(best, std::sqrt(s));
  }
  if (pts.size() == 1) best = std::min(best, dist2(x, pts[0].x));
  return best;
}

}  // namespace

LevelSetContext::LevelSetContext(ContactMap map, int j, Region region, TracerConfig cfg, int bin_resolution,
                                 int threads)
    : map_(std::move(map)), j_(j), region_(std::move(region)), cfg_(cfg), bins_per_axis_(std::max(2, bin_resolution)) {
  const SchemaPtr& schema = region_.schema;
  if (!same_schema(schema, map_.schema)) throw std::invalid_argument("LevelSetContext: schema mismatch");
  if (j < 0 || j >= schema->horizontal_dim())
    throw std::invalid_argument("LevelSetContext: projection index outside horizontal range");
  const int dim = schema->dim();
  const int pdim = dim - 1;
  const int g = std::max(2, cfg_.scan_per_axis);

  double spacing = 0.0;
  for (int d = 0; d < dim; ++d)
    spacing = std::max(spacing, (region_.hi[static_cast<std::size_t>(d)] - region_.lo[static_cast<std::size_t>(d)]) / g);
  scan_spacing_ = spacing;

  std::int64_t count = 1;
  for (int d = 0; d < dim; ++d) count *= g;
  node_x_.resize(static_cast<std::size_t>(count));
  node_q_.resize(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t idx) {
    Coords u(static_cast<std::size_t>(dim));
    std::int64_t rem = static_cast<std::int64_t>(idx);
    for (int d = dim - 1; d >= 0; --d) {
      u[static_cast<std::size_t>(d)] = (static_cast<double>(rem % g) + 0.5) / g;
      rem /= g;
    }
    const Point x = region_.at_unit(u);
    node_x_[idx] = x.x;
    node_q_[idx] = proj_P(map_(x), j_).coords;
  });

  q_lo_.assign(static_cast<std::size_t>(pdim), std::numeric_limits<double>::infinity());
  q_hi_.assign(static_cast<std::size_t>(pdim), -std::numeric_limits<double>::infinity());
  for (const Coords& q : node_q_)
    for (int d = 0; d < pdim; ++d) {
      q_lo_[static_cast<std::size_t>(d)] = std::min(q_lo_[static_cast<std::size_t>(d)], q[static_cast<std::size_t>(d)]);
      q_hi_[static_cast<std::size_t>(d)] = std::max(q_hi_[static_cast<std::size_t>(d)], q[static_cast<std::size_t>(d)]);
    }

  // Largest projected-value jump between scan neighbors along each
  // axis; the seed search radius must cover one scan step.
  std::vector<std::int64_t> stride(static_cast<std::size_t>(dim));
  stride[static_cast<std::size_t>(dim - 1)] = 1;
  for (int d = dim - 2; d >= 0; --d)
    stride[static_cast<std::size_t>(d)] = stride[static_cast<std::size_t>(d + 1)] * g;
  double step_bound = 0.0;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    for (int d = 0; d < dim; ++d) {
      const std::int64_t coord = (idx / stride[static_cast<std::size_t>(d)]) % g;
      if (coord + 1 < g) {
        const std::size_t nb = static_cast<std::size_t>(idx + stride[static_cast<std::size_t>(d)]);
        step_bound = std::max(step_bound, dist2(node_q_[static_cast<std::size_t>(idx)], node_q_[nb]));
      }
    }
  }
  q_step_bound_ = step_bound;

  // Bin the nodes by projected value.
  bin_lo_.resize(static_cast<std::size_t>(pdim));
  bin_cell_.resize(static_cast<std::size_t>(pdim));
  for (int d = 0; d < pdim; ++d) {
    const double extent = q_hi_[static_cast<std::size_t>(d)] - q_lo_[static_cast<std::size_t>(d)];
    const double pad = std::max(1e-12, 1e-9 + 1e-6 * std::abs(extent));
    bin_lo_[static_cast<std::size_t>(d)] = q_lo_[static_cast<std::size_t>(d)] - pad;
    bin_cell_[static_cast<std::size_t>(d)] = (extent + 2.0 * pad) / bins_per_axis_;
  }
  std::int64_t nbins = 1;
  for (int d = 0; d < pdim; ++d) nbins *= bins_per_axis_;
  bins_.assign(static_cast<std::size_t>(nbins), {});
  for (std::size_t idx = 0; idx < node_q_.size(); ++idx) {
    std::int64_t key = 0;
    for (int d = 0; d < pdim; ++d) {
      int c = static_cast<int>((node_q_[idx][static_cast<std::size_t>(d)] - bin_lo_[static_cast<std::size_t>(d)]) /
                               bin_cell_[static_cast<std::size_t>(d)]);
      c = std::clamp(c, 0, bins_per_axis_ - 1);
      key = key * bins_per_axis_ + c;
    }
    bins_[static_cast<std::size_t>(key)].push_back(idx);
  }
}

Coords LevelSetContext::residual(const Point& x, const Coords& p) const {
  return ResidualSystem(map_, j_, p).residual(x);
}

double LevelSetContext::residual_norm(const Point& x, const Coords& p) const {
  return ResidualSystem(map_, j_, p).residual_norm(x);
}

Mat LevelSetContext::residual_jacobian(const Point& x, const Coords& p) const {
  return ResidualSystem(map_, j_, p).jacobian(x);
}

bool LevelSetContext::reproject(Point& x, const Coords& p, double tol, int iters) const {
  return ResidualSystem(map_, j_, p).project(x, tol, iters);
}

bool LevelSetContext::polish(Point& x, const Coords& p, double target) const {
  return reproject(x, p, target, 40);
}

bool LevelSetContext::unit_field(const Point& x, double sign, AlgebraVector* out) const {
  const GradedHom hom = cfg_.prefer_analytic && map_.has_analytic_differential()
                            ? map_.analytic_differential(x)
                            : pansu_differential(map_, x, cfg_.diff, false);
  const std::vector<double> col = adjugate_column_horizontal(hom, j_);
  double n = 0.0;
  for (double v : col) n += v * v;
  n = std::sqrt(n);
  if (n <= cfg_.tau_adj) return false;
  Coords c(static_cast<std::size_t>(x.dim()), 0.0);
  for (std::size_t i = 0; i < col.size(); ++i) c[i] = sign * col[i] / n;
  *out = AlgebraVector(x.schema, std::move(c));
  return true;
}

bool LevelSetContext::trace_direction(const Point& seed, const Coords& p, double sign, std::vector<Point>* out,
                                      bool* closed, TracedCurve* flags) const {
  Point x = seed;
  double h = cfg_.h_init;
  *closed = false;
  int steps = 0;
  for (;;) {
    if (steps >= cfg_.max_steps) {
      flags->hit_step_limit = true;
      return true;
    }
    AlgebraVector a(x.schema, Coords(static_cast<std::size_t>(x.dim()), 0.0));
    if (!unit_field(x, sign, &a)) {
      flags->stalled = true;
      return true;
    }

    // One Lie-midpoint step with curvature and correction control.
    Point xn = x;
    bool accepted = false;
    while (!accepted) {
      AlgebraVector half = a;
      for (double& v : half.v) v *= 0.5 * h;
      const Point xm = exp_step(x, half);
      AlgebraVector am(x.schema, Coords(static_cast<std::size_t>(x.dim()), 0.0));
      if (!unit_field(xm, sign, &am)) {
        flags->stalled = true;
        return true;
      }
      double turn = 0.0;
      for (int i = 0; i < x.dim(); ++i)
        turn += (am.v[static_cast<std::size_t>(i)] - a.v[static_cast<std::size_t>(i)]) *
                (am.v[static_cast<std::size_t>(i)] - a.v[static_cast<std::size_t>(i)]);
      turn = std::sqrt(turn);
      if (turn > 0.3 && h > cfg_.h_min) {
        h = std::max(cfg_.h_min, 0.5 * h);
        continue;
      }
      AlgebraVector full = am;
      for (double& v : full.v) v *= h;
      xn = exp_step(x, full);
      const Coords before = xn.x;
      if (!reproject(xn, p, cfg_.tau_track, 3)) {
        if (h > cfg_.h_min) {
          h = std::max(cfg_.h_min, 0.5 * h);
          continue;
        }
        flags->stalled = true;
        return true;
      }
      const double corr = dist2(before, xn.x);
      if (corr > 0.05 * h && h > cfg_.h_min) {
        h = std::max(cfg_.h_min, 0.5 * h);
        continue;
      }
      accepted = true;
      if (corr < 0.002 * h && turn < 0.05) h = std::min(cfg_.h_max, 1.3 * h);
    }

    if (!region_.contains(xn, 1e-12)) {
      // Bisect the exit point along the group segment.
      const AlgebraVector w = log_between(x, xn);
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        AlgebraVector wm = w;
        for (double& v : wm.v) v *= mid;
        if (region_.contains(exp_step(x, wm), 1e-12))
          lo = mid;
        else
          hi = mid;
      }
      AlgebraVector wl = w;
      for (double& v : wl.v) v *= lo;
      Point xb = exp_step(x, wl);
      reproject(xb, p, 3.0 * cfg_.tau_track, 2);
      if (xb.x != x.x) out->push_back(xb);
      return true;
    }

    out->push_back(xn);
    x = xn;
    ++steps;
    if (steps >= 8 && dist2(x.x, seed.x) < 0.6 * h) {
      *closed = true;
      return true;
    }
  }
}

TracedCurve LevelSetContext::trace_from(const Point& seed, const Coords& p) const {
  TracedCurve result;
  std::vector<Point> forward, backward;
  bool closed_fwd = false, closed_bwd = false;
  trace_direction(seed, p, +1.0, &forward, &closed_fwd, &result);
  if (!closed_fwd) trace_direction(seed, p, -1.0, &backward, &closed_bwd, &result);

  std::vector<Point> pts;
  pts.reserve(backward.size() + forward.size() + 1);
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) pts.push_back(*it);
  pts.push_back(seed);
  for (const Point& q : forward) pts.push_back(q);
  if (pts.size() >= 2) {
    result.curve = make_curve(std::move(pts));
    result.length = horizontal_length(result.curve, cfg_.tau_h_trace);
  }
  return result;
}

std::vector<LevelSetContext::Candidate> LevelSetContext::candidates_near(const Coords& p, double radius) const {
  const int pdim = static_cast<int>(p.size());
  std::vector<int> lo(static_cast<std::size_t>(pdim)), hi(static_cast<std::size_t>(pdim));
  for (int d = 0; d < pdim; ++d) {
    const double cell = bin_cell_[static_cast<std::size_t>(d)];
    int a = static_cast<int>(std::floor((p[static_cast<std::size_t>(d)] - radius - bin_lo_[static_cast<std::size_t>(d)]) / cell));
    int b = static_cast<int>(std::floor((p[static_cast<std::size_t>(d)] + radius - bin_lo_[static_cast<std::size_t>(d)]) / cell));
    if (b < 0 || a >= bins_per_axis_) return {};
    lo[static_cast<std::size_t>(d)] = std::clamp(a, 0, bins_per_axis_ - 1);
    hi[static_cast<std::size_t>(d)] = std::clamp(b, 0, bins_per_axis_ - 1);
  }

  std::vector<Candidate> found;
  std::vector<int> cur = lo;
  for (;;) {
    std::int64_t key = 0;
    for (int d = 0; d < pdim; ++d) key = key * bins_per_axis_ + cur[static_cast<std::size_t>(d)];
    for (std::size_t node : bins_[static_cast<std::size_t>(key)]) {
      const double dist = dist2(node_q_[node], p);
      if (dist <= radius) found.push_back({node, dist});
    }
    int d = pdim - 1;
    for (; d >= 0; --d) {
      if (++cur[static_cast<std::size_t>(d)] <= hi[static_cast<std::size_t>(d)]) break;
      cur[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)];
    }
    if (d < 0) break;
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.node < b.node);
  });
  if (static_cast<int>(found.size()) > cfg_.max_candidates) found.resize(static_cast<std::size_t>(cfg_.max_candidates));
  return found;
}

std::vector<TracedCurve> LevelSetContext::trace_at(const Coords& p, double extra_radius, TraceStats* stats) const {
  TraceStats local;
  const double radius = 1.5 * q_step_bound_ + extra_radius + 1e-9;
  const auto cands = candidates_near(p, radius);
  local.candidates = static_cast<int>(cands.size());

  std::vector<TracedCurve> curves;
  std::vector<Coords> polished_seeds;
  for (const Candidate& cand : cands) {
    const Coords& xc = node_x_[cand.node];
    bool same_basin = false;
    for (const Coords& s : polished_seeds)
      if (dist2(xc, s) < 1.2 * scan_spacing_) {
        same_basin = true;
        break;
      }
    if (!same_basin)
      for (const TracedCurve& c : curves)
        if (!c.curve.points.empty() && dist_to_polyline(xc, c.curve.points) < std::max(cfg_.dedup_dist, 1.2 * scan_spacing_)) {
          same_basin = true;
          break;
        }
    if (same_basin) continue;

    Point x(region_.schema, xc);
    if (!polish(x, p, 0.25 * cfg_.tau_track)) {
      ++local.dropped;
      continue;
    }
    if (residual_norm(x, p) > std::min(cfg_.tau_seed, 0.5 * cfg_.tau_track) || !region_.contains(x, scan_spacing_)) {
      ++local.dropped;
      continue;
    }
    ++local.polished;
    polished_seeds.push_back(x.x);

    bool duplicate = false;
    for (const TracedCurve& c : curves)
      if (!c.curve.points.empty() && dist_to_polyline(x.x, c.curve.points) < cfg_.dedup_dist) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;
    if (!region_.contains(x, 1e-12)) continue;  // polished onto the outside margin

    TracedCurve traced = trace_from(x, p);
    if (!traced.curve.points.empty() || traced.stalled) curves.push_back(std::move(traced));
  }

  if (stats) *stats = local;
  return curves;
}

std::vector<TracedCurve> level_set_trace(const ContactMap& map, const HyperplanePoint& p, int j,
                                         const Region& region, const TracerConfig& cfg) {
  if (!same_schema(map.schema, p.schema)) throw std::invalid_argument("level_set_trace: schema mismatch");
  if (p.j != j) throw std::invalid_argument("level_set_trace: hyperplane index disagrees with j");
  LevelSetContext ctx(map, j, region, cfg);
  return ctx.trace_at(p.coords, 0.0, nullptr);
}

double lhs_covering_oracle(const ContactMap& map, const HyperplanePoint& p, int j, const Region& region,
                           double eps, const BandConfig& cfg) {
  if (!same_schema(map.schema, region.schema)) throw std::invalid_argument("lhs_covering_oracle: schema mismatch");
  const SchemaPtr& schema = region.schema;
  const int dim = schema->dim();
  const int g = std::max(4, cfg.grid_res);
  const ResidualSystem sys(map, j, p.coords);

  double cell_max = 0.0;
  for (int d = 0; d < dim; ++d)
    cell_max = std::max(cell_max, (region.hi[static_cast<std::size_t>(d)] - region.lo[static_cast<std::size_t>(d)]) / g);

  double tau_band = cfg.tau_band;
  if (tau_band <= 0.0) {
    // Residual gradient bound from central differences at a coarse lattice.
    double grad = 0.0;
    const int gl = 5;
    std::int64_t lat = 1;
    for (int d = 0; d < dim; ++d) lat *= gl;
    for (std::int64_t idx = 0; idx < lat; ++idx) {
      Coords u(static_cast<std::size_t>(dim));
      std::int64_t rem = idx;
      for (int d = dim - 1; d >= 0; --d) {
        u[static_cast<std::size_t>(d)] = (static_cast<double>(rem % gl) + 0.5) / gl;
        rem /= gl;
      }
      const Point x = region.at_unit(u);
      const double h = 1e-5;
      for (int d = 0; d < dim; ++d) {
        Coords xp = x.x, xm = x.x;
        xp[static_cast<std::size_t>(d)] += h;
        xm[static_cast<std::size_t>(d)] -= h;
        const double df = std::abs(sys.residual_norm(Point(schema, std::move(xp))) -
                                   sys.residual_norm(Point(schema, std::move(xm)))) /
                          (2.0 * h);
        grad = std::max(grad, df);
      }
    }
    tau_band = cfg.band_factor * cell_max * std::max(grad, 1e-6);
  }

  // Band nodes are only Euclidean-close to the level set; their vertical
  // offsets are quasi-metrically large (a 1e-2 offset in a degree-2
  // coordinate is quasi-distance 1e-1). Snap each band node onto the
  // level set before covering, so the cloud samples the set itself.
  std::int64_t count = 1;
  for (int d = 0; d < dim; ++d) count *= g;
  std::vector<char> keep(static_cast<std::size_t>(count), 0);
  std::vector<Coords> snapped(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), cfg.threads, [&](std::size_t idx) {
    Coords u(static_cast<std::size_t>(dim));
    std::int64_t rem = static_cast<std::int64_t>(idx);
    for (int d = dim - 1; d >= 0; --d) {
      u[static_cast<std::size_t>(d)] = (static_cast<double>(rem % g) + 0.5) / g;
      rem /= g;
    }
    Point x = region.at_unit(u);
    if (sys.residual_norm(x) > tau_band) return;
    if (!sys.project(x, 1e-10, 8)) return;
    if (!region.contains(x, 1e-12)) return;
    keep[idx] = 1;
    snapped[idx] = x.x;
  });

  std::vector<Point> samples;
  for (std::int64_t idx = 0; idx < count; ++idx)
    if (keep[static_cast<std::size_t>(idx)]) samples.emplace_back(schema, snapped[static_cast<std::size_t>(idx)]);
  return hausdorff1_eps(samples, eps, cfg.norm);
}

}  // namespace carnot
