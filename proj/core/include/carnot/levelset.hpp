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

#include "carnot/contact_map.hpp"
#include "carnot/curve.hpp"
#include "carnot/hausdorff.hpp"
#include "carnot/pansu.hpp"
#include "carnot/projection.hpp"

namespace carnot {

struct TracerConfig {
  double tau_seed = 1e-4;    // accepted residual of a polished seed
  double tau_track = 1e-7;   // residual maintained along the traced curve
  double tau_adj = 1e-9;     // coarea-factor stall threshold
  double h_init = 0.02;
  double h_min = 1e-4;
  double h_max = 0.05;
  int max_steps = 20000;
  int max_candidates = 24;   // scan candidates examined per level value
  int scan_per_axis = 40;    // seed-scan resolution over the region
  double dedup_dist = 0.01;  // traces closer than this are one curve
  double tau_h_trace = 0.02; // horizontality coherence check on traced curves
  DiffConfig diff{};
  bool prefer_analytic = true;
};

struct TracedCurve {
  PolyCurve curve;
  double length = 0.0;
  bool stalled = false;         // factor fell below tau_adj; curve truncated
  bool hit_step_limit = false;
};

struct TraceStats {
  int candidates = 0;
  int polished = 0;
  int dropped = 0;  // polish divergence
};

/// Precomputed seed index for level-set tracing: one projection pass
/// over a lattice of the region, with nodes binned by their projected
/// value so that seeds for any level value p are found in O(1).
class LevelSetContext {
 public:
  LevelSetContext(ContactMap map, int j, Region region, TracerConfig cfg, int bin_resolution = 32,
                  int threads = 1);

  const Coords& q_lo() const { return q_lo_; }
  const Coords& q_hi() const { return q_hi_; }
  /// Bound on the projected-value change across one scan step; the
  /// candidate search radius is derived from it.
  double q_step_bound() const { return q_step_bound_; }
  double scan_spacing() const { return scan_spacing_; }
  const Region& region() const { return region_; }
  const ContactMap& map() const { return map_; }
  int j() const { return j_; }

  /// Traces every level-curve component through p (N-1 hyperplane
  /// coordinates). extra_radius widens the candidate search in
  /// projected space (callers add their own p-grid cell diagonal).
  std::vector<TracedCurve> trace_at(const Coords& p, double extra_radius, TraceStats* stats) const;

  /// Euclidean norm of the hyperplane residual Pr_j(phi(x)) (-) p.
  double residual_norm(const Point& x, const Coords& p) const;

 private:
  struct Candidate {
    std::size_t node;
    double dist;
  };

  Coords residual(const Point& x, const Coords& p) const;
  Mat residual_jacobian(const Point& x, const Coords& p) const;
  bool polish(Point& x, const Coords& p, double target) const;
  bool reproject(Point& x, const Coords& p, double tol, int iters) const;
  /// Unit tangent (sign * adj column / norm); false on stall.
  bool unit_field(const Point& x, double sign, AlgebraVector* out) const;
  TracedCurve trace_from(const Point& seed, const Coords& p) const;
  bool trace_direction(const Point& seed, const Coords& p, double sign, std::vector<Point>* out,
                       bool* closed, TracedCurve* flags) const;
  std::vector<Candidate> candidates_near(const Coords& p, double radius) const;

  ContactMap map_;
  int j_;
  Region region_;
  TracerConfig cfg_;
  int bins_per_axis_;
  std::vector<Coords> node_x_;   // chart coordinates of scan nodes
  std::vector<Coords> node_q_;   // projected values, N-1 coords
  std::vector<std::vector<std::size_t>> bins_;
  Coords q_lo_, q_hi_;           // raw projected range
  Coords bin_lo_, bin_cell_;
  double q_step_bound_ = 0.0;
  double scan_spacing_ = 0.0;
};

/// One-off tracing through a single level value (builds its own scan).
std::vector<TracedCurve> level_set_trace(const ContactMap& map, const HyperplanePoint& p, int j,
                                         const Region& region, const TracerConfig& cfg = {});

struct BandConfig {
  int grid_res = 96;         // per-axis band-scan resolution
  double band_factor = 1.2;  // tau_band = factor * scan cell size * residual gradient bound
  double tau_band = 0.0;     // explicit band half-width; 0 selects the automatic rule
  QuasiNormConfig norm{};
  int threads = 1;
};

/// Tracer-independent upper estimate of H^1(level set of p within the
/// region): a fine residual-band scan feeding the greedy covering
/// estimator. Empty band yields 0.
double lhs_covering_oracle(const ContactMap& map, const HyperplanePoint& p, int j, const Region& region,
                           double eps, const BandConfig& cfg = {});

}  // namespace carnot
