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

#include <string>

#include "carnot/levelset.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

struct ErrorBar {
  double value = 0.0;
  double error = 0.0;
};

struct RhsEstimate {
  double value = 0.0;
  double error = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t failures = 0;  // differential estimation failures (within budget)
};

struct RhsConfig {
  QuadratureSpec quad{};
  DiffConfig diff{};
  bool prefer_analytic = true;
  double failure_budget = 1e-3;  // allowed fraction of failed nodes
};

/// Bulk side: quadrature of the coarea factor |adj D phi <X_j>| over the
/// region (Lebesgue-normalized). Differential failures beyond the budget
/// fraction of nodes raise an error.
RhsEstimate rhs_integral(const ContactMap& map, const Region& region, int j, const RhsConfig& cfg = {});

struct PGridConfig {
  int n = 64;                // per-axis hyperplane grid resolution
  std::uint64_t seed = 1;    // jitter stream
  double pad_rel = 0.05;     // window padding relative to the projected extent
  int threads = 1;
  TracerConfig tracer{};
};

struct PDiagnostics {
  Coords p;
  int candidates = 0;
  int seeds = 0;
  int dropped = 0;
  int curves = 0;
  double length = 0.0;
  bool flagged = false;  // stall or step-limit on some curve
};

struct LhsEstimate {
  double value = 0.0;
  double error = 0.0;  // half-grid refinement difference
  std::vector<PDiagnostics> diagnostics;
  double flagged_fraction = 0.0;
  Coords window_lo, window_hi;
};

/// Level-set side: jittered-grid quadrature over the projected window of
/// the traced level-curve lengths (Lebesgue-normalized iterated
/// integral). Jitter makes the grid miss measure-zero exceptional level
/// values almost surely.
LhsEstimate lhs_integral(const ContactMap& map, const Region& region, int j, const PGridConfig& cfg = {});

struct CoareaConfig {
  RhsConfig rhs{};
  PGridConfig pgrid{};
  double tau_verdict = 1e-3;  // relative verdict tolerance
};

struct CoareaReport {
  std::string schema_name;
  std::string map_name;
  int j = 0;  // 1-based in reports
  Coords box_lo, box_hi;
  ErrorBar lhs, rhs;
  double slack = 0.0;  // rhs - lhs
  std::string verdict;  // "equality-ok" | "inequality-ok" | "violation"
  std::vector<PDiagnostics> diagnostics;
  double flagged_fraction = 0.0;
  // settings echo
  std::string quad_spec;
  int p_grid_n = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  double tau_verdict = 0.0;
  double tau_seed = 0.0, tau_track = 0.0, tau_adj = 0.0;
  std::string differential_mode;
  bool equality_expected = false;
};

/// Verdict rule: "violation" iff lhs > rhs + (lhs_err + rhs_err +
/// tau_verdict * scale); "equality-ok" when equality is expected and the
/// sides agree within 5% (with a small absolute floor for doubly-zero
/// cases); otherwise "inequality-ok".
std::string coarea_verdict(const ErrorBar& lhs, const ErrorBar& rhs, bool equality_expected, double tau_verdict);

/// Estimates both sides, applies the verdict rule: a violation means
/// lhs exceeds rhs beyond the combined error tolerance; equality is
/// asserted for finite-codistortion maps and on heisenberg(1).
CoareaReport verify_coarea(const ContactMap& map, const Region& region, int j, const CoareaConfig& cfg = {});

struct EilenbergResult {
  double lhs = 0.0;
  double bound = 0.0;  // Lip^(nu-1) * volume
  double ratio = 0.0;
};

/// Qualitative Eilenberg-type check: the level-set side against
/// Lip(phi)^(nu-1) times the bulk volume. Requires a Lipschitz bound on
/// the map; the interesting property is uniform boundedness of the
/// ratio across a fixture family.
EilenbergResult eilenberg_bound_check(const ContactMap& map, const Region& region, int j,
                                      const PGridConfig& cfg = {});

}  // namespace carnot
