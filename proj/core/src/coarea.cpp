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

#include "carnot/coarea.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "carnot/parallel.hpp"
#include "carnot/rng.hpp"

namespace carnot {
namespace {

bool is_h1_shape(const GroupSchema& s) { return s.dim() == 3 && s.horizontal_dim() == 2; }

struct LhsPass {
  double value = 0.0;
  std::vector<PDiagnostics> diagnostics;
  int flagged = 0;
};

LhsPass lhs_pass(const LevelSetContext& ctx, const Coords& wlo, const Coords& whi, int n, std::uint64_t seed,
                 int threads, bool want_diagnostics) {
  const int pdim = static_cast<int>(wlo.size());
  std::int64_t cells = 1;
  for (int d = 0; d < pdim; ++d) cells *= n;

  Coords cell(static_cast<std::size_t>(pdim));
  double cell_vol = 1.0;
  double cell_diag = 0.0;
  for (int d = 0; d < pdim; ++d) {
    cell[static_cast<std::size_t>(d)] = (whi[static_cast<std::size_t>(d)] - wlo[static_cast<std::size_t>(d)]) / n;
    cell_vol *= cell[static_cast<std::size_t>(d)];
    cell_diag += cell[static_cast<std::size_t>(d)] * cell[static_cast<std::size_t>(d)];
  }
  cell_diag = std::sqrt(cell_diag);

  std::vector<double> lengths(static_cast<std::size_t>(cells), 0.0);
  std::vector<PDiagnostics> diags(want_diagnostics ? static_cast<std::size_t>(cells) : 0);
  std::vector<char> flags(static_cast<std::size_t>(cells), 0);

  parallel_for(static_cast<std::size_t>(cells), threads, [&](std::size_t idx) {
    Rng rng(seed, static_cast<std::uint64_t>(idx));
    Coords p(static_cast<std::size_t>(pdim));
    std::int64_t rem = static_cast<std::int64_t>(idx);
    for (int d = pdim - 1; d >= 0; --d) {
      const double u = rng.next_double();
      p[static_cast<std::size_t>(d)] =
          wlo[static_cast<std::size_t>(d)] + (static_cast<double>(rem % n) + u) * cell[static_cast<std::size_t>(d)];
      rem /= n;
    }

    TraceStats stats;
    const auto curves = ctx.trace_at(p, cell_diag, &stats);
    double total = 0.0;
    bool flagged = false;
    for (const auto& c : curves) {
      total += c.length;
      flagged = flagged || c.stalled || c.hit_step_limit;
    }
    lengths[idx] = total;
    flags[idx] = flagged ? 1 : 0;
    if (want_diagnostics) {
      PDiagnostics d;
      d.p = p;
      d.candidates = stats.candidates;
      d.seeds = stats.polished;
      d.dropped = stats.dropped;
      d.curves = static_cast<int>(curves.size());
      d.length = total;
      d.flagged = flagged;
      diags[idx] = std::move(d);
    }
  });

  LhsPass out;
  KahanSum acc;
  for (double v : lengths) acc.add(v);
  out.value = acc.value() * cell_vol;
  for (char f : flags) out.flagged += f;
  out.diagnostics = std::move(diags);
  return out;
}

}  // namespace

RhsEstimate rhs_integral(const ContactMap& map, const Region& region, int j, const RhsConfig& cfg) {
  if (!same_schema(map.schema, region.schema)) throw std::invalid_argument("rhs_integral: schema mismatch");
  if (j < 0 || j >= region.schema->horizontal_dim())
    throw std::invalid_argument("rhs_integral: projection index outside horizontal range");

  std::atomic<std::int64_t> failures{0};
  auto factor = [&](const Point& x) -> double {
    try {
      const GradedHom hom = cfg.prefer_analytic && map.has_analytic_differential()
                                ? map.analytic_differential(x)
                                : pansu_differential(map, x, cfg.diff, false);
      return coarea_factor_of_hom(hom, j);
    } catch (const std::runtime_error&) {
      failures.fetch_add(1, std::memory_order_relaxed);
      return 0.0;
    }
  };

  const IntegralEstimate est = lebesgue_box_integral(factor, region, cfg.quad);
  RhsEstimate out;
  out.value = est.value;
  out.error = est.error;
  out.evaluations = est.evaluations;
  out.failures = failures.load();
  if (out.evaluations > 0 &&
      static_cast<double>(out.failures) > cfg.failure_budget * static_cast<double>(out.evaluations))
    throw std::runtime_error("rhs_integral: differential failures exceed budget (" + std::to_string(out.failures) +
                             " of " + std::to_string(out.evaluations) + " nodes)");
  return out;
}

LhsEstimate lhs_integral(const ContactMap& map, const Region& region, int j, const PGridConfig& cfg) {
  LevelSetContext ctx(map, j, region, cfg.tracer, std::max(8, cfg.n), cfg.threads);

  const int pdim = region.schema->dim() - 1;
  Coords wlo = ctx.q_lo();
  Coords whi = ctx.q_hi();
  for (int d = 0; d < pdim; ++d) {
    const double extent = whi[static_cast<std::size_t>(d)] - wlo[static_cast<std::size_t>(d)];
    const double pad = cfg.pad_rel * std::max(extent, 1e-6);
    wlo[static_cast<std::size_t>(d)] -= pad;
    whi[static_cast<std::size_t>(d)] += pad;
  }

  const LhsPass fine = lhs_pass(ctx, wlo, whi, cfg.n, cfg.seed, cfg.threads, true);
  LhsEstimate out;
  out.value = fine.value;
  out.diagnostics = fine.diagnostics;
  out.flagged_fraction =
      fine.diagnostics.empty() ? 0.0 : static_cast<double>(fine.flagged) / static_cast<double>(fine.diagnostics.size());
  out.window_lo = wlo;
  out.window_hi = whi;

  if (cfg.n >= 2) {
    const LhsPass coarse = lhs_pass(ctx, wlo, whi, cfg.n / 2, cfg.seed, cfg.threads, false);
    out.error = std::abs(fine.value - coarse.value);
  } else {
    out.error = std::abs(fine.value);
  }
  return out;
}

CoareaReport verify_coarea(const ContactMap& map, const Region& region, int j, const CoareaConfig& cfg) {
  CoareaReport report;
  report.schema_name = region.schema->name();
  report.map_name = map.name;
  report.j = j + 1;
  report.box_lo = region.lo;
  report.box_hi = region.hi;

  const RhsEstimate rhs = rhs_integral(map, region, j, cfg.rhs);
  const LhsEstimate lhs = lhs_integral(map, region, j, cfg.pgrid);

  report.rhs = {rhs.value, rhs.error};
  report.lhs = {lhs.value, lhs.error};
  report.slack = rhs.value - lhs.value;
  report.diagnostics = lhs.diagnostics;
  report.flagged_fraction = lhs.flagged_fraction;

  report.quad_spec = cfg.rhs.quad.str();
  report.p_grid_n = cfg.pgrid.n;
  report.seed = cfg.pgrid.seed;
  report.threads = cfg.pgrid.threads;
  report.tau_verdict = cfg.tau_verdict;
  report.tau_seed = cfg.pgrid.tracer.tau_seed;
  report.tau_track = cfg.pgrid.tracer.tau_track;
  report.tau_adj = cfg.pgrid.tracer.tau_adj;
  report.differential_mode =
      cfg.rhs.prefer_analytic && map.has_analytic_differential() ? "analytic" : "numeric";
  report.equality_expected = map.finite_codistortion || is_h1_shape(*region.schema);

  report.verdict = coarea_verdict(report.lhs, report.rhs, report.equality_expected, cfg.tau_verdict);
  return report;
}

std::string coarea_verdict(const ErrorBar& lhs, const ErrorBar& rhs, bool equality_expected, double tau_verdict) {
  const double scale = std::max({std::abs(lhs.value), std::abs(rhs.value), 1e-6});
  const double combined_tol = lhs.error + rhs.error + tau_verdict * scale;
  if (lhs.value > rhs.value + combined_tol) return "violation";
  if (equality_expected &&
      std::abs(lhs.value - rhs.value) <= std::max(0.05 * std::max(std::abs(lhs.value), std::abs(rhs.value)), 1e-6))
    return "equality-ok";
  return "inequality-ok";
}

EilenbergResult eilenberg_bound_check(const ContactMap& map, const Region& region, int j, const PGridConfig& cfg) {
  if (!map.lipschitz_bound.has_value())
    throw std::invalid_argument("eilenberg_bound_check: map has no Lipschitz estimate");
  EilenbergResult out;
  out.lhs = lhs_integral(map, region, j, cfg).value;
  out.bound = powi(*map.lipschitz_bound, region.schema->hdim() - 1) * region.volume();
  out.ratio = out.bound > 0.0 ? out.lhs / out.bound : 0.0;
  return out;
}

}  // namespace carnot
