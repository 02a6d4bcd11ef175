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

#include "carnot/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "carnot/parallel.hpp"
#include "carnot/rng.hpp"

namespace carnot {
namespace {

void check_box(const SchemaPtr& s, const Coords& lo, const Coords& hi) {
  if (!s) throw std::invalid_argument("Region: null schema");
  if (static_cast<int>(lo.size()) != s->dim() || static_cast<int>(hi.size()) != s->dim())
    throw std::invalid_argument("Region: box dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("Region: empty or inverted box axis");
}

double grid_pass(const std::function<double(const Point&)>& f, const Region& region, int n, int threads,
                 std::int64_t* evals) {
  const int dim = region.dim();
  std::int64_t cells = 1;
  for (int d = 0; d < dim; ++d) cells *= n;
  const double cell_vol = region.volume() / static_cast<double>(cells);

  std::vector<double> vals(static_cast<std::size_t>(cells));
  parallel_for(static_cast<std::size_t>(cells), threads, [&](std::size_t idx) {
    Coords u(static_cast<std::size_t>(dim));
    std::int64_t rem = static_cast<std::int64_t>(idx);
    for (int d = dim - 1; d >= 0; --d) {
      u[static_cast<std::size_t>(d)] = (static_cast<double>(rem % n) + 0.5) / n;
      rem /= n;
    }
    const double v = f(region.at_unit(u));
    if (!std::isfinite(v)) throw std::runtime_error("lebesgue_box_integral: nonfinite integrand value");
    vals[idx] = v;
  });

  KahanSum acc;
  for (double v : vals) acc.add(v);
  *evals += cells;
  return acc.value() * cell_vol;
}

}  // namespace

Region::Region(SchemaPtr s, Coords lo_, Coords hi_)
    : schema(std::move(s)), lo(std::move(lo_)), hi(std::move(hi_)), anchor(origin(schema)) {
  check_box(schema, lo, hi);
}

Region::Region(SchemaPtr s, Coords lo_, Coords hi_, Point anchor_)
    : schema(std::move(s)), lo(std::move(lo_)), hi(std::move(hi_)), anchor(std::move(anchor_)) {
  check_box(schema, lo, hi);
  if (!same_schema(schema, anchor.schema)) throw std::invalid_argument("Region: anchor schema mismatch");
}

double Region::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

Coords Region::local_coords(const Point& p) const {
  return group_mul(inverse(anchor), p).x;
}

bool Region::contains(const Point& p, double margin) const {
  const Coords c = local_coords(p);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] < lo[i] - margin || c[i] > hi[i] + margin) return false;
  return true;
}

Point Region::at_unit(const Coords& u) const {
  Coords c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = lo[i] + u[i] * (hi[i] - lo[i]);
  return group_mul(anchor, Point(schema, std::move(c)));
}

Region Region::translated(const Point& g) const {
  Region r = *this;
  r.anchor = group_mul(g, anchor);
  return r;
}

QuadratureSpec QuadratureSpec::parse(const std::string& text) {
  QuadratureSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "grid")
    spec.kind = Kind::Grid;
  else if (kind == "mc")
    spec.kind = Kind::MonteCarlo;
  else
    throw std::invalid_argument("quadrature spec must be grid:n or mc:n, got '" + text + "'");
  if (colon == std::string::npos) throw std::invalid_argument("quadrature spec missing ':n'");
  try {
    spec.n = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad quadrature resolution in '" + text + "'");
  }
  if (spec.n < 1) throw std::invalid_argument("quadrature resolution must be >= 1");
  return spec;
}

std::string QuadratureSpec::str() const {
  return (kind == Kind::Grid ? "grid:" : "mc:") + std::to_string(n);
}

IntegralEstimate lebesgue_box_integral(const std::function<double(const Point&)>& f, const Region& region,
                                       const QuadratureSpec& spec) {
  IntegralEstimate out;
  if (spec.kind == QuadratureSpec::Kind::Grid) {
    const double fine = grid_pass(f, region, spec.n, spec.threads, &out.evaluations);
    out.value = fine;
    if (spec.n >= 2) {
      const double coarse = grid_pass(f, region, spec.n / 2, spec.threads, &out.evaluations);
      // Midpoint rule is second order; the half-grid difference bounds
      // the fine-grid error up to the 1/3 Richardson factor.
      out.error = std::abs(fine - coarse) / 3.0;
    } else {
      out.error = std::abs(fine);
    }
    return out;
  }

  const int dim = region.dim();
  const std::int64_t n = spec.n;
  std::vector<double> vals(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), spec.threads, [&](std::size_t i) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(i));
    Coords u(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) u[static_cast<std::size_t>(d)] = rng.next_double();
    const double v = f(region.at_unit(u));
    if (!std::isfinite(v)) throw std::runtime_error("lebesgue_box_integral: nonfinite integrand value");
    vals[i] = v;
  });
  KahanSum sum;
  for (double v : vals) sum.add(v);
  const double mean = sum.value() / static_cast<double>(n);
  KahanSum var;
  for (double v : vals) var.add((v - mean) * (v - mean));
  const double sd = n > 1 ? std::sqrt(var.value() / static_cast<double>(n - 1)) : 0.0;
  out.value = mean * region.volume();
  out.error = region.volume() * sd / std::sqrt(static_cast<double>(n));
  out.evaluations = n;
  return out;
}

}  // namespace carnot
