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

#include "carnot/contact_map.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace carnot {
namespace {

using Params = std::map<std::string, double>;

std::pair<std::string, Params> parse_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  Params params;
  if (colon != std::string::npos) {
    std::istringstream in(spec.substr(colon + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("map parameter '" + item + "' is not key=value");
      try {
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value in map parameter '" + item + "'");
      }
    }
  }
  return {std::move(name), std::move(params)};
}

double require_param(const Params& p, const std::string& key, const std::string& map_name) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument("map '" + map_name + "' requires parameter " + key);
  return it->second;
}

void require_h1(const SchemaPtr& schema, const std::string& map_name) {
  if (schema->dim() != 3 || schema->horizontal_dim() != 2)
    throw std::invalid_argument("map '" + map_name + "' is only defined on heisenberg(1)");
}

double block_opnorm(const Mat& b) {
  // Power iteration on B^T B; block sizes are single digits.
  const int n = b.cols();
  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  double norm = 0.0;
  for (int it = 0; it < 60; ++it) {
    std::vector<double> bv(static_cast<std::size_t>(b.rows()), 0.0);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < n; ++j) bv[static_cast<std::size_t>(i)] += b(i, j) * v[static_cast<std::size_t>(j)];
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < b.rows(); ++i) w[static_cast<std::size_t>(j)] += b(i, j) * bv[static_cast<std::size_t>(i)];
    double len = 0.0;
    for (double x : w) len += x * x;
    len = std::sqrt(len);
    if (len == 0.0) return 0.0;
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] / len;
    norm = std::sqrt(len);
  }
  return norm;
}

ContactMap make_hom_map(std::string name, const SchemaPtr& schema, const Mat& block, bool finite_codist) {
  const GradedHom hom = complete_hom(block, schema);
  ContactMap m;
  m.name = std::move(name);
  m.schema = schema;
  m.forward = [hom](const Point& x) { return hom.apply(x); };
  m.analytic_differential = [hom](const Point&) { return hom; };
  m.lipschitz_bound = block_opnorm(block);
  m.finite_codistortion = finite_codist;
  return m;
}

}  // namespace

ContactMap builtin_map(const std::string& spec, const SchemaPtr& schema) {
  auto [name, params] = parse_spec(spec);
  const int n1 = schema->horizontal_dim();

  if (name == "identity") {
    return make_hom_map("identity", schema, Mat::identity(n1), true);
  }

  if (name == "translate") {
    Coords g(static_cast<std::size_t>(schema->dim()), 0.0);
    for (int i = 0; i < schema->dim(); ++i) {
      auto it = params.find("c" + std::to_string(i + 1));
      if (it != params.end()) g[static_cast<std::size_t>(i)] = it->second;
    }
    const Point gp(schema, std::move(g));
    ContactMap m;
    m.name = "translate";
    m.schema = schema;
    m.forward = [gp](const Point& x) { return group_mul(gp, x); };
    m.analytic_differential = [schema = schema](const Point&) { return GradedHom::identity_hom(schema); };
    m.lipschitz_bound = 1.0;
    m.finite_codistortion = true;
    return m;
  }

  if (name == "dilate") {
    const double l = require_param(params, "l", name);
    if (!(l > 0.0)) throw std::invalid_argument("dilate: l must be positive");
    Mat block(n1, n1);
    for (int i = 0; i < n1; ++i) block(i, i) = l;
    auto m = make_hom_map("dilate", schema, block, true);
    m.lipschitz_bound = l;
    return m;
  }

  if (name == "hom") {
    Mat block(n1, n1);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j)
        block(i, j) = require_param(params, "b" + std::to_string(i + 1) + std::to_string(j + 1), name);
    // Degenerate blocks on heisenberg(1) still have finite
    // codistortion; elsewhere only claim it for invertible blocks.
    const bool fincod = (schema->dim() == 3 && n1 == 2) || std::abs(block.det()) > 0.0;
    return make_hom_map("hom", schema, block, fincod);
  }

  if (name == "aniso") {
    require_h1(schema, name);
    const double l = require_param(params, "l", name);
    const double mu = require_param(params, "m", name);
    Mat block(2, 2);
    block(0, 0) = l;
    block(1, 1) = mu;
    return make_hom_map("aniso", schema, block, true);
  }

  if (name == "rotate") {
    require_h1(schema, name);
    const double a = require_param(params, "a", name);
    Mat block(2, 2);
    block(0, 0) = std::cos(a);
    block(0, 1) = -std::sin(a);
    block(1, 0) = std::sin(a);
    block(1, 1) = std::cos(a);
    auto m = make_hom_map("rotate", schema, block, true);
    m.lipschitz_bound = 1.0;
    return m;
  }

  if (name == "shear") {
    require_h1(schema, name);
    const double a = require_param(params, "a", name);
    ContactMap m;
    m.name = "shear";
    m.schema = schema;
    m.forward = [schema = schema, a](const Point& x) {
      return Point(schema, {x[0], x[1] + a * x[0] * x[0], x[2] + a * x[0] * x[0] * x[0] / 6.0});
    };
    m.analytic_differential = [schema = schema, a](const Point& x) {
      Mat block(2, 2);
      block(0, 0) = 1.0;
      block(1, 0) = 2.0 * a * x[0];
      block(1, 1) = 1.0;
      return complete_hom(block, schema);
    };
    m.finite_codistortion = true;  // J_h = 1 identically
    return m;
  }

  if (name == "degenerate") {
    require_h1(schema, name);
    Mat block(2, 2);
    block(0, 0) = 1.0;
    return make_hom_map("degenerate", schema, block, true);
  }

  if (name == "fold") {
    require_h1(schema, name);
    ContactMap m;
    m.name = "fold";
    m.schema = schema;
    m.forward = [schema = schema](const Point& x) {
      return Point(schema, {0.5 * x[0] * x[0], 0.0, 0.0});
    };
    m.analytic_differential = [schema = schema](const Point& x) {
      Mat block(2, 2);
      block(0, 0) = x[0];
      return complete_hom(block, schema);
    };
    m.finite_codistortion = true;  // adjugate vanishes identically
    return m;
  }

  throw std::invalid_argument("unknown builtin map '" + name + "'");
}

ContactMap precompose_translation(const ContactMap& map, const Point& g) {
  if (!same_schema(map.schema, g.schema)) throw std::invalid_argument("precompose_translation: schema mismatch");
  ContactMap out;
  out.name = map.name + "@translate";
  out.schema = map.schema;
  const auto fwd = map.forward;
  out.forward = [fwd, g](const Point& x) { return fwd(group_mul(g, x)); };
  if (map.analytic_differential) {
    const auto diff = map.analytic_differential;
    out.analytic_differential = [diff, g](const Point& x) { return diff(group_mul(g, x)); };
  }
  out.lipschitz_bound = map.lipschitz_bound;
  out.finite_codistortion = map.finite_codistortion;
  return out;
}

double estimate_lipschitz(const ContactMap& map, const Region& region, int per_axis) {
  if (!map.has_analytic_differential())
    throw std::invalid_argument("estimate_lipschitz: map has no analytic differential");
  const int dim = region.dim();
  std::int64_t nodes = 1;
  for (int d = 0; d < dim; ++d) nodes *= per_axis;
  double best = 0.0;
  for (std::int64_t idx = 0; idx < nodes; ++idx) {
    Coords u(static_cast<std::size_t>(dim));
    std::int64_t rem = idx;
    for (int d = dim - 1; d >= 0; --d) {
      u[static_cast<std::size_t>(d)] = per_axis == 1 ? 0.5 : static_cast<double>(rem % per_axis) / (per_axis - 1);
      rem /= per_axis;
    }
    const GradedHom h = map.analytic_differential(region.at_unit(u));
    best = std::max(best, block_opnorm(h.horizontal_block()));
  }
  return best;
}

}  // namespace carnot
