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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "carnot/coarea.hpp"
#include "carnot/projection.hpp"
#include "carnot/rng.hpp"
#include "report_json.hpp"

namespace {

using namespace carnot;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitRuntime = 3;

SchemaPtr resolve_group(const std::string& spec) {
  try {
    return builtin_schema(spec);
  } catch (const std::invalid_argument&) {
    if (std::filesystem::exists(spec)) return parse_schema_file(spec);
    throw;
  }
}

Region parse_box(const SchemaPtr& schema, const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad box coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(vals.size()) != 2 * schema->dim())
    throw std::invalid_argument("box needs " + std::to_string(2 * schema->dim()) +
                                " comma-separated values (a1,b1,...,aN,bN)");
  Coords lo(static_cast<std::size_t>(schema->dim())), hi(static_cast<std::size_t>(schema->dim()));
  for (int i = 0; i < schema->dim(); ++i) {
    lo[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(2 * i)];
    hi[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(2 * i + 1)];
  }
  return Region(schema, std::move(lo), std::move(hi));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
  out << text;
}

int cmd_schema_validate(const std::string& path) {
  try {
    auto schema = parse_schema_file(path);
    std::cout << "ok: " << schema->name() << " (N=" << schema->dim() << ", step=" << schema->step()
              << ", nu=" << schema->hdim() << ")\n";
    return kExitOk;
  } catch (const SchemaError& e) {
    std::cout << "violation: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_schema_dump(const std::string& name, const std::string& out_path) {
  emit(dump_schema(*builtin_schema(name)), out_path);
  return kExitOk;
}

int cmd_selftest(const std::string& group, int trials, std::uint64_t seed, const std::string& out_path) {
  auto schema = resolve_group(group);
  Rng rng(seed);
  auto rand_point = [&]() {
    Coords c(static_cast<std::size_t>(schema->dim()));
    for (double& v : c) v = rng.uniform(-2, 2);
    return Point(schema, std::move(c));
  };

  double assoc = 0.0;
  bool degree1_exact = true;
  for (int t = 0; t < trials; ++t) {
    const Point x = rand_point(), y = rand_point(), z = rand_point();
    const Point a = group_mul(group_mul(x, y), z);
    const Point b = group_mul(x, group_mul(y, z));
    for (int i = 0; i < schema->dim(); ++i) assoc = std::max(assoc, std::abs(a[i] - b[i]));
    const Point xy = group_mul(x, y);
    for (int i = 0; i < schema->horizontal_dim(); ++i)
      if (xy[i] - x[i] - y[i] != 0.0) degree1_exact = false;
  }

  double dil = 0.0;
  for (double lambda : {0.5, 2.0, 10.0}) {
    for (int t = 0; t < trials / 4 + 1; ++t) {
      const Point x = rand_point(), y = rand_point();
      const Point a = dilate(lambda, group_mul(x, y));
      const Point b = group_mul(dilate(lambda, x), dilate(lambda, y));
      for (int i = 0; i < schema->dim(); ++i) dil = std::max(dil, std::abs(a[i] - b[i]));
    }
  }

  bool pik_ok = true;
  for (int t = 0; t < trials / 10 + 1; ++t) {
    const Point x = rand_point(), y = rand_point();
    const Point base = group_mul(x, y);
    for (int i = 0; i < schema->dim(); ++i) {
      Coords cx = x.x, cy = y.x;
      bool perturbed = false;
      for (int m = 0; m < schema->dim(); ++m) {
        if (m == i || schema->degree(m) < schema->degree(i)) continue;
        cx[static_cast<std::size_t>(m)] += rng.uniform(-1, 1);
        cy[static_cast<std::size_t>(m)] += rng.uniform(-1, 1);
        perturbed = true;
      }
      if (!perturbed) continue;
      const Point alt = group_mul(Point(schema, cx), Point(schema, cy));
      if (alt[i] - x[i] - y[i] != base[i] - x[i] - y[i]) pik_ok = false;
    }
  }

  const bool is_h1 = schema->dim() == 3 && schema->horizontal_dim() == 2;
  bool bch_exact = true;
  if (is_h1) {
    const double c = schema->structure_constant(0, 1, 2);
    for (int t = 0; t < trials; ++t) {
      const Point x = rand_point(), y = rand_point();
      const Point got = group_mul(x, y);
      const double closed = x[2] + y[2] + 0.5 * c * (x[0] * y[1] - x[1] * y[0]);
      if (got[2] != closed || got[0] != x[0] + y[0] || got[1] != x[1] + y[1]) bch_exact = false;
    }
  }

  ordered_json j;
  j["schema"] = schema->name();
  j["N"] = schema->dim();
  j["step"] = schema->step();
  j["nu"] = schema->hdim();
  j["trials"] = trials;
  j["seed"] = seed;
  j["max_associativity_defect"] = assoc;
  j["max_dilation_defect"] = dil;
  j["degree1_additivity_exact"] = degree1_exact;
  j["product_coordinate_locality"] = pik_ok;
  if (is_h1) j["product_matches_closed_form"] = bch_exact;
  const bool pass = assoc <= 1e-12 && dil <= 1e-12 && degree1_exact && pik_ok && bch_exact;
  j["pass"] = pass;
  emit(j.dump(2) + "\n", out_path);
  return pass ? kExitOk : kExitViolation;
}

double integrand_by_name(const std::string& name, const Point& p) {
  if (name == "one") return 1.0;
  if (name == "x2_squared") return p[1] * p[1];
  if (name == "half_box") return p[0] < 0.5 ? 1.0 : 0.0;
  throw std::invalid_argument("unknown integrand '" + name + "' (one, x2_squared, half_box)");
}

int cmd_fubini(const std::string& group, int j, const std::string& fname, const std::string& box_text, int grid,
               int threads, const std::string& out_path) {
  auto schema = resolve_group(group);
  const Region box = parse_box(schema, box_text);
  if (j < 1 || j > schema->horizontal_dim())
    throw std::invalid_argument("--j must be in 1.." + std::to_string(schema->horizontal_dim()));
  // validate the integrand name before running
  integrand_by_name(fname, origin(schema));

  FubiniConfig cfg;
  cfg.outer_n = grid;
  cfg.threads = threads;
  const FubiniResult res =
      fubini_check([&](const Point& p) { return integrand_by_name(fname, p); }, box, j - 1, cfg);

  ordered_json out;
  out["schema"] = schema->name();
  out["f"] = fname;
  out["j"] = j;
  out["grid"] = grid;
  out["lhs"] = res.lhs;
  out["rhs"] = res.rhs;
  out["gap"] = res.rel_gap;
  emit(out.dump(2) + "\n", out_path);
  return kExitOk;
}

struct CoareaCliArgs {
  std::string group;
  std::string map_spec;
  int j = 1;
  std::string box_text;
  int p_grid = 64;
  std::string quad = "grid:32";
  std::uint64_t seed = 1;
  int threads = 1;
  double tau_verdict = 1e-3;
  std::string out_path;
  std::string csv_path;
  double corrupt_rhs_scale = 1.0;
};

int cmd_coarea_run(const CoareaCliArgs& args) {
  auto schema = resolve_group(args.group);
  const Region box = parse_box(schema, args.box_text);
  if (args.j < 1 || args.j > schema->horizontal_dim())
    throw std::invalid_argument("--j must be in 1.." + std::to_string(schema->horizontal_dim()));
  const ContactMap map = builtin_map(args.map_spec, schema);

  CoareaConfig cfg;
  cfg.rhs.quad = QuadratureSpec::parse(args.quad);
  cfg.rhs.quad.seed = args.seed;
  cfg.rhs.quad.threads = args.threads;
  cfg.pgrid.n = args.p_grid;
  cfg.pgrid.seed = args.seed;
  cfg.pgrid.threads = args.threads;
  cfg.tau_verdict = args.tau_verdict;

  CoareaReport report = verify_coarea(map, box, args.j - 1, cfg);
  if (args.corrupt_rhs_scale != 1.0) {
    report.rhs.value *= args.corrupt_rhs_scale;
    report.rhs.error *= std::abs(args.corrupt_rhs_scale);
    report.slack = report.rhs.value - report.lhs.value;
    report.verdict = coarea_verdict(report.lhs, report.rhs, report.equality_expected, cfg.tau_verdict);
  }

  emit(carnot_cli::report_to_json(report).dump(2) + "\n", args.out_path);
  if (!args.csv_path.empty()) {
    std::ofstream csv(args.csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open csv file '" + args.csv_path + "'");
    csv << carnot_cli::report_csv(report);
  }
  return report.verdict == "violation" ? kExitViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for Carnot-group geometry: group operations, projections, "
               "Pansu differentials, and two-sided coarea verification"};
  app.require_subcommand(1);

  // schema validate / dump
  auto* schema_cmd = app.add_subcommand("schema", "Group schema utilities");
  schema_cmd->require_subcommand(1);
  std::string validate_path;
  auto* validate = schema_cmd->add_subcommand("validate", "Check every schema invariant of a file");
  validate->add_option("file", validate_path, "schema file")->required();
  std::string dump_builtin, dump_out;
  auto* dump = schema_cmd->add_subcommand("dump", "Write a builtin schema in file form");
  dump->add_option("--builtin", dump_builtin, "abelian(n) | heisenberg(n) | free_step2(n)")->required();
  dump->add_option("--out", dump_out, "output path (stdout when omitted)");

  // selftest
  std::string st_group = "heisenberg(1)";
  int st_trials = 10000;
  std::uint64_t st_seed = 1;
  std::string st_out;
  auto* selftest = app.add_subcommand("selftest", "Run the group-law invariant suite");
  selftest->add_option("--group", st_group, "builtin name or schema file");
  selftest->add_option("--trials", st_trials, "random trials")->check(CLI::PositiveNumber);
  selftest->add_option("--seed", st_seed, "rng seed");
  selftest->add_option("--out", st_out, "output path");

  // fubini
  std::string fb_group = "heisenberg(1)", fb_f = "one", fb_box, fb_out;
  int fb_j = 1, fb_grid = 128, fb_threads = 1;
  auto* fubini = app.add_subcommand("fubini", "Check the hyperplane-line decomposition integral identity");
  fubini->add_option("--group", fb_group, "builtin name or schema file");
  fubini->add_option("--j", fb_j, "horizontal axis index (1-based)");
  fubini->add_option("--f", fb_f, "integrand: one | x2_squared | half_box");
  fubini->add_option("--box", fb_box, "a1,b1,a2,b2,...")->required();
  fubini->add_option("--grid", fb_grid, "per-axis resolution")->check(CLI::PositiveNumber);
  fubini->add_option("--threads", fb_threads, "worker threads");
  fubini->add_option("--out", fb_out, "output path");

  // coarea run
  CoareaCliArgs ca;
  auto* coarea = app.add_subcommand("coarea", "Coarea verification");
  coarea->require_subcommand(1);
  auto* run = coarea->add_subcommand("run", "Estimate both sides and report the verdict");
  run->add_option("--group", ca.group, "builtin name or schema file")->required();
  run->add_option("--map", ca.map_spec, "builtin map spec, e.g. dilate:l=2")->required();
  run->add_option("--j", ca.j, "horizontal axis index (1-based)");
  run->add_option("--box", ca.box_text, "a1,b1,a2,b2,...")->required();
  run->add_option("--p-grid", ca.p_grid, "per-axis hyperplane grid resolution")->check(CLI::PositiveNumber);
  run->add_option("--quad", ca.quad, "grid:n | mc:n");
  run->add_option("--seed", ca.seed, "rng seed (jitter and Monte-Carlo)");
  run->add_option("--threads", ca.threads, "worker threads");
  run->add_option("--tau-verdict", ca.tau_verdict, "relative verdict tolerance");
  run->add_option("--out", ca.out_path, "report path (stdout when omitted)");
  run->add_option("--csv", ca.csv_path, "per-level-value csv path");
  run->add_option("--corrupt-rhs-scale", ca.corrupt_rhs_scale, "test-only: scale rhs before the verdict")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_schema_validate(validate_path);
    if (dump->parsed()) return cmd_schema_dump(dump_builtin, dump_out);
    if (selftest->parsed()) return cmd_selftest(st_group, st_trials, st_seed, st_out);
    if (fubini->parsed()) return cmd_fubini(fb_group, fb_j, fb_f, fb_box, fb_grid, fb_threads, fb_out);
    if (run->parsed()) return cmd_coarea_run(ca);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
