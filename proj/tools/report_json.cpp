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

#include "report_json.hpp"

#include <sstream>

namespace carnot_cli {

using nlohmann::ordered_json;

ordered_json report_to_json(const carnot::CoareaReport& report, bool with_diagnostics) {
  ordered_json j;
  j["schema"] = report.schema_name;
  j["map"] = report.map_name;
  j["j"] = report.j;
  j["box"]["lo"] = report.box_lo;
  j["box"]["hi"] = report.box_hi;
  j["lhs"]["value"] = report.lhs.value;
  j["lhs"]["err"] = report.lhs.error;
  j["rhs"]["value"] = report.rhs.value;
  j["rhs"]["err"] = report.rhs.error;
  j["slack"] = report.slack;
  j["verdict"] = report.verdict;
  if (with_diagnostics) {
    ordered_json diags = ordered_json::array();
    for (const auto& d : report.diagnostics) {
      ordered_json r;
      r["p"] = d.p;
      r["candidates"] = d.candidates;
      r["seeds"] = d.seeds;
      r["dropped"] = d.dropped;
      r["curves"] = d.curves;
      r["length"] = d.length;
      r["flagged"] = d.flagged;
      diags.push_back(std::move(r));
    }
    j["diagnostics"] = std::move(diags);
  }
  j["flagged_fraction"] = report.flagged_fraction;
  auto& settings = j["settings"];
  settings["quad"] = report.quad_spec;
  settings["p_grid"] = report.p_grid_n;
  settings["seed"] = report.seed;
  settings["threads"] = report.threads;
  settings["tau_verdict"] = report.tau_verdict;
  settings["tau_seed"] = report.tau_seed;
  settings["tau_track"] = report.tau_track;
  settings["tau_adj"] = report.tau_adj;
  settings["differential"] = report.differential_mode;
  settings["equality_expected"] = report.equality_expected;
  return j;
}

std::string report_csv(const carnot::CoareaReport& report) {
  std::ostringstream os;
  const std::size_t pdim = report.diagnostics.empty() ? 0 : report.diagnostics.front().p.size();
  for (std::size_t d = 0; d < pdim; ++d) os << "p" << d + 1 << ",";
  os << "length\n";
  os.precision(17);
  for (const auto& diag : report.diagnostics) {
    for (double v : diag.p) os << v << ",";
    os << diag.length << "\n";
  }
  return os.str();
}

}  // namespace carnot_cli
