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

#include <json.hpp>
#include <string>

#include "carnot/coarea.hpp"

namespace carnot_cli {

/// Key order is fixed (ordered_json) so that byte-identical configs give
/// byte-identical reports.
nlohmann::ordered_json report_to_json(const carnot::CoareaReport& report, bool with_diagnostics = true);

std::string report_csv(const carnot::CoareaReport& report);

}  // namespace carnot_cli
