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

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace carnot {

/// Exact rational structure-constant value as read from a schema file.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  static Rational parse(const std::string& text);  // "1", "-3", "1/2", "-3/4"
  Rational normalized() const;
};

/// One structure-constant entry c_{ij}^k, 0-based indices.
struct StructEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  Rational c;
};

/// Designated expression of a higher basis vector as a bracket of
/// lower-stratum basis vectors: X_target = coeff * [X_left, X_right].
struct BracketExpr {
  int target = 0;
  int left = 0;
  int right = 0;
  Rational coeff;
};

/// Thrown when a schema violates a structural invariant. `invariant`
/// names the first violated rule ("antisymmetry", "grading", "jacobi",
/// "generation", ...).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string invariant, const std::string& detail)
      : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

/// Presentation of a stratified nilpotent (Carnot) group by a graded
/// basis: degrees sigma_i per basis field, structure constants of the
/// Lie bracket, and one bracket expression per higher basis vector.
/// Construction validates every structural invariant and precomputes a
/// dense lookup table for bracket evaluation.
class GroupSchema {
 public:
  /// Validates and builds. Throws SchemaError naming the first violated
  /// invariant. Steps above 4 are rejected (the nilpotent product is
  /// evaluated with series coefficients tabulated through step 4).
  static std::shared_ptr<const GroupSchema> create(std::string name,
                                                   std::vector<int> degrees,
                                                   std::vector<StructEntry> constants,
                                                   std::vector<BracketExpr> bracket_table);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }                              // N
  int step() const { return step_; }                            // m
  int hdim() const { return hdim_; }                            // nu = sum sigma_i
  int horizontal_dim() const { return strata_dims_[0]; }        // n_1
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<int>& strata_dims() const { return strata_dims_; }
  int degree(int i) const { return degrees_[static_cast<std::size_t>(i)]; }

  /// First basis index of stratum k (1-based stratum).
  int stratum_begin(int k) const { return stratum_begin_[static_cast<std::size_t>(k - 1)]; }
  int stratum_end(int k) const { return stratum_begin(k) + strata_dims_[static_cast<std::size_t>(k - 1)]; }

  /// c_{ij}^k, 0-based.
  double structure_constant(int i, int j, int k) const {
    return table_[static_cast<std::size_t>((i * dim_ + j) * dim_ + k)];
  }

  const std::vector<StructEntry>& entries() const { return entries_; }
  const std::vector<BracketExpr>& bracket_table() const { return bracket_table_; }

  /// Nonzero bracket results of a basis pair, for sparse iteration.
  const std::vector<std::pair<int, double>>& bracket_of_pair(int i, int j) const {
    return pair_results_[static_cast<std::size_t>(i * dim_ + j)];
  }

  bool structurally_equal(const GroupSchema& other) const;

 private:
  GroupSchema() = default;

  std::string name_;
  int dim_ = 0;
  int step_ = 0;
  int hdim_ = 0;
  std::vector<int> degrees_;
  std::vector<int> strata_dims_;
  std::vector<int> stratum_begin_;
  std::vector<StructEntry> entries_;
  std::vector<BracketExpr> bracket_table_;
  std::vector<double> table_;
  std::vector<std::vector<std::pair<int, double>>> pair_results_;
};

using SchemaPtr = std::shared_ptr<const GroupSchema>;

/// Named presets: "abelian(n)", "heisenberg(n)", "free_step2(n)".
/// Throws std::invalid_argument on unknown names.
SchemaPtr builtin_schema(const std::string& name);

/// Structured-text schema file I/O. parse throws SchemaError (invariant
/// failures) or std::runtime_error with a line number (syntax).
SchemaPtr parse_schema_file(const std::string& path);
SchemaPtr parse_schema_text(const std::string& text, const std::string& origin = "<text>");
std::string dump_schema(const GroupSchema& schema);

inline bool same_schema(const SchemaPtr& a, const SchemaPtr& b) {
  return a == b || (a && b && a->structurally_equal(*b));
}

}  // namespace carnot
