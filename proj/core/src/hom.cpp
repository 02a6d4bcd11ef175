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

#include "carnot/hom.hpp"

#include <cmath>
#include <stdexcept>

namespace carnot {
namespace {

void check_block_diagonal(const GroupSchema& s, const Mat& m) {
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j)
      if (s.degree(i) != s.degree(j) && m(i, j) != 0.0)
        throw std::invalid_argument("GradedHom: nonzero off-stratum entry at (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
}

}  // namespace

GradedHom::GradedHom(SchemaPtr s, Mat m) : schema(std::move(s)), matrix(std::move(m)) {
  if (!schema) throw std::invalid_argument("GradedHom: null schema");
  if (matrix.rows() != schema->dim() || matrix.cols() != schema->dim())
    throw std::invalid_argument("GradedHom: matrix must be N x N");
  check_block_diagonal(*schema, matrix);
}

GradedHom GradedHom::identity_hom(const SchemaPtr& s) { return GradedHom(s, Mat::identity(s->dim())); }

AlgebraVector GradedHom::apply(const AlgebraVector& v) const {
  return AlgebraVector(schema, matrix.apply(v.v));
}

Point GradedHom::apply(const Point& p) const { return Point(schema, matrix.apply(p.x)); }

double GradedHom::bracket_defect() const {
  const GroupSchema& s = *schema;
  double worst = 0.0;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = i + 1; j < s.dim(); ++j) {
      AlgebraVector bij(schema, Coords(static_cast<std::size_t>(s.dim()), 0.0));
      for (const auto& [k, c] : s.bracket_of_pair(i, j)) bij.v[static_cast<std::size_t>(k)] = c;
      const AlgebraVector lhs = apply(bij);
      AlgebraVector li(schema, Coords(static_cast<std::size_t>(s.dim()), 0.0));
      AlgebraVector lj(schema, Coords(static_cast<std::size_t>(s.dim()), 0.0));
      for (int r = 0; r < s.dim(); ++r) {
        li.v[static_cast<std::size_t>(r)] = matrix(r, i);
        lj.v[static_cast<std::size_t>(r)] = matrix(r, j);
      }
      const AlgebraVector rhs = bracket(li, lj);
      for (int r = 0; r < s.dim(); ++r)
        worst = std::max(worst, std::abs(lhs.v[static_cast<std::size_t>(r)] - rhs.v[static_cast<std::size_t>(r)]));
    }
  return worst;
}

Mat GradedHom::horizontal_block() const {
  const int n1 = schema->horizontal_dim();
  Mat b(n1, n1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) b(i, j) = matrix(i, j);
  return b;
}

Mat adjugate(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("adjugate: non-square matrix");
  const int n = m.rows();
  Mat adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1.0;
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double cof = m.minor_matrix(i, j).det();
      adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  return adj;
}

double adjugate_identity_defect(const GradedHom& hom) {
  const Mat adj = adjugate(hom.matrix);
  const Mat prod = hom.matrix * adj;
  const double d = hom.matrix.det();
  const int n = hom.matrix.rows();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(prod(i, j) - (i == j ? d : 0.0)));
  const double scale = std::max(1.0, hom.matrix.max_abs() * adj.max_abs());
  return worst / scale;
}

GradedHom complete_hom(const Mat& horizontal_block, const SchemaPtr& schema, double tau_hom) {
  const GroupSchema& s = *schema;
  const int n1 = s.horizontal_dim();
  if (horizontal_block.rows() != n1 || horizontal_block.cols() != n1)
    throw std::invalid_argument("complete_hom: block must be n_1 x n_1");

  Mat m(s.dim(), s.dim());
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) m(i, j) = horizontal_block(i, j);

  // Fill stratum by stratum; each designated expression only refers to
  // columns of strictly lower strata, already completed.
  for (const auto& be : s.bracket_table()) {
    AlgebraVector left(schema, Coords(static_cast<std::size_t>(s.dim()), 0.0));
    AlgebraVector right(schema, Coords(static_cast<std::size_t>(s.dim()), 0.0));
    for (int r = 0; r < s.dim(); ++r) {
      left.v[static_cast<std::size_t>(r)] = m(r, be.left);
      right.v[static_cast<std::size_t>(r)] = m(r, be.right);
    }
    const AlgebraVector image = bracket(left, right);
    const double coeff = be.coeff.value();
    for (int r = 0; r < s.dim(); ++r) {
      const double v = coeff * image.v[static_cast<std::size_t>(r)];
      // The image of a stratum-k vector lies in stratum k for a graded
      // hom; zero out roundoff outside the block.
      if (s.degree(r) == s.degree(be.target)) m(r, be.target) = v;
    }
  }

  GradedHom hom(schema, std::move(m));
  const double defect = hom.bracket_defect();
  const double scale = std::max(1.0, hom.matrix.max_abs());
  if (defect > tau_hom * scale)
    throw std::runtime_error("complete_hom: inconsistent completion, bracket defect " + std::to_string(defect));
  return hom;
}

double coarea_factor_of_hom(const GradedHom& hom, int j) {
  const auto col = adjugate_column_horizontal(hom, j);
  double acc = 0.0;
  for (double v : col) acc += v * v;
  return std::sqrt(acc);
}

std::vector<double> adjugate_column_horizontal(const GradedHom& hom, int j) {
  const GroupSchema& s = *hom.schema;
  if (j < 0 || j >= s.horizontal_dim())
    throw std::invalid_argument("adjugate column index outside the horizontal range");
  const Mat adj = adjugate(hom.matrix);
  std::vector<double> col(static_cast<std::size_t>(s.horizontal_dim()));
  for (int i = 0; i < s.horizontal_dim(); ++i) col[static_cast<std::size_t>(i)] = adj(i, j);
  return col;
}

}  // namespace carnot
