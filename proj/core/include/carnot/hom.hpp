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

#include "carnot/group.hpp"
#include "carnot/mat.hpp"

namespace carnot {

/// Graded Lie-algebra homomorphism in the graded basis: block-diagonal
/// by strata, with off-stratum entries exactly zero by construction.
struct GradedHom {
  SchemaPtr schema;
  Mat matrix;  // N x N

  GradedHom() = default;
  GradedHom(SchemaPtr s, Mat m);

  static GradedHom identity_hom(const SchemaPtr& s);

  AlgebraVector apply(const AlgebraVector& v) const;
  Point apply(const Point& p) const;  // group homomorphism in exp coordinates
  double det() const { return matrix.det(); }

  /// Max defect of L[X_i,X_j] = [L X_i, L X_j] over all basis pairs.
  double bracket_defect() const;

  /// n_1 x n_1 horizontal block.
  Mat horizontal_block() const;
};

/// Transposed cofactor matrix; satisfies L adj(L) = adj(L) L = det(L) Id
/// and is defined for singular L as well.
Mat adjugate(const Mat& m);

/// Relative defect of the adjugate identity for a hom (diagnostic).
double adjugate_identity_defect(const GradedHom& hom);

/// Extends an n_1 x n_1 horizontal block to the full graded
/// homomorphism: the image of each higher basis vector is forced by the
/// schema's designated bracket expression, filled stratum by stratum.
/// The result's bracket compatibility over all basis pairs is the
/// consistency residual; if it exceeds tau_hom the completion is
/// rejected (the block is not bracket-compatible with the schema).
GradedHom complete_hom(const Mat& horizontal_block, const SchemaPtr& schema, double tau_hom = 1e-8);

/// Euclidean norm of the stratum-1 part of adj(L) X_j (0-based j). For
/// a graded hom the j-th adjugate column is horizontal, so this is the
/// full column norm; it is the Lebesgue-normalized sub-Riemannian
/// Jacobian of Pr_j composed with the hom.
double coarea_factor_of_hom(const GradedHom& hom, int j);

/// Stratum-1 coefficients of adj(L) X_j, the tangent field direction of
/// level curves.
std::vector<double> adjugate_column_horizontal(const GradedHom& hom, int j);

}  // namespace carnot
