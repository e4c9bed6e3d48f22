// Copyright 2026 The sll Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The disambiguation program over the label matrix F (n x c):
//
//   min  tr(F^T L F) + alpha ||H (.) (F - Y)||_F^2 - beta ||F||_F^2
//   s.t. F 1_c = 1_n,  F >= 0
//
// and its augmented Lagrangian with multipliers Lambda1 (n x c, for F >= 0),
// Lambda2 (n, for the row sums) and penalty sigma:
//
//   J = primal + (1/2sigma) tr(M^T M - Lambda1^T Lambda1)
//       - Lambda2^T (F 1_c - 1_n) + (sigma/2) ||F 1_c - 1_n||^2,
//   M = max(0, Lambda1 - sigma F).
//
// J splits as J1 - J2 with J2 = beta ||F||_F^2; both parts are convex. The
// concave-convex procedure replaces J2 by its tangent at a point F_t, giving
// the convex surrogate J~(F; F_t).

#ifndef SLL_OBJECTIVE_H_
#define SLL_OBJECTIVE_H_

#include "sll/graph.h"
#include "sll/labelspace.h"
#include "sll/types.h"

namespace sll {

struct ObjectiveParams {
  double alpha = 1000.0;  // fidelity weight
  double beta = 0.01;     // discrimination weight

  void Validate() const;
};

struct AlmState {
  Matrix f;        // current labels
  Matrix lambda1;  // >= 0
  Vector lambda2;
  double sigma = 1.0;

  // F = Y, zero multipliers.
  static AlmState Initial(const Matrix& y, double sigma0);
};

double PrimalObjective(const Matrix& f, const KnnGraph& graph,
                       const LabelCodec& codec, const ObjectiveParams& params);

Matrix AuxM(const Matrix& f, const Matrix& lambda1, double sigma);

// Lagrangian evaluated at `f` with the multipliers and sigma of `state`
// (state.f is ignored).
double Lagrangian(const Matrix& f, const AlmState& state, const KnnGraph& graph,
                  const LabelCodec& codec, const ObjectiveParams& params);
double Lagrangian(const AlmState& state, const KnnGraph& graph,
                  const LabelCodec& codec, const ObjectiveParams& params);

// J1 = Lagrangian + beta ||F||^2.
double ConvexPart(const Matrix& f, const AlmState& state, const KnnGraph& graph,
                  const LabelCodec& codec, const ObjectiveParams& params);

// J~(F; F_t) = J1(F) - beta (||F_t||^2 + 2 <F_t, F - F_t>).
double Surrogate(const Matrix& f, const Matrix& f_t, const AlmState& state,
                 const KnnGraph& graph, const LabelCodec& codec,
                 const ObjectiveParams& params);

// Gradient of J~ at F:
//   2 L F + 2 alpha H (.) (F - Y) - M(F) - Lambda2 1_c^T
//   + sigma (F 1_c - 1_n) 1_c^T - 2 beta F_t
// with M recomputed at F.
Matrix CccpGradient(const Matrix& f, const Matrix& f_t, const AlmState& state,
                    const KnnGraph& graph, const LabelCodec& codec,
                    const ObjectiveParams& params);

// max_i |sum_j F_ij - 1|.
double RowSumResidual(const Matrix& f);

}  // namespace sll

#endif  // SLL_OBJECTIVE_H_
