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

#include "sll/objective.h"

#include <string>

namespace sll {
namespace {

void CheckShape(const Matrix& f, const KnnGraph& graph,
                const LabelCodec& codec) {
  if (f.rows() != graph.size() || f.rows() != codec.size() ||
      f.cols() != codec.classes()) {
    throw Error(ErrorKind::kValidation,
                "dimension mismatch: F is " + std::to_string(f.rows()) + "x" +
                    std::to_string(f.cols()) + ", graph has " +
                    std::to_string(graph.size()) + " nodes, labels are " +
                    std::to_string(codec.size()) + "x" +
                    std::to_string(codec.classes()));
  }
}

void CheckState(const Matrix& f, const AlmState& state) {
  if (state.lambda1.rows() != f.rows() || state.lambda1.cols() != f.cols() ||
      state.lambda2.size() != f.rows()) {
    throw Error(ErrorKind::kValidation, "dimension mismatch in multipliers");
  }
  if (!(state.sigma > 0.0)) {
    throw Error(ErrorKind::kValidation, "penalty sigma must be positive");
  }
}

Vector RowSumResiduals(const Matrix& f) {
  return f.rowwise().sum() - Vector::Ones(f.rows());
}

}  // namespace

void ObjectiveParams::Validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw Error(ErrorKind::kUsage, "alpha and beta must be nonnegative");
  }
}

AlmState AlmState::Initial(const Matrix& y, double sigma0) {
  AlmState state;
  state.f = y;
  state.lambda1 = Matrix::Zero(y.rows(), y.cols());
  state.lambda2 = Vector::Zero(y.rows());
  state.sigma = sigma0;
  return state;
}

double PrimalObjective(const Matrix& f, const KnnGraph& graph,
                       const LabelCodec& codec, const ObjectiveParams& params) {
  CheckShape(f, graph, codec);
  return graph.Smoothness(f) +
         params.alpha * codec.MaskedOff(f - codec.y).squaredNorm() -
         params.beta * f.squaredNorm();
}

Matrix AuxM(const Matrix& f, const Matrix& lambda1, double sigma) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorKind::kValidation, "penalty sigma must be positive");
  }
  return (lambda1 - sigma * f).cwiseMax(0.0);
}

double Lagrangian(const Matrix& f, const AlmState& state, const KnnGraph& graph,
                  const LabelCodec& codec, const ObjectiveParams& params) {
  CheckShape(f, graph, codec);
  CheckState(f, state);
  const Matrix m = AuxM(f, state.lambda1, state.sigma);
  const Vector residual = RowSumResiduals(f);
  return PrimalObjective(f, graph, codec, params) +
         (m.squaredNorm() - state.lambda1.squaredNorm()) / (2.0 * state.sigma) -
         state.lambda2.dot(residual) +
         0.5 * state.sigma * residual.squaredNorm();
}

double Lagrangian(const AlmState& state, const KnnGraph& graph,
                  const LabelCodec& codec, const ObjectiveParams& params) {
  return Lagrangian(state.f, state, graph, codec, params);
}

double ConvexPart(const Matrix& f, const AlmState& state, const KnnGraph& graph,
                  const LabelCodec& codec, const ObjectiveParams& params) {
  return Lagrangian(f, state, graph, codec, params) +
         params.beta * f.squaredNorm();
}

double Surrogate(const Matrix& f, const Matrix& f_t, const AlmState& state,
                 const KnnGraph& graph, const LabelCodec& codec,
                 const ObjectiveParams& params) {
  const double tangent =
      f_t.squaredNorm() + 2.0 * f_t.cwiseProduct(f - f_t).sum();
  return ConvexPart(f, state, graph, codec, params) - params.beta * tangent;
}

Matrix CccpGradient(const Matrix& f, const Matrix& f_t, const AlmState& state,
                    const KnnGraph& graph, const LabelCodec& codec,
                    const ObjectiveParams& params) {
  CheckShape(f, graph, codec);
  CheckShape(f_t, graph, codec);
  CheckState(f, state);
  Matrix grad = 2.0 * graph.ApplyLaplacian(f);
  grad += 2.0 * params.alpha * codec.MaskedOff(f - codec.y);
  grad -= AuxM(f, state.lambda1, state.sigma);
  const Vector row_term = state.sigma * RowSumResiduals(f) - state.lambda2;
  grad.colwise() += row_term;
  grad -= 2.0 * params.beta * f_t;
  return grad;
}

double RowSumResidual(const Matrix& f) {
  if (f.rows() == 0) return 0.0;
  return RowSumResiduals(f).cwiseAbs().maxCoeff();
}

}  // namespace sll
