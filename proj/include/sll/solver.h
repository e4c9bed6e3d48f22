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

// Augmented Lagrangian outer loop, concave-convex inner loop and the
// line-searched gradient descent that minimizes each convex surrogate.
//
//   loop:  F      <- CCCP(F; Lambda1, Lambda2, sigma)
//          Lambda1 <- max(0, Lambda1 - sigma F)
//          Lambda2 <- Lambda2 - sigma (F 1_c - 1_n)
//          sigma  <- min(rho sigma, sigma_cap)
//   until loop_max loops or ||F_loop - F_{loop-1}||_F <= eps1.

#ifndef SLL_SOLVER_H_
#define SLL_SOLVER_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sll/graph.h"
#include "sll/labelspace.h"
#include "sll/objective.h"
#include "sll/types.h"

namespace sll {

struct SolverConfig {
  double alpha = 1000.0;
  double beta = 0.01;
  int k = 5;
  std::optional<double> theta;  // nullopt: mean kNN distance

  double rho = 1.1;
  double sigma0 = 1.0;
  double sigma_cap = 1e8;
  int t_max = 20;
  double eps0 = 1e-6;
  int loop_max = 40;
  double eps1 = 1e-4;

  int gd_max_iters = 200;
  std::optional<double> gd_grad_tol;  // nullopt: 1e-6 * sqrt(n c)
  std::optional<double> tau0;         // nullopt: derived from curvature bound
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;

  // Scale each gradient entry by a bound on its own curvature. Without it the
  // step is limited by the fidelity curvature 2 alpha on every coordinate.
  bool precondition = true;
  // Sum-zero offset added to ambiguous rows of the initial F, favoring
  // lower-indexed candidates. Moves F off the exact saddle at Y.
  double init_jitter = 1e-3;

  ObjectiveParams objective() const { return {alpha, beta}; }
  void Validate() const;
};

struct GdResult {
  Matrix f;
  int iterations = 0;
  bool step_underflow = false;
  std::vector<double> values;  // surrogate value at start and after each step
};

GdResult GdMinimize(const Matrix& f_init, const Matrix& f_t,
                    const AlmState& state, const KnnGraph& graph,
                    const LabelCodec& codec, const SolverConfig& config);

struct CccpResult {
  Matrix f;
  int iterations = 0;
  bool step_underflow = false;
  // Lagrangian (fixed multipliers) at the start and after each iteration.
  std::vector<double> lagrangian;
};

// Runs from state.f with the multipliers and sigma of `state` held fixed.
CccpResult CccpMinimize(const AlmState& state, const KnnGraph& graph,
                        const LabelCodec& codec, const SolverConfig& config);

struct TraceRow {
  int loop = 0;
  double delta_f = 0.0;     // ||F_loop - F_{loop-1}||_F
  double sigma = 0.0;       // penalty used during this loop
  double lagrangian = 0.0;  // at F_loop, multipliers of this loop
  double rowsum_resid = 0.0;
  double min_entry = 0.0;
};

struct SolverReport {
  Matrix f_star;
  std::vector<int> labels;  // 1-based argmax per row
  Matrix onehot;
  std::vector<TraceRow> trace;
  std::vector<std::vector<double>> cccp_lagrangians;  // one list per loop
  double rowsum_resid = 0.0;
  double min_entry = 0.0;
  int loops_used = 0;
  bool converged = false;
  std::vector<std::string> warnings;
  AlmState final_state;  // multipliers and penalty after the last update
};

// F0 = Y plus `jitter` spread over the candidates of ambiguous rows.
Matrix InitialLabels(const LabelCodec& codec, double jitter);

SolverReport AlmFit(const KnnGraph& graph, const LabelCodec& codec,
                    const SolverConfig& config);

// Row-wise argmax, 1-based, ties to the smallest class.
std::vector<int> Disambiguate(const Matrix& f);
Matrix OneHot(const std::vector<int>& labels, int num_classes);

inline constexpr const char* kTraceCsvHeader =
    "loop,delta_f,sigma,lagrangian,rowsum_resid,min_entry";
void WriteTraceCsv(const SolverReport& report, std::ostream& out);

}  // namespace sll

#endif  // SLL_SOLVER_H_
