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

#include "sll/solver.h"

#include <algorithm>
#include <cmath>

#include "sll/text_io.h"

namespace sll {
namespace {

constexpr double kMinStep = 1e-16;
constexpr double kMinSigmaPerBeta = 100.0;
constexpr double kFeasibilityWarning = 1e-3;

// Per-entry upper bound on the diagonal curvature of the surrogate plus the
// off-diagonal mass in its row of the Hessian, halved. Scaling by it keeps
// the preconditioned Hessian's spectrum inside (0, 2].
Matrix CurvatureScale(const KnnGraph& graph, const LabelCodec& codec,
                      double alpha, double sigma) {
  const auto c = static_cast<double>(codec.classes());
  Matrix scale = (2.0 * alpha) * codec.Mask();
  scale.colwise() += 2.0 * graph.degree;
  scale.array() += sigma * (c + 1.0);
  return scale;
}

double DefaultStep(const KnnGraph& graph, const SolverConfig& config,
                   double sigma) {
  if (config.tau0) return *config.tau0;
  if (config.precondition) return 0.5;
  return 1.0 / (2.0 * (2.0 * graph.LaplacianNormBound() + 2.0 * config.alpha +
                       sigma + 2.0 * config.beta));
}

}  // namespace

void SolverConfig::Validate() const {
  objective().Validate();
  if (!(rho > 1.0)) throw Error(ErrorKind::kUsage, "rho must exceed 1");
  if (!(sigma0 > 0.0) || !(sigma0 <= sigma_cap)) {
    throw Error(ErrorKind::kUsage, "need 0 < sigma0 <= sigma_cap");
  }
  if (t_max < 1 || loop_max < 1 || gd_max_iters < 1) {
    throw Error(ErrorKind::kUsage, "iteration limits must be positive");
  }
  if (!(eps0 > 0.0) || !(eps1 > 0.0) || (gd_grad_tol && !(*gd_grad_tol > 0.0))) {
    throw Error(ErrorKind::kUsage, "tolerances must be positive");
  }
  if (tau0 && !(*tau0 > 0.0)) {
    throw Error(ErrorKind::kUsage, "tau0 must be positive");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0) ||
      !(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw Error(ErrorKind::kUsage,
                "armijo_c and backtrack_factor must lie in (0, 1)");
  }
  if (k < 1) throw Error(ErrorKind::kUsage, "K must be at least 1");
  if (theta && !(*theta > 0.0)) {
    throw Error(ErrorKind::kUsage, "theta must be positive");
  }
  if (!(init_jitter >= 0.0 && init_jitter < 1.0)) {
    throw Error(ErrorKind::kUsage, "init_jitter must lie in [0, 1)");
  }
}

GdResult GdMinimize(const Matrix& f_init, const Matrix& f_t,
                    const AlmState& state, const KnnGraph& graph,
                    const LabelCodec& codec, const SolverConfig& config) {
  const auto params = config.objective();
  const double grad_tol = config.gd_grad_tol.value_or(
      1e-6 * std::sqrt(static_cast<double>(f_init.size())));
  const Matrix scale =
      config.precondition
          ? CurvatureScale(graph, codec, config.alpha, state.sigma)
          : Matrix::Ones(f_init.rows(), f_init.cols());
  const double tau0 = DefaultStep(graph, config, state.sigma);

  GdResult result;
  result.f = f_init;
  double value = Surrogate(result.f, f_t, state, graph, codec, params);
  result.values.push_back(value);

  while (result.iterations < config.gd_max_iters) {
    const Matrix grad = CccpGradient(result.f, f_t, state, graph, codec, params);
    if (grad.norm() <= grad_tol) break;
    const Matrix direction = grad.cwiseQuotient(scale);
    const double decrease = grad.cwiseProduct(direction).sum();

    bool accepted = false;
    for (double tau = tau0; tau >= kMinStep; tau *= config.backtrack_factor) {
      Matrix trial = result.f - tau * direction;
      const double trial_value =
          Surrogate(trial, f_t, state, graph, codec, params);
      if (trial_value <= value - config.armijo_c * tau * decrease) {
        result.f = std::move(trial);
        value = trial_value;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.step_underflow = true;
      break;
    }
    ++result.iterations;
    result.values.push_back(value);
  }
  return result;
}

CccpResult CccpMinimize(const AlmState& state, const KnnGraph& graph,
                        const LabelCodec& codec, const SolverConfig& config) {
  const auto params = config.objective();
  CccpResult result;
  result.f = state.f;
  result.lagrangian.push_back(
      Lagrangian(result.f, state, graph, codec, params));
  for (int t = 0; t < config.t_max; ++t) {
    const Matrix f_t = result.f;
    GdResult gd = GdMinimize(f_t, f_t, state, graph, codec, config);
    result.f = std::move(gd.f);
    result.step_underflow = result.step_underflow || gd.step_underflow;
    ++result.iterations;
    result.lagrangian.push_back(
        Lagrangian(result.f, state, graph, codec, params));
    if ((result.f - f_t).norm() <= config.eps0) break;
  }
  return result;
}

Matrix InitialLabels(const LabelCodec& codec, double jitter) {
  Matrix f = codec.y;
  if (jitter == 0.0) return f;
  for (Eigen::Index i = 0; i < codec.size(); ++i) {
    const auto m = codec.candidate.row(i).count();
    if (m < 2) continue;
    const double center = static_cast<double>(m - 1) / 2.0;
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < codec.classes(); ++j) {
      if (!codec.candidate(i, j)) continue;
      f(i, j) += jitter * (center - static_cast<double>(rank)) /
                 static_cast<double>(m - 1);
      ++rank;
    }
  }
  return f;
}

std::vector<int> Disambiguate(const Matrix& f) {
  std::vector<int> labels(static_cast<std::size_t>(f.rows()));
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < f.cols(); ++j) {
      if (f(i, j) > f(i, best)) best = j;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best + 1);
  }
  return labels;
}

Matrix OneHot(const std::vector<int>& labels, int num_classes) {
  Matrix onehot = Matrix::Zero(static_cast<Eigen::Index>(labels.size()),
                               num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    onehot(static_cast<Eigen::Index>(i), labels[i] - 1) = 1.0;
  }
  return onehot;
}

SolverReport AlmFit(const KnnGraph& graph, const LabelCodec& codec,
                    const SolverConfig& config) {
  config.Validate();
  if (graph.size() == 0 || codec.size() == 0) {
    throw Error(ErrorKind::kSolver, "empty graph");
  }
  if (graph.size() != codec.size()) {
    throw Error(ErrorKind::kValidation,
                "graph and label matrix describe different example counts");
  }

  SolverReport report;
  // Along a row direction (t, -t) the penalties grow like sigma t^2 / 2 while
  // the discrimination term falls like 2 beta t^2, so the augmented
  // Lagrangian is unbounded below unless sigma > 4 beta. Just above that bound
  // the first subproblem lands far outside the simplex and the multiplier
  // update can flip a row into the wrong basin; 100 beta keeps the violation
  // near 2 beta / (sigma - 4 beta) ~ 2% and equals sigma0 = 1 at beta = 0.01.
  double sigma0 = config.sigma0;
  if (sigma0 < kMinSigmaPerBeta * config.beta) {
    sigma0 = std::min(kMinSigmaPerBeta * config.beta, config.sigma_cap);
    report.warnings.push_back("sigma0 raised to " + text::FormatDouble(sigma0) +
                              " = 100 beta to keep the subproblems well posed");
  }
  AlmState state =
      AlmState::Initial(InitialLabels(codec, config.init_jitter), sigma0);
  bool underflow = false;

  for (int loop = 1; loop <= config.loop_max; ++loop) {
    CccpResult cccp = CccpMinimize(state, graph, codec, config);
    const double lagrangian = cccp.lagrangian.back();
    if (!cccp.f.allFinite() || !std::isfinite(lagrangian)) {
      throw Error(ErrorKind::kSolver,
                  "non-finite objective in loop " + std::to_string(loop));
    }
    underflow = underflow || cccp.step_underflow;

    TraceRow row;
    row.loop = loop;
    row.delta_f = (cccp.f - state.f).norm();
    row.sigma = state.sigma;
    row.lagrangian = lagrangian;
    row.rowsum_resid = RowSumResidual(cccp.f);
    row.min_entry = cccp.f.minCoeff();
    report.trace.push_back(row);
    report.cccp_lagrangians.push_back(std::move(cccp.lagrangian));

    state.f = std::move(cccp.f);
    state.lambda1 = AuxM(state.f, state.lambda1, state.sigma);
    state.lambda2 -=
        state.sigma * (state.f.rowwise().sum() - Vector::Ones(state.f.rows()));
    state.sigma = std::min(config.rho * state.sigma, config.sigma_cap);

    report.loops_used = loop;
    if (row.delta_f <= config.eps1) {
      report.converged = true;
      break;
    }
  }
  if (report.converged && RowSumResidual(state.f) > kFeasibilityWarning) {
    report.warnings.push_back(
        "labels stopped moving but row sums are off by " +
        text::FormatDouble(RowSumResidual(state.f)) +
        "; consider a larger rho or loop_max");
  }
  if (underflow) {
    report.warnings.push_back(
        "line search step underflow; kept the best iterate found");
  }

  report.f_star = state.f;
  report.labels = Disambiguate(report.f_star);
  report.onehot = OneHot(report.labels, static_cast<int>(codec.classes()));
  report.rowsum_resid = RowSumResidual(report.f_star);
  report.min_entry = report.f_star.minCoeff();
  report.final_state = std::move(state);
  return report;
}

void WriteTraceCsv(const SolverReport& report, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const auto& row : report.trace) {
    out << row.loop << ',' << text::FormatDouble(row.delta_f) << ','
        << text::FormatDouble(row.sigma) << ','
        << text::FormatDouble(row.lagrangian) << ','
        << text::FormatDouble(row.rowsum_resid) << ','
        << text::FormatDouble(row.min_entry) << '\n';
  }
}

}  // namespace sll
