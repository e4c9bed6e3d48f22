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

#include <sstream>

#include "doctest.h"
#include "sll/text_io.h"
#include "test_support.h"

namespace sll {
namespace {

using testing::DenseWeights;
using testing::Gen;
using testing::ScalarObjective;

KnnGraph Edgeless(Eigen::Index n) {
  KnnGraph g;
  g.weights = SparseMatrix(n, n);
  g.degree = Vector::Zero(n);
  return g;
}

SolverReport FitDataset(const Dataset& ds, const SolverConfig& config) {
  return AlmFit(BuildKnnGraph(ds, config.k, config.theta), Encode(ds), config);
}

TEST_CASE("config validation") {
  SolverConfig config;
  CHECK_NOTHROW(config.Validate());
  config.rho = 1.0;
  CHECK_THROWS_AS(config.Validate(), Error);
  config = {};
  config.sigma0 = 2e8;
  CHECK_THROWS_AS(config.Validate(), Error);
  config = {};
  config.eps1 = 0.0;
  CHECK_THROWS_AS(config.Validate(), Error);
  config = {};
  config.beta = -1.0;
  CHECK_THROWS_AS(config.Validate(), Error);
}

TEST_CASE("unambiguous data keeps the given labels") {
  Gen gen(30);
  Dataset ds = gen.RandomDataset(10, 2, 3);
  for (auto& s : ds.candidates) s = {gen.Int(1, 3)};
  SolverConfig config;
  config.k = 3;
  const SolverReport report = FitDataset(ds, config);
  for (std::size_t i = 0; i < ds.candidates.size(); ++i) {
    CHECK(report.labels[i] == ds.candidates[i][0]);
  }
}

TEST_CASE("default synthetic run converges") {
  const Dataset ds = MakeSynthetic({});
  const SolverReport report = FitDataset(ds, {});
  CHECK(report.converged);
  CHECK(report.loops_used <= 40);
  CHECK(report.trace.back().delta_f <= 1e-4);
  CHECK(report.rowsum_resid <= 1e-3);
  CHECK(report.min_entry >= -1e-4);
}

TEST_CASE("trace rows and the sigma schedule") {
  Gen gen(31);
  const Dataset ds = gen.RandomDataset(25, 2, 3);
  SolverConfig config;
  config.loop_max = 12;
  const SolverReport report = FitDataset(ds, config);
  REQUIRE(!report.trace.empty());
  CHECK(report.trace.front().loop == 1);
  CHECK(report.trace.size() == std::size_t(report.loops_used));
  if (report.converged) CHECK(report.trace.back().delta_f <= config.eps1);
  double sigma = config.sigma0;
  for (std::size_t r = 0; r < report.trace.size(); ++r) {
    CHECK(report.trace[r].loop == int(r) + 1);
    CHECK(report.trace[r].sigma == doctest::Approx(sigma).epsilon(1e-15));
    if (r > 0) CHECK(report.trace[r].sigma >= report.trace[r - 1].sigma);
    sigma = std::min(sigma * config.rho, config.sigma_cap);
  }

  std::ostringstream csv;
  WriteTraceCsv(report, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("loop,delta_f,sigma,lagrangian,rowsum_resid,min_entry\n", 0) ==
        0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        std::ptrdiff_t(report.trace.size() + 1));
}

TEST_CASE("sigma is capped") {
  Gen gen(32);
  const Dataset ds = gen.RandomDataset(8, 2, 2);
  SolverConfig config;
  config.sigma0 = 10.0;
  config.sigma_cap = 20.0;
  config.rho = 3.0;
  config.loop_max = 4;
  config.eps1 = 1e-300;
  const SolverReport report = FitDataset(ds, config);
  CHECK(report.trace[0].sigma == 10.0);
  CHECK(report.trace[1].sigma == 20.0);
  CHECK(report.trace[3].sigma == 20.0);
  CHECK(report.final_state.sigma == 20.0);
}

TEST_CASE("a small starting penalty is raised above 4 beta") {
  // With sigma0 = 1 and beta = 0.45 the first subproblem is unbounded below
  // along (t, -t); the solver starts from 100 beta instead.
  Dataset ds;
  ds.features = Matrix{{0.0046}, {0.934}};
  ds.candidates = {{1}, {1, 2}};
  ds.num_classes = 2;
  SolverConfig config;
  config.k = 1;
  config.theta = 1.0;
  config.alpha = 3.2;
  config.beta = 0.45;
  const SolverReport report = FitDataset(ds, config);
  CHECK(report.trace.front().sigma == doctest::Approx(45.0));
  CHECK(report.warnings.size() == 1);
  CHECK(report.converged);
  CHECK(report.rowsum_resid <= 1e-3);
  CHECK(report.labels == std::vector<int>{1, 1});
}

TEST_CASE("multipliers after every update satisfy their invariants") {
  Gen gen(33);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = gen.RandomDataset(gen.Int(3, 20), 2, gen.Int(2, 4));
    SolverConfig config;
    config.k = 2;
    config.loop_max = gen.Int(1, 8);
    const SolverReport report = FitDataset(ds, config);
    CHECK(report.final_state.lambda1.minCoeff() >= 0.0);
    CHECK(report.final_state.sigma > 0.0);
    CHECK(report.final_state.sigma <= config.sigma_cap);
  }
}

TEST_CASE("labels are the row argmax with smallest-index ties") {
  const Matrix f{{0.2, 0.5, 0.5}, {0.9, 0.1, 0.0}, {0.3, 0.3, 0.3}};
  CHECK(Disambiguate(f) == std::vector<int>{2, 1, 1});
  const Matrix onehot = OneHot({2, 1, 1}, 3);
  CHECK(onehot.rowwise().sum() == Vector::Ones(3));
  CHECK(onehot(0, 1) == 1.0);

  Gen gen(34);
  const Dataset ds = gen.RandomDataset(15, 2, 4);
  const SolverReport report = FitDataset(ds, {});
  CHECK(report.labels == Disambiguate(report.f_star));
  for (Eigen::Index i = 0; i < report.onehot.rows(); ++i) {
    CHECK(report.onehot.row(i).sum() == 1.0);
    CHECK(report.onehot(i, report.labels[std::size_t(i)] - 1) == 1.0);
  }
}

TEST_CASE("permuting classes permutes the solution") {
  SyntheticSpec spec;
  spec.n = 60;
  spec.c = 4;
  spec.seed = 3;
  const Dataset ds = MakeSynthetic(spec);
  const std::vector<int> perm = {3, 1, 4, 2};  // old label j -> perm[j-1]
  Dataset permuted = ds;
  for (auto& s : permuted.candidates) {
    for (int& y : s) y = perm[std::size_t(y - 1)];
    std::sort(s.begin(), s.end());
  }
  SolverConfig config;
  config.init_jitter = 0.0;  // the jitter favors low indices by design
  const SolverReport a = FitDataset(ds, config);
  const SolverReport b = FitDataset(permuted, config);
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(b.f_star(i, perm[std::size_t(j)] - 1) - a.f_star(i, j)) <=
            1e-9);
    }
    CHECK(b.labels[std::size_t(i)] == perm[std::size_t(a.labels[std::size_t(i)] - 1)]);
  }
}

TEST_CASE("initial labels keep row sums and candidate support") {
  Gen gen(35);
  const Dataset ds = gen.RandomDataset(30, 1, 5);
  const LabelCodec codec = Encode(ds);
  const Matrix f = InitialLabels(codec, 1e-3);
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    CHECK(std::abs(f.row(i).sum() - 1.0) <= 1e-15);
    for (int j = 0; j < 5; ++j) {
      if (!codec.candidate(i, j)) CHECK(f(i, j) == 0.0);
      if (codec.candidate(i, j)) CHECK(f(i, j) > 0.0);
    }
  }
  CHECK(InitialLabels(codec, 0.0) == codec.y);
}

TEST_CASE("CCCP with beta = 0 stops after the second iteration") {
  Gen gen(36);
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset ds = gen.RandomDataset(6, 2, 3);
    const KnnGraph g = BuildKnnGraph(ds, 2, 1.0);
    const LabelCodec codec = Encode(ds);
    SolverConfig config;
    config.alpha = 5.0;
    config.beta = 0.0;
    config.gd_max_iters = 20000;
    config.gd_grad_tol = 1e-12;
    const AlmState state = AlmState::Initial(codec.y, 2.0);
    const CccpResult result = CccpMinimize(state, g, codec, config);
    CHECK(result.iterations <= 2);
  }
}

TEST_CASE("isolated fully ambiguous example is pulled toward a vertex") {
  const LabelCodec codec = Encode({{1, 2}}, 2);
  const KnnGraph g = Edgeless(1);

  // Grid oracle on the feasible segment F = (a, 1 - a).
  for (double beta : {0.01, 0.1, 1.0}) {
    double best = std::numeric_limits<double>::infinity();
    double best_a = -1.0;
    for (int s = 0; s <= 100; ++s) {
      const double a = s / 100.0;
      const double v = PrimalObjective(Matrix{{a, 1.0 - a}}, g, codec, {1.0, beta});
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    CHECK((best_a == 0.0 || best_a == 1.0));
  }

  double previous = 0.0;
  for (double beta : {0.0, 0.001, 0.01, 0.1}) {
    SolverConfig config;
    config.beta = beta;
    config.sigma0 = 100.0;
    const SolverReport report = AlmFit(g, codec, config);
    const double top = report.f_star.maxCoeff();
    CHECK(top >= previous - 1e-12);
    previous = top;
  }
  CHECK(previous >= 0.99);
}

TEST_CASE("GD leaves a stationary point unchanged") {
  const LabelCodec codec = Encode({{1, 2}, {1, 2}}, 2);
  const KnnGraph g = BuildKnnGraph(Matrix{{0.0}, {1.0}}, 1, 1.0);
  SolverConfig config;
  config.beta = 0.0;
  const AlmState state = AlmState::Initial(codec.y, 1.0);
  const GdResult result = GdMinimize(codec.y, codec.y, state, g, codec, config);
  CHECK(result.iterations == 0);
  CHECK(result.f == codec.y);
}

TEST_CASE("GD reaches the closed-form minimizer of a one-example quadratic") {
  // S = {1}, alpha = 1, beta = 0, sigma = 2, Lambda1 = (0, 1), Lambda2 = 0.5.
  // Stationarity: sigma r = Lambda2 and 2 alpha F2 - (1 - sigma F2) = 0 with
  // r = F1 + F2 - 1, so F2 = 1 / (2 alpha + sigma) = 0.25 and F1 = 1.
  const LabelCodec codec = Encode({{1}}, 2);
  const KnnGraph g = Edgeless(1);
  AlmState state = AlmState::Initial(codec.y, 2.0);
  state.lambda1 = Matrix{{0.0, 1.0}};
  state.lambda2 = Vector::Constant(1, 0.5);
  for (bool precondition : {true, false}) {
    SolverConfig config;
    config.alpha = 1.0;
    config.beta = 0.0;
    config.gd_grad_tol = 1e-12;
    config.gd_max_iters = 100000;
    config.precondition = precondition;
    const GdResult result =
        GdMinimize(Matrix{{0.3, 0.3}}, codec.y, state, g, codec, config);
    CHECK(std::abs(result.f(0, 0) - 1.0) <= 1e-6);
    CHECK(std::abs(result.f(0, 1) - 0.25) <= 1e-6);
  }
}

TEST_CASE("every accepted GD step decreases the surrogate") {
  Gen gen(37);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset ds = gen.RandomDataset(gen.Int(2, 12), 2, gen.Int(2, 4));
    const KnnGraph g = BuildKnnGraph(ds, 1, 1.0);
    const LabelCodec codec = Encode(ds);
    AlmState state = AlmState::Initial(codec.y, gen.Uniform(1.0, 50.0));
    state.lambda1 = gen.Dense(codec.size(), codec.classes(), 0.0, 1.0);
    state.lambda2 = gen.Dense(codec.size(), 1, -1.0, 1.0);
    SolverConfig config;
    config.precondition = gen.Coin(0.5);
    const Matrix ft = gen.Dense(codec.size(), codec.classes(), 0.0, 1.0);
    const GdResult result = GdMinimize(ft, ft, state, g, codec, config);
    CHECK(result.values.size() == std::size_t(result.iterations + 1));
    for (std::size_t s = 1; s < result.values.size(); ++s) {
      CHECK(result.values[s] < result.values[s - 1]);
    }
  }
}

TEST_CASE("CCCP Lagrangian never increases (random property)") {
  Gen gen(38);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset ds = gen.RandomDataset(gen.Int(3, 30), 2, gen.Int(2, 4));
    SolverConfig config;
    config.k = gen.Int(1, int(ds.size()) - 1);
    config.alpha = gen.Uniform(1.0, 1000.0);
    config.beta = gen.Uniform(0.0, 0.5);
    config.loop_max = 10;
    const SolverReport report = FitDataset(ds, config);
    for (const auto& values : report.cccp_lagrangians) {
      for (std::size_t t = 1; t < values.size(); ++t) {
        CHECK(values[t] <= values[t - 1] + 1e-8);
      }
    }
  }
}

// Minimum of the primal objective over (a_i, 1 - a_i), a_i on a 0.01 grid.
double GridMinimum(const Matrix& w, const std::vector<std::vector<int>>& cand,
                   double alpha, double beta) {
  const auto n = w.rows();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(std::size_t(n), 0);
  Matrix f(n, 2);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) {
      f(i, 0) = idx[std::size_t(i)] / 100.0;
      f(i, 1) = 1.0 - f(i, 0);
    }
    best = std::min(best, ScalarObjective(f, w, cand, alpha, beta));
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] > 100) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return best;
}

TEST_CASE("solution is no worse than a grid search on tiny problems") {
  Gen gen(39);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = gen.Int(2, 3);
    const Dataset ds = gen.RandomDataset(n, 1, 2);
    SolverConfig config;
    config.k = 1;
    config.theta = 1.0;
    config.alpha = gen.Uniform(0.5, 10.0);
    config.beta = gen.Uniform(0.01, 0.5);
    const KnnGraph g = BuildKnnGraph(ds, config.k, config.theta);
    const SolverReport report = AlmFit(g, Encode(ds), config);
    const double primal =
        PrimalObjective(report.f_star, g, Encode(ds), config.objective());
    const double oracle =
        GridMinimum(DenseWeights(g), ds.candidates, config.alpha, config.beta);
    CHECK(primal <= oracle + 1e-3);
  }
}

TEST_CASE("empty problems are solver errors") {
  SolverConfig config;
  try {
    AlmFit(Edgeless(0), Encode(std::vector<std::vector<int>>{}, 2), config);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSolver);
  }
}

}  // namespace
}  // namespace sll
