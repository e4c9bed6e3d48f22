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

#include "sll/evaluation.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <future>
#include <numeric>

#include "sll/graph.h"
#include "sll/inference.h"
#include "sll/labelspace.h"
#include "sll/text_io.h"

namespace sll {
namespace {

// Upper 10% points of chi-square, df = 1..20.
constexpr std::array<double, 20> kChiSquare90 = {
    2.7055434540954,  4.60517018598809, 6.25138863117033, 7.77944033973486,
    9.23635689978112, 10.6446406756684, 12.0170366237805, 13.3615661365117,
    14.6836565732598, 15.9871791721053, 17.2750085175001, 18.5493477867033,
    19.8119293071276, 21.0641442129971, 22.3071295815787, 23.5418289230961,
    24.7690353439015, 25.9894230826372, 27.2035710293568, 28.4119805843056,
};

double NormalQuantile(double p) {
  // Bisection on the CDF; plenty fast for a handful of calls.
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FoldResult RunFold(const Dataset& dataset, const SplitPlan& plan, int fold_id,
                   const SolverConfig& config) {
  try {
    const auto train_rows = plan.TrainIndices(fold_id);
    const auto test_rows = plan.TestIndices(fold_id);
    const Dataset train = dataset.Subset(train_rows);
    const Dataset test = dataset.Subset(test_rows);

    const KnnGraph graph = BuildKnnGraph(train, config.k, config.theta);
    const SolverReport report = AlmFit(graph, Encode(train), config);

    Predictor predictor{train.features, report.onehot, config.k, graph.theta};
    std::vector<int> predicted;
    std::vector<int> baseline;
    for (Eigen::Index i = 0; i < test.size(); ++i) {
      const std::span<const double> x(test.features.data() + i * test.dims(),
                                      static_cast<std::size_t>(test.dims()));
      predicted.push_back(Predict(predictor, x).label);
      baseline.push_back(BaselineAmbiguousKnn(train, x, config.k, graph.theta));
    }

    FoldResult result;
    result.fold = fold_id;
    result.train_acc = TrainingAccuracy(report, *train.truth);
    result.test_acc = Accuracy(predicted, *test.truth);
    result.baseline_test_acc = Accuracy(baseline, *test.truth);
    result.loops_used = report.loops_used;
    result.converged = report.converged;
    return result;
  } catch (const Error& e) {
    throw Error(e.kind(), "fold " + std::to_string(fold_id) + ": " + e.what());
  }
}

std::vector<double> ParseList(const std::string& value, const std::string& key) {
  std::vector<double> out;
  for (const auto token : text::Split(value, ',')) {
    out.push_back(text::ParseDouble(token, "grid " + key));
  }
  return out;
}

}  // namespace

double Accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw Error(ErrorKind::kValidation,
                "accuracy needs equally sized, non-empty label lists");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double TrainingAccuracy(const SolverReport& report,
                        std::span<const int> truth) {
  if (truth.empty()) {
    throw Error(ErrorKind::kValidation, "training accuracy needs ground truth");
  }
  return Accuracy(report.labels, truth);
}

MeanStd Summarize(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(sq / n);
  return out;
}

CvResult CrossValidate(const Dataset& dataset, const SolverConfig& config,
                       std::uint64_t seed, bool parallel) {
  config.Validate();
  if (!dataset.truth) {
    throw Error(ErrorKind::kValidation, "cross validation needs ground truth");
  }
  const SplitPlan plan = PlanSplits(dataset, seed);

  CvResult result;
  result.config = config;
  result.seed = seed;
  if (parallel) {
    std::vector<std::future<FoldResult>> pending;
    for (int fold = 1; fold <= kNumFolds; ++fold) {
      pending.push_back(std::async(std::launch::async, RunFold,
                                   std::cref(dataset), std::cref(plan), fold,
                                   std::cref(config)));
    }
    for (auto& f : pending) result.folds.push_back(f.get());
  } else {
    for (int fold = 1; fold <= kNumFolds; ++fold) {
      result.folds.push_back(RunFold(dataset, plan, fold, config));
    }
  }

  std::vector<double> train;
  std::vector<double> test;
  std::vector<double> baseline;
  for (const auto& fold : result.folds) {
    train.push_back(fold.train_acc);
    test.push_back(fold.test_acc);
    baseline.push_back(fold.baseline_test_acc);
  }
  result.train = Summarize(train);
  result.test = Summarize(test);
  result.baseline_test = Summarize(baseline);
  return result;
}

void WriteFoldsCsv(const CvResult& result, std::ostream& out) {
  out << kFoldsCsvHeader << '\n';
  for (const auto& fold : result.folds) {
    out << fold.fold << ',' << text::FormatDouble(fold.train_acc) << ','
        << text::FormatDouble(fold.test_acc) << '\n';
  }
}

SweepGrid LoadSweepGrid(const std::filesystem::path& path,
                        const SolverConfig& base) {
  SweepGrid grid{{base.alpha}, {base.beta}, {base.k}};
  for (const auto& [key, value] : text::ReadKeyValueFile(path)) {
    if (key == "alpha") {
      grid.alpha = ParseList(value, key);
    } else if (key == "beta") {
      grid.beta = ParseList(value, key);
    } else if (key == "K" || key == "k") {
      grid.k.clear();
      for (const auto token : text::Split(value, ',')) {
        grid.k.push_back(static_cast<int>(text::ParseInt(token, "grid K")));
      }
    } else {
      throw Error(ErrorKind::kFormat,
                  path.string() + ": unknown grid key '" + key + "'");
    }
  }
  if (grid.size() == 0) {
    throw Error(ErrorKind::kFormat, path.string() + ": empty grid");
  }
  return grid;
}

std::vector<SweepRow> Sweep(const Dataset& dataset, const SweepGrid& grid,
                            const SolverConfig& base, std::uint64_t seed,
                            bool parallel) {
  std::vector<SweepRow> rows;
  for (double alpha : grid.alpha) {
    for (double beta : grid.beta) {
      for (int k : grid.k) {
        rows.push_back({alpha, beta, k, {}});
      }
    }
  }
  auto run = [&](SweepRow& row) {
    SolverConfig config = base;
    config.alpha = row.alpha;
    config.beta = row.beta;
    config.k = row.k;
    row.result = CrossValidate(dataset, config, seed, false);
  };
  if (parallel) {
    std::vector<std::future<void>> pending;
    for (auto& row : rows) {
      pending.push_back(std::async(std::launch::async, run, std::ref(row)));
    }
    for (auto& f : pending) f.get();
  } else {
    for (auto& row : rows) run(row);
  }
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : rows) {
    out << text::FormatDouble(row.alpha) << ',' << text::FormatDouble(row.beta)
        << ',' << row.k << ',' << text::FormatDouble(row.result.train.mean)
        << ',' << text::FormatDouble(row.result.train.std) << ','
        << text::FormatDouble(row.result.test.mean) << ','
        << text::FormatDouble(row.result.test.std) << '\n';
  }
}

Vector AverageRanks(std::span<const double> values) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  Vector ranks(static_cast<Eigen::Index>(n));
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    // Positions start..end-1 hold ranks start+1..end.
    const double shared = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t p = start; p < end; ++p) {
      ranks(static_cast<Eigen::Index>(order[p])) = shared;
    }
    start = end;
  }
  return ranks;
}

double ChiSquareCritical(double confidence, int df) {
  if (df < 1) throw Error(ErrorKind::kUsage, "chi-square needs df >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::kUsage, "confidence must lie in (0, 1)");
  }
  if (std::abs(confidence - 0.90) < 1e-12 &&
      df <= static_cast<int>(kChiSquare90.size())) {
    return kChiSquare90[static_cast<std::size_t>(df - 1)];
  }
  const double z = NormalQuantile(confidence);
  const double a = 2.0 / (9.0 * df);
  const double cube = 1.0 - a + z * std::sqrt(a);
  return df * cube * cube * cube;
}

namespace {

double FriedmanStatistic(const Matrix& table, Vector* mean_ranks) {
  const auto k = table.rows();
  const auto n = table.cols();
  Vector rank_sum = Vector::Zero(k);
  std::vector<double> column(static_cast<std::size_t>(k));
  for (Eigen::Index d = 0; d < n; ++d) {
    for (Eigen::Index m = 0; m < k; ++m) {
      column[static_cast<std::size_t>(m)] = table(m, d);
    }
    rank_sum += AverageRanks(column);
  }
  const Vector mean = rank_sum / static_cast<double>(n);
  if (mean_ranks) *mean_ranks = mean;
  const double kk = static_cast<double>(k);
  // Mean ranks of a fully tied table are all (k+1)/2, which makes the
  // bracket exactly zero in floating point.
  return 12.0 * static_cast<double>(n) / (kk * (kk + 1.0)) *
         (mean.squaredNorm() - kk * (kk + 1.0) * (kk + 1.0) / 4.0);
}

}  // namespace

FriedmanResult FriedmanTest(const Matrix& table, double confidence) {
  if (table.rows() < 2 || table.cols() < 2) {
    throw Error(ErrorKind::kValidation,
                "Friedman test needs at least 2 methods and 2 datasets");
  }
  if (!table.allFinite()) {
    throw Error(ErrorKind::kValidation, "accuracy table has non-finite values");
  }
  FriedmanResult result;
  result.df = static_cast<int>(table.rows() - 1);
  result.statistic = FriedmanStatistic(table, &result.mean_ranks);
  result.critical = ChiSquareCritical(confidence, result.df);
  result.reject = result.statistic > result.critical;

  const double pair_critical = ChiSquareCritical(confidence, 1);
  result.pairwise_statistic.push_back(0.0);
  result.reject_per_method.push_back(false);
  for (Eigen::Index m = 1; m < table.rows(); ++m) {
    Matrix pair(2, table.cols());
    pair.row(0) = table.row(0);
    pair.row(1) = table.row(m);
    const double stat = FriedmanStatistic(pair, nullptr);
    result.pairwise_statistic.push_back(stat);
    result.reject_per_method.push_back(stat > pair_critical);
  }
  return result;
}

AccuracyTable LoadAccuracyTable(const std::filesystem::path& path) {
  AccuracyTable table;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  for (const auto& raw : text::ReadLines(path)) {
    ++line_no;
    const auto line = text::Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() &&
             (line[pos] == ',' || std::isspace(static_cast<unsigned char>(line[pos])))) {
        ++pos;
      }
      const auto start = pos;
      while (pos < line.size() && line[pos] != ',' &&
             !std::isspace(static_cast<unsigned char>(line[pos]))) {
        ++pos;
      }
      if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    const auto context = path.string() + ":" + std::to_string(line_no);
    std::string name = "method_" + std::to_string(rows.size() + 1);
    std::size_t first = 0;
    double probe = 0.0;
    const auto* b = tokens.front().data();
    const auto* e = b + tokens.front().size();
    if (auto [p, ec] = std::from_chars(b, e, probe); ec != std::errc() || p != e) {
      name = std::string(tokens.front());
      first = 1;
    }
    std::vector<double> values;
    for (std::size_t t = first; t < tokens.size(); ++t) {
      values.push_back(text::ParseDouble(tokens[t], context));
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw Error(ErrorKind::kFormat, context + ": dimension mismatch");
    }
    table.methods.push_back(std::move(name));
    rows.push_back(std::move(values));
  }
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorKind::kFormat, path.string() + ": empty accuracy table");
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t m = 0; m < rows.size(); ++m) {
    for (std::size_t d = 0; d < rows[m].size(); ++d) {
      table.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d)) =
          rows[m][d];
    }
  }
  return table;
}

}  // namespace sll
