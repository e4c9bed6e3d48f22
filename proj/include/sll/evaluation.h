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

#ifndef SLL_EVALUATION_H_
#define SLL_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sll/dataset.h"
#include "sll/solver.h"
#include "sll/types.h"

namespace sll {

double Accuracy(std::span<const int> predicted, std::span<const int> truth);
double TrainingAccuracy(const SolverReport& report,
                        std::span<const int> truth);

struct FoldResult {
  int fold = 0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double baseline_test_acc = 0.0;  // ambiguous-kNN control, same split
  int loops_used = 0;
  bool converged = false;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population form
};

MeanStd Summarize(std::span<const double> values);

struct CvResult {
  std::vector<FoldResult> folds;
  MeanStd train;
  MeanStd test;
  MeanStd baseline_test;
  SolverConfig config;
  std::uint64_t seed = 0;
};

// Five-fold stratified cross validation: fit on four folds, score the
// disambiguated training labels and the kNN predictions on the held-out
// fold. `parallel` runs folds on separate threads; results do not depend
// on it.
CvResult CrossValidate(const Dataset& dataset, const SolverConfig& config,
                       std::uint64_t seed, bool parallel = false);

inline constexpr const char* kFoldsCsvHeader = "fold,train_acc,test_acc";
void WriteFoldsCsv(const CvResult& result, std::ostream& out);

struct SweepGrid {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<int> k;

  std::size_t size() const { return alpha.size() * beta.size() * k.size(); }
};

// key=value file with comma-separated lists for alpha, beta and K. Missing
// keys fall back to the single value in `base`.
SweepGrid LoadSweepGrid(const std::filesystem::path& path,
                        const SolverConfig& base);

struct SweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  int k = 0;
  CvResult result;
};

// Cartesian product in alpha-major, then beta, then K order.
std::vector<SweepRow> Sweep(const Dataset& dataset, const SweepGrid& grid,
                            const SolverConfig& base, std::uint64_t seed,
                            bool parallel = false);

inline constexpr const char* kSweepCsvHeader =
    "alpha,beta,K,mean_train,std_train,mean_test,std_test";
void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out);

// Ranks of `values` with rank 1 for the largest; ties share the average.
Vector AverageRanks(std::span<const double> values);

// Upper `confidence` quantile of chi-square with `df` degrees of freedom.
// Tabulated for confidence 0.90 and df <= 20, Wilson-Hilferty otherwise.
double ChiSquareCritical(double confidence, int df);

struct FriedmanResult {
  double statistic = 0.0;  // chi^2_F over all methods
  int df = 0;
  double critical = 0.0;
  bool reject = false;
  Vector mean_ranks;  // per method, 1 = best
  // Two-method test of the first method (the reference) against each method.
  // Entry 0 compares the reference with itself and is always false.
  std::vector<double> pairwise_statistic;
  std::vector<bool> reject_per_method;
};

// `table` is methods x datasets, higher is better.
FriedmanResult FriedmanTest(const Matrix& table, double confidence);

struct AccuracyTable {
  std::vector<std::string> methods;
  Matrix values;  // methods x datasets
};

// One method per line: optional leading name, then comma- or
// whitespace-separated accuracies. '#' starts a comment line.
AccuracyTable LoadAccuracyTable(const std::filesystem::path& path);

}  // namespace sll

#endif  // SLL_EVALUATION_H_
