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

// Superset-label datasets: features, candidate label sets and optional ground
// truth, plus text-file ingestion, synthetic generation and stratified folds.
//
// Labels are 1-based everywhere in this API and in every file format. Matrix
// columns are 0-based, so class `j` lives in column `j - 1`.

#ifndef SLL_DATASET_H_
#define SLL_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sll/types.h"

namespace sll {

struct Dataset {
  Matrix features;                             // n x d
  std::vector<std::vector<int>> candidates;    // S_i, sorted and unique
  std::optional<std::vector<int>> truth;       // y_i, must lie in S_i
  int num_classes = 0;                         // c

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dims() const { return features.cols(); }
  bool has_truth() const { return truth.has_value(); }

  // Throws Error(kValidation) naming the first offending row.
  void Validate() const;

  // Rows are 0-based indices into this dataset, in the order given.
  Dataset Subset(std::span<const int> rows) const;

  double MeanCandidateCount() const;
};

// Reads the tab-separated features file, the comma-separated candidates file
// and, when given, the truth file. `declared_classes` comes from a manifest;
// the class count is the larger of it and the largest label seen.
Dataset LoadDataset(const std::filesystem::path& features_path,
                    const std::filesystem::path& candidates_path,
                    const std::optional<std::filesystem::path>& truth_path = {},
                    std::optional<int> declared_classes = {});

// Features-only file (one example per line, tab-separated), for prediction.
Matrix LoadFeatures(const std::filesystem::path& path);

// Flat key=value manifest with keys n, d, c, features, candidates, truth.
// File names are resolved relative to the manifest's directory.
Dataset LoadManifest(const std::filesystem::path& manifest_path);

// Writes features.tsv, candidates.txt, truth.txt (if present) and
// manifest.txt into `dir`, creating it if needed.
void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir);

// Scales every feature row to unit Euclidean norm.
Dataset NormalizeUnitLength(const Dataset& dataset);

struct SyntheticSpec {
  int n = 300;
  int c = 3;
  int d = 2;
  double sep = 4.0;      // distance between adjacent class means, in stddevs
  double p_coocc = 0.7;  // probability that an example gets false labels
  int r_extra = 1;       // false labels added to a corrupted example
  std::uint64_t seed = 42;
};

// Isotropic unit-variance Gaussian blobs with means on a circle (a line when
// d == 1) so that adjacent means are exactly `sep` apart. Each example keeps
// its true label; with probability p_coocc it also receives r_extra distinct
// false labels drawn uniformly from the remaining classes.
Dataset MakeSynthetic(const SyntheticSpec& spec);

inline constexpr int kNumFolds = 5;

struct SplitPlan {
  std::vector<int> fold;  // fold id in 1..kNumFolds per example
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  std::vector<int> TrainIndices(int fold_id) const;
  std::vector<int> TestIndices(int fold_id) const;
};

// Stratified by ground truth: each class is shuffled with `seed` and dealt
// round-robin across the folds, continuing where the previous class stopped
// so fold sizes stay balanced too.
SplitPlan PlanSplits(const Dataset& dataset, std::uint64_t seed);

}  // namespace sll

#endif  // SLL_DATASET_H_
