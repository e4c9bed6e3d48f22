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

#include "sll/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "sll/text_io.h"

namespace sll {
namespace {

std::string RowContext(const std::filesystem::path& path, std::size_t row) {
  return path.string() + ": row " + std::to_string(row + 1);
}

std::string RowName(Eigen::Index row) {
  return "row " + std::to_string(row + 1);
}

Matrix ReadFeatures(const std::filesystem::path& path) {
  const auto lines = text::ReadLines(path);
  if (lines.empty()) {
    throw Error(ErrorKind::kFormat, path.string() + ": no examples");
  }
  const auto dims = text::Split(lines.front(), '\t').size();
  Matrix features(static_cast<Eigen::Index>(lines.size()),
                  static_cast<Eigen::Index>(dims));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = text::Split(lines[i], '\t');
    if (tokens.size() != dims) {
      throw Error(ErrorKind::kValidation,
                  RowContext(path, i) + ": dimension mismatch, expected " +
                      std::to_string(dims) + " values, found " +
                      std::to_string(tokens.size()));
    }
    for (std::size_t k = 0; k < dims; ++k) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          text::ParseDouble(tokens[k], RowContext(path, i));
    }
  }
  return features;
}

std::vector<std::vector<int>> ReadCandidates(
    const std::filesystem::path& path) {
  std::vector<std::vector<int>> candidates;
  const auto lines = text::ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::Trim(lines[i]).empty()) {
      throw Error(ErrorKind::kValidation,
                  RowContext(path, i) + ": empty candidate set");
    }
    std::vector<int> set;
    for (const auto token : text::Split(lines[i], ',')) {
      const auto label = text::ParseInt(token, RowContext(path, i));
      if (label < 1) {
        throw Error(ErrorKind::kValidation,
                    RowContext(path, i) + ": label " + std::to_string(label) +
                        " is not a positive 1-based class index");
      }
      set.push_back(static_cast<int>(label));
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    candidates.push_back(std::move(set));
  }
  return candidates;
}

std::vector<int> ReadTruth(const std::filesystem::path& path) {
  std::vector<int> truth;
  const auto lines = text::ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    truth.push_back(
        static_cast<int>(text::ParseInt(lines[i], RowContext(path, i))));
  }
  return truth;
}

}  // namespace

void Dataset::Validate() const {
  const auto n = size();
  if (n == 0) throw Error(ErrorKind::kValidation, "dataset has no examples");
  if (dims() == 0) throw Error(ErrorKind::kValidation, "features have d = 0");
  if (static_cast<Eigen::Index>(candidates.size()) != n) {
    throw Error(ErrorKind::kValidation,
                "dimension mismatch: " + std::to_string(n) +
                    " feature rows but " + std::to_string(candidates.size()) +
                    " candidate rows");
  }
  if (num_classes < 1) {
    throw Error(ErrorKind::kValidation, "class count must be positive");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!features.row(i).allFinite()) {
      throw Error(ErrorKind::kValidation,
                  RowName(i) + ": non-finite feature value");
    }
    const auto& set = candidates[static_cast<std::size_t>(i)];
    if (set.empty()) {
      throw Error(ErrorKind::kValidation, RowName(i) + ": empty candidate set");
    }
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (set[k] < 1 || set[k] > num_classes) {
        throw Error(ErrorKind::kValidation,
                    RowName(i) + ": candidate label " + std::to_string(set[k]) +
                        " outside 1.." + std::to_string(num_classes));
      }
      if (k > 0 && set[k] <= set[k - 1]) {
        throw Error(ErrorKind::kValidation,
                    RowName(i) + ": candidate set not sorted and unique");
      }
    }
  }
  if (truth) {
    if (static_cast<Eigen::Index>(truth->size()) != n) {
      throw Error(ErrorKind::kValidation,
                  "dimension mismatch: " + std::to_string(n) +
                      " examples but " + std::to_string(truth->size()) +
                      " truth labels");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const int label = (*truth)[static_cast<std::size_t>(i)];
      const auto& set = candidates[static_cast<std::size_t>(i)];
      if (!std::binary_search(set.begin(), set.end(), label)) {
        throw Error(ErrorKind::kValidation,
                    RowName(i) + ": truth label " + std::to_string(label) +
                        " is not in its candidate set");
      }
    }
  }
}

Dataset Dataset::Subset(std::span<const int> rows) const {
  Dataset out;
  out.num_classes = num_classes;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), dims());
  out.candidates.reserve(rows.size());
  if (truth) out.truth.emplace().reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = static_cast<std::size_t>(rows[k]);
    out.features.row(static_cast<Eigen::Index>(k)) =
        features.row(static_cast<Eigen::Index>(r));
    out.candidates.push_back(candidates[r]);
    if (truth) out.truth->push_back((*truth)[r]);
  }
  return out;
}

double Dataset::MeanCandidateCount() const {
  if (candidates.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& set : candidates) total += set.size();
  return static_cast<double>(total) / static_cast<double>(candidates.size());
}

Dataset LoadDataset(const std::filesystem::path& features_path,
                    const std::filesystem::path& candidates_path,
                    const std::optional<std::filesystem::path>& truth_path,
                    std::optional<int> declared_classes) {
  Dataset ds;
  ds.features = ReadFeatures(features_path);
  ds.candidates = ReadCandidates(candidates_path);
  if (truth_path) ds.truth = ReadTruth(*truth_path);

  int max_label = 0;
  for (const auto& set : ds.candidates) {
    if (!set.empty()) max_label = std::max(max_label, set.back());
  }
  if (declared_classes) {
    if (*declared_classes < max_label) {
      throw Error(ErrorKind::kValidation,
                  "declared class count c=" + std::to_string(*declared_classes) +
                      " is smaller than the largest label " +
                      std::to_string(max_label));
    }
    ds.num_classes = *declared_classes;
  } else {
    ds.num_classes = max_label;
  }
  ds.Validate();
  return ds;
}

Matrix LoadFeatures(const std::filesystem::path& path) {
  Matrix features = ReadFeatures(path);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    if (!features.row(i).allFinite()) {
      throw Error(ErrorKind::kValidation,
                  RowContext(path, static_cast<std::size_t>(i)) +
                      ": non-finite feature value");
    }
  }
  return features;
}

Dataset LoadManifest(const std::filesystem::path& manifest_path) {
  std::map<std::string, std::string> kv;
  for (auto& [key, value] : text::ReadKeyValueFile(manifest_path)) {
    kv[key] = value;
  }
  const auto base = manifest_path.parent_path();
  auto require = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw Error(ErrorKind::kFormat,
                  manifest_path.string() + ": missing key '" + key + "'");
    }
    return it->second;
  };
  std::optional<std::filesystem::path> truth;
  if (auto it = kv.find("truth"); it != kv.end() && !it->second.empty()) {
    truth = base / it->second;
  }
  std::optional<int> classes;
  if (auto it = kv.find("c"); it != kv.end()) {
    classes = static_cast<int>(text::ParseInt(it->second, "manifest c"));
  }
  Dataset ds = LoadDataset(base / require("features"),
                           base / require("candidates"), truth, classes);
  if (auto it = kv.find("n"); it != kv.end()) {
    if (text::ParseInt(it->second, "manifest n") != ds.size()) {
      throw Error(ErrorKind::kValidation,
                  "dimension mismatch: manifest n=" + it->second + " but " +
                      std::to_string(ds.size()) + " rows");
    }
  }
  if (auto it = kv.find("d"); it != kv.end()) {
    if (text::ParseInt(it->second, "manifest d") != ds.dims()) {
      throw Error(ErrorKind::kValidation,
                  "dimension mismatch: manifest d=" + it->second + " but " +
                      std::to_string(ds.dims()) + " columns");
    }
  }
  return ds;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) {
      throw Error(ErrorKind::kIo, "cannot write " + (dir / name).string());
    }
    return out;
  };
  {
    auto out = open("features.tsv");
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
      for (Eigen::Index k = 0; k < dataset.dims(); ++k) {
        if (k > 0) out << '\t';
        out << text::FormatDouble(dataset.features(i, k));
      }
      out << '\n';
    }
  }
  {
    auto out = open("candidates.txt");
    for (const auto& set : dataset.candidates) {
      for (std::size_t k = 0; k < set.size(); ++k) {
        if (k > 0) out << ',';
        out << set[k];
      }
      out << '\n';
    }
  }
  if (dataset.truth) {
    auto out = open("truth.txt");
    for (int label : *dataset.truth) out << label << '\n';
  }
  auto out = open("manifest.txt");
  out << "n=" << dataset.size() << "\nd=" << dataset.dims()
      << "\nc=" << dataset.num_classes
      << "\nfeatures=features.tsv\ncandidates=candidates.txt\n";
  if (dataset.truth) out << "truth=truth.txt\n";
}

Dataset NormalizeUnitLength(const Dataset& dataset) {
  Dataset out = dataset;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double norm = out.features.row(i).norm();
    if (!(norm > 0.0)) {
      throw Error(ErrorKind::kValidation,
                  RowName(i) + ": zero-norm feature row cannot be normalized");
    }
    out.features.row(i) /= norm;
  }
  return out;
}

Dataset MakeSynthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1) {
    throw Error(ErrorKind::kUsage, "synthetic data needs n >= 1 and d >= 1");
  }
  if (spec.c < 2) throw Error(ErrorKind::kUsage, "synthetic data needs c >= 2");
  if (spec.r_extra < 0 || spec.r_extra >= spec.c) {
    throw Error(ErrorKind::kUsage, "r_extra must lie in 0..c-1");
  }
  if (!(spec.p_coocc >= 0.0 && spec.p_coocc <= 1.0)) {
    throw Error(ErrorKind::kUsage, "p_coocc must lie in [0, 1]");
  }
  if (!(spec.sep >= 0.0)) throw Error(ErrorKind::kUsage, "sep must be >= 0");

  // Adjacent means on a circle sit exactly `sep` apart (chord length) and all
  // other pairs are farther; with d == 1 the means lie on a line instead.
  Matrix means = Matrix::Zero(spec.c, spec.d);
  if (spec.d == 1) {
    for (int j = 0; j < spec.c; ++j) means(j, 0) = spec.sep * j;
  } else {
    const double angle = 2.0 * std::numbers::pi / spec.c;
    const double radius = spec.sep / (2.0 * std::sin(angle / 2.0));
    for (int j = 0; j < spec.c; ++j) {
      means(j, 0) = radius * std::cos(angle * j);
      means(j, 1) = radius * std::sin(angle * j);
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution corrupt(spec.p_coocc);

  Dataset ds;
  ds.num_classes = spec.c;
  ds.features.resize(spec.n, spec.d);
  ds.candidates.resize(static_cast<std::size_t>(spec.n));
  ds.truth.emplace(static_cast<std::size_t>(spec.n));

  // Balanced classes in shuffled order.
  std::vector<int> labels(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) labels[static_cast<std::size_t>(i)] = i % spec.c + 1;
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<int> others;
  for (int i = 0; i < spec.n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    for (int k = 0; k < spec.d; ++k) {
      ds.features(i, k) = means(y - 1, k) + noise(rng);
    }
    auto& set = ds.candidates[static_cast<std::size_t>(i)];
    set.push_back(y);
    if (spec.r_extra > 0 && corrupt(rng)) {
      others.clear();
      for (int j = 1; j <= spec.c; ++j) {
        if (j != y) others.push_back(j);
      }
      std::shuffle(others.begin(), others.end(), rng);
      set.insert(set.end(), others.begin(), others.begin() + spec.r_extra);
      std::sort(set.begin(), set.end());
    }
    (*ds.truth)[static_cast<std::size_t>(i)] = y;
  }
  ds.Validate();
  return ds;
}

std::vector<int> SplitPlan::TrainIndices(int fold_id) const {
  std::vector<int> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != fold_id) rows.push_back(static_cast<int>(i));
  }
  return rows;
}

std::vector<int> SplitPlan::TestIndices(int fold_id) const {
  std::vector<int> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == fold_id) rows.push_back(static_cast<int>(i));
  }
  return rows;
}

SplitPlan PlanSplits(const Dataset& dataset, std::uint64_t seed) {
  if (!dataset.truth) {
    throw Error(ErrorKind::kValidation,
                "stratified splits need ground-truth labels");
  }
  SplitPlan plan;
  plan.seed = seed;
  plan.fold.assign(static_cast<std::size_t>(dataset.size()), 0);

  std::vector<std::vector<int>> members(
      static_cast<std::size_t>(dataset.num_classes) + 1);
  for (std::size_t i = 0; i < dataset.truth->size(); ++i) {
    members[static_cast<std::size_t>((*dataset.truth)[i])].push_back(
        static_cast<int>(i));
  }

  std::mt19937_64 rng(seed);
  int next_fold = 0;
  for (std::size_t label = 1; label < members.size(); ++label) {
    auto& rows = members[label];
    if (rows.empty()) continue;
    if (rows.size() < kNumFolds) {
      plan.warnings.push_back("class " + std::to_string(label) + " has only " +
                              std::to_string(rows.size()) +
                              " examples; stratification is best-effort");
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    for (int row : rows) {
      plan.fold[static_cast<std::size_t>(row)] = next_fold + 1;
      next_fold = (next_fold + 1) % kNumFolds;
    }
  }
  return plan;
}

}  // namespace sll
