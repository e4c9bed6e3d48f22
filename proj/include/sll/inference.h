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

#ifndef SLL_INFERENCE_H_
#define SLL_INFERENCE_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

#include "sll/dataset.h"
#include "sll/types.h"

namespace sll {

// Weighted K-nearest-neighbor vote over disambiguated training labels.
struct Predictor {
  Matrix train_features;  // n x d
  Matrix onehot;          // n x c, one 1 per row
  int k = 5;
  double theta = 1.0;

  void Validate() const;
};

struct Prediction {
  int label = 0;     // 1-based
  Vector scores;     // sum of neighbor weight times neighbor label vector
  bool k_clamped = false;
};

Prediction Predict(const Predictor& predictor, std::span<const double> x);
std::vector<Prediction> PredictBatch(const Predictor& predictor,
                                     const Matrix& x);

// Same vote, but each neighbor contributes its undisambiguated candidate
// vector (uniform over S_i). The control that skips disambiguation.
Prediction PredictAmbiguousKnn(const Dataset& train,
                               std::span<const double> x, int k, double theta);
int BaselineAmbiguousKnn(const Dataset& train, std::span<const double> x,
                         int k, double theta);

// "index,predicted_label,score_1..score_c" with 1-based indices.
void WritePredictionsCsv(const std::vector<Prediction>& predictions,
                         int num_classes, std::ostream& out);

// Model directory: train_features.tsv, onehot.tsv and model.txt (k, theta,
// n, d, c).
void SavePredictor(const Predictor& predictor, const std::filesystem::path& dir);
Predictor LoadPredictor(const std::filesystem::path& dir);

}  // namespace sll

#endif  // SLL_INFERENCE_H_
