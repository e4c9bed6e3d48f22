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

#include "sll/inference.h"

#include <fstream>
#include <map>
#include <string>

#include "sll/graph.h"
#include "sll/labelspace.h"
#include "sll/text_io.h"

namespace sll {
namespace {

int ArgMax(const Vector& scores) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < scores.size(); ++j) {
    if (scores(j) > scores(best)) best = j;
  }
  return static_cast<int>(best + 1);
}

// Accumulates sum_i w(x, x_{k_i}) * rows.row(k_i) over the K nearest rows.
Prediction Vote(const Matrix& points, const Matrix& rows,
                std::span<const double> x, int k, double theta) {
  if (static_cast<Eigen::Index>(x.size()) != points.cols()) {
    throw Error(ErrorKind::kValidation,
                "dimension mismatch: query has " + std::to_string(x.size()) +
                    " features, model expects " +
                    std::to_string(points.cols()));
  }
  Prediction out;
  if (k > points.rows()) {
    k = static_cast<int>(points.rows());
    out.k_clamped = true;
  }
  out.scores = Vector::Zero(rows.cols());
  for (const auto& nb : NearestNeighbors(points, x, k)) {
    const double w = GaussianWeightFromSquaredDistance(nb.squared_distance, theta);
    out.scores += w * rows.row(nb.index).transpose();
  }
  out.label = ArgMax(out.scores);
  return out;
}

void WriteMatrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << '\t';
      out << text::FormatDouble(m(i, j));
    }
    out << '\n';
  }
}

Matrix ReadMatrix(const std::filesystem::path& path) {
  const auto lines = text::ReadLines(path);
  if (lines.empty()) throw Error(ErrorKind::kFormat, path.string() + ": empty");
  const auto cols = text::Split(lines.front(), '\t').size();
  Matrix m(static_cast<Eigen::Index>(lines.size()),
           static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = text::Split(lines[i], '\t');
    const auto context = path.string() + ": row " + std::to_string(i + 1);
    if (tokens.size() != cols) {
      throw Error(ErrorKind::kFormat, context + ": dimension mismatch");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          text::ParseDouble(tokens[j], context);
    }
  }
  return m;
}

}  // namespace

void Predictor::Validate() const {
  if (train_features.rows() == 0 || train_features.rows() != onehot.rows()) {
    throw Error(ErrorKind::kValidation,
                "predictor needs matching, non-empty features and labels");
  }
  if (k < 1) throw Error(ErrorKind::kUsage, "K must be at least 1");
  if (!(theta > 0.0)) throw Error(ErrorKind::kUsage, "theta must be positive");
  for (Eigen::Index i = 0; i < onehot.rows(); ++i) {
    if (onehot.row(i).sum() != 1.0 || onehot.row(i).maxCoeff() != 1.0) {
      throw Error(ErrorKind::kValidation,
                  "label row " + std::to_string(i + 1) + " is not one-hot");
    }
  }
}

Prediction Predict(const Predictor& predictor, std::span<const double> x) {
  return Vote(predictor.train_features, predictor.onehot, x, predictor.k,
              predictor.theta);
}

std::vector<Prediction> PredictBatch(const Predictor& predictor,
                                     const Matrix& x) {
  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.push_back(Predict(
        predictor, {x.data() + i * x.cols(), static_cast<std::size_t>(x.cols())}));
  }
  return out;
}

Prediction PredictAmbiguousKnn(const Dataset& train,
                               std::span<const double> x, int k,
                               double theta) {
  return Vote(train.features, Encode(train).y, x, k, theta);
}

int BaselineAmbiguousKnn(const Dataset& train, std::span<const double> x,
                         int k, double theta) {
  return PredictAmbiguousKnn(train, x, k, theta).label;
}

void WritePredictionsCsv(const std::vector<Prediction>& predictions,
                         int num_classes, std::ostream& out) {
  out << "index,predicted_label";
  for (int j = 1; j <= num_classes; ++j) out << ",score_" << j;
  out << '\n';
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    out << i + 1 << ',' << predictions[i].label;
    for (Eigen::Index j = 0; j < predictions[i].scores.size(); ++j) {
      out << ',' << text::FormatDouble(predictions[i].scores(j));
    }
    out << '\n';
  }
}

void SavePredictor(const Predictor& predictor,
                   const std::filesystem::path& dir) {
  predictor.Validate();
  std::filesystem::create_directories(dir);
  WriteMatrix(predictor.train_features, dir / "train_features.tsv");
  WriteMatrix(predictor.onehot, dir / "onehot.tsv");
  std::ofstream out(dir / "model.txt");
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + (dir / "model.txt").string());
  out << "k=" << predictor.k << "\ntheta=" << text::FormatDouble(predictor.theta)
      << "\nn=" << predictor.train_features.rows()
      << "\nd=" << predictor.train_features.cols()
      << "\nc=" << predictor.onehot.cols() << '\n';
}

Predictor LoadPredictor(const std::filesystem::path& dir) {
  std::map<std::string, std::string> kv;
  for (auto& [key, value] : text::ReadKeyValueFile(dir / "model.txt")) {
    kv[key] = value;
  }
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw Error(ErrorKind::kFormat, "model.txt: missing key '" + key + "'");
    }
    return it->second;
  };
  Predictor predictor;
  predictor.k = static_cast<int>(text::ParseInt(get("k"), "model k"));
  predictor.theta = text::ParseDouble(get("theta"), "model theta");
  predictor.train_features = ReadMatrix(dir / "train_features.tsv");
  predictor.onehot = ReadMatrix(dir / "onehot.tsv");
  if (predictor.onehot.cols() != text::ParseInt(get("c"), "model c")) {
    throw Error(ErrorKind::kValidation, "model.txt: class count mismatch");
  }
  predictor.Validate();
  return predictor;
}

}  // namespace sll
