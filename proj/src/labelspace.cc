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

#include "sll/labelspace.h"

#include <string>

namespace sll {

Matrix LabelCodec::Mask() const {
  return (!candidate).cast<double>().matrix();
}

Matrix LabelCodec::MaskedOff(const Matrix& m) const {
  return candidate.select(Matrix::Zero(m.rows(), m.cols()), m);
}

std::vector<int> LabelCodec::Omega(Eigen::Index row) const {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < classes(); ++j) {
    if (!candidate(row, j)) out.push_back(static_cast<int>(j + 1));
  }
  return out;
}

LabelCodec Encode(const std::vector<std::vector<int>>& candidates,
                  int num_classes) {
  const auto n = static_cast<Eigen::Index>(candidates.size());
  LabelCodec codec;
  codec.y = Matrix::Zero(n, num_classes);
  codec.candidate = BoolMatrix::Constant(n, num_classes, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& set = candidates[static_cast<std::size_t>(i)];
    if (set.empty()) {
      throw Error(ErrorKind::kValidation,
                  "row " + std::to_string(i + 1) + ": empty candidate set");
    }
    for (int label : set) {
      if (label < 1 || label > num_classes) {
        throw Error(ErrorKind::kValidation,
                    "row " + std::to_string(i + 1) + ": label " +
                        std::to_string(label) + " out of range");
      }
      codec.candidate(i, label - 1) = true;
    }
    // Count after marking so duplicate labels cannot skew the weights.
    const auto size = codec.candidate.row(i).count();
    const double share = 1.0 / static_cast<double>(size);
    for (Eigen::Index j = 0; j < num_classes; ++j) {
      if (codec.candidate(i, j)) codec.y(i, j) = share;
    }
  }
  return codec;
}

LabelCodec Encode(const Dataset& dataset) {
  return Encode(dataset.candidates, dataset.num_classes);
}

}  // namespace sll
