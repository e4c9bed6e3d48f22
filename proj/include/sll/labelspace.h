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

#ifndef SLL_LABELSPACE_H_
#define SLL_LABELSPACE_H_

#include <vector>

#include "sll/dataset.h"
#include "sll/types.h"

namespace sll {

// Candidate sets as matrices. Y spreads each row uniformly over its
// candidates; the fidelity mask H is the complement of `candidate` and is
// derived on demand so the two can never disagree.
struct LabelCodec {
  Matrix y;              // n x c, rows sum to 1
  BoolMatrix candidate;  // n x c, true where j is in S_i

  Eigen::Index size() const { return y.rows(); }
  Eigen::Index classes() const { return y.cols(); }

  Matrix Mask() const;  // H

  // H (.) m, i.e. `m` with candidate entries zeroed.
  Matrix MaskedOff(const Matrix& m) const;

  // Labels (1-based) that are not candidates of `row`.
  std::vector<int> Omega(Eigen::Index row) const;
};

LabelCodec Encode(const std::vector<std::vector<int>>& candidates,
                  int num_classes);
LabelCodec Encode(const Dataset& dataset);

}  // namespace sll

#endif  // SLL_LABELSPACE_H_
