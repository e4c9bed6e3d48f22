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

#ifndef SLL_GRAPH_H_
#define SLL_GRAPH_H_

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "sll/dataset.h"
#include "sll/types.h"

namespace sll {

/// Gaussian similarity exp(-||a - b||^2 / (2 theta^2)). Throws on theta <= 0.
double GaussianWeight(std::span<const double> a, std::span<const double> b,
                      double theta);
double GaussianWeightFromSquaredDistance(double squared_distance,
                                         double theta);

double SquaredDistance(std::span<const double> a, std::span<const double> b);

struct Neighbor {
  int index = 0;
  double squared_distance = 0.0;
};

/// Exact K nearest rows of `points` to `query`, closest first. Equal
/// distances are ordered by ascending row index. `exclude` (if >= 0) is
/// skipped, which is how a training row avoids matching itself.
std::vector<Neighbor> NearestNeighbors(const Matrix& points,
                                       std::span<const double> query, int k,
                                       int exclude = -1);

/// Symmetric K-nearest-neighbor similarity graph. An edge joins i and k when
/// either is among the other's K nearest neighbors; its weight is the
/// Gaussian similarity. The Laplacian L = D - W is never formed densely.
struct KnnGraph {
  SparseMatrix weights;  // W, zero diagonal
  Vector degree;         // D_ii = sum_k W_ik
  int k = 0;
  double theta = 1.0;

  Eigen::Index size() const { return weights.rows(); }
  Eigen::Index edge_count() const { return weights.nonZeros() / 2; }

  SparseMatrix Laplacian() const;

  /// L * F computed as D F - W F.
  Matrix ApplyLaplacian(const Matrix& f) const;

  /// tr(F^T L F).
  double Smoothness(const Matrix& f) const;

  /// Gershgorin bound on the largest eigenvalue of L (2 * max degree).
  double LaplacianNormBound() const;
};

/// theta = nullopt selects AutoTheta.
KnnGraph BuildKnnGraph(const Matrix& features, int k,
                       std::optional<double> theta);
KnnGraph BuildKnnGraph(const Dataset& dataset, int k,
                       std::optional<double> theta);

/// Mean Euclidean distance from each row to its K nearest neighbors, or 1.0
/// when every such distance is zero.
double AutoTheta(const Matrix& features, int k);

/// Debug dump, one "i<TAB>k<TAB>w" line per undirected edge with 1-based
/// example indices and i < k.
void WriteEdgeList(const KnnGraph& graph, std::ostream& out);

}  // namespace sll

#endif  // SLL_GRAPH_H_
