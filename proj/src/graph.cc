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

#include "sll/graph.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace sll {
namespace {

std::span<const double> Row(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

bool Closer(const Neighbor& a, const Neighbor& b) {
  if (a.squared_distance != b.squared_distance) {
    return a.squared_distance < b.squared_distance;
  }
  return a.index < b.index;
}

void CheckK(Eigen::Index n, int k) {
  if (k < 1 || k > n - 1) {
    throw Error(ErrorKind::kUsage,
                "K=" + std::to_string(k) + " out of range 1.." +
                    std::to_string(n - 1) + " for n=" + std::to_string(n));
  }
}

}  // namespace

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double GaussianWeightFromSquaredDistance(double squared_distance,
                                         double theta) {
  if (!(theta > 0.0)) {
    throw Error(ErrorKind::kUsage, "kernel width theta must be positive");
  }
  return std::exp(-squared_distance / (2.0 * theta * theta));
}

double GaussianWeight(std::span<const double> a, std::span<const double> b,
                      double theta) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kValidation, "dimension mismatch in GaussianWeight");
  }
  return GaussianWeightFromSquaredDistance(SquaredDistance(a, b), theta);
}

std::vector<Neighbor> NearestNeighbors(const Matrix& points,
                                       std::span<const double> query, int k,
                                       int exclude) {
  std::vector<Neighbor> all;
  all.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (i == exclude) continue;
    all.push_back({static_cast<int>(i), SquaredDistance(Row(points, i), query)});
  }
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)),
                                          all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep),
                    all.end(), Closer);
  all.resize(keep);
  return all;
}

SparseMatrix KnnGraph::Laplacian() const {
  SparseMatrix laplacian = -weights;
  for (Eigen::Index i = 0; i < size(); ++i) {
    laplacian.coeffRef(i, i) += degree(i);
  }
  laplacian.makeCompressed();
  return laplacian;
}

Matrix KnnGraph::ApplyLaplacian(const Matrix& f) const {
  Matrix out = degree.asDiagonal() * f;
  out.noalias() -= weights * f;
  return out;
}

double KnnGraph::Smoothness(const Matrix& f) const {
  return f.cwiseProduct(ApplyLaplacian(f)).sum();
}

double KnnGraph::LaplacianNormBound() const {
  return size() == 0 ? 0.0 : 2.0 * degree.maxCoeff();
}

double AutoTheta(const Matrix& features, int k) {
  const auto n = features.rows();
  if (n < 2) throw Error(ErrorKind::kUsage, "AutoTheta needs n >= 2");
  k = std::clamp<int>(k, 1, static_cast<int>(n - 1));
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& nb :
         NearestNeighbors(features, Row(features, i), k, static_cast<int>(i))) {
      total += std::sqrt(nb.squared_distance);
    }
  }
  const double mean = total / static_cast<double>(n * k);
  return mean > 0.0 ? mean : 1.0;
}

KnnGraph BuildKnnGraph(const Matrix& features, int k,
                       std::optional<double> theta) {
  const auto n = features.rows();
  CheckK(n, k);
  KnnGraph graph;
  graph.k = k;
  graph.theta = theta ? *theta : AutoTheta(features, k);
  if (!(graph.theta > 0.0)) {
    throw Error(ErrorKind::kUsage, "kernel width theta must be positive");
  }

  // Directed kNN lists, then the union of both directions per row.
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& nb :
         NearestNeighbors(features, Row(features, i), k, static_cast<int>(i))) {
      adjacency[static_cast<std::size_t>(i)].push_back(nb.index);
      adjacency[static_cast<std::size_t>(nb.index)].push_back(
          static_cast<int>(i));
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& row = adjacency[static_cast<std::size_t>(i)];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (int j : row) {
      if (j <= i) continue;
      const double w = GaussianWeightFromSquaredDistance(
          SquaredDistance(Row(features, i), Row(features, j)), graph.theta);
      triplets.emplace_back(static_cast<int>(i), j, w);
      triplets.emplace_back(j, static_cast<int>(i), w);
    }
  }
  graph.weights.resize(n, n);
  graph.weights.setFromTriplets(triplets.begin(), triplets.end());
  graph.weights.makeCompressed();

  graph.degree = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(graph.weights, i); it; ++it) {
      graph.degree(i) += it.value();
    }
  }
  return graph;
}

KnnGraph BuildKnnGraph(const Dataset& dataset, int k,
                       std::optional<double> theta) {
  return BuildKnnGraph(dataset.features, k, theta);
}

void WriteEdgeList(const KnnGraph& graph, std::ostream& out) {
  for (Eigen::Index i = 0; i < graph.size(); ++i) {
    for (SparseMatrix::InnerIterator it(graph.weights, i); it; ++it) {
      if (it.col() > i) {
        out << i + 1 << '\t' << it.col() + 1 << '\t' << it.value() << '\n';
      }
    }
  }
}

}  // namespace sll
