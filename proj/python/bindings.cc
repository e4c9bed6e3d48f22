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

// Python bindings for the sll library. Matrices cross the boundary as
// float64 NumPy arrays; labels are 1-based as in the C++ API.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

#include "sll/cli.h"
#include "sll/dataset.h"
#include "sll/evaluation.h"
#include "sll/graph.h"
#include "sll/inference.h"
#include "sll/labelspace.h"
#include "sll/solver.h"

namespace py = pybind11;

namespace sll {
namespace {

Dataset MakeDataset(const Matrix& features,
                    std::vector<std::vector<int>> candidates,
                    std::optional<std::vector<int>> truth,
                    std::optional<int> num_classes) {
  Dataset ds;
  ds.features = features;
  int c = 0;
  for (auto& set : candidates) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (!set.empty()) c = std::max(c, set.back());
  }
  ds.candidates = std::move(candidates);
  ds.truth = std::move(truth);
  ds.num_classes = num_classes.value_or(c);
  ds.Validate();
  return ds;
}

struct FitResult {
  SolverReport report;
  double theta = 0.0;
  int k = 0;
};

FitResult Fit(const Dataset& ds, const SolverConfig& config) {
  config.Validate();
  const KnnGraph graph = BuildKnnGraph(ds, config.k, config.theta);
  return {AlmFit(graph, Encode(ds), config), graph.theta, config.k};
}

py::tuple PredictArrays(const Predictor& predictor, const Matrix& queries) {
  const auto predictions = PredictBatch(predictor, queries);
  std::vector<int> labels;
  Matrix scores(queries.rows(), predictor.onehot.cols());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    labels.push_back(predictions[i].label);
    scores.row(static_cast<Eigen::Index>(i)) = predictions[i].scores.transpose();
  }
  return py::make_tuple(labels, scores);
}

}  // namespace
}  // namespace sll

using sll::CvResult;
using sll::Dataset;
using sll::Error;
using sll::FitResult;
using sll::FriedmanResult;
using sll::Matrix;
using sll::Predictor;
using sll::SolverConfig;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regularized instance-based superset-label learning.";

  static py::exception<Error> error(m, "SllError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(sll::ToString(e.kind())) + ": " +
                            e.what())
                               .c_str());
    }
  });

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &SolverConfig::alpha)
      .def_readwrite("beta", &SolverConfig::beta)
      .def_readwrite("k", &SolverConfig::k)
      .def_readwrite("theta", &SolverConfig::theta)
      .def_readwrite("rho", &SolverConfig::rho)
      .def_readwrite("sigma0", &SolverConfig::sigma0)
      .def_readwrite("sigma_cap", &SolverConfig::sigma_cap)
      .def_readwrite("t_max", &SolverConfig::t_max)
      .def_readwrite("eps0", &SolverConfig::eps0)
      .def_readwrite("loop_max", &SolverConfig::loop_max)
      .def_readwrite("eps1", &SolverConfig::eps1)
      .def_readwrite("gd_max_iters", &SolverConfig::gd_max_iters)
      .def_readwrite("gd_grad_tol", &SolverConfig::gd_grad_tol)
      .def_readwrite("tau0", &SolverConfig::tau0)
      .def_readwrite("armijo_c", &SolverConfig::armijo_c)
      .def_readwrite("backtrack_factor", &SolverConfig::backtrack_factor)
      .def_readwrite("precondition", &SolverConfig::precondition)
      .def_readwrite("init_jitter", &SolverConfig::init_jitter)
      .def("validate", &SolverConfig::Validate);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&sll::MakeDataset), py::arg("features"), py::arg("candidates"),
           py::arg("truth") = py::none(), py::arg("num_classes") = py::none())
      .def_readonly("features", &Dataset::features)
      .def_readonly("candidates", &Dataset::candidates)
      .def_readonly("truth", &Dataset::truth)
      .def_readonly("num_classes", &Dataset::num_classes)
      .def("__len__", &Dataset::size)
      .def("mean_candidate_count", &Dataset::MeanCandidateCount)
      .def("normalized", &sll::NormalizeUnitLength);

  py::class_<FitResult>(m, "FitResult")
      .def_property_readonly(
          "f_star", [](const FitResult& r) { return r.report.f_star; })
      .def_property_readonly(
          "labels", [](const FitResult& r) { return r.report.labels; })
      .def_property_readonly(
          "onehot", [](const FitResult& r) { return r.report.onehot; })
      .def_property_readonly(
          "converged", [](const FitResult& r) { return r.report.converged; })
      .def_property_readonly(
          "loops_used", [](const FitResult& r) { return r.report.loops_used; })
      .def_property_readonly(
          "rowsum_resid", [](const FitResult& r) { return r.report.rowsum_resid; })
      .def_property_readonly(
          "min_entry", [](const FitResult& r) { return r.report.min_entry; })
      .def_property_readonly(
          "warnings", [](const FitResult& r) { return r.report.warnings; })
      .def_property_readonly(
          "trace_csv",
          [](const FitResult& r) {
            std::ostringstream out;
            sll::WriteTraceCsv(r.report, out);
            return out.str();
          })
      .def_readonly("theta", &FitResult::theta)
      .def_readonly("k", &FitResult::k);

  m.def("fit", &sll::Fit, py::arg("dataset"), py::arg("config") = SolverConfig(),
        py::call_guard<py::gil_scoped_release>(),
        "Disambiguates the candidate sets of a training set.");

  m.def(
      "predict",
      [](const Matrix& train_features, const std::vector<int>& labels,
         int num_classes, const Matrix& queries, int k, double theta) {
        Predictor predictor{train_features, sll::OneHot(labels, num_classes), k,
                            theta};
        predictor.Validate();
        return sll::PredictArrays(predictor, queries);
      },
      py::arg("train_features"), py::arg("labels"), py::arg("num_classes"),
      py::arg("queries"), py::arg("k"), py::arg("theta"),
      "Weighted kNN vote over disambiguated training labels. Returns "
      "(labels, scores).");

  m.def(
      "cross_validate",
      [](const Dataset& ds, const SolverConfig& config, std::uint64_t seed) {
        const CvResult r = sll::CrossValidate(ds, config, seed, /*parallel=*/true);
        py::dict out;
        py::list folds;
        for (const auto& f : r.folds) {
          py::dict row;
          row["fold"] = f.fold;
          row["train_acc"] = f.train_acc;
          row["test_acc"] = f.test_acc;
          row["baseline_test_acc"] = f.baseline_test_acc;
          row["loops_used"] = f.loops_used;
          row["converged"] = f.converged;
          folds.append(row);
        }
        out["folds"] = folds;
        out["train"] = py::make_tuple(r.train.mean, r.train.std);
        out["test"] = py::make_tuple(r.test.mean, r.test.std);
        out["baseline_test"] =
            py::make_tuple(r.baseline_test.mean, r.baseline_test.std);
        return out;
      },
      py::arg("dataset"), py::arg("config") = SolverConfig(),
      py::arg("seed") = 0,
      "Five-fold cross validation; train/test entries are (mean, std).");

  m.def(
      "friedman",
      [](const Matrix& table, double confidence) {
        const FriedmanResult r = sll::FriedmanTest(table, confidence);
        py::dict out;
        out["statistic"] = r.statistic;
        out["df"] = r.df;
        out["critical"] = r.critical;
        out["reject"] = r.reject;
        out["mean_ranks"] = r.mean_ranks;
        out["pairwise_statistic"] = r.pairwise_statistic;
        out["reject_per_method"] = r.reject_per_method;
        return out;
      },
      py::arg("table"), py::arg("confidence") = 0.90,
      "Friedman test on a methods x datasets accuracy table.");

  m.def(
      "make_synthetic",
      [](int n, int c, int d, double sep, double p, int r, std::uint64_t seed) {
        return sll::MakeSynthetic({n, c, d, sep, p, r, seed});
      },
      py::arg("n") = 300, py::arg("c") = 3, py::arg("d") = 2,
      py::arg("sep") = 4.0, py::arg("p") = 0.7, py::arg("r") = 1,
      py::arg("seed") = 42, "Gaussian blobs with co-occurring false labels.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int status = sll::cli::Run(args, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"),
      "Runs a command-line invocation in-process. Returns (status, stdout, "
      "stderr).");
}
