# Copyright 2026 The sll Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Superset-label learning: graph-regularized disambiguation plus kNN."""

from ._core import (
    Dataset,
    FitResult,
    SllError,
    SolverConfig,
    cross_validate,
    fit,
    friedman,
    make_synthetic,
    predict,
    run_cli,
)

__all__ = [
    "Dataset",
    "FitResult",
    "SllError",
    "SolverConfig",
    "SupersetLabelClassifier",
    "cross_validate",
    "fit",
    "friedman",
    "make_synthetic",
    "predict",
    "run_cli",
]


class SupersetLabelClassifier:
    """Fit on candidate sets, then predict single labels for new points."""

    def __init__(self, **params):
        self.config = SolverConfig()
        for name, value in params.items():
            if not hasattr(self.config, name):
                raise TypeError(f"unknown parameter {name!r}")
            setattr(self.config, name, value)

    def fit(self, features, candidates, num_classes=None):
        data = Dataset(features, candidates, num_classes=num_classes)
        self.result_ = fit(data, self.config)
        self.train_features_ = data.features
        self.num_classes_ = data.num_classes
        return self

    def predict_scores(self, queries):
        return predict(self.train_features_, self.result_.labels,
                       self.num_classes_, queries, self.result_.k,
                       self.result_.theta)

    def predict(self, queries):
        return self.predict_scores(queries)[0]
