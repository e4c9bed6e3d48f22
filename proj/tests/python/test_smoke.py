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

"""Smoke tests for the Python bindings."""

import numpy as np
import pytest

import superset_label as sl


def toy():
    features = np.array([[0.0, 0.0], [0.1, 0.0], [5.0, 5.0]])
    return sl.Dataset(features, [[1, 2], [1], [2]], truth=[1, 1, 2])


def test_fit_disambiguates_toy():
    config = sl.SolverConfig()
    config.k = 1
    result = sl.fit(toy(), config)
    assert result.labels == [1, 1, 2]
    assert result.converged
    assert result.f_star.shape == (3, 2)
    assert np.abs(result.f_star.sum(axis=1) - 1.0).max() <= 1e-3
    assert result.trace_csv.startswith(
        "loop,delta_f,sigma,lagrangian,rowsum_resid,min_entry")


def test_classifier_predicts_nearest_cluster():
    model = sl.SupersetLabelClassifier(k=1)
    data = toy()
    model.fit(data.features, data.candidates)
    labels, scores = model.predict_scores(np.array([[0.05, 0.0], [4.0, 4.0]]))
    assert labels == [1, 2]
    assert scores.shape == (2, 2)
    with pytest.raises(TypeError):
        sl.SupersetLabelClassifier(gamma=1.0)


def test_cross_validation_is_deterministic():
    data = sl.make_synthetic(n=60, seed=3)
    config = sl.SolverConfig()
    config.loop_max = 10
    a = sl.cross_validate(data, config, seed=11)
    b = sl.cross_validate(data, config, seed=11)
    assert a == b
    assert len(a["folds"]) == 5
    mean, std = a["train"]
    assert 0.0 <= mean <= 1.0 and std >= 0.0


def test_friedman_hand_table():
    table = np.array([[0.90, 0.80, 0.85, 0.70],
                      [0.80, 0.70, 0.60, 0.65],
                      [0.70, 0.75, 0.65, 0.60]])
    result = sl.friedman(table, 0.90)
    # Ranks per dataset: (1,2,3), (1,3,2), (1,3,2), (1,2,3); sums 4, 10, 10.
    # 12 / (4 * 3 * 4) * (16 + 100 + 100) - 3 * 4 * 4 = 6.
    assert result["statistic"] == pytest.approx(6.0, abs=1e-10)
    assert result["df"] == 2
    assert result["reject"]
    assert list(result["mean_ranks"]) == pytest.approx([1.0, 2.5, 2.5])


def test_invalid_input_raises():
    with pytest.raises(sl.SllError, match="validation"):
        sl.Dataset(np.zeros((2, 1)), [[1], [1]], truth=[1, 2])
    config = sl.SolverConfig()
    config.rho = 1.0
    with pytest.raises(sl.SllError, match="usage"):
        config.validate()


def test_cli_round_trip(tmp_path):
    status, out, err = sl.run_cli(
        ["synth", "--n", "30", "--seed", "5", "--out", str(tmp_path / "d")])
    assert status == 0, err
    status, _, err = sl.run_cli(["fit", "--bogus"])
    assert status == 2
    assert err.startswith("error: kind=usage message=")
