# Copyright 2025 The gjsloss Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import numpy as np


def _linear(weights, biases):
    from gjsloss.training import MlpModel

    weights = np.asarray(weights, dtype=np.float64)
    return MlpModel(
        widths=weights.shape,
        weights=[weights],
        biases=[np.asarray(biases, dtype=np.float64)],
    )


def test_evaluate():
    from gjsloss.training import evaluate

    features = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]] * 4)
    labels = np.array([0, 1, 2] * 4)

    perfect = _linear(np.eye(3), np.zeros(3))
    assert evaluate(perfect, features, labels) == 1.0, "argmax predictor was not perfect"

    constant = _linear(np.zeros((3, 3)), [0.0, 1.0, 0.0])
    assert evaluate(constant, features, labels) == 1.0 / 3.0

    tied = _linear(np.zeros((3, 3)), np.zeros(3))
    assert evaluate(tied, features, labels) == 1.0 / 3.0, "ties did not go to class 0"
    assert evaluate(tied, features[:0], labels[:0]) == 0.0


def test_evaluate_hand_counted():
    from gjsloss.training import evaluate

    model = _linear(np.eye(2), np.zeros(2))
    features = np.array(
        [[2, 1], [1, 2], [3, 0], [0, 3], [1, 1], [5, 4], [4, 5], [0, 1], [1, 0], [2, 2]],
        dtype=np.float64,
    )
    labels = np.array([0, 1, 1, 1, 0, 1, 1, 1, 0, 1])
    # predictions: 0 1 0 1 0 0 1 1 0 0
    assert evaluate(model, features, labels) == 0.7


def test_consistency_rate():
    from gjsloss.data import ViewSpec
    from gjsloss.training import consistency_rate, init_model

    rng = np.random.default_rng(0)
    features = rng.normal(size=(500, 4))
    model = init_model([4, 16, 3], seed=1)

    assert consistency_rate(model, features, ViewSpec()) == 1.0, "identity views disagreed"
    assert consistency_rate(model, features[:0], ViewSpec(jitter_sigma=1.0)) == 1.0

    strong = ViewSpec(jitter_sigma=5.0, mask_prob=0.5)
    rate = consistency_rate(model, features, strong, seed=3)
    assert 0.0 <= rate < 1.0, "strong augmentation never changed a prediction"
    assert rate == consistency_rate(model, features, strong, seed=3), "not reproducible"
