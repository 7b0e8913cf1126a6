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
"""
A fully connected softmax classifier in plain ``numpy``: rectifier hidden
layers, a linear head producing logits, and hand-written backpropagation.
"""
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import softmax

from ..common import derive_seed


class InvalidModel(ValueError):
    pass


@dataclass
class ForwardCache:
    """
    The inputs of every layer, kept for the backward pass.
    """

    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]


@dataclass
class MlpModel:
    """
    :param widths: ``[input dim, hidden…, K]``.
    :param weights: One ``(fan_in, fan_out)`` matrix per layer.
    :param biases: One ``(fan_out,)`` vector per layer.
    """

    widths: Tuple[int, ...]
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def __post_init__(self):
        self.widths = tuple(int(w) for w in self.widths)
        if len(self.weights) != len(self.widths) - 1 or len(self.biases) != len(self.weights):
            raise InvalidModel(
                f"{len(self.widths)} widths need {len(self.widths) - 1} layers, got {len(self.weights)} weights and {len(self.biases)} biases"
            )
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            expected = (self.widths[i], self.widths[i + 1])
            if W.shape != expected or b.shape != (expected[1],):
                raise InvalidModel(
                    f"layer {i} has weights {W.shape} and biases {b.shape}, expected {expected} and ({expected[1]},)"
                )

    @property
    def K(self) -> int:
        return self.widths[-1]

    @property
    def parameters(self) -> List[np.ndarray]:
        """
        Weights and biases interleaved, layer by layer.
        """
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    @property
    def num_parameters(self) -> int:
        return sum(p.size for p in self.parameters)

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters)

    def with_parameters(self, parameters: Sequence[np.ndarray]) -> "MlpModel":
        """
        :param parameters: As ordered by :attr:`parameters`.
        """
        parameters = list(parameters)
        return MlpModel(
            widths=self.widths,
            weights=[np.array(p, dtype=np.float64) for p in parameters[0::2]],
            biases=[np.array(p, dtype=np.float64) for p in parameters[1::2]],
        )

    def copy(self) -> "MlpModel":
        return self.with_parameters(self.parameters)

    def flatten(self) -> np.ndarray:
        return np.concatenate([p.reshape(-1) for p in self.parameters])

    def unflatten(self, vector: np.ndarray) -> "MlpModel":
        vector = np.asarray(vector, dtype=np.float64)
        expected = sum(p.size for p in self.parameters)
        if vector.ndim != 1 or vector.shape[0] != expected:
            raise InvalidModel(f"expected {expected} parameters, got shape {vector.shape}")
        parameters = []
        offset = 0
        for p in self.parameters:
            parameters.append(vector[offset : offset + p.size].reshape(p.shape))
            offset += p.size
        return self.with_parameters(parameters)

    def forward(self, features: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
        """
        :param features: Shape ``(..., D)``; leading axes are flattened and
            restored, so ``(B, views, D)`` yields ``(B, views, K)`` logits.
        """
        features = np.asarray(features, dtype=np.float64)
        leading = features.shape[:-1]
        a = features.reshape(-1, features.shape[-1])
        cache = ForwardCache(inputs=[], pre_activations=[])
        last = len(self.weights) - 1
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            cache.inputs.append(a)
            z = a @ W + b
            cache.pre_activations.append(z)
            a = z if i == last else np.maximum(z, 0.0)
        return a.reshape(leading + (self.K,)), cache

    def backward(self, cache: ForwardCache, grad_logits: np.ndarray) -> List[np.ndarray]:
        """
        :param grad_logits: ``∂L/∂logits``, shaped like the output of
            :meth:`forward`.
        :returns: ``∂L/∂θ`` ordered as :attr:`parameters`.
        """
        delta = grad_logits.reshape(-1, self.K)
        grads: List[np.ndarray] = []
        for i in reversed(range(len(self.weights))):
            if i != len(self.weights) - 1:
                delta = delta * (cache.pre_activations[i] > 0)
            grads.append(delta.sum(axis=0))
            grads.append(cache.inputs[i].T @ delta)
            if i > 0:
                delta = delta @ self.weights[i].T
        grads.reverse()
        return grads

    def logits(self, features: np.ndarray) -> np.ndarray:
        return self.forward(features)[0]

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        return softmax(self.logits(features), axis=-1)

    def predict(self, features: np.ndarray) -> np.ndarray:
        """
        Top-1 classes; ties go to the lowest class index.
        """
        return np.argmax(self.logits(features), axis=-1)


def init_model(widths: Sequence[int], seed: int = 0) -> MlpModel:
    """
    Draws every weight and bias of a layer uniformly from
    ``[-1/√fan_in, 1/√fan_in]``.

    :param widths: ``[input dim, hidden…, K]``, at least two entries, every
        entry positive and the last at least 2.
    """
    widths = tuple(int(w) for w in widths)
    if len(widths) < 2 or any(w < 1 for w in widths) or widths[-1] < 2:
        raise InvalidModel(f"invalid layer widths {list(widths)}")
    rng = np.random.default_rng(derive_seed(seed, "init"))
    weights = []
    biases = []
    for fan_in, fan_out in zip(widths, widths[1:]):
        bound = 1.0 / math.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return MlpModel(widths=widths, weights=weights, biases=biases)
