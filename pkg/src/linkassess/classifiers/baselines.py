"""Feature-blind random classifier."""

from __future__ import annotations

import numpy as np


class RandomClassifier:
    """Scores every row with an independent uniform draw.

    The generator is re-seeded on each call, so predicting the same batch
    twice returns the same scores.
    """

    def __init__(self, seed: int):
        self.seed = seed

    def fit(self, X, y):
        return self

    def predict_proba(self, X):
        return np.random.default_rng(self.seed).random(len(X))
