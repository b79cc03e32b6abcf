from .model import (SchemaMismatch, TrainedModel, TrainingError, fit, fit_arrays,
                    predict_class, predict_probability)
from .spec import KINDS, ModelSpec, ModelSpecError, canonical_kind
from .validation import cross_validate, kfold_split

__all__ = [
    "KINDS", "ModelSpec", "ModelSpecError", "SchemaMismatch", "TrainedModel",
    "TrainingError", "canonical_kind", "cross_validate", "fit", "fit_arrays",
    "kfold_split", "predict_class", "predict_probability",
]
