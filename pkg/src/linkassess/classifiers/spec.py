"""Model specifications: classifier kind plus hyperparameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

KINDS = (
    "logistic_regression",
    "gaussian_nb",
    "knn",
    "decision_tree",
    "svm_rbf",
    "random_baseline",
    "one_rule_baseline",
)

ALIASES = {
    "lr": "logistic_regression",
    "logreg": "logistic_regression",
    "nb": "gaussian_nb",
    "kn": "knn",
    "dt": "decision_tree",
    "tree": "decision_tree",
    "svm": "svm_rbf",
    "random": "random_baseline",
    "oner": "one_rule_baseline",
    "one_rule": "one_rule_baseline",
}

SHORT_NAMES = {
    "knn": "KN",
    "svm_rbf": "SVM",
    "decision_tree": "DT",
    "gaussian_nb": "NB",
    "logistic_regression": "LR",
    "random_baseline": "RANDOM",
    "one_rule_baseline": "ONER",
}

DEFAULTS = {
    "logistic_regression": {"regularization": "L2", "penalty": 1e-4,
                            "learning_rate": 0.1, "epochs": 500},
    "gaussian_nb": {"var_smoothing": 1e-9},
    "knn": {"k": 5},
    "decision_tree": {"max_depth": 8, "min_leaf": 5},
    # gamma=None resolves to 1 / feature count at fit time
    "svm_rbf": {"C": 1.0, "gamma": None, "tol": 1e-3, "max_iter": 1_000_000},
    "random_baseline": {},
    "one_rule_baseline": {},
}

STOCHASTIC = {"random_baseline"}
_INT_KEYS = {"epochs", "k", "max_depth", "min_leaf", "max_iter", "seed"}
_STR_KEYS = {"regularization"}


class ModelSpecError(ValueError):
    pass


def canonical_kind(kind: str) -> str:
    kind = kind.strip().lower()
    kind = ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ModelSpecError(f"unknown model kind {kind!r}; choose from {', '.join(KINDS)}")
    return kind


def _coerce(key: str, value):
    if value is None or key in _STR_KEYS:
        return value
    if isinstance(value, str):
        if value.lower() in ("none", ""):
            return None
        value = float(value)
    if key in _INT_KEYS:
        if float(value) != int(value):
            raise ModelSpecError(f"{key} must be an integer")
        return int(value)
    return float(value)


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = canonical_kind(self.kind)
        params = dict(DEFAULTS[kind])
        for key, value in self.hyperparameters.items():
            if key != "seed" and key not in params:
                raise ModelSpecError(f"{kind} has no hyperparameter {key!r}")
            params[key] = _coerce(key, value)
        for key, value in params.items():
            if isinstance(value, (int, float)) and key != "seed" and value <= 0:
                raise ModelSpecError(f"{key} must be positive, got {value}")
        if kind == "logistic_regression":
            params["regularization"] = str(params["regularization"]).upper()
            if params["regularization"] not in ("L1", "L2"):
                raise ModelSpecError("regularization must be L1 or L2")
        if kind in STOCHASTIC and params.get("seed") is None:
            raise ModelSpecError(f"{kind} needs a seed")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "hyperparameters", params)

    def __getitem__(self, key):
        return self.hyperparameters[key]

    def get(self, key, default=None):
        return self.hyperparameters.get(key, default)

    def __hash__(self):
        return hash(self.to_text())

    @property
    def short_name(self) -> str:
        return SHORT_NAMES[self.kind]

    def with_params(self, **params) -> "ModelSpec":
        merged = dict(self.hyperparameters)
        merged.update(params)
        return ModelSpec(self.kind, merged)

    def to_text(self) -> str:
        lines = [f"kind={self.kind}"]
        for key in sorted(self.hyperparameters):
            lines.append(f"{key}={self.hyperparameters[key]}")
        return "\n".join(lines) + "\n"

    def describe(self) -> str:
        params = ",".join(f"{k}={v}" for k, v in sorted(self.hyperparameters.items()))
        return f"{self.kind}({params})"

    @classmethod
    def from_text(cls, text: str) -> "ModelSpec":
        kind = None
        params = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ModelSpecError(f"expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key == "kind":
                kind = value
            else:
                params[key] = value
        if kind is None:
            raise ModelSpecError("model config lacks kind=")
        return cls(kind, params)

    @classmethod
    def load(cls, path) -> "ModelSpec":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))
