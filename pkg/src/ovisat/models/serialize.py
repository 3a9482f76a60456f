"""Versioned JSON persistence for trained models.

Every float is written as its shortest round-tripping decimal string,
so a saved model reloads to bit-identical predictions. The optional
metadata block carries pipeline context (feature specs, scaling) that
the model itself does not own.
"""

from __future__ import annotations

import json
import os

import numpy as np

from ..errors import MissingModelFile, ModelError
from ..pca import PcaModel
from .base import TrainedModel
from .config import CONFIG_KINDS, ModelConfig
from .linear import LinearModel
from .mlp import MlpModel
from .neighbors import KnnModel
from .svr import SvrModel
from .tree import DtrModel, TreeNode

FORMAT = "ovisat-model"
VERSION = 1

# config fields holding reals; everything else is integral and JSON-exact
_FLOAT_FIELDS = {
    "ridge": {"lambda_grid"},
    "svr": {"c", "gamma", "epsilon", "tol"},
    "mlp": {"alpha", "learning_rate"},
}


def _f(x: float) -> str:
    return repr(float(x))


def _enc_array(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=float)
    return {"shape": list(a.shape), "data": [_f(v) for v in a.ravel()]}


def _dec_array(d: dict) -> np.ndarray:
    return np.array([float(s) for s in d["data"]], dtype=float).reshape(d["shape"])


def _enc_config(config: ModelConfig) -> dict:
    kind = config.kind
    floats = _FLOAT_FIELDS.get(kind, set())
    out = {}
    for name in config.__dataclass_fields__:
        value = getattr(config, name)
        if name in floats:
            value = (
                [_f(v) for v in value] if isinstance(value, tuple) else _f(value)
            )
        elif isinstance(value, tuple):
            value = list(value)
        out[name] = value
    return out


def _dec_config(kind: str, data: dict) -> ModelConfig:
    cls = CONFIG_KINDS[kind]
    floats = _FLOAT_FIELDS.get(kind, set())
    kwargs = {}
    for name, value in data.items():
        if name in floats:
            value = (
                tuple(float(v) for v in value)
                if isinstance(value, list)
                else float(value)
            )
        elif isinstance(value, list):
            value = tuple(value)
        kwargs[name] = value
    return cls(**kwargs)


def _enc_pca(m: PcaModel | None) -> dict | None:
    if m is None:
        return None
    return {
        "means": _enc_array(m.means),
        "components": _enc_array(m.components),
        "explained_variance": _enc_array(m.explained_variance),
    }


def _dec_pca(d: dict | None) -> PcaModel | None:
    if d is None:
        return None
    return PcaModel(
        means=_dec_array(d["means"]),
        components=_dec_array(d["components"]),
        explained_variance=_dec_array(d["explained_variance"]),
    )


def _enc_tree(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"value": _f(node.value)}
    return {
        "feature": node.feature,
        "threshold": _f(node.threshold),
        "left": _enc_tree(node.left),
        "right": _enc_tree(node.right),
    }


def _dec_tree(d: dict) -> TreeNode:
    if "value" in d:
        return TreeNode(value=float(d["value"]))
    return TreeNode(
        feature=int(d["feature"]),
        threshold=float(d["threshold"]),
        left=_dec_tree(d["left"]),
        right=_dec_tree(d["right"]),
    )


def _enc_params(m: TrainedModel) -> dict:
    if isinstance(m, LinearModel):
        out = {"coef": _enc_array(m.coef), "intercept": _f(m.intercept)}
        if m.best_lambda is not None:
            out["best_lambda"] = _f(m.best_lambda)
        return out
    if isinstance(m, SvrModel):
        return {
            "support_x": _enc_array(m.support_x),
            "dual_coef": _enc_array(m.dual_coef),
            "intercept": _f(m.intercept),
        }
    if isinstance(m, MlpModel):
        return {
            "weights": [_enc_array(W) for W in m.weights],
            "biases": [_enc_array(b) for b in m.biases],
            "final_loss": _f(m.final_loss),
        }
    if isinstance(m, KnnModel):
        return {
            "projection": _enc_pca(m.projection),
            "train_z": _enc_array(m.train_z),
            "train_y": _enc_array(m.train_y),
        }
    if isinstance(m, DtrModel):
        return {"projection": _enc_pca(m.projection), "tree": _enc_tree(m.root)}
    raise ModelError(f"cannot serialize model type {type(m).__name__}")


def _dec_params(kind: str, config, names, params: dict) -> TrainedModel:
    common = {"config": config, "feature_names": names}
    if kind in ("linear", "ridge"):
        best = params.get("best_lambda")
        return LinearModel(
            coef=_dec_array(params["coef"]),
            intercept=float(params["intercept"]),
            best_lambda=None if best is None else float(best),
            **common,
        )
    if kind == "svr":
        return SvrModel(
            support_x=_dec_array(params["support_x"]),
            dual_coef=_dec_array(params["dual_coef"]),
            intercept=float(params["intercept"]),
            **common,
        )
    if kind == "mlp":
        return MlpModel(
            weights=tuple(_dec_array(W) for W in params["weights"]),
            biases=tuple(_dec_array(b) for b in params["biases"]),
            final_loss=float(params["final_loss"]),
            **common,
        )
    if kind == "knn":
        return KnnModel(
            projection=_dec_pca(params["projection"]),
            train_z=_dec_array(params["train_z"]),
            train_y=_dec_array(params["train_y"]),
            **common,
        )
    if kind == "dtr":
        return DtrModel(
            projection=_dec_pca(params["projection"]),
            root=_dec_tree(params["tree"]),
            **common,
        )
    raise ModelError(f"unknown model kind {kind!r}")


def save_model(m: TrainedModel, path, metadata: dict | None = None) -> None:
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "kind": m.config.kind,
        "config": _enc_config(m.config),
        "feature_names": list(m.feature_names),
        "params": _enc_params(m),
        "metadata": metadata or {},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path) -> tuple[TrainedModel, dict]:
    if not os.path.exists(path):
        raise MissingModelFile(f"no model file at {path}")
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not a valid model file: {exc}") from exc
    if doc.get("format") != FORMAT:
        raise ModelError(f"{path}: not an {FORMAT} file")
    if doc.get("version") != VERSION:
        raise ModelError(f"{path}: unsupported version {doc.get('version')}")
    kind = doc["kind"]
    if kind not in CONFIG_KINDS:
        raise ModelError(f"{path}: unknown model kind {kind!r}")
    config = _dec_config(kind, doc["config"])
    names = tuple(doc["feature_names"])
    model = _dec_params(kind, config, names, doc["params"])
    return model, doc.get("metadata", {})
