"""Versioned JSON model files.

Document layout::

    {
      "format_version": 1,
      "algorithm": "linear" | "knn" | "tree",
      "payload": {...},
      "metadata": {"row_count": ..., "column_names": [...], "seed": ...}
    }

Floats are written with their shortest round-trip representation, so a loaded
model predicts bit-identically to the saved one. kNN files embed the whole
standardized training set and grow with it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from windreg.core.errors import ModelError
from windreg.core.models.base import Regressor
from windreg.core.models.knn import KnnModel
from windreg.core.models.linear import LinearModel
from windreg.core.models.tree import InternalNode, LeafNode, Tree, TreeNode, TreeParams
from windreg.core.preprocessing.standardizer import Standardizer

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class CorruptFileError(ModelError):
    """Raised when a model file cannot be parsed into a model."""


class VersionMismatchError(ModelError):
    def __init__(self, found: Any) -> None:
        super().__init__(
            f"Model file format version {found!r} is not supported (expected {FORMAT_VERSION})"
        )
        self.found = found


@dataclass(frozen=True)
class ModelFile:
    algorithm: str
    model: Regressor
    metadata: dict[str, Any] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION


def save_model(
    model: Regressor,
    path: str | Path,
    metadata: dict[str, Any] | None = None,
) -> Path:
    """Write ``model`` and ``metadata`` as a model file."""
    path = Path(path)
    document = {
        "format_version": FORMAT_VERSION,
        "algorithm": model.algorithm,
        "payload": encode_model(model),
        "metadata": dict(metadata or {}),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=1, allow_nan=False) + "\n", encoding="utf-8")
    logger.info("Saved %s model to %s", model.algorithm, path)
    return path


def load_model(path: str | Path) -> ModelFile:
    """Read a model file.

    Raises:
        CorruptFileError: unreadable JSON, or a document missing required parts.
        VersionMismatchError: written by an incompatible format version.
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CorruptFileError(f"Model file not found: {path}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptFileError(f"{path} is not a valid model file: {exc}") from None

    if not isinstance(document, dict) or "format_version" not in document:
        raise CorruptFileError(f"{path} has no format_version")
    if document["format_version"] != FORMAT_VERSION:
        raise VersionMismatchError(document["format_version"])

    try:
        algorithm = document["algorithm"]
        model = decode_model(algorithm, document["payload"])
        metadata = dict(document.get("metadata") or {})
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CorruptFileError(f"{path} is missing model data: {exc!r}") from None
    return ModelFile(algorithm=algorithm, model=model, metadata=metadata)


# ---------------------------------------------------------------------------
# Payload codecs
# ---------------------------------------------------------------------------

def encode_model(model: Regressor) -> dict[str, Any]:
    if isinstance(model, LinearModel):
        return {
            "intercept": model.intercept,
            "slopes": list(model.slopes),
            "training_residual_std": model.training_residual_std,
        }
    if isinstance(model, KnnModel):
        return {
            "k": model.k,
            "distance": model.distance,
            "selected_from": list(model.selected_from),
            "center": model.standardizer.center.tolist(),
            "scale": model.standardizer.scale.tolist(),
            "features": model.features.tolist(),
            "target": model.target.tolist(),
        }
    if isinstance(model, Tree):
        return {
            "n_features": model.n_features,
            "n_samples": model.n_samples,
            "params": asdict(model.params),
            "root": _encode_tree(model.root),
        }
    raise ModelError(f"Cannot serialize model of type {type(model).__name__}")


def decode_model(algorithm: str, payload: dict[str, Any]) -> Regressor:
    if algorithm == "linear":
        return LinearModel(
            intercept=float(payload["intercept"]),
            slopes=tuple(float(b) for b in payload["slopes"]),
            training_residual_std=float(payload.get("training_residual_std", 0.0)),
        )
    if algorithm == "knn":
        features = np.asarray(payload["features"], dtype=float)
        if features.ndim != 2:
            raise ValueError("kNN features must be a matrix")
        return KnnModel(
            features=features,
            target=np.asarray(payload["target"], dtype=float),
            k=int(payload["k"]),
            standardizer=Standardizer(
                center=np.asarray(payload["center"], dtype=float),
                scale=np.asarray(payload["scale"], dtype=float),
            ),
            distance=str(payload.get("distance", "euclidean")),
            selected_from=tuple(int(c) for c in payload.get("selected_from", [])),
        )
    if algorithm == "tree":
        return Tree(
            root=_decode_tree(payload["root"]),
            n_features=int(payload["n_features"]),
            n_samples=int(payload["n_samples"]),
            params=TreeParams(**payload.get("params", {})),
        )
    raise CorruptFileError(f"Unknown algorithm {algorithm!r}")


def _encode_node(node: TreeNode) -> dict[str, Any]:
    if isinstance(node, LeafNode):
        return {"leaf": True, "prediction": node.prediction, "samples": node.samples}
    return {
        "leaf": False,
        "feature": node.feature,
        "threshold": node.threshold,
        "samples": node.samples,
        "impurity": node.impurity,
        "impurity_decrease": node.impurity_decrease,
    }


def _encode_tree(root: TreeNode) -> dict[str, Any]:
    """Nested node document, built without recursion."""
    document = _encode_node(root)
    stack = [(root, document)]
    while stack:
        node, doc = stack.pop()
        if isinstance(node, InternalNode):
            doc["left"] = _encode_node(node.left)
            doc["right"] = _encode_node(node.right)
            stack.append((node.right, doc["right"]))
            stack.append((node.left, doc["left"]))
    return document


def _decode_node(doc: dict[str, Any]) -> TreeNode:
    if doc["leaf"]:
        return LeafNode(prediction=float(doc["prediction"]), samples=int(doc["samples"]))
    return InternalNode(
        feature=int(doc["feature"]),
        threshold=float(doc["threshold"]),
        samples=int(doc["samples"]),
        impurity=float(doc["impurity"]),
        impurity_decrease=float(doc["impurity_decrease"]),
    )


def _decode_tree(document: dict[str, Any]) -> TreeNode:
    root = _decode_node(document)
    stack = [(root, document)]
    while stack:
        node, doc = stack.pop()
        if isinstance(node, InternalNode):
            node.left = _decode_node(doc["left"])
            node.right = _decode_node(doc["right"])
            stack.append((node.left, doc["left"]))
            stack.append((node.right, doc["right"]))
    return root
