"""JSON model configuration.

A single-jump model::

    {"version": 1,
     "drifts": [{"kind": "constant", "level": 0.05}, ...],
     "jump": {"H": 10.0, "intensity": {"kind": "linear", "a": 0.1, "b": 4.0}},
     "triggers": {"kind": "independent"}}

A sectorial model nests such documents (without ``version``) under
``"sectors"``.  Unknown fields are rejected.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

from .errors import ConfigurationError
from .jumps import jump_from_dict
from .model import SibuyaModel, TriggerDependence
from .rates import rate_from_dict

__all__ = ["HierarchicalModel", "model_from_dict", "model_to_dict", "load_model"]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class HierarchicalModel:
    """Independent sectors, each a :class:`SibuyaModel` with its own jump process."""

    sectors: tuple[SibuyaModel, ...]

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        if not self.sectors:
            raise ConfigurationError("a hierarchical model needs at least one sector")

    @property
    def d(self) -> int:
        return sum(m.d for m in self.sectors)

    def to_dict(self) -> dict[str, Any]:
        return {"sectors": [m.to_dict() for m in self.sectors]}


def _triggers(spec: Any) -> TriggerDependence:
    if not isinstance(spec, dict):
        raise ConfigurationError("triggers must be an object")
    kind = spec.get("kind")
    allowed = {"independent": {"kind"}, "frechet-mixture": {"kind", "alpha"}}
    if kind not in allowed:
        raise ConfigurationError(f"unknown trigger kind {kind!r}")
    if set(spec) != allowed[kind]:
        raise ConfigurationError(f"{kind} triggers expect fields {sorted(allowed[kind])}, got {sorted(spec)}")
    return TriggerDependence(kind, spec.get("alpha", 0.0))


def _single(doc: dict[str, Any]) -> SibuyaModel:
    extra = set(doc) - {"drifts", "jump", "triggers"}
    if extra:
        raise ConfigurationError(f"unknown model fields {sorted(extra)}")
    for key in ("drifts", "jump"):
        if key not in doc:
            raise ConfigurationError(f"model is missing {key!r}")
    if not isinstance(doc["drifts"], list) or not doc["drifts"]:
        raise ConfigurationError("drifts must be a non-empty list")
    drifts = tuple(rate_from_dict(r) for r in doc["drifts"])
    triggers = _triggers(doc.get("triggers", {"kind": "independent"}))
    return SibuyaModel(drifts, jump_from_dict(doc["jump"]), triggers)


def model_from_dict(doc: Any) -> Union[SibuyaModel, HierarchicalModel]:
    if not isinstance(doc, dict):
        raise ConfigurationError("model config must be a JSON object")
    doc = dict(doc)
    version = doc.pop("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigurationError(f"unsupported schema version {version!r}")
    if "sectors" in doc:
        if set(doc) != {"sectors"}:
            raise ConfigurationError("a sectorial config holds only 'sectors' (and 'version')")
        if not isinstance(doc["sectors"], list):
            raise ConfigurationError("sectors must be a list")
        return HierarchicalModel(tuple(_single(s) if isinstance(s, dict) else _bad_sector() for s in doc["sectors"]))
    return _single(doc)


def _bad_sector():
    raise ConfigurationError("each sector must be an object")


def model_to_dict(model: Union[SibuyaModel, HierarchicalModel]) -> dict[str, Any]:
    return {"version": SCHEMA_VERSION, **model.to_dict()}


def load_model(path) -> Union[SibuyaModel, HierarchicalModel]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read model file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed JSON in {path}: {exc}") from exc
    return model_from_dict(doc)
