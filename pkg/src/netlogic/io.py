"""Model documents (JSON) and directed-graph export."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import IoError, ParseError
from .model import Mode, Model, new_model, to_rational

_REQUIRED = ("agents", "features", "edges", "valuation", "omega", "tau")
_KEYS = _REQUIRED + ("mode",)


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ParseError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _strings(value: Any, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ParseError(f"{what} must be a list of strings")
    return value


def _threshold(value: Any, what: str):
    if not isinstance(value, str):
        raise ParseError(f"{what} must be a string such as \"1/2\", got {value!r}")
    try:
        return to_rational(value)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{what} is not an exact rational: {value!r}") from None


def model_from_document(doc: Any, mode: Mode | str | None = None) -> Model:
    """Build a validated model from a decoded document; ``mode`` overrides the document."""
    if not isinstance(doc, dict):
        raise ParseError("a model document must be a JSON object")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")
    extra = sorted(set(doc) - set(_KEYS))
    if extra:
        raise ParseError(f"unknown field(s): {', '.join(extra)}")

    agents = _strings(doc["agents"], "agents")
    features = _strings(doc["features"], "features")
    edges = doc["edges"]
    if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)
            for e in edges):
        raise ParseError("edges must be a list of [from, to] string pairs")
    valuation = doc["valuation"]
    if not isinstance(valuation, dict):
        raise ParseError("valuation must map agents to lists of features")
    valuation = {a: _strings(fs, f"valuation of {a!r}") for a, fs in valuation.items()}
    if mode is None:
        mode = doc.get("mode", "literal")
    try:
        mode = Mode(mode)
    except ValueError:
        raise ParseError(f"mode must be 'literal' or 'irreflexive', got {mode!r}") from None
    return new_model(agents, features, [tuple(e) for e in edges], valuation,
                     _threshold(doc["omega"], "omega"), _threshold(doc["tau"], "tau"), mode)


def model_to_document(model: Model) -> dict:
    """Canonical document: sorted lists, every agent present in the valuation."""
    valuation = model.valuation
    return {
        "agents": sorted(model.agents),
        "features": sorted(model.features),
        "edges": [list(e) for e in model.edges()],
        "valuation": {a: sorted(valuation[a]) for a in sorted(model.agents)},
        "omega": str(model.omega),
        "tau": str(model.tau),
        "mode": model.mode.value,
    }


def dumps_model(model: Model) -> str:
    """Canonical text: one top-level field per line, in fixed order."""
    doc = model_to_document(model)
    fields = [f"  {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}" for k, v in doc.items()]
    return "{\n" + ",\n".join(fields) + "\n}\n"


def loads_model(text: str, mode: Mode | str | None = None) -> Model:
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return model_from_document(doc, mode)


def load_model(path: str | Path, mode: Mode | str | None = None) -> Model:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return loads_model(text, mode)


def save_model(model: Model, path: str | Path) -> None:
    try:
        Path(path).write_text(dumps_model(model), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(model: Model) -> str:
    """DOT digraph: one node per agent labelled with its features, one arrow per
    influence pair pointing from influencer to influenced."""
    valuation = model.valuation
    lines = ["digraph M {"]
    for a in model.agents:
        label = f"{a} {{{', '.join(sorted(valuation[a]))}}}"
        lines.append(f"  {_quote(a)} [label={_quote(label)}];")
    for a, b in model.edges():
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
