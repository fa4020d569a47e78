"""Run configuration files (JSON syntax, big integers as decimal strings).

Example::

    {
      "system": {"type": "mis", "p": [2, 3],
                 "omega": {"kind": "sft", "alphabet_size": 2, "transition": [[1, 1], [1, 0]]}},
      "params": {"n": [1, 10, 100]},
      "output": "csv",
      "precision": "auto",
      "seed": 0
    }

A 2-D system uses {"type": "sft2d", "alphabet_size": 2, "allowed_2x2": ["0000", ...]}
(or "forbidden_2x2").  Unknown keys are rejected everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .counting import MisSpec
from .errors import InvalidSpec, MisLabError, ParseError
from .lattice import MultiplierVector
from .sft2d import Sft2dSpec
from .subshift import ShiftKind, SubshiftSpec

TOP_KEYS = {"system", "params", "output", "precision", "seed", "budgets"}
BUDGET_KEYS = {"brute_max_configs", "result_max_bits", "oracle_max_volume", "prec_budget", "frame_max_subsets"}


@dataclass
class RunConfig:
    system: MisSpec | Sft2dSpec
    params: dict = field(default_factory=dict)
    output: str = "csv"
    precision: int | str = "auto"
    seed: int = 0
    budgets: dict = field(default_factory=dict)


def _int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected an integer, got a boolean")
    if isinstance(value, int):
        out = value
    elif isinstance(value, str) and value.strip().lstrip("-").isdigit():
        out = int(value)
    else:
        raise ParseError(f"{where}: expected an integer or decimal string, got {value!r}")
    if minimum is not None and out < minimum:
        raise InvalidSpec(f"{where}: must be >= {minimum}")
    return out


def _check_keys(obj, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ParseError(f"{where}: unknown key(s) {', '.join(extra)}")


def omega_from_json(obj, where: str = "system.omega") -> SubshiftSpec:
    _check_keys(obj, {"kind", "alphabet_size", "transition"}, where)
    kind = obj.get("kind")
    if kind not in ("full", "sft"):
        raise ParseError(f"{where}.kind: expected 'full' or 'sft'")
    if kind == "full":
        if "transition" in obj:
            raise InvalidSpec(f"{where}: a full shift takes no transition matrix")
        return SubshiftSpec.full(_int(obj.get("alphabet_size"), f"{where}.alphabet_size", 1))
    t = obj.get("transition")
    if not isinstance(t, list) or not all(isinstance(row, list) for row in t):
        raise ParseError(f"{where}.transition: expected a list of rows")
    rows = [[_int(v, f"{where}.transition") for v in row] for row in t]
    if any(len(row) != len(rows) for row in rows):
        raise InvalidSpec(f"{where}.transition: matrix must be square")
    if "alphabet_size" in obj and _int(obj["alphabet_size"], f"{where}.alphabet_size") != len(rows):
        raise InvalidSpec(f"{where}: alphabet_size does not match the matrix size")
    return SubshiftSpec.sft(rows)


def system_from_json(obj) -> MisSpec | Sft2dSpec:
    if not isinstance(obj, dict):
        raise ParseError("system: expected an object")
    kind = obj.get("type")
    if kind == "mis":
        _check_keys(obj, {"type", "p", "omega"}, "system")
        p = obj.get("p")
        if not isinstance(p, list) or not p:
            raise ParseError("system.p: expected a non-empty list")
        p = [_int(v, "system.p") for v in p]
        if any(v < 2 for v in p):
            raise InvalidSpec("system.p: every p_j must be >= 2")
        return MisSpec(MultiplierVector(tuple(p)), omega_from_json(obj.get("omega")))
    if kind == "sft2d":
        _check_keys(obj, {"type", "alphabet_size", "allowed_2x2", "forbidden_2x2"}, "system")
        r = _int(obj.get("alphabet_size"), "system.alphabet_size", 1)
        if ("allowed_2x2" in obj) == ("forbidden_2x2" in obj):
            raise ParseError("system: give exactly one of allowed_2x2 or forbidden_2x2")
        key = "allowed_2x2" if "allowed_2x2" in obj else "forbidden_2x2"
        blocks = obj[key]
        if not isinstance(blocks, list) or not all(isinstance(b, str) for b in blocks):
            raise ParseError(f"system.{key}: expected a list of 4-digit strings")
        if key == "allowed_2x2":
            return Sft2dSpec.from_strings(r, blocks)
        return Sft2dSpec.from_forbidden(r, blocks)
    raise ParseError("system.type: expected 'mis' or 'sft2d'")


def system_to_json(system) -> dict:
    if isinstance(system, MisSpec):
        return {"type": "mis", "p": list(system.multipliers.p), "omega": system.omega.to_json()}
    return {"type": "sft2d", "alphabet_size": system.alphabet_size, "allowed_2x2": system.block_strings()}


def config_from_obj(obj) -> RunConfig:
    _check_keys(obj, TOP_KEYS, "config")
    if "system" not in obj:
        raise ParseError("config: missing 'system'")
    cfg = RunConfig(system_from_json(obj["system"]))
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("params: expected an object")
    cfg.params = params
    out = obj.get("output", "csv")
    if out not in ("csv", "json"):
        raise ParseError("output: expected 'csv' or 'json'")
    cfg.output = out
    prec = obj.get("precision", "auto")
    cfg.precision = prec if prec == "auto" else _int(prec, "precision", 16)
    cfg.seed = _int(obj.get("seed", 0), "seed")
    budgets = obj.get("budgets", {})
    _check_keys(budgets, BUDGET_KEYS, "budgets")
    cfg.budgets = {k: _int(v, f"budgets.{k}", 1) for k, v in budgets.items()}
    return cfg


def parse_config_text(text: str) -> RunConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return config_from_obj(obj)
    except MisLabError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None


def parse_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config_text(text)


def _jsonable(value: Any):
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return value if abs(value) < 2 ** 53 else str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


def serialize_config(cfg: RunConfig) -> str:
    obj = {"system": system_to_json(cfg.system), "params": _jsonable(cfg.params), "output": cfg.output,
           "precision": cfg.precision, "seed": cfg.seed}
    if cfg.budgets:
        obj["budgets"] = _jsonable(cfg.budgets)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def shipped_config(name: str) -> Path:
    """Path of a sample configuration bundled with the package."""
    path = Path(__file__).parent / "configs" / f"{name}.json"
    if not path.exists():
        raise ParseError(f"no shipped config named {name!r}")
    return path
