"""Reading and writing the JSON documents of the command-line interface."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Union

from . import schemas
from .branch_pair import IntervalWitness, SetSpec
from .errors import InputFormatError
from .finite import FiniteRelation, LevelWitness
from .intervals import IntervalUnion
from .interval_relation import IntervalRelation
from .plmaps import PLBranch
from .transforms import LegMap, LegSet, LegSystem
from .zigzag import LabeledPath

FLOAT_DIGITS = 12

Relation = Union[FiniteRelation, IntervalRelation, LegSystem]


def round_floats(value):
    """Round every float to 12 significant digits so output is stable."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(f"{value:.{FLOAT_DIGITS}g}")
    if isinstance(value, dict):
        return {k: round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v) for v in value]
    return value


def dumps(document) -> str:
    return json.dumps(round_floats(document), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def canonical_digest(document) -> str:
    text = json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputFormatError(f"cannot write {path}: {exc.strerror or exc}") from None


# -- relations -------------------------------------------------------------


def finite_to_json(R: FiniteRelation) -> dict:
    return {
        "points": [{"id": str(pid), "coords": list(coords)} for pid, coords in R.points],
        "edges": [[str(s), str(t)] for s, t in R.sorted_edges()],
    }


def finite_from_json(data) -> FiniteRelation:
    schemas.validate(data, schemas.FINITE_RELATION, "finite relation")
    return FiniteRelation(
        tuple((p["id"], tuple(p["coords"])) for p in data["points"]),
        frozenset((s, t) for s, t in data["edges"]),
    )


def legs_to_json(S: LegSystem) -> dict:
    return {"legs": [{"target": m.target, "branches": [p.to_json() for p in m.pieces]} for m in S.legs]}


def legs_from_json(data) -> LegSystem:
    schemas.validate(data, schemas.LEG_SYSTEM, "leg system")
    return LegSystem(tuple(LegMap(m["target"], tuple(PLBranch.from_json(b) for b in m["branches"])) for m in data["legs"]))


def document_kind(data) -> str:
    if not isinstance(data, dict):
        raise InputFormatError("a relation document must be a JSON object")
    if "points" in data or "edges" in data:
        return "finite"
    if "legs" in data:
        return "legs"
    if "branches" in data:
        return "interval"
    raise InputFormatError("cannot tell the relation kind: expected 'points', 'branches' or 'legs'")


def relation_from_json(data) -> Relation:
    kind = document_kind(data)
    if kind == "finite":
        return finite_from_json(data)
    if kind == "legs":
        return legs_from_json(data)
    schemas.validate(data, schemas.INTERVAL_RELATION, "interval relation")
    return IntervalRelation.from_json(data)


def relation_to_json(R: Relation) -> dict:
    if isinstance(R, FiniteRelation):
        return finite_to_json(R)
    if isinstance(R, LegSystem):
        return legs_to_json(R)
    return IntervalRelation.to_json(R)


def load_relation(path) -> Relation:
    return relation_from_json(read_json(path))


# -- witnesses -------------------------------------------------------------


def level_witness_to_json(w: LevelWitness) -> dict:
    return {
        "kind": w.kind,
        "level": w.level,
        "K": [[str(x) for x in t] for t in sorted(w.K)],
        "L": [[str(x) for x in t] for t in sorted(w.L)],
    }


def witness_from_json(data, relation: Relation):
    """Parse a witness document for ``relation``.

    Level mismatches are format errors: the document contradicts itself
    before any mathematics is involved.
    """
    if not isinstance(data, dict):
        raise InputFormatError("a witness document must be a JSON object")
    if data.get("kind") == "turbulent-pair":
        schemas.validate(data, schemas.PAIR_WITNESS, "pair witness")
        return _pair_from_json(data, relation)
    if isinstance(relation, FiniteRelation):
        schemas.validate(data, schemas.LEVEL_WITNESS, "level witness")
        for name in ("K", "L"):
            for t in data[name]:
                if len(t) != data["level"]:
                    raise InputFormatError(f"tuple {t} in {name} does not have length {data['level']}")
        return LevelWitness(data["level"], frozenset(map(tuple, data["K"])), frozenset(map(tuple, data["L"])), data["kind"])
    schemas.validate(data, schemas.INTERVAL_WITNESS, "interval witness")
    K, L = SetSpec.from_json(data["K"]), SetSpec.from_json(data["L"])
    for name, spec in (("K", K), ("L", L)):
        if spec.level != data["level"]:
            raise InputFormatError(f"{name} describes level {spec.level}, not {data['level']}")
    return IntervalWitness(data["level"], K, L, data["kind"])


class PairWitness:
    """``(K, L, m)`` for classical turbulence of a map."""

    def __init__(self, K, L, m):
        self.K, self.L, self.m = K, L, m


def _pair_from_json(data, relation):
    def leg_set(items):
        if items and isinstance(items[0], str):
            raise InputFormatError("leg systems need leg sets, not point ids")
        return LegSet(tuple((it["leg"], IntervalUnion.from_json(it["intervals"])) for it in items))

    if isinstance(relation, FiniteRelation):
        if any(not isinstance(x, str) for x in data["K"] + data["L"]):
            raise InputFormatError("finite pairs list point ids")
        return PairWitness(frozenset(data["K"]), frozenset(data["L"]), data["m"])
    if isinstance(relation, LegSystem):
        return PairWitness(leg_set(data["K"]), leg_set(data["L"]), data["m"])
    raise InputFormatError("pair witnesses need a finite map or a leg system")


def pair_to_json(K, L, m) -> dict:
    def enc(S):
        return S.to_json() if isinstance(S, LegSet) else sorted(str(x) for x in S)

    return {"kind": "turbulent-pair", "m": m, "K": enc(K), "L": enc(L)}


def witness_to_json(w) -> dict:
    if isinstance(w, LevelWitness):
        return level_witness_to_json(w)
    return w.to_json()


def load_labeled_path(path) -> LabeledPath:
    data = read_json(path)
    schemas.validate(data, schemas.LABELED_PATH, "labeled path")
    return LabeledPath.from_json(data)
