"""JSON schemas for every document the CLI reads."""

from __future__ import annotations

import jsonschema

from .errors import InputFormatError

RATIONAL = {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}
INTERVAL_LIST = {"type": "array", "items": {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}}

BRANCH = {
    "type": "object",
    "required": ["xs", "ys"],
    "properties": {
        "xs": {"type": "array", "items": RATIONAL, "minItems": 2},
        "ys": {"type": "array", "items": RATIONAL, "minItems": 2},
    },
    "additionalProperties": False,
}

FINITE_RELATION = {
    "type": "object",
    "required": ["points", "edges"],
    "properties": {
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "coords"],
                "properties": {
                    "id": {"type": "string"},
                    "coords": {"type": "array", "items": {"type": "number"}},
                },
                "additionalProperties": False,
            },
        },
        "edges": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
        },
    },
    "additionalProperties": False,
}

INTERVAL_RELATION = {
    "type": "object",
    "required": ["branches"],
    "properties": {
        "branches": {"type": "array", "items": BRANCH},
        "verticals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "y0", "y1"],
                "properties": {"x": RATIONAL, "y0": RATIONAL, "y1": RATIONAL},
                "additionalProperties": False,
            },
        },
        "horizontals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x0", "x1", "y"],
                "properties": {"x0": RATIONAL, "x1": RATIONAL, "y": RATIONAL},
                "additionalProperties": False,
            },
        },
        "isolated": {"type": "array", "items": {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}},
    },
    "additionalProperties": False,
}

LEG_SYSTEM = {
    "type": "object",
    "required": ["legs"],
    "properties": {
        "legs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["target", "branches"],
                "properties": {
                    "target": {"type": "integer", "minimum": 0},
                    "branches": {"type": "array", "items": BRANCH, "minItems": 1},
                },
                "additionalProperties": False,
            },
        }
    },
    "additionalProperties": False,
}

KIND = {"enum": ["cr", "reverse-cr"]}

LEVEL_WITNESS = {
    "type": "object",
    "required": ["kind", "level", "K", "L"],
    "properties": {
        "kind": KIND,
        "level": {"type": "integer", "minimum": 1},
        "K": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
        "L": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
    },
    "additionalProperties": False,
}

SET_SPEC = {
    "type": "object",
    "required": ["first", "prefix", "free"],
    "properties": {
        "first": INTERVAL_LIST,
        "prefix": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "free": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

INTERVAL_WITNESS = {
    "type": "object",
    "required": ["kind", "level", "K", "L"],
    "properties": {
        "kind": KIND,
        "level": {"type": "integer", "minimum": 1},
        "K": SET_SPEC,
        "L": SET_SPEC,
        "params": {"type": "object"},
    },
    "additionalProperties": False,
}

LEG_SET = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["leg", "intervals"],
        "properties": {"leg": {"type": "integer", "minimum": 0}, "intervals": INTERVAL_LIST},
        "additionalProperties": False,
    },
}

PAIR_WITNESS = {
    "type": "object",
    "required": ["kind", "m", "K", "L"],
    "properties": {
        "kind": {"const": "turbulent-pair"},
        "m": {"type": "integer", "minimum": 1},
        "K": {"anyOf": [LEG_SET, {"type": "array", "items": {"type": "string"}}]},
        "L": {"anyOf": [LEG_SET, {"type": "array", "items": {"type": "string"}}]},
    },
    "additionalProperties": False,
}

LABELED_PATH = {
    "type": "object",
    "required": ["t", "labels"],
    "properties": {
        "t": {"type": "array", "items": RATIONAL},
        "labels": {"type": "array", "items": {"enum": ["A", "B", "-"]}},
    },
    "additionalProperties": False,
}


def validate(document, schema, what: str) -> None:
    try:
        jsonschema.validate(document, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputFormatError(f"{what} schema violation at {where}: {exc.message}") from None
