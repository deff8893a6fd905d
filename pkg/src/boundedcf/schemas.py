"""JSON schemas for the command-line payloads.

Every document printed with ``--json`` is an envelope
``{"command", "version", "status", "payload"}``; the payload is checked
against ``PAYLOADS[command]`` before it is written.
"""

from __future__ import annotations

SCHEMA_VERSION = 1

_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}
_STR = {"type": "string"}
_WORD = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_INTS = {"type": "array", "items": _INT}
_MATRIX = {
    "type": "array",
    "minItems": 2,
    "maxItems": 2,
    "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _INT},
}
_SURD = {
    "type": "object",
    "required": ["p", "q", "d", "r"],
    "properties": {"p": _INT, "q": _INT, "d": {"type": "integer", "minimum": 1}, "r": {"type": "integer", "minimum": 1}},
    "additionalProperties": False,
}


def _obj(required: dict, optional: dict | None = None) -> dict:
    props = dict(required)
    props.update(optional or {})
    return {"type": "object", "required": sorted(required), "properties": props, "additionalProperties": False}


_FAMILY = _obj(
    {
        "B": _WORD,
        "A": _WORD,
        "C": _WORD,
        "transposeC": _BOOL,
        "mirrorTail": _BOOL,
        "field": {"type": "integer", "minimum": 2},
        "bound": {"type": ["integer", "null"]},
        "provenance": {"enum": ["MN", "suites_ijM", "suite_sym", "suite_12s", "wilson", "intro"]},
    }
)

_MEMBER = _obj({"n": _INT, "word": _WORD, "length": _INT, "maxDigit": _INT, "surd": _STR})

_ZAREMBA_RECORD = _obj(
    {"q": _INT, "m": _INT, "found": _BOOL},
    {"p": _INT, "word": _WORD, "constrained": _BOOL},
)

_CONJ12_RECORD = _obj(
    {
        "delta": _INT,
        "status": {"enum": ["witness", "budget"]},
        "pell_index": _INT,
        "visited": _INT,
        "c": {"type": ["integer", "null"]},
        "b": {"type": ["integer", "null"]},
        "a": {"type": ["integer", "null"]},
        "word": {"type": ["array", "null"], "items": {"enum": [1, 2]}},
    }
)

PAYLOADS: dict[str, dict] = {
    "expand": _obj(
        {"input": _STR, "kind": {"enum": ["rational", "surd"]}, "preperiod": _INTS, "period": _WORD, "text": _STR},
        {"surd": _SURD},
    ),
    "eval": _obj({"word": _WORD, "surd": _SURD, "field": _INT, "text": _STR}),
    "field": _obj(
        {"word": _WORD, "matrix": _MATRIX, "trace": _INT, "det": _INT, "discriminant": _INT, "field": _INT, "cofactor": _INT}
    ),
    "factorize": _obj({"matrix": _MATRIX, "word": _WORD}),
    "pell": _obj(
        {
            "delta": _INT,
            "rhs": {"enum": [1, -1, 4, -4]},
            "x": _INT,
            "y": _INT,
            "unitMatrix": _MATRIX,
            "field": _INT,
            "power": _INT,
            "traces": _INTS,
        }
    ),
    "construct": _obj(
        {"kind": {"enum": ["mn", "ij", "sym", "12s", "wilson", "zaremba"]}},
        {
            "family": _FAMILY,
            "members": {"type": "array", "items": _MEMBER},
            "parameters": {"type": "object"},
            "instance": _obj(
                {
                    "a": _INT,
                    "b": _INT,
                    "c": _INT,
                    "delta": _INT,
                    "digits": _WORD,
                    "case": {"enum": [1, 2]},
                    "matrix": _MATRIX,
                    "word": _WORD,
                    "surd": _STR,
                    "field": _INT,
                }
            ),
        },
    ),
    "certify": _obj(
        {
            "family": _FAMILY,
            "ok": _BOOL,
            "records": {
                "type": "array",
                "items": _obj(
                    {
                        "n": _INT,
                        "length": _INT,
                        "max_digit": _INT,
                        "cofactor": _INT,
                        "field_ok": _BOOL,
                        "bound_ok": _BOOL,
                        "ok": _BOOL,
                    }
                ),
            },
        }
    ),
    "zaremba": _ZAREMBA_RECORD,
    "verify-conj12": _CONJ12_RECORD,
    "density": _obj(
        {
            "N": _INT,
            "m": _INT,
            "count_squarefree": _INT,
            "count_bounded": _INT,
            "ratio": {"type": "number"},
            "misses": _INTS,
        }
    ),
    "fib": _obj(
        {
            "fields": {"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}},
            "distinct": _INT,
            "divisibility": {"type": "object", "additionalProperties": _BOOL},
            "lifting": {"type": "object", "additionalProperties": _BOOL},
        }
    ),
}

ERROR_PAYLOAD = _obj({"error": _STR, "message": _STR})


def envelope_schema(command: str) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": f"boundedcf/{command}/v{SCHEMA_VERSION}",
        "type": "object",
        "required": ["command", "version", "status", "payload"],
        "properties": {
            "command": {"const": command},
            "version": {"const": SCHEMA_VERSION},
            "status": {"enum": ["ok", "budget-exhausted", "error"]},
            "payload": {"oneOf": [PAYLOADS[command], ERROR_PAYLOAD]},
        },
        "additionalProperties": False,
    }
