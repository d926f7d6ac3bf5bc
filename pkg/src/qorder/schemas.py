"""JSON Schemas (draft 2020-12) for every machine-readable document the CLI emits."""

from __future__ import annotations

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_COMPLEX_ROW = {"type": "array", "items": _COMPLEX, "minItems": 1}

_STATES = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "required": ["label", "amplitudes"],
        "properties": {"label": {"type": "string"}, "amplitudes": _COMPLEX_ROW},
    },
}

REPORT = {
    "type": "object",
    "required": ["check", "verdict", "tol", "max_residual", "violations"],
    "properties": {
        "check": {"enum": ["comparator", "sorter", "spec"]},
        "verdict": {"enum": ["Feasible", "Infeasible", "NecessaryTestsPassed"]},
        "tol": {"type": "number", "minimum": 0},
        "max_residual": {"type": "number"},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["indices", "lhs", "rhs", "residual"],
                "properties": {
                    "indices": {"type": "array", "items": {"type": "integer", "minimum": 1},
                                "minItems": 2, "maxItems": 3},
                    "lhs": _COMPLEX,
                    "rhs": _COMPLEX,
                    "residual": {"type": "number", "minimum": 0},
                },
            },
        },
    },
}

CHECK_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "mode", "report"],
    "properties": {
        "schema": {"const": 1},
        "command": {"const": "check"},
        "mode": {"enum": ["comparator", "sorter", "spec"]},
        "classification": {"enum": ["MutuallyOrthogonal", "LinearlyIndependent", "LinearlyDependent"]},
        "states": {"type": "array"},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "report": REPORT,
    },
}

DEMO_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "all_infeasible", "cases"],
    "properties": {
        "schema": {"const": 1},
        "command": {"const": "demo-nogo"},
        "all_infeasible": {"type": "boolean"},
        "cases": {
            "type": "array",
            "minItems": 3,
            "maxItems": 3,
            "items": {
                "type": "object",
                "required": ["name", "report"],
                "properties": {"name": {"type": "string"}, "report": REPORT},
            },
        },
    },
}

SIMULATE_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "kind", "input", "output", "flags"],
    "properties": {
        "schema": {"const": 1},
        "command": {"const": "simulate"},
        "kind": {"enum": ["comparator", "sorter"]},
        "input": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "output": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "flags": {"type": "array", "items": {"enum": [0, 1]}},
        "flag_distributions": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "norm": {"type": "number"},
    },
}

CIRCUIT_FILE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "kind", "dim", "states"],
    "properties": {
        "schema": {"const": 1},
        "kind": {"enum": ["comparator", "sorter"]},
        "dim": {"type": "integer", "minimum": 1},
        "states": _STATES,
        "unitary": {"type": "array", "items": _COMPLEX_ROW},
        "compare_swap": {"type": "array", "items": _COMPLEX_ROW},
        "n_registers": {"type": "integer", "minimum": 2},
        "stages": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["position", "flag"],
                "properties": {"position": {"type": "integer", "minimum": 1},
                               "flag": {"type": "integer", "minimum": 0}},
            },
        },
    },
    "oneOf": [
        {"properties": {"kind": {"const": "comparator"}}, "required": ["unitary"]},
        {"properties": {"kind": {"const": "sorter"}}, "required": ["compare_swap", "stages", "n_registers"]},
    ],
}

STATE_FILE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dim", "states"],
    "properties": {
        "schema": {"const": 1},
        "dim": {"type": "integer", "minimum": 1},
        "states": _STATES,
        "valuation": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "pairs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["input", "output"],
                "properties": {"input": {"type": "string"}, "output": {"type": "string"}},
            },
        },
    },
}
