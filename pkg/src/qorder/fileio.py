"""
JSON state-set and circuit files.

Complex numbers are ``[re, im]`` pairs and every document written here has
``"schema": 1``. State files look like::

    {
      "schema": 1,
      "dim": 2,
      "states": [
        {"label": "zero", "amplitudes": [[1, 0], [0, 0]]},
        {"label": "one",  "amplitudes": [[0, 0], [1, 0]]}
      ],
      "valuation": [0, 1],
      "pairs": [{"input": "zero", "output": "one"}]
    }

``valuation`` and ``pairs`` are optional; ``pairs`` is only read by the
``spec`` check mode and refers to states by label.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import QOrderError
from .feasibility import PartialIsometrySpec
from .linalg import NORM_TOL, StateVector, UnitaryMatrix
from .ordering import OrderedStateSet, Valuation
from .synthesis import ComparatorCircuit, SorterCircuit, Stage

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
INGEST_NORM_TOL = 1e-6


class FileFormatError(Exception):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        self.message = message
        super().__init__(f"{path}:{line}: {message}")


@dataclass
class StateFile:
    states: OrderedStateSet
    valuation: Valuation | None = None
    pairs: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def spec(self) -> PartialIsometrySpec:
        index = dict(zip(self.states.labels, self.states.members))
        return PartialIsometrySpec(tuple((index[a], index[b]) for a, b in self.pairs))


def _line_of(text: str, *needles: str) -> int:
    for needle in needles:
        pos = text.find(needle)
        if pos >= 0:
            return text.count("\n", 0, pos) + 1
    return 1


def _label_line(text: str, label: str) -> int:
    match = re.search(r'"label"\s*:\s*' + re.escape(json.dumps(label)), text)
    if match:
        return text.count("\n", 0, match.start()) + 1
    return _line_of(text, '"states"')


def _read_json(path: Path) -> tuple[str, Any]:
    text = path.read_text(encoding="utf-8")
    try:
        return text, json.loads(text)
    except json.JSONDecodeError as err:
        raise FileFormatError(str(path), err.lineno, f"invalid JSON: {err.msg} (column {err.colno})") from None


def _check_schema(path: Path, text: str, doc: Any, required: bool) -> None:
    if not isinstance(doc, dict):
        raise FileFormatError(str(path), 1, "top level must be a JSON object")
    if "schema" not in doc:
        if required:
            raise FileFormatError(str(path), 1, 'missing "schema" field')
        return
    if doc["schema"] != SCHEMA_VERSION:
        raise FileFormatError(
            str(path), _line_of(text, '"schema"'), f"unsupported schema {doc['schema']!r}"
        )


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def decode_complex_list(raw: Any) -> np.ndarray:
    if not isinstance(raw, list):
        raise ValueError("expected a list of [re, im] pairs")
    out = np.empty(len(raw), dtype=np.complex128)
    for k, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2 and all(_is_number(x) for x in pair)):
            raise ValueError(f"entry {k} is not an [re, im] pair of numbers")
        out[k] = complex(float(pair[0]), float(pair[1]))
    return out


def encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def encode_complex_list(values: np.ndarray) -> list[list[float]]:
    return [encode_complex(z) for z in np.asarray(values).ravel()]


def _parse_states(path: Path, text: str, doc: dict, warnings: list[str]) -> OrderedStateSet:
    dim = doc.get("dim")
    if not (isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1):
        raise FileFormatError(str(path), _line_of(text, '"dim"'), '"dim" must be a positive integer')
    raw_states = doc.get("states")
    if not isinstance(raw_states, list) or not raw_states:
        raise FileFormatError(str(path), _line_of(text, '"states"'), '"states" must be a nonempty list')

    labels: list[str] = []
    members: list[StateVector] = []
    for k, entry in enumerate(raw_states, start=1):
        if not isinstance(entry, dict):
            raise FileFormatError(str(path), _line_of(text, '"states"'), f"state {k} must be an object")
        label = entry.get("label")
        if not isinstance(label, str) or not label:
            raise FileFormatError(str(path), _line_of(text, '"states"'), f"state {k} needs a string label")
        line = _label_line(text, label)
        if label in labels:
            raise FileFormatError(str(path), line, f"duplicate label {label!r}")
        try:
            amps = decode_complex_list(entry.get("amplitudes"))
        except ValueError as err:
            raise FileFormatError(str(path), line, f"state {label!r}: {err}") from None
        if amps.size != dim:
            raise FileFormatError(str(path), line, f"state {label!r} has {amps.size} amplitudes, dim is {dim}")
        norm = float(np.linalg.norm(amps))
        error = abs(norm - 1.0)
        if error > INGEST_NORM_TOL:
            raise FileFormatError(str(path), line, f"state {label!r} has norm {norm:.9g}, not 1")
        if error > NORM_TOL:
            msg = f"state {label!r} renormalized (norm was {norm:.12g})"
            log.warning(msg)
            warnings.append(msg)
            amps = amps / norm
        labels.append(label)
        members.append(StateVector(amps))
    return OrderedStateSet(tuple(members), tuple(labels))


def load_state_file(path: str | Path) -> StateFile:
    path = Path(path)
    text, doc = _read_json(path)
    _check_schema(path, text, doc, required=False)
    warnings: list[str] = []
    states = _parse_states(path, text, doc, warnings)

    val = None
    if "valuation" in doc:
        raw = doc["valuation"]
        line = _line_of(text, '"valuation"')
        if not (isinstance(raw, list) and all(_is_number(v) for v in raw)):
            raise FileFormatError(str(path), line, '"valuation" must be a list of numbers')
        if len(raw) != states.dim:
            raise FileFormatError(str(path), line, f'"valuation" needs {states.dim} values, got {len(raw)}')
        try:
            val = Valuation(tuple(raw))
        except QOrderError as err:
            raise FileFormatError(str(path), line, err.message) from None

    pairs = []
    if "pairs" in doc:
        raw = doc["pairs"]
        line = _line_of(text, '"pairs"')
        if not isinstance(raw, list):
            raise FileFormatError(str(path), line, '"pairs" must be a list')
        known = set(states.labels)
        for k, pair in enumerate(raw, start=1):
            if not (isinstance(pair, dict) and isinstance(pair.get("input"), str)
                    and isinstance(pair.get("output"), str)):
                raise FileFormatError(str(path), line, f'pair {k} needs string "input" and "output" labels')
            for side in ("input", "output"):
                if pair[side] not in known:
                    raise FileFormatError(str(path), line, f"pair {k}: unknown label {pair[side]!r}")
            pairs.append((pair["input"], pair["output"]))
    return StateFile(states, val, pairs, warnings)


def _states_doc(states: OrderedStateSet) -> list[dict]:
    return [
        {"label": label, "amplitudes": encode_complex_list(s.amplitudes)}
        for label, s in zip(states.labels, states.members)
    ]


def _dump_matrix(matrix: np.ndarray, indent: str) -> str:
    rows = [json.dumps(encode_complex_list(row), separators=(",", ":")) for row in np.asarray(matrix)]
    inner = (",\n" + indent + "  ").join(rows)
    return "[\n" + indent + "  " + inner + "\n" + indent + "]"


def dump_circuit(circuit: ComparatorCircuit | SorterCircuit) -> str:
    """Serialize a circuit; identical circuits give identical bytes.

    Sorter stages all use one compare-swap gate, which is written once.
    """
    if isinstance(circuit, ComparatorCircuit):
        head = {
            "schema": SCHEMA_VERSION,
            "kind": "comparator",
            "dim": circuit.states.dim,
            "flag_dim": circuit.flag_dim,
            "factor_order": ["flag", "register_a", "register_b"],
            "states": _states_doc(circuit.states),
        }
        matrix_key, matrix = "unitary", circuit.unitary.entries
    elif isinstance(circuit, SorterCircuit):
        gate = circuit.stages[0].unitary
        if any(stage.unitary is not gate for stage in circuit.stages):
            raise QOrderError("bad-circuit", "stages must share one compare-swap gate")
        head = {
            "schema": SCHEMA_VERSION,
            "kind": "sorter",
            "dim": circuit.states.dim,
            "n_registers": circuit.n_registers,
            "flags_per_stage": circuit.flags_per_stage,
            "factor_order": ["registers", "flags"],
            "states": _states_doc(circuit.states),
            "stages": [{"position": stage.position, "flag": s} for s, stage in enumerate(circuit.stages)],
        }
        matrix_key, matrix = "compare_swap", gate.entries
    else:
        raise TypeError(f"cannot serialize {type(circuit).__name__}")

    lines = ["{"]
    for key, value in head.items():
        lines.append(f"  {json.dumps(key)}: {json.dumps(value)},")
    lines.append(f"  {json.dumps(matrix_key)}: {_dump_matrix(matrix, '  ')}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_circuit(circuit: ComparatorCircuit | SorterCircuit, path: str | Path) -> None:
    Path(path).write_text(dump_circuit(circuit), encoding="utf-8")


def _decode_matrix(path: Path, text: str, raw: Any, key: str) -> np.ndarray:
    line = _line_of(text, json.dumps(key))
    if not isinstance(raw, list) or not raw:
        raise FileFormatError(str(path), line, f'"{key}" must be a nonempty list of rows')
    try:
        rows = [decode_complex_list(row) for row in raw]
    except ValueError as err:
        raise FileFormatError(str(path), line, f'"{key}": {err}') from None
    if any(row.size != len(rows) for row in rows):
        raise FileFormatError(str(path), line, f'"{key}" must be square')
    return np.stack(rows)


def load_circuit(path: str | Path) -> ComparatorCircuit | SorterCircuit:
    path = Path(path)
    text, doc = _read_json(path)
    _check_schema(path, text, doc, required=True)
    kind = doc.get("kind")
    states = _parse_states(path, text, doc, [])
    d = states.dim

    def build_unitary(key: str, expected: int) -> UnitaryMatrix:
        matrix = _decode_matrix(path, text, doc.get(key), key)
        line = _line_of(text, json.dumps(key))
        if matrix.shape[0] != expected:
            raise FileFormatError(str(path), line, f'"{key}" must be {expected}x{expected}')
        try:
            return UnitaryMatrix(matrix)
        except QOrderError as err:
            raise FileFormatError(str(path), line, f'"{key}": {err.message}') from None

    if kind == "comparator":
        unitary = build_unitary("unitary", 2 * d * d)
        return ComparatorCircuit(unitary, states)
    if kind == "sorter":
        n = doc.get("n_registers")
        raw_stages = doc.get("stages")
        line = _line_of(text, '"stages"')
        if not (isinstance(n, int) and n >= 2):
            raise FileFormatError(str(path), _line_of(text, '"n_registers"'), '"n_registers" must be an integer >= 2')
        if not isinstance(raw_stages, list) or not raw_stages:
            raise FileFormatError(str(path), line, '"stages" must be a nonempty list')
        gate = build_unitary("compare_swap", 2 * d * d)
        stages = []
        for s, entry in enumerate(raw_stages):
            p = entry.get("position") if isinstance(entry, dict) else None
            if not (isinstance(p, int) and 1 <= p < n):
                raise FileFormatError(str(path), line, f"stage {s}: position must be in 1..{n - 1}")
            stages.append(Stage(p, gate))
        return SorterCircuit(tuple(stages), n, states)
    raise FileFormatError(str(path), _line_of(text, '"kind"'), f"unknown circuit kind {kind!r}")
