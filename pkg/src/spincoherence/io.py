"""State files (JSON) and tabular output (CSV).

A state file looks like::

    {
      "schema_version": "1",
      "kind": "su2",
      "two_j": 2,
      "matrix": [
        [[0.5, 0.0], [0.0, 0.0], ...],
        ...
      ],
      "metadata": {}
    }

``kind`` is ``"su2"`` (with ``two_j``) or ``"sun"`` (with ``n`` and ``N``).
Entries are ``[real, imag]`` pairs, rows in order. ``dump_state`` writes a
canonical form with 17 significant digits, so ``dump_state(parse_state(f))
== f`` for any file it produced.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._errors import ValidationError
from .spin import SpinLabel, check_density_matrix
from .sun import IrrepLabel

SCHEMA_VERSION = "1"
KINDS = ("su2", "sun")


class StateFileError(ValidationError):
    """Malformed state file; the message carries line context when available."""


def format_float(x: float) -> str:
    """17 significant digits, always readable back as a float."""
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"non-finite value {x!r} cannot be serialized")
    s = f"{x:.17g}"
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


@dataclass
class StateFile:
    kind: str
    matrix: np.ndarray
    two_j: int | None = None
    n: int | None = None
    N: int | None = None
    metadata: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    @property
    def label(self) -> SpinLabel | IrrepLabel:
        if self.kind == "su2":
            return SpinLabel(self.two_j)
        return IrrepLabel(self.n, self.N)

    @classmethod
    def from_matrix(cls, rho, label, metadata: dict | None = None) -> "StateFile":
        rho = np.asarray(rho, dtype=complex)
        meta = dict(metadata or {})
        if isinstance(label, IrrepLabel):
            return cls("sun", rho, n=label.n, N=label.N, metadata=meta)
        return cls("su2", rho, two_j=SpinLabel(label).two_j if isinstance(label, int) else label.two_j,
                   metadata=meta)


def _line_context(text: str, lineno: int) -> str:
    lines = text.splitlines()
    if 1 <= lineno <= len(lines):
        return f"line {lineno}: {lines[lineno - 1].strip()}"
    return f"line {lineno}"


def _find_line(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for k, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return k
    return None


def _require_int(doc: dict, key: str, text: str, source: str) -> int:
    if key not in doc:
        raise StateFileError(f"{source}: missing field {key!r}")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        ln = _find_line(text, key)
        where = f" ({_line_context(text, ln)})" if ln else ""
        raise StateFileError(f"{source}: field {key!r} must be an integer{where}")
    return v


def _matrix_line(text: str, row: int) -> int | None:
    """Line of the ``row``-th matrix row in canonical layout."""
    start = _find_line(text, "matrix")
    return None if start is None else start + 1 + row


def _parse_matrix(raw, dim: int, text: str, source: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != dim:
        got = len(raw) if isinstance(raw, list) else type(raw).__name__
        raise StateFileError(f"{source}: dimension mismatch, expected {dim} rows, got {got}")
    out = np.empty((dim, dim), dtype=complex)
    for r, row in enumerate(raw):
        ln = _matrix_line(text, r)
        where = f" ({_line_context(text, ln)})" if ln else ""
        if not isinstance(row, list) or len(row) != dim:
            raise StateFileError(f"{source}: matrix row {r} must hold {dim} entries{where}")
        for c, entry in enumerate(row):
            ok = (isinstance(entry, list) and len(entry) == 2
                  and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry))
            if not ok:
                raise StateFileError(f"{source}: matrix[{r}][{c}] must be a [real, imag] pair{where}")
            if not all(math.isfinite(x) for x in entry):
                raise StateFileError(f"{source}: matrix[{r}][{c}] is not finite{where}")
            out[r, c] = complex(entry[0], entry[1])
    return out


def parse_state(text: str, source: str = "<state>") -> StateFile:
    """Parse and validate a state file.

    Raises ``StateFileError`` for syntax or schema problems and
    ``ValidationError`` when the matrix is not a density matrix.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{source}: {exc.msg} at {_line_context(text, exc.lineno)}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise StateFileError(f"{source}: top level must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise StateFileError(f"{source}: unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise StateFileError(f"{source}: kind must be one of {KINDS}, got {kind!r}")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise StateFileError(f"{source}: metadata must be an object")
    if kind == "su2":
        two_j = _require_int(doc, "two_j", text, source)
        if two_j < 0:
            raise StateFileError(f"{source}: two_j must be nonnegative, got {two_j}")
        sf = StateFile("su2", np.empty(0), two_j=two_j, metadata=meta)
    else:
        n = _require_int(doc, "n", text, source)
        big_n = _require_int(doc, "N", text, source)
        sf = StateFile("sun", np.empty(0), n=n, N=big_n, metadata=meta)
    label = sf.label
    if "matrix" not in doc:
        raise StateFileError(f"{source}: missing field 'matrix'")
    rho = _parse_matrix(doc["matrix"], label.dim, text, source)
    sf.matrix = check_density_matrix(rho, label.dim)
    return sf


def dump_state(sf: StateFile) -> str:
    """Canonical JSON text (trailing newline included)."""
    rho = np.asarray(sf.matrix, dtype=complex)
    lines = ["{", f'  "schema_version": {json.dumps(sf.schema_version)},', f'  "kind": {json.dumps(sf.kind)},']
    if sf.kind == "su2":
        lines.append(f'  "two_j": {int(sf.two_j)},')
    else:
        lines.append(f'  "n": {int(sf.n)},')
        lines.append(f'  "N": {int(sf.N)},')
    lines.append('  "matrix": [')
    for r, row in enumerate(rho):
        cells = ", ".join(f"[{format_float(z.real)}, {format_float(z.imag)}]" for z in row)
        sep = "," if r < len(rho) - 1 else ""
        lines.append(f"    [{cells}]{sep}")
    lines.append("  ],")
    lines.append(f'  "metadata": {json.dumps(sf.metadata, sort_keys=True)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_state(path) -> StateFile:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_state(text, source=str(path))


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def write_state(path, sf: StateFile) -> None:
    write_text(path, dump_state(sf))


def csv_text(header, rows) -> str:
    """CSV with floats at 17 significant digits and '\\n' line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
