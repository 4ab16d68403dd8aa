"""JSON descriptors for states and paths, as consumed by the command line.

State descriptor:
    { "eigenvalues": [..], "basis": "computational" | {"columns": [[..], ..]},
      "pairing": [..] }
Path descriptor:
    { "segments": [ {"axis": [x, y, z], "angle": a, "steps": n}
                  | {"generator": [[..], ..], "angle": a, "steps": n} ] }

Matrix and vector entries are real numbers or [re, im] pairs. Indices in the
"pairing" list are 1-based, matching the CLI surface; the library itself is
0-based throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import states, transport
from .errors import ParseError, ValidationError


def load_json(path: str):
    """Read a JSON file; syntax problems become ParseError."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _scalar(entry, where: str) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    if (
        isinstance(entry, (list, tuple))
        and len(entry) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        return complex(entry[0], entry[1])
    raise ValidationError(f"{where}: expected a number or [re, im], got {entry!r}")


def _real(entry, where: str) -> float:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return float(entry)
    raise ValidationError(f"{where}: expected a real number, got {entry!r}")


def _matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ValidationError(f"{where}: expected a nonempty list of rows")
    n = len(obj)
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ValidationError(f"{where}[{i}]: expected a row of length {n}")
        for j, entry in enumerate(row):
            out[i, j] = _scalar(entry, f"{where}[{i}][{j}]")
    return out


@dataclass(frozen=True)
class StateSpec:
    """Parsed state descriptor: spectrum, eigenbasis, optional pairing."""

    eigenvalues: np.ndarray
    basis: np.ndarray
    pairing: tuple[int, ...] | None

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def density(self) -> states.DensityMatrix:
        return states.make_density(self.eigenvalues, self.basis)

    def complement(self) -> states.DensityMatrix:
        return states.quasi_complement(self.density(), self.pairing)

    def family(self) -> states.QuasiOrthogonalFamily:
        return states.cyclic_family(self.eigenvalues, self.basis)


def parse_state(obj) -> StateSpec:
    """Validate a state descriptor object field by field."""
    if not isinstance(obj, dict):
        raise ValidationError(f"state descriptor: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - {"eigenvalues", "basis", "pairing"}
    if unknown:
        raise ValidationError(f"state descriptor: unknown fields {sorted(unknown)}")
    if "eigenvalues" not in obj:
        raise ValidationError("state descriptor: missing field 'eigenvalues'")
    raw = obj["eigenvalues"]
    if not isinstance(raw, list) or not raw:
        raise ValidationError("eigenvalues: expected a nonempty list")
    lam = np.array([_real(x, f"eigenvalues[{i}]") for i, x in enumerate(raw)])
    n = lam.size

    spec_basis = obj.get("basis", "computational")
    if spec_basis == "computational":
        basis = np.eye(n, dtype=complex)
    elif isinstance(spec_basis, dict) and set(spec_basis) == {"columns"}:
        cols = spec_basis["columns"]
        if not isinstance(cols, list) or len(cols) != n:
            raise ValidationError(f"basis.columns: expected {n} columns")
        basis = np.zeros((n, n), dtype=complex)
        for j, col in enumerate(cols):
            if not isinstance(col, list) or len(col) != n:
                raise ValidationError(f"basis.columns[{j}]: expected length {n}")
            for i, entry in enumerate(col):
                basis[i, j] = _scalar(entry, f"basis.columns[{j}][{i}]")
    else:
        raise ValidationError(
            "basis: expected \"computational\" or an object with a 'columns' field"
        )

    pairing = None
    if obj.get("pairing") is not None:
        raw_pairing = obj["pairing"]
        if not isinstance(raw_pairing, list) or len(raw_pairing) != n:
            raise ValidationError(f"pairing: expected a list of {n} indices")
        shifted = []
        for i, entry in enumerate(raw_pairing):
            if not isinstance(entry, int) or isinstance(entry, bool):
                raise ValidationError(f"pairing[{i}]: expected an integer, got {entry!r}")
            if not (1 <= entry <= n):
                raise ValidationError(f"pairing[{i}]: index {entry} outside 1..{n}")
            shifted.append(entry - 1)
        pairing = tuple(shifted)

    return StateSpec(eigenvalues=lam, basis=basis, pairing=pairing)


def parse_path(obj, default_steps: int = transport.DEFAULT_STEPS) -> tuple[transport.PathSegment, ...]:
    """Validate a path descriptor into concrete segments."""
    if not isinstance(obj, dict):
        raise ValidationError(f"path descriptor: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - {"segments"}
    if unknown:
        raise ValidationError(f"path descriptor: unknown fields {sorted(unknown)}")
    raw_segments = obj.get("segments")
    if not isinstance(raw_segments, list) or not raw_segments:
        raise ValidationError("segments: expected a nonempty list")

    out = []
    for i, seg in enumerate(raw_segments):
        where = f"segments[{i}]"
        if not isinstance(seg, dict):
            raise ValidationError(f"{where}: expected an object")
        unknown = set(seg) - {"axis", "generator", "angle", "steps"}
        if unknown:
            raise ValidationError(f"{where}: unknown fields {sorted(unknown)}")
        if ("axis" in seg) == ("generator" in seg):
            raise ValidationError(f"{where}: give exactly one of 'axis' or 'generator'")
        if "angle" not in seg:
            raise ValidationError(f"{where}: missing field 'angle'")
        angle = _real(seg["angle"], f"{where}.angle")
        steps = seg.get("steps", default_steps)
        if not isinstance(steps, int) or isinstance(steps, bool) or steps < 1:
            raise ValidationError(f"{where}.steps: expected a positive integer")

        if "axis" in seg:
            axis = seg["axis"]
            if not isinstance(axis, list) or len(axis) != 3:
                raise ValidationError(f"{where}.axis: expected [x, y, z]")
            vec = [_real(x, f"{where}.axis[{k}]") for k, x in enumerate(axis)]
            try:
                out.append(transport.PathSegment.about_axis(vec, angle, steps=steps))
            except (ValueError, ArithmeticError) as exc:
                raise ValidationError(f"{where}: {exc}") from exc
        else:
            gen = _matrix(seg["generator"], f"{where}.generator")
            try:
                out.append(transport.PathSegment(generator=gen, duration=angle, steps=steps))
            except (ValueError, ArithmeticError) as exc:
                raise ValidationError(f"{where}: {exc}") from exc
    return tuple(out)
