"""StructureSpec: the JSON description of a structure on a coordinate chart.

Example::

    {
      "name": "euclid-weak-C",
      "n": 1, "p": 1,
      "coordinates": ["x1", "y1", "z1"],
      "f":   [["0", "-2", "0"], ["2", "0", "0"], ["0", "0", "0"]],
      "Q":   [["4", "0", "0"], ["0", "4", "0"], ["0", "0", "1"]],
      "xi":  [["0", "0", "1"]],
      "eta": [["0", "0", "1"]],
      "g":   [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
      "box": [[-1, 1], [-1, 1], [-1, 1]]
    }

``periodic`` (one boolean per coordinate) is optional and only documents
torus directions; sampling is the same.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .expr import ExprSyntaxError, evaluate, parse_expression, to_string
from .fields import EndomorphismField, MetricField, OneFormField, VectorField
from .structure import FramedWeakFStructure


class SpecError(ValueError):
    """A spec file is malformed; carries the JSON path and, when known, the source line."""

    def __init__(self, message: str, path: str = "", line: int | None = None, source: str = ""):
        self.path = path
        self.line = line
        self.source = source
        loc = source or "<spec>"
        if line is not None:
            loc += f":{line}"
        if path:
            loc += f": {path}"
        super().__init__(f"{loc}: {message}")


@dataclass
class StructureSpec:
    name: str
    n: int
    p: int
    coordinates: list
    f: list
    Q: list
    xi: list
    eta: list
    g: list
    box: list
    periodic: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return 2 * self.n + self.p

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "n": self.n,
            "p": self.p,
            "coordinates": list(self.coordinates),
            "f": [list(r) for r in self.f],
            "Q": [list(r) for r in self.Q],
            "xi": [list(r) for r in self.xi],
            "eta": [list(r) for r in self.eta],
            "g": [list(r) for r in self.g],
            "box": [[float(a), float(b)] for a, b in self.box],
        }
        if self.periodic:
            d["periodic"] = [bool(x) for x in self.periodic]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def dump(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_dict(cls, data: dict, source: str = "", text: str = "") -> "StructureSpec":
        return _from_dict(data, source, text)

    @classmethod
    def from_json(cls, text: str, source: str = "") -> "StructureSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc.msg} (column {exc.colno})", "", exc.lineno, source) from None
        if not isinstance(data, dict):
            raise SpecError("top level must be a JSON object", "", 1, source)
        return _from_dict(data, source, text)

    @classmethod
    def load(cls, path) -> "StructureSpec":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SpecError(f"cannot read file: {exc.strerror}", "", None, str(path)) from None
        return cls.from_json(text, str(path))

    def build(self, source: str = "", text: str = "") -> FramedWeakFStructure:
        """Parse every expression and assemble the structure."""
        return _build(self, source, text)


def _line_of(text: str, key: str) -> int | None:
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if m is None:
        return None
    return text.count("\n", 0, m.start()) + 1


def _matrix(data, key, rows, cols, source, text, kind=str):
    err = lambda msg: SpecError(msg, key, _line_of(text, key), source)
    m = data.get(key)
    if not isinstance(m, list) or len(m) != rows:
        raise err(f"expected {rows} rows, got {len(m) if isinstance(m, list) else type(m).__name__}")
    out = []
    for i, r in enumerate(m):
        if not isinstance(r, list) or len(r) != cols:
            got = len(r) if isinstance(r, list) else type(r).__name__
            raise SpecError(f"row {i}: expected {cols} entries, got {got}", f"{key}[{i}]", _line_of(text, key), source)
        row = []
        for j, e in enumerate(r):
            if kind is str:
                if isinstance(e, bool) or not isinstance(e, (str, int, float)):
                    raise SpecError("entry must be an expression string", f"{key}[{i}][{j}]", _line_of(text, key), source)
                row.append(str(e))
            else:
                if isinstance(e, bool) or not isinstance(e, (int, float)):
                    raise SpecError("entry must be a number", f"{key}[{i}][{j}]", _line_of(text, key), source)
                row.append(float(e))
        out.append(row)
    return out


def _from_dict(data: dict, source: str, text: str) -> StructureSpec:
    for key in ("n", "p", "coordinates", "f", "Q", "xi", "eta", "g", "box"):
        if key not in data:
            raise SpecError(f"missing field {key!r}", key, None, source)
    n, p = data["n"], data["p"]
    for key, v in (("n", n), ("p", p)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise SpecError("must be a positive integer", key, _line_of(text, key), source)
    d = 2 * n + p
    coords = data["coordinates"]
    if not isinstance(coords, list) or len(coords) != d or not all(isinstance(c, str) for c in coords):
        raise SpecError(f"expected {d} coordinate names (2n+p)", "coordinates", _line_of(text, "coordinates"), source)
    if len(set(coords)) != d:
        raise SpecError("coordinate names must be distinct", "coordinates", _line_of(text, "coordinates"), source)
    spec = StructureSpec(
        name=str(data.get("name", "")),
        n=n,
        p=p,
        coordinates=list(coords),
        f=_matrix(data, "f", d, d, source, text),
        Q=_matrix(data, "Q", d, d, source, text),
        xi=_matrix(data, "xi", p, d, source, text),
        eta=_matrix(data, "eta", p, d, source, text),
        g=_matrix(data, "g", d, d, source, text),
        box=_matrix(data, "box", d, 2, source, text, kind=float),
        periodic=list(data.get("periodic", [])),
    )
    for a, (lo, hi) in enumerate(spec.box):
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise SpecError(f"empty or invalid interval [{lo}, {hi}]", f"box[{a}]", _line_of(text, "box"), source)
    if spec.periodic and len(spec.periodic) != d:
        raise SpecError(f"expected {d} flags", "periodic", _line_of(text, "periodic"), source)
    _build(spec, source, text)  # every expression must parse; g must be symmetric
    return spec


def _parse(spec, text_expr, path, key, source, text):
    try:
        return parse_expression(text_expr, spec.coordinates)
    except ExprSyntaxError as exc:
        raise SpecError(f"{exc} in {text_expr!r}", path, _line_of(text, key), source) from None


def _build(spec: StructureSpec, source: str = "", text: str = "") -> FramedWeakFStructure:
    d = spec.dim

    def mat(key):
        rows = getattr(spec, key)
        return tuple(
            tuple(_parse(spec, e, f"{key}[{i}][{j}]", key, source, text) for j, e in enumerate(r))
            for i, r in enumerate(rows)
        )

    f, Q, g = mat("f"), mat("Q"), mat("g")
    xi, eta = mat("xi"), mat("eta")
    box = np.asarray(spec.box, dtype=float)
    probe = box[:, 0] + (box[:, 1] - box[:, 0]) * np.linspace(0.13, 0.87, 5)[:, None]
    for i in range(d):
        for j in range(i + 1, d):
            if to_string(g[i][j]) == to_string(g[j][i]):
                continue
            try:
                a, b = evaluate(g[i][j], probe), evaluate(g[j][i], probe)
            except ArithmeticError:
                a, b = np.array([0.0]), np.array([1.0])
            if np.max(np.abs(a - b)) > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
                raise SpecError(
                    f"metric is not symmetric: g[{i}][{j}] = {spec.g[i][j]!r} but g[{j}][{i}] = {spec.g[j][i]!r}",
                    f"g[{i}][{j}]",
                    _line_of(text, "g"),
                    source,
                )
    return FramedWeakFStructure(
        n=spec.n,
        p=spec.p,
        f=EndomorphismField(f),
        Q=EndomorphismField(Q),
        xi=tuple(VectorField(r) for r in xi),
        eta=tuple(OneFormField(r) for r in eta),
        g=MetricField(g),
        box=box,
        coords=tuple(spec.coordinates),
        name=spec.name,
        periodic=tuple(spec.periodic),
    )
