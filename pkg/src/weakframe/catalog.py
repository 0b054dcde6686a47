"""Built-in structures, emitted as :class:`StructureSpec` objects.

``euclid-weak-C``
    Flat ``R^{2n+p}`` (or ``R^{2n} x T^p``), ``f`` block diagonal with blocks
    ``[[0, -lam_k], [lam_k, 0]]``, ``Q = diag(lam_k^2, lam_k^2, ..., 1, ..., 1)``.
``generic-weak-f``
    The same shape with every ``lam_k`` replaced by ``1 + 0.1 sin(x1)``.
``classical-S``
    The standard S-structure on ``R^{2n+p}``: ``eta^a = (dz_a - sum_i y_i dx_i)/2``,
    ``xi_a = 2 d/dz_a``, ``Q = id``.
``weak-almost-contact``
    ``generic-weak-f`` with ``p = 1``.

Chart order is ``x1, y1, ..., xn, yn, z1, ..., zp`` for the block examples and
``x1..xn, y1..yn, z1..zp`` for ``classical-S``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .specfile import StructureSpec
from .structure import StructureClass

__all__ = ["CATALOG_NAMES", "CatalogEntry", "get_example", "catalog_entry", "default_matrix", "expected_class"]

CATALOG_NAMES = ("euclid-weak-C", "generic-weak-f", "classical-S", "weak-almost-contact")


def _num(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def _zeros(rows: int, cols: int) -> list:
    return [["0"] * cols for _ in range(rows)]


def _block_spec(name: str, n: int, p: int, lam: list[str], box_xy, box_z, periodic_z: bool) -> StructureSpec:
    d = 2 * n + p
    coords = [c for k in range(1, n + 1) for c in (f"x{k}", f"y{k}")] + [f"z{i}" for i in range(1, p + 1)]
    f, Q, g = _zeros(d, d), _zeros(d, d), _zeros(d, d)
    for k, l in enumerate(lam):
        a, b = 2 * k, 2 * k + 1
        f[a][b] = f"-({l})" if not _is_number(l) else _num(-float(l))
        f[b][a] = l
        sq = _num(float(l) ** 2) if _is_number(l) else f"({l})^2"
        Q[a][a] = Q[b][b] = sq
    for a in range(2 * n, d):
        Q[a][a] = "1"
    for a in range(d):
        g[a][a] = "1"
    xi = [["0"] * d for _ in range(p)]
    eta = [["0"] * d for _ in range(p)]
    for i in range(p):
        xi[i][2 * n + i] = "1"
        eta[i][2 * n + i] = "1"
    box = [list(box_xy)] * (2 * n) + [list(box_z)] * p
    periodic = [False] * (2 * n) + [True] * p if periodic_z else []
    return StructureSpec(name, n, p, coords, f, Q, xi, eta, g, [list(b) for b in box], periodic)


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _euclid_weak_C(n: int, p: int, lam=None, torus: bool = False) -> StructureSpec:
    if lam is None:
        lam = [1.0 + 0.5 * k for k in range(1, n + 1)]
    if isinstance(lam, (int, float)):
        lam = [float(lam)] * n
    lam = [float(x) for x in lam]
    if len(lam) == 1 and n > 1:
        lam = lam * n
    if len(lam) != n:
        raise ValueError(f"need {n} values of lam, got {len(lam)}")
    if any(x <= 0 for x in lam):
        raise ValueError("lam values must be positive")
    name = "euclid-weak-C-torus" if torus else "euclid-weak-C"
    box_z = (0.0, 2 * math.pi) if torus else (-1.0, 1.0)
    return _block_spec(name, n, p, [_num(x) for x in lam], (-1.0, 1.0), box_z, torus)


def _generic_weak_f(n: int, p: int, name: str = "generic-weak-f") -> StructureSpec:
    lam = "1 + 0.1*sin(x1)"
    return _block_spec(name, n, p, [lam] * n, (-2.0, 2.0), (-2.0, 2.0), False)


def _classical_S(n: int, p: int) -> StructureSpec:
    d = 2 * n + p
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    zs = [f"z{a}" for a in range(1, p + 1)]
    coords = xs + ys + zs
    X = lambda i: i
    Y = lambda i: n + i
    Z = lambda a: 2 * n + a
    f, Q, g = _zeros(d, d), _zeros(d, d), _zeros(d, d)
    for a in range(d):
        Q[a][a] = "1"
    for i in range(n):
        f[X(i)][Y(i)] = "1"
        f[Y(i)][X(i)] = "-1"
        for a in range(p):
            f[Z(a)][Y(i)] = ys[i]
    xi = [["0"] * d for _ in range(p)]
    eta = [["0"] * d for _ in range(p)]
    for a in range(p):
        xi[a][Z(a)] = "2"
        eta[a][Z(a)] = "0.5"
        for i in range(n):
            eta[a][X(i)] = f"-0.5*{ys[i]}"
    # g = sum_a eta^a (x) eta^a + (dx^2 + dy^2)/4
    for i in range(n):
        for j in range(n):
            base = "0.25 + " if i == j else ""
            g[X(i)][X(j)] = f"{base}{_num(0.25 * p)}*{ys[i]}*{ys[j]}"
        g[Y(i)][Y(i)] = "0.25"
        for a in range(p):
            g[X(i)][Z(a)] = g[Z(a)][X(i)] = f"-0.25*{ys[i]}"
    for a in range(p):
        g[Z(a)][Z(a)] = "0.25"
    box = [[-1.0, 1.0] for _ in range(d)]
    return StructureSpec("classical-S", n, p, coords, f, Q, xi, eta, g, box)


def _check_np(n, p):
    for key, v in (("n", n), ("p", p)):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or v < 1:
            raise ValueError(f"{key} must be a positive integer")


def get_example(name: str, **params) -> StructureSpec:
    """Catalog structure ``name`` with parameters ``n``, ``p`` and, for euclid-weak-C, ``lam`` and ``torus``."""
    # generic-weak-f defaults to n = 2: with one block Phi = -lam(x1) dx1^dy1 is closed
    n = params.pop("n", 2 if name == "generic-weak-f" else 1)
    p = params.pop("p", 1)
    _check_np(n, p)
    n, p = int(n), int(p)
    if name == "weak-almost-contact" and p != 1:
        raise ValueError("weak-almost-contact has p = 1")
    if name in ("euclid-weak-C", "euclid-weak-C-torus"):
        lam = params.pop("lam", None)
        torus = bool(params.pop("torus", name.endswith("torus")))
        spec = _euclid_weak_C(n, p, lam, torus)
    elif name == "generic-weak-f":
        spec = _generic_weak_f(n, p)
    elif name == "classical-S":
        spec = _classical_S(n, p)
    elif name == "weak-almost-contact":
        spec = _generic_weak_f(n, 1, name="weak-almost-contact")
    else:
        raise ValueError(f"unknown example {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    if params:
        raise ValueError(f"unknown parameters for {name}: {', '.join(sorted(params))}")
    return spec


def expected_class(name: str, n: int = 1, p: int = 1, **_) -> StructureClass:
    """Class each catalog entry is built to have."""
    if name.startswith("euclid-weak-C"):
        return StructureClass(True, True, True, False, False, True, True)
    if name == "classical-S":
        return StructureClass(True, True, True, True, True, False, False)
    if name in ("generic-weak-f", "weak-almost-contact"):
        # Phi = lam(x1) dx^dy-type form: closed when there is a single block
        closed = n == 1
        return StructureClass(True, False, False, False, False, closed, False)
    raise ValueError(f"unknown example {name!r}")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: dict
    spec: StructureSpec
    expected_class: StructureClass


def catalog_entry(name: str, **params) -> CatalogEntry:
    spec = get_example(name, **dict(params))
    return CatalogEntry(name, dict(params), spec, expected_class(name, n=spec.n, p=spec.p))


def default_matrix() -> list[CatalogEntry]:
    """Every entry for ``n, p`` in ``{1, 2}`` (``p = 1`` only for weak-almost-contact)."""
    out = []
    for name in CATALOG_NAMES:
        for n in (1, 2):
            for p in ((1,) if name == "weak-almost-contact" else (1, 2)):
                out.append(catalog_entry(name, n=n, p=p))
    return out
