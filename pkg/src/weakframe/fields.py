"""Tensor fields on a chart and their local jets.

Fields store one :class:`~weakframe.expr.Expr` per component.  Evaluating a
field at a batch of points gives a :class:`Jet`: component values plus their
first partial derivatives, which is all the bracket, Lie-derivative and
covariant-derivative formulas need.  Batch axes lead and broadcast, so a jet
of shape ``(E, 1, N)`` paired with one of shape ``(1, E, N)`` evaluates a
bilinear expression on every pair of ``E`` frame vectors at ``N`` points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .expr import Const, Expr, Var, evaluate_jet2, parse_expression

__all__ = [
    "Jet",
    "VectorField",
    "OneFormField",
    "EndomorphismField",
    "MetricField",
    "scalar_jet",
    "constant_vectors",
    "apply",
    "pair",
    "inner",
    "along",
    "scale",
]


class Jet:
    """Values and first partials of a tensor at a batch of points.

    ``val`` has shape ``batch + (dim,) * rank``; ``der`` appends one more axis
    of length ``dim`` holding the partial derivatives, or is ``None`` when only
    values are known (e.g. Lie brackets).  ``der2`` is only filled for metrics.
    """

    __slots__ = ("val", "der", "rank", "der2")

    def __init__(self, val, der=None, rank: int = 1, der2=None):
        self.val = np.asarray(val, dtype=float)
        self.der = None if der is None else np.asarray(der, dtype=float)
        self.rank = rank
        self.der2 = der2

    @property
    def dim(self) -> int:
        return self.val.shape[-1] if self.rank else self.der.shape[-1]

    @property
    def batch(self) -> tuple:
        return self.val.shape[: self.val.ndim - self.rank]

    def values_only(self) -> "Jet":
        return Jet(self.val, None, self.rank)

    def __add__(self, other: "Jet") -> "Jet":
        der = None if self.der is None or other.der is None else self.der + other.der
        return Jet(self.val + other.val, der, self.rank)

    def __sub__(self, other: "Jet") -> "Jet":
        der = None if self.der is None or other.der is None else self.der - other.der
        return Jet(self.val - other.val, der, self.rank)

    def __neg__(self) -> "Jet":
        return Jet(-self.val, None if self.der is None else -self.der, self.rank)

    def __mul__(self, c: float) -> "Jet":
        if isinstance(c, Jet):
            return scale(c, self) if c.rank == 0 else scale(self, c)
        return Jet(self.val * c, None if self.der is None else self.der * c, self.rank)

    __rmul__ = __mul__

    def __getitem__(self, key) -> "Jet":
        """Index the batch axes only."""
        der = None if self.der is None else self.der[key]
        return Jet(self.val[key], der, self.rank)

    def __repr__(self):
        return f"Jet(rank={self.rank}, batch={self.batch}, has_der={self.der is not None})"


def _need(j: Jet, what: str):
    if j.der is None:
        raise ValueError(f"{what} needs derivatives, but only values are known")


def scale(s: Jet, j: Jet) -> Jet:
    """Product of a scalar jet with a tensor jet (Leibniz rule)."""
    ax = (Ellipsis,) + (None,) * j.rank
    val = s.val[ax] * j.val
    if s.der is None or j.der is None:
        return Jet(val, None, j.rank)
    dax = (Ellipsis,) + (None,) * j.rank + (slice(None),)
    der = s.der[dax] * j.val[..., None] + s.val[ax + (None,)] * j.der
    return Jet(val, der, j.rank)


def apply(t: Jet, x: Jet) -> Jet:
    """``T X`` for an endomorphism jet ``T`` and vector jet ``X``."""
    val = np.einsum("...kl,...l->...k", t.val, x.val)
    if t.der is None or x.der is None:
        return Jet(val, None, 1)
    der = np.einsum("...kla,...l->...ka", t.der, x.val) + np.einsum("...kl,...la->...ka", t.val, x.der)
    return Jet(val, der, 1)


def pair(eta: Jet, x: Jet) -> Jet:
    """``eta(X)`` as a scalar jet."""
    val = np.einsum("...k,...k->...", eta.val, x.val)
    if eta.der is None or x.der is None:
        return Jet(val, None, 0)
    der = np.einsum("...ka,...k->...a", eta.der, x.val) + np.einsum("...k,...ka->...a", eta.val, x.der)
    return Jet(val, der, 0)


def inner(g: Jet, x: Jet, y: Jet) -> Jet:
    """``g(X, Y)`` as a scalar jet."""
    val = np.einsum("...ij,...i,...j->...", g.val, x.val, y.val)
    if g.der is None or x.der is None or y.der is None:
        return Jet(val, None, 0)
    der = (
        np.einsum("...ija,...i,...j->...a", g.der, x.val, y.val)
        + np.einsum("...ij,...ia,...j->...a", g.val, x.der, y.val)
        + np.einsum("...ij,...i,...ja->...a", g.val, x.val, y.der)
    )
    return Jet(val, der, 0)


def along(x: Jet, s: Jet) -> np.ndarray:
    """Directional derivative ``X(s)`` of a scalar jet (values only)."""
    _need(s, "directional derivative")
    return np.einsum("...a,...a->...", s.der, x.val)


def constant_vectors(vectors) -> Jet:
    """Constant-coefficient vector fields with the given values."""
    v = np.asarray(vectors, dtype=float)
    return Jet(v, np.zeros(v.shape + (v.shape[-1],)), 1)


def _eval_components(exprs: Sequence[Expr], pts: np.ndarray, order: int):
    vals, ders, hess = [], [], []
    for e in exprs:
        j = evaluate_jet2(e, pts, order=max(order, 1))
        vals.append(j.value)
        ders.append(j.gradient)
        if order >= 2:
            hess.append(j.hessian)
    val = np.stack(vals, axis=-1)
    der = np.stack(ders, axis=-2)
    h = np.stack(hess, axis=-3) if order >= 2 else None
    return val, der, h


def _points(pts, dim: int) -> np.ndarray:
    p = np.asarray(pts, dtype=float)
    if p.ndim == 1:
        p = p[None, :]
    if p.shape[-1] != dim:
        raise ValueError(f"points have dimension {p.shape[-1]}, chart has {dim}")
    return p


def _parse_all(items, coords):
    return tuple(e if isinstance(e, Expr) else parse_expression(str(e), coords) for e in items)


@dataclass(frozen=True)
class VectorField:
    """Contravariant components ``X^k``."""

    components: tuple

    @classmethod
    def parse(cls, texts: Sequence, coords: Sequence[str]) -> "VectorField":
        return cls(_parse_all(texts, coords))

    @classmethod
    def constant(cls, values: Sequence[float]) -> "VectorField":
        return cls(tuple(Const(float(v)) for v in values))

    @classmethod
    def coordinate(cls, a: int, dim: int) -> "VectorField":
        return cls.constant([1.0 if k == a else 0.0 for k in range(dim)])

    @property
    def dim(self) -> int:
        return len(self.components)

    def jet(self, pts) -> Jet:
        p = _points(pts, self.dim)
        val, der, _ = _eval_components(self.components, p, 1)
        return Jet(val, der, 1)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def __rmul__(self, c) -> "VectorField":
        return VectorField(tuple(c * a for a in self.components))


@dataclass(frozen=True)
class OneFormField:
    """Covariant components ``eta_k``."""

    components: tuple

    @classmethod
    def parse(cls, texts: Sequence, coords: Sequence[str]) -> "OneFormField":
        return cls(_parse_all(texts, coords))

    @property
    def dim(self) -> int:
        return len(self.components)

    def jet(self, pts) -> Jet:
        p = _points(pts, self.dim)
        val, der, _ = _eval_components(self.components, p, 1)
        return Jet(val, der, 1)


@dataclass(frozen=True)
class EndomorphismField:
    """Mixed (1,1) components ``T^k_l``; row index is the upper one."""

    components: tuple

    @classmethod
    def parse(cls, rows: Sequence[Sequence], coords: Sequence[str]) -> "EndomorphismField":
        return cls(tuple(_parse_all(r, coords) for r in rows))

    @classmethod
    def identity(cls, dim: int) -> "EndomorphismField":
        return cls(tuple(tuple(Const(1.0 if i == j else 0.0) for j in range(dim)) for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.components)

    def flat(self) -> list:
        return [e for row in self.components for e in row]

    def jet(self, pts, order: int = 1) -> Jet:
        d = self.dim
        p = _points(pts, d)
        val, der, h = _eval_components(self.flat(), p, order)
        batch = val.shape[:-1]
        return Jet(
            val.reshape(batch + (d, d)),
            der.reshape(batch + (d, d, d)),
            2,
            None if h is None else h.reshape(batch + (d, d, d, d)),
        )

    def apply(self, v: VectorField) -> VectorField:
        return VectorField(tuple(sum((t * x for t, x in zip(row, v.components)), Const(0.0)) for row in self.components))


class MetricField(EndomorphismField):
    """Symmetric (0,2) components ``g_ij``."""

    def jet(self, pts, order: int = 2) -> Jet:
        return super().jet(pts, order)


def scalar_jet(e: Expr, pts) -> Jet:
    """Scalar function as a rank-0 jet at a batch of points."""
    p = np.asarray(pts, dtype=float)
    if p.ndim == 1:
        p = p[None, :]
    j = evaluate_jet2(e, p, order=1)
    return Jet(j.value, j.gradient, 0)


def coordinate_names(dim: int) -> list[str]:
    return [f"x{i + 1}" for i in range(dim)]


def var(index: int, name: str = "") -> Var:
    return Var(index, name)
