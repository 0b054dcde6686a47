"""Framed metric weak f-structures: axioms, derived tensors, classification.

A structure is the tuple ``(f, Q, xi_1..xi_p, eta^1..eta^p, g)`` on a chart of
dimension ``2n + p``.  :class:`LocalStructure` holds the tuple evaluated at a
batch of points and implements every derived tensor on jets; the module-level
functions wrap it for single fields and points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expr import Const, Expr
from .fields import (
    EndomorphismField,
    Jet,
    MetricField,
    OneFormField,
    VectorField,
    along,
    apply,
    inner,
    pair,
    scale,
)
from .linalg import PIVOT_TOL, cholesky_pivots, min_abs_pivot
from .sampling import SampleSet, sample_points
from .tensor import (
    Geometry,
    _out,
    _pts,
    _vec,
    bracket,
    cov,
    cov_endo,
    d_oneform,
    d_twoform,
    lie_endo,
    lie_metric_bracket,
    lie_metric_nabla,
    lie_oneform,
    nijenhuis_bracket,
    nijenhuis_nabla_kernel,
)

DEFAULT_TOL = 1e-9

__all__ = [
    "FramedWeakFStructure",
    "LocalStructure",
    "VerificationReport",
    "StructureClass",
    "InvalidStructureError",
    "Sweep",
    "validate_axioms",
    "fundamental_form",
    "N1",
    "N2",
    "N3",
    "N4",
    "N5",
    "h_tensor",
    "h_adjoint",
    "classify",
    "product_extension",
    "ProductExtension",
    "eq",
]


class InvalidStructureError(ValueError):
    """The tuple fails its axioms, so class predicates are meaningless."""

    def __init__(self, message: str, reports=()):
        self.reports = list(reports)
        super().__init__(message)


# --------------------------------------------------------------------------
# the structure
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FramedWeakFStructure:
    n: int
    p: int
    f: EndomorphismField
    Q: EndomorphismField
    xi: tuple
    eta: tuple
    g: MetricField
    box: np.ndarray
    coords: tuple = ()
    name: str = ""
    periodic: tuple = ()

    def __post_init__(self):
        d = 2 * self.n + self.p
        if self.n < 1 or self.p < 1:
            raise ValueError("need n >= 1 and p >= 1")
        if self.f.dim != d or self.Q.dim != d or self.g.dim != d:
            raise ValueError(f"f, Q and g must be {d}x{d}")
        if len(self.xi) != self.p or len(self.eta) != self.p:
            raise ValueError(f"need exactly p={self.p} vector fields xi and one-forms eta")
        if any(v.dim != d for v in self.xi) or any(w.dim != d for w in self.eta):
            raise ValueError(f"xi and eta components must have length {d}")

    @property
    def dim(self) -> int:
        return 2 * self.n + self.p

    @property
    def Q_tilde(self) -> EndomorphismField:
        """``Q - id``."""
        rows = self.Q.components
        return EndomorphismField(
            tuple(tuple(e - (1.0 if i == j else 0.0) for j, e in enumerate(r)) for i, r in enumerate(rows))
        )

    @property
    def xi_bar(self) -> VectorField:
        out = self.xi[0]
        for v in self.xi[1:]:
            out = out + v
        return out

    @property
    def eta_bar(self) -> OneFormField:
        comps = [sum((w.components[k] for w in self.eta[1:]), self.eta[0].components[k]) for k in range(self.dim)]
        return OneFormField(tuple(comps))

    @property
    def top_projection(self) -> EndomorphismField:
        """``X -> X - sum_i eta^i(X) xi_i`` as a (1,1) field."""
        d = self.dim
        rows = []
        for k in range(d):
            row = []
            for l in range(d):
                e: Expr = Const(1.0 if k == l else 0.0)
                for v, w in zip(self.xi, self.eta):
                    e = e - v.components[k] * w.components[l]
                row.append(e)
            rows.append(tuple(row))
        return EndomorphismField(tuple(rows))

    def top_frame(self) -> list[VectorField]:
        """Projections of the coordinate fields onto ``f(TM)``; they span it."""
        P = self.top_projection
        return [VectorField(tuple(P.components[k][a] for k in range(self.dim))) for a in range(self.dim)]

    def at(self, pts) -> "LocalStructure":
        return LocalStructure(self, pts)

    def samples(self, n: int, seed: int = 42) -> SampleSet:
        return sample_points(self.box, n, seed)


class LocalStructure:
    """The tuple evaluated (values and first partials) at a batch of points."""

    def __init__(self, S: FramedWeakFStructure, pts):
        self.S = S
        self.pts = _pts(pts)
        d = S.dim
        self.dim = d
        self.f = S.f.jet(self.pts)
        self.Q = S.Q.jet(self.pts)
        self.Qt = Jet(self.Q.val - np.eye(d), self.Q.der, 2)
        self.xi = [v.jet(self.pts) for v in S.xi]
        self.eta = [w.jet(self.pts) for w in S.eta]
        self._geo = None

    @property
    def geo(self) -> Geometry:
        if self._geo is None:
            self._geo = Geometry(self.S.g, self.pts)
        return self._geo

    @property
    def g(self) -> Jet:
        if self._geo is None:
            return self.S.g.jet(self.pts, order=1)
        return self._geo.metric

    # -- pointwise algebra ---------------------------------------------------

    def fv(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("...kl,...l->...k", self.f.val, v)

    def gv(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("...ij,...i,...j->...", self.geo.metric.val, u, v)

    def eta_val(self, i: int, v: np.ndarray) -> np.ndarray:
        return np.einsum("...k,...k->...", self.eta[i].val, v)

    # -- derived fields ------------------------------------------------------

    def fX(self, X: Jet) -> Jet:
        return apply(self.f, X)

    def phi(self, X: Jet, Y: Jet) -> Jet:
        """``Phi(X, Y) = g(X, f Y)``."""
        return inner(self.geo.metric, X, apply(self.f, Y))

    def top(self, X: Jet) -> Jet:
        out = X
        for x, w in zip(self.xi, self.eta):
            out = out - scale(pair(w, X), x)
        return out

    def perp(self, X: Jet) -> Jet:
        return X - self.top(X)

    def d_eta(self, i: int, X: Jet, Y: Jet) -> np.ndarray:
        return d_oneform(self.eta[i], X, Y)

    def d_phi(self, X: Jet, Y: Jet, Z: Jet) -> np.ndarray:
        return d_twoform(self.phi, X, Y, Z)

    def nabla(self, X, Y: Jet) -> np.ndarray:
        return cov(self.geo, X, Y)

    def nabla_f(self, X, Y: Jet) -> np.ndarray:
        """``(nabla_X f) Y``."""
        return cov_endo(self.geo, self.f, X, Y)

    def nijenhuis(self, X: Jet, Y: Jet) -> np.ndarray:
        return nijenhuis_bracket(self.f, X, Y)

    def nijenhuis_nabla(self, X: Jet, Y: Jet) -> np.ndarray:
        return nijenhuis_nabla_kernel(self.geo, self.f, X, Y)

    def N1_terms(self, X: Jet, Y: Jet) -> tuple[np.ndarray, np.ndarray]:
        nij = self.nijenhuis(X, Y)
        corr = sum(2.0 * self.d_eta(i, X, Y)[..., None] * self.xi[i].val for i in range(self.S.p))
        return nij, corr

    def N1(self, X: Jet, Y: Jet) -> np.ndarray:
        nij, corr = self.N1_terms(X, Y)
        return nij + corr

    def N2(self, i: int, X: Jet, Y: Jet) -> np.ndarray:
        return 2.0 * self.d_eta(i, self.fX(X), Y) - 2.0 * self.d_eta(i, self.fX(Y), X)

    def N2_lie(self, i: int, X: Jet, Y: Jet) -> np.ndarray:
        e = self.eta[i]
        return lie_oneform(self.fX(X), e, Y) - lie_oneform(self.fX(Y), e, X)

    def N3(self, i: int, X: Jet) -> np.ndarray:
        return lie_endo(self.xi[i], self.f, X)

    def N3_nabla(self, i: int, X: Jet) -> np.ndarray:
        """``(nabla_xi f) X - nabla_{fX} xi + f nabla_X xi``."""
        x = self.xi[i]
        return self.nabla_f(x, X) - self.nabla(self.fX(X), x) + self.fv(self.nabla(X, x))

    def N4(self, i: int, j: int, X: Jet) -> np.ndarray:
        return 2.0 * self.d_eta(j, self.xi[i], X)

    def N4_lie(self, i: int, j: int, X: Jet) -> np.ndarray:
        return lie_oneform(self.xi[i], self.eta[j], X)

    def N5_terms(self, X: Jet, Y: Jet, Z: Jet, five_term: bool = False) -> list[np.ndarray]:
        """Summands of ``N5(X, Y, Z)``.

        The last is ``X(g(fY, Q~Z))``; without it the sum is not tensorial in
        ``Y`` (it changes by ``-X(phi) g(fY, Q~Z)`` under ``Y -> phi Y``).
        ``five_term=True`` drops it.
        """
        g = self.geo.metric
        f, Qt = self.f, self.Qt
        Xt = self.top(X)
        QY, QZ, QX = apply(Qt, Y), apply(Qt, Z), apply(Qt, X)
        fY, fZ = apply(f, Y), apply(f, Z)
        t1 = along(fZ, inner(g, Xt, QY))
        t2 = -along(fY, inner(g, Xt, QZ))
        t3 = inner(g, self.top(bracket(X, fZ)), QY.values_only()).val
        t4 = -inner(g, self.top(bracket(X, fY)), QZ.values_only()).val
        w = self.top(bracket(Y, fZ)).val - self.top(bracket(Z, fY)).val - self.fv(bracket(Y, Z).val)
        t5 = np.einsum("...ij,...i,...j->...", g.val, w, QX.val)
        if five_term:
            return [t1, t2, t3, t4, t5]
        return [t1, t2, t3, t4, t5, along(X, inner(g, fY, QZ))]

    def N5(self, X: Jet, Y: Jet, Z: Jet, five_term: bool = False) -> np.ndarray:
        return sum(self.N5_terms(X, Y, Z, five_term))

    def coordinate_jets(self, batch_ndim: int = 0) -> Jet:
        """Coordinate fields on a leading axis, broadcastable against ``batch_ndim`` frame axes."""
        d = self.dim
        shape = (d,) + (1,) * batch_ndim + (1, d)
        v = np.eye(d).reshape(shape)
        return Jet(v, np.zeros(shape + (d,)), 1)

    def covector(self, fn: Callable[[Jet], np.ndarray], batch_ndim: int = 0) -> np.ndarray:
        """Components ``w_c = fn(d_c)`` of a linear form, on the last axis."""
        return np.moveaxis(fn(self.coordinate_jets(batch_ndim)), 0, -1)

    def endo_matrix(self, fn: Callable[[Jet], np.ndarray]) -> np.ndarray:
        """Matrix ``M[..., k, l]`` of a tensorial map ``X -> fn(X)`` at each point."""
        return np.moveaxis(fn(self.coordinate_jets(0)), 0, -1)

    def h(self, i: int, X: Jet) -> np.ndarray:
        return 0.5 * self.N3(i, X)

    def h_matrix(self, i: int) -> np.ndarray:
        return self.endo_matrix(lambda E: self.h(i, E))

    def h_adjoint_matrix(self, i: int) -> np.ndarray:
        H = self.h_matrix(i)
        g, gi = self.geo.metric.val, self.geo.ginv
        return np.einsum("...ka,...ba,...bl->...kl", gi, H, g)

    def lie_g(self, i: int, X: Jet, Y: Jet, route: str = "nabla") -> np.ndarray:
        x = self.xi[i]
        if route == "nabla":
            return lie_metric_nabla(self.geo, x, X, Y)
        return lie_metric_bracket(self.geo, x, X, Y)

    def lie_Qt(self, i: int, X: Jet) -> np.ndarray:
        return lie_endo(self.xi[i], self.Qt, X)


# --------------------------------------------------------------------------
# reports and sweeps
# --------------------------------------------------------------------------


@dataclass
class VerificationReport:
    """Max scaled residual of one identity over all samples and frame choices."""

    identity: str
    samples: int
    max_residual: float | None
    tolerance: float
    passed: bool
    worst_point: list | None
    status: str = "pass"  # "pass", "fail" or "vacuous"
    note: str = ""

    def to_dict(self) -> dict:
        d = {
            "id": self.identity,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "worst_point": self.worst_point,
            "status": self.status,
        }
        if self.note:
            d["note"] = self.note
        return d


def eq(lhs, rhs, *terms, axes: int = 0):
    """Residual pair ``(|lhs - rhs|, max(1, |operands|))`` reduced over ``axes`` trailing tensor axes."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    diff = np.abs(lhs - rhs)
    mags = [np.abs(lhs), np.abs(rhs)] + [np.abs(np.asarray(t, dtype=float)) for t in terms]
    if axes:
        red = tuple(range(-axes, 0))
        diff = diff.max(axis=red)
        mags = [m.max(axis=red) if m.ndim >= axes else m for m in mags]
    sc = np.ones_like(diff)
    for m in mags:
        sc = np.maximum(sc, m)
    return diff, sc


def zero(val, *terms, axes: int = 0):
    return eq(val, 0.0, *terms, axes=axes)


def _chunk_size(dim: int, slots: int) -> int:
    e = dim + 4
    budget = 400_000
    per_point = (e ** slots) * dim * dim
    return int(max(1, min(256, budget // max(per_point, 1))))


class Sweep:
    """Evaluates residual functions over a sample set and random test frames.

    Identity functions are called as ``fn(L, X1, ..., Xk)`` with ``L`` a
    :class:`LocalStructure` for a chunk of points and ``Xs`` constant frame
    jets occupying separate broadcast axes; they return a residual pair from
    :func:`eq` (or a list of them).
    """

    def __init__(self, S: FramedWeakFStructure, samples: SampleSet, tol: float = DEFAULT_TOL):
        self.S = S
        self.samples = samples
        self.tol = tol
        self._locals: dict = {}
        self._class = None

    @property
    def N(self) -> int:
        return len(self.samples)

    def local(self, lo: int, hi: int) -> LocalStructure:
        key = (lo, hi)
        if key not in self._locals:
            self._locals[key] = LocalStructure(self.S, self.samples.points[lo:hi])
        return self._locals[key]

    def _chunks(self, slots: int):
        size = _chunk_size(self.S.dim, slots)
        # chunk boundaries are shared across calls so locals are reused
        size = 1 << int(np.floor(np.log2(size)))
        for lo in range(0, self.N, size):
            yield lo, min(lo + size, self.N)

    def measure(self, fn, slots: int) -> tuple[float, int]:
        worst, where = -1.0, 0
        for lo, hi in self._chunks(slots):
            L = self.local(lo, hi)
            frame = self.samples.frame(lo, hi)  # (E, n, d)
            E, n, d = frame.shape
            jets = []
            for s in range(slots):
                shape = [1] * slots + [n, d]
                shape[s] = E
                v = frame.reshape(shape)
                jets.append(Jet(v, np.broadcast_to(0.0, tuple(shape) + (d,)), 1))
            out = fn(L, *jets)
            if isinstance(out, tuple):
                out = [out]
            full = (E,) * slots + (n,)
            for diff, sc in out:
                r = np.broadcast_to(np.asarray(diff) / np.asarray(sc), full)
                r = np.where(np.isfinite(r), r, np.inf)
                k = int(np.argmax(r))
                if r.flat[k] > worst:
                    worst = float(r.flat[k])
                    where = lo + int(np.unravel_index(k, full)[-1])
        return max(worst, 0.0), where

    def report(self, identity: str, fn, slots: int, tol: float | None = None, gate: bool = True, note: str = "") -> VerificationReport:
        tol = self.tol if tol is None else tol
        if not gate:
            return VerificationReport(identity, self.N, None, tol, True, None, "vacuous", note)
        val, where = self.measure(fn, slots)
        ok = val < tol
        return VerificationReport(
            identity, self.N, val, tol, ok, [float(x) for x in self.samples.points[where]], "pass" if ok else "fail", note
        )

    @property
    def classification(self) -> "StructureClass":
        if self._class is None:
            self._class = _classify_sweep(self)
        return self._class


# --------------------------------------------------------------------------
# axioms
# --------------------------------------------------------------------------


def _pointwise(sw: Sweep, identity: str, fn, note: str = "") -> VerificationReport:
    """Report for a check computed from pointwise values only (no metric inverse needed)."""
    return sw.report(identity, lambda L: fn(L), 0, note=note)


def _axiom_fns(S: FramedWeakFStructure):
    d, p, n = S.dim, S.p, S.n
    I = np.eye(d)

    def mats(L):
        f, Q = L.f.val, L.Q.val
        g = L.g.val
        xi = np.stack([x.val for x in L.xi], axis=-2)  # (..., p, d)
        eta = np.stack([w.val for w in L.eta], axis=-2)
        return f, Q, g, xi, eta

    def frame_sum(xi, eta):  # sum_i xi_i (x) eta^i as a matrix
        return np.einsum("...ik,...il->...kl", xi, eta)

    def fQ(L):
        f, Q, *_ = mats(L)
        f3 = f @ f @ f
        return eq(f3, -(f @ Q), f3, axes=2)

    def Q_xi(L):
        _, Q, _, xi, _ = mats(L)
        return eq(np.einsum("...kl,...il->...ik", Q, xi), xi, axes=2)

    def f2_frame(L):
        f, Q, _, xi, eta = mats(L)
        return eq(f @ f, -Q + frame_sum(xi, eta), axes=2)

    def eta_xi(L):
        *_, xi, eta = mats(L)
        return eq(np.einsum("...ik,...jk->...ij", eta, xi), np.eye(p), axes=2)

    def compat(L):
        f, Q, g, xi, eta = mats(L)
        lhs = np.swapaxes(f, -1, -2) @ g @ f
        etaQ = eta @ Q
        rhs = g @ Q - np.einsum("...ik,...il->...kl", eta, etaQ)
        return eq(lhs, rhs, axes=2)

    def rank(L):
        f = L.f.val
        s = np.linalg.svd(f, compute_uv=False)
        s0 = np.maximum(s[..., 0], 1e-300)
        tail = s[..., 2 * n] / s0 if 2 * n < d else np.zeros(s.shape[:-1])
        lost = (s[..., 2 * n - 1] / s0 < 1e-8).astype(float)
        return np.maximum(tail, lost), np.ones_like(tail)

    def Q_nonsingular(L):
        piv = min_abs_pivot(L.Q.val)
        return (piv < PIVOT_TOL).astype(float), np.ones_like(piv)

    def g_sym(L):
        g = L.g.val
        return eq(g, np.swapaxes(g, -1, -2), axes=2)

    def g_pos(L):
        piv = cholesky_pivots(L.g.val).min(axis=-1)
        return (piv <= PIVOT_TOL).astype(float), np.ones_like(piv)

    def f_xi(L):
        f, _, _, xi, _ = mats(L)
        return zero(np.einsum("...kl,...il->...ik", f, xi), axes=2)

    def eta_f(L):
        f, _, _, _, eta = mats(L)
        return zero(eta @ f, axes=2)

    def Qf(L):
        f, Q, *_ = mats(L)
        return eq(Q @ f, f @ Q, axes=2)

    def f_skew(L):
        f, _, g, _, _ = mats(L)
        a = np.swapaxes(f, -1, -2) @ g
        return eq(a, -(g @ f), axes=2)

    def Q_self(L):
        _, Q, g, _, _ = mats(L)
        return eq(np.swapaxes(Q, -1, -2) @ g, g @ Q, axes=2)

    def g_xi(L):
        _, _, g, xi, eta = mats(L)
        return eq(np.einsum("...kl,...il->...ik", g, xi), eta, axes=2)

    def XZ(L):
        f, Q, g, xi, eta = mats(L)
        P = I - frame_sum(xi, eta)
        ft = np.swapaxes(f, -1, -2)
        rhs = ft @ g @ f + np.einsum("...ik,...il->...kl", eta, eta) - np.swapaxes(P, -1, -2) @ g @ (Q - I)
        return eq(g, rhs, axes=2)

    def f_inv(L):
        f, _, _, xi, eta = mats(L)
        P = I - frame_sum(xi, eta)
        return zero(eta @ f @ P, axes=2)

    return [
        ("fQ", fQ),
        ("Q-xi", Q_xi),
        ("f2-frame", f2_frame),
        ("eta-xi", eta_xi),
        ("compatible-metric", compat),
        ("rank-f", rank),
        ("Q-nonsingular", Q_nonsingular),
        ("metric-symmetric", g_sym),
        ("metric-positive", g_pos),
        ("f-xi", f_xi),
        ("eta-f", eta_f),
        ("Q-f-commute", Qf),
        ("f-skew", f_skew),
        ("Q-self-adjoint", Q_self),
        ("g-xi-eta", g_xi),
        ("XZ-identity", XZ),
        ("f-invariance", f_inv),
    ]


def validate_axioms(S: FramedWeakFStructure, samples=None, tol: float = DEFAULT_TOL, sweep: Sweep | None = None) -> list[VerificationReport]:
    """One report per axiom or algebraic consequence, on the coordinate frame at each sample.

    ``samples`` is a :class:`SampleSet`, an ``(N, dim)`` array or a sample count.
    """
    sw = sweep or Sweep(S, _as_samples(S, samples), tol)
    return [_pointwise(sw, name, fn) for name, fn in _axiom_fns(S)]


def _as_samples(S: FramedWeakFStructure, samples) -> SampleSet:
    if samples is None:
        return S.samples(100)
    if isinstance(samples, SampleSet):
        return samples
    if isinstance(samples, (int, np.integer)):
        return S.samples(int(samples))
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    combos = sample_points(S.box, len(pts)).combos
    return SampleSet(pts, combos)


# --------------------------------------------------------------------------
# single-point wrappers
# --------------------------------------------------------------------------


def fundamental_form(S: FramedWeakFStructure, X, Y, pt):
    """``Phi(X, Y) = g(X, f Y)``."""
    L = S.at(pt)
    return _out(L.phi(_vec(X, pt), _vec(Y, pt)).val, pt)


def N1(S, X, Y, pt):
    """``[f,f](X,Y) + 2 sum_i d eta^i(X,Y) xi_i``."""
    L = S.at(pt)
    return _out(L.N1(_vec(X, pt), _vec(Y, pt)), pt)


def N2(S, i, X, Y, pt):
    L = S.at(pt)
    return _out(L.N2(i, _vec(X, pt), _vec(Y, pt)), pt)


def N3(S, i, X, pt):
    L = S.at(pt)
    return _out(L.N3(i, _vec(X, pt)), pt)


def N4(S, i, j, X, pt):
    L = S.at(pt)
    return _out(L.N4(i, j, _vec(X, pt)), pt)


def N5(S, X, Y, Z, pt):
    L = S.at(pt)
    return _out(L.N5(_vec(X, pt), _vec(Y, pt), _vec(Z, pt)), pt)


def h_tensor(S, i, X, pt):
    """``h_i X = 1/2 (L_{xi_i} f) X``."""
    L = S.at(pt)
    return _out(L.h(i, _vec(X, pt)), pt)


def h_adjoint(S, i, X, pt):
    """``h_i^* X`` defined by ``g(h_i^* X, Y) = g(X, h_i Y)``."""
    L = S.at(pt)
    x = _vec(X, pt).val
    return _out(np.einsum("...kl,...l->...k", L.h_adjoint_matrix(i), x), pt)


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


@dataclass
class StructureClass:
    valid_metric_weak_f: bool
    normal: bool
    weak_K: bool
    weak_almost_S: bool
    weak_S: bool
    weak_almost_C: bool
    weak_C: bool
    residuals: dict = field(default_factory=dict)

    FLAGS = ("valid_metric_weak_f", "normal", "weak_K", "weak_almost_S", "weak_S", "weak_almost_C", "weak_C")

    def flags(self) -> dict:
        return {k: getattr(self, k) for k in self.FLAGS}

    def describe(self) -> str:
        if not self.valid_metric_weak_f:
            return "not a valid metric weak f-structure"
        parts = ["valid metric weak f-structure", "normal" if self.normal else "not normal"]
        names = [
            ("weak_S", "weak S-structure"),
            ("weak_C", "weak C-structure"),
            ("weak_K", "weak K-structure"),
            ("weak_almost_S", "weak almost S-structure"),
            ("weak_almost_C", "weak almost C-structure"),
        ]
        parts += [label for key, label in names if getattr(self, key)]
        return "; ".join(parts)

    def to_dict(self) -> dict:
        return {**self.flags(), "residuals": dict(self.residuals)}


def _class_residuals(sw: Sweep) -> dict:
    p = sw.S.p

    def normal(L, X, Y):
        nij, corr = L.N1_terms(X, Y)
        return zero(nij + corr, nij, corr, axes=1)

    def dphi(L, X, Y, Z):
        return zero(L.d_phi(X, Y, Z))

    def deta_phi(L, X, Y):
        ph = L.phi(X, Y).val
        return [eq(L.d_eta(i, X, Y), ph) for i in range(p)]

    def deta(L, X, Y):
        return [zero(L.d_eta(i, X, Y)) for i in range(p)]

    return {
        "N1": sw.measure(normal, 2)[0],
        "d_Phi": sw.measure(dphi, 3)[0],
        "d_eta_minus_Phi": sw.measure(deta_phi, 2)[0],
        "d_eta": sw.measure(deta, 2)[0],
    }


def _classify_sweep(sw: Sweep, axioms: list | None = None) -> StructureClass:
    axioms = axioms if axioms is not None else validate_axioms(sw.S, sweep=sw)
    bad = [r for r in axioms if not r.passed]
    if bad:
        raise InvalidStructureError(
            "axioms fail: " + ", ".join(f"{r.identity} ({r.max_residual:.3g})" for r in bad), axioms
        )
    res = _class_residuals(sw)
    tol = sw.tol
    normal = res["N1"] < tol
    closed = res["d_Phi"] < tol
    almost_S = res["d_eta_minus_Phi"] < tol
    almost_C = closed and res["d_eta"] < tol
    return StructureClass(
        valid_metric_weak_f=True,
        normal=normal,
        weak_K=normal and closed,
        weak_almost_S=almost_S,
        weak_S=almost_S and normal and closed,
        weak_almost_C=almost_C,
        weak_C=almost_C and normal,
        residuals=res,
    )


def classify(S: FramedWeakFStructure, samples=None, tol: float = DEFAULT_TOL) -> StructureClass:
    """Class flags from residuals; raises :class:`InvalidStructureError` if the axioms fail."""
    sw = Sweep(S, _as_samples(S, samples), tol)
    return sw.classification


# --------------------------------------------------------------------------
# product extension
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductExtension:
    """``(f_bar, Q_bar)`` on the chart of ``M x R^p`` (extra coordinates last)."""

    base: FramedWeakFStructure
    f_bar: EndomorphismField
    Q_bar: EndomorphismField

    @property
    def dim(self) -> int:
        return self.f_bar.dim

    def lift_points(self, pts) -> np.ndarray:
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.concatenate([p, np.zeros((p.shape[0], self.base.p))], axis=1)

    def square_residual(self, pts) -> float:
        """``max |f_bar^2 + Q_bar|`` at the lifted points."""
        P = self.lift_points(pts)
        F = self.f_bar.jet(P).val
        Qb = self.Q_bar.jet(P).val
        return float(np.max(np.abs(F @ F + Qb)))

    def nijenhuis_residual(self, pts) -> float:
        """``max |[f_bar, f_bar](d_a, d_b)|`` over coordinate pairs at the lifted points."""
        P = self.lift_points(pts)
        D = self.dim
        F = self.f_bar.jet(P)
        e = np.eye(D)
        X = Jet(e[:, None, None, :], np.zeros((D, 1, 1, D, D)), 1)
        Y = Jet(e[None, :, None, :], np.zeros((1, D, 1, D, D)), 1)
        return float(np.max(np.abs(nijenhuis_bracket(F, X, Y))))


def product_extension(S: FramedWeakFStructure) -> ProductExtension:
    """Block fields ``f_bar(X, a) = (fX - sum a^i xi_i, sum eta^j(X) d_j)`` and ``Q_bar = Q (+) id``."""
    d, p = S.dim, S.p
    zero_e = Const(0.0)
    F = [[zero_e] * (d + p) for _ in range(d + p)]
    Qb = [[zero_e] * (d + p) for _ in range(d + p)]
    for k in range(d):
        for l in range(d):
            F[k][l] = S.f.components[k][l]
            Qb[k][l] = S.Q.components[k][l]
        for i in range(p):
            F[k][d + i] = -S.xi[i].components[k]
    for j in range(p):
        for l in range(d):
            F[d + j][l] = S.eta[j].components[l]
        Qb[d + j][d + j] = Const(1.0)
    return ProductExtension(
        S,
        EndomorphismField(tuple(tuple(r) for r in F)),
        EndomorphismField(tuple(tuple(r) for r in Qb)),
    )
