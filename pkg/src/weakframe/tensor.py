"""Chart-level tensor calculus on batched local jets.

Every operation accepts fields either as field objects (evaluated at ``pt``)
or as already-evaluated :class:`~weakframe.fields.Jet` objects, and the
metric either as a :class:`~weakframe.fields.MetricField` or a prepared
:class:`Geometry`.  ``pt`` may be one point ``(dim,)`` or a batch ``(N, dim)``;
single-point calls return unbatched results.

Conventions: ``gamma[..., k, i, j]`` is the Christoffel symbol of the second
kind; the exterior derivative of a one-form carries a factor 1/2 and that of
a two-form a factor 1/3, so that ``d eta(X, Y) = 1/2 {X eta(Y) - Y eta(X) -
eta([X, Y])}``.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .fields import (
    EndomorphismField,
    Jet,
    MetricField,
    OneFormField,
    VectorField,
    along,
    apply,
    constant_vectors,
    inner,
    pair,
)
from .linalg import PIVOT_TOL, SingularMatrixError, gauss_jordan_inverse

__all__ = [
    "Geometry",
    "metric_inverse",
    "christoffel",
    "covariant_derivative_vector",
    "covariant_derivative_endomorphism",
    "lie_bracket",
    "lie_derivative",
    "exterior_derivative",
    "nijenhuis",
    "nijenhuis_nabla",
    "sectional_curvature",
    "riemann",
    "totally_geodesic_residual",
    "koszul_rhs",
]


class Geometry:
    """Metric data at a batch of points: ``g``, its partials, inverse and Christoffel symbols."""

    def __init__(self, g: MetricField | Jet, pts=None, curvature: bool = False):
        self.field = g if isinstance(g, EndomorphismField) else None
        if isinstance(g, Jet):
            self.metric = g
            self.pts = None if pts is None else np.atleast_2d(np.asarray(pts, dtype=float))
        else:
            self.pts = np.atleast_2d(np.asarray(pts, dtype=float))
            self.metric = g.jet(self.pts, order=2 if curvature else 1)
        try:
            self.ginv = gauss_jordan_inverse(self.metric.val, PIVOT_TOL)
        except SingularMatrixError as exc:
            if self.pts is not None and exc.index != ():
                exc.args = (f"{exc.args[0]} at point {list(self.pts[exc.index[0]])}",)
            raise
        dg = self.metric.der  # dg[..., i, j, c] = d_c g_ij
        # lowered symbols: gl[..., l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
        gl = 0.5 * (
            np.einsum("...jli->...lij", dg) + np.einsum("...ilj->...lij", dg) - np.einsum("...ijl->...lij", dg)
        )
        self._lowered = gl
        self.gamma = np.einsum("...kl,...lij->...kij", self.ginv, gl)
        self._dgamma = None

    @property
    def dim(self) -> int:
        return self.metric.val.shape[-1]

    @property
    def dgamma(self) -> np.ndarray:
        """``dgamma[..., k, i, j, c]`` = partial_c of Gamma^k_ij."""
        if self._dgamma is None:
            if self.metric.der2 is None:
                if self.field is None:
                    raise ValueError("curvature needs second metric derivatives")
                self.metric = self.field.jet(self.pts, order=2)
            dg = self.metric.der
            ddg = self.metric.der2  # ddg[..., i, j, a, b] = d_a d_b g_ij
            dginv = -np.einsum("...km,...mnc,...nl->...klc", self.ginv, dg, self.ginv)
            dgl = 0.5 * (
                np.einsum("...jlic->...lijc", ddg)
                + np.einsum("...iljc->...lijc", ddg)
                - np.einsum("...ijlc->...lijc", ddg)
            )
            self._dgamma = np.einsum("...klc,...lij->...kijc", dginv, self._lowered) + np.einsum(
                "...kl,...lijc->...kijc", self.ginv, dgl
            )
        return self._dgamma

    def flat(self, v: np.ndarray) -> np.ndarray:
        """Lower an index: ``g(v, .)``."""
        return np.einsum("...ij,...j->...i", self.metric.val, v)

    def sharp(self, w: np.ndarray) -> np.ndarray:
        """Raise an index: the vector ``v`` with ``g(v, .) = w``."""
        return np.einsum("...ij,...j->...i", self.ginv, w)


# --------------------------------------------------------------------------
# argument coercion
# --------------------------------------------------------------------------


def _pts(pt):
    return None if pt is None else np.atleast_2d(np.asarray(pt, dtype=float))


def _single(pt) -> bool:
    return pt is not None and np.ndim(pt) == 1


def _out(x, pt):
    return x[0] if _single(pt) else x


def _geom(g, pt) -> Geometry:
    if isinstance(g, Geometry):
        return g
    if pt is None:
        raise ValueError("a point is required to evaluate a metric field")
    return Geometry(g, _pts(pt))


def _vec(x, pt) -> Jet:
    if isinstance(x, Jet):
        return x
    if isinstance(x, (VectorField, OneFormField)):
        if pt is None:
            raise ValueError("a point is required to evaluate a field")
        return x.jet(_pts(pt))
    v = np.asarray(x, dtype=float)
    if pt is not None and v.ndim == 1:
        v = np.broadcast_to(v, _pts(pt).shape)
    return constant_vectors(v)


def _endo(t, pt) -> Jet:
    if isinstance(t, Jet):
        return t
    if isinstance(t, EndomorphismField):
        if pt is None:
            raise ValueError("a point is required to evaluate a field")
        return t.jet(_pts(pt))
    m = np.asarray(t, dtype=float)
    return Jet(m, np.zeros(m.shape + (m.shape[-1],)), 2)


# --------------------------------------------------------------------------
# jet-level kernels
# --------------------------------------------------------------------------


def bracket(x: Jet, y: Jet) -> Jet:
    """``[X, Y]`` (values only)."""
    if x.der is None or y.der is None:
        raise ValueError("Lie bracket needs derivatives of both fields")
    val = np.einsum("...a,...ka->...k", x.val, y.der) - np.einsum("...a,...ka->...k", y.val, x.der)
    return Jet(val, None, 1)


def cov(geo: Geometry, x: Jet | np.ndarray, y: Jet) -> np.ndarray:
    """``nabla_X Y`` (values); only the value of ``X`` enters."""
    xv = x.val if isinstance(x, Jet) else x
    if y.der is None:
        raise ValueError("covariant derivative needs derivatives of Y")
    return np.einsum("...ka,...a->...k", y.der, xv) + np.einsum("...kab,...a,...b->...k", geo.gamma, xv, y.val)


def cov_endo(geo: Geometry, t: Jet, x: Jet | np.ndarray, y: Jet) -> np.ndarray:
    """``(nabla_X T) Y = nabla_X (T Y) - T nabla_X Y``."""
    return cov(geo, x, apply(t, y)) - np.einsum("...kl,...l->...k", t.val, cov(geo, x, y))


def lie_endo(z: Jet, t: Jet, x: Jet) -> np.ndarray:
    """``(L_Z T) X = [Z, T X] - T [Z, X]``."""
    return bracket(z, apply(t, x)).val - np.einsum("...kl,...l->...k", t.val, bracket(z, x).val)


def lie_oneform(z: Jet, eta: Jet, x: Jet) -> np.ndarray:
    """``(L_Z eta) X = Z(eta(X)) - eta([Z, X])``."""
    return along(z, pair(eta, x)) - np.einsum("...k,...k->...", eta.val, bracket(z, x).val)


def lie_metric_bracket(geo: Geometry, z: Jet, x: Jet, y: Jet) -> np.ndarray:
    """``Z(g(X,Y)) - g([Z,X],Y) - g(X,[Z,Y])``."""
    g = geo.metric
    return (
        along(z, inner(g, x, y))
        - inner(g, bracket(z, x), y.values_only()).val
        - inner(g, x.values_only(), bracket(z, y)).val
    )


def lie_metric_nabla(geo: Geometry, z: Jet, x: Jet, y: Jet) -> np.ndarray:
    """``g(nabla_X Z, Y) + g(nabla_Y Z, X)``."""
    gv = geo.metric.val
    return np.einsum("...ij,...i,...j->...", gv, cov(geo, x, z), y.val) + np.einsum(
        "...ij,...i,...j->...", gv, cov(geo, y, z), x.val
    )


def d_oneform(eta: Jet, x: Jet, y: Jet) -> np.ndarray:
    """``d eta(X, Y)`` with the 1/2 normalisation."""
    return 0.5 * (
        along(x, pair(eta, y)) - along(y, pair(eta, x)) - np.einsum("...k,...k->...", eta.val, bracket(x, y).val)
    )


def d_twoform(form: Callable[[Jet, Jet], Jet], x: Jet, y: Jet, z: Jet) -> np.ndarray:
    """``d Phi(X, Y, Z)`` of a two-form given as ``form(A, B) -> scalar jet``; 1/3 normalisation."""
    xv, yv, zv = x.values_only(), y.values_only(), z.values_only()
    return (
        along(x, form(y, z))
        + along(y, form(z, x))
        + along(z, form(x, y))
        - form(bracket(x, y), zv).val
        - form(bracket(z, x), yv).val
        - form(bracket(y, z), xv).val
    ) / 3.0


def nijenhuis_bracket(t: Jet, x: Jet, y: Jet) -> np.ndarray:
    """``[T,T](X,Y) = T^2[X,Y] + [TX,TY] - T[TX,Y] - T[X,TY]``."""
    tx, ty = apply(t, x), apply(t, y)

    def tv(v):
        return np.einsum("...kl,...l->...k", t.val, v)

    return tv(tv(bracket(x, y).val)) + bracket(tx, ty).val - tv(bracket(tx, y).val) - tv(bracket(x, ty).val)


def nijenhuis_nabla_kernel(geo: Geometry, t: Jet, x: Jet, y: Jet) -> np.ndarray:
    """``(T nabla_Y T - nabla_{TY} T) X - (T nabla_X T - nabla_{TX} T) Y``."""
    tx, ty = apply(t, x).val, apply(t, y).val

    def tv(v):
        return np.einsum("...kl,...l->...k", t.val, v)

    return (
        tv(cov_endo(geo, t, y, x))
        - cov_endo(geo, t, ty, x)
        - tv(cov_endo(geo, t, x, y))
        + cov_endo(geo, t, tx, y)
    )


def riemann_tensor(geo: Geometry) -> np.ndarray:
    """``R[..., l, k, i, j]`` with ``R(d_i, d_j) d_k = R^l_kij d_l``."""
    G, dG = geo.gamma, geo.dgamma
    return (
        np.einsum("...ljki->...lkij", dG)
        - np.einsum("...likj->...lkij", dG)
        + np.einsum("...lim,...mjk->...lkij", G, G)
        - np.einsum("...ljm,...mik->...lkij", G, G)
    )


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------


def metric_inverse(g, pt) -> np.ndarray:
    """Inverse of the metric matrix at ``pt``."""
    return _out(_geom(g, pt).ginv, pt)


def christoffel(g, pt) -> np.ndarray:
    """Christoffel symbols ``Gamma^k_ij`` at ``pt``, indexed ``[k, i, j]``."""
    return _out(_geom(g, pt).gamma, pt)


def koszul_rhs(g, pt) -> np.ndarray:
    """Right side of the Koszul formula on coordinate fields: ``[i, j, k] -> 2 g(nabla_i d_j, d_k)``.

    Coordinate fields commute, so only the three derivative terms survive.
    """
    geo = _geom(g, pt)
    dg = geo.metric.der
    out = np.einsum("...jki->...ijk", dg) + np.einsum("...ikj->...ijk", dg) - np.einsum("...ijk->...ijk", dg)
    return _out(out, pt)


def covariant_derivative_vector(g, X, Y, pt=None) -> np.ndarray:
    """``(nabla_X Y)(pt)``."""
    return _out(cov(_geom(g, pt), _vec(X, pt), _vec(Y, pt)), pt)


def covariant_derivative_endomorphism(g, T, X, Y, pt=None) -> np.ndarray:
    """``(nabla_X T) Y`` at ``pt``."""
    return _out(cov_endo(_geom(g, pt), _endo(T, pt), _vec(X, pt), _vec(Y, pt)), pt)


def lie_bracket(X, Y, pt=None) -> np.ndarray:
    """``[X, Y]^k = X^a d_a Y^k - Y^a d_a X^k``."""
    return _out(bracket(_vec(X, pt), _vec(Y, pt)).val, pt)


def lie_derivative(kind: str, Z, obj, args: Sequence, pt=None, g=None, route: str = "nabla"):
    """Lie derivative along ``Z``.

    ``kind`` is ``"endomorphism"`` (``(L_Z T) X``, args ``[X]``), ``"oneform"``
    (``(L_Z eta) X``, args ``[X]``) or ``"metric"`` (``(L_Z g)(X, Y)``, args
    ``[X, Y]``; ``obj`` is the metric).  For the metric, ``route`` selects the
    covariant form ``g(nabla_X Z, Y) + g(nabla_Y Z, X)`` or the bracket form.
    """
    z = _vec(Z, pt)
    if kind == "endomorphism":
        return _out(lie_endo(z, _endo(obj, pt), _vec(args[0], pt)), pt)
    if kind == "oneform":
        return _out(lie_oneform(z, _vec(obj, pt), _vec(args[0], pt)), pt)
    if kind == "metric":
        geo = _geom(obj if g is None else g, pt)
        x, y = _vec(args[0], pt), _vec(args[1], pt)
        if route == "bracket":
            return _out(lie_metric_bracket(geo, z, x, y), pt)
        if route == "nabla":
            return _out(lie_metric_nabla(geo, z, x, y), pt)
        raise ValueError(f"unknown route {route!r}")
    raise ValueError(f"unknown Lie derivative kind {kind!r}")


def exterior_derivative(kind: str, form, vectors: Sequence, pt=None):
    """``d eta(X, Y)`` (``kind="oneform"``) or ``d Phi(X, Y, Z)`` (``kind="twoform"``).

    A two-form is passed as a callable ``form(A, B) -> scalar Jet`` on vector jets.
    """
    vs = [_vec(v, pt) for v in vectors]
    if kind == "oneform":
        if len(vs) != 2:
            raise ValueError("d of a one-form takes two vectors")
        return _out(d_oneform(_vec(form, pt), *vs), pt)
    if kind == "twoform":
        if len(vs) != 3:
            raise ValueError("d of a two-form takes three vectors")
        return _out(d_twoform(form, *vs), pt)
    raise ValueError(f"unknown form kind {kind!r}")


def nijenhuis(T, X, Y, pt=None) -> np.ndarray:
    """Nijenhuis torsion ``[T,T](X,Y)`` from Lie brackets."""
    return _out(nijenhuis_bracket(_endo(T, pt), _vec(X, pt), _vec(Y, pt)), pt)


def nijenhuis_nabla(g, T, X, Y, pt=None) -> np.ndarray:
    """Nijenhuis torsion through the Levi-Civita connection of ``g``."""
    return _out(nijenhuis_nabla_kernel(_geom(g, pt), _endo(T, pt), _vec(X, pt), _vec(Y, pt)), pt)


def riemann(g, pt) -> np.ndarray:
    geo = g if isinstance(g, Geometry) else Geometry(g, _pts(pt), curvature=True)
    return _out(riemann_tensor(geo), pt)


def sectional_curvature(g, X, Y, pt=None, degenerate_tol: float = 1e-10) -> np.ndarray | float:
    """``K = g(R(X,Y)Y, X) / (|X|^2 |Y|^2 - g(X,Y)^2)``."""
    geo = g if isinstance(g, Geometry) else Geometry(g, _pts(pt), curvature=True)
    xv, yv = _vec(X, pt).val, _vec(Y, pt).val
    R = riemann_tensor(geo)
    gv = geo.metric.val
    ryy = np.einsum("...lkij,...i,...j,...k->...l", R, xv, yv, yv)
    num = np.einsum("...ab,...a,...b->...", gv, ryy, xv)
    gxx = np.einsum("...ab,...a,...b->...", gv, xv, xv)
    gyy = np.einsum("...ab,...a,...b->...", gv, yv, yv)
    gxy = np.einsum("...ab,...a,...b->...", gv, xv, yv)
    den = gxx * gyy - gxy ** 2
    if np.any(np.abs(den) < degenerate_tol):
        raise ValueError("degenerate plane: X and Y are (nearly) linearly dependent")
    k = num / den
    if _single(pt):
        return float(k[0])
    return k


def totally_geodesic_residual(g, span: Sequence, orth: Sequence, samples) -> float:
    """``max |g(nabla_X Y + nabla_Y X, Z)|`` over ``X, Y`` in ``span``, ``Z`` in ``orth``.

    ``span`` fields must lie in the distribution and ``orth`` fields in its
    orthogonal complement.  Zero means the distribution is totally geodesic.
    """
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    geo = _geom(g, pts)
    sj = [_vec(x, pts) for x in span]
    oj = [_vec(z, pts) for z in orth]
    worst = 0.0
    for a, x in enumerate(sj):
        for y in sj[a:]:
            s = cov(geo, x, y) + cov(geo, y, x)
            for z in oj:
                r = np.abs(np.einsum("...ij,...i,...j->...", geo.metric.val, s, z.val))
                worst = max(worst, float(np.max(r)))
    return worst
