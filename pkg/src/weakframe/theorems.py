"""Theorem checks: conclusion residuals on structures meeting the hypotheses.

Each check is a list of identities.  An identity carries the class flag it
needs (``requires``); when the structure does not have that flag the identity
is reported as ``vacuous`` and does not count towards the verdict.  Identity
functions follow the :class:`~weakframe.structure.Sweep` calling convention:
``fn(L, X1, ..., Xk)`` returns residual pairs from :func:`eq`.

Check ids: ``master-3.1``, ``normal-2.1``, ``weak-K``, ``almost-S``,
``h-identities``, ``weak-S``, ``weak-C``, ``parallel-f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fields import Jet, apply
from .structure import (
    DEFAULT_TOL,
    FramedWeakFStructure,
    LocalStructure,
    Sweep,
    VerificationReport,
    _as_samples,
    eq,
    zero,
)
from .tensor import bracket, riemann_tensor

__all__ = [
    "CHECK_IDS",
    "Identity",
    "TheoremCheck",
    "CheckResult",
    "get_check",
    "run_check",
    "run_checks",
    "verify_master_formula",
    "verify_normal_consequences",
    "verify_weak_K",
    "verify_almost_S",
    "verify_h_identities",
    "verify_weak_S",
    "verify_weak_C",
    "verify_parallel_f",
]

CHECK_IDS = ("master-3.1", "normal-2.1", "weak-K", "almost-S", "h-identities", "weak-S", "weak-C", "parallel-f")


@dataclass(frozen=True)
class Identity:
    """One residual computation.

    ``kind`` is ``"identity"`` (counts towards the verdict), ``"probe"``
    (two residuals that must vanish together; ``fn`` returns both) or
    ``"hypothesis"`` (measured, never counted).
    """

    id: str
    fn: Callable
    slots: int
    requires: str | None = None
    kind: str = "identity"
    note: str = ""
    min_p: int = 1


@dataclass
class CheckResult:
    check_id: str
    hypothesis_status: str  # "satisfied", "partial" or "vacuous"
    reports: list

    @property
    def counted(self) -> list:
        return [r for r in self.reports if r.status in ("pass", "fail")]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.counted)

    def report(self, identity: str) -> VerificationReport:
        for r in self.reports:
            if r.identity == identity:
                return r
        raise KeyError(identity)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "hypothesis_status": self.hypothesis_status,
            "identities": [r.to_dict() for r in self.reports],
        }


@dataclass
class TheoremCheck:
    id: str
    title: str
    identities: list = field(default_factory=list)
    # evaluated before any identity; a failed pre-gate makes every gated identity vacuous
    pre_gate: Callable | None = None

    @property
    def hypotheses(self) -> list:
        return sorted({i.requires for i in self.identities if i.requires})

    def run(self, sw: Sweep) -> CheckResult:
        cls = sw.classification.flags()
        extra = {}
        reports = []
        if self.pre_gate is not None:
            hyp_reports, ok = self.pre_gate(sw)
            reports += hyp_reports
            extra["hypotheses"] = ok
        gates = []
        for ident in self.identities:
            flag = ident.requires
            gate = True if flag is None else bool(extra.get(flag, cls.get(flag, False)))
            note = ident.note
            if gate and sw.S.p < ident.min_p:
                gate, note = False, f"needs p >= {ident.min_p}"
            if flag is not None:
                gates.append(gate)
            if ident.kind == "probe":
                reports += _probe(sw, ident, gate)
            else:
                reports.append(sw.report(ident.id, ident.fn, ident.slots, gate=gate, note=note))
        if not gates or all(gates):
            status = "satisfied"
        elif any(gates):
            status = "partial"
        else:
            status = "vacuous"
        return CheckResult(self.id, status, reports)


def _probe(sw: Sweep, ident: Identity, gate: bool) -> list:
    """Equivalence probe: both residuals are reported and pass iff they vanish together."""
    names = ident.id.split("|")
    if not gate:
        return [VerificationReport(n, sw.N, None, sw.tol, True, None, "vacuous", ident.note) for n in names]
    meas = [sw.measure(lambda L, *X, k=k: ident.fn(L, *X)[k], ident.slots) for k in range(2)]
    small = [v < sw.tol for v, _ in meas]
    ok = small[0] == small[1]
    out = []
    for n, (v, w) in zip(names, meas):
        pt = [float(x) for x in sw.samples.points[w]]
        out.append(VerificationReport(n, sw.N, v, sw.tol, ok, pt, "pass" if ok else "fail", ident.note))
    return out


# --------------------------------------------------------------------------
# shared pieces
# --------------------------------------------------------------------------


def _p(L: LocalStructure) -> range:
    return range(L.S.p)


def _g(L: LocalStructure, u, v) -> np.ndarray:
    u = u.val if isinstance(u, Jet) else u
    v = v.val if isinstance(v, Jet) else v
    return L.gv(u, v)


def _eta_bar(L: LocalStructure, X) -> np.ndarray:
    return sum(L.eta_val(i, X.val) for i in _p(L))


def _nabla_f_form(L: LocalStructure, X, Y, Z) -> np.ndarray:
    """``2 g((nabla_X f) Y, Z)``."""
    return 2.0 * _g(L, L.nabla_f(X, Y), Z)


def _N5_covector(L: LocalStructure, X, Y, nslots: int) -> np.ndarray:
    return L.covector(lambda E: L.N5(X, Y, E), nslots)


def _xi_cov(L: LocalStructure, X, i: int) -> np.ndarray:
    """``nabla_X xi_i``."""
    return L.nabla(X, L.xi[i])


def _killing(L, X, Y):
    return [zero(L.lie_g(i, X, Y), _g(L, L.nabla(X, L.xi[i]), Y)) for i in _p(L)]


def _xi_xi_zero(L):
    out = []
    for i in _p(L):
        for j in _p(L):
            out.append(zero(L.nabla(L.xi[i], L.xi[j]), axes=1))
    return out


def _N2_zero(L, X, Y):
    return [zero(L.N2(i, X, Y)) for i in _p(L)]


def _N4_zero(L, X):
    return [zero(L.N4(i, j, X)) for i in _p(L) for j in _p(L)]


def _N3_zero(L, X):
    return [zero(L.N3(i, X), axes=1) for i in _p(L)]


# --------------------------------------------------------------------------
# master-3.1
# --------------------------------------------------------------------------


def _master_terms(L: LocalStructure, X, Y, Z) -> list:
    fX, fY, fZ = L.fX(X), L.fX(Y), L.fX(Z)
    terms = [
        3.0 * L.d_phi(X, fY, fZ),
        -3.0 * L.d_phi(X, Y, Z),
        _g(L, L.N1(Y, Z), fX),
    ]
    for i in _p(L):
        eX, eY, eZ = (L.eta_val(i, V.val) for V in (X, Y, Z))
        terms += [
            L.N2(i, Y, Z) * eX,
            2.0 * L.d_eta(i, fY, X) * eZ,
            -2.0 * L.d_eta(i, fZ, X) * eY,
        ]
    terms.append(L.N5(X, Y, Z))
    return terms


def _master(L, X, Y, Z):
    lhs = _nabla_f_form(L, X, Y, Z)
    terms = _master_terms(L, X, Y, Z)
    return eq(lhs, sum(terms), *terms)


def _nabla_phi(L, X, Y, Z):
    """``(nabla_X Phi)(Z, Y) = X(Phi(Z, Y)) - Phi(nabla_X Z, Y) - Phi(Z, nabla_X Y)``."""
    lhs = (
        np.einsum("...a,...a->...", L.phi(Z, Y).der, X.val)
        - _g(L, L.nabla(X, Z), L.fX(Y))
        - _g(L, Z, L.fv(L.nabla(X, Y)))
    )
    rhs = _g(L, L.nabla_f(X, Y), Z)
    return eq(lhs, rhs)


MASTER = TheoremCheck(
    "master-3.1",
    "covariant derivative of f on a metric weak f-structure",
    [
        Identity("master-3.1", _master, 3),
        Identity("nabla-Phi", _nabla_phi, 3),
    ],
)


# --------------------------------------------------------------------------
# normal-2.1
# --------------------------------------------------------------------------


def _N2_xi_slot(L, X, Y):
    out = []
    QXt = apply(L.Qt, L.top(X))
    fY = L.fX(Y)
    for i in _p(L):
        rhs = L.eta_val(i, bracket(QXt, fY).val)
        out.append(eq(L.N2(i, X, Y), rhs))
    return out


def _xi_symmetric(L):
    out = []
    for i in _p(L):
        for j in _p(L):
            s = L.nabla(L.xi[i], L.xi[j]) + L.nabla(L.xi[j], L.xi[i])
            out.append(zero(s, axes=1))
    return out


def _ker_f_geodesic(L, Z):
    """``g(nabla_{xi_i} xi_j + nabla_{xi_j} xi_i, Z^T)`` for ``Z^T`` in ``f(TM)``."""
    Zt = L.top(Z).val
    out = []
    for i in _p(L):
        for j in range(i, L.S.p):
            s = L.nabla(L.xi[i], L.xi[j]) + L.nabla(L.xi[j], L.xi[i])
            out.append(zero(_g(L, s, Zt)))
    return out


NORMAL = TheoremCheck(
    "normal-2.1",
    "consequences of normality",
    [
        Identity("N3-zero", _N3_zero, 1, "normal"),
        Identity("N4-zero", _N4_zero, 1, "normal"),
        Identity("N2-xi-slot", _N2_xi_slot, 2, "normal"),
        Identity("nabla-xi-xi-symmetric", _xi_symmetric, 0, "normal"),
        Identity("ker-f-totally-geodesic", _ker_f_geodesic, 1, "normal"),
    ],
)


# --------------------------------------------------------------------------
# weak-K
# --------------------------------------------------------------------------


def _xi_bracket_f(L, X):
    fX = L.fX(X)
    out = []
    for i in _p(L):
        for j in _p(L):
            out.append(zero(_g(L, bracket(L.xi[i], L.xi[j]), fX)))
    return out


def _weak_K_terms(L, X, Y, Z) -> list:
    fY, fZ = L.fX(Y), L.fX(Z)
    QYt = apply(L.Qt, L.top(Y))
    b = bracket(QYt, fZ).val
    terms = []
    for i in _p(L):
        eX, eY, eZ = (L.eta_val(i, V.val) for V in (X, Y, Z))
        terms += [
            2.0 * L.d_eta(i, fY, X) * eZ,
            -2.0 * L.d_eta(i, fZ, X) * eY,
            L.eta_val(i, b) * eX,
        ]
    terms.append(L.N5(X, Y, Z))
    return terms


def _nabla_f_K(L, X, Y, Z):
    lhs = _nabla_f_form(L, X, Y, Z)
    terms = _weak_K_terms(L, X, Y, Z)
    return eq(lhs, sum(terms), *terms)


def _nabla_f_K_xi(L, Y, Z):
    QYt = apply(L.Qt, L.top(Y))
    b = bracket(QYt, L.fX(Z)).val
    out = []
    for i in _p(L):
        x = L.xi[i]
        lhs = _nabla_f_form(L, x, Y, Z)
        t1, t2 = L.eta_val(i, b), L.N5(x, Y, Z)
        out.append(eq(lhs, t1 + t2, t1, t2))
    return out


WEAK_K = TheoremCheck(
    "weak-K",
    "weak K-structures",
    [
        Identity("xi-Killing", _killing, 2, "weak_K"),
        Identity("nabla-xi-xi", _xi_xi_zero, 0, "weak_K"),
        Identity("xi-bracket-fX", _xi_bracket_f, 1, "weak_K"),
        Identity("nabla-f-weak-K", _nabla_f_K, 3, "weak_K"),
        Identity("nabla-f-weak-K-xi", _nabla_f_K_xi, 2, "weak_K"),
    ],
)


# --------------------------------------------------------------------------
# almost-S
# --------------------------------------------------------------------------


def _N3_vs_killing(L, X, Y):
    n3 = max(
        (np.abs(L.N3(i, X)).max(axis=-1) for i in _p(L)),
        key=lambda a: float(np.max(a)),
    )
    kil = max((np.abs(L.lie_g(i, X, Y)) for i in _p(L)), key=lambda a: float(np.max(a)))
    one = np.ones(())
    return (np.broadcast_to(n3, kil.shape), one), (kil, one)


def _almost_S_terms(L, X, Y, Z) -> list:
    fX, fY, fZ = L.fX(X), L.fX(Y), L.fX(Z)
    return [
        _g(L, L.N1(Y, Z), fX),
        2.0 * _g(L, fX, fY) * _eta_bar(L, Z),
        -2.0 * _g(L, fX, fZ) * _eta_bar(L, Y),
        L.N5(X, Y, Z),
    ]


def _nabla_f_A(L, X, Y, Z):
    lhs = _nabla_f_form(L, X, Y, Z)
    terms = _almost_S_terms(L, X, Y, Z)
    return eq(lhs, sum(terms), *terms)


def _nabla_f_A_xi(L, Y, Z):
    out = []
    for i in _p(L):
        x = L.xi[i]
        out.append(eq(_nabla_f_form(L, x, Y, Z), L.N5(x, Y, Z)))
    return out


def _sectional_xi(L):
    R = riemann_tensor(L.geo)
    out = []
    for i in _p(L):
        for j in range(i + 1, L.S.p):
            x, y = L.xi[i].val, L.xi[j].val
            ryy = np.einsum("...lkab,...a,...b,...k->...l", R, x, y, y)
            num = _g(L, ryy, x)
            den = _g(L, x, x) * _g(L, y, y) - _g(L, x, y) ** 2
            out.append(zero(num / den))
    return out


def _nabla_xi_xi_k(L, X):
    return [zero(_g(L, _xi_cov(L, X, i), L.xi[k])) for i in _p(L) for k in _p(L)]


ALMOST_S = TheoremCheck(
    "almost-S",
    "weak almost S-structures",
    [
        Identity("N2-zero", _N2_zero, 2, "weak_almost_S"),
        Identity("N4-zero", _N4_zero, 1, "weak_almost_S"),
        Identity("N3-probe|Killing-probe", _N3_vs_killing, 2, "weak_almost_S", kind="probe",
                 note="N3 = 0 iff xi Killing: both residuals vanish together"),
        Identity("nabla-f-almost-S", _nabla_f_A, 3, "weak_almost_S"),
        Identity("nabla-f-almost-S-xi", _nabla_f_A_xi, 2, "weak_almost_S"),
        Identity("nabla-xi-xi", _xi_xi_zero, 0, "weak_almost_S"),
        Identity("sectional-xi-xi", _sectional_xi, 0, "weak_almost_S", min_p=2),
        Identity("nabla-X-xi-perp", _nabla_xi_xi_k, 1, "weak_almost_S"),
    ],
)


# --------------------------------------------------------------------------
# h-identities
# --------------------------------------------------------------------------


def _h_minus_adjoint(L, X, Y):
    out = []
    for i in _p(L):
        lhs = _g(L, L.h(i, X), Y) - _g(L, X, L.h(i, Y))
        out.append(eq(lhs, 0.5 * L.N5(L.xi[i], X, Y)))
    return out


def _Q_nabla_xi(L, X, Z):
    QX = np.einsum("...kl,...l->...k", L.Q.val, X.val)
    fZ = L.fX(Z)
    out = []
    for i in _p(L):
        lhs = _g(L, np.einsum("...kl,...l->...k", L.Q.val, _xi_cov(L, X, i)), Z)
        t1 = _g(L, fZ.val + L.h(i, fZ), QX)
        t2 = -0.5 * L.N5(X, L.xi[i], fZ)
        out.append(eq(lhs, t1 + t2, t1, t2))
    return out


def _h_f_anticommute(L, X):
    fX = L.fX(X)
    out = []
    for i in _p(L):
        lhs = L.h(i, fX) + L.fv(L.h(i, X))
        rhs = -0.5 * L.lie_Qt(i, X)
        out.append(eq(lhs, rhs, axes=1))
    return out


def _h_xi(L):
    return [zero(L.h(i, L.xi[j]), axes=1) for i in _p(L) for j in _p(L)]


def _N5_xi_h(L, X, Y):
    fX, fY = L.fX(X), L.fX(Y)
    f2X = L.fv(fX.val)
    out = []
    for i in _p(L):
        x = L.xi[i]
        lhs = L.N5(Y, x, fX) - L.N5(X, x, fY)
        # g(h* f fX, fY) = g(f fX, h fY)
        rhs = 2.0 * (_g(L, f2X, L.h(i, fY)) + _g(L, L.fv(L.h(i, fX)), fY))
        out.append(eq(lhs, rhs))
    return out


def _d_eta_nabla(L, X, Y):
    out = []
    for i in _p(L):
        lhs = 2.0 * L.d_eta(i, X, Y)
        rhs = _g(L, _xi_cov(L, X, i), Y) - _g(L, _xi_cov(L, Y, i), X)
        out.append(eq(lhs, rhs))
    return out


H_IDENTITIES = TheoremCheck(
    "h-identities",
    "the tensors h_i = 1/2 L_xi f",
    [
        Identity("h-adjoint", _h_minus_adjoint, 2, "weak_almost_S"),
        Identity("Q-nabla-xi", _Q_nabla_xi, 2, "weak_almost_S"),
        Identity("h-f-anticommute", _h_f_anticommute, 1, "weak_almost_S"),
        Identity("h-xi-zero", _h_xi, 0, "weak_almost_S"),
        Identity("N5-xi-h", _N5_xi_h, 2, "weak_S"),
        Identity("d-eta-nabla", _d_eta_nabla, 2),
    ],
)


# --------------------------------------------------------------------------
# weak-S
# --------------------------------------------------------------------------


def _nabla_f_S(L, X, Y, Z):
    QX = np.einsum("...kl,...l->...k", L.Q.val, X.val)
    eb = [_eta_bar(L, V) for V in (Y, Z)]
    terms = [
        _g(L, QX, Y) * eb[1],
        -_g(L, QX, Z) * eb[0],
        0.5 * L.N5(X, Y, Z),
    ]
    for j in _p(L):
        ej = [L.eta_val(j, V.val) for V in (X, Y, Z)]
        terms.append(ej[0] * (eb[0] * ej[2] - ej[1] * eb[1]))
    lhs = _g(L, L.nabla_f(X, Y), Z)
    return eq(lhs, sum(terms), *terms)


def _nabla_f_S_xi(L, X, Y):
    fX, fY = L.fX(X), L.fX(Y)
    xi_bar = sum(x.val for x in L.xi)
    t1 = _g(L, fX, fY)[..., None] * xi_bar
    t2 = _eta_bar(L, Y)[..., None] * L.fv(fX.val)
    t3 = 0.5 * L.geo.sharp(_N5_covector(L, X, Y, 2))
    lhs = L.nabla_f(X, Y)
    return eq(lhs, t1 + t2 + t3, t1, t2, t3, axes=1)


def _rigidity(L, X):
    Xt = L.top(X).val
    QXt = np.einsum("...kl,...l->...k", L.Q.val, Xt)
    return eq(QXt, Xt, axes=1)


def _h_zero(L, X):
    return [zero(L.h(i, X), axes=1) for i in _p(L)]


def _top_geodesic(L, X, Y):
    """``g(nabla_X Y + nabla_Y X, xi_i)`` for ``X, Y`` in ``f(TM)``."""
    Xt, Yt = L.top(X), L.top(Y)
    s = L.nabla(Xt, Yt) + L.nabla(Yt, Xt)
    return [zero(_g(L, s, L.xi[i])) for i in _p(L)]


WEAK_S = TheoremCheck(
    "weak-S",
    "weak S-structures and rigidity",
    [
        Identity("nabla-f-weak-S", _nabla_f_S, 3, "weak_S"),
        Identity("nabla-f-weak-S-xi", _nabla_f_S_xi, 2, "weak_S"),
        Identity("rigidity-Q-on-fTM", _rigidity, 1, "weak_S"),
        Identity("h-zero", _h_zero, 1, "weak_S"),
        Identity("xi-Killing", _killing, 2, "weak_S"),
        Identity("ker-f-totally-geodesic", _ker_f_geodesic, 1, "weak_S"),
        Identity("fTM-totally-geodesic", _top_geodesic, 2, "weak_S"),
    ],
)


# --------------------------------------------------------------------------
# weak-C
# --------------------------------------------------------------------------


def _N1_is_nijenhuis(L, X, Y):
    nij, corr = L.N1_terms(X, Y)
    return eq(nij + corr, nij, axes=1)


def _xi_commute(L):
    return [zero(bracket(L.xi[i], L.xi[j]).val, axes=1) for i in _p(L) for j in _p(L)]


def _nabla_f_C(L, X, Y, Z):
    return eq(_nabla_f_form(L, X, Y, Z), L.N5(X, Y, Z))


def _cyclic_N5(L, X, Y, Z):
    t = [L.N5(X, Y, Z), L.N5(Y, Z, X), L.N5(Z, X, Y)]
    return zero(t[0] + t[1] + t[2], *t)


def _cyclic_N5_f(L, X, Y, Z):
    t = [L.N5(L.fX(X), Y, Z), L.N5(L.fX(Y), Z, X), L.N5(L.fX(Z), X, Y)]
    return zero(t[0] + t[1] + t[2], *t)


def _xi_specialised(L, X, Z):
    QZ = np.einsum("...kl,...l->...k", L.Q.val, Z.val)
    fZ = L.fX(Z)
    return [eq(_g(L, _xi_cov(L, X, i), QZ), -0.5 * L.N5(X, L.xi[i], fZ)) for i in _p(L)]


WEAK_C = TheoremCheck(
    "weak-C",
    "weak almost C- and weak C-structures",
    [
        Identity("N2-zero", _N2_zero, 2, "weak_almost_C"),
        Identity("N4-zero", _N4_zero, 1, "weak_almost_C"),
        Identity("N1-equals-nijenhuis", _N1_is_nijenhuis, 2, "weak_almost_C"),
        Identity("xi-commute", _xi_commute, 0, "weak_almost_C"),
        Identity("nabla-f-weak-C", _nabla_f_C, 3, "weak_C"),
        Identity("N5-cyclic", _cyclic_N5, 3, "weak_C"),
        Identity("N5-cyclic-f", _cyclic_N5_f, 3, "weak_C"),
        Identity("nabla-xi-QZ", _xi_specialised, 2, "weak_C"),
    ],
)


# --------------------------------------------------------------------------
# parallel-f
# --------------------------------------------------------------------------


def _nabla_f_zero(L, X, Y):
    return zero(L.nabla_f(X, Y), axes=1)


def _xi_bracket_perp(L):
    out = []
    for i in _p(L):
        for j in _p(L):
            b = bracket(L.xi[i], L.xi[j]).val
            perp = sum(L.eta_val(k, b)[..., None] * L.xi[k].val for k in _p(L))
            out.append(zero(perp, axes=1))
    return out


def _parallel_gate(sw: Sweep):
    reps = [
        sw.report("hypothesis:nabla-f", _nabla_f_zero, 2, note="max |(nabla_X f) Y|"),
        sw.report("hypothesis:xi-bracket-perp", _xi_bracket_perp, 0, note="max |[xi_i, xi_j]^perp|"),
    ]
    ok = all(r.passed for r in reps)
    for r in reps:
        r.status = "hypothesis"
    return reps, ok


def _d_phi_zero(L, X, Y, Z):
    return zero(L.d_phi(X, Y, Z))


def _d_eta_zero(L, X, Y):
    return [zero(L.d_eta(i, X, Y)) for i in _p(L)]


def _N1_zero(L, X, Y):
    nij, corr = L.N1_terms(X, Y)
    return zero(nij + corr, nij, corr, axes=1)


def _N5_zero(L, X, Y, Z):
    t = L.N5_terms(X, Y, Z)
    return zero(sum(t), *t)


def _cond1(L, X):
    fX = L.fX(X)
    return [zero(L.nabla(fX, L.xi[i]) - L.fv(_xi_cov(L, X, i)), axes=1) for i in _p(L)]


PARALLEL_F = TheoremCheck(
    "parallel-f",
    "parallel f with [xi_i, xi_j]^perp = 0",
    [
        Identity("d-Phi-zero", _d_phi_zero, 3, "hypotheses"),
        Identity("d-eta-zero", _d_eta_zero, 2, "hypotheses"),
        Identity("N1-zero", _N1_zero, 2, "hypotheses"),
        Identity("N5-zero", _N5_zero, 3, "hypotheses"),
        Identity("nabla-fX-xi", _cond1, 1, "hypotheses"),
    ],
    pre_gate=_parallel_gate,
)


CHECKS = {c.id: c for c in (MASTER, NORMAL, WEAK_K, ALMOST_S, H_IDENTITIES, WEAK_S, WEAK_C, PARALLEL_F)}


def get_check(check_id: str) -> TheoremCheck:
    try:
        return CHECKS[check_id]
    except KeyError:
        raise ValueError(f"unknown theorem id {check_id!r}; choose from {', '.join(CHECK_IDS)} or all") from None


def _sweep(S: FramedWeakFStructure, samples, tol: float, sweep: Sweep | None) -> Sweep:
    if sweep is not None:
        return sweep
    return Sweep(S, _as_samples(S, samples), tol)


def run_check(check_id: str, S: FramedWeakFStructure, samples=None, tol: float = DEFAULT_TOL, sweep: Sweep | None = None) -> CheckResult:
    """Run one check; raises :class:`InvalidStructureError` when the axioms fail."""
    return get_check(check_id).run(_sweep(S, samples, tol, sweep))


def run_checks(S: FramedWeakFStructure, ids=("all",), samples=None, tol: float = DEFAULT_TOL) -> list[CheckResult]:
    """Run checks in id order on one shared sample set."""
    if isinstance(ids, str):
        ids = (ids,)
    wanted = CHECK_IDS if "all" in ids else tuple(i for i in CHECK_IDS if i in ids)
    for i in ids:
        if i != "all":
            get_check(i)
    sw = _sweep(S, samples, tol, None)
    return [CHECKS[i].run(sw) for i in wanted]


def _verify(check_id: str):
    def run(S: FramedWeakFStructure, samples=None, tol: float = DEFAULT_TOL, sweep: Sweep | None = None) -> CheckResult:
        return run_check(check_id, S, samples, tol, sweep)

    run.__name__ = "verify_" + check_id.replace("-", "_").replace(".", "_")
    run.__doc__ = f"Run the ``{check_id}`` check ({CHECKS[check_id].title})."
    return run


verify_master_formula = _verify("master-3.1")
verify_normal_consequences = _verify("normal-2.1")
verify_weak_K = _verify("weak-K")
verify_almost_S = _verify("almost-S")
verify_h_identities = _verify("h-identities")
verify_weak_S = _verify("weak-S")
verify_weak_C = _verify("weak-C")
verify_parallel_f = _verify("parallel-f")
