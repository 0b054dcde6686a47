import numpy as np
import pytest

from charts import pullback
from conftest import build, field_jets, random_jets
from weakframe.catalog import get_example
from weakframe.fields import Jet, scale, scalar_jet
from weakframe.expr import parse_expression
from weakframe.structure import (
    InvalidStructureError,
    N5,
    classify,
    fundamental_form,
    h_adjoint,
    h_tensor,
    product_extension,
    validate_axioms,
)
from weakframe.theorems import _master_terms, _nabla_f_form


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)), np.max(np.abs(b))))


def local(S, n=12, seed=42):
    pts = S.samples(n, seed).points
    return S.at(pts), pts


# -- axioms -----------------------------------------------------------------


@pytest.mark.parametrize("name", ["twisted", "twisted_pulled", "classical_S", "generic_f", "euclid_C"])
def test_axioms_hold(name, request):
    S = request.getfixturevalue(name)
    bad = [r.identity for r in validate_axioms(S, 30) if not r.passed]
    assert bad == []


def test_broken_Q_on_xi_is_rejected():
    spec = get_example("euclid-weak-C", n=1, p=1)
    spec.Q[2][2] = "2"
    S = spec.build()
    failed = {r.identity for r in validate_axioms(S, 10) if not r.passed}
    assert "Q-xi" in failed
    with pytest.raises(InvalidStructureError):
        classify(S, 10)


def test_indefinite_metric_is_rejected():
    spec = get_example("euclid-weak-C", n=1, p=1)
    spec.g[0][0] = "-1"
    failed = {r.identity for r in validate_axioms(spec.build(), 10) if not r.passed}
    assert "metric-positive" in failed


def test_rank_drop_is_rejected():
    spec = get_example("generic-weak-f", n=1, p=1)
    spec.f[0][1] = spec.f[1][0] = "0"
    failed = {r.identity for r in validate_axioms(spec.build(), 10) if not r.passed}
    assert "rank-f" in failed and "fQ" not in failed


def test_report_fields():
    r = validate_axioms(build("classical-S"), 5)[0]
    d = r.to_dict()
    assert set(d) >= {"id", "max_residual", "tolerance", "pass", "worst_point"}
    assert d["pass"] is True and len(d["worst_point"]) == 3


# -- fundamental form -------------------------------------------------------


def test_phi_is_skew_and_kills_xi(generic_f):
    pts = generic_f.samples(8).points
    X, Y = random_jets(pts, 2)
    a = fundamental_form(generic_f, X, Y, pts)
    b = fundamental_form(generic_f, Y, X, pts)
    np.testing.assert_allclose(a, -b, atol=1e-14)
    for xi in generic_f.xi:
        assert np.max(np.abs(fundamental_form(generic_f, xi, Y, pts))) < 1e-15


def test_d_eta_equals_phi_on_classical_S(classical_S):
    L, pts = local(classical_S)
    X, Y = field_jets(pts, 1), field_jets(pts, 2)
    for i in range(classical_S.p):
        np.testing.assert_allclose(L.d_eta(i, X, Y), L.phi(X, Y).val, atol=1e-13)


# -- N tensors --------------------------------------------------------------


def test_N1_routes_agree(twisted_pulled):
    L, pts = local(twisted_pulled)
    X, Y = field_jets(pts, 3), field_jets(pts, 4)
    assert rel(L.nijenhuis(X, Y), L.nijenhuis_nabla(X, Y)) < 1e-11


def test_N2_and_N4_match_lie_forms():
    # the forms agree when eta o f = 0 and eta(xi) is constant; this frame keeps
    # both (and sum xi (x) eta) but makes eta^1 non-closed, so g is irrelevant
    spec = get_example("generic-weak-f", n=2, p=2)
    spec.eta[0][5] = "x1*sin(y2)"
    spec.xi[1][4] = "-x1*sin(y2)"
    S = pullback(spec.build())
    L, pts = local(S)
    X, Y = field_jets(pts, 5), field_jets(pts, 6)
    for i in range(S.p):
        assert rel(L.N2(i, X, Y), L.N2_lie(i, X, Y)) < 1e-12
        for j in range(S.p):
            c = L.N4(i, j, X)
            assert rel(c, L.N4_lie(i, j, X)) < 1e-12
    assert np.max(np.abs(L.N2(0, X, Y))) > 1e-3
    assert np.max(np.abs(L.N4(1, 0, X))) > 1e-3


def test_N3_matches_connection_form(twisted_pulled):
    L, pts = local(twisted_pulled)
    X = field_jets(pts, 7)
    a = L.N3(0, X)
    assert np.max(np.abs(a)) > 1e-3
    assert rel(a, L.N3_nabla(0, X)) < 1e-11


def test_h_is_half_N3(twisted):
    pts = twisted.samples(5).points
    (X,) = random_jets(pts, 1)
    L = twisted.at(pts)
    np.testing.assert_allclose(h_tensor(twisted, 1, X, pts), 0.5 * L.N3(1, X), atol=1e-15)


def test_h_adjoint_relation(twisted_pulled):
    S = twisted_pulled
    pts = S.samples(6).points
    X, Y = random_jets(pts, 2, seed=3)
    L = S.at(pts)
    for i in range(S.p):
        hs = h_adjoint(S, i, X, pts)
        lhs = L.gv(hs, Y.val)
        rhs = L.gv(X.val, h_tensor(S, i, Y, pts))
        assert rel(lhs, rhs) < 1e-12


def test_N5_is_skew_in_last_two_slots(twisted_pulled):
    L, pts = local(twisted_pulled)
    X, Y, Z = field_jets(pts, 1), field_jets(pts, 2), field_jets(pts, 3)
    a, b = L.N5(X, Y, Z), L.N5(X, Z, Y)
    assert np.max(np.abs(a)) > 1e-3
    assert rel(a, -b) < 1e-12


def test_N5_particular_values(twisted_pulled):
    S = twisted_pulled
    L, pts = local(S)
    X, Z = random_jets(pts, 2, seed=9)
    QtX = np.einsum("...kl,...l->...k", L.Qt.val, X.val)
    for i in range(S.p):
        xi = L.xi[i]
        for j in range(S.p):
            assert np.max(np.abs(L.N5(xi, L.xi[j], Z))) < 1e-12
            assert np.max(np.abs(L.N5(xi, Z, L.xi[j]))) < 1e-12
        lie = Jet(L.N3(i, Z), None, 1)
        top = lie.val - sum(L.eta_val(k, lie.val)[..., None] * L.xi[k].val for k in range(S.p))
        rhs = L.gv(top, QtX)
        lhs = L.N5(X, xi, Z)
        assert rel(lhs, rhs) < 1e-12
    # the value above is non-trivial on this structure
    assert np.max(np.abs(L.N5(X, L.xi[0], Z))) > 1e-3


def test_N5_vanishes_when_Q_is_identity(classical_S):
    pts = classical_S.samples(10).points
    X, Y, Z = field_jets(pts, 1), field_jets(pts, 2), field_jets(pts, 3)
    assert np.max(np.abs(N5(classical_S, X, Y, Z, pts))) < 1e-13


def _phi_jet(pts, S):
    names = list(S.coords) or [f"x{k + 1}" for k in range(S.dim)]
    return scalar_jet(parse_expression(f"1 + {names[0]}^2 + sin({names[1]})", names), pts)


@pytest.mark.parametrize("slot", [0, 1, 2])
def test_N5_is_tensorial(twisted, slot):
    L, pts = local(twisted)
    V = [field_jets(pts, 11), field_jets(pts, 12), field_jets(pts, 13)]
    phi = _phi_jet(pts, twisted)
    W = list(V)
    W[slot] = scale(phi, V[slot])
    assert rel(L.N5(*W), phi.val * L.N5(*V)) < 1e-12


def test_five_term_variant_is_not_tensorial(generic_f):
    L, pts = local(generic_f)
    X, Y, Z = field_jets(pts, 11), field_jets(pts, 12), field_jets(pts, 13)
    phi = _phi_jet(pts, generic_f)
    a = L.N5(X, scale(phi, Y), Z, five_term=True)
    b = phi.val * L.N5(X, Y, Z, five_term=True)
    assert rel(a, b) > 1e-3


def test_five_term_variant_breaks_the_covariant_derivative_formula(generic_f):
    L, pts = local(generic_f)
    X, Y, Z = random_jets(pts, 3, seed=21)
    lhs = _nabla_f_form(L, X, Y, Z)
    rest = sum(_master_terms(L, X, Y, Z)[:-1])
    assert rel(lhs, rest + L.N5(X, Y, Z)) < 1e-12
    assert rel(lhs, rest + L.N5(X, Y, Z, five_term=True)) > 1e-2


# -- classification ---------------------------------------------------------


def test_classify_catalog_examples():
    assert classify(build("generic-weak-f"), 30).describe() == "valid metric weak f-structure; not normal"
    s = classify(build("classical-S", n=1, p=2), 30)
    assert s.weak_S and s.normal and not s.weak_C
    c = classify(build("euclid-weak-C", n=2, p=1, lam=[2.0, 0.5]), 30)
    assert c.weak_C and c.weak_K and not c.weak_almost_S


def test_classify_is_chart_independent(twisted, twisted_pulled):
    a = classify(twisted, 20).flags()
    b = classify(twisted_pulled, 20).flags()
    assert a == b


# -- product extension ------------------------------------------------------


@pytest.mark.parametrize("name", ["classical-S", "generic-weak-f", "euclid-weak-C"])
def test_product_extension_squares_to_minus_Q(name):
    S = build(name, n=1, p=2)
    P = product_extension(S)
    assert P.square_residual(S.samples(20).points) < 1e-12


def test_product_extension_maps_xi_to_new_coordinate():
    S = build("classical-S", n=1, p=2)
    P = product_extension(S)
    pts = P.lift_points(S.samples(5).points)
    F = P.f_bar.jet(pts).val
    xi = np.stack([v.jet(pts[:, : S.dim]).val for v in S.xi], axis=1)
    for i in range(S.p):
        v = np.concatenate([xi[:, i], np.zeros((len(pts), S.p))], axis=1)
        out = np.einsum("nkl,nl->nk", F, v)
        e = np.zeros(S.dim + S.p)
        e[S.dim + i] = 1.0
        np.testing.assert_allclose(out, np.broadcast_to(e, out.shape), atol=1e-14)


def test_product_extension_integrable_iff_normal():
    normal = build("classical-S", n=1, p=1)
    generic = build("generic-weak-f", n=1, p=1)
    assert product_extension(normal).nijenhuis_residual(normal.samples(10).points) < 1e-12
    assert product_extension(generic).nijenhuis_residual(generic.samples(10).points) > 1e-3
