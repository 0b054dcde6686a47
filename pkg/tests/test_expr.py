import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakframe.expr import (
    Binary,
    Const,
    DomainError,
    ExprSyntaxError,
    Pow,
    Unary,
    Var,
    evaluate,
    evaluate_jet2,
    parse_expression,
    substitute,
    to_string,
)

XY = ["x1", "x2"]


def fd_gradient(e, pt, h=1e-4):
    pt = np.asarray(pt, dtype=float)
    out = np.zeros_like(pt)
    for a in range(len(pt)):
        d = np.zeros_like(pt)
        d[a] = h
        out[a] = (evaluate(e, pt + d) - evaluate(e, pt - d)) / (2 * h)
    return out


def fd_hessian(e, pt, h=1e-4):
    pt = np.asarray(pt, dtype=float)
    n = len(pt)
    H = np.zeros((n, n))
    for a in range(n):
        d = np.zeros(n)
        d[a] = h
        H[a] = (evaluate_jet2(e, pt + d, 1).gradient - evaluate_jet2(e, pt - d, 1).gradient) / (2 * h)
    return H


def test_polynomial_value():
    e = parse_expression("x1^2 + 2*x1*x2", XY)
    assert evaluate(e, [3.0, 4.0]) == 33.0


def test_sin_at_zero():
    assert evaluate(parse_expression("sin(x2)", XY), [7.0, 0.0]) == 0.0


def test_exp_cos_at_origin():
    assert evaluate(parse_expression("exp(x1)*cos(x2)", XY), [0.0, 0.0]) == 1.0


def test_division_by_zero_is_domain_error():
    e = parse_expression("x1/x2", XY)
    with pytest.raises(DomainError) as info:
        evaluate(e, [1.0, 0.0])
    assert "[1, 0]" in str(info.value)


@pytest.mark.parametrize("text", ["log(x1)", "sqrt(x1)", "x1^0.5"])
def test_domain_errors_on_negative_argument(text):
    with pytest.raises(DomainError):
        evaluate(parse_expression(text, XY), [-1.0, 0.0])


def test_batched_domain_error_reports_offending_point():
    e = parse_expression("log(x1)", XY)
    with pytest.raises(DomainError) as info:
        evaluate(e, np.array([[1.0, 0.0], [2.0, 0.0], [-3.0, 5.0]]))
    assert "-3" in str(info.value)


def test_jet_of_product():
    j = evaluate_jet2(parse_expression("x1*x2", XY), [2.0, 3.0])
    assert j.value == 6.0
    np.testing.assert_array_equal(j.gradient, [3.0, 2.0])
    np.testing.assert_array_equal(j.hessian, [[0.0, 1.0], [1.0, 0.0]])


def test_jet_of_sine():
    j = evaluate_jet2(parse_expression("sin(x1)", XY), [0.5, 0.0])
    assert j.value == pytest.approx(math.sin(0.5))
    assert j.gradient[0] == pytest.approx(math.cos(0.5))
    assert j.hessian[0, 0] == pytest.approx(-math.sin(0.5))
    assert j.gradient[1] == 0.0


def test_batched_jet_matches_pointwise():
    e = parse_expression("exp(x1)*sin(x2) + x1^3/(1 + x2^2)", XY)
    pts = np.random.default_rng(1).uniform(-1, 1, (7, 2))
    jb = evaluate_jet2(e, pts)
    for k, pt in enumerate(pts):
        j = evaluate_jet2(e, pt)
        assert jb.value[k] == j.value
        np.testing.assert_array_equal(jb.gradient[k], j.gradient)
        np.testing.assert_array_equal(jb.hessian[k], j.hessian)


def test_order_one_skips_hessian():
    j = evaluate_jet2(parse_expression("x1*x2", XY), [1.0, 2.0], order=1)
    assert j.hessian is None


@pytest.mark.parametrize(
    "text, pos",
    [("x1 +", 4), ("x1 * (x2", 8), ("foo(x1)", 0), ("x3 + 1", 0), ("x1 $ 2", 3), ("2 x1", 2)],
)
def test_syntax_error_offsets(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression(text, XY)
    assert info.value.pos == pos


def test_precedence_and_associativity():
    pt = [2.0, 3.0]
    assert evaluate(parse_expression("-x1^2", XY), pt) == -4.0
    assert evaluate(parse_expression("2^3^2", XY), pt) == 64.0  # left associative
    assert evaluate(parse_expression("x2 - x1 - 1", XY), pt) == 0.0
    assert evaluate(parse_expression("x2 / x1 / 2", XY), pt) == 0.75
    assert evaluate(parse_expression("1e-3*x1", XY), pt) == 0.002


def test_substitute_composes():
    e = parse_expression("x1*sin(x2)", XY)
    u = parse_expression("x1 + x2", XY)
    v = parse_expression("x1*x2", XY)
    c = substitute(e, [u, v])
    pt = np.array([0.3, -0.7])
    assert evaluate(c, pt) == pytest.approx((pt[0] + pt[1]) * math.sin(pt[0] * pt[1]))


# -- property tests --------------------------------------------------------

_leaf = st.one_of(
    st.sampled_from([Var(0, "x1"), Var(1, "x2")]),
    st.floats(-3, 3, allow_nan=False).map(lambda c: Const(round(c, 3))),
)


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: Binary(t[0], t[1], t[2])),
        st.tuples(st.sampled_from(["sin", "cos"]), children).map(lambda t: Unary(t[0], t[1])),
        st.tuples(children, st.integers(2, 3)).map(lambda t: Pow(t[0], float(t[1]))),
        children.map(lambda c: Unary("exp", Binary("*", Const(0.3), c))),
        children.map(lambda c: Binary("/", c, Binary("+", Const(2.0), Unary("sin", c)))),
    )


smooth_exprs = st.recursive(_leaf, _extend, max_leaves=6)
points = st.tuples(st.floats(-1, 1), st.floats(-1, 1)).map(np.array)


@settings(max_examples=60, deadline=None)
@given(smooth_exprs, points)
def test_jet_matches_finite_differences(e, pt):
    j = evaluate_jet2(e, pt)
    scale = max(1.0, abs(j.value))
    np.testing.assert_allclose(j.gradient, fd_gradient(e, pt), rtol=1e-6, atol=1e-6 * scale)
    np.testing.assert_allclose(j.hessian, fd_hessian(e, pt), rtol=1e-6, atol=1e-6 * max(scale, np.abs(j.gradient).max()))


@settings(max_examples=60, deadline=None)
@given(smooth_exprs, st.floats(-2, 2), st.floats(-2, 2))
def test_derivative_is_linear(e, a, b):
    f2 = parse_expression("x1*x2 + cos(x1)", XY)
    comb = Binary("+", Binary("*", Const(a), e), Binary("*", Const(b), f2))
    pt = np.array([0.4, -0.2])
    lhs = evaluate_jet2(comb, pt)
    r1, r2 = evaluate_jet2(e, pt), evaluate_jet2(f2, pt)
    np.testing.assert_allclose(lhs.gradient, a * r1.gradient + b * r2.gradient, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(lhs.hessian, a * r1.hessian + b * r2.hessian, rtol=1e-12, atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(smooth_exprs)
def test_round_trip_is_bit_exact(e):
    back = parse_expression(to_string(e, XY), XY)
    pts = np.random.default_rng(0).uniform(-1, 1, (20, 2))
    np.testing.assert_array_equal(evaluate(back, pts), evaluate(e, pts))


def test_hessian_is_symmetric():
    e = parse_expression("exp(x1*x2)*sin(x1 - x2^2)", XY)
    H = evaluate_jet2(e, [0.3, 0.8]).hessian
    np.testing.assert_allclose(H, H.T, atol=1e-14)
