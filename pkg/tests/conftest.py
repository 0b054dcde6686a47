import numpy as np
import pytest

from charts import pullback
from weakframe.catalog import get_example
from weakframe.fields import Jet
from weakframe.specfile import StructureSpec


def build(name, **params):
    return get_example(name, **params).build()


def twisted_weak_f():
    """generic-weak-f (n = 2, p = 2) with a block scale depending on z1, so L_xi f != 0."""
    text = get_example("generic-weak-f", n=2, p=2).to_json()
    text = text.replace("1 + 0.1*sin(x1)", "1 + 0.1*sin(x1) + 0.2*cos(z1)*y2")
    return StructureSpec.from_json(text).build()


def random_jets(pts, count, seed=0):
    """Constant-coefficient random vector fields at ``pts``."""
    rng = np.random.default_rng(seed)
    n, d = pts.shape
    out = []
    for _ in range(count):
        v = rng.normal(size=(n, d))
        out.append(Jet(v, np.zeros((n, d, d)), 1))
    return out


def field_jets(pts, seed=0):
    """Non-constant vector fields (linear coefficients) at ``pts``."""
    rng = np.random.default_rng(seed)
    n, d = pts.shape
    A = rng.normal(size=(d, d))
    b = rng.normal(size=d)
    val = pts @ A.T + b
    der = np.broadcast_to(A, (n, d, d)).copy()
    return Jet(val, der, 1)


@pytest.fixture(scope="session")
def classical_S():
    return build("classical-S", n=2, p=2)


@pytest.fixture(scope="session")
def generic_f():
    return build("generic-weak-f", n=2, p=2)


@pytest.fixture(scope="session")
def euclid_C():
    return build("euclid-weak-C", n=2, p=2)


@pytest.fixture(scope="session")
def twisted():
    return twisted_weak_f()


@pytest.fixture(scope="session")
def twisted_pulled():
    return pullback(twisted_weak_f())


ACCEPTANCE_LINES = []


def record_criterion(k, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append((k, line))
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
