import json

import numpy as np
import pytest

from weakframe.catalog import CATALOG_NAMES, catalog_entry, default_matrix, expected_class, get_example
from weakframe.specfile import SpecError, StructureSpec
from weakframe.structure import classify, validate_axioms


@pytest.mark.parametrize("entry", default_matrix(), ids=lambda e: f"{e.name}-n{e.spec.n}-p{e.spec.p}")
def test_matrix_entry_has_its_expected_class(entry):
    S = entry.spec.build()
    assert all(r.passed for r in validate_axioms(S, 20))
    got = classify(S, 20)
    assert got.flags() == entry.expected_class.flags()


def test_matrix_covers_all_names():
    assert {e.name for e in default_matrix()} == set(CATALOG_NAMES)
    assert len(default_matrix()) == 14


def test_generic_default_is_not_normal_and_not_closed():
    spec = get_example("generic-weak-f")
    assert (spec.n, spec.p) == (2, 1)
    assert expected_class("generic-weak-f", 2, 1).describe() == "valid metric weak f-structure; not normal"


def test_single_block_generic_is_weak_almost_C():
    # one block: Phi = -lam(x1) dx1 ^ dy1 is closed
    S = get_example("generic-weak-f", n=1, p=1).build()
    c = classify(S, 20)
    assert c.weak_almost_C and not c.normal


def test_euclid_lambda_values():
    spec = get_example("euclid-weak-C", n=2, lam=[3, 0.5])
    assert spec.f[1][0] == "3" and spec.f[0][1] == "-3"
    assert spec.Q[2][2] == "0.25" and spec.Q[4][4] == "1"
    assert get_example("euclid-weak-C", n=3, lam=2).f[5][4] == "2"


def test_torus_variant():
    spec = get_example("euclid-weak-C", torus=True)
    assert spec.name == "euclid-weak-C-torus"
    assert spec.periodic == [False, False, True]
    assert spec.box[2][1] == pytest.approx(2 * np.pi)
    assert get_example("euclid-weak-C-torus").to_dict() == spec.to_dict()


@pytest.mark.parametrize(
    "name, params",
    [
        ("euclid-weak-C", {"n": 0}),
        ("euclid-weak-C", {"p": 0}),
        ("classical-S", {"n": 1.5}),
        ("classical-S", {"n": True}),
        ("euclid-weak-C", {"lam": [1.0, -1.0], "n": 2}),
        ("euclid-weak-C", {"lam": [1.0, 2.0, 3.0], "n": 2}),
        ("weak-almost-contact", {"p": 2}),
        ("generic-weak-f", {"lam": 2.0}),
        ("hyperbolic", {}),
    ],
)
def test_bad_parameters(name, params):
    with pytest.raises(ValueError):
        get_example(name, **params)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_spec_round_trips_through_json(name):
    spec = get_example(name, n=2)
    back = StructureSpec.from_json(spec.to_json())
    assert back.to_dict() == spec.to_dict()
    json.loads(spec.to_json())


def test_catalog_entry_records_params():
    e = catalog_entry("classical-S", n=2, p=2)
    assert e.params == {"n": 2, "p": 2}
    assert e.expected_class.weak_S


def test_spec_errors_carry_location(tmp_path):
    spec = get_example("euclid-weak-C").to_dict()
    spec["f"][0][1] = "2 +"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(spec, indent=2))
    with pytest.raises(SpecError) as info:
        StructureSpec.load(path)
    assert "f[0][1]" in str(info.value) and "bad.json" in str(info.value)


def test_spec_rejects_wrong_shape():
    spec = get_example("euclid-weak-C").to_dict()
    spec["Q"] = spec["Q"][:2]
    with pytest.raises(SpecError):
        StructureSpec.from_dict(spec)
