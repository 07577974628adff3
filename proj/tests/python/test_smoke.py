import numpy as np
import pytest
from scipy.linalg import expm, logm

import germlie


def test_suite_names():
    assert "all" in germlie.suite_names()
    assert "lie-local" in germlie.suite_names()


def test_bch_against_scipy():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    y = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    x *= 0.1 / germlie.lie_norm(x)
    y *= 0.15 / germlie.lie_norm(y)
    z, remainder = germlie.bch(x, y)
    want = logm(expm(x) @ expm(y))
    assert np.linalg.norm(z - want) < 1e-9
    assert germlie.lie_norm(z - want) <= remainder + 1e-14


def test_exp_log():
    x = np.array([[0.1, 0.2j], [-0.05, 0.0]], dtype=complex)
    assert np.allclose(germlie.expm(x), expm(x), atol=1e-14)
    assert np.allclose(germlie.logm(germlie.expm(x)), x, atol=1e-13)


def test_budget_raises():
    x = np.eye(2, dtype=complex)
    with pytest.raises(ArithmeticError):
        germlie.bch(x, x)


def test_run_check_is_deterministic():
    a = germlie.run_check("bch_pairs", seed=4, trials=10)
    b = germlie.run_check("bch_pairs", seed=4, trials=10)
    assert a == b
    assert a["passed"] and a["trials"] == 10


def test_run_suite_report():
    report = germlie.run_suite("lie-local", seed=1, trials=3)
    assert report["schema"] == 1
    assert report["config"]["seed"] == 1
    assert report["passed"]
    assert [c["check"] for c in report["checks"]] == ["bch_pairs", "local_axioms"]


def test_bad_ratio():
    with pytest.raises(ValueError):
        germlie.run_suite("germ-space", r=0.2)


def test_atlas_roundtrip():
    atlas = germlie.example_atlas("circle")
    assert len(atlas["charts"]) == 3
    assert germlie.certify_atlas(atlas, 0.5)["passed"]
