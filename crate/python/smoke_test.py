"""Smoke test for the Python bindings; run with pytest after building grassblow-py."""
from fractions import Fraction

import pytest

import grassblow


def test_normalization_is_echoed():
    t = grassblow.Triple(2, 3, 8)
    assert (t.s, t.p, t.n) == (6, 3, 8)
    assert t.input == (2, 3, 8)
    assert t.transforms == ["USD"]


def test_anticanonical_degree():
    t = grassblow.Triple(5, 3, 9)
    assert t.regime == "R1"
    assert t.r == 3
    assert t.anticanonical()[0] == Fraction(9)
    assert sum(t.block_sizes()) == 84


def test_certificates():
    t = grassblow.Triple(5, 3, 9)
    for side in ("minus", "plus"):
        for j in range(1, t.r + 1):
            cert = t.certify(side, j)
            assert cert["status"] == "interior"
            assert cert["verified"]
            assert all(v > 0 for v in cert["coefficients"].values())
            delta = t.delta_certificate(side, j)
            assert delta["verified"]


def test_identity_suite_flags_only_listed_lines():
    t = grassblow.Triple(3, 3, 6)
    bad = [r["id"] for r in t.identity_suite("plus", 2) if r["status"] == "discrepancy"]
    assert bad == ["plus.sum"]


def test_atlas():
    t = grassblow.Triple(4, 3, 7)
    assert t.chart_count(1) == 8
    sweep = t.transition_sweep(1, points=2)
    assert sweep["passed"] and sweep["consistent"] == 64 * 2
    assert grassblow.orbit_pair_count(3) == 20


def test_errors():
    with pytest.raises(ValueError):
        grassblow.Triple(0, 1, 2)
    with pytest.raises(NotImplementedError):
        grassblow.Triple(2, 1, 3).certify("minus", 1)
    with pytest.raises(ValueError):
        grassblow.Triple(5, 3, 9).certify("sideways", 1)
