from dataclasses import replace
from fractions import Fraction
from math import factorial

from hypothesis import given, settings, strategies as st

from exset.bundle import PointSpec, build_bundle, exceptional_pipeline, projection_closure
from exset.intervals import enclose
from exset.poly import MPoly
from exset.scalars import PiExpr
from exset.selectors import GaussianK
from exset.steering import run
from exset.verify import (
    bundle_tail_bound,
    certified_eval,
    check_all,
    reexpand,
    tail_bound,
    transcendence_verdict,
)

from conftest import g, pt, random_points, walkthrough_state


def test_verdicts():
    assert transcendence_verdict(PiExpr([g(Fraction(3, 2), 1)])) == "Algebraic"
    assert transcendence_verdict(PiExpr.pi_power(3, Fraction(1, 2))) == "Transcendental"
    assert transcendence_verdict(PiExpr()) == "Algebraic"
    pi = PiExpr.pi_power(1)
    assert transcendence_verdict(pi * pi - PiExpr.pi_power(2)) == "Algebraic"
    w = (PiExpr.pi_power(2, g(1, 1)) + PiExpr.pi_power(5, g(-3))) / 2
    assert transcendence_verdict(w) == "Transcendental"


def test_tail_bound_values():
    assert tail_bound(10, 1) == Fraction(12, 11 * factorial(11))
    assert tail_bound(10, 0) == tail_bound(10, 1)
    assert tail_bound(7, 2) == Fraction(2, 245)
    assert tail_bound(7, 2) < Fraction(1, 63)


def test_tail_bound_dominates_series():
    # oracle: partial sums of the true tail sum_{n > D} r^n / n!
    for D, r in ((3, 1), (7, 2), (5, 4), (0, 10)):
        true_tail = sum(Fraction(r) ** n / factorial(n) for n in range(D + 1, D + 80))
        assert true_tail < tail_bound(D, r)


@settings(max_examples=50)
@given(st.integers(0, 30), st.fractions(min_value=0, max_value=12, max_denominator=7))
def test_tail_monotone(D, R):
    assert tail_bound(D + 1, R) < tail_bound(D, R)


def test_walkthrough_certificate(walkthrough):
    cert = check_all(walkthrough)
    assert cert.passed, cert.failed()
    names = [c.name for c in cert.checks]
    assert any(n.endswith("coefficient-bound") for n in names)


def test_empty_run_vacuous():
    assert check_all(run([], m=2)).passed


def test_fault_injection_coefficient():
    s = walkthrough_state()
    bad = replace(s, fstar=s.fstar + MPoly(1, {(1,): Fraction(3, 2)}))  # c_1 := 2
    cert = check_all(bad)
    failed = set(cert.failed())
    assert any(n.endswith("coefficient-bound") for n in failed)
    for ok in ("annihilator", "hyperplanes", "delta-bound", "correction-count", "full-support"):
        assert not any(n.endswith(ok) for n in failed), ok


def test_fault_injection_delta():
    s = walkthrough_state()
    rec = replace(s.stages[1], delta0=PiExpr([1]))
    cert = check_all(replace(s, stages=(s.stages[0], rec)))
    assert any(n.endswith("delta-bound") for n in cert.failed())


def test_oracle_reexpansion():
    s = run(random_points(2, 4, 3), seed=2, degree=8)
    full, _ = reexpand(s)
    assert full == {e: c for e, c in s.fstar.terms.items()}


def test_certified_eval_walkthrough(walkthrough):
    half = Fraction(1, 2)
    res = certified_eval(walkthrough, [g(half)], precision=40)
    assert res.inflation == tail_bound(2, half)
    assert res.prefix_value == PiExpr([half * half - Fraction(1, 8) * half * half])
    f_half = 1 + half * half - Fraction(1, 32)
    assert res.box.contains(res.prefix_value.constant())
    assert (PiExpr([1]) + res.prefix_value) == PiExpr([f_half])


def test_certified_eval_contains_pinned():
    b = build_bundle(2, projection_closure([PointSpec(pt(0, 0), GaussianK()),
                                            PointSpec(pt(1, 2), GaussianK())]), seed=1)
    for u, v in b.values.items():
        res = certified_eval(b, u, precision=64)
        box = enclose(v, 64)
        assert res.box.contains(box)
    res = certified_eval(b, pt(0, 0))
    assert res.box.contains(b.a0)


def test_bundle_tail_bound_composite():
    b = build_bundle(2, projection_closure([PointSpec(pt(0, 0), GaussianK()),
                                            PointSpec(pt(1, 1), GaussianK())]), seed=1)
    assert bundle_tail_bound(b, b.degree, 2) > tail_bound(b.degree, 2)


def test_pipeline_certificate():
    S = [pt(0, 0), pt(1, 1), (g(0, 1), g(2)), (g(0, -1), g(2))]
    V = [pt(2, 3), (g(1, 1), g(1)), (g(1, -1), g(1))]
    cert = check_all(exceptional_pipeline(S, V, 2, seed=1))
    assert cert.passed, cert.failed()
    assert cert.get("psi:exceptional-set").passed


def test_certificate_json_stable(walkthrough):
    a = check_all(walkthrough).to_json()
    b = check_all(walkthrough_state()).to_json()
    assert a == b and a["pass"] is True
