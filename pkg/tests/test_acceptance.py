"""Acceptance criteria 1-7. Each test prints one PASS/FAIL line.

Pinned tolerances: every numeric comparison is exact (tolerance 0) except the
runtime limits (criterion 1: 1 s, criterion 2: 60 s per configuration) and the
tail check in criterion 5, which is the certified bound tail_bound(7, 2) = 2/245.
"""

import random
import time
from fractions import Fraction

import pytest

from exset.bundle import exceptional_pipeline
from exset.cli import run_cli
from exset.intervals import Cert, cert_abs_lt
from exset.scalars import GaussRat, PiExpr
from exset.selectors import Policy
from exset.steering import extend_prefix, run
from exset.verify import certified_eval, check_all, reexpand, tail_bound

from conftest import FIXTURES, g, pt, random_points

SEEDS = (1, 2, 3)
ARITIES = (1, 2, 3)
N_POINTS = 8


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


_suite_cache = {}


def suite_run(m, seed):
    if (m, seed) not in _suite_cache:
        pts = random_points(m, N_POINTS, 1000 + m)
        t0 = time.perf_counter()
        state = run(pts, seed=seed)
        cert = check_all(state)
        _suite_cache[m, seed] = (state, cert, time.perf_counter() - t0)
    return _suite_cache[m, seed]


def test_criterion_1_walkthrough(report):
    t0 = time.perf_counter()
    s = run([pt(1), pt(2)], [PiExpr([1]), PiExpr([1])], seed=1, policy=Policy.SMALLEST_DENOMINATOR)
    elapsed = time.perf_counter() - t0
    f1, f2 = s.stages[0].pinned_value, s.stages[1].pinned_value
    c1, c2 = s.fstar.coeff((1,)), s.fstar.coeff((2,))
    ok = (f1 == PiExpr([Fraction(3, 2)]) and f2 == PiExpr([Fraction(5, 2)])
          and c1 == PiExpr([Fraction(1, 2)]) and c2 == PiExpr([Fraction(-1, 8)]) and elapsed < 1.0)
    report(1, ok, f"f(1)={f1.constant()}, f(2)={f2.constant()}, c1={c1.constant()}, c2={c2.constant()}, "
                  f"{elapsed:.3f}s (limit 1s)")


@pytest.mark.parametrize("m", ARITIES, ids=lambda m: f"m{m}")
@pytest.mark.parametrize("seed", SEEDS, ids=lambda s: f"seed{s}")
def test_criterion_2_invariant_suite(report, m, seed):
    state, cert, elapsed = suite_run(m, seed)
    ok = cert.passed and len(state.stages) == N_POINTS and elapsed < 60
    report(2, ok, f"m={m} N={N_POINTS} seed={seed}: {len(cert.checks)} checks, "
                  f"failed={cert.failed()}, {elapsed:.2f}s (limit 60s)")


@pytest.mark.parametrize("m", ARITIES, ids=lambda m: f"m{m}")
@pytest.mark.parametrize("seed", SEEDS, ids=lambda s: f"seed{s}")
def test_criterion_3_oracle_equivalence(report, m, seed):
    state, cert, _ = suite_run(m, seed)
    full, _ = reexpand(state)
    ok = full == dict(state.fstar.terms) and cert.get(f"{state.path}:oracle-equivalence").passed
    report(3, ok, f"m={m} seed={seed}: {len(full)} terms match the independent re-expansion exactly")


def test_criterion_4_exceptional_pipeline(report):
    S = [pt(0, 0), pt(1, 1), (g(0, 1), g(2)), (g(0, -1), g(2))]
    V = [pt(2, 3), (g(1, 1), g(1)), (g(1, -1), g(1))]
    r = exceptional_pipeline(S, V, 2, seed=1)
    coeffs = r.psi.coeffs
    real_nonzero = all(isinstance(c, Fraction) and c != 0 for c in coeffs.values())
    imag_zero = all(c.as_gauss().re == coeffs[e] for e, c in r.bundle.prefix().terms.items())
    verdicts = {x.coords: x.verdict for x in r.reports}
    on_S = all(verdicts[u] == "Algebraic" for u in S)
    on_V = all(verdicts[v] == "Transcendental" for v in V)
    witnesses_ok = True
    for x in r.reports:
        if x.coords in V:
            w = x.witness
            n, l = w["n"], w["l"]
            g1, g2 = GaussRat.from_json(w["gamma1"]), GaussRat.from_json(w["gamma2"])
            expect = (PiExpr.pi_power(n, g1) + PiExpr.pi_power(l, g2)) / 2
            witnesses_ok &= bool(g1) and bool(g2) and x.psi_value == expect
    ok = real_nonzero and imag_zero and on_S and on_V and witnesses_ok and check_all(r).passed
    report(4, ok, f"{len(coeffs)} psi coefficients real and nonzero, S algebraic, V transcendental, "
                  f"witnesses (g1 pi^n + g2 pi^l)/2 verified exactly")


def test_criterion_5_tail_bound(report):
    D, R = 7, Fraction(2)
    rng = random.Random(5)
    pts = random_points(2, 6, 55)
    state = run(pts, seed=1)
    assert state.finalized_degree == D
    longer = extend_prefix(state, D + 3)
    bound = tail_bound(D, R)
    ok = bound < Fraction(1, 63)
    worst = Fraction(0)
    for _ in range(20):
        z = tuple(g(Fraction(rng.randint(-16, 16), 8), Fraction(rng.randint(-16, 16), 8)) for _ in range(2))
        z = tuple(c if c.norm() <= 4 else g(c.re / 2, c.im / 2) for c in z)
        res = certified_eval(state, z, precision=64, radius=R)
        ok &= res.inflation == bound
        diff = longer.prefix(D + 3).eval(z) - state.prefix(D).eval(z)
        ok &= cert_abs_lt(diff, bound) is Cert.PROVED
        worst = max(worst, diff.constant().norm())
    report(5, ok, f"D={D}: inflation tail_bound(7,2)={bound} < 1/63; 20 points, "
                  f"max |prefix_10 - prefix_7|^2 = {float(worst):.3g} < bound^2 = {float(bound**2):.3g}")


def test_criterion_6_seed_dependence(report):
    results = []
    for m in ARITIES:
        s1, c1, _ = suite_run(m, 1)
        s2, c2, _ = suite_run(m, 2)
        results.append(s1.prefix() != s2.prefix() and c1.passed and c2.passed)
    report(6, all(results), f"seeds 1 and 2 give different finalized prefixes for m in {ARITIES}, both certified")


def test_criterion_7_determinism(report, tmp_path):
    same = True
    names = ("series.json", "stagelog.json", "report.json", "certificate.json", "psi.json")
    for fixture in ("walkthrough.json", "exceptional_2d.json"):
        outs = []
        for k in range(2):
            out = tmp_path / f"{fixture}-{k}"
            assert run_cli(["--input", str(FIXTURES / fixture), "--out", str(out), "--verify",
                            *(["--emit-psi"] if "exceptional" in fixture else [])]) == 0
            outs.append(out)
        for name in names:
            a, b = outs[0] / name, outs[1] / name
            if a.exists() or b.exists():
                same &= a.read_bytes() == b.read_bytes()
    report(7, same, "two runs per fixture produce byte-identical series, stage log, report, certificate, psi")
