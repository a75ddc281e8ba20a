"""Independent re-checking of a finished construction, and certified evaluation.

Nothing here trusts the incremental bookkeeping of the engine: the f*
polynomial is re-expanded from the recorded stage data with a separate
dictionary product, annihilators are re-evaluated at their points, and all
magnitude claims go through interval certification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any, Sequence, Union

from .bundle import FunctionBundle, PipelineResult, conj_point, eval_exact
from .geometry import dot, is_complex_collinear
from .intervals import ComplexBox, Cert, cert_abs_lt, enclose, sqrt_upper
from .poly import full_support, lex_monomials
from .scalars import GaussRat, PiExpr, format_rat
from .steering import ConstructionState, delta_bound, s_bound

ALGEBRAIC = "Algebraic"
TRANSCENDENTAL = "Transcendental"


def transcendence_verdict(v: PiExpr) -> str:
    """Nonzero pi-degree means transcendental: pi is transcendental over Q-bar."""
    deg = PiExpr.coerce(v).pi_degree
    return TRANSCENDENTAL if deg is not None and deg >= 1 else ALGEBRAIC


# ---------------------------------------------------------------------------
# tail bounds


def tail_bound(D: int, R: Fraction | int) -> Fraction:
    """Rational upper bound for sum_{n > D} max(1, R)^n / n!.

    Uses the geometric closed form r^(D'+1) / ((D'+1)! (1 - r/(D'+2))) after
    summing explicit terms until r < D' + 2.
    """
    r = max(Fraction(1), Fraction(R))
    if D < 0:
        D = -1
    total = Fraction(0)
    d = D
    while r >= d + 2:
        d += 1
        total += r**d / factorial(d)
    return total + r ** (d + 1) / (factorial(d + 1) * (1 - r / (d + 2)))


def sup_norm_upper(z: Sequence[GaussRat]) -> Fraction:
    return max((sqrt_upper(c.norm()) for c in z), default=Fraction(0))


def bundle_tail_bound(bundle: FunctionBundle, D: int, R: Fraction) -> Fraction:
    """Tail of the assembled function past degree D on the polydisc of radius R.

    f* contributes tail_bound(D, R); each subfunction f_S contributes
    R^|S| times its own tail past D - |S|.
    """
    r = max(Fraction(1), Fraction(R))
    total = tail_bound(D, r)
    for S, sub in bundle.subfunctions.items():
        total += r ** len(S) * bundle_tail_bound(sub, D - len(S), r)
    return total


@dataclass
class EvalResult:
    box: ComplexBox
    prefix_value: PiExpr
    inflation: Fraction
    degree: int
    radius: Fraction


def certified_eval(
    obj: Union[FunctionBundle, ConstructionState],
    z: Sequence[GaussRat],
    precision: int = 64,
    radius: Fraction | None = None,
) -> EvalResult:
    """Box containing the value of the completed function at ``z``.

    ``radius`` (if given) must dominate the sup-norm of ``z``; the tail bound is
    taken on that polydisc.
    """
    z = tuple(GaussRat.coerce(c) for c in z)
    if radius is None:
        R = sup_norm_upper(z)
    else:
        R = Fraction(radius)
        if any(c.norm() > R * R for c in z):
            raise ValueError("radius is smaller than the sup-norm of the point")
    if isinstance(obj, ConstructionState):
        D = obj.finalized_degree
        value = obj.prefix().eval(z)
        inflation = tail_bound(D, R)
    else:
        D = obj.degree
        value = obj.prefix().eval(z)
        inflation = bundle_tail_bound(obj, D, R)
    box = enclose(value, precision).inflate(inflation)
    return EvalResult(box, value, inflation, D, R)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Check:
    name: str
    statement: str
    evidence_kind: str
    passed: bool
    detail: list[Any] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "evidence": {"kind": self.evidence_kind, "detail": self.detail},
            "pass": self.passed,
        }


@dataclass
class Certificate:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, statement: str, kind: str, failures: list, detail: list | None = None) -> Check:
        check = Check(name, statement, kind, not failures, failures if failures else (detail or []))
        self.checks.append(check)
        return check

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"version": 1, "pass": self.passed, "checks": [c.to_json() for c in self.checks]}


def _pt(u: Sequence[GaussRat]) -> list:
    return [c.to_json() for c in u]


# -- independent expansion ---------------------------------------------------


def _dict_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, GaussRat(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _expand_planes(planes, m: int) -> dict:
    if not planes:
        return {(1,) * m: GaussRat(1)}
    poly = {(0,) * m: GaussRat(1)}
    for h in planes:
        lin = {(0,) * m: -h.lam}
        for i, c in enumerate(h.mu):
            if c:
                e = [0] * m
                e[i] = 1
                lin[tuple(e)] = c
        poly = _dict_mul(poly, lin)
    return poly


def _accumulate(acc: dict, base: dict, shift: Sequence[int], delta: PiExpr) -> None:
    if not delta:
        return
    for e, c in base.items():
        key = tuple(a + b for a, b in zip(e, shift))
        new = acc.get(key, PiExpr()) + delta.scale(c)
        if new:
            acc[key] = new
        else:
            acc.pop(key, None)


def reexpand(state: ConstructionState) -> tuple[dict, list[dict]]:
    """Rebuild f* from the stage log alone; also return the snapshot after each stage."""
    m = state.m
    acc: dict = {}
    snapshots = []
    prev_planes: tuple = ()
    for rec in state.stages:
        if rec.n == 1:
            _accumulate(acc, {(1,) * m: GaussRat(1)}, (0,) * m, rec.delta0)
        else:
            _accumulate(acc, _expand_planes(prev_planes, m), (rec.n,) + (1,) * (m - 1), rec.delta0)
        a_n = _expand_planes(rec.hyperplanes, m)
        for corr in rec.corrections:
            _accumulate(acc, a_n, corr.exp, corr.delta)
        prev_planes = rec.hyperplanes
        snapshots.append(dict(acc))
    if state.stages:
        last = _expand_planes(state.stages[-1].hyperplanes, m)
    else:
        last = {(0,) * m: GaussRat(1)}
    for ext in state.extensions:
        for corr in ext.corrections:
            _accumulate(acc, last, corr.exp, corr.delta)
        snapshots.append(dict(acc))
    return acc, snapshots


# -- state checks ------------------------------------------------------------


def check_state(state: ConstructionState, cert: Certificate | None = None, prefix: str = "") -> Certificate:
    cert = cert if cert is not None else Certificate()
    m = state.m
    p_max = state.p_max
    tag = f"{prefix}{state.path}:"

    fails = []
    for rec in state.stages:
        a_n = rec.annihilator_cur
        for j, u in enumerate(state.points[: rec.n], start=1):
            if a_n.eval(u):
                fails.append({"stage": rec.n, "point": j, "issue": "A_n(u_j) != 0"})
        if not a_n.eval((GaussRat(0),) * m):
            fails.append({"stage": rec.n, "issue": "A_n(0) = 0"})
        if not a_n.eval(rec.witness):
            fails.append({"stage": rec.n, "issue": "A_n(u_next) = 0"})
        if _expand_planes(rec.hyperplanes, m) != {e: c.as_gauss() for e, c in a_n.terms.items()}:
            fails.append({"stage": rec.n, "issue": "A_n differs from the product of its hyperplanes"})
    cert.add(
        tag + "annihilator",
        "A_n(u_j) = 0 for j <= n, A_n(0) != 0, A_n(u_{n+1}) != 0",
        "exact equality",
        fails,
        [{"stages": len(state.stages)}],
    )

    fails = []
    for rec in state.stages:
        for j, (h, u) in enumerate(zip(rec.hyperplanes, state.points), start=1):
            if not h.lam:
                fails.append({"stage": rec.n, "plane": j, "issue": "lambda = 0"})
            if h.contains(rec.witness):
                fails.append({"stage": rec.n, "plane": j, "issue": "u_next on plane"})
            if not h.contains(u):
                fails.append({"stage": rec.n, "plane": j, "issue": "u_j off plane"})
            if not is_complex_collinear(u, rec.witness) and dot(h.mu, rec.witness):
                fails.append({"stage": rec.n, "plane": j, "issue": "parallel plane not parallel"})
    cert.add(tag + "hyperplanes", "lambda != 0; u_j on plane; u_{n+1} off plane; parallel when non-collinear",
             "exact equality", fails)

    fails = []
    for rec in state.stages:
        want = comb(rec.n + m - 2, m - 1)
        got = [c.exp for c in rec.corrections]
        if len(got) != want or got != lex_monomials(rec.n + m - 1, m):
            fails.append({"stage": rec.n, "expected": want, "got": len(got)})
    cert.add(tag + "correction-count", "one correction per monomial of degree n+m-1, in lex order",
             "structural scan", fails)

    fails = []
    checked = 0
    for d in range(m, state.finalized_degree + 1):
        s = s_bound(d, m)
        for j in lex_monomials(d, m):
            checked += 1
            c = state.fstar.coeff(j)
            if not c.is_pi_free():
                fails.append({"exp": list(j), "issue": "not pi-free"})
                continue
            g = c.constant()
            if not g.in_K():
                fails.append({"exp": list(j), "issue": "real part zero", "value": g.to_json()})
            elif cert_abs_lt(c, s, p_max) is not Cert.PROVED:
                fails.append({"exp": list(j), "issue": "|c| >= s_d", "value": g.to_json(), "s_d": format_rat(s)})
    cert.add(tag + "coefficient-bound", "finalized coefficients are pi-free, in K, nonzero, |c| < s_d",
             "interval bound", fails, [{"coefficients": checked}])

    fails = []
    for rec in state.stages:
        if not rec.delta0:
            fails.append({"stage": rec.n, "issue": "delta0 = 0"})
        elif rec.bound != delta_bound(rec.n, m):
            fails.append({"stage": rec.n, "issue": "wrong radius recorded"})
        elif cert_abs_lt(rec.delta0, delta_bound(rec.n, m), p_max) is not Cert.PROVED:
            fails.append({"stage": rec.n, "issue": "|delta0| not certified below s_{n+m-1}/(n+m-1)"})
    cert.add(tag + "delta-bound", "0 < |delta_{n,0}| < s_{n+m-1}/(n+m-1)", "interval bound", fails)

    fails = [list(e) for e in state.fstar.terms if not full_support(e)]
    for i in range(m):
        probe = tuple(GaussRat(0) if k == i else GaussRat(k + 2, 1) for k in range(m))
        if state.fstar.eval(probe):
            fails.append({"zero_coordinate": i + 1, "issue": "f* nonzero on coordinate hyperplane"})
    cert.add(tag + "full-support", "every monomial of f* has all exponents >= 1", "structural scan", fails)

    rebuilt, snapshots = reexpand(state)
    fails = []
    if rebuilt != state.fstar.terms:
        diff = set(rebuilt) ^ set(state.fstar.terms)
        diff |= {e for e in set(rebuilt) & set(state.fstar.terms) if rebuilt[e] != state.fstar.terms[e]}
        fails = [list(e) for e in sorted(diff)][:20]
    cert.add(tag + "oracle-equivalence", "f* equals the independent re-expansion of the stage log",
             "exact equality", fails, [{"terms": len(rebuilt)}])

    fails = []
    degrees = [rec.n + m - 1 for rec in state.stages] + [ext.degree for ext in state.extensions]
    for snap, d in zip(snapshots, degrees):
        for e in set(snap) | set(rebuilt):
            if sum(e) <= d and snap.get(e) != rebuilt.get(e):
                fails.append({"after_degree": d, "exp": list(e)})
    cert.add(tag + "finalization-stability", "coefficients of finalized degrees never change later",
             "exact equality", fails[:20])

    fails = []
    for rec in state.stages:
        u = rec.point
        value = rec.offset + state.fstar.eval(u)
        if value != rec.pinned_value:
            fails.append({"stage": rec.n, "issue": "offset + f*(u) differs from pinned value"})
        if not state.selectors[rec.n - 1].contains(rec.pinned_value):
            fails.append({"stage": rec.n, "issue": "pinned value outside target set"})
    cert.add(tag + "pinned-values", "offset_j + f*(u_j) equals the chosen target, which lies in E_{u_j}",
             "exact equality", fails)
    return cert


# -- bundle checks -------------------------------------------------------------


def check_bundle(bundle: FunctionBundle, cert: Certificate | None = None) -> Certificate:
    cert = cert if cert is not None else Certificate()
    for comp in bundle.components():
        check_state(comp.fstar, cert)
        tag = f"{comp.path}:"
        fails = []
        if not comp.a0.in_K():
            fails.append({"issue": "a0 not in K"})
        for p in comp.points:
            u = p.coords
            try:
                v = eval_exact(comp, u)
            except Exception as exc:  # recorded, not raised
                fails.append({"point": _pt(u), "issue": str(exc)})
                continue
            if v != comp.values[u]:
                fails.append({"point": _pt(u), "issue": "value differs from recorded target"})
            if not p.selector.contains(v):
                fails.append({"point": _pt(u), "issue": f"value outside {p.selector.describe()}"})
        cert.add(tag + "point-values", "f(u) is exact and lies in E_u at every constraint point",
                 "exact equality", fails, [{"points": len(comp.points)}])

        fails = []
        prefix = comp.prefix()
        k = comp.arity
        for e, c in prefix.terms.items():
            S = frozenset(i for i, x in enumerate(e) if x)
            if not S:
                source = PiExpr.coerce(comp.a0)
            elif len(S) == k:
                source = comp.fstar.fstar.coeff(e)
            else:
                inner = tuple(e[i] - 1 for i in sorted(S))
                source = comp.subfunctions[S].prefix().coeff(inner)
            if source != c:
                fails.append({"exp": list(e), "issue": "coefficient not from its support component"})
        cert.add(tag + "support-decomposition", "each coefficient comes only from the component of its support",
                 "structural scan", fails)

        fails = []
        count = 0
        for e in _all_monomials(k, comp.degree):
            count += 1
            c = prefix.coeff(e)
            if not c.is_pi_free() or not c.constant().in_K():
                fails.append({"exp": list(e), "value": c.to_json()})
        cert.add(tag + "prefix-in-K", "every coefficient of degree <= D is pi-free with nonzero real part",
                 "structural scan", fails[:20], [{"monomials": count, "degree": comp.degree}])
    return cert


def _all_monomials(m: int, D: int):
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for x in range(remaining + 1):
            yield from rec(prefix + [x], remaining - x, slots - 1)

    return rec([], D, m)


def check_pipeline(result: PipelineResult, cert: Certificate | None = None) -> Certificate:
    cert = check_bundle(result.bundle, cert)
    psi = result.psi
    fails = []
    for e, c in psi.coeffs.items():
        if not c:
            fails.append({"exp": list(e), "issue": "zero coefficient"})
    for e in _all_monomials(psi.arity, psi.degree):
        if e not in psi.coeffs:
            fails.append({"exp": list(e), "issue": "missing"})
    cert.add("psi:rational-coefficients", "psi prefix coefficients are rational (imaginary part 0) and nonzero",
             "structural scan", fails[:20], [{"terms": len(psi.coeffs)}])

    fails = []
    for u, fu in result.bundle.values.items():
        expected = (fu + result.bundle.values[conj_point(u)].conj()) / 2
        if psi.values[u] != expected:
            fails.append({"point": _pt(u)})
    cert.add("psi:value-law", "psi(u) = (f(u) + conj(f(conj u))) / 2", "exact equality", fails)

    fails = []
    s_set = set(result.s_points)
    for r in result.reports:
        want = ALGEBRAIC if r.coords in s_set else TRANSCENDENTAL
        if r.verdict != want or transcendence_verdict(r.psi_value) != want:
            fails.append({"point": _pt(r.coords), "verdict": r.verdict})
        if r.witness is not None:
            n, l = r.witness["n"], r.witness["l"]
            g1 = GaussRat.from_json(r.witness["gamma1"])
            g2 = GaussRat.from_json(r.witness["gamma2"])
            rebuilt = (PiExpr.pi_power(n, g1) + PiExpr.pi_power(l, g2)) / 2
            if not g1 or not g2 or rebuilt != r.psi_value:
                fails.append({"point": _pt(r.coords), "issue": "witness does not reproduce psi"})
    if result.exceptional_inputs() != s_set:
        fails.append({"issue": "algebraic inputs differ from S"})
    cert.add("psi:exceptional-set", "inputs with algebraic psi-value are exactly S", "exact equality", fails)
    return cert


def check_all(obj: Union[ConstructionState, FunctionBundle, PipelineResult]) -> Certificate:
    if isinstance(obj, PipelineResult):
        return check_pipeline(obj)
    if isinstance(obj, FunctionBundle):
        return check_bundle(obj)
    return check_state(obj)


__all__ = [
    "ALGEBRAIC",
    "TRANSCENDENTAL",
    "Certificate",
    "Check",
    "EvalResult",
    "bundle_tail_bound",
    "certified_eval",
    "check_all",
    "check_bundle",
    "check_pipeline",
    "check_state",
    "reexpand",
    "sup_norm_upper",
    "tail_bound",
    "transcendence_verdict",
]
