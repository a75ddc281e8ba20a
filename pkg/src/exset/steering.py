"""Stagewise construction of the full-support part f* of the function.

Stage n steers the value at the n-th point into its target set with a single
scalar delta_{n,0} multiplying a polynomial that vanishes at all earlier
points, then pushes every coefficient of degree n+m-1 into K under the
coefficient bound s_{n+m-1} using corrections z^j * A_n, which vanish at the
first n points and so leave every pinned value alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import ArityMismatch, DegenerateConfiguration, NotPinned, SteeringStuck
from .geometry import Hyperplane, Point, annihilator_from_planes, build_hyperplanes
from .intervals import DEFAULT_MAX_PRECISION, Cert, abs_lower, cert_abs_lt
from .poly import ExpVec, MPoly, lex_monomials
from .scalars import GaussRat, PiExpr
from .selectors import MAX_ATTEMPTS, Policy, TargetSelector, pick_k


def s_bound(d: int, m: int) -> Fraction:
    """Coefficient cap for degree d: 1 / (C(d-1, m-1) * d!)."""
    if d < m or m < 1:
        raise ValueError(f"s_bound needs d >= m >= 1, got d={d}, m={m}")
    return Fraction(1, comb(d - 1, m - 1) * factorial(d))


def delta_bound(n: int, m: int) -> Fraction:
    """Radius for the steering scalar at stage n: s_{n+m-1} / (n+m-1)."""
    d = n + m - 1
    return s_bound(d, m) / d


@dataclass(frozen=True)
class Correction:
    exp: ExpVec
    delta: PiExpr
    final_coeff: GaussRat

    def to_json(self) -> dict:
        return {"exp": list(self.exp), "delta": self.delta.to_json(), "final": self.final_coeff.to_json()}


@dataclass(frozen=True)
class StageRecord:
    n: int
    point: Point
    offset: PiExpr
    center: PiExpr
    coef: GaussRat
    bound: Fraction
    delta0: PiExpr
    pinned_value: PiExpr
    attempts: int
    annihilator_prev: MPoly
    witness: Point | None = None
    hyperplanes: tuple[Hyperplane, ...] = ()
    annihilator_cur: MPoly | None = None
    corrections: tuple[Correction, ...] = ()

    @property
    def degree(self) -> int:
        return self.n + len(self.point) - 1

    def steering_poly(self) -> MPoly:
        """The polynomial multiplied by delta0: A_0 at stage 1, z1^n z2..zm A_{n-1} after."""
        m = len(self.point)
        if self.n == 1:
            return self.annihilator_prev
        return self.annihilator_prev.shift((self.n,) + (1,) * (m - 1))


@dataclass(frozen=True)
class ExtensionRecord:
    """Finalization of one degree beyond the last stage, using A_N (or 1 when N = 0)."""

    degree: int
    corrections: tuple[Correction, ...]


@dataclass(frozen=True)
class ConstructionState:
    m: int
    points: tuple[Point, ...]
    offsets: tuple[PiExpr, ...]
    selectors: tuple[TargetSelector, ...]
    seed: int = 0
    policy: Policy = Policy.SEEDED
    p_max: int = DEFAULT_MAX_PRECISION
    path: str = "f*"
    stages: tuple[StageRecord, ...] = ()
    extensions: tuple[ExtensionRecord, ...] = ()
    fstar: MPoly = None  # type: ignore[assignment]
    finalized_degree: int = 0
    synthetic_witness: Point | None = None
    _pending: bool = field(default=False, repr=False)

    @property
    def completed(self) -> int:
        """Number of fully finalized stages."""
        return len(self.stages) - (1 if self._pending else 0)

    def rng(self, *tag: object) -> random.Random:
        return random.Random("/".join([str(self.seed), self.path, *map(str, tag)]))

    def prefix(self, degree: int | None = None) -> MPoly:
        """Finalized full-support coefficients up to ``degree`` (default: all finalized)."""
        d = self.finalized_degree if degree is None else degree
        if d > self.finalized_degree:
            raise ValueError(f"degree {d} is beyond the finalized degree {self.finalized_degree}")
        return self.fstar.truncate(d)

    def last_annihilator(self) -> MPoly:
        if not self.stages:
            return MPoly.constant(self.m, 1)
        return self.stages[-1].annihilator_cur

    def next_point(self, n: int) -> Point:
        """u_{n+1}, or the synthetic witness after the last input point."""
        if n < len(self.points):
            return self.points[n]
        return self.synthetic_witness


def _synthetic_witness(m: int, points: Sequence[Point]) -> Point:
    taken = set(points)
    w = 2
    while True:
        cand = (GaussRat(w),) + (GaussRat(1),) * (m - 1)
        if cand not in taken:
            return cand
        w += 1


def new_state(
    points: Sequence[Sequence[GaussRat]],
    offsets: Sequence[PiExpr] | None = None,
    selectors: Sequence[TargetSelector] | None = None,
    *,
    seed: int = 0,
    policy: Policy | str = Policy.SEEDED,
    p_max: int = DEFAULT_MAX_PRECISION,
    m: int | None = None,
    path: str = "f*",
) -> ConstructionState:
    from .selectors import GaussianK

    pts = tuple(tuple(GaussRat.coerce(c) for c in p) for p in points)
    if m is None:
        if not pts:
            raise ValueError("arity is required when there are no points")
        m = len(pts[0])
    for p in pts:
        if len(p) != m:
            raise ArityMismatch(f"point of length {len(p)} in arity {m}")
    if len(set(pts)) != len(pts):
        raise DegenerateConfiguration("points are not distinct")
    offs = tuple(PiExpr.coerce(o) for o in (offsets if offsets is not None else [PiExpr()] * len(pts)))
    sels = tuple(selectors) if selectors is not None else tuple(GaussianK() for _ in pts)
    if len(offs) != len(pts) or len(sels) != len(pts):
        raise ValueError("offsets and selectors must match the points")
    return ConstructionState(
        m=m,
        points=pts,
        offsets=offs,
        selectors=sels,
        seed=seed,
        policy=Policy(policy),
        p_max=p_max,
        path=path,
        fstar=MPoly.zero(m),
        finalized_degree=m - 1,
        synthetic_witness=_synthetic_witness(m, pts),
    )


def stage_advance(state: ConstructionState, n: int) -> ConstructionState:
    """Choose delta_{n,0} so that offset_n + f*(u_n) lands in the n-th target set."""
    if n != state.completed + 1 or state._pending:
        raise ValueError(f"stage {n} requested but {state.completed} stages are complete")
    if n > len(state.points):
        raise ValueError(f"stage {n} needs a point; only {len(state.points)} given")
    m = state.m
    u = state.points[n - 1]
    if any(not c for c in u):
        raise DegenerateConfiguration(f"point u_{n} has a zero coordinate", location=f"stage {n}")

    if n == 1:
        prev = MPoly.monomial((1,) * m)
    else:
        prev = state.stages[-1].annihilator_cur
    record = StageRecord(
        n=n, point=u, offset=state.offsets[n - 1], center=PiExpr(), coef=GaussRat(0),
        bound=Fraction(0), delta0=PiExpr(), pinned_value=PiExpr(), attempts=0, annihilator_prev=prev,
    )
    base = record.steering_poly()
    coef_val = base.eval(u)
    assert coef_val.is_pi_free() and coef_val, "steering coefficient vanished"
    coef = coef_val.constant()
    bound = delta_bound(n, m)
    center = state.offsets[n - 1] + state.fstar.eval(u)
    radius = bound * abs_lower(coef)
    rng = state.rng("stage", n, "steer")

    chosen = None
    attempts = 0
    for t in state.selectors[n - 1].candidates(center, radius, state.policy, rng):
        attempts += 1
        delta = (t - center) / coef
        if delta and cert_abs_lt(delta, bound, state.p_max) is Cert.PROVED:
            chosen = (t, delta)
            break
        if attempts >= MAX_ATTEMPTS:
            break
    if chosen is None:
        raise SteeringStuck(
            f"no admissible target for {state.selectors[n - 1].describe()} after {attempts} attempts",
            location=f"{state.path} stage {n}",
        )
    t, delta = chosen
    record = replace(record, center=center, coef=coef, bound=bound, delta0=delta, pinned_value=t, attempts=attempts)
    return replace(
        state,
        stages=state.stages + (record,),
        fstar=state.fstar + base.scale(delta),
        _pending=True,
    )


def _land_layer(
    state: ConstructionState, fstar: MPoly, d: int, annihilator: MPoly, rng: random.Random
) -> tuple[MPoly, tuple[Correction, ...]]:
    m = state.m
    a0 = annihilator.coeff((0,) * m)
    assert a0.is_pi_free() and a0, "annihilator vanishes at the origin"
    a0 = a0.constant()
    s = s_bound(d, m)
    corrections = []
    for j in lex_monomials(d, m):
        old = fstar.coeff(j)
        if old.is_pi_free() and old.constant().in_K() and old.constant().norm() < s * s:
            corrections.append(Correction(j, PiExpr(), old.constant()))
            continue
        k = pick_k(state.policy, rng, s)
        delta = (PiExpr.coerce(k) - old) / a0
        fstar = fstar + annihilator.shift(j).scale(delta)
        assert fstar.coeff(j) == k
        corrections.append(Correction(j, delta, k))
    return fstar, tuple(corrections)


def finalize_degree(state: ConstructionState, n: int) -> ConstructionState:
    """Correct every coefficient of degree n+m-1 into K under s_{n+m-1}."""
    if not state._pending or state.stages[-1].n != n:
        raise ValueError(f"stage {n} has not been advanced")
    m = state.m
    record = state.stages[-1]
    witness = state.next_point(n)
    planes = tuple(build_hyperplanes(state.points[:n], witness))
    a_n = annihilator_from_planes(planes, m)
    d = n + m - 1
    fstar, corrections = _land_layer(state, state.fstar, d, a_n, state.rng("stage", n, "land"))
    record = replace(record, witness=witness, hyperplanes=planes, annihilator_cur=a_n, corrections=corrections)
    return replace(
        state,
        stages=state.stages[:-1] + (record,),
        fstar=fstar,
        finalized_degree=d,
        _pending=False,
    )


def extend_prefix(state: ConstructionState, degree: int) -> ConstructionState:
    """Finalize degrees past the last stage with corrections z^j * A_N.

    A_N vanishes at every steered point, so pinned values are unchanged.
    """
    if state._pending:
        raise ValueError("finish the current stage first")
    fstar = state.fstar
    extensions = list(state.extensions)
    annihilator = state.last_annihilator()
    for d in range(state.finalized_degree + 1, degree + 1):
        if d < state.m:
            continue
        fstar, corrections = _land_layer(state, fstar, d, annihilator, state.rng("extend", d))
        extensions.append(ExtensionRecord(d, corrections))
    return replace(
        state,
        fstar=fstar,
        extensions=tuple(extensions),
        finalized_degree=max(state.finalized_degree, degree),
    )


def pinned_value(state: ConstructionState, j: int) -> PiExpr:
    """offset_j + f*(u_j), fixed once stage j has run."""
    if not 1 <= j <= len(state.stages):
        raise NotPinned(f"stage {j} has not been run", location=state.path)
    return state.stages[j - 1].pinned_value


def run(
    points: Sequence[Sequence[GaussRat]],
    offsets: Sequence[PiExpr] | None = None,
    selectors: Sequence[TargetSelector] | None = None,
    seed: int = 0,
    n_stages: int | None = None,
    *,
    policy: Policy | str = Policy.SEEDED,
    p_max: int = DEFAULT_MAX_PRECISION,
    m: int | None = None,
    degree: int | None = None,
    path: str = "f*",
) -> ConstructionState:
    """Run ``n_stages`` stages (default: one per point), then extend to ``degree`` if given."""
    state = new_state(points, offsets, selectors, seed=seed, policy=policy, p_max=p_max, m=m, path=path)
    n_stages = len(state.points) if n_stages is None else n_stages
    if not 0 <= n_stages <= len(state.points):
        raise ValueError(f"{n_stages} stages requested for {len(state.points)} points")
    for n in range(1, n_stages + 1):
        state = stage_advance(state, n)
        state = finalize_degree(state, n)
    if degree is not None:
        state = extend_prefix(state, degree)
    return state
