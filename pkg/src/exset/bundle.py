"""Assembly of the full function from its support-set pieces.

    f(z) = a0 + sum_{S proper} (prod_{i in S} z_i) f_S(z_S) + f*(z)

Each f_S is itself a bundle of arity |S|, built recursively in order of
increasing |S|; f* is produced by the steering engine over the points with
no zero coordinate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import BadProblem, DegenerateConfiguration, NotConjClosed, NotPinned, OriginMissing, OverlapSV
from .intervals import DEFAULT_MAX_PRECISION
from .poly import ExpVec, MPoly
from .scalars import GaussRat, PiExpr
from .selectors import GaussianK, PiPowerScaled, Policy, Shifted, TargetSelector, base_selector
from .steering import ConstructionState, extend_prefix, run

Point = tuple[GaussRat, ...]
Support = frozenset[int]

EXCEPTIONAL = "exceptional"
TRANSCENDENTAL = "transcendental"
PRESCRIBED = "prescribed"
AUXILIARY = "auxiliary"


@dataclass(frozen=True)
class PointSpec:
    coords: Point
    selector: TargetSelector
    role: str = PRESCRIBED
    pi_index: int | None = None
    label: str | None = None

    @property
    def support(self) -> Support:
        return support_of(self.coords)


def support_of(u: Sequence[GaussRat]) -> Support:
    return frozenset(i for i, c in enumerate(u) if c)


def project(u: Sequence[GaussRat], T: Iterable[int]) -> Point:
    """Zero every coordinate outside T."""
    keep = set(T)
    return tuple(c if i in keep else GaussRat(0) for i, c in enumerate(u))


def restrict(u: Sequence[GaussRat], S: Iterable[int]) -> Point:
    """u_S: the coordinates indexed by S, in increasing order."""
    return tuple(u[i] for i in sorted(S))


def conj_point(u: Sequence[GaussRat]) -> Point:
    return tuple(c.conj() for c in u)


def proper_supports(m: int) -> list[Support]:
    """Nonempty proper subsets of {0..m-1}, by size then lexicographically."""
    return [frozenset(c) for k in range(1, m) for c in combinations(range(m), k)]


def support_label(S: Iterable[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(S)) + "}"


def partition_by_support(points: Sequence[PointSpec], m: int) -> dict[Support, list[PointSpec]]:
    out: dict[Support, list[PointSpec]] = {}
    for p in points:
        if len(p.coords) != m:
            raise DegenerateConfiguration(f"point {p.coords} does not have {m} coordinates")
        out.setdefault(p.support, []).append(p)
    return out


def projection_closure(points: Sequence[PointSpec]) -> list[PointSpec]:
    """Add every coordinate-zeroed copy of every point as an auxiliary point."""
    out = list(points)
    seen = {p.coords for p in points}
    for p in points:
        supp = sorted(p.support)
        for k in range(len(supp) - 1, -1, -1):
            for T in combinations(supp, k):
                q = project(p.coords, T)
                if q not in seen:
                    seen.add(q)
                    out.append(PointSpec(q, GaussianK(), AUXILIARY))
    return out


def is_conj_closed(coords: Iterable[Point]) -> bool:
    s = set(coords)
    return all(conj_point(u) in s for u in s)


@dataclass
class FunctionBundle:
    arity: int
    a0: GaussRat
    subfunctions: dict[Support, "FunctionBundle"]
    fstar: ConstructionState
    points: list[PointSpec]
    values: dict[Point, PiExpr]
    thetas: dict[Point, PiExpr]
    degree: int
    path: str = "f"
    seed: int = 0
    policy: Policy = Policy.SEEDED

    def point_spec(self, u: Point) -> PointSpec:
        for p in self.points:
            if p.coords == u:
                return p
        raise NotPinned(f"{u} is not a constraint point", location=self.path)

    def prefix(self, degree: int | None = None) -> MPoly:
        """Finalized Taylor prefix of the assembled function up to ``degree``."""
        D = self.degree if degree is None else degree
        if D > self.degree:
            raise ValueError(f"degree {D} beyond finalized degree {self.degree}")
        k = self.arity
        poly = MPoly.constant(k, self.a0)
        for S, sub in self.subfunctions.items():
            if D - len(S) < 0:
                continue
            positions = sorted(S)
            shift = tuple(1 if i in S else 0 for i in range(k))
            poly = poly + sub.prefix(D - len(S)).embed(positions, k).shift(shift)
        return poly + self.fstar.prefix(D)

    def components(self) -> Iterable[FunctionBundle]:
        yield self
        for S in sorted(self.subfunctions, key=lambda s: (len(s), sorted(s))):
            yield from self.subfunctions[S].components()


def _rng(seed: int, path: str, *tag: object) -> random.Random:
    return random.Random("/".join([str(seed), path, *map(str, tag)]))


def theta(bundle_parts: Mapping[Support, FunctionBundle], a0: GaussRat, S: Support, u: Point) -> PiExpr:
    """a0 + sum over T strictly inside S of (prod_{i in T} u_i) f_T(u_T).

    Terms with T not inside S vanish because u has a zero coordinate in T.
    For the full-support offset pass S = the whole index set.
    """
    total = PiExpr.coerce(a0)
    for T, sub in bundle_parts.items():
        if not T < S:
            continue
        scale = GaussRat(1)
        for i in T:
            scale = scale * u[i]
        total = total + sub.values[restrict(u, T)].scale(scale)
    return total


def build_bundle(
    m: int,
    points: Sequence[PointSpec],
    seed: int = 0,
    degree: int | None = None,
    *,
    policy: Policy | str = Policy.SEEDED,
    p_max: int = DEFAULT_MAX_PRECISION,
    path: str = "f",
) -> FunctionBundle:
    """Build the bundle meeting every point's target, finalized to ``degree``.

    ``points`` must be projection-closed; the effective degree is at least
    N + m - 1 where N is the number of full-support points.
    """
    policy = Policy(policy)
    pts = list(points)
    coords = [p.coords for p in pts]
    if len(set(coords)) != len(coords):
        raise DegenerateConfiguration("constraint points are not distinct", location=path)
    present = set(coords)
    for u in coords:
        for T in proper_supports(m) + [frozenset()]:
            if project(u, T) not in present and T < support_of(u):
                raise DegenerateConfiguration(f"points are not projection-closed: {u}", location=path)
    parts = partition_by_support(pts, m)
    full = frozenset(range(m))
    n_full = len(parts.get(full, []))
    D = max(degree if degree is not None else 0, n_full + m - 1)

    values: dict[Point, PiExpr] = {}
    thetas: dict[Point, PiExpr] = {}
    origin = (GaussRat(0),) * m
    origin_pts = parts.get(frozenset(), [])
    if origin_pts:
        a0 = origin_pts[0].selector.pick_in_K(policy, _rng(seed, path, "a0"))
        if not a0.in_K():
            raise BadProblem("constant term must lie in K", location=path)
        values[origin] = PiExpr.coerce(a0)
        thetas[origin] = PiExpr()
    else:
        a0 = GaussianK().pick_in_K(policy, _rng(seed, path, "a0"))

    subs: dict[Support, FunctionBundle] = {}
    for S in proper_supports(m):
        idx = sorted(S)
        sub_points = []
        for p in parts.get(S, []):
            u = p.coords
            th = theta(subs, a0, S, u)
            thetas[u] = th
            scale = GaussRat(1)
            for i in idx:
                scale = scale * u[i]
            sub_points.append(PointSpec(restrict(u, S), Shifted(p.selector, th, scale), p.role, p.pi_index, p.label))
        sub = build_bundle(
            len(S),
            projection_closure(sub_points),
            seed,
            D - len(S),
            policy=policy,
            p_max=p_max,
            path=f"{path}/{support_label(S)}",
        )
        subs[S] = sub
        for p in parts.get(S, []):
            u = p.coords
            scale = GaussRat(1)
            for i in idx:
                scale = scale * u[i]
            values[u] = thetas[u] + sub.values[restrict(u, S)].scale(scale)

    full_pts = parts.get(full, [])
    offsets = []
    for p in full_pts:
        th = theta(subs, a0, full, p.coords)
        thetas[p.coords] = th
        offsets.append(th)
    state = run(
        [p.coords for p in full_pts],
        offsets,
        [p.selector for p in full_pts],
        seed,
        policy=policy,
        p_max=p_max,
        m=m,
        path=f"{path}/f*",
    )
    state = extend_prefix(state, D)
    for j, p in enumerate(full_pts):
        values[p.coords] = state.stages[j].pinned_value

    return FunctionBundle(
        arity=m, a0=a0, subfunctions=subs, fstar=state, points=pts, values=values,
        thetas=thetas, degree=D, path=path, seed=seed, policy=policy,
    )


def eval_exact(bundle: FunctionBundle, u: Sequence[GaussRat]) -> PiExpr:
    """Exact value at a constraint point, recomputed from the components."""
    u = tuple(GaussRat.coerce(c) for c in u)
    if u not in bundle.values:
        raise NotPinned(f"{u} is not a constraint point", location=bundle.path)
    m = bundle.arity
    S = support_of(u)
    total = PiExpr.coerce(bundle.a0)
    for T, sub in bundle.subfunctions.items():
        if not T <= S:
            continue
        scale = GaussRat(1)
        for i in T:
            scale = scale * u[i]
        total = total + eval_exact(sub, restrict(u, T)).scale(scale)
    if len(S) == m:
        total = total + bundle.fstar.fstar.eval(u)
    return total


# ---------------------------------------------------------------------------
# symmetrization


@dataclass
class PsiBundle:
    """psi(z) = (f(z) + conj(f(conj z))) / 2: real parts of the coefficients of f."""

    arity: int
    degree: int
    coeffs: dict[ExpVec, Fraction]
    values: dict[Point, PiExpr]

    def prefix(self) -> MPoly:
        return MPoly(self.arity, {e: c for e, c in self.coeffs.items()})

    def to_json(self) -> dict:
        from .scalars import format_rat, vec_to_json
        from .poly import term_order_key

        return {
            "arity": self.arity,
            "degree": self.degree,
            "terms": [[list(e), format_rat(self.coeffs[e])] for e in sorted(self.coeffs, key=term_order_key)],
            "values": [{"point": vec_to_json(u), "value": v.to_json()} for u, v in self.values.items()],
        }


def symmetrize(bundle: FunctionBundle) -> PsiBundle:
    if not is_conj_closed(bundle.values):
        raise NotConjClosed("constraint set is not closed under conjugation", location=bundle.path)
    prefix = bundle.prefix()
    coeffs = {}
    for e, c in prefix.terms.items():
        coeffs[e] = c.as_gauss().re
    values = {}
    for u, fu in bundle.values.items():
        values[u] = (fu + bundle.values[conj_point(u)].conj()) / 2
    return PsiBundle(bundle.arity, bundle.degree, coeffs, values)


# ---------------------------------------------------------------------------
# exceptional-set pipeline


@dataclass
class PointReport:
    coords: Point
    role: str
    target_kind: str
    f_value: PiExpr
    psi_value: PiExpr
    verdict: str
    witness: dict | None = None

    def to_json(self) -> dict:
        from .scalars import vec_to_json

        out = {
            "point": vec_to_json(self.coords),
            "role": self.role,
            "target_kind": self.target_kind,
            "f_value": self.f_value.to_json(),
            "psi_value": self.psi_value.to_json(),
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class PipelineResult:
    bundle: FunctionBundle
    psi: PsiBundle
    reports: list[PointReport]
    s_points: list[Point]
    v_points: list[Point]
    extra: dict = field(default_factory=dict)

    def exceptional_inputs(self) -> set[Point]:
        return {r.coords for r in self.reports if r.verdict == "Algebraic"}


def check_exceptional_inputs(s_points: Sequence[Point], v_points: Sequence[Point], m: int) -> None:
    S, V = [tuple(u) for u in s_points], [tuple(v) for v in v_points]
    for u in S + V:
        if len(u) != m:
            raise DegenerateConfiguration(f"point {u} does not have {m} coordinates")
    overlap = set(S) & set(V)
    if overlap:
        raise OverlapSV(f"points in both S and V: {sorted(map(str, overlap))}")
    if (GaussRat(0),) * m not in set(S):
        raise OriginMissing("the origin must belong to S")
    if not is_conj_closed(S):
        raise NotConjClosed("S is not closed under conjugation")
    if not is_conj_closed(V):
        raise NotConjClosed("V is not closed under conjugation")


def exceptional_pipeline(
    s_points: Sequence[Sequence[GaussRat]],
    v_points: Sequence[Sequence[GaussRat]],
    m: int,
    seed: int = 0,
    degree: int | None = None,
    *,
    policy: Policy | str = Policy.SEEDED,
    p_max: int = DEFAULT_MAX_PRECISION,
) -> PipelineResult:
    """Build f with algebraic values on S and values in K*pi^n on the n-th point of V, then symmetrize."""
    from .verify import transcendence_verdict

    S = [tuple(GaussRat.coerce(c) for c in u) for u in s_points]
    V = [tuple(GaussRat.coerce(c) for c in v) for v in v_points]
    check_exceptional_inputs(S, V, m)
    specs = [PointSpec(u, GaussianK(), EXCEPTIONAL, label=f"S[{i}]") for i, u in enumerate(S)]
    specs += [
        PointSpec(v, PiPowerScaled(n), TRANSCENDENTAL, pi_index=n, label=f"V[{n - 1}]")
        for n, v in enumerate(V, start=1)
    ]
    closed = projection_closure(specs)
    bundle = build_bundle(m, closed, seed, degree, policy=policy, p_max=p_max)
    psi = symmetrize(bundle)

    index = {v: n for n, v in enumerate(V, start=1)}
    reports = []
    for spec in specs:
        u = spec.coords
        fu = bundle.values[u]
        pu = psi.values[u]
        witness = None
        if spec.role == TRANSCENDENTAL:
            n, l = index[u], index[conj_point(u)]
            g1 = PiPowerScaled(n).scale_of(fu)
            g2 = PiPowerScaled(l).scale_of(bundle.values[conj_point(u)]).conj()
            witness = {"n": n, "l": l, "gamma1": g1.to_json(), "gamma2": g2.to_json()}
        reports.append(
            PointReport(u, spec.role, base_selector(spec.selector).describe(), fu, pu, transcendence_verdict(pu), witness)
        )
    return PipelineResult(bundle, psi, reports, S, V)
