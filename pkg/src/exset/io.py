"""Problem files, output artifacts and their canonical JSON encodings.

Every number is an exact rational string "p/q"; Gaussian rationals are
["re", "im"] pairs and pi-expressions are lists of such pairs by ascending
power of pi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .bundle import (
    AUXILIARY,
    PRESCRIBED,
    FunctionBundle,
    PipelineResult,
    PointSpec,
    conj_point,
    projection_closure,
    support_label,
)
from .errors import (
    ArityMismatch,
    BadProblem,
    BadRational,
    DuplicatePoint,
    NotConjClosed,
    OriginMissing,
    OverlapSV,
    ValidationError,
    ValidationErrors,
)
from .geometry import Hyperplane
from .intervals import DEFAULT_MAX_PRECISION
from .poly import MPoly
from .scalars import GaussRat, PiExpr, format_rat, parse_rat, vec_from_json, vec_to_json
from .selectors import Policy, TargetSelector, base_selector, selector_from_json
from .steering import ConstructionState, Correction, ExtensionRecord, StageRecord
from .verify import transcendence_verdict

MODES = ("prescribe", "exceptional")
PRESCRIBE_KINDS = ("GaussianK", "PiPowerScaled", "ExplicitValue")


@dataclass
class ProblemPoint:
    coords: tuple[GaussRat, ...]
    target: TargetSelector | None = None
    role: str | None = None

    def to_json(self, mode: str) -> dict:
        out: dict[str, Any] = {"coords": vec_to_json(self.coords)}
        if mode == "prescribe":
            out["target"] = self.target.to_json()
        else:
            out["role"] = self.role
        return out


@dataclass
class Problem:
    variables: int
    mode: str = "prescribe"
    points: list[ProblemPoint] = field(default_factory=list)
    seed: int = 0
    stages: int | None = None
    degree: int | None = None
    precision: int = DEFAULT_MAX_PRECISION
    policy: Policy = Policy.SEEDED

    def to_json(self) -> dict:
        return {
            "variables": self.variables,
            "mode": self.mode,
            "seed": self.seed,
            "stages": self.stages,
            "degree": self.degree,
            "precision": self.precision,
            "policy": self.policy.value,
            "points": [p.to_json(self.mode) for p in self.points],
        }

    # -- derived views ----------------------------------------------------
    def s_points(self) -> list[tuple[GaussRat, ...]]:
        return [p.coords for p in self.points if p.role == "S"]

    def v_points(self) -> list[tuple[GaussRat, ...]]:
        return [p.coords for p in self.points if p.role == "V"]

    def full_support_count(self) -> int:
        return sum(1 for p in self.points if all(p.coords))

    def point_specs(self) -> list[PointSpec]:
        return [
            PointSpec(p.coords, p.target, PRESCRIBED, label=f"points[{i}]")
            for i, p in enumerate(self.points)
        ]


def _int_field(data: dict, key: str, errors: list, *, minimum: int = 0, default=None):
    val = data.get(key, default)
    if val is None:
        return default
    if not isinstance(val, int) or isinstance(val, bool) or val < minimum:
        errors.append(BadProblem(f"{key!r} must be an integer >= {minimum}", location=key))
        return default
    return val


def parse_problem(data: Any) -> Problem:
    """Parse a problem dict; all structural errors are collected and raised together."""
    errors: list[ValidationError] = []
    if not isinstance(data, dict):
        raise ValidationErrors([BadProblem("problem file must be a JSON object")])
    m = _int_field(data, "variables", errors, minimum=1)
    if m is None:
        errors.append(BadProblem("'variables' is required", location="variables"))
    mode = data.get("mode", "prescribe")
    if mode not in MODES:
        errors.append(BadProblem(f"mode must be one of {MODES}", location="mode"))
    seed = _int_field(data, "seed", errors, default=0)
    if seed is not None and seed >= 1 << 64:
        errors.append(BadProblem("seed must fit in 64 bits", location="seed"))
    stages = _int_field(data, "stages", errors)
    degree = _int_field(data, "degree", errors)
    precision = _int_field(data, "precision", errors, minimum=8, default=DEFAULT_MAX_PRECISION)
    try:
        policy = Policy(data.get("policy", Policy.SEEDED.value))
    except ValueError:
        errors.append(BadProblem(f"unknown policy {data.get('policy')!r}", location="policy"))
        policy = Policy.SEEDED

    points: list[ProblemPoint] = []
    raw_points = data.get("points", [])
    if not isinstance(raw_points, list):
        errors.append(BadProblem("'points' must be a list", location="points"))
        raw_points = []
    for i, rp in enumerate(raw_points):
        loc = f"points[{i}]"
        if not isinstance(rp, dict) or "coords" not in rp:
            errors.append(BadProblem("point needs 'coords'", location=loc))
            continue
        try:
            coords = vec_from_json(rp["coords"])
        except (BadRational, TypeError, ValueError) as exc:
            err = exc if isinstance(exc, BadRational) else BadRational(str(exc))
            err.location = loc
            errors.append(err)
            continue
        if m is not None and len(coords) != m:
            errors.append(ArityMismatch(f"{len(coords)} coordinates, expected {m}", location=loc))
            continue
        if mode == "exceptional":
            role = rp.get("role")
            if role not in ("S", "V"):
                errors.append(BadProblem("exceptional-mode points need role 'S' or 'V'", location=loc))
                continue
            if "target" in rp:
                errors.append(BadProblem("exceptional-mode points take a role, not a target", location=loc))
                continue
            points.append(ProblemPoint(coords, None, role))
        else:
            tgt = rp.get("target")
            if not isinstance(tgt, dict) or tgt.get("kind") not in PRESCRIBE_KINDS:
                errors.append(BadProblem(f"target kind must be one of {PRESCRIBE_KINDS}", location=loc))
                continue
            try:
                sel = selector_from_json(tgt)
            except (BadRational, BadProblem, KeyError, TypeError) as exc:
                err = exc if isinstance(exc, ValidationError) else BadProblem(f"bad target: {exc}")
                err.location = loc
                errors.append(err)
                continue
            points.append(ProblemPoint(coords, sel, None))
    if errors:
        raise ValidationErrors(errors)
    return Problem(m, mode, points, seed, stages, degree, precision, policy)


def validate(problem: Problem) -> list[ValidationError]:
    """Hypothesis and consistency checks; an empty list means the problem is valid."""
    errors: list[ValidationError] = []
    m = problem.variables
    seen: dict[tuple, int] = {}
    for i, p in enumerate(problem.points):
        if len(p.coords) != m:
            errors.append(ArityMismatch(f"{len(p.coords)} coordinates, expected {m}", location=f"points[{i}]"))
        if p.coords in seen:
            errors.append(DuplicatePoint(f"same point as points[{seen[p.coords]}]", location=f"points[{i}]"))
        else:
            seen[p.coords] = i
    origin = (GaussRat(0),) * m
    if problem.mode == "exceptional":
        S, V = problem.s_points(), problem.v_points()
        if origin not in S:
            errors.append(OriginMissing("the origin must be listed with role S"))
        overlap = set(S) & set(V)
        for u in overlap:
            errors.append(OverlapSV(f"{vec_to_json(u)} has both roles", location=f"points[{seen[u]}]"))
        s_set, v_set = set(S), set(V)
        for i, p in enumerate(problem.points):
            group = s_set if p.role == "S" else v_set
            if conj_point(p.coords) not in group:
                errors.append(
                    NotConjClosed(f"conjugate of this {p.role} point is missing", location=f"points[{i}]")
                )
    else:
        for i, p in enumerate(problem.points):
            if p.coords == origin:
                sel = p.target
                ok = isinstance(sel, TargetSelector) and (
                    sel.kind == "GaussianK"
                    or (sel.kind == "ExplicitValue" and sel.value.is_pi_free() and sel.value.constant().in_K())
                )
                if not ok:
                    errors.append(BadProblem("target set at the origin must meet K", location=f"points[{i}]"))
    n_full = problem.full_support_count()
    if problem.stages is not None and problem.stages != n_full:
        errors.append(
            BadProblem(f"stages = {problem.stages} but there are {n_full} full-support points", location="stages")
        )
    if problem.degree is not None and problem.degree < n_full + m - 1:
        errors.append(BadProblem(f"degree must be >= N + m - 1 = {n_full + m - 1}", location="degree"))
    return errors


def load_problem(path: str | Path) -> Problem:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationErrors([BadProblem(f"invalid JSON: {exc}")]) from None
    return parse_problem(data)


def _compact(x: Any) -> bool:
    # arrays built only from scalars and scalar arrays stay on one line
    if isinstance(x, list):
        return all(_compact(y) for y in x)
    return not isinstance(x, dict)


def _render(obj: Any, level: int) -> str:
    if _compact(obj):
        return json.dumps(obj, separators=(", ", ": "), ensure_ascii=True)
    pad, inner = " " * level, " " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {_render(v, level + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    body = ",\n".join(inner + _render(v, level + 1) for v in obj)
    return "[\n" + body + "\n" + pad + "]"


def dumps(obj: Any) -> str:
    """Canonical text form: key order as built, one-space indent, scalar arrays inline."""
    return _render(obj, 0) + "\n"


# ---------------------------------------------------------------------------
# series


def series_to_json(poly: MPoly, degree: int, **meta: Any) -> dict:
    out = {"arity": poly.arity, "degree": degree}
    out.update(meta)
    out["terms"] = poly.to_json()
    return out


def series_from_json(data: dict) -> MPoly:
    return MPoly.from_json(data["arity"], data["terms"])


# ---------------------------------------------------------------------------
# stage log


def _poly(p: MPoly | None):
    return None if p is None else p.to_json()


def _corr(c: Correction) -> dict:
    return c.to_json()


def state_to_json(state: ConstructionState) -> dict:
    return {
        "path": state.path,
        "arity": state.m,
        "seed": state.seed,
        "policy": state.policy.value,
        "p_max": state.p_max,
        "points": [vec_to_json(u) for u in state.points],
        "offsets": [o.to_json() for o in state.offsets],
        "selectors": [s.to_json() for s in state.selectors],
        "synthetic_witness": vec_to_json(state.synthetic_witness),
        "finalized_degree": state.finalized_degree,
        "stages": [
            {
                "n": r.n,
                "point": vec_to_json(r.point),
                "offset": r.offset.to_json(),
                "center": r.center.to_json(),
                "coef": r.coef.to_json(),
                "bound": format_rat(r.bound),
                "delta0": r.delta0.to_json(),
                "target": r.pinned_value.to_json(),
                "attempts": r.attempts,
                "annihilator_prev": _poly(r.annihilator_prev),
                "witness": vec_to_json(r.witness),
                "hyperplanes": [h.to_json() for h in r.hyperplanes],
                "annihilator_cur": _poly(r.annihilator_cur),
                "corrections": [_corr(c) for c in r.corrections],
            }
            for r in state.stages
        ],
        "extensions": [
            {"degree": e.degree, "corrections": [_corr(c) for c in e.corrections]} for e in state.extensions
        ],
        "fstar": state.fstar.to_json(),
    }


def _corr_from(d: dict) -> Correction:
    return Correction(tuple(d["exp"]), PiExpr.from_json(d["delta"]), GaussRat.from_json(d["final"]))


def state_from_json(data: dict) -> ConstructionState:
    m = data["arity"]
    stages = tuple(
        StageRecord(
            n=r["n"],
            point=vec_from_json(r["point"]),
            offset=PiExpr.from_json(r["offset"]),
            center=PiExpr.from_json(r["center"]),
            coef=GaussRat.from_json(r["coef"]),
            bound=parse_rat(r["bound"]),
            delta0=PiExpr.from_json(r["delta0"]),
            pinned_value=PiExpr.from_json(r["target"]),
            attempts=r["attempts"],
            annihilator_prev=MPoly.from_json(m, r["annihilator_prev"]),
            witness=vec_from_json(r["witness"]),
            hyperplanes=tuple(Hyperplane.from_json(h) for h in r["hyperplanes"]),
            annihilator_cur=MPoly.from_json(m, r["annihilator_cur"]),
            corrections=tuple(_corr_from(c) for c in r["corrections"]),
        )
        for r in data["stages"]
    )
    return ConstructionState(
        m=m,
        points=tuple(vec_from_json(u) for u in data["points"]),
        offsets=tuple(PiExpr.from_json(o) for o in data["offsets"]),
        selectors=tuple(selector_from_json(s) for s in data["selectors"]),
        seed=data["seed"],
        policy=Policy(data["policy"]),
        p_max=data["p_max"],
        path=data["path"],
        stages=stages,
        extensions=tuple(
            ExtensionRecord(e["degree"], tuple(_corr_from(c) for c in e["corrections"])) for e in data["extensions"]
        ),
        fstar=MPoly.from_json(m, data["fstar"]),
        finalized_degree=data["finalized_degree"],
        synthetic_witness=vec_from_json(data["synthetic_witness"]),
    )


def stagelog_to_json(bundle: FunctionBundle) -> dict:
    components = []
    for comp in bundle.components():
        components.append(
            {
                "path": comp.path,
                "arity": comp.arity,
                "degree": comp.degree,
                "a0": comp.a0.to_json(),
                "subfunctions": [support_label(S) for S in sorted(comp.subfunctions, key=lambda s: (len(s), sorted(s)))],
                "fstar": state_to_json(comp.fstar),
            }
        )
    return {"seed": bundle.seed, "policy": bundle.policy.value, "components": components}


# ---------------------------------------------------------------------------
# report


def report_to_json(problem: Problem, bundle: FunctionBundle, pipeline: PipelineResult | None = None) -> dict:
    entries = []
    if pipeline is not None:
        entries = [r.to_json() for r in pipeline.reports]
    else:
        for i, p in enumerate(problem.points):
            v = bundle.values[p.coords]
            entries.append(
                {
                    "point": vec_to_json(p.coords),
                    "role": PRESCRIBED,
                    "target_kind": base_selector(p.target).describe(),
                    "f_value": v.to_json(),
                    "verdict": transcendence_verdict(v),
                }
            )
    auxiliary = [vec_to_json(p.coords) for p in bundle.points if p.role == AUXILIARY]
    return {"mode": problem.mode, "degree": bundle.degree, "points": entries, "auxiliary_points": auxiliary}


def problem_specs(problem: Problem) -> list[PointSpec]:
    """Projection-closed point specs for a prescribe-mode problem."""
    return projection_closure(problem.point_specs())


__all__ = [
    "Problem",
    "ProblemPoint",
    "dumps",
    "load_problem",
    "parse_problem",
    "problem_specs",
    "report_to_json",
    "series_from_json",
    "series_to_json",
    "stagelog_to_json",
    "state_from_json",
    "state_to_json",
    "validate",
]
