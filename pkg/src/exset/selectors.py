"""Target selectors: exact representatives of the dense target sets E_u.

A selector proposes candidate targets near a (possibly pi-laden) center and
decides exact membership of a value in its set. The steering engine, not the
selector, certifies that a candidate is close enough.
"""

from __future__ import annotations

import enum
import math
import random
from fractions import Fraction
from typing import Iterator

from .errors import BadProblem
from .intervals import ComplexBox, RatInterval, abs_lower, enclose_to_width, pi_enclosure
from .scalars import GaussRat, PiExpr

MAX_ATTEMPTS = 64


class Policy(str, enum.Enum):
    """How free choices are resolved.

    ``seeded``: seed-driven jitter on a dyadic grid scaled to the admissible
    radius; distinct seeds give distinct functions.

    ``smallest-denominator``: for e = 1, 2, ... take the smallest multiple of
    2**-e strictly above the center; coefficient corrections use s_d / 2.
    Ignores the seed.
    """

    SEEDED = "seeded"
    SMALLEST_DENOMINATOR = "smallest-denominator"


def _grid_exponent(radius: Fraction) -> int:
    """Smallest e >= 0 with 2**-e <= radius / 8."""
    if radius <= 0:
        return 1
    e = 0
    while Fraction(1, 1 << e) > radius / 8:
        e += 1
    return e


def _divide_by_pi_power(box: ComplexBox, n: int, precision: int) -> ComplexBox:
    pi = pi_enclosure(precision)
    inv = RatInterval(1 / pi.hi**n, 1 / pi.lo**n)
    return ComplexBox(box.re * inv, box.im * inv)


def _grid_candidate(box: ComplexBox, e: int, policy: Policy, rng: random.Random) -> GaussRat:
    h = Fraction(1, 1 << e)
    if policy is Policy.SMALLEST_DENOMINATOR:
        re = (math.floor(box.re.hi / h) + 1) * h
        im = round(box.im.mid / h) * h
        if not re:
            re += h
        return GaussRat(re, im)
    mid = box.mid
    a = round(mid.re / h) + rng.randint(-2, 2)
    b = round(mid.im / h) + rng.randint(-2, 2)
    if a == 0:
        a = 1 if rng.random() < 0.5 else -1
    return GaussRat(a * h, b * h)


def _start_exponent(policy: Policy, radius: Fraction) -> int:
    return 1 if policy is Policy.SMALLEST_DENOMINATOR else _grid_exponent(radius)


def pick_k(policy: Policy, rng: random.Random, bound: Fraction = Fraction(1)) -> GaussRat:
    """An element of K = Q* + iQ with modulus strictly below ``bound``."""
    if policy is Policy.SMALLEST_DENOMINATOR:
        return GaussRat(bound / 2)
    a = rng.randint(1, 8) * rng.choice((1, -1))
    b = rng.randint(-8, 8)
    return GaussRat(a, b) * (bound / 16)


class TargetSelector:
    kind = "abstract"

    def contains(self, v: PiExpr) -> bool:
        raise NotImplementedError

    def candidates(
        self, center: PiExpr, radius: Fraction, policy: Policy, rng: random.Random
    ) -> Iterator[PiExpr]:
        raise NotImplementedError

    def pick_in_K(self, policy: Policy, rng: random.Random) -> GaussRat:
        """A value of the set that also lies in K (used for the constant term)."""
        raise BadProblem(f"target set {self.describe()} does not meet K")

    def describe(self) -> str:
        return self.kind

    def to_json(self) -> dict:
        return {"kind": self.kind}

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(repr(self.to_json()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()!r})"


class GaussianK(TargetSelector):
    """Targets in K = Q* + iQ."""

    kind = "GaussianK"

    def contains(self, v: PiExpr) -> bool:
        v = PiExpr.coerce(v)
        return v.is_pi_free() and v.constant().in_K()

    def candidates(self, center, radius, policy, rng):
        e0 = _start_exponent(policy, radius)
        for attempt in range(MAX_ATTEMPTS):
            e = e0 + attempt
            box = enclose_to_width(center, Fraction(1, 1 << (e + 3)))
            yield PiExpr.coerce(_grid_candidate(box, e, policy, rng))

    def pick_in_K(self, policy, rng):
        if policy is Policy.SMALLEST_DENOMINATOR:
            return GaussRat(1)
        return pick_k(policy, rng, Fraction(2))


class PiPowerScaled(TargetSelector):
    """Targets q * pi**n with q in K."""

    kind = "PiPowerScaled"

    def __init__(self, n: int) -> None:
        if n < 1:
            raise BadProblem("pi power must be a positive integer")
        self.n = int(n)

    def contains(self, v: PiExpr) -> bool:
        v = PiExpr.coerce(v)
        if v.pi_degree != self.n:
            return False
        return all(not c for c in v.coeffs[:-1]) and v.coeffs[-1].in_K()

    def scale_of(self, v: PiExpr) -> GaussRat:
        """q for a member v = q pi**n."""
        if not self.contains(v):
            raise ValueError(f"{v} is not of the form q*pi^{self.n}")
        return v.coeffs[-1]

    def candidates(self, center, radius, policy, rng):
        e0 = _start_exponent(policy, radius)
        for attempt in range(MAX_ATTEMPTS):
            e = e0 + attempt
            # pi**n < 4**n, so a q-grid of 2**-(e+2n) moves the target by < 2**-e
            eq = e if policy is Policy.SMALLEST_DENOMINATOR else e + 2 * self.n
            width = Fraction(1, 1 << (eq + 3))
            box = enclose_to_width(center, width)
            prec = 32
            scaled = _divide_by_pi_power(box, self.n, prec)
            while scaled.width > width and prec < 1 << 14:
                prec *= 2
                scaled = _divide_by_pi_power(box, self.n, prec)
            q = _grid_candidate(scaled, eq, policy, rng)
            yield PiExpr.pi_power(self.n, q)

    def to_json(self):
        return {"kind": self.kind, "n": self.n}

    def describe(self):
        return f"K*pi^{self.n}"


class ExplicitValue(TargetSelector):
    """A single prescribed value; steering fails unless it is within reach."""

    kind = "ExplicitValue"

    def __init__(self, value: PiExpr | GaussRat | int | Fraction) -> None:
        self.value = PiExpr.coerce(value)

    def contains(self, v: PiExpr) -> bool:
        return PiExpr.coerce(v) == self.value

    def candidates(self, center, radius, policy, rng):
        yield self.value

    def pick_in_K(self, policy, rng):
        if self.value.is_pi_free() and self.value.constant().in_K():
            return self.value.constant()
        return super().pick_in_K(policy, rng)

    def to_json(self):
        return {"kind": self.kind, "value": self.value.to_json()}

    def describe(self):
        return f"{{{self.value}}}"


class Shifted(TargetSelector):
    """The set {t : shift + scale * t in inner}.

    This is how a subfunction sees the target set of an outer point: the
    subfunction value is pushed through the affine map before membership.
    """

    kind = "Shifted"

    def __init__(self, inner: TargetSelector, shift: PiExpr, scale: GaussRat) -> None:
        if not scale:
            raise ValueError("scale must be nonzero")
        self.inner = inner
        self.shift = PiExpr.coerce(shift)
        self.scale = GaussRat.coerce(scale)

    def outer(self, t: PiExpr) -> PiExpr:
        return self.shift + PiExpr.coerce(t).scale(self.scale)

    def contains(self, v: PiExpr) -> bool:
        return self.inner.contains(self.outer(v))

    def candidates(self, center, radius, policy, rng):
        outer_radius = radius * abs_lower(self.scale)
        for t in self.inner.candidates(self.outer(center), outer_radius, policy, rng):
            yield (t - self.shift) / self.scale

    def pick_in_K(self, policy, rng):
        # only reachable for constant terms of subfunctions, which are never shifted
        raise BadProblem("shifted target sets are not used for constant terms")

    def base(self) -> TargetSelector:
        return self.inner.base() if isinstance(self.inner, Shifted) else self.inner

    def to_json(self):
        return {
            "kind": self.kind,
            "inner": self.inner.to_json(),
            "shift": self.shift.to_json(),
            "scale": self.scale.to_json(),
        }

    def describe(self):
        return f"({self.inner.describe()} - {self.shift}) / ({self.scale})"


def base_selector(sel: TargetSelector) -> TargetSelector:
    return sel.base() if isinstance(sel, Shifted) else sel


def selector_from_json(data: dict) -> TargetSelector:
    kind = data.get("kind")
    if kind == "GaussianK":
        return GaussianK()
    if kind == "PiPowerScaled":
        n = data.get("n")
        if not isinstance(n, int) or isinstance(n, bool):
            raise BadProblem("PiPowerScaled needs an integer 'n'")
        return PiPowerScaled(n)
    if kind == "ExplicitValue":
        return ExplicitValue(PiExpr.from_json(data["value"]))
    if kind == "Shifted":
        return Shifted(
            selector_from_json(data["inner"]),
            PiExpr.from_json(data["shift"]),
            GaussRat.from_json(data["scale"]),
        )
    raise BadProblem(f"unknown target kind {kind!r}")
