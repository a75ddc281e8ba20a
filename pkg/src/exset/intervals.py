"""Rational-endpoint interval enclosures and the adaptive-precision pi oracle.

Every enclosure here is exact: endpoints are Fractions, and the only source
of width is the enclosure of pi itself, which comes from Machin's formula

    pi = 16 atan(1/5) - 4 atan(1/239)

with both arctangent series bracketed by consecutive alternating partial
sums.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .scalars import GaussRat, PiExpr


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Fraction | int) -> RatInterval:
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction | int | RatInterval) -> bool:
        if isinstance(x, RatInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def intersect(self, other: RatInterval) -> RatInterval:
        return RatInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def __add__(self, other: RatInterval) -> RatInterval:
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> RatInterval:
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other: RatInterval) -> RatInterval:
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other: RatInterval | Fraction | int) -> RatInterval:
        if not isinstance(other, RatInterval):
            return self.scale(other)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def scale(self, s: Fraction | int) -> RatInterval:
        if s >= 0:
            return RatInterval(self.lo * s, self.hi * s)
        return RatInterval(self.hi * s, self.lo * s)

    def inflate(self, r: Fraction) -> RatInterval:
        return RatInterval(self.lo - r, self.hi + r)

    def mag(self) -> Fraction:
        """sup |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> Fraction:
        """inf |x| over the interval."""
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class ComplexBox:
    re: RatInterval
    im: RatInterval

    @classmethod
    def point(cls, z: GaussRat) -> ComplexBox:
        return cls(RatInterval.point(z.re), RatInterval.point(z.im))

    def contains(self, z: GaussRat | ComplexBox) -> bool:
        if isinstance(z, ComplexBox):
            return self.re.contains(z.re) and self.im.contains(z.im)
        return self.re.contains(z.re) and self.im.contains(z.im)

    __contains__ = contains

    def __add__(self, other: ComplexBox) -> ComplexBox:
        return ComplexBox(self.re + other.re, self.im + other.im)

    def __sub__(self, other: ComplexBox) -> ComplexBox:
        return ComplexBox(self.re - other.re, self.im - other.im)

    def __mul__(self, other: ComplexBox) -> ComplexBox:
        return ComplexBox(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inflate(self, r: Fraction) -> ComplexBox:
        return ComplexBox(self.re.inflate(r), self.im.inflate(r))

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    @property
    def mid(self) -> GaussRat:
        return GaussRat(self.re.mid, self.im.mid)

    def abs2_upper(self) -> Fraction:
        return self.re.mag() ** 2 + self.im.mag() ** 2

    def abs2_lower(self) -> Fraction:
        return self.re.mig() ** 2 + self.im.mig() ** 2


# ---------------------------------------------------------------------------
# square-root bounds (for |z| of Gaussian rationals)


def _exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        raise ValueError("square root of a negative rational")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """A rational >= sqrt(q); exact when q is a rational square."""
    exact = _exact_sqrt(q)
    if exact is not None:
        return exact
    scale = 1 << bits
    return Fraction(math.isqrt(q.numerator * scale * scale // q.denominator) + 1, scale)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    """A rational <= sqrt(q); exact when q is a rational square."""
    exact = _exact_sqrt(q)
    if exact is not None:
        return exact
    scale = 1 << bits
    return Fraction(math.isqrt(q.numerator * scale * scale // q.denominator), scale)


def abs_upper(z: GaussRat, bits: int = 64) -> Fraction:
    return sqrt_upper(z.norm(), bits)


def abs_lower(z: GaussRat, bits: int = 64) -> Fraction:
    return sqrt_lower(z.norm(), bits)


# ---------------------------------------------------------------------------
# pi


class _AtanInv:
    """Partial sums of atan(1/x) = sum_k (-1)^k / ((2k+1) x^(2k+1)).

    The series alternates with decreasing terms, so atan(1/x) lies between
    any two consecutive partial sums. Partial sums are deterministic, so
    caching them does not change any result.
    """

    def __init__(self, x: int) -> None:
        self.x = x
        self.sums = [Fraction(0)]

    def partial(self, k: int) -> Fraction:
        while len(self.sums) <= k:
            j = len(self.sums) - 1
            term = Fraction(1, (2 * j + 1) * self.x ** (2 * j + 1))
            self.sums.append(self.sums[-1] + (term if j % 2 == 0 else -term))
        return self.sums[k]

    def terms_for(self, log2_width: int, weight: int) -> int:
        """Smallest k with weight / ((2k+1) x^(2k+1)) <= 2^-log2_width."""
        k = 0
        target = 1 << log2_width
        while (2 * k + 1) * self.x ** (2 * k + 1) < weight * target:
            k += 1
        return k

    def bracket(self, k: int) -> tuple[Fraction, Fraction]:
        a, b = self.partial(k), self.partial(k + 1)
        return (a, b) if a <= b else (b, a)


_ATAN5 = _AtanInv(5)
_ATAN239 = _AtanInv(239)


@lru_cache(maxsize=None)
def pi_enclosure(precision: int) -> RatInterval:
    """Rational interval containing pi with width <= 2**-precision.

    Endpoints are dyadic with denominator 2**(precision+2). Enclosures are
    nested: ``pi_enclosure(p+1)`` lies inside ``pi_enclosure(p)``.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    q = precision + 2
    k5 = _ATAN5.terms_for(q + 1, 16)
    k239 = _ATAN239.terms_for(q + 1, 4)
    a_lo, a_hi = _ATAN5.bracket(k5)
    b_lo, b_hi = _ATAN239.bracket(k239)
    lo = 16 * a_lo - 4 * b_hi
    hi = 16 * a_hi - 4 * b_lo
    scale = 1 << q
    lo_r = Fraction(math.floor(lo * scale), scale)
    hi_r = Fraction(math.ceil(hi * scale), scale)
    return RatInterval(lo_r, hi_r)


@lru_cache(maxsize=4096)
def _pi_powers(precision: int, k: int) -> RatInterval:
    pi = pi_enclosure(precision)
    return RatInterval(pi.lo**k, pi.hi**k)


def enclose(v: PiExpr, precision: int) -> ComplexBox:
    """Box containing the value of ``v`` for every real pi in ``pi_enclosure(precision)``."""
    re = RatInterval.point(0)
    im = RatInterval.point(0)
    for k, c in enumerate(v.coeffs):
        if not c:
            continue
        if k == 0:
            re = re + RatInterval.point(c.re)
            im = im + RatInterval.point(c.im)
            continue
        pk = _pi_powers(precision, k)
        if c.re:
            re = re + pk.scale(c.re)
        if c.im:
            im = im + pk.scale(c.im)
    return ComplexBox(re, im)


START_PRECISION = 32
DEFAULT_MAX_PRECISION = 4096


def precisions(p_max: int, start: int = START_PRECISION):
    p = min(start, p_max)
    while True:
        yield p
        if p >= p_max:
            return
        p = min(2 * p, p_max)


def enclose_to_width(v: PiExpr, width: Fraction, p_max: int = DEFAULT_MAX_PRECISION) -> ComplexBox:
    """Refine until the box is at most ``width`` wide, or ``p_max`` is reached."""
    box = None
    for p in precisions(p_max):
        box = enclose(v, p)
        if box.width <= width:
            break
    return box


class Cert(enum.Enum):
    PROVED = "Proved"
    DISPROVED = "Disproved"
    UNDECIDED = "Undecided"


def cert_abs_lt(v: PiExpr | GaussRat, bound: Fraction, p_max: int = DEFAULT_MAX_PRECISION) -> Cert:
    """Certify ``|v| < bound`` by refining enclosures of ``v`` up to ``p_max`` bits."""
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    v = PiExpr.coerce(v)
    b2 = bound * bound
    if v.is_pi_free():
        n = v.constant().norm()
        if n < b2:
            return Cert.PROVED
        if n > b2:
            return Cert.DISPROVED
        return Cert.UNDECIDED
    for p in precisions(p_max):
        box = enclose(v, p)
        if box.abs2_upper() < b2:
            return Cert.PROVED
        if box.abs2_lower() > b2:
            return Cert.DISPROVED
    return Cert.UNDECIDED
