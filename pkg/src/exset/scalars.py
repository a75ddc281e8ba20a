"""Exact scalars: Gaussian rationals Q(i) and the ring Q(i)[pi] with pi formal.

Rationals are plain :class:`fractions.Fraction` values, which already keep
the canonical ``gcd = 1, q > 0`` form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import BadRational, ZeroDivisor

Rat = Fraction
Scalar = Union[int, Fraction, "GaussRat"]

_RAT_RE = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimals, whitespace and zero denominators are rejected."""
    if not isinstance(text, str) or not _RAT_RE.match(text):
        raise BadRational(f"not an exact rational string: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise BadRational(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class GaussRat:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x: Scalar) -> GaussRat:
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussRat")

    # -- predicates -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def in_K(self) -> bool:
        """Membership in K = Q* + iQ."""
        return self.re != 0

    def is_real(self) -> bool:
        return self.im == 0

    def norm(self) -> Fraction:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: Scalar) -> GaussRat:
        if not isinstance(other, GaussRat):
            if isinstance(other, (int, Fraction)):
                return GaussRat(self.re + other, self.im)
            return NotImplemented
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> GaussRat:
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other: Scalar) -> GaussRat:
        if not isinstance(other, GaussRat):
            if isinstance(other, (int, Fraction)):
                return GaussRat(self.re - other, self.im)
            return NotImplemented
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: Scalar) -> GaussRat:
        return (-self) + other

    def __mul__(self, other: Scalar) -> GaussRat:
        if not isinstance(other, GaussRat):
            if isinstance(other, (int, Fraction)):
                return GaussRat(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussRat(a * c)
        return GaussRat(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> GaussRat:
        n = self.norm()
        if not n:
            raise ZeroDivisor("division by zero in Q(i)")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other: Scalar) -> GaussRat:
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisor("division by zero in Q(i)")
            return GaussRat(self.re / other, self.im / other)
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> GaussRat:
        return GaussRat.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> GaussRat:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GaussRat(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> GaussRat:
        return GaussRat(self.re, -self.im)

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussRat({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"

    # -- serialization --------------------------------------------------
    def to_json(self) -> list[str]:
        return [format_rat(self.re), format_rat(self.im)]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> GaussRat:
        if isinstance(data, str) or len(data) != 2:
            raise BadRational(f"Gaussian rational must be a [re, im] pair, got {data!r}")
        return cls(parse_rat(data[0]), parse_rat(data[1]))


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)


class PiExpr:
    """A polynomial in the formal real symbol pi with Q(i) coefficients.

    ``coeffs[k]`` multiplies ``pi**k``; trailing zeros are stripped, so the
    zero element has an empty tuple and equality is structural.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        cs = [GaussRat.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[GaussRat, ...] = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: list[GaussRat]) -> PiExpr:
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def coerce(cls, x: Union[Scalar, PiExpr]) -> PiExpr:
        if isinstance(x, PiExpr):
            return x
        return cls((x,))

    @classmethod
    def pi_power(cls, n: int, scale: Scalar = 1) -> PiExpr:
        """``scale * pi**n``."""
        return cls([ZERO] * n + [GaussRat.coerce(scale)])

    @property
    def pi_degree(self) -> int | None:
        """Highest pi power present; ``None`` stands for minus infinity (zero element)."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_pi_free(self) -> bool:
        return len(self.coeffs) <= 1

    def constant(self) -> GaussRat:
        """The pi**0 coefficient."""
        return self.coeffs[0] if self.coeffs else ZERO

    def coeff(self, k: int) -> GaussRat:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def as_gauss(self) -> GaussRat:
        if len(self.coeffs) > 1:
            raise ValueError(f"{self} is not pi-free")
        return self.constant()

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: Union[Scalar, PiExpr]) -> PiExpr:
        if not isinstance(other, PiExpr):
            if isinstance(other, (int, Fraction, GaussRat)):
                other = PiExpr.coerce(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return PiExpr._raw(out)

    __radd__ = __add__

    def __neg__(self) -> PiExpr:
        return PiExpr._raw([-c for c in self.coeffs])

    def __sub__(self, other: Union[Scalar, PiExpr]) -> PiExpr:
        if not isinstance(other, PiExpr):
            if isinstance(other, (int, Fraction, GaussRat)):
                other = PiExpr.coerce(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Union[Scalar, PiExpr]) -> PiExpr:
        return (-self) + other

    def __mul__(self, other: Union[Scalar, PiExpr]) -> PiExpr:
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.scale(other)
        if not isinstance(other, PiExpr):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return PiExpr()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return PiExpr._raw(out)

    __rmul__ = __mul__

    def scale(self, s: Scalar) -> PiExpr:
        s = GaussRat.coerce(s)
        if not s:
            return PiExpr()
        return PiExpr._raw([c * s for c in self.coeffs])

    def __truediv__(self, s: Scalar) -> PiExpr:
        if isinstance(s, PiExpr):
            if not s.is_pi_free():
                raise TypeError("Q(i)[pi] is a ring: only division by pi-free scalars")
            s = s.constant()
        if not isinstance(s, (int, Fraction, GaussRat)):
            return NotImplemented
        s = GaussRat.coerce(s)
        if not s:
            raise ZeroDivisor("division of a pi-expression by zero")
        return self.scale(s.inverse())

    def __pow__(self, k: int) -> PiExpr:
        if k < 0:
            raise ValueError("negative powers are not in Q(i)[pi]")
        result, base = PiExpr((1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> PiExpr:
        return PiExpr._raw([c.conj() for c in self.coeffs])

    def real_part(self) -> PiExpr:
        return PiExpr._raw([GaussRat(c.re) for c in self.coeffs])

    # -- comparison -----------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, PiExpr):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.coeffs == PiExpr.coerce(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if len(self.coeffs) <= 1:
            return hash(self.constant())
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"PiExpr({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            body = f"({c})" if c.re and c.im else str(c)
            if k == 0:
                parts.append(body)
            elif k == 1:
                parts.append(f"{body}*pi")
            else:
                parts.append(f"{body}*pi^{k}")
        return " + ".join(parts)

    def to_json(self) -> list[list[str]]:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> PiExpr:
        if isinstance(data, str):
            raise BadRational(f"pi-expression must be a list of [re, im] pairs, got {data!r}")
        return cls(GaussRat.from_json(c) for c in data)


def is_zero(v: PiExpr | GaussRat) -> bool:
    """Exact zero test (canonical form makes this structural)."""
    return not v


def as_pi(x: Union[Scalar, PiExpr]) -> PiExpr:
    return PiExpr.coerce(x)


def vec_to_json(v: Sequence[GaussRat]) -> list[list[str]]:
    return [c.to_json() for c in v]


def vec_from_json(data: Sequence[Sequence[str]]) -> tuple[GaussRat, ...]:
    if isinstance(data, str):
        raise BadRational(f"coordinate vector expected, got {data!r}")
    return tuple(GaussRat.from_json(c) for c in data)
