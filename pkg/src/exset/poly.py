"""Sparse multivariate polynomials with Q(i)[pi] coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import ArityMismatch
from .intervals import enclose, sqrt_upper
from .scalars import GaussRat, PiExpr, Scalar

ExpVec = tuple[int, ...]
Coeff = Union[Scalar, PiExpr]


def degree_of(e: ExpVec) -> int:
    return sum(e)


def full_support(e: ExpVec) -> bool:
    return all(x >= 1 for x in e)


def term_order_key(e: ExpVec) -> tuple:
    """Canonical term order: degree ascending, then lexicographic descending."""
    return (sum(e), tuple(-x for x in e))


def lex_monomials(d: int, m: int) -> list[ExpVec]:
    """Full-support exponent vectors of degree ``d`` in ``m`` variables, lex-descending.

    There are C(d-1, m-1) of them; the list is empty when d < m.
    """
    if m < 1:
        raise ValueError("arity must be positive")
    out: list[ExpVec] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for first in range(remaining - slots + 1, 0, -1):
            rec(prefix + [first], remaining - first, slots - 1)

    if d >= m:
        rec([], d, m)
    return out


def _add_into(acc: dict[ExpVec, PiExpr], e: ExpVec, c: PiExpr) -> None:
    old = acc.get(e)
    if old is None:
        if c:
            acc[e] = c
        return
    new = old + c
    if new:
        acc[e] = new
    else:
        del acc[e]


class MPoly:
    """Polynomial in ``arity`` variables; ``terms`` maps exponent tuples to nonzero PiExprs.

    Values are treated as immutable once built.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[ExpVec, Coeff] | None = None) -> None:
        if arity < 1:
            raise ValueError("arity must be positive")
        self.arity = arity
        clean: dict[ExpVec, PiExpr] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != arity or any(x < 0 for x in e):
                raise ArityMismatch(f"exponent {e} does not fit arity {arity}")
            _add_into(clean, e, PiExpr.coerce(c))
        self.terms = clean

    @classmethod
    def _wrap(cls, arity: int, terms: dict[ExpVec, PiExpr]) -> MPoly:
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.terms = terms
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, arity: int) -> MPoly:
        return cls._wrap(arity, {})

    @classmethod
    def constant(cls, arity: int, c: Coeff) -> MPoly:
        return cls(arity, {(0,) * arity: c})

    @classmethod
    def monomial(cls, e: Sequence[int], c: Coeff = 1) -> MPoly:
        return cls(len(e), {tuple(e): c})

    @classmethod
    def variable(cls, arity: int, i: int) -> MPoly:
        e = [0] * arity
        e[i] = 1
        return cls.monomial(e)

    @classmethod
    def linear(cls, coeffs: Sequence[GaussRat], const: Coeff = 0) -> MPoly:
        """``sum coeffs[i] z_i + const``."""
        m = len(coeffs)
        terms: dict[ExpVec, Coeff] = {(0,) * m: const}
        for i, c in enumerate(coeffs):
            e = [0] * m
            e[i] = 1
            terms[tuple(e)] = c
        return cls(m, terms)

    # -- structure ------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coeff(self, e: ExpVec) -> PiExpr:
        return self.terms.get(tuple(e), PiExpr())

    def items(self) -> list[tuple[ExpVec, PiExpr]]:
        """Terms in canonical order."""
        return sorted(self.terms.items(), key=lambda t: term_order_key(t[0]))

    def __iter__(self) -> Iterator[tuple[ExpVec, PiExpr]]:
        return iter(self.items())

    def homogeneous_layer(self, d: int) -> MPoly:
        if d < 0:
            raise ValueError("degree must be nonnegative")
        return MPoly._wrap(self.arity, {e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, d: int) -> MPoly:
        """Terms of total degree <= d."""
        return MPoly._wrap(self.arity, {e: c for e, c in self.terms.items() if sum(e) <= d})

    def is_pi_free(self) -> bool:
        return all(c.is_pi_free() for c in self.terms.values())

    def embed(self, positions: Sequence[int], arity: int) -> MPoly:
        """Re-index variable ``i`` as variable ``positions[i]`` of a larger ring."""
        if len(positions) != self.arity:
            raise ArityMismatch("embedding positions do not match arity")
        out: dict[ExpVec, PiExpr] = {}
        for e, c in self.terms.items():
            big = [0] * arity
            for i, x in zip(positions, e):
                big[i] = x
            out[tuple(big)] = c
        return MPoly._wrap(arity, out)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: MPoly) -> None:
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")

    def __add__(self, other: MPoly) -> MPoly:
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            _add_into(out, e, c)
        return MPoly._wrap(self.arity, out)

    def __neg__(self) -> MPoly:
        return MPoly._wrap(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: MPoly) -> MPoly:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union[MPoly, Coeff]) -> MPoly:
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._check(other)
        out: dict[ExpVec, PiExpr] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                _add_into(out, e, c1 * c2)
        return MPoly._wrap(self.arity, out)

    def __rmul__(self, other: Coeff) -> MPoly:
        return self.scale(other)

    def scale(self, s: Coeff) -> MPoly:
        s = PiExpr.coerce(s)
        if not s:
            return MPoly.zero(self.arity)
        if s.is_pi_free():
            g = s.constant()
            return MPoly._wrap(self.arity, {e: c.scale(g) for e, c in self.terms.items()})
        return MPoly._wrap(self.arity, {e: c * s for e, c in self.terms.items()})

    def shift(self, e0: Sequence[int]) -> MPoly:
        """Multiply by the monomial z**e0."""
        if len(e0) != self.arity:
            raise ArityMismatch("monomial arity mismatch")
        return MPoly._wrap(
            self.arity, {tuple(a + b for a, b in zip(e, e0)): c for e, c in self.terms.items()}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- evaluation -----------------------------------------------------
    def eval(self, point: Sequence[Scalar]) -> PiExpr:
        """Exact substitution of Gaussian-rational coordinates."""
        if len(point) != self.arity:
            raise ArityMismatch(f"point of length {len(point)} for arity {self.arity}")
        pt = [GaussRat.coerce(x) for x in point]
        powers: list[dict[int, GaussRat]] = [{0: GaussRat(1)} for _ in pt]

        def pw(i: int, k: int) -> GaussRat:
            cache = powers[i]
            if k not in cache:
                cache[k] = pt[i] ** k
            return cache[k]

        acc: list[GaussRat] = []
        for e, c in self.terms.items():
            mono = GaussRat(1)
            for i, k in enumerate(e):
                if k:
                    mono = mono * pw(i, k)
                    if not mono:
                        break
            if not mono:
                continue
            for k, ck in enumerate(c.coeffs):
                if k >= len(acc):
                    acc.extend([GaussRat(0)] * (k + 1 - len(acc)))
                if ck:
                    acc[k] = acc[k] + ck * mono
        return PiExpr(acc)

    __call__ = eval

    def __repr__(self) -> str:
        return f"MPoly({self.arity}, {dict(self.items())!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- serialization --------------------------------------------------
    def to_json(self) -> list:
        return [[list(e), c.to_json()] for e, c in self.items()]

    @classmethod
    def from_json(cls, arity: int, data: Iterable) -> MPoly:
        terms: dict[ExpVec, PiExpr] = {}
        for e, c in data:
            terms[tuple(e)] = PiExpr.from_json(c)
        return cls(arity, terms)


def length_upper(p: MPoly, precision: int = 64) -> Fraction:
    """Rational upper bound for L(p), the sum of absolute values of coefficients.

    Exact when every coefficient is pi-free with a rational modulus.
    """
    total = Fraction(0)
    for c in p.terms.values():
        if c.is_pi_free():
            total += sqrt_upper(c.constant().norm(), precision)
        else:
            total += sqrt_upper(enclose(c, precision).abs2_upper(), precision)
    return total


def homogeneous_layer(p: MPoly, d: int) -> MPoly:
    return p.homogeneous_layer(d)


__all__ = [
    "ExpVec",
    "MPoly",
    "degree_of",
    "full_support",
    "homogeneous_layer",
    "length_upper",
    "lex_monomials",
    "term_order_key",
]
