"""Hyperplanes through constraint points and the annihilator products built from them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateConfiguration, DegenerateDirection
from .poly import MPoly
from .scalars import GaussRat

Point = tuple[GaussRat, ...]


def dot(mu: Sequence[GaussRat], z: Sequence[GaussRat]) -> GaussRat:
    """Bilinear (not Hermitian) pairing sum mu_i z_i."""
    acc = GaussRat(0)
    for a, b in zip(mu, z):
        acc = acc + a * b
    return acc


def is_zero_vec(v: Sequence[GaussRat]) -> bool:
    return not any(v)


@dataclass(frozen=True)
class Hyperplane:
    """The affine hyperplane ``mu . z = lam`` of C^m."""

    mu: Point
    lam: GaussRat

    def __post_init__(self) -> None:
        if is_zero_vec(self.mu):
            raise DegenerateConfiguration("hyperplane normal is zero")
        if not self.lam:
            raise DegenerateConfiguration("hyperplane passes through the origin")

    @property
    def arity(self) -> int:
        return len(self.mu)

    def value(self, z: Sequence[GaussRat]) -> GaussRat:
        """``mu . z - lam``; zero exactly on the plane."""
        return dot(self.mu, z) - self.lam

    def contains(self, z: Sequence[GaussRat]) -> bool:
        return not self.value(z)

    def as_poly(self) -> MPoly:
        return MPoly.linear(self.mu, -self.lam)

    def to_json(self) -> dict:
        return {"mu": [c.to_json() for c in self.mu], "lambda": self.lam.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> Hyperplane:
        return cls(tuple(GaussRat.from_json(c) for c in data["mu"]), GaussRat.from_json(data["lambda"]))


def is_complex_collinear(u: Sequence[GaussRat], v: Sequence[GaussRat]) -> bool:
    """True iff ``u = t v`` for some complex t (u lies on the line through 0 and v)."""
    if is_zero_vec(v):
        raise DegenerateDirection("direction vector is zero")
    m = len(u)
    if len(v) != m:
        raise DegenerateConfiguration("points of different arity")
    return all(u[i] * v[k] == u[k] * v[i] for i in range(m) for k in range(i + 1, m))


def _parallel_normal(u_j: Sequence[GaussRat], u_next: Sequence[GaussRat]) -> Point:
    """A normal mu with mu . u_next = 0 and mu . u_j != 0.

    Basis of solutions to mu . u_next = 0: for the first index p with
    u_next[p] != 0 and every k != p, b_k has b_k[p] = u_next[k] and
    b_k[k] = -u_next[p]. Take the first basis vector; if it is orthogonal to
    u_j, add the first one that is not.
    """
    m = len(u_next)
    p = next(i for i, c in enumerate(u_next) if c)
    basis = []
    for k in range(m):
        if k == p:
            continue
        b = [GaussRat(0)] * m
        b[p] = u_next[k]
        b[k] = -u_next[p]
        basis.append(b)
    first = basis[0]
    if dot(first, u_j):
        return tuple(first)
    for b in basis[1:]:
        if dot(b, u_j):
            return tuple(x + y for x, y in zip(first, b))
    # only reachable when u_j is a multiple of u_next
    raise DegenerateConfiguration("no parallel hyperplane avoids the origin")


def build_hyperplane(u_j: Sequence[GaussRat], u_next: Sequence[GaussRat]) -> Hyperplane:
    """Hyperplane through ``u_j`` missing both the origin and ``u_next``.

    If u_j is on the complex line C*u_next the normal is conj(u_next)
    (perpendicular to the line); otherwise the plane is parallel to it.
    """
    u_j, u_next = tuple(u_j), tuple(u_next)
    if len(u_j) != len(u_next):
        raise DegenerateConfiguration("points of different arity")
    if is_zero_vec(u_j) or is_zero_vec(u_next):
        raise DegenerateConfiguration("hyperplane points must be nonzero")
    if u_j == u_next:
        raise DegenerateConfiguration("u_j coincides with the next point")
    if is_complex_collinear(u_j, u_next):
        mu = tuple(c.conj() for c in u_next)
    else:
        mu = _parallel_normal(u_j, u_next)
    lam = dot(mu, u_j)
    plane = Hyperplane(mu, lam)
    if plane.contains(u_next):
        raise DegenerateConfiguration("next point lies on the hyperplane")
    return plane


def build_hyperplanes(points: Sequence[Sequence[GaussRat]], u_next: Sequence[GaussRat]) -> list[Hyperplane]:
    return [build_hyperplane(u, u_next) for u in points]


def annihilator_from_planes(planes: Sequence[Hyperplane], arity: int) -> MPoly:
    if not planes:
        return MPoly.monomial((1,) * arity)
    poly = MPoly.constant(arity, 1)
    for h in planes:
        poly = poly * h.as_poly()
    return poly


def build_annihilator(points: Sequence[Sequence[GaussRat]], u_next: Sequence[GaussRat]) -> MPoly:
    """Product of hyperplane forms vanishing at every point, nonzero at 0 and ``u_next``.

    With no points this is z_1 * ... * z_m.
    """
    arity = len(u_next)
    pts = [tuple(p) for p in points]
    if len(set(pts)) != len(pts):
        raise DegenerateConfiguration("annihilator points are not distinct")
    for p in pts:
        if any(not c for c in p):
            raise DegenerateConfiguration("annihilator points need nonzero coordinates")
    return annihilator_from_planes(build_hyperplanes(pts, u_next), arity)
