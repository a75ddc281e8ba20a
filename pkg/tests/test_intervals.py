from fractions import Fraction

from hypothesis import given, settings, strategies as st

from exset.intervals import (
    Cert,
    cert_abs_lt,
    enclose,
    pi_enclosure,
    sqrt_lower,
    sqrt_upper,
)
from exset.scalars import PiExpr

from conftest import g

# Independent rigorous bounds on pi (first 20 digits, rounded outward).
PI_LO = Fraction(314159265358979323846, 10**20)
PI_HI = Fraction(314159265358979323847, 10**20)


def test_pi_low_precision():
    box = pi_enclosure(2)
    assert Fraction(3) <= box.lo and box.hi <= Fraction(13, 4)
    assert box.lo < PI_LO and PI_HI < box.hi


def test_pi_p10():
    box = pi_enclosure(10)
    assert box.width <= Fraction(1, 1024)
    assert box.lo < PI_LO and PI_HI < box.hi


def test_pi_nesting():
    prev = pi_enclosure(1)
    for p in range(2, 200, 7):
        cur = pi_enclosure(p)
        assert prev.lo <= cur.lo and cur.hi <= prev.hi
        if p <= 60:  # beyond that the 20-digit oracle is coarser than the box
            assert cur.lo < PI_LO and PI_HI < cur.hi
        prev = cur


def test_pi_high_precision_width():
    box = pi_enclosure(1000)
    assert box.width <= Fraction(1, 2**1000)


def test_enclose_examples():
    b = enclose(PiExpr([g(1, 1)]), 20)
    assert (b.re.lo, b.re.hi, b.im.lo, b.im.hi) == (1, 1, 1, 1)
    b = enclose(PiExpr.pi_power(1), 16)
    assert b.re == pi_enclosure(16) and b.im.lo == b.im.hi == 0
    for p in (12, 20, 64):
        b = enclose(PiExpr([Fraction(-22, 7), 1]), p)
        assert b.re.hi < 0


def test_cert_examples():
    assert cert_abs_lt(PiExpr([Fraction(1, 2)]), Fraction(1)) is Cert.PROVED
    assert cert_abs_lt(PiExpr.pi_power(1), Fraction(3)) is Cert.DISPROVED
    pi = PiExpr.pi_power(1)
    assert cert_abs_lt(pi - pi, Fraction(1, 10**9)) is Cert.PROVED


def test_cert_undecided_at_low_budget():
    # |pi - 314159265358979/10^14| is ~3e-15: not decidable with 32 bits
    v = PiExpr([Fraction(-314159265358979, 10**14), 1])
    assert cert_abs_lt(v, Fraction(3, 10**15), p_max=32) is Cert.UNDECIDED
    assert cert_abs_lt(v, Fraction(4, 10**15)) is Cert.PROVED


@settings(max_examples=60)
@given(st.fractions(min_value=0, max_value=10**6))
def test_sqrt_bounds(q):
    lo, hi = sqrt_lower(q), sqrt_upper(q)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(1, 2**40) * (1 + hi)


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=1, max_size=4),
       st.integers(min_value=8, max_value=200))
def test_enclose_contains_float_value(cs, p):
    v = PiExpr(cs)
    b = enclose(v, p)
    # evaluate with the rigorous 20-digit bounds: the enclosure must meet that interval
    lo = sum(c * (PI_LO ** k if c >= 0 else PI_HI ** k) for k, c in enumerate(cs))
    hi = sum(c * (PI_HI ** k if c >= 0 else PI_LO ** k) for k, c in enumerate(cs))
    assert b.re.lo <= hi and lo <= b.re.hi
