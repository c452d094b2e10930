import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipls.interval import (
    EMPTY,
    FAST,
    RIGOROUS,
    Interval,
    IntervalArray,
    KaucherInterval,
    add,
    contains,
    dual,
    get_rounding,
    hull,
    intersect,
    iv_matvec,
    kaucher_add,
    mag,
    mid,
    mul,
    rad,
    real_iv_matvec,
    rounding,
    scale,
    sub,
    subset,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw):
    a, b = draw(finite), draw(finite)
    return Interval(min(a, b), max(a, b))


def test_basic_arithmetic():
    assert add(Interval(1, 2), Interval(3, 4)) == Interval(4, 6)
    assert scale(-1, Interval(2, 5)) == Interval(-5, -2)
    assert mul(Interval(-1, 2), Interval(-3, 1)) == Interval(-6, 3)
    assert sub(Interval(1, 2), Interval(0, 1)) == Interval(0, 2)


def test_mul_matches_endpoint_products():
    a, b = Interval(-1, 2), Interval(-3, 1)
    prods = [x * y for x, y in itertools.product(a, b)]
    assert mul(a, b) == Interval(min(prods), max(prods))


def test_mid_rad_mag():
    assert mid(Interval(1, 3)) == 2 and rad(Interval(1, 3)) == 1
    assert mag(Interval(-5, 2)) == 5
    p = Interval(0.99, 1.01)
    assert p.mid == pytest.approx(1.0) and p.rad == pytest.approx(0.01)


def test_lattice_ops():
    assert hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3)
    assert intersect(Interval(0, 1), Interval(2, 3)) is EMPTY
    assert intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2)
    assert subset(Interval(1, 2), Interval(0, 3))
    assert not subset(Interval(-1, 2), Interval(0, 3))
    assert contains(Interval(0, 1), 0.5) and 2.0 not in Interval(0, 1)


def test_invalid_intervals_rejected():
    with pytest.raises(ValueError):
        Interval(2, 1)
    with pytest.raises(ValueError):
        Interval(0, np.inf)
    with pytest.raises(ValueError):
        IntervalArray([0, 2], [1, 1])


def test_kaucher_examples():
    k = kaucher_add(Interval(1, 2), dual(Interval(-1, 1)))
    assert (k.lo, k.hi) == (2, 1) and not k.is_proper
    assert k.to_interval() is EMPTY
    r = 0.25
    inner = KaucherInterval(3, 5) + dual(Interval(-r, r))
    assert inner.to_interval() == Interval(3 + r, 5 - r)
    assert dual(dual(KaucherInterval(3, 7))) == KaucherInterval(3, 7)


@given(intervals(), intervals())
def test_kaucher_agrees_with_classical_on_proper(a, b):
    k = kaucher_add(a, b)
    assert k.to_interval() == a + b


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_dual_involution(lo, hi):
    k = KaucherInterval(lo, hi)
    assert k.dual().dual() == k


@settings(max_examples=60, deadline=None)
@given(intervals(), intervals(), st.integers(0, 2**32 - 1))
def test_containment_soundness(a, b, seed):
    rng = np.random.default_rng(seed)
    xs = rng.uniform(a.lo, a.hi, 10_000)
    ys = rng.uniform(b.lo, b.hi, 10_000)
    with rounding(RIGOROUS):
        for op, f in ((add, np.add), (sub, np.subtract), (mul, np.multiply)):
            r = op(a, b)
            v = f(xs, ys)
            assert np.all((v >= r.lo) & (v <= r.hi))


@given(intervals())
def test_mid_rad_roundtrip(a):
    assert a.rad >= 0
    assert abs(a.mid - (a.lo + a.hi) / 2) <= 4 * np.spacing(max(abs(a.lo), abs(a.hi), 1e-300))


def test_rigorous_rounding_widens():
    a, b = Interval(0.1, 0.1), Interval(0.2, 0.2)
    fast = a + b
    with rounding(RIGOROUS):
        assert get_rounding() == RIGOROUS
        rig = a + b
    assert get_rounding() == FAST
    assert rig.lo < fast.lo and rig.hi > fast.hi
    assert rig.contains(0.30000000000000004)


def test_matvec_examples():
    v = IntervalArray([0, 1, -2], [1, 3, 2])
    out = real_iv_matvec(np.eye(3), v)
    assert np.array_equal(out.lo, v.lo) and np.array_equal(out.hi, v.hi)
    r = real_iv_matvec(np.array([[1.0, -1.0]]), IntervalArray([0, 0], [1, 1]))
    assert (r.lo[0], r.hi[0]) == (-1, 1)
    with pytest.raises(ValueError):
        real_iv_matvec(np.ones((2, 3)), IntervalArray([0, 0], [1, 1]))


def test_matvec_monte_carlo():
    rng = np.random.default_rng(3)
    Mc = rng.normal(size=(3, 3))
    M = IntervalArray(Mc - 0.1, Mc + 0.1)
    c = rng.normal(size=3)
    v = IntervalArray(c - 0.5, c + 0.5)
    with rounding(RIGOROUS):
        out = iv_matvec(M, v)
    for _ in range(1000):
        Mp = rng.uniform(M.lo, M.hi)
        vp = rng.uniform(v.lo, v.hi)
        assert out.contains(Mp @ vp)


@given(st.lists(st.floats(0, 10), min_size=1, max_size=5), st.integers(0, 100))
def test_symmetric_image_is_symmetric(r, seed):
    W = np.random.default_rng(seed).normal(size=(3, len(r)))
    s = real_iv_matvec(W, IntervalArray.symmetric(r))
    assert np.allclose(s.lo, -s.hi, rtol=0, atol=1e-12 * (1 + np.max(np.abs(s.hi))))


def test_array_helpers():
    x = IntervalArray.from_mid_rad([1, 2], [0.5, 0.0])
    assert x[1] == Interval(2, 2)
    assert IntervalArray.from_json(x.to_json()).to_json() == x.to_json()
    assert x.inflate(0.1).subset(x.inflate(0.2))
    assert x.interior_subset(x.inflate(0.1, 1e-9))
    assert x.intersect(IntervalArray([5, 5], [6, 6])) is EMPTY
    assert x.hausdorff(x) == 0
    with pytest.raises(AttributeError):
        x.lo = np.zeros(2)
    assert not x.lo.flags.writeable
