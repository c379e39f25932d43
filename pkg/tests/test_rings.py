import random

import pytest
from hypothesis import given, settings, strategies as st

from skewore.errors import CarrierMismatch, NotLocallyNilpotent, TwistError
from skewore.rings import (
    PolyFp,
    PolyFpMod,
    PolyQ,
    TwistedRing,
    ZMod,
    apply_delta,
    apply_delta_prime,
    apply_sigma,
    apply_sigma_prime,
    nilpotency_index,
    validate_twist,
)

from fixtures import all_presets, finite_presets


@pytest.fixture
def quantum():
    C = PolyFp(5, "y")
    return TwistedRing(C, sigma=C.make((0, 2)))


@pytest.fixture
def jordan():
    C = PolyQ("x")
    return TwistedRing(C, delta=C.one)


def test_sigma_examples(quantum):
    C = quantum.carrier
    assert apply_sigma(quantum, C.make((0, 0, 1))) == C.make((0, 0, 4))
    T = TwistedRing(PolyQ("x"))
    r = T.carrier.make((1, 3))
    assert apply_sigma(T, r) == r


def test_sigma_prime_found_by_enumeration(quantum):
    C = quantum.carrier
    y = C.gen
    # solve sigma(c*y) = y over F_5 by trying every c
    c = next(c for c in range(5) if apply_sigma(quantum, C.make((0, c))) == y)
    assert apply_sigma_prime(quantum, y) == C.make((0, c)) == C.make((0, 3))
    rng = random.Random(3)
    for _ in range(100):
        r = C.random(rng)
        assert apply_sigma(quantum, apply_sigma_prime(quantum, r)) == r


def test_delta_examples(jordan):
    C = jordan.carrier
    x2 = C.make((0, 0, 1))
    assert apply_delta(jordan, x2) == C.make((0, 2))
    assert apply_delta(jordan, C.one) == C.zero
    assert apply_delta_prime(jordan, C.gen) == C.make((-1,))
    assert nilpotency_index(jordan, C.gen) == 2


def test_nilpotency_index_matches_repeated_delta(jordan):
    C = jordan.carrier
    x3 = C.make((0, 0, 0, 1))
    n, r = 0, x3
    while r:
        r = apply_delta(jordan, r)
        n += 1
    assert nilpotency_index(jordan, x3) == n == 4


def test_delta_zero_defaults(quantum):
    C = quantum.carrier
    r = C.make((1, 2, 3))
    assert apply_delta(quantum, r) == C.zero
    assert apply_delta_prime(quantum, C.gen) == C.zero
    assert nilpotency_index(quantum, r) == 1


def test_carrier_mismatch(quantum):
    with pytest.raises(CarrierMismatch):
        apply_sigma(quantum, 3)
    with pytest.raises(CarrierMismatch):
        apply_delta(quantum, (1, 7))


def test_not_locally_nilpotent_raises():
    C = PolyQ("x")
    T = TwistedRing(C, delta=lambda a: a, nilpotency_cap=8)
    with pytest.raises(NotLocallyNilpotent) as err:
        nilpotency_index(T, C.one)
    assert err.value.cap == 8


def test_validate_twist_all_pass():
    for spec in all_presets() + finite_presets():
        report = validate_twist(spec.twist)
        assert report.ok, (spec.name, report.failures())
    assert validate_twist(TwistedRing(ZMod(4))).exhaustive


def test_validate_twist_reports_leibniz_witness():
    C = PolyFpMod(3, "t", (0, 0, 0, 1))
    # doubling every coefficient is additive but breaks delta(rs) = sigma(r) delta(s) + delta(r) s
    T = TwistedRing(C, delta=lambda a: C.scale(2, a))
    report = validate_twist(T)
    bad = {e["law"]: e["witness"] for e in report.failures()}
    assert "delta sigma-Leibniz" in bad
    r, s = bad["delta sigma-Leibniz"]
    assert T.delta(C.mul(r, s)) != C.add(C.mul(T.sigma(r), T.delta(s)), C.mul(T.delta(r), s))


def test_validate_twist_reports_sigma_failures():
    C = PolyFpMod(2, "t", (0, 0, 1))
    T = TwistedRing(C, sigma=lambda a: C.zero, sigma_inv=lambda a: a)
    laws = {e["law"] for e in validate_twist(T).failures()}
    assert {"sigma(1) = 1", "sigma o sigma' = sigma' o sigma = id"} <= laws


def test_quotient_twists_checked_for_well_definedness():
    C = PolyFpMod(2, "t", (0, 0, 1))
    with pytest.raises(TwistError):
        TwistedRing(C, sigma=C.one)  # t -> 1 does not preserve (t^2)
    C3 = PolyFpMod(3, "t", (0, 0, 1))
    with pytest.raises(TwistError):
        TwistedRing(C3, delta=C3.one)  # delta(t^2) = 2t is not in (t^2)
    TwistedRing(PolyFpMod(2, "t", (0, 0, 1)), delta=(1,))  # delta(t^2) = 2t = 0 is fine


def test_canonical_form_is_history_independent():
    C = PolyFpMod(3, "t", (0, 0, 0, 1))
    a = C.add(C.make((1, 2)), C.make((2, 1, 0, 0)))
    assert a == () and C.is_zero(a)
    b = C.mul(C.make((0, 1)), C.make((0, 0, 1)))
    assert b == ()
    Q = PolyQ("x")
    assert Q.add(Q.from_fraction("1/2"), Q.from_fraction("1/2")) == Q.one


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_laws_on_random_pairs_of_each_preset(seed_r, seed_s):
    for spec in _presets():
        T = spec.twist
        C = T.carrier
        r = C.random(random.Random(seed_r))
        s = C.random(random.Random(seed_s))
        assert T.delta(C.mul(r, s)) == C.add(C.mul(T.sigma(r), T.delta(s)), C.mul(T.delta(r), s))
        assert T.sigma_inv(T.sigma(r)) == r
        assert T.sigma(C.mul(r, s)) == C.mul(T.sigma(r), T.sigma(s))
        # n(r) <= deg(r) + 1 for every catalog algebra
        assert T.nilpotency_index(r) <= (max(1, len(r)) if isinstance(r, tuple) else 1)


_CACHE = []


def _presets():
    if not _CACHE:
        _CACHE.extend(all_presets())
    return _CACHE
