"""Numbered acceptance criteria, each with its wall-clock limit.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import random
import time

import pytest

from skewore.catalog import default_module, preset
from skewore.finmod import all_submodules, is_compatible, is_completely_compatible
from skewore.invmodule import act, check_product_relation_2_4, f_op, f_op_word_oracle, inv_commute, random_invpoly
from skewore.primes import verify_annihilator_lemma, verify_att_equality
from skewore.rings import validate_twist
from skewore.skewpoly import SkewPoly, mul, ore_swap, random_poly

from fixtures import all_presets, example_instance, finite_presets, fixture_modules
from oracles import binomial_f, iterated_inverse, quotient_compatible, ref_act, ref_mul

SAMPLES = 1000


class Clock:
    def __init__(self, limit):
        self.limit = limit
        self.start = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"took {elapsed:.2f} s, limit {self.limit} s"


def _delta_zero_specs():
    return [preset("quantum_plane"), preset("skew_poly_ring"), preset("skew_poly_ring", {"field": 7, "a": 3})]


@pytest.mark.acceptance(1, "ring-law suite", 5)
def test_criterion_01_ring_laws():
    clock = Clock(5)
    for spec in finite_presets():
        report = validate_twist(spec.twist)
        assert report.exhaustive and report.ok, (spec.name, report.failures())
    for spec in all_presets():
        if spec.ring.is_finite:
            continue
        report = validate_twist(spec.twist, seed=1)
        assert not report.exhaustive and report.ok, (spec.name, report.failures())
    clock.check()


@pytest.mark.acceptance(2, "associativity and distributivity of mul", 30)
def test_criterion_02_algebra_arithmetic():
    clock = Clock(30)
    for spec in all_presets():
        T = spec.twist
        rng = random.Random(2)
        for _ in range(SAMPLES):
            f, g, h = (random_poly(T, rng, 4, 4) for _ in range(3))
            fg = mul(f, g)
            assert mul(fg, h) == mul(f, mul(g, h)), spec.name
            assert mul(f, g + h) == fg + mul(f, h), spec.name
            assert mul(f + g, h) == mul(f, h) + mul(g, h), spec.name
    clock.check()


@pytest.mark.acceptance(3, "relation fixtures", 1)
def test_criterion_03_relations():
    clock = Clock(1)
    q = preset("quantum_plane")
    x, y = q.parse("x"), q.parse("y")
    assert mul(x, y) == mul(q.parse("q*y"), x)
    j = preset("jordan_plane")
    x, y = j.parse("x"), j.parse("y")
    assert mul(y, x) == mul(x, y) + mul(y, y)
    w = preset("q_meromorphic_weyl")
    x, y = w.parse("x"), w.parse("y")
    assert mul(y, x) == mul(w.parse("q*x"), y) + mul(x, x)
    Y = y + w.parse("x/(q - 1)")
    assert mul(Y, x) == mul(w.parse("q*x"), Y)
    b = preset("q_zero_bc")
    x, y = b.parse("x"), b.parse("y")
    assert mul(y, x) == mul(b.parse("b*x"), y) + mul(b.parse("c*y"), y)
    t = preset("trimmed_double_extension")
    y1, y2 = t.parse("y1"), t.parse("y2")
    assert mul(y2, y1) == mul(t.parse("p12*y1"), y2) + mul(t.parse("p11*y1"), y1)
    for spec in all_presets():
        assert all(ok for _, ok in spec.self_test()), spec.name
    clock.check()


@pytest.mark.acceptance(4, "f-operator oracle equivalence", 10)
def test_criterion_04_f_operator():
    clock = Clock(10)
    for spec in all_presets():
        T, C = spec.twist, spec.ring
        rng = random.Random(4)
        commuting = all(T.delta(T.sigma(r)) == T.sigma(T.delta(r)) for r in (C.random(rng) for _ in range(50)))
        for _ in range(100):
            r = C.random(rng)
            for j in range(7):
                for i in range(j + 1):
                    value = f_op(T, j, i, r)
                    assert value == f_op_word_oracle(T, j, i, r), (spec.name, j, i)
                    if commuting:
                        assert value == binomial_f(T, j, i, r), (spec.name, j, i)
    clock.check()


@pytest.mark.acceptance(5, "inverse commutation", 5)
def test_criterion_05_inverse_commutation():
    clock = Clock(5)
    for spec in all_presets():
        T, C = spec.twist, spec.ring
        rng = random.Random(5)
        for _ in range(100):
            r = C.random(rng)
            for k in range(7):
                assert dict(inv_commute(T, r, k)) == iterated_inverse(T, r, k), (spec.name, k)
    clock.check()


@pytest.mark.acceptance(6, "module-action axioms", 30)
def test_criterion_06_action_axioms():
    clock = Clock(30)
    for spec in all_presets():
        T = spec.twist
        M = default_module(spec)
        rng = random.Random(6)
        for _ in range(SAMPLES):
            m = random_invpoly(M, rng, depth=4)
            f, g = random_poly(T, rng, 4, 4), random_poly(T, rng, 4, 4)
            assert act(act(m, f), g) == act(m, mul(f, g)), spec.name
    clock.check()


@pytest.mark.acceptance(7, "delta = 0 reduction oracle", 10)
def test_criterion_07_delta_zero_reference():
    clock = Clock(10)
    for spec in _delta_zero_specs():
        T = spec.twist
        M = default_module(spec)
        rng = random.Random(7)
        for _ in range(SAMPLES):
            f, g = random_poly(T, rng), random_poly(T, rng)
            assert dict(mul(f, g).coeffs()) == ref_mul(T, dict(f.coeffs()), dict(g.coeffs())), spec.name
            m = random_invpoly(M, rng)
            assert dict(act(m, f).coeffs()) == ref_act(T, M, dict(m.coeffs()), dict(f.coeffs())), spec.name
    clock.check()


@pytest.mark.acceptance(8, "Ore swap", 10)
def test_criterion_08_ore_swap():
    clock = Clock(10)
    for spec in all_presets():
        T = spec.twist
        rng = random.Random(8)
        for _ in range(100):
            a = random_poly(T, rng)
            for p in range(6):
                xp = SkewPoly.monomial(T, T.carrier.one, p)
                assert mul(xp, a) == mul(ore_swap(a, p), xp), (spec.name, p)
    clock.check()


@pytest.mark.acceptance(9, "compatibility oracle", 60)
def test_criterion_09_compatibility():
    clock = Clock(60)
    modules = fixture_modules()
    assert modules and all(len(M) <= 64 for _, M in modules)
    outcomes = set()
    for label, M in modules:
        T = M.twist
        subs = all_submodules(M)
        expected = {N: quotient_compatible(M, N, T.sigma, T.delta) for N in subs}
        for N in subs:
            assert bool(is_compatible(M, N)) == expected[N], label
        complete = is_completely_compatible(M)
        assert bool(complete) == all(expected.values()), label
        outcomes.add(bool(complete))
        if not complete:
            assert not expected[frozenset(complete.witness[0])], label
            continue
        # completely compatible: compatible, quotients completely compatible, and (sigma', delta') too
        assert is_compatible(M), label
        for N in subs:
            assert is_completely_compatible(M.quotient(N)), label
        assert is_completely_compatible(M, sigma=T.sigma_inv, delta=T.delta_prime), label
        assert all(quotient_compatible(M, N, T.sigma_inv, T.delta_prime) for N in subs), label
    assert outcomes == {True, False}
    clock.check()


@pytest.mark.acceptance(10, "annihilator lemma and attached primes on Z/4 / (2)", 120)
def test_criterion_10_lemma_fixture():
    clock = Clock(120)
    T, M = example_instance()
    lemma = verify_annihilator_lemma(M, bound=5)
    assert lemma.ok, lemma.checks
    names = {c["name"]: c["status"] for c in lemma.checks}
    assert names["PA within ann_A(M[x^-1]/N[x^-1])"] == "pass"
    assert names["ann_A(M[x^-1]/N[x^-1]) within PA"] == "pass"
    assert lemma.result["mode"] == "exhaustive"
    equality = verify_att_equality(M, bound=2)
    assert equality.ok, equality.checks
    assert equality.result["att_A"] == [["0", "2"]]
    clock.check()


@pytest.mark.acceptance(11, "relation probe on the Jordan plane", 1)
def test_criterion_11_probe():
    clock = Clock(1)
    j = preset("jordan_plane")
    C = j.ring
    reports = [check_product_relation_2_4(j.twist, C.one, C.gen, 1, 1) for _ in range(2)]
    first, second = reports
    assert first.direct == second.direct and first.verdict == second.verdict
    assert first.index_matches and not first.printed_matches
    assert first.verdict == "exponent -(i+k') matches direct multiplication; -(k+k') does not"
    clock.check()
