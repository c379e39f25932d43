"""Shared algebra and module instances for the test suite."""

from skewore.catalog import PRESETS, cyclic_quotient, preset
from skewore.finmod import FiniteModule
from skewore.rings import PolyFpMod, TwistedRing, ZMod

# finite (truncated) variant of every preset; each truncation is checked to
# keep sigma and delta well defined when the TwistedRing is built
FINITE_PRESETS = {
    "quantum_plane": {"field": 5, "trunc": 2},
    "jordan_plane": {"field": 2, "trunc": 2},
    "q_meromorphic_weyl": {"field": 3, "trunc": 2},
    "q_zero_bc": {"field": 3, "trunc": 2},
    "trimmed_double_extension": {"field": 3, "trunc": 2},
    "skew_poly_ring": {},
}


def all_presets():
    return [preset(name) for name in PRESETS]


def finite_presets():
    return [preset(name, params) for name, params in FINITE_PRESETS.items()]


def z4():
    return TwistedRing(ZMod(4), name="Z/4")


def example_instance():
    """K = Z/4, m = (2), M = K/m, sigma = id, delta = 0."""
    T = z4()
    return T, cyclic_quotient(T, [2])


def quantum_f5():
    C = PolyFpMod(5, "t", (0, 0, 1))
    return TwistedRing(C, sigma=(0, 2))


def derivation_f3():
    C = PolyFpMod(3, "t", (0, 0, 0, 1))
    return TwistedRing(C, delta=(0, 0, 1))


def jordan_f2():
    C = PolyFpMod(2, "t", (0, 0, 1))
    return TwistedRing(C, delta=(1,))


def swap_f2():
    """F_2[t]/(t^2 + t) with sigma swapping the idempotents t and t + 1."""
    C = PolyFpMod(2, "t", (0, 1, 1))
    return TwistedRing(C, sigma=(1, 1))


def fixture_modules():
    """(label, module) pairs of size <= 64, compatible and incompatible ones."""
    out = []
    T = z4()
    R = cyclic_quotient(T, [])
    out += [("Z/4", R), ("Z/4/(2)", cyclic_quotient(T, [2])),
            ("Z/4 + Z/4/(2)", FiniteModule.direct_sum(R, cyclic_quotient(T, [2]))),
            ("Z/4 + Z/4", FiniteModule.direct_sum(R, R))]
    F2 = TwistedRing(ZMod(2))
    out.append(("F2 + F2", FiniteModule.direct_sum(cyclic_quotient(F2, []), cyclic_quotient(F2, []))))
    out.append(("F5", cyclic_quotient(TwistedRing(ZMod(5)), [])))
    for label, T in (("quantum F5[t]/(t^2)", quantum_f5()), ("delta F3[t]/(t^3)", derivation_f3()),
                     ("jordan F2[t]/(t^2)", jordan_f2()), ("swap F2[t]/(t^2+t)", swap_f2())):
        C = T.carrier
        out.append((f"{label} regular", cyclic_quotient(T, [])))
        out.append((f"{label} / (t)", cyclic_quotient(T, [C.gen])))
    T = derivation_f3()
    out.append(("delta F3[t]/(t^3) / (t^2)", cyclic_quotient(T, [T.carrier.make((0, 0, 1))])))
    for spec in finite_presets():
        if spec.name == "skew_poly_ring":
            continue
        out.append((f"{spec.name} regular", cyclic_quotient(spec.twist, [])))
        out.append((f"{spec.name} / (gen)", cyclic_quotient(spec.twist, [spec.ring.gen])))
    return [(label, M) for label, M in out if len(M) <= 64]
