"""Exact coefficient rings and the twist data (sigma, delta, sigma', delta').

Four carriers are supported:

* ``ZMod(n)``            -- residue classes mod n, encoded as ints in [0, n)
* ``PolyFp(p, var)``     -- F_p[var], dense ascending tuples of ints, zeros stripped
* ``PolyQ(var)``         -- Q[var], dense ascending tuples of gmpy2 rationals, zeros stripped
* ``PolyFpMod(p, var, g)`` -- F_p[var]/(g) for a monic g, reduced tuples

Elements are plain hashable values, so two elements are equal exactly when
their encodings are equal.  All arithmetic goes through the carrier object.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq as _mpq

from .errors import CarrierMismatch, NotLocallyNilpotent, TwistError

EXHAUSTIVE_LIMIT = 4096
SAMPLE_SIZE = 1000
DEFAULT_NILPOTENCY_CAP = 64


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def join_terms(terms):
    """Join printed summands, writing ``a + -b`` as ``a - b``."""
    out = terms[0] if terms else "0"
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


class Carrier:
    """Common interface.  Subclasses supply the actual arithmetic."""

    var = None
    is_finite = False

    def check(self, a):
        if not self.contains(a):
            raise CarrierMismatch(f"{a!r} is not an element of {self}")
        return a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a):
        return a == self.zero

    def pow(self, a, n):
        result = self.one
        for _ in range(n):
            result = self.mul(result, a)
        return result

    def sum(self, items):
        total = self.zero
        for item in items:
            total = self.add(total, item)
        return total

    def sort_key(self, a):
        return a

    def size(self):
        return None

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(self))

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor()})"


class ZMod(Carrier):
    is_finite = True

    def __init__(self, n):
        if n < 2:
            raise ValueError("modulus must be at least 2")
        self.n = n
        self.zero = 0
        self.one = 1

    def descriptor(self):
        return {"kind": "zmod", "modulus": self.n}

    def contains(self, a):
        return type(a) is int and 0 <= a < self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def from_int(self, k):
        return k % self.n

    def from_fraction(self, q):
        q = Fraction(q)
        try:
            inv = pow(q.denominator, -1, self.n)
        except ValueError:
            raise ValueError(f"{q} has no image in Z/{self.n}") from None
        return q.numerator * inv % self.n

    def inverse(self, a):
        try:
            return pow(a, -1, self.n)
        except ValueError:
            raise ZeroDivisionError(f"{a} is not a unit mod {self.n}") from None

    def elements(self):
        return list(range(self.n))

    def size(self):
        return self.n

    def random(self, rng, degree=None):
        return rng.randrange(self.n)

    def fmt(self, a):
        return str(a)

    def __str__(self):
        return f"Z/{self.n}"


class _PolyCarrier(Carrier):
    """Shared dense-polynomial arithmetic; subclasses fix the coefficients."""

    def __init__(self, var):
        self.var = var
        self.zero = ()
        self.one = (self._coef(1),)

    def _coef(self, c):
        raise NotImplementedError

    def _reduce(self, coeffs):
        return _strip(coeffs)

    def make(self, coeffs):
        return self._reduce(self._coef(c) for c in coeffs)

    @property
    def gen(self):
        return self._reduce((self._coef(0), self._coef(1)))

    def contains(self, a):
        return type(a) is tuple and self._reduce(a) == a and all(self._coef(c) == c for c in a)

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = self._coef(out[i] + c)
        return self._reduce(out)

    def neg(self, a):
        return tuple(self._coef(-c) for c in a)

    def scale(self, c, a):
        c = self._coef(c)
        return self._reduce(self._coef(c * ai) for ai in a)

    def raw_mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return _strip(self._coef(c) for c in out)

    def mul(self, a, b):
        return self._reduce(self.raw_mul(a, b))

    def from_int(self, k):
        return self._reduce((self._coef(k),))

    def compose(self, a, image, lift=False):
        """Evaluate the polynomial a at ``image`` (Horner)."""
        mul = self.raw_mul if lift else self.mul
        result = ()
        for c in reversed(a):
            result = mul(result, image)
            result = _strip(self._add_const(result, c))
        return result if lift else self._reduce(result)

    def _add_const(self, a, c):
        if not a:
            return (self._coef(c),)
        return (self._coef(a[0] + c),) + tuple(a[1:])

    def degree(self, a):
        return len(a) - 1

    def sort_key(self, a):
        return (len(a), a)

    def _fmt_coef(self, c):
        return str(c)

    def fmt(self, a):
        if not a:
            return "0"
        terms = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                terms.append(self._fmt_coef(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{self._fmt_coef(c)}*{mono}")
        return join_terms(terms)


class PolyFp(_PolyCarrier):
    def __init__(self, p, var="t"):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        super().__init__(var)

    def descriptor(self):
        return {"kind": "fp_poly", "p": self.p, "var": self.var}

    def _coef(self, c):
        if isinstance(c, Fraction):
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return c % self.p

    def from_fraction(self, q):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise ValueError(f"{q} has no image in F_{self.p}")
        return self._reduce((self._coef(q),))

    def scalar_inverse(self, c):
        return pow(c, -1, self.p)

    def random(self, rng, degree=4):
        return self._reduce(rng.randrange(self.p) for _ in range(rng.randint(0, degree) + 1))

    def __str__(self):
        return f"F_{self.p}[{self.var}]"


class PolyQ(_PolyCarrier):
    def __init__(self, var="t"):
        super().__init__(var)

    def descriptor(self):
        return {"kind": "q_poly", "var": self.var}

    def _coef(self, c):
        return c if type(c) is _mpq else _mpq(c)

    def contains(self, a):
        return type(a) is tuple and self._reduce(a) == a and all(type(c) is _mpq for c in a)

    def from_fraction(self, q):
        return self._reduce((_mpq(Fraction(q)),))

    def scalar_inverse(self, c):
        return 1 / _mpq(c)

    def random(self, rng, degree=4):
        def coef():
            if rng.random() < 0.3:
                return 0
            return Fraction(rng.randint(-3, 3), rng.randint(1, 3))

        return self.make(coef() for _ in range(rng.randint(0, degree) + 1))

    def _fmt_coef(self, c):
        return str(c)

    def __str__(self):
        return f"Q[{self.var}]"


class PolyFpMod(PolyFp):
    """F_p[var]/(g) with g monic of degree >= 1."""

    is_finite = True

    def __init__(self, p, var, modulus):
        super().__init__(p, var)
        modulus = _strip(c % p for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("quotient polynomial must be monic of positive degree")
        self.modulus = modulus
        self._n = len(modulus) - 1

    def descriptor(self):
        return {"kind": "fp_quotient", "p": self.p, "var": self.var, "modulus": list(self.modulus)}

    def _reduce(self, coeffs):
        out = [c % self.p for c in coeffs]
        g, n = self.modulus, self._n
        for top in range(len(out) - 1, n - 1, -1):
            c = out[top]
            if c:
                for i in range(n + 1):
                    out[top - n + i] = (out[top - n + i] - c * g[i]) % self.p
        return _strip(out[:n])

    def lift_reduce(self, coeffs):
        return self._reduce(coeffs)

    def elements(self):
        return sorted({_strip(t) for t in itertools.product(range(self.p), repeat=self._n)},
                      key=self.sort_key)

    def size(self):
        return self.p ** self._n

    def random(self, rng, degree=None):
        return self._reduce(rng.randrange(self.p) for _ in range(self._n))

    def __str__(self):
        g = PolyFp(self.p, self.var).fmt(self.modulus)
        return f"F_{self.p}[{self.var}]/({g})"


@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)
    exhaustive: bool = True

    def record(self, law, passed, witness=None):
        self.entries.append({"law": law, "passed": passed, "witness": witness})

    @property
    def ok(self):
        return all(e["passed"] for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e["passed"]]


class TwistedRing:
    """A carrier with an automorphism sigma, its inverse and a sigma-derivation.

    On polynomial carriers ``sigma``, ``sigma_inv`` and ``delta`` may be given
    as the image of the generator; they are then extended by substitution
    (sigma) or additivity plus ``delta(rs) = sigma(r) delta(s) + delta(r) s``.
    Any of them may instead be a callable, which is used as is (this is how
    broken twists are built for negative tests).  ``None`` means identity for
    sigma and zero for delta.
    """

    def __init__(self, carrier, sigma=None, delta=None, sigma_inv=None, *,
                 nilpotency_cap=DEFAULT_NILPOTENCY_CAP, name=None, indeterminate="x"):
        self.carrier = carrier
        self.indeterminate = indeterminate
        self.nilpotency_cap = nilpotency_cap
        self.name = name or str(carrier)
        self._sigma_spec, self._delta_spec, self._sigma_inv_spec = sigma, delta, sigma_inv
        self._cache = {"s": {}, "si": {}, "d": {}}
        # per-algebra memo tables used by skewpoly / invmodule
        self.push_cache = {}
        self.f_cache = {}

        self._sigma = self._build_sigma(sigma)
        self._delta = self._build_delta(delta)
        self._sigma_inv = self._build_sigma_inv(sigma_inv)

    # construction -------------------------------------------------------

    def _is_poly(self):
        return isinstance(self.carrier, _PolyCarrier)

    def _build_sigma(self, spec):
        C = self.carrier
        if spec is None:
            return lambda a: a
        if callable(spec):
            return spec
        if not self._is_poly():
            raise TwistError(f"{C} has no generator; give sigma as a callable")
        image = C.check(spec)
        if isinstance(C, PolyFpMod):
            if C._reduce(C.compose(C.modulus, image, lift=True)):
                raise TwistError(f"sigma({C.var}) = {C.fmt(image)} does not preserve the ideal ({C})")
        return lambda a: C.compose(a, image)

    def _build_sigma_inv(self, spec):
        C = self.carrier
        if spec is None and self._sigma_spec is None:
            return lambda a: a
        if callable(spec):
            return spec
        if spec is not None:
            image = C.check(spec)
            return lambda a: C.compose(a, image)
        if self._is_poly() and not callable(self._sigma_spec):
            image = self._sigma_spec
            if len(image) == 2 and image[1]:
                inv = C.scalar_inverse(image[1])
                inv_image = C.make((-image[0] * inv, inv))
                return lambda a: C.compose(a, inv_image)
        if C.is_finite:
            table = {}
            for a in C.elements():
                table[self._sigma(a)] = a
            if len(table) != C.size():
                raise TwistError("sigma is not bijective on the carrier")
            return table.__getitem__
        raise TwistError("sigma_inv must be given explicitly for this sigma")

    def _build_delta(self, spec):
        C = self.carrier
        if spec is None:
            return lambda a: C.zero
        if callable(spec):
            return spec
        if not self._is_poly():
            raise TwistError(f"{C} has no generator; give delta as a callable")
        d_gen = C.check(spec)
        s_gen = self._sigma(C.gen)
        powers = [(), ]  # delta(var^i), computed in the lifted polynomial ring

        def delta_of_power(i):
            while len(powers) <= i:
                n = len(powers)
                prev = powers[-1]
                t_prev = tuple([0] * (n - 1) + [1])
                powers.append(_strip(
                    C._coef(c) for c in _add_lists(C.raw_mul(s_gen, prev), C.raw_mul(d_gen, t_prev))))
            return powers[i]

        if isinstance(C, PolyFpMod):
            g = C.modulus
            dg = ()
            for i, c in enumerate(g):
                if c:
                    dg = _strip(C._coef(x) for x in _add_lists(dg, tuple(C._coef(c * y) for y in delta_of_power(i))))
            if C._reduce(dg):
                raise TwistError(f"delta({C.var}) = {C.fmt(d_gen)} is not well defined modulo the ideal")

        def delta(a):
            out = ()
            for i, c in enumerate(a):
                if c:
                    out = _add_lists(out, tuple(c * y for y in delta_of_power(i)))
            return C._reduce(C._coef(c) for c in out)

        return delta

    # maps ---------------------------------------------------------------

    def _cached(self, key, fn, a):
        table = self._cache[key]
        try:
            return table[a]
        except KeyError:
            value = table[a] = fn(a)
            return value

    def sigma(self, a):
        return self._cached("s", self._sigma, a)

    def sigma_inv(self, a):
        return self._cached("si", self._sigma_inv, a)

    def delta(self, a):
        return self._cached("d", self._delta, a)

    def delta_prime(self, a):
        return self.carrier.neg(self.delta(self.sigma_inv(a)))

    def delta_power(self, a, n):
        for _ in range(n):
            a = self.delta(a)
        return a

    def nilpotency_index(self, a):
        r = self.delta(a)
        for n in range(1, self.nilpotency_cap + 1):
            if self.carrier.is_zero(r):
                return n
            r = self.delta(r)
        raise NotLocallyNilpotent(a, self.nilpotency_cap)

    @property
    def delta_is_zero(self):
        return self._delta_spec is None

    def inverse_twist(self):
        """The pair (sigma', delta') packaged as a twist (no derivation law implied)."""
        return TwistedRing(self.carrier, self.sigma_inv, self.delta_prime, self.sigma,
                           nilpotency_cap=self.nilpotency_cap, name=f"{self.name}'",
                           indeterminate=self.indeterminate)

    def validation_set(self, rng=None):
        C = self.carrier
        if C.is_finite and C.size() <= EXHAUSTIVE_LIMIT:
            return C.elements(), True
        rng = rng or random.Random(0)
        return [C.random(rng) for _ in range(SAMPLE_SIZE)], False

    def __repr__(self):
        return f"TwistedRing({self.name})"


def _add_lists(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return tuple(out)


def apply_sigma(T, r):
    return T.sigma(T.carrier.check(r))


def apply_sigma_prime(T, r):
    return T.sigma_inv(T.carrier.check(r))


def apply_delta(T, r):
    return T.delta(T.carrier.check(r))


def apply_delta_prime(T, r):
    return T.delta_prime(T.carrier.check(r))


def nilpotency_index(T, r):
    return T.nilpotency_index(T.carrier.check(r))


def validate_twist(T, seed=0):
    """Check every twist law; failures become report entries with a witness."""
    C = T.carrier
    rng = random.Random(seed)
    if C.is_finite and C.size() <= EXHAUSTIVE_LIMIT:
        elems = C.elements()
        pairs = itertools.product(elems, elems)
        exhaustive = True
    else:
        elems = [C.random(rng) for _ in range(SAMPLE_SIZE)]
        pairs = [(C.random(rng), C.random(rng)) for _ in range(SAMPLE_SIZE)]
        exhaustive = False
    report = ValidationReport(exhaustive=exhaustive)
    s, si, d = T.sigma, T.sigma_inv, T.delta
    add, mul = C.add, C.mul

    report.record("sigma(1) = 1", s(C.one) == C.one, None if s(C.one) == C.one else (C.one,))
    bad = {"sigma additive": None, "sigma multiplicative": None, "delta additive": None,
           "delta sigma-Leibniz": None}
    for r, t in pairs:
        if bad["sigma additive"] is None and s(add(r, t)) != add(s(r), s(t)):
            bad["sigma additive"] = (r, t)
        if bad["sigma multiplicative"] is None and s(mul(r, t)) != mul(s(r), s(t)):
            bad["sigma multiplicative"] = (r, t)
        if bad["delta additive"] is None and d(add(r, t)) != add(d(r), d(t)):
            bad["delta additive"] = (r, t)
        if bad["delta sigma-Leibniz"] is None and d(mul(r, t)) != add(mul(s(r), d(t)), mul(d(r), t)):
            bad["delta sigma-Leibniz"] = (r, t)
    inv_bad = next((r for r in elems if s(si(r)) != r or si(s(r)) != r), None)
    nil_bad = None
    for r in elems:
        try:
            T.nilpotency_index(r)
        except NotLocallyNilpotent:
            nil_bad = r
            break
    for law in ("sigma additive", "sigma multiplicative"):
        report.record(law, bad[law] is None, bad[law])
    report.record("sigma o sigma' = sigma' o sigma = id", inv_bad is None,
                  None if inv_bad is None else (inv_bad,))
    for law in ("delta additive", "delta sigma-Leibniz"):
        report.record(law, bad[law] is None, bad[law])
    report.record("delta locally nilpotent", nil_bad is None, None if nil_bad is None else (nil_bad,))
    return report
