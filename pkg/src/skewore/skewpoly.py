"""Arithmetic in A = R(x; sigma, delta) with x r = sigma(r) x + x delta(r) x.

Elements are kept in left normal form  r_0 + r_1 x + ... + r_k x^k.  Because
delta is locally nilpotent the commutation rule unrolls to

    x r = sigma(r) x + sigma(delta(r)) x^2 + ... + sigma(delta^(n-1)(r)) x^n,

n = nilpotency index of r, and that finite expansion drives multiplication.
"""

from __future__ import annotations

from .errors import CarrierMismatch, SkewOreError
from .rings import join_terms

NEG_INFINITY = float("-inf")


class SkewPoly:
    __slots__ = ("twist", "_c", "_hash")

    def __init__(self, twist, coeffs=None):
        C = twist.carrier
        self.twist = twist
        self._c = {d: c for d, c in (coeffs or {}).items() if not C.is_zero(c)}
        self._hash = None

    @classmethod
    def const(cls, twist, r):
        return cls(twist, {0: twist.carrier.check(r)})

    @classmethod
    def x(cls, twist):
        return cls(twist, {1: twist.carrier.one})

    @classmethod
    def monomial(cls, twist, r, deg):
        return cls(twist, {deg: r})

    def coeffs(self):
        """(degree, coefficient) pairs in ascending degree."""
        return sorted(self._c.items())

    def coeff(self, d):
        return self._c.get(d, self.twist.carrier.zero)

    def is_zero(self):
        return not self._c

    def degree(self):
        return max(self._c) if self._c else NEG_INFINITY

    def leading_coeff(self):
        if not self._c:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self._c[max(self._c)]

    def _check(self, other):
        if not isinstance(other, SkewPoly):
            other = SkewPoly.const(self.twist, other)
        if other.twist is not self.twist:
            raise CarrierMismatch("operands live in different algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        add = self.twist.carrier.add
        out = dict(self._c)
        for d, c in other._c.items():
            out[d] = add(out[d], c) if d in out else c
        return SkewPoly(self.twist, out)

    def __neg__(self):
        neg = self.twist.carrier.neg
        return SkewPoly(self.twist, {d: neg(c) for d, c in self._c.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        return mul(self, self._check(other))

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not elements of A")
        result = SkewPoly.const(self.twist, self.twist.carrier.one)
        for _ in range(n):
            result = result * self
        return result

    def left_scale(self, r):
        mul_ = self.twist.carrier.mul
        return SkewPoly(self.twist, {d: mul_(r, c) for d, c in self._c.items()})

    def shift(self, k):
        """Right multiplication by x^k (no commutation needed)."""
        return SkewPoly(self.twist, {d + k: c for d, c in self._c.items()})

    def __eq__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.twist is other.twist and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"SkewPoly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def format_poly(f, indeterminate=None):
    C = f.twist.carrier
    indeterminate = indeterminate or f.twist.indeterminate
    if f.is_zero():
        return "0"
    terms = []
    for d, c in sorted(f._c.items(), key=lambda t: -t[0]):
        mono = "" if d == 0 else (indeterminate if d == 1 else f"{indeterminate}^{d}")
        cs = C.fmt(c)
        if not mono:
            terms.append(cs)
            continue
        if c == C.one:
            terms.append(mono)
            continue
        if " " in cs or cs.startswith("-"):
            cs = f"({cs})"
        terms.append(f"{cs}*{mono}")
    return join_terms(terms)


def push_x_through(T, r):
    """Normal form of x*r: degree-i coefficient is sigma(delta^(i-1)(r))."""
    T.carrier.check(r)
    cache = T.push_cache
    if r in cache:
        return cache[r]
    n = T.nilpotency_index(r)
    terms, a = {}, r
    for i in range(1, n + 1):
        terms[i] = T.sigma(a)
        a = T.delta(a)
    cache[r] = result = SkewPoly(T, terms)
    return result


def x_times(f):
    """Left multiplication by x."""
    T = f.twist
    add = T.carrier.add
    out = {}
    for k, a in f._c.items():
        for d, c in push_x_through(T, a)._c.items():
            d += k
            out[d] = add(out[d], c) if d in out else c
    return SkewPoly(T, out)


def mul(f, g):
    if f.twist is not g.twist:
        raise CarrierMismatch("operands live in different algebras")
    T = f.twist
    add, cmul = T.carrier.add, T.carrier.mul
    out = {}
    h = g
    top = f.degree()
    if top == NEG_INFINITY or g.is_zero():
        return SkewPoly(T)
    for i in range(top + 1):
        if i:
            h = x_times(h)
        r = f._c.get(i)
        if r is None:
            continue
        for d, c in h._c.items():
            c = cmul(r, c)
            out[d] = add(out[d], c) if d in out else c
    return SkewPoly(T, out)


def add(f, g):
    return f + g


def neg(f):
    return -f


def degree(f):
    return f.degree()


def leading_coeff(f):
    return f.leading_coeff()


def swap_step(a):
    """The a' with x*a = a'*x."""
    xa = x_times(a)
    if 0 in xa._c:
        raise SkewOreError("x*a has a constant term; cannot factor x on the right")
    return xa.shift(-1)


def ore_swap(a, p):
    """Return a_p with x^p * a = a_p * x^p, checked by direct multiplication."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    result = a
    for _ in range(p):
        result = swap_step(result)
    xp = SkewPoly.monomial(a.twist, a.twist.carrier.one, p)
    if mul(xp, a) != mul(result, xp):
        raise SkewOreError(f"ore_swap postcondition failed for p={p}, a={a}")
    return result


def random_poly(T, rng, max_deg=4, coeff_deg=4, density=0.8):
    C = T.carrier
    terms = {}
    for d in range(rng.randint(0, max_deg) + 1):
        if rng.random() < density:
            terms[d] = C.random(rng, coeff_deg) if coeff_deg is not None else C.random(rng)
    return SkewPoly(T, terms)
