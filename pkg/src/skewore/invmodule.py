"""The inverse polynomial module M[x^-1] and the f_j^i operator calculus.

``x^-1 r = sigma'(r) x^-1 + delta'(r)`` iterated k times gives

    x^-k r = sum_{i=0..k} f_k^i(r) x^-i,

where f_k^i is the sum of all words in sigma', delta' with i letters sigma'.
The right action of A on M[x^-1] applies this to each monomial m x^-k and
then drops every positive power of x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .errors import CarrierMismatch, CombinatorialCapExceeded
from .skewpoly import NEG_INFINITY, SkewPoly

WORD_ORACLE_CAP = 10 ** 5


class RegularModule:
    """R viewed as a right module over itself."""

    def __init__(self, twist):
        self.twist = twist
        self.carrier = twist.carrier
        self.zero = self.carrier.zero

    def add(self, a, b):
        return self.carrier.add(a, b)

    def neg(self, a):
        return self.carrier.neg(a)

    def act(self, m, r):
        return self.carrier.mul(m, r)

    def is_zero(self, m):
        return m == self.zero

    def contains(self, m):
        return self.carrier.contains(m)

    def fmt(self, m):
        return self.carrier.fmt(m)

    def random(self, rng):
        return self.carrier.random(rng)

    def __repr__(self):
        return f"RegularModule({self.carrier})"


class FOperatorTable:
    """Memoised f_j^i, keyed by (j, i) and applied pointwise."""

    def __init__(self, twist):
        self.twist = twist
        self.memo = {}

    def __call__(self, j, i, r):
        if j < 0 or i < 0 or i > j:
            return self.twist.carrier.zero
        table = self.memo.setdefault((j, i), {})
        if r in table:
            return table[r]
        T = self.twist
        if j == 0:
            value = r
        else:
            value = T.carrier.add(T.sigma_inv(self(j - 1, i - 1, r)),
                                  T.delta_prime(self(j - 1, i, r)))
        table[r] = value
        return value


def _ftable(T):
    table = T.f_cache.get("table")
    if table is None:
        table = T.f_cache["table"] = FOperatorTable(T)
    return table


def f_op(T, j, i, r):
    if j < 0 or not 0 <= i <= j:
        raise IndexError(f"f_{j}^{i} needs 0 <= i <= j")
    return _ftable(T)(j, i, T.carrier.check(r))


def f_op_word_oracle(T, j, i, r):
    """Sum over every word with i letters sigma' and j-i letters delta'."""
    if j < 0 or not 0 <= i <= j:
        raise IndexError(f"f_{j}^{i} needs 0 <= i <= j")
    if comb(j, i) > WORD_ORACLE_CAP:
        raise CombinatorialCapExceeded(f"binom({j},{i}) words exceeds {WORD_ORACLE_CAP}")
    C = T.carrier
    total = C.zero
    for positions in itertools.combinations(range(j), i):
        value = r
        # letters are applied right to left: position j-1 acts first
        for pos in range(j - 1, -1, -1):
            value = T.sigma_inv(value) if pos in positions else T.delta_prime(value)
        total = C.add(total, value)
    return total


def inv_commute(T, r, k):
    """Coefficients of x^-k r in the x^-i basis, as (i, f_k^i(r)) with i descending."""
    table = _ftable(T)
    T.carrier.check(r)
    out = []
    for i in range(k, -1, -1):
        c = table(k, i, r)
        if not T.carrier.is_zero(c):
            out.append((i, c))
    return out


class InvPoly:
    """m_0 + m_1 x^-1 + ... + m_k x^-k with coefficients in a right module."""

    __slots__ = ("module", "_c")

    def __init__(self, module, coeffs=None):
        self.module = module
        self._c = {k: m for k, m in (coeffs or {}).items() if not module.is_zero(m)}

    def coeffs(self):
        return sorted(self._c.items())

    def coeff(self, k):
        return self._c.get(k, self.module.zero)

    def is_zero(self):
        return not self._c

    def depth(self):
        """Largest k with a nonzero coefficient of x^-k (-1 for zero)."""
        return max(self._c) if self._c else -1

    def degree(self):
        return -max(self._c) if self._c else NEG_INFINITY

    def lm(self):
        return -self.depth() if self._c else None

    def lc(self):
        if not self._c:
            raise ValueError("zero element has no leading coefficient")
        return self._c[max(self._c)]

    def lt(self):
        return (self.lc(), -self.depth())

    def __add__(self, other):
        M = self.module
        out = dict(self._c)
        for k, m in other._c.items():
            out[k] = M.add(out[k], m) if k in out else m
        return InvPoly(M, out)

    def __neg__(self):
        return InvPoly(self.module, {k: self.module.neg(m) for k, m in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, InvPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        terms = [f"{self.module.fmt(m)}*x^-{k}" if k else self.module.fmt(m)
                 for k, m in sorted(self._c.items())]
        return f"InvPoly({' + '.join(terms) or '0'})"


def act(m, f):
    """Right action m(x) * f(x) of A on M[x^-1]."""
    M = m.module
    T = f.twist
    if getattr(M, "twist", T) is not T:
        raise CarrierMismatch("module and polynomial use different twists")
    out = {}
    add, mact = M.add, M.act
    terms = f.coeffs()
    for k, mk in m._c.items():
        for j, r in terms:
            if j > k:
                continue
            for i, c in inv_commute(T, r, k):
                if i < j:
                    break
                v = mact(mk, c)
                d = i - j
                out[d] = add(out[d], v) if d in out else v
    return InvPoly(M, out)


@dataclass
class DiscrepancyReport:
    r: object
    s: object
    k: int
    k_prime: int
    direct: dict
    printed_reading: dict
    index_reading: dict
    printed_matches: bool = field(init=False)
    index_matches: bool = field(init=False)

    def __post_init__(self):
        self.printed_matches = self.printed_reading == self.direct
        self.index_matches = self.index_reading == self.direct

    @property
    def verdict(self):
        if self.printed_matches and self.index_matches:
            return "both readings agree with direct multiplication"
        if self.index_matches:
            return "exponent -(i+k') matches direct multiplication; -(k+k') does not"
        if self.printed_matches:
            return "exponent -(k+k') matches direct multiplication; -(i+k') does not"
        return "neither reading matches direct multiplication"


def inverse_step(T, coeffs):
    """x^-1 * (sum c_i x^-i) using only x^-1 c = sigma'(c) x^-1 + delta'(c)."""
    C = T.carrier
    out = {}
    for i, c in coeffs.items():
        _accumulate(C, out, i + 1, T.sigma_inv(c))
        _accumulate(C, out, i, T.delta_prime(c))
    return {i: c for i, c in out.items() if not C.is_zero(c)}


def _accumulate(C, out, deg, c):
    out[deg] = C.add(out[deg], c) if deg in out else c


def check_product_relation_2_4(T, r, s, k, k_prime):
    """Compare (r x^-k)(s x^-k') computed directly with both exponent readings."""
    C = T.carrier
    # direct: r (x^-k s) x^-k', with x^-k s built by k single steps
    expanded = {0: s}
    for _ in range(k):
        expanded = inverse_step(T, expanded)
    direct = {}
    for i, c in expanded.items():
        _accumulate(C, direct, i + k_prime, C.mul(r, c))
    printed, indexed = {}, {}
    for i in range(k + 1):
        c = C.mul(r, _ftable(T)(k, i, s))
        _accumulate(C, printed, k + k_prime, c)
        _accumulate(C, indexed, i + k_prime, c)
    strip = lambda d: {e: c for e, c in d.items() if not C.is_zero(c)}
    return DiscrepancyReport(r, s, k, k_prime, strip(direct), strip(printed), strip(indexed))


def random_invpoly(M, rng, depth=4, density=0.8):
    return InvPoly(M, {k: M.random(rng) for k in range(depth + 1) if rng.random() < density})
