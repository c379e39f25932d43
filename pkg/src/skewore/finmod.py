"""Finite right R-modules over finite carriers.

A :class:`FiniteModule` tabulates addition and the R-action once, so every
check below is a table lookup.  Submodules and ideals are plain frozensets
of elements; equality of annihilators is then set equality.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import LatticeTooLarge, PreconditionFailed, ZeroModule

MODULE_CAP = 4096
LATTICE_CAP = 2 ** 16
EXHAUSTIVE_BUDGET = 2 ** 20


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


class FiniteModule:
    """Right module over ``twist.carrier`` given by element list and callables.

    ``add(a, b)`` and ``act(m, r)`` are evaluated once per pair and stored.
    The module axioms are checked exhaustively while the table is built
    (sampled when |M|*|R|^2 exceeds the budget).
    """

    def __init__(self, twist, elements, add, act, zero, *, name="M", cap=MODULE_CAP,
                 validate=True, seed=0):
        R = twist.carrier
        if not R.is_finite:
            raise ValueError("finite modules need a finite coefficient ring")
        elements = list(dict.fromkeys(elements))
        if len(elements) > cap:
            raise LatticeTooLarge(f"|M| = {len(elements)} exceeds cap {cap}")
        self.twist = twist
        self.carrier = R
        self.name = name
        self.zero = zero
        self.ring_elements = R.elements()
        self.elements = elements
        self.index = {m: i for i, m in enumerate(elements)}
        if zero not in self.index:
            raise ValueError("zero is not among the listed elements")
        self._add = {}
        for a in elements:
            for b in elements:
                s = add(a, b)
                if s not in self.index:
                    raise ValueError(f"{a!r} + {b!r} = {s!r} leaves the module")
                self._add[a, b] = s
        self._act = {}
        for m in elements:
            for r in self.ring_elements:
                v = act(m, r)
                if v not in self.index:
                    raise ValueError(f"{m!r} * {r!r} = {v!r} leaves the module")
                self._act[m, r] = v
        self._neg = {}
        for a in elements:
            for b in elements:
                if self._add[a, b] == zero:
                    self._neg[a] = b
                    break
            else:
                raise ValueError(f"{a!r} has no additive inverse")
        if validate:
            bad = self.axiom_violation(seed)
            if bad:
                raise ValueError(f"right-module axiom fails: {bad}")

    # basic operations ---------------------------------------------------

    def add(self, a, b):
        return self._add[a, b]

    def neg(self, a):
        return self._neg[a]

    def act(self, m, r):
        return self._act[m, r]

    def is_zero(self, m):
        return m == self.zero

    def contains(self, m):
        return m in self.index

    def fmt(self, m):
        return self.carrier.fmt(m) if self.carrier.contains(m) else str(m)

    def random(self, rng):
        return rng.choice(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteModule({self.name}, |M|={len(self)}, over {self.carrier})"

    def sort_key(self, m):
        return self.index[m]

    def axiom_violation(self, seed=0):
        R = self.carrier
        els, rs = self.elements, self.ring_elements
        one = R.one
        for m in els:
            if self._act[m, one] != m:
                return ("m*1 = m", m)
        if len(els) * len(rs) ** 2 <= EXHAUSTIVE_BUDGET:
            triples = itertools.product(els, rs, rs)
        else:
            rng = random.Random(seed)
            triples = ((rng.choice(els), rng.choice(rs), rng.choice(rs)) for _ in range(EXHAUSTIVE_BUDGET // 8))
        for m, r, s in triples:
            if self._act[m, R.mul(r, s)] != self._act[self._act[m, r], s]:
                return ("m(rs) = (mr)s", (m, r, s))
            if self._act[m, R.add(r, s)] != self._add[self._act[m, r], self._act[m, s]]:
                return ("m(r+s) = mr+ms", (m, r, s))
        for a in els:
            for b in els:
                for r in rs:
                    if self._act[self._add[a, b], r] != self._add[self._act[a, r], self._act[b, r]]:
                        return ("(a+b)r = ar+br", (a, b, r))
        return None

    # constructors -------------------------------------------------------

    @classmethod
    def regular(cls, twist, **kw):
        R = twist.carrier
        return cls(twist, R.elements(), R.add, R.mul, R.zero, name=kw.pop("name", str(R)), **kw)

    @classmethod
    def ring_quotient(cls, twist, ideal_gens, **kw):
        """R/I for the right ideal I generated by ``ideal_gens``; elements are coset minima."""
        R = twist.carrier
        ideal = right_ideal(twist, ideal_gens)
        rep = {}
        for a in R.elements():
            if a not in rep:
                coset = [R.add(a, i) for i in ideal]
                m = min(coset, key=R.sort_key)
                for c in coset:
                    rep[c] = m
        elems = sorted(set(rep.values()), key=R.sort_key)
        gens = ", ".join(R.fmt(g) for g in ideal_gens) or "0"
        return cls(twist, elems, lambda a, b: rep[R.add(a, b)], lambda m, r: rep[R.mul(m, r)],
                   rep[R.zero], name=kw.pop("name", f"{R}/({gens})"), **kw)

    @classmethod
    def direct_sum(cls, first, second, **kw):
        elems = [(a, b) for a in first.elements for b in second.elements]
        return cls(first.twist, elems,
                   lambda u, v: (first.add(u[0], v[0]), second.add(u[1], v[1])),
                   lambda u, r: (first.act(u[0], r), second.act(u[1], r)),
                   (first.zero, second.zero), name=kw.pop("name", f"{first.name} + {second.name}"), **kw)

    @classmethod
    def from_table(cls, twist, labels, add_rows, act_rows, **kw):
        """Build from explicit rows: ``add_rows[a][j]`` is a + labels[j] and
        ``act_rows[m][k]`` is m * (k-th carrier element in canonical order)."""
        R = twist.carrier
        ring = R.elements()
        pos = {m: i for i, m in enumerate(labels)}
        rpos = {r: i for i, r in enumerate(ring)}
        zero = next(a for a in labels if all(add_rows[a][j] == labels[j] for j in range(len(labels))))
        return cls(twist, labels, lambda a, b: add_rows[a][pos[b]], lambda m, r: act_rows[m][rpos[r]],
                   zero, **kw)

    def quotient(self, sub, **kw):
        """M/N with each coset represented by its first element in M's order."""
        sub = frozenset(sub)
        rep = {}
        for a in self.elements:
            if a not in rep:
                coset = [self.add(a, n) for n in sub]
                m = min(coset, key=self.sort_key)
                for c in coset:
                    rep[c] = m
        elems = sorted(set(rep.values()), key=self.sort_key)
        return FiniteModule(self.twist, elems, lambda a, b: rep[self.add(a, b)],
                            lambda m, r: rep[self.act(m, r)], rep[self.zero],
                            name=kw.pop("name", f"{self.name}/N"), **kw)


def right_ideal(twist, gens):
    """The right ideal generated by ``gens`` as a frozenset."""
    R = twist.carrier
    return _close(R, {R.zero} | {R.mul(g, r) for g in gens for r in R.elements()},
                  R.add, lambda a: (R.mul(a, r) for r in R.elements()))


def _close(_, seeds, add, images):
    """Smallest set containing seeds, closed under ``add`` and the additive ``images``.

    The set is grown one generator at a time: the cyclic group of a new
    generator is joined in by cosets, and only the generator's images are
    queued (images of sums are sums of images).
    """
    found = frozenset()
    queue = list(seeds)
    while queue:
        a = queue.pop()
        if a in found:
            continue
        cyc, m = set(), a
        while m not in cyc:
            cyc.add(m)
            m = add(m, a)
        found = frozenset(cyc) if not found else join(add, found, cyc)
        queue.extend(images(a))
    return found


def close_under(seeds, add, maps):
    """Closure of ``seeds`` (plus zero must be reachable) under addition and unary maps."""
    return _close(None, seeds, add, lambda a: (f(a) for f in maps))


def submodule_closure(M, gens):
    gens = list(gens)
    for g in gens:
        if g not in M.index:
            raise ValueError(f"{g!r} is not an element of {M.name}")
    seeds = {M.zero} | {M.act(g, r) for g in gens for r in M.ring_elements}
    return _close(None, seeds, M.add, lambda a: (M.act(a, r) for r in M.ring_elements))


def join(add, N, C):
    """N + C for submodules N, C, built one coset N + c at a time."""
    out = set(N)
    for c in C:
        if c not in out:
            out.update(add(n, c) for n in N)
    return frozenset(out)


def _canonical(M, subs):
    return sorted(subs, key=lambda N: (len(N), sorted(M.index[m] for m in N)))


def all_submodules(M, cap=LATTICE_CAP):
    """Every submodule of M: cyclic submodules m*R, then sums until nothing new appears."""
    cached = getattr(M, "_lattice", None)
    if cached is not None:
        return cached
    cyclic = {frozenset(M.act(m, r) for r in M.ring_elements) for m in M.elements}
    cyclic.add(frozenset([M.zero]))
    found = set(cyclic)
    frontier = list(found)
    cyclic = list(cyclic)
    while frontier:
        nxt = []
        for N in frontier:
            for C in cyclic:
                if C <= N:
                    continue
                S = join(M.add, N, C)
                if S not in found:
                    found.add(S)
                    nxt.append(S)
                    if len(found) > cap:
                        raise LatticeTooLarge(f"more than {cap} submodules")
        frontier = nxt
    M._lattice = _canonical(M, found)
    return M._lattice


def maximal_submodules(M):
    subs = all_submodules(M)
    full = frozenset(M.elements)
    proper = [N for N in subs if N != full]
    return [N for N in proper if not any(N < K for K in proper)]


def annihilator(M, N=None):
    """{r : M r is contained in N}, i.e. ann(M/N); N defaults to 0."""
    N = frozenset([M.zero]) if N is None else frozenset(N)
    return frozenset(r for r in M.ring_elements if all(M.act(m, r) in N for m in M.elements))


def submodule_annihilator(M, N):
    """ann of the submodule N itself."""
    return frozenset(r for r in M.ring_elements if all(M.act(m, r) == M.zero for m in N))


def sorted_ideal(R, ideal):
    return tuple(sorted(ideal, key=R.sort_key))


# compatibility --------------------------------------------------------


def _maps(M, sigma, delta):
    T = M.twist
    return (sigma or T.sigma), (delta or T.delta)


def is_sigma_compatible(M, N=None, sigma=None):
    """mr in N  <=>  m sigma(r) in N, for all m, r (i.e. M/N is sigma-compatible)."""
    N = frozenset([M.zero]) if N is None else N
    s, _ = _maps(M, sigma, None)
    for m in M.elements:
        for r in M.ring_elements:
            if (M.act(m, r) in N) != (M.act(m, s(r)) in N):
                return Verdict(False, (m, r), "sigma")
    return Verdict(True)


def is_delta_compatible(M, N=None, delta=None):
    N = frozenset([M.zero]) if N is None else N
    _, d = _maps(M, None, delta)
    for m in M.elements:
        for r in M.ring_elements:
            if M.act(m, r) in N and M.act(m, d(r)) not in N:
                return Verdict(False, (m, r), "delta")
    return Verdict(True)


def is_compatible(M, N=None, sigma=None, delta=None):
    v = is_sigma_compatible(M, N, sigma)
    return v if not v else is_delta_compatible(M, N, delta)


def is_completely_compatible(M, sigma=None, delta=None):
    """Both sigma- and delta-compatibility at every quotient M/N."""
    for N in all_submodules(M):
        v = is_compatible(M, N, sigma, delta)
        if not v:
            return Verdict(False, (N, v.witness), v.reason)
    return Verdict(True)


def _sigma_orbit(T, a):
    seen, out = set(), []
    while a not in seen:
        seen.add(a)
        out.append(a)
        a = T.sigma(a)
    return out


def _delta_chain(T, a):
    out = [a]
    while not T.carrier.is_zero(out[-1]):
        out.append(T.delta(out[-1]))
    return out


def check_derived_closure_properties(M, N, seed=0):
    """Run the closure consequences of complete compatibility over all (m, a, b).

    Returns a dict with ``status`` ('pass', 'fail' or 'precondition'), ``mode``
    ('exhaustive' or 'sampled') and the first failing witness.
    """
    T = M.twist
    R = M.carrier
    N = frozenset(N)
    if not is_completely_compatible(M):
        return {"status": "precondition", "mode": None, "witness": None}
    act, mul = M.act, R.mul
    s, d = T.sigma, T.delta
    orbit = {a: _sigma_orbit(T, a) for a in M.ring_elements}
    chain = {a: _delta_chain(T, a) for a in M.ring_elements}

    def inN(m, *factors):
        for f in factors:
            m = act(m, f)
        return m in N

    def item1(m, a):
        if inN(m, a):
            for v in orbit[a] + chain[a]:
                if not inN(m, v):
                    return ("(1)", m, a, v)
        return None

    def item23(m, a, b):
        if inN(m, a, b):
            for da in chain[a]:
                if not inN(m, s(da), d(b)):
                    return ("(2) m sigma(delta^j a) delta b", m, a, b)
            for sda in _sigma_orbit(T, d(a)):
                for db in chain[b]:
                    if not inN(m, sda, db):
                        return ("(2) m sigma^i(delta a) delta^j b", m, a, b)
            for db in chain[b]:
                if not inN(m, a, db):
                    return ("(2) m a delta^j b", m, a, b)
            for da in chain[a]:
                if not inN(m, da, b):
                    return ("(2) m delta^j a b", m, a, b)
        if (inN(m, a, b) or inN(m, s(a), b)) and not inN(m, d(a), b):
            return ("(3)", m, a, b)
        return None

    total = len(M.elements) * len(M.ring_elements) ** 2
    if total <= EXHAUSTIVE_BUDGET:
        mode = "exhaustive"
        triples = itertools.product(M.elements, M.ring_elements, M.ring_elements)
    else:
        mode = "sampled"
        rng = random.Random(seed)
        triples = [(M.random(rng), rng.choice(M.ring_elements), rng.choice(M.ring_elements))
                   for _ in range(EXHAUSTIVE_BUDGET // 16)]
    for m in M.elements:
        for a in M.ring_elements:
            bad = item1(m, a)
            if bad:
                return {"status": "fail", "mode": mode, "witness": bad}
    for m, a, b in triples:
        bad = item23(m, a, b)
        if bad:
            return {"status": "fail", "mode": mode, "witness": bad}
    return {"status": "pass", "mode": mode, "witness": None}


# prime / coprime / Bass -------------------------------------------------


def is_prime_module(M):
    if len(M) == 1:
        raise ZeroModule("the zero module is neither prime nor coprime")
    annM = annihilator(M)
    for N in all_submodules(M):
        if len(N) > 1 and submodule_annihilator(M, N) != annM:
            return Verdict(False, N)
    return Verdict(True)


def is_coprime_module(M):
    if len(M) == 1:
        raise ZeroModule("the zero module is neither prime nor coprime")
    annM = annihilator(M)
    full = len(M)
    for Q in all_submodules(M):
        if len(Q) < full and annihilator(M, Q) != annM:
            return Verdict(False, Q)
    return Verdict(True)


def is_bass(M):
    """Climb from each proper submodule to a maximal one; always succeeds when finite."""
    subs = all_submodules(M)
    full = frozenset(M.elements)
    proper = [N for N in subs if N != full]
    for N in proper:
        cur = N
        while True:
            bigger = next((K for K in proper if cur < K), None)
            if bigger is None:
                break
            cur = bigger
    return True


def is_prime_ideal(R, P):
    """aRb in P implies a in P or b in P (P a proper ideal)."""
    P = frozenset(P)
    els = R.elements()
    if len(P) == len(els):
        return Verdict(False, None, "not proper")
    for a in els:
        if a in P:
            continue
        for b in els:
            if b in P:
                continue
            if all(R.mul(R.mul(a, r), b) in P for r in els):
                return Verdict(False, (a, b))
    return Verdict(True)


def require(verdict, message):
    if not verdict:
        raise PreconditionFailed(message, verdict.witness)
