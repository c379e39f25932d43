"""Associated / attached primes and bounded verification over M[x^-1].

M[x^-1] is infinite, so everything here works on finite pieces of it:

* ``T_k``: inverse polynomials of depth <= k.  T_k is an A-submodule, hence
  every A-submodule of T_k is an A-submodule of M[x^-1] itself.
* A *stable* submodule ``Q = (Q_k, L)``: Q_k an A-submodule of T_k and L a
  submodule of M with L^(k+1) inside Q_k; Q consists of the v whose depth <= k
  part lies in Q_k and whose deeper coefficients lie in L.  These are genuine
  A-submodules of M[x^-1].
* Annihilators are compared on polynomials of x-degree <= d, tested against
  every monomial m x^-i with i <= K (the window, default k + d + 1).

Every report produced here says "verified at bound", never more.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import LatticeTooLarge, NotStableUnderTwist, PreconditionFailed
from .finmod import (
    LATTICE_CAP,
    FiniteModule,
    all_submodules,
    annihilator,
    close_under,
    is_completely_compatible,
    is_coprime_module,
    is_prime_ideal,
    is_prime_module,
    join,
    maximal_submodules,
    sorted_ideal,
    submodule_closure,
)
from .invmodule import inv_commute
from .rings import join_terms
from .skewpoly import SkewPoly, push_x_through

POLY_CAP = 2 ** 15
BASS_NOTE = ("Bass hypothesis holds trivially on finite truncations; "
             "its full strength on M[x^-1] is not exercised")


# reports ----------------------------------------------------------------


@dataclass
class AttReport:
    instance: str
    bound: int
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    result: dict = field(default_factory=dict)

    def add(self, name, passed, witness=None):
        status = passed if isinstance(passed, str) else ("pass" if passed else "fail")
        entry = {"name": name, "status": status}
        if witness is not None:
            entry["witness"] = witness
        self.checks.append(entry)
        return status == "pass"

    @property
    def ok(self):
        return all(c["status"] in ("pass", "skipped") for c in self.checks)

    @property
    def label(self):
        return f"{'pass' if self.ok else 'fail'}, verified at bound {self.bound}"


@dataclass
class PrimeSet:
    kind: str
    ideals: list
    witnesses: list

    def __len__(self):
        return len(self.ideals)

    def __contains__(self, ideal):
        return frozenset(ideal) in {frozenset(i) for i in self.ideals}


def _prime_set(M, kind, pairs):
    R = M.carrier
    seen = {}
    for ideal, wit in pairs:
        key = sorted_ideal(R, ideal)
        seen.setdefault(key, wit)
    keys = sorted(seen, key=lambda t: (len(t), [R.sort_key(a) for a in t]))
    return PrimeSet(kind, [frozenset(k) for k in keys], [seen[k] for k in keys])


def ass_primes(M):
    """ann(N) over prime submodules N of M."""
    pairs = []
    for N in all_submodules(M):
        if len(N) < 2:
            continue
        sub = FiniteModule(M.twist, sorted(N, key=M.sort_key), M.add, M.act, M.zero,
                           validate=False, name="N")
        if is_prime_module(sub):
            pairs.append((annihilator(sub), N))
    return _prime_set(M, "associated", pairs)


def att_primes(M):
    """ann(M/Q) over proper submodules Q with M/Q coprime; witness is Q."""
    pairs = []
    full = len(M)
    for Q in all_submodules(M):
        if len(Q) == full:
            continue
        if is_coprime_module(M.quotient(Q, validate=False)):
            pairs.append((annihilator(M, Q), Q))
    return _prime_set(M, "attached", pairs)


# extended ideals ----------------------------------------------------------


class ExtendedIdeal:
    """PA as the set of polynomials whose coefficients all lie in P."""

    def __init__(self, twist, P, seed=0, samples=200):
        R = twist.carrier
        self.twist = twist
        self.base = frozenset(P)
        for p in sorted(self.base, key=R.sort_key):
            for d, c in push_x_through(twist, p).coeffs():
                if c not in self.base:
                    raise NotStableUnderTwist(
                        f"x*{R.fmt(p)} has coefficient {R.fmt(c)} outside P", (p, d, c))
        rng = random.Random(seed)
        elems = R.elements()
        base = sorted(self.base, key=R.sort_key)
        for _ in range(samples):
            p, r = rng.choice(base), rng.choice(elems)
            if R.mul(p, r) not in self.base:
                raise NotStableUnderTwist("P is not a right ideal", (p, r))

    def __contains__(self, f):
        if isinstance(f, SkewPoly):
            return all(c in self.base for _, c in f.coeffs())
        return all(c in self.base for c in f)

    def bounded(self, d):
        base = sorted(self.base, key=self.twist.carrier.sort_key)
        return frozenset(itertools.product(base, repeat=d + 1))


def extend_to_A(P, twist=None):
    if twist is None:
        raise ValueError("a twist is required")
    return ExtendedIdeal(twist, P)


# vectors in M[x^-1] --------------------------------------------------------


def act_vector(M, T, v, terms):
    """(sum v[i] x^-i) * (sum r x^j over terms), truncated to len(v)."""
    out = [M.zero] * len(v)
    add, mact, zero = M.add, M.act, M.zero
    for k, m in enumerate(v):
        if m == zero:
            continue
        for j, r in terms:
            if j > k:
                continue
            for i, c in inv_commute(T, r, k):
                if i < j:
                    break
                out[i - j] = add(out[i - j], mact(m, c))
    return tuple(out)


def _poly_terms(coeffs, zero):
    return [(j, r) for j, r in enumerate(coeffs) if r != zero]


def bounded_polys(T, d, cap=POLY_CAP, seed=0):
    """All coefficient tuples (r_0..r_d), or a seeded sample when there are too many."""
    R = T.carrier
    elems = R.elements()
    if len(elems) ** (d + 1) <= cap:
        return list(itertools.product(elems, repeat=d + 1)), "exhaustive"
    rng = random.Random(seed)
    sample = {tuple(rng.choice(elems) for _ in range(d + 1)) for _ in range(cap)}
    sample.update(tuple(r if j == l else R.zero for j in range(d + 1)) for l in range(d + 1) for r in elems)
    return sorted(sample, key=lambda t: [R.sort_key(a) for a in t]), "sampled"


class _Window:
    """Precomputed images of monomials m x^-i (i <= K) under each r x^j (j <= d)."""

    def __init__(self, M, T, K, d):
        self.M, self.T, self.K, self.d = M, T, K, d
        zero = M.zero
        self.monomials = []
        for i in range(K + 1):
            for m in M.elements:
                if m != zero:
                    self.monomials.append(tuple(m if t == i else zero for t in range(K + 1)))
        self._img = {}
        for mono in self.monomials:
            for j in range(d + 1):
                for r in T.carrier.elements():
                    self._img[mono, j, r] = act_vector(M, T, mono, [(j, r)])

    def image(self, mono, coeffs):
        M = self.M
        out = None
        for j, r in enumerate(coeffs):
            if r == self.T.carrier.zero:
                continue
            v = self._img[mono, j, r]
            out = v if out is None else tuple(M.add(a, b) for a, b in zip(out, v))
        return out if out is not None else tuple([M.zero] * (self.K + 1))

    def annihilates(self, coeffs, member):
        for mono in self.monomials:
            if not member(self.image(mono, coeffs)):
                return False, mono
        return True, None


# truncated module ---------------------------------------------------------


class TruncatedInvModule:
    """T_k: depth <= k inverse polynomials over a finite M, as tuples (m_0..m_k)."""

    def __init__(self, M, k, cap=LATTICE_CAP):
        size = len(M) ** (k + 1)
        if size > cap:
            raise LatticeTooLarge(f"|T_k| = {size} exceeds cap {cap}")
        self.M, self.k, self.twist = M, k, M.twist
        self.elements = list(itertools.product(M.elements, repeat=k + 1))
        self.zero = tuple([M.zero] * (k + 1))
        x_terms = [(1, self.twist.carrier.one)]
        self._xmap = {v: act_vector(M, self.twist, v, x_terms) for v in self.elements}
        self._reduct = None
        self._a_lattice = None

    def __len__(self):
        return len(self.elements)

    def add(self, u, v):
        return tuple(self.M.add(a, b) for a, b in zip(u, v))

    def act_r(self, v, r):
        return self.reduct().act(v, r)

    def act_x(self, v):
        return self._xmap[v]

    def act_poly(self, v, coeffs):
        return act_vector(self.M, self.twist, v, _poly_terms(coeffs, self.twist.carrier.zero))

    def reduct(self):
        """T_k as a finite right R-module."""
        if self._reduct is None:
            M, T = self.M, self.twist
            self._reduct = FiniteModule(
                T, self.elements, self.add, lambda v, r: act_vector(M, T, v, [(0, r)]), self.zero,
                name=f"T_{self.k}({M.name})", cap=LATTICE_CAP, validate=len(self.elements) <= 512)
        return self._reduct

    def a_submodules(self, cap=LATTICE_CAP):
        """All A-submodules of T_k (closed under +, the R-action and x)."""
        if self._a_lattice is not None:
            return self._a_lattice
        red = self.reduct()
        maps = [lambda v, r=r: red.act(v, r) for r in red.ring_elements] + [self.act_x]
        cyclic = {close_under({v, self.zero}, self.add, maps) for v in self.elements}
        found = set(cyclic)
        frontier = list(found)
        cyclic = list(cyclic)
        while frontier:
            nxt = []
            for N in frontier:
                for C in cyclic:
                    if C <= N:
                        continue
                    S = join(self.add, N, C)
                    if S not in found:
                        found.add(S)
                        nxt.append(S)
                        if len(found) > cap:
                            raise LatticeTooLarge(f"more than {cap} A-submodules")
            frontier = nxt
        index = {v: i for i, v in enumerate(self.elements)}
        self._a_lattice = sorted(found, key=lambda S: (len(S), sorted(index[v] for v in S)))
        return self._a_lattice


def _stable_member(Qk, L, k):
    def member(v):
        for i in range(k + 1, len(v)):
            if v[i] not in L:
                return False
        return v[:k + 1] in Qk
    return member


def _coefficientwise(P, d):
    base = sorted(P)
    return frozenset(itertools.product(base, repeat=d + 1))


def peel_coefficients(coeffs, ideal_members, zero):
    """Recover base-ring coefficients of an annihilating polynomial one degree at a time.

    At step i the tail r_i x^i + ... must still lie in the ideal and r_i must
    lie in I cap R.  Returns the list of recovered coefficients, or None as
    soon as a step fails.
    """
    tail = list(coeffs)
    recovered = []
    for i in range(len(tail)):
        if tuple(tail) not in ideal_members:
            return None
        const = tuple(tail[i] if j == 0 else zero for j in range(len(tail)))
        if const not in ideal_members:
            return None
        recovered.append(tail[i])
        tail[i] = zero
    return recovered


# lemma / theorem verification -------------------------------------------


def _gate(report, M, want_compatible=True):
    if not want_compatible:
        return True
    v = is_completely_compatible(M)
    report.add("precondition: M completely (sigma, delta)-compatible", v.ok,
               None if v.ok else _fmt_witness(M, v.witness))
    return v.ok


def _fmt_witness(M, w):
    R = M.carrier

    def f(x):
        if isinstance(x, frozenset):
            return sorted(M.fmt(m) for m in x)
        if isinstance(x, tuple):
            return [f(y) for y in x]
        return M.fmt(x) if M.contains(x) else R.fmt(x) if R.contains(x) else str(x)

    return f(w)


def _fmt_ideal(R, ideal):
    return [R.fmt(a) for a in sorted(ideal, key=R.sort_key)]


def _fmt_poly(R, coeffs, var):
    terms = []
    for j, r in enumerate(coeffs):
        if r != R.zero:
            c = R.fmt(r)
            terms.append(c if j == 0 else f"({c})*{var}^{j}")
    return join_terms(terms)


def verify_annihilator_lemma(M, N=None, bound=5, seed=0):
    """PA = ann_A(M[x^-1]/N[x^-1]) on polynomials of degree <= bound, monomials of depth <= bound."""
    T = M.twist
    R = M.carrier
    N = frozenset([M.zero]) if N is None else frozenset(N)
    report = AttReport(f"{M.name}, N = {_fmt_witness(M, N)}", bound)
    report.notes.append(BASS_NOTE)
    if not _gate(report, M):
        return report
    P = annihilator(M, N)
    prime = is_prime_ideal(R, P)
    report.add("precondition: P = ann(M/N) is prime", prime.ok,
               None if prime.ok else _fmt_witness(M, prime.witness))
    if not prime.ok:
        return report
    try:
        ExtendedIdeal(T, P, seed=seed)
        report.add("PA closed under the one-step swap", True)
    except NotStableUnderTwist as exc:
        report.add("PA closed under the one-step swap", False, str(exc))
        return report
    polys, mode = bounded_polys(T, bound, seed=seed)
    window = _Window(M, T, bound, bound)
    member = lambda v: all(c in N for c in v)
    sub_fail = sup_fail = None
    n_in = n_out = 0
    var = T.indeterminate
    for coeffs in polys:
        in_pa = all(c in P for c in coeffs)
        kills, witness = window.annihilates(coeffs, member)
        if in_pa:
            n_in += 1
            if not kills and sub_fail is None:
                sub_fail = {"f": _fmt_poly(R, coeffs, var), "m(x)": _fmt_witness(M, witness)}
        else:
            n_out += 1
            if kills and sup_fail is None:
                sup_fail = {"f": _fmt_poly(R, coeffs, var)}
    report.add("PA within ann_A(M[x^-1]/N[x^-1])", sub_fail is None, sub_fail)
    report.add("ann_A(M[x^-1]/N[x^-1]) within PA", sup_fail is None, sup_fail)
    report.add("every bounded polynomial classified exactly once", n_in + n_out == len(polys),
               {"in_PA": n_in, "outside_PA": n_out, "total": len(polys)})
    # right ideal generated by P versus the coefficientwise set
    agree = all(all(R.mul(p, r) in P for r in coeffs) for p in P for coeffs in polys[:512])
    report.add("right ideal generated by P agrees with coefficientwise PA", agree)
    report.result = {"P": _fmt_ideal(R, P), "mode": mode, "polynomials": len(polys)}
    return report


def annihilator_witness(M, N, coeffs, bound):
    """First monomial m x^-i (i <= bound) with (m x^-i) f outside N[x^-1], or None."""
    window = _Window(M, M.twist, bound, len(coeffs) - 1)
    N = frozenset(N)
    ok, mono = window.annihilates(tuple(coeffs), lambda v: all(c in N for c in v))
    return None if ok else mono


class _StableFamily:
    def __init__(self, M, k, d, K):
        self.M, self.k, self.d, self.K = M, k, d, K
        self.Tk = TruncatedInvModule(M, k)
        self.subs_M = all_submodules(M)
        self.members = []
        full_M = frozenset(M.elements)
        full_T = frozenset(self.Tk.elements)
        for L in self.subs_M:
            Lk = frozenset(itertools.product(sorted(L, key=M.sort_key), repeat=k + 1))
            for Qk in self.Tk.a_submodules():
                if Lk <= Qk and not (L == full_M and Qk == full_T):
                    self.members.append((Qk, L))
        self.window = _Window(M, M.twist, K, d)
        self.polys, self.mode = bounded_polys(M.twist, d)
        self._ann = {}

    def ann(self, Q):
        if Q not in self._ann:
            member = _stable_member(Q[0], Q[1], self.k)
            self._ann[Q] = frozenset(c for c in self.polys if self.window.annihilates(c, member)[0])
        return self._ann[Q]

    def above(self, Q):
        return [Q2 for Q2 in self.members if Q[0] <= Q2[0] and Q[1] <= Q2[1]]

    def coprime(self, Q):
        a = self.ann(Q)
        for Q2 in self.above(Q):
            if self.ann(Q2) != a:
                return False, Q2
        return True, None

    def n_of(self, N):
        Nk = frozenset(itertools.product(sorted(N, key=self.M.sort_key), repeat=self.k + 1))
        return (Nk, frozenset(N))


def _default_window(bound, d):
    d = bound if d is None else d
    return d, bound + d + 1


def verify_att_inclusion(M, bound=3, d=None, seed=0):
    """Each P in Att(M) gives a coprime quotient M[x^-1]/N[x^-1] with annihilator PA."""
    T, R = M.twist, M.carrier
    d, K = _default_window(bound, d)
    report = AttReport(M.name, bound)
    report.notes.append(BASS_NOTE)
    report.notes.append(f"annihilators compared on x-degree <= {d}, monomials of depth <= {K}")
    if len(M) == 1:
        report.add("M = 0: nothing to verify", True)
        report.result = {"att_M": []}
        return report
    if not _gate(report, M):
        return report
    att = att_primes(M)
    fam = _StableFamily(M, bound, d, K)
    for P, N in zip(att.ideals, att.witnesses):
        name = f"P = {_fmt_ideal(R, P)}"
        base = fam.n_of(N)
        expected = frozenset(c for c in fam.polys if all(r in P for r in c))
        got = fam.ann(base)
        report.add(f"{name}: ann_A(M[x^-1]/N[x^-1]) = PA", got == expected,
                   None if got == expected else {"only_in_ann": len(got - expected), "only_in_PA": len(expected - got)})
        ok, bad = fam.coprime(base)
        report.add(f"{name}: M[x^-1]/N[x^-1] coprime over A against {len(fam.above(base))} stable quotients",
                   ok, None if ok else {"Q_k size": len(bad[0]), "L": _fmt_witness(M, bad[1])})
    report.result = {"att_M": [_fmt_ideal(R, P) for P in att.ideals], "mode": fam.mode,
                     "stable_submodules": len(fam.members)}
    return report


def verify_att_equality(M, bound=2, d=None, seed=0):
    """Att(M[x^-1]_A) = {PA : P in Att(M)} over the stable family at this bound."""
    T, R = M.twist, M.carrier
    d, K = _default_window(bound, d)
    report = AttReport(M.name, bound)
    report.notes.append(BASS_NOTE)
    report.notes.append(f"annihilators compared on x-degree <= {d}, monomials of depth <= {K}")
    if len(M) == 1:
        report.add("M = 0: both sides empty", True)
        report.result = {"att_A": [], "att_M": []}
        return report
    if not _gate(report, M):
        return report
    att = att_primes(M)
    fam = _StableFamily(M, bound, d, K)
    zero = R.zero
    found = {}
    for Q in fam.members:
        ok, _ = fam.coprime(Q)
        if ok:
            found.setdefault(fam.ann(Q), Q)
    att_sets = {frozenset(P) for P in att.ideals}
    bases = []
    peel_ok = True
    for ideal in found:
        base = frozenset(c[0] for c in ideal if all(r == zero for r in c[1:]))
        bases.append(base)
        if any(peel_coefficients(c, ideal, zero) is None for c in ideal):
            peel_ok = False
        if ideal != frozenset(c for c in fam.polys if all(r in base for r in c)):
            peel_ok = False
    report.add("every attached ideal of M[x^-1] is (I cap R)A (coefficient peeling)", peel_ok)
    extra = [b for b in bases if b not in att_sets]
    report.add("Att(M[x^-1]_A) within {PA : P in Att(M)}", not extra,
               [_fmt_ideal(R, b) for b in extra] or None)
    missing = [P for P in att_sets if P not in set(bases)]
    report.add("{PA : P in Att(M)} within Att(M[x^-1]_A)", not missing,
               [_fmt_ideal(R, b) for b in missing] or None)
    if T.delta_is_zero:
        report.add("delta = 0: attached primes have the form P[x]", peel_ok and not extra)
    report.result = {
        "att_A": sorted((_fmt_ideal(R, b) for b in bases), key=lambda t: (len(t), t)),
        "att_M": [_fmt_ideal(R, P) for P in att.ideals],
        "mode": fam.mode,
        "stable_submodules": len(fam.members),
    }
    return report


def projection_submodule(Tk, P_sub, j):
    """<P_j> for a maximal R-submodule P_sub of T_k; raises unless the dichotomy holds."""
    red = Tk.reduct()
    P_sub = frozenset(P_sub)
    if P_sub not in set(maximal_submodules(red)):
        raise PreconditionFailed("P_sub is not a maximal R-submodule of T_k", len(P_sub))
    if not 0 <= j <= Tk.k:
        raise ValueError("j out of range")
    M = Tk.M
    zero = M.zero
    Pj = [m for m in M.elements if tuple(m if t == j else zero for t in range(Tk.k + 1)) in P_sub]
    gen = submodule_closure(M, Pj)
    full = frozenset(M.elements)
    if gen != full and gen not in set(maximal_submodules(M)):
        raise PreconditionFailed(f"<P_{j}> is neither M nor maximal", sorted(gen, key=M.sort_key))
    return gen


def verify_maximal_projection(M, bound=2):
    """Dichotomy for every maximal R-submodule of T_k, plus existence of a maximal <P_j>."""
    Tk = TruncatedInvModule(M, bound)
    report = AttReport(M.name, bound)
    full = frozenset(M.elements)
    failures = []
    maxes = maximal_submodules(Tk.reduct())
    for P_sub in maxes:
        try:
            gens = [projection_submodule(Tk, P_sub, j) for j in range(bound + 1)]
        except PreconditionFailed as exc:
            failures.append(str(exc))
            continue
        if all(g == full for g in gens):
            failures.append(f"no depth realises a maximal projection for |P| = {len(P_sub)}")
    report.add(f"projection dichotomy over {len(maxes)} maximal submodules of T_k", not failures,
               failures[:3] or None)
    return report


def verify_coprime_descent(M, bound=2):
    """A-coprime quotients of T_k whose R-reduct is completely compatible are R-coprime."""
    Tk = TruncatedInvModule(M, bound)
    T = M.twist
    report = AttReport(M.name, bound)
    full = frozenset(Tk.elements)
    subs = Tk.a_submodules()
    window = _Window(M, T, bound, bound)
    polys, _ = bounded_polys(T, bound)
    ann = {}

    def ann_of(Q):
        if Q not in ann:
            member = lambda v: v in Q
            ann[Q] = frozenset(c for c in polys if window.annihilates(c, member)[0])
        return ann[Q]

    checked = 0
    bad = None
    for Q in subs:
        if Q == full:
            continue
        a = ann_of(Q)
        if any(ann_of(Q2) != a for Q2 in subs if Q <= Q2 and Q2 != full):
            continue
        quotient = Tk.reduct().quotient(Q, validate=False)
        if len(quotient) < 2 or not is_completely_compatible(quotient):
            continue
        checked += 1
        if not is_coprime_module(quotient) and bad is None:
            bad = len(Q)
    report.add(f"coprime descent on {checked} A-coprime quotients of T_k", bad is None,
               None if bad is None else {"|Q|": bad})
    report.result = {"checked": checked}
    return report
