"""Algebra presets, the expression grammar and the fixture config format.

Expression grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

``*`` is the noncommutative product, evaluated left to right.  ``/`` divides
by a nonzero scalar constant (so ``1/2*t`` works over Q and F_p).  Names are
the carrier generator, the skew indeterminate and any preset parameters.
Inverse polynomials (for ``act``) reuse the grammar with ``x^-k`` allowed as
the last factor of a term and ``[label]`` naming an element of a table module.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, PresetError, TwistError
from .finmod import FiniteModule, right_ideal
from .invmodule import InvPoly, RegularModule
from .rings import PolyFp, PolyFpMod, PolyQ, TwistedRing, ZMod, join_terms, validate_twist
from .skewpoly import SkewPoly, mul

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\[[^\]]*\])|(.))")


def tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, name, label, other = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif label is not None:
            tokens.append(("label", label[1:-1].strip(), start))
        elif other in "+-*/^()":
            tokens.append((other, other, start))
        else:
            raise ParseError(f"unexpected character {other!r}", start)
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, twist, text, symbols, inverse_module=None):
        self.T = twist
        self.C = twist.carrier
        self.tokens = tokenize(text)
        self.i = 0
        self.symbols = symbols
        self.module = inverse_module

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "number" if kind == "num" else repr(kind)
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {found}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return value

    # plain expressions -> SkewPoly

    def expr(self):
        value = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.factor()
            value = mul(value, rhs) if op == "*" else value.left_scale(self.scalar_inverse(rhs, pos))
        return value

    def scalar_inverse(self, f, pos):
        C = self.C
        if f.degree() != 0 and not f.is_zero():
            raise ParseError("can only divide by a scalar constant", pos)
        c = f.coeff(0)
        try:
            if isinstance(C, ZMod):
                return C.inverse(c)
            if len(c) != 1:
                raise ParseError("can only divide by a scalar constant", pos)
            return C.make((C.scalar_inverse(c[0]),))
        except (ZeroDivisionError, ValueError):
            raise ParseError("division by a non-invertible scalar", pos) from None

    def factor(self):
        tok = self.peek()
        if tok[0] == "-":
            self.take()
            return -self.factor()
        if tok[0] == "+":
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            if self.peek()[0] == "-":
                raise ParseError("negative exponents are not elements of A", self.peek()[2])
            exp = self.take("num")[1]
            return base ** exp
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return SkewPoly.const(self.T, self.C.from_int(value))
        if kind == "name":
            if value in self.symbols:
                return self.symbols[value]
            raise ParseError(f"unknown symbol {value!r}", pos)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError("expected a number, a name or '('" if kind != "end" else "unexpected end of input", pos)

    # inverse polynomials -> InvPoly

    def inv_expr(self):
        M = self.module
        out = InvPoly(M)
        sign = 1
        first = True
        while True:
            tok = self.peek()
            if tok[0] in "+-":
                self.take()
                sign = -1 if tok[0] == "-" else 1
            elif not first:
                break
            depth, coeff = self.inv_term()
            coeff = M.neg(coeff) if sign < 0 else coeff
            out = out + InvPoly(M, {depth: coeff})
            first = False
            sign = 1
            if self.peek()[0] not in "+-":
                break
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return out

    def inv_term(self):
        M = self.module
        x = self.T.indeterminate
        label_value = None
        ring_part = None
        while True:
            tok = self.peek()
            if tok[0] == "name" and tok[1] == x:
                self.take()
                if self.peek()[0] != "^":
                    raise ParseError("positive powers of x are not in M[x^-1]", tok[2])
                self.take()
                if self.peek()[0] == "-":
                    self.take()
                    depth = self.take("num")[1]
                elif self.take("num")[1] == 0:
                    depth = 0
                else:
                    raise ParseError("positive powers of x are not in M[x^-1]", tok[2])
                break
            if tok[0] == "label":
                self.take()
                label_value = _module_label(M, tok[1], tok[2])
            else:
                part = self.factor()
                if part.degree() > 0:
                    raise ParseError("coefficient must be an element of the base ring", tok[2])
                ring_part = part if ring_part is None else mul(ring_part, part)
            while self.peek()[0] == "/" and ring_part is not None:
                pos = self.take()[2]
                ring_part = ring_part.left_scale(self.scalar_inverse(self.factor(), pos))
            if self.peek()[0] != "*":
                depth = 0
                break
            self.take()
        r = ring_part.coeff(0) if ring_part is not None else self.C.one
        if label_value is not None:
            coeff = M.act(label_value, r)
        else:
            coeff = _module_element(M, r)
        return depth, coeff


def _module_label(M, label, pos):
    for m in M.elements:
        if str(m) == label or M.fmt(m) == label:
            return m
    raise ParseError(f"unknown module element [{label}]", pos)


def _module_element(M, r):
    """The module element named by a ring element: r itself, or 1*r in a cyclic quotient."""
    if isinstance(M, RegularModule):
        return r
    unit = getattr(M, "unit", None)
    if unit is None:
        raise ParseError("elements of this module must be written as [label]")
    return M.act(unit, r)


# algebra specs -------------------------------------------------------------


@dataclass
class AlgebraSpec:
    name: str
    carrier: dict
    indeterminate: str
    sigma: str = None
    delta: str = None
    sigma_inv: str = None
    params: dict = field(default_factory=dict)
    relations: list = field(default_factory=list)
    description: str = ""

    def __post_init__(self):
        self.ring = build_carrier(self.carrier)
        self._scalars = {k: _scalar(self.ring, v, k) for k, v in self.params.items()}
        base = TwistedRing(self.ring, indeterminate=self.indeterminate)
        images = {}
        for key in ("sigma", "delta", "sigma_inv"):
            text = getattr(self, key)
            if text is not None:
                f = parse_in(base, text, self._symbols(base))
                if f.degree() > 0:
                    raise TwistError(f"{key} image {text!r} involves {self.indeterminate}")
                if getattr(self.ring, "var", None) is None and f.coeff(0) != (self.ring.one if key != "delta" else self.ring.zero):
                    raise TwistError(f"{self.ring} has no generator: {key} must be trivial")
                images[key] = f.coeff(0) if getattr(self.ring, "var", None) else None
        self.twist = TwistedRing(self.ring, images.get("sigma"), images.get("delta"),
                                 images.get("sigma_inv"), name=self.label(),
                                 indeterminate=self.indeterminate)

    def _symbols(self, twist):
        syms = {twist.indeterminate: SkewPoly.x(twist)}
        var = getattr(twist.carrier, "var", None)
        if var is not None:
            syms[var] = SkewPoly.const(twist, twist.carrier.gen)
        for k, v in self._scalars.items():
            syms[k] = SkewPoly.const(twist, v)
        return syms

    @property
    def symbols(self):
        return self._symbols(self.twist)

    def label(self):
        if not self.params:
            return f"{self.name} over {self.ring}"
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({ps}) over {self.ring}"

    def parse(self, text):
        return parse_in(self.twist, text, self.symbols)

    def self_test(self):
        """[(relation, ok)] for every shipped relation, checked by multiplication."""
        out = []
        for lhs, rhs in self.relations:
            out.append((f"{lhs} = {rhs}", self.parse(lhs) == self.parse(rhs)))
        return out

    def to_dict(self):
        return {"name": self.name, "carrier": self.carrier, "indeterminate": self.indeterminate,
                "sigma": self.sigma, "delta": self.delta, "params": dict(self.params)}


def parse_in(twist, text, symbols):
    return _Parser(twist, text, symbols).parse()


def parse_expr(spec, text):
    """Normal form of the element of A denoted by ``text``."""
    return spec.parse(text)


def parse_invpoly(spec, module, text):
    return _Parser(spec.twist, text, spec.symbols, inverse_module=module).inv_expr()


def format_invpoly(module, v):
    if v.is_zero():
        return "0"
    x = getattr(getattr(module, "twist", None), "indeterminate", "x")
    terms = []
    for k, m in v.coeffs():
        s = module.fmt(m)
        if isinstance(module, FiniteModule) and getattr(module, "unit", None) is None:
            s = f"[{s}]"
        if k == 0:
            terms.append(s)
        elif s in ("1", "-1"):
            terms.append(f"{s[:-1]}{x}^-{k}")
        else:
            if " " in s or s.startswith("-"):
                s = f"({s})"
            terms.append(f"{s}*{x}^-{k}")
    return join_terms(terms)


def _scalar(C, text, name="value"):
    try:
        q = Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise PresetError(f"parameter {name}={text!r} is not a rational number") from None
    try:
        return C.from_fraction(q)
    except ValueError as exc:
        raise PresetError(f"parameter {name}={text}: {exc}") from None


def build_carrier(desc):
    kind = desc.get("kind")
    if kind == "zmod":
        return ZMod(int(desc["modulus"]))
    if kind == "fp_poly":
        return PolyFp(int(desc["p"]), desc.get("var", "t"))
    if kind == "q_poly":
        return PolyQ(desc.get("var", "t"))
    if kind == "fp_quotient":
        p, var = int(desc["p"]), desc.get("var", "t")
        modulus = desc["modulus"]
        if isinstance(modulus, str):
            lift = TwistedRing(PolyFp(p, var))
            f = parse_in(lift, modulus, {var: SkewPoly.const(lift, lift.carrier.gen)})
            if f.degree() > 0:
                raise ParseError("quotient polynomial must not involve the skew variable")
            modulus = f.coeff(0)
        return PolyFpMod(p, var, tuple(modulus))
    raise PresetError(f"unknown carrier kind {kind!r}")


# presets -------------------------------------------------------------------


def _field_carrier(params, var, default_field):
    fld = str(params.pop("field", default_field))
    trunc = params.pop("trunc", None)
    if fld.upper() == "Q":
        if trunc is not None:
            raise PresetError("trunc needs a prime field (field=p)")
        return {"kind": "q_poly", "var": var}
    try:
        p = int(fld)
    except ValueError:
        raise PresetError(f"field must be Q or a prime, not {fld!r}") from None
    if trunc is not None:
        n = int(trunc)
        if n < 1:
            raise PresetError("trunc must be positive")
        return {"kind": "fp_quotient", "p": p, "var": var, "modulus": f"{var}^{n}"}
    return {"kind": "fp_poly", "p": p, "var": var}


def _nonzero(spec_name, params, key, carrier, extra=None):
    C = build_carrier(carrier)
    value = _scalar(C, params[key], key)
    if C.is_zero(value):
        raise PresetError(f"{spec_name}: {key} must be invertible, got {params[key]}")
    if extra is not None:
        bad = _scalar(C, extra[0], key)
        if value == bad:
            raise PresetError(f"{spec_name}: {extra[1]}")


PRESETS = {
    "quantum_plane": "xy = qyx, as F[y](x; sigma) with sigma(y) = qy",
    "jordan_plane": "yx = xy + y^2, as F[x](y; delta) with delta(x) = 1",
    "q_meromorphic_weyl": "yx = qxy + x^2, as F[y](x; sigma, delta) with sigma(y) = y/q, delta(y) = -1/q",
    "q_zero_bc": "yx = bxy + cy^2, as F[x](y; sigma, delta) with sigma(x) = bx, delta(x) = c",
    "trimmed_double_extension": "y2 y1 = p12 y1 y2 + p11 y1^2, as F[y2](y1; sigma, delta)",
    "skew_poly_ring": "delta = 0: Z/n with sigma = id, or F_p[t] with sigma(t) = a t",
}


def preset(name, params=None):
    params = {k: str(v) for k, v in (params or {}).items()}
    if name not in PRESETS:
        raise PresetError(f"unknown preset {name!r}; choose one of {', '.join(PRESETS)}")
    if name == "quantum_plane":
        carrier = _field_carrier(params, "y", 5)
        params.setdefault("q", "2")
        _nonzero(name, params, "q", carrier)
        spec = AlgebraSpec(name, carrier, "x", sigma="q*y", params=params,
                           relations=[("x*y", "q*y*x")])
    elif name == "jordan_plane":
        carrier = _field_carrier(params, "x", "Q")
        spec = AlgebraSpec(name, carrier, "y", delta="1", params=params,
                           relations=[("y*x", "x*y + y^2")])
    elif name == "q_meromorphic_weyl":
        carrier = _field_carrier(params, "y", "Q")
        params.setdefault("q", "2")
        _nonzero(name, params, "q", carrier, ("1", "q = 1 leaves (q - 1) without an inverse"))
        spec = AlgebraSpec(name, carrier, "x", sigma="y/q", delta="-1/q", params=params,
                           relations=[("y*x", "q*x*y + x^2"),
                                      ("(y + x/(q - 1))*x", "q*x*(y + x/(q - 1))")])
    elif name == "q_zero_bc":
        carrier = _field_carrier(params, "x", "Q")
        params.setdefault("b", "2")
        params.setdefault("c", "1")
        _nonzero(name, params, "b", carrier)
        spec = AlgebraSpec(name, carrier, "y", sigma="b*x", delta="c", params=params,
                           relations=[("y*x", "b*x*y + c*y^2")])
    elif name == "trimmed_double_extension":
        carrier = _field_carrier(params, "y2", "Q")
        params.setdefault("p12", "2")
        params.setdefault("p11", "1")
        _nonzero(name, params, "p12", carrier)
        spec = AlgebraSpec(name, carrier, "y1", sigma="y2/p12", delta="-p11/p12", params=params,
                           relations=[("y2*y1", "p12*y1*y2 + p11*y1^2")])
    else:
        if "field" in params:
            carrier = _field_carrier(params, "t", 5)
            params.setdefault("a", "1")
            _nonzero(name, params, "a", carrier)
            spec = AlgebraSpec(name, carrier, "x", sigma="a*t", params=params,
                               relations=[("x*t", "a*t*x")])
        else:
            n = int(params.pop("n", 4))
            spec = AlgebraSpec(name, {"kind": "zmod", "modulus": n}, "x",
                               relations=[(f"x*{r}", f"{r}*x") for r in range(n)])
    spec.description = PRESETS[name]
    bad = [rel for rel, ok in spec.self_test() if not ok]
    if bad:
        raise PresetError(f"{name}: relation self-test failed for {bad}")
    return spec


def default_module(spec):
    """R/(2) for the Z/4 preset, R/(gen) for truncated carriers, R itself otherwise."""
    R = spec.ring
    if not R.is_finite:
        return RegularModule(spec.twist)
    if isinstance(R, ZMod) and R.n == 4 and spec.name == "skew_poly_ring":
        return cyclic_quotient(spec.twist, [2])
    if isinstance(R, PolyFpMod):
        return cyclic_quotient(spec.twist, [R.gen])
    return cyclic_quotient(spec.twist, [])


def cyclic_quotient(twist, gens, **kw):
    """R/I with ``unit`` set to the coset of 1, so ring elements name module elements."""
    R = twist.carrier
    if not gens:
        kw.setdefault("name", str(R))
    M = FiniteModule.ring_quotient(twist, gens, **kw)
    M.unit = min((R.add(R.one, i) for i in right_ideal(twist, gens)), key=R.sort_key)
    return M


# config files --------------------------------------------------------------


def _read_config(path_or_text):
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), inline_comment_prefixes=("#",))
    cp.optionxform = str
    if "\n" in path_or_text or "[" in path_or_text:
        cp.read_string(path_or_text)
    else:
        with open(path_or_text, encoding="utf-8") as fh:
            cp.read_file(fh)
    return cp


def load_algebra(path_or_text):
    """AlgebraSpec from a config with [ring] and optional [twist] / [params] sections."""
    cp = _read_config(path_or_text)
    if not cp.has_section("ring"):
        raise ParseError("config needs a [ring] section")
    ring = dict(cp["ring"])
    name = ring.pop("name", "custom")
    ind = ring.pop("indeterminate", "x")
    kind = ring.get("carrier")
    if kind is None:
        raise ParseError("[ring] needs carrier = zmod | fp_poly | q_poly | fp_quotient")
    desc = {"kind": kind}
    if kind == "zmod":
        desc["modulus"] = int(ring.get("modulus", 0))
    elif kind in ("fp_poly", "fp_quotient"):
        desc["p"] = int(ring["p"])
        desc["var"] = ring.get("var", "t")
        if kind == "fp_quotient":
            desc["modulus"] = ring["modulus"]
    else:
        desc["var"] = ring.get("var", "t")
    tw = dict(cp["twist"]) if cp.has_section("twist") else {}
    params = dict(cp["params"]) if cp.has_section("params") else {}
    spec = AlgebraSpec(name, desc, ind, sigma=tw.get("sigma"), delta=tw.get("delta"),
                       sigma_inv=tw.get("sigma_inv"), params=params)
    report = validate_twist(spec.twist)
    if not report.ok:
        bad = report.failures()[0]
        raise TwistError(f"twist law fails: {bad['law']} (witness {bad['witness']})")
    return spec


def load_module(spec, path_or_text):
    """Finite module from a [module] section: regular, quotient, direct_sum or table."""
    cp = _read_config(path_or_text)
    if not cp.has_section("module"):
        raise ParseError("config needs a [module] section")
    sec = dict(cp["module"])
    return _module_from_section(spec, sec)


def _ring_elements(spec, text):
    out = []
    for part in (p.strip() for p in text.split(",")):
        if part:
            f = spec.parse(part)
            if f.degree() > 0:
                raise ParseError(f"{part!r} is not an element of the base ring")
            out.append(f.coeff(0))
    return out


def _module_from_section(spec, sec):
    T = spec.twist
    kind = sec.get("type", "quotient" if "quotient" in sec else "regular")
    if kind == "regular":
        if not T.carrier.is_finite:
            return RegularModule(T)
        return cyclic_quotient(T, [], name=sec.get("name", str(T.carrier)))
    if kind == "quotient":
        gens = _ring_elements(spec, sec.get("quotient", ""))
        return cyclic_quotient(T, gens, **({"name": sec["name"]} if "name" in sec else {}))
    if kind == "direct_sum":
        parts = []
        for item in sec["summands"].split(";"):
            item = item.strip()
            if item == "regular":
                parts.append(cyclic_quotient(T, []))
            elif item.startswith("quotient"):
                parts.append(cyclic_quotient(T, _ring_elements(spec, item[len("quotient"):])))
            else:
                raise ParseError(f"unknown summand {item!r}")
        M = parts[0]
        for N in parts[1:]:
            M = FiniteModule.direct_sum(M, N)
        M.unit = None
        return M
    if kind == "table":
        labels = [s.strip() for s in sec["elements"].split(",")]
        add_rows = {a: [s.strip() for s in sec[f"add.{a}"].split(",")] for a in labels}
        act_rows = {a: [s.strip() for s in sec[f"act.{a}"].split(",")] for a in labels}
        M = FiniteModule.from_table(T, labels, add_rows, act_rows, name=sec.get("name", "M"))
        M.unit = None
        return M
    raise ParseError(f"unknown module type {kind!r}")
