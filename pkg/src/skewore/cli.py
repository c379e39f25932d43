"""Command-line entry point: ``skewore <command> [options]``.

Exit codes: 0 pass, 1 verification or precondition failure, 2 usage or parse
error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .catalog import (
    PRESETS,
    default_module,
    format_invpoly,
    load_algebra,
    load_module,
    parse_invpoly,
    preset,
)
from .errors import (
    CombinatorialCapExceeded,
    LatticeTooLarge,
    NotLocallyNilpotent,
    NotStableUnderTwist,
    ParseError,
    PreconditionFailed,
    PresetError,
    SkewOreError,
    TwistError,
)
from .finmod import (
    FiniteModule,
    check_derived_closure_properties,
    is_completely_compatible,
    is_delta_compatible,
    is_prime_ideal,
    is_sigma_compatible,
    submodule_closure,
)
from .invmodule import InvPoly, RegularModule, act, check_product_relation_2_4, f_op, f_op_word_oracle
from .primes import (
    ass_primes,
    att_primes,
    verify_annihilator_lemma,
    verify_att_equality,
    verify_att_inclusion,
    verify_coprime_descent,
    verify_maximal_projection,
)
from .rings import validate_twist
from .skewpoly import format_poly, mul, ore_swap

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
DEFAULT_LEMMA_BOUND = 5
DEFAULT_THEOREM_BOUND = 3
ENVELOPE_KEYS = ("version", "command", "algebra", "seed", "bound", "checks", "result", "elapsed_ms")


class UsageError(Exception):
    pass


@dataclass
class ReportEnvelope:
    version: str
    command: str
    algebra: str
    seed: int
    bound: int = None
    checks: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    elapsed_ms: int = None

    @property
    def ok(self):
        return all(c["status"] in ("pass", "skipped") for c in self.checks)

    @property
    def status(self):
        if any(c["status"] == "error" for c in self.checks):
            return "error"
        return "pass" if self.ok else "fail"

    def to_dict(self):
        return {k: getattr(self, k) for k in ENVELOPE_KEYS}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        missing = [k for k in ENVELOPE_KEYS if k not in data]
        if missing:
            raise ParseError(f"report is missing keys {missing}")
        return cls(**{k: data[k] for k in ENVELOPE_KEYS})

    def to_text(self):
        lines = [f"{self.command} on {self.algebra} (seed {self.seed})"]
        for c in self.checks:
            line = f"  [{c['status']}] {c['name']}"
            if "witness" in c:
                line += f"  witness: {json.dumps(c['witness'], ensure_ascii=False)}"
            lines.append(line)
        for key, value in self.result.items():
            if not isinstance(value, str):
                value = json.dumps(value, ensure_ascii=False)
            lines.append(f"  {key}: {value}")
        tail = self.status if self.bound is None else f"{self.status}, bound {self.bound}"
        if self.elapsed_ms is not None:
            tail += f"  ({self.elapsed_ms} ms)"
        lines.append(tail)
        return "\n".join(lines)


def jsonable(value):
    """Witnesses are built from tuples, frozensets and exact rationals; make them JSON data."""
    if isinstance(value, (str, bool, float)) or value is None:
        return value
    if type(value) is int:
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((jsonable(v) for v in value), key=lambda v: json.dumps(v))
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def _check(name, passed, witness=None):
    entry = {"name": name, "status": passed if isinstance(passed, str) else ("pass" if passed else "fail")}
    if witness is not None:
        entry["witness"] = jsonable(witness)
    return entry


# argument parsing --------------------------------------------------------


def _common_flags(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("global options")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--algebra", metavar="FILE", default=d(None), help="algebra config file")
    src.add_argument("--preset", metavar="NAME", default=d(None), choices=sorted(PRESETS),
                     help="built-in algebra")
    g.add_argument("--param", metavar="K=V", action="append", default=d(None),
                   help="preset parameter (repeatable), e.g. q=3, field=Q, trunc=2")
    g.add_argument("--module", metavar="FILE", default=d(None), help="module config file")
    g.add_argument("--seed", type=int, default=d(0))
    g.add_argument("--format", choices=("text", "json"), default=d("text"))
    g.add_argument("--bound", type=int, default=d(None), help="truncation bound k")
    g.add_argument("--no-timing", action="store_true", default=d(False),
                   help="omit elapsed_ms so repeated runs are byte-identical")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="skewore",
        description="Exact arithmetic in skew Ore polynomial rings and bounded checks of attached primes.")
    parser.add_argument("--version", action="version", version=f"skewore {__version__}")
    _common_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def cmd(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        _common_flags(p, suppress=True)
        return p

    cmd("normalize", "left normal form of an expression").add_argument("expr")
    p = cmd("mul", "product of two expressions")
    p.add_argument("left")
    p.add_argument("right")
    p = cmd("ore-swap", "a_p with x^p a = a_p x^p")
    p.add_argument("expr")
    p.add_argument("p", type=int)
    p = cmd("finv", "apply f_j^i to a ring element, cross-checked by word enumeration")
    p.add_argument("j", type=int)
    p.add_argument("i", type=int)
    p.add_argument("elem")
    p = cmd("act", "right action of A on M[x^-1]")
    p.add_argument("invpoly")
    p.add_argument("expr")
    cmd("compat-check", "(sigma, delta)-compatibility of the module")
    cmd("att", "attached primes of the module")
    cmd("ass", "associated primes of the module")
    p = cmd("verify-lemma", "PA = ann(M[x^-1]/N[x^-1]) up to the bound")
    p.add_argument("--submodule", metavar="GENS", default=None,
                   help="generators of N as ring elements (default N = 0)")
    cmd("verify-theorem", "attached primes of M[x^-1] up to the bound")
    p = cmd("relation-2-4-probe", "compare both exponent readings of (r x^-k)(s x^-k')")
    p.add_argument("--r", default="1")
    p.add_argument("--s", default=None, help="default: the carrier generator")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--k-prime", type=int, default=1)
    cmd("catalog", "list presets and run their relation self-tests")
    return parser


def _parse_params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects K=V, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _load(args, fallback="skew_poly_ring"):
    if args.algebra:
        if args.param:
            raise UsageError("--param only applies to --preset")
        return load_algebra(args.algebra)
    return preset(args.preset or fallback, _parse_params(args.param))


def _module(args, spec):
    if args.module:
        return load_module(spec, args.module)
    if args.algebra:
        try:
            return load_module(spec, args.algebra)
        except ParseError:
            pass
    return default_module(spec)


def _finite_module(args, spec):
    M = _module(args, spec)
    if not isinstance(M, FiniteModule):
        raise UsageError(f"{args.command} needs a finite module; {spec.ring} is infinite "
                         "(try --param trunc=N or a finite --module)")
    return M


def _ring_element(spec, text):
    f = spec.parse(text)
    if f.degree() > 0:
        raise ParseError(f"{text!r} is not an element of the base ring")
    return f.coeff(0)


def _fmt_ideal(R, ideal):
    return [R.fmt(a) for a in sorted(ideal, key=R.sort_key)]


# commands ---------------------------------------------------------------


def _normalize(args, spec):
    f = spec.parse(args.expr)
    text = format_poly(f)
    return [_check("printed form parses back to the same element", spec.parse(text) == f)], \
        {"normal_form": text}, None


def _mul(args, spec):
    f, g = spec.parse(args.left), spec.parse(args.right)
    return [], {"product": format_poly(mul(f, g))}, None


def _ore_swap(args, spec):
    a = spec.parse(args.expr)
    try:
        ap = ore_swap(a, args.p)
    except SkewOreError as exc:
        return [_check("x^p * a = a_p * x^p", False, str(exc))], {}, None
    return [_check("x^p * a = a_p * x^p", True)], {"a_p": format_poly(ap)}, None


def _finv(args, spec):
    T, R = spec.twist, spec.ring
    r = _ring_element(spec, args.elem)
    try:
        value = f_op(T, args.j, args.i, r)
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    oracle = f_op_word_oracle(T, args.j, args.i, r)
    return [_check("recursive table agrees with word enumeration", value == oracle)], \
        {"operator": f"f_{args.j}^{args.i}", "value": R.fmt(value), "word_oracle": R.fmt(oracle)}, None


def _act(args, spec):
    M = _module(args, spec)
    v = parse_invpoly(spec, M, args.invpoly)
    f = spec.parse(args.expr)
    return [], {"module": getattr(M, "name", str(M)), "product": format_invpoly(M, act(v, f))}, None


def _compat(args, spec):
    M = _finite_module(args, spec)
    checks = []
    for name, verdict in (("sigma-compatible", is_sigma_compatible(M)),
                          ("delta-compatible", is_delta_compatible(M)),
                          ("completely (sigma, delta)-compatible", is_completely_compatible(M))):
        checks.append(_check(name, verdict.ok, None if verdict.ok else verdict.witness))
    derived = check_derived_closure_properties(M, [M.zero], seed=args.seed)
    if derived["status"] != "precondition":
        checks.append(_check(f"closure consequences at N = 0 ({derived['mode']})",
                             derived["status"] == "pass", derived["witness"]))
    return checks, {"module": M.name, "size": len(M)}, None


def _primes(kind):
    def run(args, spec):
        M = _finite_module(args, spec)
        R = spec.ring
        found = att_primes(M) if kind == "att" else ass_primes(M)
        checks = []
        for P in found.ideals:
            v = is_prime_ideal(R, P)
            checks.append(_check(f"{_fmt_ideal(R, P)} is prime (aRb in P => a or b in P)", v.ok,
                                 None if v.ok else v.witness))
        wit = [sorted(M.fmt(m) for m in W) for W in found.witnesses]
        label = "coprime_quotient_by" if kind == "att" else "prime_submodule"
        return checks, {"module": M.name, found.kind: [_fmt_ideal(R, P) for P in found.ideals],
                        label: wit}, None
    return run


def _verify_lemma(args, spec):
    M = _finite_module(args, spec)
    bound = DEFAULT_LEMMA_BOUND if args.bound is None else args.bound
    N = None
    if args.submodule:
        unit = getattr(M, "unit", None)
        if unit is None:
            raise UsageError("--submodule needs a cyclic quotient module")
        gens = [M.act(unit, _ring_element(spec, g)) for g in args.submodule.split(",")]
        N = submodule_closure(M, gens)
    rep = verify_annihilator_lemma(M, N, bound, seed=args.seed)
    return rep.checks, dict(rep.result, notes=rep.notes), bound


def _verify_theorem(args, spec):
    M = _finite_module(args, spec)
    bound = DEFAULT_THEOREM_BOUND if args.bound is None else args.bound
    checks, result, notes = [], {}, []
    for tag, fn in (("inclusion", verify_att_inclusion), ("equality", verify_att_equality)):
        rep = fn(M, bound, seed=args.seed)
        checks += [dict(c, name=f"{tag}: {c['name']}") for c in rep.checks]
        result.update(rep.result)
        notes += [n for n in rep.notes if n not in notes]
        if not rep.ok:
            break
    else:
        for tag, fn in (("projection", verify_maximal_projection), ("descent", verify_coprime_descent)):
            rep = fn(M, bound)
            checks += [dict(c, name=f"{tag}: {c['name']}") for c in rep.checks]
    result["notes"] = notes
    return checks, result, bound


def _probe(args, spec):
    T, R = spec.twist, spec.ring
    r = _ring_element(spec, args.r)
    s = _ring_element(spec, args.s) if args.s else (R.gen if getattr(R, "var", None) else R.one)
    rep = check_product_relation_2_4(T, r, s, args.k, args.k_prime)
    x = T.indeterminate
    M = RegularModule(T)

    def show(d):
        return format_invpoly(M, InvPoly(M, d))

    def mono(c, k):
        return format_invpoly(M, InvPoly(M, {k: c})) if k else R.fmt(c)

    checks = [_check("at least one exponent reading matches direct multiplication",
                     rep.printed_matches or rep.index_matches)]
    result = {
        "instance": f"({mono(r, args.k)}) * ({mono(s, args.k_prime)})",
        "direct": show(rep.direct),
        "reading -(k+k')": show(rep.printed_reading),
        "reading -(i+k')": show(rep.index_reading),
        "-(k+k') matches": rep.printed_matches,
        "-(i+k') matches": rep.index_matches,
        "verdict": rep.verdict,
    }
    return checks, result, None


def _catalog(args, spec):
    checks, result = [], {}
    for name in PRESETS:
        s = preset(name)
        for rel, ok in s.self_test():
            checks.append(_check(f"{name}: {rel}", ok))
        laws = validate_twist(s.twist, seed=args.seed)
        checks.append(_check(f"{name}: twist laws ({'exhaustive' if laws.exhaustive else 'sampled'})",
                             laws.ok, None if laws.ok else laws.failures()[0]))
        result[name] = {"default": s.label(), "relation": s.description}
    return checks, result, None


COMMANDS = {
    "normalize": _normalize,
    "mul": _mul,
    "ore-swap": _ore_swap,
    "finv": _finv,
    "act": _act,
    "compat-check": _compat,
    "att": _primes("att"),
    "ass": _primes("ass"),
    "verify-lemma": _verify_lemma,
    "verify-theorem": _verify_theorem,
    "relation-2-4-probe": _probe,
    "catalog": _catalog,
}


def run_command(argv):
    """Parse ``argv``, run it, and return (exit code, ReportEnvelope or None, format)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_PASS if exc.code == 0 else EXIT_USAGE), None, "text"
    start = time.perf_counter()
    algebra = "-"
    code = EXIT_PASS
    try:
        fallback = "jordan_plane" if args.command == "relation-2-4-probe" else "skew_poly_ring"
        spec = _load(args, fallback)
        algebra = spec.label()
        checks, result, bound = COMMANDS[args.command](args, spec)
        if args.command == "catalog":
            algebra = "all presets"
    except (LatticeTooLarge, CombinatorialCapExceeded, NotLocallyNilpotent) as exc:
        code, checks, result, bound = EXIT_CAP, [_check("resource cap", "error", str(exc))], {}, args.bound
    except (PreconditionFailed, NotStableUnderTwist) as exc:
        code, checks, result, bound = EXIT_FAIL, [_check(str(exc), False, exc.witness)], {}, args.bound
    except (UsageError, ParseError, PresetError, TwistError, OSError, ValueError) as exc:
        code, checks, result, bound = EXIT_USAGE, [_check("usage", "error", str(exc))], {}, args.bound
    elapsed = None if args.no_timing else round((time.perf_counter() - start) * 1000)
    env = ReportEnvelope(__version__, args.command, algebra, args.seed, bound,
                         jsonable(checks), jsonable(result), elapsed)
    if code == EXIT_PASS and not env.ok:
        code = EXIT_FAIL
    return code, env, args.format


def main(argv=None):
    code, env, fmt = run_command(sys.argv[1:] if argv is None else argv)
    if env is not None:
        text = env.to_json() if fmt == "json" else env.to_text()
        stream = sys.stdout if code in (EXIT_PASS, EXIT_FAIL) else sys.stderr
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
