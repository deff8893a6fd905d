"""Command-line front end.

Words are comma-separated integers (``1,1,1,4``), matrices ``a,b;c,d`` and
surds ``p,q,d[,r]`` for (p + q sqrt(d)) / r.  ``--json`` prints validated
envelopes; search commands print one envelope per q or delta.  Exit codes:
0 success, 1 usage error or failed certification, 2 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import __version__, kernels
from .cfcore import (
    eval_periodic,
    expand_rational,
    expand_surd,
    parse_word,
    render_periodic,
    render_word,
)
from .errors import CertificationError, DomainError
from .exactnum import isqrt, parse_surd, squarefree_part
from .families import (
    FamilySpec,
    certify_family,
    mn_construct,
    mn_from_word,
    suite_12s_spec,
    suite_sym_spec,
    suites_ijM_spec,
    wilson_spec,
    zaremba_to_periodic,
)
from .matmonoid import IDENTITY, Mat2, discriminant, factorize, word_to_matrix
from .pell import fundamental_pm1, fundamental_pm4, trace_solutions, unit_matrix
from .schemas import ERROR_PAYLOAD, PAYLOADS, SCHEMA_VERSION, envelope_schema
from .searchlab import (
    DEFAULT_BUDGET,
    density_scan,
    fib_fields,
    verify_conj12,
    zaremba_constrained,
    zaremba_search,
)

DEFAULT_SEED = 20240101
EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2
_STATUS_EXIT = {"ok": EXIT_OK, "error": EXIT_ERROR, "budget-exhausted": EXIT_BUDGET}


class UsageError(Exception):
    pass


@dataclass
class CommandOutcome:
    command: str
    status: str  # "ok", "budget-exhausted" or "error"
    payload: dict | None = None
    records: list[dict] = dc_field(default_factory=list)
    human_text: str = ""
    failed: bool = False  # ran fine but certified a negative result

    @property
    def exit_code(self) -> int:
        return EXIT_ERROR if self.failed else _STATUS_EXIT[self.status]

    def documents(self) -> list[dict]:
        payloads = self.records if self.records else [self.payload]
        return [
            {"command": self.command, "version": SCHEMA_VERSION, "status": self.status, "payload": p}
            for p in payloads
        ]


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_expand(args) -> CommandOutcome:
    text = args.value
    if "/" in text or "," not in text:
        num, _, den = text.partition("/")
        value = Fraction(int(num), int(den or 1))
        if value < 0:
            raise DomainError("only non-negative rationals are expanded")
        digits = expand_rational(value.numerator, value.denominator, args.last_one)
        payload = {"input": text, "kind": "rational", "preperiod": list(digits), "period": [], "text": render_word(digits)}
    else:
        surd = parse_surd(text)
        if surd.q == 0:
            raise DomainError(f"{text} is rational; write it as p/r")
        cf = expand_surd(surd)
        payload = {"input": text, "kind": "surd", "surd": surd.to_json(), "text": str(cf)} | cf.to_json()
    return CommandOutcome("expand", "ok", payload, human_text=payload["text"])


def _cmd_eval(args) -> CommandOutcome:
    word = parse_word(args.word)
    surd = eval_periodic(word)
    payload = {"word": list(word), "surd": surd.to_json(), "field": surd.d, "text": str(surd)}
    return CommandOutcome("eval", "ok", payload, human_text=str(surd))


def _cmd_field(args) -> CommandOutcome:
    word = parse_word(args.word)
    M = word_to_matrix(word)
    disc = discriminant(M)
    delta = squarefree_part(disc)
    payload = {
        "word": list(word),
        "matrix": M.to_json(),
        "trace": M.trace(),
        "det": M.det(),
        "discriminant": disc,
        "field": delta,
        "cofactor": isqrt(disc // delta),
    }
    return CommandOutcome("field", "ok", payload, human_text=str(delta))


def _cmd_factorize(args) -> CommandOutcome:
    M = Mat2.parse(args.matrix)
    word = factorize(M)
    return CommandOutcome("factorize", "ok", {"matrix": M.to_json(), "word": list(word)}, human_text=",".join(map(str, word)))


def _cmd_pell(args) -> CommandOutcome:
    sol = fundamental_pm4(args.delta) if args.pm4 else fundamental_pm1(args.delta)
    unit = unit_matrix(args.delta)
    traces = trace_solutions(args.delta, args.count)
    payload = {
        "delta": args.delta,
        "rhs": sol.rhs,
        "x": sol.x,
        "y": sol.y,
        "unitMatrix": unit.matrix.to_json(),
        "field": unit.field,
        "power": unit.power,
        "traces": traces,
    }
    text = f"{sol.x}^2 - {args.delta}*{sol.y}^2 = {sol.rhs}\ntraces: {' '.join(map(str, traces))}"
    return CommandOutcome("pell", "ok", payload, human_text=text)


def _members(spec: FamilySpec, n_max: int) -> list[dict]:
    out = []
    for n in range(n_max + 1):
        word = spec.word(n)
        out.append(
            {
                "n": n,
                "word": list(word),
                "length": len(word),
                "maxDigit": max(word),
                "surd": str(eval_periodic(word, field=spec.field)),
            }
        )
    return out


def _random_symmetric_seed(rng: random.Random, top: int) -> tuple[Mat2, Mat2]:
    half = tuple(rng.randint(1, top) for _ in range(rng.randint(0, 3)))
    odd = half + (rng.randint(1, top),) + half[::-1]
    other = tuple(rng.randint(1, top) for _ in range(rng.randint(0, 2)))
    return word_to_matrix(other + other[::-1]), word_to_matrix(odd)


def _construct_family(args) -> tuple[FamilySpec, dict]:
    kind = args.kind
    if kind == "mn":
        if args.word:
            built = mn_from_word(parse_word(args.word), args.nmax)
            params = {"word": list(parse_word(args.word))}
        elif args.N:
            M = word_to_matrix(parse_word(args.M)) if args.M else IDENTITY
            built = mn_construct(M, word_to_matrix(parse_word(args.N)), args.nmax)
            params = {"M": args.M or "", "N": args.N}
        else:
            rng = random.Random(args.seed)
            M, N = _random_symmetric_seed(rng, args.max_digit)
            built = mn_construct(M, N, args.nmax)
            params = {"seed": args.seed, "M": M.to_json(), "N": N.to_json()}
        return built.spec, params | {"k": built.k, "e": built.e}
    if kind == "ij":
        M = parse_word(args.M) if args.M else ()
        spec = suites_ijM_spec(args.i, args.j, M, args.template)
        return spec, {"i": args.i, "j": args.j, "M": list(M), "template": args.template}
    if kind == "sym":
        S = parse_word(args.S) if args.S else ()
        return suite_sym_spec(S), {"S": list(S)}
    if kind == "12s":
        spec = suite_12s_spec(args.delta)
        return spec, {"delta": args.delta, "s": spec.A[0]}
    if kind == "wilson":
        return wilson_spec(args.s, args.small_digits), {"s": args.s, "smallDigits": args.small_digits}
    raise UsageError(f"unknown family {kind}")


_CONSTRUCT_NEEDS = {"ij": ("i",), "12s": ("delta",), "wilson": ("s",), "zaremba": ("a", "b", "c", "delta")}


def _cmd_construct(args) -> CommandOutcome:
    missing = [k for k in _CONSTRUCT_NEEDS.get(args.kind, ()) if getattr(args, k) is None]
    if missing:
        raise UsageError(f"construct {args.kind} needs --{', --'.join(missing)}")
    if args.kind == "zaremba":
        inst = zaremba_to_periodic(args.a, args.b, args.c, args.delta, args.last_one)
        instance = inst.to_json() | {"field": squarefree_part(args.delta)}
        text = f"{render_periodic((), inst.word)}  = {inst.surd}  in Q(sqrt({instance['field']}))"
        return CommandOutcome("construct", "ok", {"kind": "zaremba", "instance": instance}, human_text=text)
    spec, params = _construct_family(args)
    members = _members(spec, args.nmax)
    lines = [f"family {spec.provenance} in Q(sqrt({spec.field})): B={spec.B} A={spec.A} C={spec.C}"]
    lines += [f"n={m['n']}: {render_periodic((), m['word'])}" for m in members]
    payload = {"kind": args.kind, "family": spec.to_json(), "members": members, "parameters": params}
    return CommandOutcome("construct", "ok", payload, human_text="\n".join(lines))


def _cmd_certify(args) -> CommandOutcome:
    try:
        data = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.spec}: {exc}") from exc
    jsonschema.validate(data, PAYLOADS["construct"]["properties"]["family"])
    spec = FamilySpec.from_json(data)
    report = certify_family(spec, args.nmax)
    payload = {"family": spec.to_json(), "ok": report.ok, "records": [r.to_json() for r in report.records]}
    lines = [
        f"n={r.n}: length {r.length}, max digit {r.max_digit}, " + ("ok" if r.ok else "FAILED")
        for r in report.records
    ]
    return CommandOutcome("certify", "ok", payload, human_text="\n".join(lines), failed=not report.ok)


def _cmd_zaremba(args) -> CommandOutcome:
    records, lines = [], []
    for q in args.q:
        hit = zaremba_constrained(q) if args.constrained else zaremba_search(q, args.m)
        m = 2 if args.constrained else args.m
        rec = {"q": q, "m": m, "found": hit is not None}
        if args.constrained:
            rec["constrained"] = True
        if hit is not None:
            rec |= {"p": hit.p, "word": list(hit.word)}
        records.append(rec)
        lines.append(f"{q}: " + (f"{hit.p}/{q} = {render_word((0,) + hit.word)}" if hit else "none"))
    return CommandOutcome("zaremba", "ok", records=records, human_text="\n".join(lines))


def _cmd_verify_conj12(args) -> CommandOutcome:
    checkpoint = args.resume or args.checkpoint
    recs = verify_conj12(args.max, args.budget, checkpoint, resume=bool(args.resume), workers=args.threads)
    records = [r.to_json() for r in recs]
    exhausted = [r.delta for r in recs if r.status != "witness"]
    lines = [
        f"{r.delta}: " + (f"c={r.c} length {len(r.word)}" if r.status == "witness" else f"budget ({r.visited} nodes)")
        for r in recs
    ]
    lines.append(f"{len(recs) - len(exhausted)}/{len(recs)} resolved")
    status = "budget-exhausted" if exhausted else "ok"
    return CommandOutcome("verify-conj12", status, records=records, human_text="\n".join(lines))


def _cmd_density(args) -> CommandOutcome:
    res = density_scan(args.N, args.m, workers=args.threads)
    text = f"{res.count_bounded}/{res.count_squarefree} squarefree n^2-1 <= {args.N} bounded by {args.m}"
    return CommandOutcome("density", "ok", res.to_json(), human_text=text)


def _cmd_fib(args) -> CommandOutcome:
    rep = fib_fields(args.max)
    text = f"{rep.distinct} distinct fields; divisibility {rep.divisibility}; lifting {rep.lifting}"
    return CommandOutcome("fib", "ok", rep.to_json(), human_text=text)


# ---------------------------------------------------------------------------
# parser


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--json", action="store_true", default=default(False), help="print JSON envelopes")
    parser.add_argument("--seed", type=int, default=default(DEFAULT_SEED), help="seed for randomized commands")
    parser.add_argument("--threads", type=int, default=default(1), help="worker processes for searches")
    parser.add_argument("--out", default=default(None), help="also write the JSON output to this file")
    parser.add_argument("--schema", action="store_true", default=default(False), help="print the JSON schema and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boundedcf", description="Bounded periodic continued fractions in real quadratic fields.")
    parser.add_argument("--version", action="version", version=f"boundedcf {__version__} ({kernels.BACKEND} kernels)")
    _global_flags(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("expand", _cmd_expand, "continued fraction of p/q or of a surd p,q,d[,r]")
    p.add_argument("value")
    p.add_argument("--last-one", action="store_true", help="end a finite expansion with 1")

    p = add("eval", _cmd_eval, "value of a purely periodic word")
    p.add_argument("word")

    p = add("field", _cmd_field, "squarefree part of the discriminant of a word")
    p.add_argument("word")

    p = add("factorize", _cmd_factorize, "word of a matrix in the positive monoid")
    p.add_argument("matrix")

    p = add("pell", _cmd_pell, "fundamental Pell solution and unit traces")
    p.add_argument("delta", type=int)
    p.add_argument("--pm4", action="store_true", help="solve x^2 - delta y^2 = +-4")
    p.add_argument("--count", type=int, default=4, help="number of unit traces")

    p = add("construct", _cmd_construct, "build a family or a single periodic word")
    p.add_argument("kind", choices=["mn", "ij", "sym", "12s", "wilson", "zaremba"])
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--M", help="palindromic word (mn: symmetric factor, ij: middle block)")
    p.add_argument("--N", help="palindromic word for mn")
    p.add_argument("--word", help="mn: period split into two palindromes")
    p.add_argument("--max-digit", type=int, default=4, help="mn with a random seed: digit bound")
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--template", type=int, choices=[1, 2, 3])
    p.add_argument("--S", help="palindromic word for sym")
    p.add_argument("--s", type=int)
    p.add_argument("--small-digits", action="store_true")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--last-one", action="store_true", help="zaremba: expand a/c ending with 1")

    p = add("certify", _cmd_certify, "check a family spec (JSON) for n = 0..nmax")
    p.add_argument("spec")
    p.add_argument("--nmax", type=int, default=4)

    p = add("zaremba", _cmd_zaremba, "search p/q with bounded quotients")
    p.add_argument("q", type=int, nargs="+")
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--constrained", action="store_true", help="quotients in {1, 2}, first and last equal to 2")

    p = add("verify-conj12", _cmd_verify_conj12, "periodic {1,2} words in each field Q(sqrt(delta))")
    p.add_argument("--max", type=int, required=True, help="exclusive bound on delta")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search nodes per delta")
    p.add_argument("--resume", help="checkpoint file to resume from and update")
    p.add_argument("--checkpoint", help="checkpoint file to start afresh")

    p = add("density", _cmd_density, "how many squarefree n^2 - 1 admit bounded constructions")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("fib", _cmd_fib, "fields of the all-ones family and Fibonacci divisibility")
    p.add_argument("--max", type=int, required=True)
    return parser


def _error(command: str, exc: BaseException) -> CommandOutcome:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    return CommandOutcome(command, "error", payload, human_text=f"error: {exc}")


def run(argv: list[str] | None = None) -> tuple[CommandOutcome | None, argparse.Namespace | None]:
    """Parse and execute; returns the outcome (None for ``--schema``) and the arguments."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _error("usage", exc), None
    if args.schema:
        return None, args
    if args.command is None:
        return _error("usage", UsageError(parser.format_usage().strip())), args
    try:
        outcome = args.func(args)
    except (DomainError, CertificationError, UsageError, jsonschema.ValidationError, ValueError) as exc:
        return _error(args.command, exc), args
    for doc in outcome.documents():
        jsonschema.validate(doc, envelope_schema(outcome.command))
    return outcome, args


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False)


def main(argv: list[str] | None = None) -> int:
    outcome, args = run(argv)
    if outcome is None:
        names = [args.command] if args.command else sorted(PAYLOADS)
        schemas = {name: envelope_schema(name) for name in names}
        schemas["error"] = ERROR_PAYLOAD
        print(json.dumps(schemas, indent=2, sort_keys=True))
        return EXIT_OK
    if args is None:  # the parser gave up before reading --json
        as_json = "--json" in (sys.argv[1:] if argv is None else argv)
    else:
        as_json = args.json
    if outcome.status == "error" and not as_json:
        print(outcome.human_text, file=sys.stderr)
    elif as_json:
        text = "\n".join(_dump(d) for d in outcome.documents())
        print(text)
        if args and args.out:
            Path(args.out).write_text(text + "\n")
    else:
        print(outcome.human_text)
        if args.out:
            Path(args.out).write_text("\n".join(_dump(d) for d in outcome.documents()) + "\n")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
