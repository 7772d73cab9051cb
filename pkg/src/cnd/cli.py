"""Command line front end: ``cnd check|normalize|analyze|render|translate|gen``.

Exit codes: 0 success, 1 parse or check failure, 2 normalization refused
because the deduction uses the quantifier rules for ∀, 3 step budget
exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .analysis import analyze
from .deduction import check
from .generator import gen_conventional, gen_deduction
from .logic import pretty
from .reduce import FORALL_REFUSAL, BudgetExhausted, ForallUnsupported, normalize, uses_forall
from .syntax import ParseError, parse_with_spans, render, render_sexpr
from .transform import TransformError, from_conventional, to_conventional, to_unique_discharge

EXIT_OK, EXIT_INPUT, EXIT_FORALL, EXIT_BUDGET = 0, 1, 2, 3


class _Failed(Exception):
    def __init__(self, code):
        self.code = code


def _color() -> bool:
    v = os.environ.get("CND_COLOR")
    if v is not None:
        return v == "1"
    return sys.stderr.isatty()


def _error(where: str, msg: str) -> None:
    tag = "\033[31merror\033[0m" if _color() else "error"
    print("%s: %s: %s" % (where, tag, msg), file=sys.stderr)


def _read(name: str) -> bytes:
    if name == "-":
        return sys.stdin.buffer.read()
    p = Path(name)
    if not p.exists() and p.parent == Path("."):
        # bare names fall back to the bundled fixtures
        bundled = resources.files("cnd") / "fixtures" / p.name
        if not bundled.is_file():
            bundled = resources.files("cnd") / "fixtures" / (p.name + ".cnd")
        if bundled.is_file():
            return bundled.read_bytes()
    return p.read_bytes()


def _span_for(spans, path):
    while path not in spans and path:
        path = path[:-1]
    return spans.get(path)


def load(name: str, system: str = "cex", conventional: bool = False, validate: bool = True,
         refuse_forall: bool = False):
    """Read, parse and (optionally) check a deduction file, reporting failures."""
    try:
        data = _read(name)
    except OSError as e:
        _error(name, e.strerror or str(e))
        raise _Failed(EXIT_INPUT)
    try:
        d, spans = parse_with_spans(data)
    except ParseError as e:
        _error("%s:%s" % (name, e.span), e.msg)
        raise _Failed(EXIT_INPUT)
    if refuse_forall and uses_forall(d):
        _error(name, str(ForallUnsupported(FORALL_REFUSAL)))
        raise _Failed(EXIT_FORALL)
    if validate:
        rep = check(d, system, conventional=conventional)
        if not rep.valid:
            for path, msg in rep.diagnostics:
                sp = _span_for(spans, path)
                where = "%s:%s" % (name, sp) if sp else name
                _error(where, "%s (at /%s)" % (msg, "/".join(map(str, path))))
            raise _Failed(EXIT_INPUT)
    return d


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands

def cmd_check(args) -> int:
    code = EXIT_OK
    for name in args.files:
        try:
            d = load(name, args.system, args.conventional)
        except _Failed as f:
            code = max(code, f.code)
            continue
        rep = check(d, args.system, conventional=args.conventional)
        opened = ", ".join(sorted({pretty(f) for _, f in rep.open_assumptions}))
        print("%s: valid in %s: %s%s" % (name, args.system, "%s ⊢ " % opened if opened else "⊢ ",
                                         pretty(rep.conclusion)))
    return code


def cmd_normalize(args) -> int:
    try:
        d = load(args.file, args.system, refuse_forall=True)
        nf, trace = normalize(d, args.max_steps, system=args.system)
    except _Failed as f:
        return f.code
    except ForallUnsupported as e:
        _error(args.file, str(e))
        return EXIT_FORALL
    except BudgetExhausted as e:
        _error(args.file, str(e))
        return EXIT_BUDGET
    if args.trace:
        for n, step in enumerate(trace, 1):
            print(step.line(n))
    _emit(render_sexpr(nf), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        d = load(args.file, args.system)
    except _Failed as f:
        return f.code
    report = analyze(d)
    if args.json:
        print(json.dumps({"schema": 1, "file": args.file, **report}, sort_keys=True))
        return EXIT_OK
    path = lambda p: "/" + "/".join(map(str, p))
    print("rank %s%s" % ("<%d,%d>" % tuple(report["rank"]), "  (normal)" if report["normal"] else ""))
    for m in report["maximal_formulas"]:
        print("maximal formula %s at %s (degree %d)" % (m["formula"], path(m["path"]), m["degree"]))
    for s in report["maximal_segments"]:
        print("maximal segment %s length %d degree %d: %s"
              % (s["formula"], s["length"], s["degree"], " ".join(path(q) for q in s["occurrences"])))
    for b in report["branches"]:
        e, mid, i = b["split"]
        print("branch order %s: %s  [E %d | min %d | I %d]"
              % ("-" if b["order"] is None else b["order"],
                 " ".join(path(q) for q in b["occurrences"]), len(e), len(mid), len(i)))
    bad = report["subformula_violations"]
    print("subformula audit: %s" % ("ok" if not bad else "violations at " + " ".join(path(p) for p in bad)))
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        d = load(args.file, args.system, validate=False)
    except _Failed as f:
        return f.code
    _emit(render(d, args.format), args.out)
    return EXIT_OK


def cmd_translate(args) -> int:
    conventional_in = args.to == "general"
    try:
        d = load(args.file, args.system, conventional=conventional_in)
        out = from_conventional(d) if conventional_in else to_conventional(to_unique_discharge(d))
    except _Failed as f:
        return f.code
    except TransformError as e:
        _error(args.file, str(e))
        return EXIT_INPUT
    _emit(render_sexpr(out), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    make = gen_conventional if args.conventional else gen_deduction
    for k in range(args.count):
        sys.stdout.write(render_sexpr(make(args.seed + k, args.size, args.system)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cnd", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version="cnd " + __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def system(p, choices=("c", "cex", "cexall")):
        p.add_argument("--system", choices=choices, default="cex" if "cex" in choices else choices[0])

    p = sub.add_parser("check", help="check deductions")
    p.add_argument("files", nargs="+", metavar="FILE")
    system(p)
    p.add_argument("--conventional", action="store_true", help="accept the conventional intro rules")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("normalize", help="normalize a deduction")
    p.add_argument("file", metavar="FILE")
    system(p)
    p.add_argument("--trace", action="store_true", help="print one line per reduction step")
    p.add_argument("--max-steps", type=int, default=10 ** 6, metavar="N")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("analyze", help="report redexes, rank, branches and the subformula audit")
    p.add_argument("file", metavar="FILE")
    system(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("render", help="print a deduction as ascii, latex or sexpr")
    p.add_argument("file", metavar="FILE")
    system(p)
    p.add_argument("--format", choices=("ascii", "latex", "sexpr"), default="ascii")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(run=cmd_render)

    p = sub.add_parser("translate", help="convert between general and conventional introductions")
    p.add_argument("file", metavar="FILE")
    system(p)
    p.add_argument("--to", choices=("conventional", "general"), required=True)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("gen", help="generate random valid deductions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=40)
    p.add_argument("--count", type=int, default=1)
    system(p, ("c", "cex"))
    p.add_argument("--conventional", action="store_true", help="emit conventional-rule deductions")
    p.set_defaults(run=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen" and args.size < 1:
        build_parser().error("--size must be at least 1")
    return args.run(args)


if __name__ == "__main__":
    sys.exit(main())
