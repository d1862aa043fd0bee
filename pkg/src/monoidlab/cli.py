"""Command-line front end.

Exit codes: 0 pass/true, 1 fail/false, 2 inconclusive or limit hit, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .basisfile import BasisSyntaxError, expand_directive, load_basis
from .deduction import (
    Identity,
    IdentitySystem,
    Proved,
    SearchLimits,
    closure,
    deducible,
    rewrites_with_witness,
)
from .lattices import (
    check_lattice_axioms,
    partition_lattice,
    partitions_of,
    read_lattice,
    sublattice_embedding_search,
    verify_embedding,
)
from .monoids import (
    DEFAULT_EVAL_BUDGET,
    EvaluationBudgetExceeded,
    check_monoid_axioms,
    factor_monoid,
    read_monoid,
    satisfies_all,
)
from .verify import HARNESSES, VerificationReport
from .words import MatchSolution, Word, WordSyntaxError, format_word, parse_word

EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def _limits(args) -> SearchLimits:
    return SearchLimits(args.max_len, args.max_visited)


def _emit(args, text: str, doc: dict):
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _fw(w: Word) -> str:
    return format_word(w)


def _solution_json(sol: MatchSolution) -> dict:
    return {"sigma": {v: _fw(img) for v, img in sorted(sol.sigma.items())},
            "prefix": _fw(sol.prefix), "suffix": _fw(sol.suffix)}


# -- commands -------------------------------------------------------------

def cmd_deduce(args) -> int:
    basis = load_basis(args.basis)
    goal = Identity.parse(args.goal)
    res = deducible(goal, basis, _limits(args))
    doc = {"command": "deduce", "goal": str(goal), "basis": basis.name}
    if isinstance(res, Proved):
        doc.update(result="proved", steps=[
            {"word": _fw(s.word), "rule": str(s.rule), **_solution_json(s.solution)}
            for s in res.trace.steps])
        text = f"proved in {len(res.trace)} steps\n{res.trace.render()}"
        code = EXIT_TRUE
    else:
        doc.update(result="unknown", visited=res.visited, limit_hit=res.limit_hit)
        text = (f"unknown: not found within limits (visited {res.visited} words, "
                f"limit hit: {'yes' if res.limit_hit else 'no'})")
        code = EXIT_UNKNOWN
    _emit(args, text, doc)
    return code


def cmd_isoterm(args) -> int:
    basis = load_basis(args.basis)
    w = parse_word(args.word)
    succ = rewrites_with_witness(w, basis)
    ordered = sorted(succ, key=lambda v: (len(v), v))
    doc = {"command": "isoterm", "word": _fw(w), "basis": basis.name,
           "isoterm": not succ,
           "rewrites": [{"word": _fw(v), "rule": str(succ[v][0])} for v in ordered]}
    if not succ:
        text = f"true: {_fw(w)} is an isoterm for {basis.name}"
    else:
        lines = [f"false: {len(succ)} one-step rewrites of {_fw(w)}"]
        lines += [f"  {_fw(v)}    [{succ[v][0]}]" for v in ordered]
        text = "\n".join(lines)
    _emit(args, text, doc)
    return EXIT_TRUE if not succ else EXIT_FALSE


def cmd_closure(args) -> int:
    basis = load_basis(args.basis)
    w = parse_word(args.word)
    res = closure(w, basis, _limits(args))
    words = sorted(res.words, key=lambda v: (len(v), v))
    doc = {"command": "closure", "word": _fw(w), "basis": basis.name,
           "complete": res.complete, "words": [_fw(v) for v in words],
           "pruned": res.pruned, "truncated_at": res.frontier_truncated_at,
           "length_bound": res.length_bound}
    head = (f"{len(words)} words, " + ("complete" if res.complete else
            f"INCOMPLETE (pruned {res.pruned}, truncated at {res.frontier_truncated_at})"))
    _emit(args, "\n".join([head] + [f"  {_fw(v)}" for v in words]), doc)
    return EXIT_TRUE if res.complete else EXIT_UNKNOWN


def cmd_factor_monoid(args) -> int:
    w = parse_word(args.word)
    m = factor_monoid(w)
    ok = check_monoid_axioms(m)
    doc = {"command": "factor-monoid", "word": _fw(w), "size": len(m),
           "elements": list(m.elements),
           "table": [[int(x) for x in row] for row in m.table],
           "identity": m.identity_index, "zero": m.zero_index, "axioms_ok": ok.ok}
    _emit(args, m.dump().rstrip("\n"), doc)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_check(args) -> int:
    if Path(args.target).is_file():
        m = read_monoid(args.target)
        target = args.target
    else:
        w = parse_word(args.target)
        m = factor_monoid(w)
        target = f"M({_fw(w)})"
    basis = load_basis(args.basis)
    doc = {"command": "check", "monoid": target, "size": len(m), "basis": basis.name}
    try:
        res = satisfies_all(m, basis, args.eval_budget, args.method)
    except EvaluationBudgetExceeded as exc:
        doc.update(result="refused", identity=str(exc.identity), required=exc.required,
                   budget=exc.budget)
        _emit(args, f"inconclusive: {exc}", doc)
        return EXIT_UNKNOWN
    if res:
        doc.update(result="satisfied")
        _emit(args, f"true: {target} satisfies {basis.name}", doc)
        return EXIT_TRUE
    doc.update(result="violated", identity=str(res.identity),
               counterexample=res.counterexample)
    assignment = ", ".join(f"{v} -> {e}" for v, e in res.counterexample.items())
    _emit(args, f"false: {res.identity} fails at {assignment}", doc)
    return EXIT_FALSE


def _plot_dir(args) -> Path | None:
    return Path(args.plot) if getattr(args, "plot", None) else None


def cmd_partitions(args) -> int:
    if args.k < 1 or args.k > 10:
        raise UsageError("k must be between 1 and 10")
    plot = _plot_dir(args)
    if plot is not None and args.k > 6:
        raise UsageError("plotting needs k <= 6")
    parts = partitions_of(args.k)
    doc = {"command": "partitions", "k": args.k, "count": len(parts),
           "partitions": [p.short() for p in parts]}
    lines = [f"{len(parts)} partitions of a {args.k}-set"] + [f"  {p.short()}" for p in parts]
    if plot is not None:
        from .plotting import save_lattice
        path = save_lattice(partition_lattice(args.k), plot / f"partitions_k{args.k}.png",
                            title=f"partition lattice, k={args.k}")
        doc["figure"] = str(path)
        lines.append(f"figure: {path}")
    _emit(args, "\n".join(lines), doc)
    return EXIT_TRUE


def cmd_embed(args) -> int:
    lat = read_lattice(args.lattice)
    check = check_lattice_axioms(lat)
    if not check:
        raise UsageError(f"{args.lattice} is not a lattice: {check.failure}")
    mapping = sublattice_embedding_search(lat, args.k)
    doc = {"command": "embed", "lattice": args.lattice, "k": args.k,
           "found": mapping is not None, "mapping": mapping, "verified": None}
    if mapping is None:
        _emit(args, f"not found at k={args.k} (exhaustive search)", doc)
        return EXIT_FALSE
    verified = verify_embedding(lat, args.k, mapping)
    doc["verified"] = verified
    lines = [f"found embedding into partitions of a {args.k}-set"
             + ("" if verified else " (RE-CHECK FAILED)")]
    lines += [f"  {a} -> {b}" for a, b in mapping.items()]
    plot = _plot_dir(args)
    if plot is not None:
        from .plotting import save_lattice
        path = save_lattice(partition_lattice(args.k), plot / f"embed_k{args.k}.png",
                            highlight=mapping.values(),
                            title=f"{Path(args.lattice).stem} inside Eq({args.k})")
        doc["figure"] = str(path)
        lines.append(f"figure: {path}")
    _emit(args, "\n".join(lines), doc)
    return EXIT_TRUE if verified else EXIT_FALSE


_VERIFY_DEFAULTS = {"phi": {"n": 3}, "lambda": {"n": 2}, "cases": {"n": 3},
                    "em-join": {"m": 2, "r_max": 3}, "tm1": {"m": 2, "r_max": 3},
                    "isoterms": {"n": 3, "r_max": 4}}


def cmd_verify(args) -> int:
    which = args.which
    kw = dict(_VERIFY_DEFAULTS[which])
    for name in ("n", "m", "r_max"):
        value = getattr(args, name)
        if value is not None:
            if name not in kw:
                raise UsageError(f"verify {which} does not take --{name.replace('_', '-')}")
            kw[name] = value
    limits = _limits(args)
    if which in ("phi", "lambda", "cases"):
        kw["limits"] = limits
    if which in ("em-join", "isoterms"):
        kw["budget"] = args.eval_budget
    if which == "isoterms":
        kw["side"] = args.side
        kw["method"] = args.method
        if args.side == "lambda" and args.n is None:
            kw["n"] = 2
    plot = _plot_dir(args)
    if plot is not None and which not in ("phi", "lambda"):
        raise UsageError("--plot is available for verify phi and verify lambda")
    try:
        report: VerificationReport = HARNESSES[which](**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = report.to_json(timings=args.timings)
    doc["command"] = "verify"
    text = report.render(timings=args.timings, verbose=args.verbose)
    if plot is not None and not report.extra["fiber_sizes"]:
        text += "\nfigure: skipped, fibers incomplete"
    elif plot is not None:
        from .plotting import save_fiber_figure
        path = save_fiber_figure(report.extra["partitions"], report.extra["fiber_sizes"],
                                 plot / f"{which}_n{kw['n']}.png",
                                 f"{which}, n={kw['n']}: {report.status}")
        doc["figure"] = str(path)
        text += f"\nfigure: {path}"
    _emit(args, text, doc)
    return {"pass": EXIT_TRUE, "fail": EXIT_FALSE}.get(report.status, EXIT_UNKNOWN)


def cmd_families(args) -> int:
    name = args.name if args.name.startswith("@") else "@" + args.name
    try:
        system: IdentitySystem = expand_directive(name)
    except BasisSyntaxError as exc:
        raise UsageError(str(exc)) from None
    doc = {"command": "families", "name": args.name,
           "identities": [str(i) for i in system]}
    _emit(args, "\n".join(str(i) for i in system), doc)
    return EXIT_TRUE


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document")
    common.add_argument("--max-len", type=_positive, default=None,
                        help="longest word kept by searches (default 3*|input|+6)")
    common.add_argument("--max-visited", type=_positive, default=200_000,
                        help="stop a search after this many words (default 200000)")
    common.add_argument("--eval-budget", type=_positive, default=DEFAULT_EVAL_BUDGET,
                        help="table lookups allowed per identity check (default 1e8)")

    parser = _Parser(prog="monoidlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("deduce", parents=[common], help="bounded search for a deduction")
    p.add_argument("basis", help="basis file or directives like @O+@A(3)")
    p.add_argument("goal", help='identity "LHS = RHS"')
    p.set_defaults(func=cmd_deduce)

    p = sub.add_parser("isoterm", parents=[common], help="one-step isoterm test")
    p.add_argument("basis")
    p.add_argument("word")
    p.set_defaults(func=cmd_isoterm)

    p = sub.add_parser("closure", parents=[common], help="words reachable from a word")
    p.add_argument("basis")
    p.add_argument("word")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("factor-monoid", parents=[common], help="dump the factor monoid M(w)")
    p.add_argument("word")
    p.set_defaults(func=cmd_factor_monoid)

    p = sub.add_parser("check", parents=[common],
                       help="does a monoid (word or dump file) satisfy a basis")
    p.add_argument("target", help="a word (its factor monoid is used) or a monoid dump file")
    p.add_argument("basis")
    p.add_argument("--method", choices=["exhaustive", "pruned", "auto"], default="exhaustive")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("partitions", parents=[common], help="set partitions of a k-set")
    p.add_argument("k", type=int)
    p.add_argument("--plot", metavar="DIR", help="also draw the partition lattice")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("embed", parents=[common],
                       help="embed a lattice into the partitions of a k-set")
    p.add_argument("lattice", help="lattice JSON file")
    p.add_argument("k", type=int)
    p.add_argument("--plot", metavar="DIR", help="draw the image inside Eq(k)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", parents=[common], help="run a theorem harness")
    p.add_argument("which", choices=sorted(HARNESSES))
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--r-max", dest="r_max", type=int)
    p.add_argument("--side", choices=["phi", "lambda"], default="phi",
                   help="for 'isoterms': which family of lemmas")
    p.add_argument("--method", choices=["exhaustive", "pruned", "auto"], default="auto",
                   help="for 'isoterms': satisfaction engine")
    p.add_argument("--timings", action="store_true", help="include wall time")
    p.add_argument("--verbose", action="store_true", help="list passing cases too")
    p.add_argument("--plot", metavar="DIR", help="write a figure (phi and lambda)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("families", help="identity families")
    fam = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = fam.add_parser("print", parents=[common], help="print a family, e.g. B(4)")
    q.add_argument("name")
    q.set_defaults(func=cmd_families)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:   # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, WordSyntaxError, BasisSyntaxError, FileNotFoundError,
            ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"monoidlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
