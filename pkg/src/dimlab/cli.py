"""Command line entry point: ``dimlab check|suite|functor|limit``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .abelian import FgAbelian, ab_tor, format_invariants, parse_invariants
from .errors import DimlabError
from .functors import QuadTag, derived_l1, l1sp2_closed, l1sp2_koszul, quad_apply
from .report import FAILED
from .verify import checks
from .verify.finite import abelian_table, load_table
from .verify.presentations import PresentationSpec, load_presentation
from .verify.reps import RepTag, limit_equalizer, monoadd_check
from .verify.suite import EXIT_FAILED, EXIT_OK, EXIT_USAGE, PRESETS, run_suite

CHECK_IDS = [c.lower() for c in checks.DIM_IDS] + [p.lower() for p in checks.FOX_PARTS] + [
    "thdim", "foxlimit", "monoadd", "limit", "dimq"]

FUNCTOR_TAGS = ["l1sp2", "l1lambda2", "l1tilde2", "l1tensor2", "sp2", "lambda2", "tilde2", "tensor2", "tor"]


def _ints(text: str) -> list[int]:
    try:
        return parse_invariants(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated integer list, got {text!r}") from None


def _words(text: str) -> list[str]:
    return [w.strip() for w in text.split(";") if w.strip()]


def _invariant_text(inv: list[int]) -> str:
    # "0" already means a free summand, so the trivial group gets a word of its own
    return format_invariants(inv) if inv else "trivial"


def _presentation(args) -> PresentationSpec:
    if args.pres:
        return load_presentation(args.pres)
    if args.group is not None:
        return PresentationSpec.abelian(args.group)
    if args.relators is not None:
        if args.rank is None:
            raise DimlabError("--relators needs --rank")
        return PresentationSpec.from_strings(args.rank, args.relators, args.include_gamma2)
    if args.rank is not None:
        return PresentationSpec(args.rank, (), args.include_gamma2)
    raise DimlabError("no presentation given; use --pres, --group or --rank/--relators")


def _dim_params(args) -> dict:
    params: dict = {}
    if args.exponents is not None:
        if args.rank is not None and args.rank != len(args.exponents):
            raise DimlabError(f"--rank {args.rank} does not match {len(args.exponents)} exponents")
        params["exponents"] = args.exponents
        if args.xi:
            params["xi"] = args.xi
        if args.extra:
            params["extra"] = args.extra
    else:
        params["pres"] = _presentation(args)
    if args.max_degree is not None:
        params["N"] = args.max_degree
    if args.cls is not None:
        params["cls"] = args.cls
    return params


def _run_check(args):
    cid = args.id.lower()
    if cid.upper() in checks.DIM_IDS:
        return checks.check_dim_identity(cid.upper(), _dim_params(args))
    if cid.upper() in checks.FOX_PARTS:
        witnesses = json.loads(Path(args.witnesses).read_text()) if args.witnesses else None
        return checks.check_fox(cid.upper(), _presentation(args), witnesses)
    if cid == "thdim":
        pres = _presentation(args)
        if args.table:
            table = load_table(args.table)
        elif args.group is not None:
            table = abelian_table(args.group)
        else:
            raise DimlabError("thdim needs --table FILE or --group")
        return checks.check_thdim(pres, table)
    if cid == "foxlimit":
        return checks.check_foxlimit(_presentation(args))
    if cid == "monoadd":
        return monoadd_check(RepTag.parse(args.rep), _presentation(args), args.expect_injective)
    if cid == "limit":
        return checks.check_limit_formula(_presentation(args), RepTag.parse(args.rep))
    if cid == "dimq":
        tables = [load_table(args.table)] if args.table else None
        if tables is None:
            from .verify.finite import corpus
            tables = corpus(16)
        return checks.check_dim_quotients(tables, args.n)
    raise DimlabError(f"unknown check {args.id!r}; choose from {', '.join(CHECK_IDS)}")


def cmd_check(args) -> int:
    rep = _run_check(args).to_dict()
    text = json.dumps([rep], indent=2)
    if args.report:
        Path(args.report).write_text(text)
    print(text)
    return EXIT_FAILED if rep["status"] == FAILED else EXIT_OK


def cmd_suite(args) -> int:
    code, reports = run_suite({"preset": args.preset, "jobs": args.jobs, "report": args.report})
    for r in reports:
        print(f"{r['status']:<9} {r['check']:<14} {json.dumps(r.get('params', {}), sort_keys=True)}")
    counts: dict[str, int] = {}
    for r in reports:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    print("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return code


def cmd_functor(args) -> int:
    A = FgAbelian.from_invariants(args.group)
    tag = args.tag.lower()
    if tag == "tor":
        value = ab_tor(A, A)
    elif tag == "l1sp2":
        value = {"closed": l1sp2_closed, "koszul": l1sp2_koszul,
                 "simplicial": lambda X: derived_l1(QuadTag.SP2, X)}[args.path](A).value
    elif tag.startswith("l1"):
        value = derived_l1(QuadTag(tag[2:]), A).value
    else:
        value = quad_apply(QuadTag(tag), A)
    print(_invariant_text(value.invariant_factors))
    return EXIT_OK


def cmd_limit(args) -> int:
    value = limit_equalizer(RepTag.parse(args.rep), _presentation(args))
    print(_invariant_text(value.invariant_factors))
    return EXIT_OK


def _add_presentation_args(p):
    p.add_argument("--pres", metavar="FILE", help="presentation file (rank/relator/include-gamma2 lines)")
    p.add_argument("--group", type=_ints, metavar="D1,D2,...",
                   help="abelian group by cyclic orders (0 for Z), presented with include-gamma2")
    p.add_argument("--rank", type=int)
    p.add_argument("--relators", type=_words, metavar="W1;W2;...", help="relator words separated by ';'")
    p.add_argument("--include-gamma2", action="store_true", help="add the commutators of the generators as relators")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dimlab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one parametrized check and print its JSON report")
    p.add_argument("id", help="one of " + ", ".join(CHECK_IDS))
    _add_presentation_args(p)
    p.add_argument("--exponents", type=_ints, metavar="E1,E2,...", help="power exponents e_1,...,e_m")
    p.add_argument("--xi", type=_words, help="gamma_2 correction words, ';' separated")
    p.add_argument("--extra", type=_words, help="additional gamma_2 relators, ';' separated")
    p.add_argument("--max-degree", type=int, help="truncation degree for ideal computations")
    p.add_argument("--class", dest="cls", type=int, help="nilpotency class for subgroup computations")
    p.add_argument("--table", metavar="FILE", help="finite group multiplication table")
    p.add_argument("--rep", default="gamma2_mod3", help="representation tag for limit/monoadd")
    p.add_argument("--expect-injective", dest="expect_injective", action="store_true", default=None)
    p.add_argument("--expect-not-injective", dest="expect_injective", action="store_false")
    p.add_argument("--witnesses", metavar="FILE", help="JSON list of witness tuples for gen_b")
    p.add_argument("-n", type=int, default=3, help="dimension index for dimq")
    p.add_argument("--report", metavar="FILE")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", help="run a preset of checks")
    p.add_argument("--preset", choices=sorted(PRESETS), default="smoke")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", metavar="FILE")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("functor", help="evaluate a quadratic functor or its first derived functor")
    p.add_argument("tag", choices=FUNCTOR_TAGS)
    p.add_argument("--group", type=_ints, required=True, metavar="D1,D2,...")
    p.add_argument("--path", choices=["closed", "koszul", "simplicial"], default="closed",
                   help="computation path for l1sp2")
    p.set_defaults(func=cmd_functor)

    p = sub.add_parser("limit", help="limit of a representation over free presentations")
    p.add_argument("--rep", required=True, help="one of " + ", ".join(t.value for t in RepTag))
    _add_presentation_args(p)
    p.set_defaults(func=cmd_limit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (DimlabError, ValueError, OSError) as exc:
        print(f"dimlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
