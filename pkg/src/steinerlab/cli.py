"""Command-line front end: ``steinerlab <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import experiment, verify
from .endo import MODES, PreconditionError, graded_intertwiner_dim, intertwiner_dim
from .exactla import DEFAULT_ENTRY_RANGE, ResourceLimitError, make_rng
from .numtheory import BundleShape, classify, fib_sequence, pell_solutions
from .pencil import GradedResolution, PencilFormatError, SamplingError, load, sample_pencil

SCHEMA_VERSION = experiment.SCHEMA_VERSION


def _int_list(text: str) -> list[int]:
    """Parse ``"3,4,5"``, ``"3-5"`` or a mix such as ``"3,5-7"``."""
    out = []
    try:
        for part in filter(None, (x.strip() for x in text.split(","))):
            a, _, b = part.partition("-")
            out.extend(range(int(a), int(b or a) + 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return out


def _primes(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None
    if not ps or any(p < 2 for p in ps):
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")
    return ps


def _cells(text: str) -> list[tuple[int, int, int]]:
    cells = []
    for item in text.split(","):
        try:
            N, s, t = (int(x) for x in item.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"cell {item!r} is not N:s:t") from None
        cells.append((N, s, t))
    return cells


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_measure_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=MODES, default="modular")
    p.add_argument("--primes", type=_primes, default=None, help="comma-separated prime list")
    p.add_argument("--entry-range", nargs=2, type=int, metavar=("LO", "HI"),
                   default=list(DEFAULT_ENTRY_RANGE))
    p.add_argument("--seed", type=int, default=0)


def cmd_classify(args) -> int:
    res = classify(BundleShape(args.N, args.s, args.t))
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, **res.to_dict()}))
    else:
        print(res)
    return 0


def cmd_fib(args) -> int:
    seq = fib_sequence(args.N, args.k_max)
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "N": args.N, "a": seq}))
    else:
        print(" ".join(map(str, seq)))
    return 0


def cmd_pell(args) -> int:
    sols = pell_solutions(args.N, args.s_bound)
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "N": args.N,
                          "solutions": [sol._asdict() for sol in sols]}))
    else:
        print("r s t")
        for sol in sols:
            print(f"{sol.r} {sol.s} {sol.t}")
    return 0


def cmd_measure(args) -> int:
    lo, hi = args.entry_range
    if args.file:
        obj = load(args.file)
    else:
        N, s, t = args.random
        obj = sample_pencil(make_rng(args.seed), BundleShape(N, s, t), lo, hi)
    if isinstance(obj, GradedResolution):
        report = graded_intertwiner_dim(obj, args.mode, args.primes)
        head = {"N": obj.N, "twists": list(obj.twists), "t": obj.t}
    else:
        report = intertwiner_dim(obj, args.mode, args.primes)
        head = {"N": obj.shape.N, "s": obj.shape.s, "t": obj.shape.t}
    print(json.dumps({"schema_version": SCHEMA_VERSION, **head, **report.to_dict()}))
    return 0


def cmd_sweep(args) -> int:
    if args.cells:
        cells = args.cells
    else:
        cells = [c for c in experiment.default_cells(
            args.N, max(args.s), max(args.t), min(args.s), not args.include_non_bundles)
            if c[2] >= min(args.t)]
    lo, hi = args.entry_range
    cfg = experiment.ExperimentConfig(cells, args.samples, args.seed, lo, hi,
                                      args.mode, args.primes)
    rows = experiment.run_sweep(cfg)
    text = experiment.rows_to_json(rows) if args.format == "json" else experiment.rows_to_csv(rows)
    _emit(text, args.out)
    return 0


def cmd_verify_paper(args) -> int:
    checks = verify.build_checks(verify.load_golden(args.golden))
    if args.list:
        for c in checks:
            print(f"{c.name}: {c.description}")
        return 0
    failed = []
    results = []
    for c in checks:
        try:
            ok, detail = c.run()
        except Exception as exc:
            ok, detail = False, f"raised {exc!r}"
        results.append({"name": c.name, "ok": ok, "detail": detail})
        if not ok:
            failed.append(c.name)
        if not args.json:
            print(f"{'PASS' if ok else 'FAIL'} {c.name}: {detail}")
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "checks": results,
                          "failed": failed}))
    elif failed:
        print(f"failed checks: {', '.join(failed)}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steinerlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify (N, s, t) by chi(End E)")
    p.add_argument("N", type=int)
    p.add_argument("s", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fib", help="generalized Fibonacci numbers a_0..a_k")
    p.add_argument("N", type=int)
    p.add_argument("k_max", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fib)

    p = sub.add_parser("pell", help="solutions of r^2 - (N^2-4) s^2 = 4")
    p.add_argument("N", type=int)
    p.add_argument("s_bound", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("measure", help="intertwiner dimension of one pencil")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--file")
    src.add_argument("--random", nargs=3, type=int, metavar=("N", "S", "T"))
    _add_measure_flags(p)
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="seeded experiment over an (N, s, t) grid")
    p.add_argument("--N", type=_int_list, default=[3, 4, 5])
    p.add_argument("--s", type=_int_list, default=[1, 2, 3, 4], help="s values, e.g. 1-4")
    p.add_argument("--t", type=_int_list, default=list(range(2, 13)), help="t values, e.g. 2-12")
    p.add_argument("--cells", type=_cells, default=None, help="explicit N:s:t,... list")
    p.add_argument("--include-non-bundles", action="store_true")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    _add_measure_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-paper", help="run the pinned regression checks")
    p.add_argument("--golden", default=None, help="alternative golden JSON file")
    p.add_argument("--list", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (PencilFormatError, PreconditionError, SamplingError, ResourceLimitError,
            ValueError, OSError, KeyError) as exc:
        print(f"steinerlab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
