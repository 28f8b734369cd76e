"""Command line entry point: ``wavefront-scope``.

Exit codes: 0 success, 1 invalid input or failed pre-flight check, 2 numerical
failure during a run, 3 an ``--assert`` expectation or acceptance criterion failed.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import PRECONDITION_ERRORS, WavefrontError

EXIT_OK, EXIT_INPUT, EXIT_ENGINE, EXIT_ASSERT = 0, 1, 2, 3

log = logging.getLogger("wavefront_scope")


def _cmd_run(args):
    from .report import check_expectations, run, write_outputs
    from .scenario import load

    try:
        cfg = load(args.config)
    except WavefrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report, volumes, timings = run(cfg, keep_volumes=cfg["outputs"]["raw_volume"])
        written = write_outputs(cfg, report, volumes, timings, args.out)
    except PRECONDITION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WavefrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    for p in written:
        log.info("wrote %s", p)
    for r in report["results"]:
        print(f"{r['window']:>14} x={r['point']} d={[round(v, 4) for v in r['direction']]} "
              f"{r['decay']['classification']:<12} slope={r['decay']['slope']} "
              f"s*={r['sobolev']['s_star']}")
    if args.assert_:
        failures = check_expectations(cfg, report)
        for f in failures:
            print(f"ASSERTION FAILED: {f}", file=sys.stderr)
        if failures:
            return EXIT_ASSERT
    return EXIT_OK


def _cmd_accept(args):
    from . import acceptance

    chosen = acceptance.CRITERIA
    if args.only:
        chosen = [acceptance.CRITERIA[k - 1] for k in args.only]
    results = []
    for crit in chosen:
        res = crit()
        results.append(res)
        print(res.line() + f"  ({res.seconds:.1f} s)", flush=True)
        if args.verbose:
            for d in res.details:
                print("    " + d)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {', '.join(map(str, failed))}" if failed else ""))
    return EXIT_ASSERT if failed else EXIT_OK


def _cmd_list(args):
    from .distributions import CATALOG
    from .windows import WINDOW_NAMES

    print("distributions:")
    for name in CATALOG:
        print(f"  {name}")
    print("windows:")
    for name in WINDOW_NAMES:
        print(f"  {name}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="wavefront-scope",
                                description="Numerical wave front set detection via scaled "
                                            "windowed Fourier transforms.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a JSON scenario")
    r.add_argument("config", help="scenario JSON file")
    r.add_argument("--out", default=".", help="output directory (default: current)")
    r.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit 3 unless every 'expect' entry holds")
    r.set_defaults(func=_cmd_run)

    a = sub.add_parser("accept", help="run the bundled acceptance suite")
    a.add_argument("--only", type=int, nargs="+", choices=range(1, 10), metavar="K",
                   help="run only these criteria (1-9)")
    a.add_argument("--details", dest="verbose", action="store_true",
                   help="print per-probe details")
    a.set_defaults(func=_cmd_accept)

    c = sub.add_parser("list-catalog", help="list distributions and windows")
    c.set_defaults(func=_cmd_list)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
