"""Command line entry point ``trace-bound``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict

from sympy import primerange

from .assembler import Config, assemble
from .numfield import make_field

CSV_COLUMNS = ("A", "index", "a", "S_one", "S_id", "S_ell", "S_hyp", "S_par", "S_Eis", "S_Res",
               "total", "ratio", "status")


def parse_dilations(text: str):
    if text == "auto":
        return "auto"
    return tuple(float(x) for x in text.split(","))


def parse_norms(spec: str) -> list[int]:
    """Comma-separated items: ``n``, ``lo-hi`` or ``primes:lo-hi`` (inclusive)."""
    out: set[int] = set()
    spec = spec.strip()
    if not spec:
        return []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        primes = item.startswith("primes:")
        body = item[len("primes:"):] if primes else item
        if "-" in body:
            lo, hi = (int(x) for x in body.split("-", 1))
        else:
            lo = hi = int(body)
        if lo < 1 or hi < lo - 1:
            raise ValueError(f"bad norm range {item!r}")
        values = primerange(lo, hi + 1) if primes else range(lo, hi + 1)
        out.update(int(v) for v in values)
    return sorted(out)


def _config(args) -> Config:
    return Config(mode=args.mode, a=parse_dilations(args.a), paper_losses=args.paper_losses,
                  window=args.window)


def _fmt(x: float) -> str:
    return repr(float(x))


def _row(report) -> list[str]:
    status = "ok" if report.ok else "failed:" + ";".join(report.failed)
    terms = [_fmt(report.terms[k]) for k in CSV_COLUMNS[3:10]]
    return ([str(report.A), str(report.index), ";".join(_fmt(x) for x in report.a)]
            + terms + [_fmt(report.total), _fmt(report.ratio), status])


def _sweep_task(job):
    field, n, config = job
    return _row(assemble(field, n, config))


def cmd_compute(args) -> int:
    config = _config(args)
    report = assemble(args.field, args.ideal, config)
    payload = report.to_dict()
    payload["config"] = asdict(config)
    text = json.dumps(payload, indent=2, default=str, allow_nan=True)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report.ok else 2


def cmd_sweep(args) -> int:
    config = _config(args)
    F = make_field(args.field)
    gens = parse_norms(args.norms)
    done: set[int] = set()
    exists = os.path.exists(args.out) and os.path.getsize(args.out) > 0
    if exists:
        with open(args.out, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is not None and tuple(header) != CSV_COLUMNS:
                raise SystemExit(f"{args.out} has a different header; refusing to resume")
            done = {int(row[0]) for row in reader if row}
    # the norm of (n) is n^degree
    todo = [n for n in gens if n ** F.degree not in done]
    jobs = [(args.field, n, config) for n in todo]
    failed = False
    with open(args.out, "a", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if not exists:
            writer.writerow(CSV_COLUMNS)
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                rows = pool.map(_sweep_task, jobs)
                for row in rows:
                    writer.writerow(row)
                    fh.flush()
                    failed |= row[-1] != "ok"
        else:
            for job in jobs:
                row = _sweep_task(job)
                writer.writerow(row)
                fh.flush()
                failed |= row[-1] != "ok"
    return 2 if failed else 0


def cmd_selftest(args) -> int:
    from . import selftest

    results = selftest.run(args.suite)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trace-bound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--field", default="Q", help="Q or quad:<d>")
        p.add_argument("--mode", choices=("rigorous", "numeric"), default="rigorous")
        p.add_argument("--a", default="auto", help="auto or comma-separated dilations in (0, 1]")
        p.add_argument("--paper-losses", action="store_true",
                       help="use the cruder elliptic chain instead of per-place products")
        p.add_argument("--window", choices=("support", "exponential"), default="support",
                       help="elliptic enumeration window")

    p = sub.add_parser("compute", help="bound report for one level")
    common(p)
    p.add_argument("--ideal", type=int, required=True, help="positive integer generator n of J = (n)")
    p.add_argument("--json", help="write the report to this path")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="one CSV row per level")
    common(p)
    p.add_argument("--norms", required=True, help="e.g. primes:2-100 or 1-50,64")
    p.add_argument("--out", required=True)
    p.add_argument("-j", "--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run invariant checks")
    p.add_argument("suite", nargs="?", default="all", choices=("transforms", "local", "arch", "all"))
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
