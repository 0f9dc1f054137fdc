"""Benchmark of the compiled kernels against the pure-Python fallback.

Run as ``python -m pbflab.benchmark`` (optionally ``--json``).  Both
backends execute identical workloads and their answers are compared, so the
benchmark doubles as a coarse parity check.
"""

from __future__ import annotations

import argparse
import json
import time

from pbflab import generators
from pbflab.kernels import pyref

try:
    from pbflab.kernels import _core
except ImportError:  # pragma: no cover - build without a compiler
    _core = None


def _workloads():
    rng = generators.instance_rng(2024, 0)
    f10 = generators.random_partial_function(10, rng, 0.2)
    f12 = generators.random_total_function(12, rng)
    f6 = generators.random_partial_function(6, rng, 0.18)
    while f6.undefined_count > 12:
        f6 = generators.random_partial_function(6, rng, 0.18)
    dom10 = list(f10.domain())[:64]

    yield "decision_depth n=10", lambda k: k.decision_depth(f10.table, 10, 10)
    yield "decision_depth n=12 total", lambda k: k.decision_depth(f12.table, 12, 12)

    def bs_sweep(k):
        return sum(k.bs_at(f10.table, 10, x, bool(i & 1)) for i, x in enumerate(dom10))

    yield "block sensitivity, 64 points n=10", bs_sweep

    def cert_sweep(k):
        return sum(k.cert_at(f10.table, 10, x, bool(i & 1)) for i, x in enumerate(dom10))

    yield "certificates, 64 points n=10", cert_sweep

    def critical(k):
        cbs, _ = k.cbs_exact(f6.table, 6)
        cc, _ = k.ccrit_exact(f6.table, 6, cbs)
        return cbs * 100 + cc

    yield f"cbs+ccrit n=6 (u={f6.undefined_count})", critical


def run(repeat: int = 3) -> list[dict]:
    rows = []
    for name, fn in _workloads():
        row = {"workload": name}
        answers = {}
        for label, backend in (("pure", pyref), ("compiled", _core)):
            if backend is None:
                continue
            best = float("inf")
            for _ in range(repeat):
                t0 = time.perf_counter()
                answers[label] = fn(backend)
                best = min(best, time.perf_counter() - t0)
            row[label] = best
        if "pure" in row and "compiled" in row:
            row["speedup"] = row["pure"] / row["compiled"]
            row["answers_match"] = answers["pure"] == answers["compiled"]
        rows.append(row)
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rows = run(args.repeat)
    if args.json:
        print(json.dumps(rows, indent=1, sort_keys=True))
        return 0
    if _core is None:
        print("compiled backend unavailable; timing the pure backend only")
    for row in rows:
        line = f"{row['workload']:38s}"
        if "pure" in row:
            line += f"  pure {row['pure'] * 1e3:9.2f} ms"
        if "compiled" in row:
            line += f"  compiled {row['compiled'] * 1e3:9.2f} ms"
        if "speedup" in row:
            line += f"  x{row['speedup']:.0f}"
            if not row["answers_match"]:
                line += "  ANSWERS DIFFER"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
