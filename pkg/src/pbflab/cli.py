"""Command-line interface.

Subcommands: measures, adeg, symmetric, slice, complete, admissible,
pf-reduce, pf-solve, verify.  All subcommands accept --json for a
machine-readable report; identical seeds and configuration produce
byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from pbflab import completion, formats, measures, perturbation, polynomials, slices, symmetric, verify
from pbflab.boolfn import UNDEF


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str))
    else:
        for line in text_lines:
            print(line)


def _cmd_measures(args) -> int:
    f = formats.load_pbf(args.pbf)
    rep = measures.measure_report(
        f,
        undef_budget=args.exact_threshold_undefined,
        with_fractional=args.fractional,
    )
    d = rep.to_dict()
    lines = [f"n={rep.n}  domain={rep.domain_size}  undefined={rep.undefined_count}"]
    lines += [
        f"s={rep.s}  s_perp={rep.s_perp}  bs={rep.bs}  bs_perp={rep.bs_perp}",
        f"cert(strict) 0/1: {rep.cert0_strict}/{rep.cert1_strict}   "
        f"cert(promise) 0/1: {rep.cert0_promise}/{rep.cert1_promise}",
        f"C={rep.cert}  C_perp={rep.cert_perp}",
        f"cbs={rep.cbs} (exact={rep.cbs_exact})  ccrit={rep.ccrit} (exact={rep.ccrit_exact})",
        f"D={rep.depth}",
    ]
    if args.fractional:
        lines.append(f"FC={rep.fc:.6f}  fbs={rep.fbs:.6f}")
    _emit(args, d, lines)
    return 0


def _cmd_adeg(args) -> int:
    f = formats.load_pbf(args.pbf)
    d, witness = polynomials.approx_degree_witness(f, args.epsilon)
    exact = polynomials.exact_degree(f)
    payload = {"adeg": d, "epsilon": args.epsilon, "exact_degree": exact}
    lines = [f"approximate degree (eps={args.epsilon:g}): {d}", f"exact degree: {exact}"]
    if args.out_poly:
        formats.save_poly(witness, args.out_poly)
        lines.append(f"witness written to {args.out_poly}")
        payload["witness"] = args.out_poly
    _emit(args, payload, lines)
    return 0


def _parse_profile(spec: str, n: int) -> symmetric.WeightProfile:
    mapping = {}
    for part in spec.split(","):
        w, _, label = part.partition(":")
        if label not in ("0", "1", "*"):
            raise SystemExit(f"invalid profile label {label!r}")
        if label != "*":
            mapping[int(w)] = int(label)
    return symmetric.WeightProfile.from_map(n, mapping)


def _cmd_symmetric(args) -> int:
    profile = _parse_profile(args.profile, args.n)
    g = symmetric.gap(profile)
    row = symmetric.regime_report(profile)
    payload = dict(row)
    lines = [
        f"n={args.n}  gap={g}",
        f"deterministic formula: {symmetric.exact_deterministic(profile)}",
        f"regime: {row['regime']}",
    ]
    if g is not None:
        payload["adeg_lower_bound"] = symmetric.adeg_lower_bound(profile)
        lines.append(f"adeg lower bound: {payload['adeg_lower_bound']:.4f}")
    if args.verify_d:
        tree = measures.deterministic_complexity(profile.to_function())
        payload["tree_search_depth"] = tree
        payload["formula_matches"] = tree == symmetric.exact_deterministic(profile)
        lines.append(f"tree search depth: {tree} (match={payload['formula_matches']})")
    if args.montecarlo:
        rng = np.random.default_rng(args.seed)
        errors = 0
        f = profile.to_function()
        dom = list(f.domain())
        for _ in range(args.montecarlo):
            x = int(dom[rng.integers(0, len(dom))])
            out, _ = symmetric.sampling_classifier(profile, x, 0.05, rng)
            errors += out != f.evaluate(x)
        payload["montecarlo"] = {"trials": args.montecarlo, "errors": errors}
        lines.append(f"classifier errors: {errors}/{args.montecarlo}")
    _emit(args, payload, lines)
    return 0


def _cmd_slice(args) -> int:
    f = formats.load_pbf(args.pbf)
    k = slices.slice_index(f)
    bound = slices.slice_query_bound(f)
    payload = {"n": f.n, "k": k, "bound": bound}
    lines = [f"slice k={k} of n={f.n}; query bound {bound:g}"]
    if args.verify_bound:
        worst = 0
        ok = True
        for x in f.domain():
            out, used = slices.run_slice_algorithm(f, x)
            worst = max(worst, used)
            ok &= out == f.evaluate(x)
        payload.update({"worst_queries": worst, "all_correct": ok})
        lines.append(f"replay on all {f.domain_size} slice points: correct={ok}, worst queries={worst}")
        if not ok or worst > bound:
            _emit(args, payload, lines)
            return 1
    _emit(args, payload, lines)
    return 0


def _cmd_complete(args) -> int:
    f = formats.load_pbf(args.pbf)
    value, witness, exact = completion.completion_complexity(f, args.measure, args.budget)
    payload = {
        "measure": args.measure,
        "value": value,
        "exact": exact,
        "witness_table": formats.serialize_pbf(witness),
    }
    lines = [
        f"completion complexity of {args.measure}: {value} (exact={exact})",
        f"witness: {formats.serialize_pbf(witness).strip()}",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_admissible(args) -> int:
    f = formats.load_pbf(args.pbf)
    p = formats.load_poly(args.poly)
    rep = completion.admissibility(f, p, args.c, bias=args.bias)
    payload = {
        "degree": rep.degree,
        "covering_radius": rep.covering,
        "eta": rep.eta,
        "edge_lipschitz": rep.edge_lipschitz,
        "influence_sparsity_bound": rep.influence_sparsity_bound,
        "biased_bound": rep.biased_bound,
        "biased_threshold": rep.biased_threshold,
        "min_offdomain_abs": rep.min_offdomain_abs,
        "floor": rep.floor,
        "criteria": rep.criteria,
        "implication_ok": rep.implication_ok,
        "degree_bound_claim": rep.degree_bound_claim,
    }
    lines = [
        f"deg(p)={rep.degree}  r_C={rep.covering}  eta={rep.eta}",
        f"edge Lipschitz: {rep.edge_lipschitz:.6g}",
        f"influence-sparsity bound: {rep.influence_sparsity_bound:.6g}",
        f"min off-domain |p|: {rep.min_offdomain_abs:.6g} (floor {rep.floor:.6g})",
        f"criteria: {rep.criteria}",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_pf_reduce(args) -> int:
    cnf = formats.load_dimacs(args.cnf)
    inst = perturbation.reduce_lma_to_pf(perturbation.reduce_3sat_to_lma(cnf))
    formats.save_pf_instance(inst, args.out)
    payload = {"out": args.out, "arity": inst.t, "perturbations": inst.num_perturbations}
    _emit(args, payload, [f"instance with t={inst.t}, n={inst.num_perturbations} written to {args.out}"])
    return 0


def _cmd_pf_solve(args) -> int:
    inst = formats.load_pf_instance(args.instance)
    decision, delta = perturbation.pf_solve_reduced(
        inst, origin=args.origin, effort=args.effort, seed=args.seed
    )
    payload = {"decision": decision}
    lines = [f"decision: {decision}"]
    if delta is not None:
        payload["delta"] = [float(v) for v in delta]
        lines.append("delta: " + " ".join(f"{v:g}" for v in delta))
    _emit(args, payload, lines)
    return 0 if decision != "UNKNOWN" else 2


def _cmd_verify(args) -> int:
    report = verify.run_suite(
        args.suite,
        instances=args.instances,
        seed=args.seed,
        jobs=args.jobs,
        artifact_dir=args.artifact_dir,
        n_max=args.n,
        budget=args.exact_threshold_undefined,
        replays=args.replays or None,
        adeg=args.adeg or None,
    )
    if args.json:
        print(verify.report_to_json(report), end="")
    else:
        print(
            f"suite {report['suite']}: {report['count']} instances, "
            f"{'PASS' if report['pass'] else 'FAIL'}"
        )
        for inst in report["instances"]:
            if not inst["pass"]:
                bad = [k for k, v in inst["verdicts"].items() if not v]
                print(f"  instance {inst['id']} failed: {bad} params={inst['params']}")
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pbflab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="emit JSON")
        return p

    p = add("measures", _cmd_measures, help="all measures of a .pbf function")
    p.add_argument("pbf")
    p.add_argument("--exact-threshold-undefined", type=int, default=measures.DEFAULT_UNDEF_BUDGET)
    p.add_argument("--fractional", action="store_true", help="include FC/fbs LPs")

    p = add("adeg", _cmd_adeg, help="approximate degree by LP search")
    p.add_argument("pbf")
    p.add_argument("--epsilon", type=float, default=1.0 / 3.0)
    p.add_argument("--out-poly", help="write the witness polynomial")

    p = add("symmetric", _cmd_symmetric, help="gap analysis of a weight profile")
    p.add_argument("--profile", required=True, help='e.g. "0:0,2:1,4:0"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify-d", action="store_true")
    p.add_argument("--montecarlo", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = add("slice", _cmd_slice, help="slice-promise analysis")
    p.add_argument("pbf")
    p.add_argument("--verify-bound", action="store_true")

    p = add("complete", _cmd_complete, help="completion complexity")
    p.add_argument("pbf")
    p.add_argument("--measure", choices=completion.COMPLETION_MEASURES, default="D")
    p.add_argument("--budget", type=int, default=completion.DEFAULT_BUDGET)

    p = add("admissible", _cmd_admissible, help="smoothness criteria for sign boosting")
    p.add_argument("pbf")
    p.add_argument("poly")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--bias", type=float, default=None)

    p = add("pf-reduce", _cmd_pf_reduce, help="3-CNF to perturbation instance")
    p.add_argument("cnf")
    p.add_argument("--out", required=True)

    p = add("pf-solve", _cmd_pf_solve, help="decide a perturbation instance")
    p.add_argument("instance")
    p.add_argument("--origin", choices=("sat-reduced", "general"), default=None)
    p.add_argument("--effort", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", _cmd_verify, help="run a verification suite")
    p.add_argument("--suite", required=True, help=f"one of {', '.join(verify.SUITE_NAMES)}")
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--n", type=int, default=None, help="maximum arity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--exact-threshold-undefined", type=int, default=None)
    p.add_argument("--replays", action="store_true")
    p.add_argument("--adeg", action="store_true")
    p.add_argument("--artifact-dir", default=None, help="replay files for failures")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
