"""Batch verification suites.

Each suite draws seeded random instances, checks the relevant exact
formulas, inequality chains, algorithm replays or reductions, and returns a
JSON-ready report.  Reports are deterministic functions of (suite, config):
instances are keyed by index, seeded independently, and sorted in the
output, so worker-pool execution cannot change bytes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from pbflab import completion, generators, measures, perturbation, polynomials, slices, symmetric
from pbflab.boolfn import UNDEF, PartialFunction
from pbflab.formats import serialize_dimacs, serialize_pbf

SUITE_NAMES = (
    "s3-inequalities",
    "s4-symmetric",
    "s4-slice",
    "s5-completion",
    "s5-admissibility",
    "s5-pf",
    "appendix-ratios",
)

_ALIASES = {"s3": "s3-inequalities", "s4": "s4-symmetric", "s5": "s5-completion"}

_REPLAY_VARIANTS = ("L3.2-1", "L3.2-2", "L3.2-3", "L3.3")


def _verdict_pass(verdicts: dict) -> bool:
    return all(bool(v) for v in verdicts.values())


# ---------------------------------------------------------------------------
# s3: inequality chains and the adaptive-procedure replays


def _instance_s3(index: int, cfg: dict) -> dict:
    rng = generators.instance_rng(cfg["seed"], index)
    n_lo, n_hi = cfg["n_min"], cfg["n_max"]
    n = n_lo + index % (n_hi - n_lo + 1)
    if cfg["replays"]:
        undef_prob = (0.0, 0.03, 0.05)[index % 3]
    else:
        undef_prob = (0.0, 0.1, 0.25, 0.4)[index % 4]
    f = generators.random_partial_function(n, rng, undef_prob)
    rep = measures.measure_report(f, undef_budget=cfg["budget"])
    v: dict = {}
    chains_pp = True
    for px in rep.per_point.values():
        chains_pp &= px["s_perp"] <= px["bs_perp"] <= px["cert_strict"]
        chains_pp &= px["s"] <= px["bs"] <= px["cert_promise"]
        chains_pp &= px["s"] <= px["s_perp"] and px["bs"] <= px["bs_perp"]
    v["observation_chains"] = chains_pp
    constant = f.is_constant_on_domain()
    v["lemma31_cert_le_bs_sperp"] = rep.cert <= rep.bs * rep.s_perp or constant
    v["lemma32_promise"] = (
        rep.depth <= min(rep.cert0_promise, rep.cert1_promise) * rep.bs_perp or constant
    )
    v["lemma32_strict"] = (
        rep.depth <= min(rep.cert0_strict, rep.cert1_strict) * rep.bs or constant
    )
    if rep.ccrit_exact:
        v["lemma32_critical"] = rep.depth <= rep.ccrit * rep.cbs or constant
    v["lemma33_two_certificates"] = (
        rep.depth
        <= min(
            rep.cert1_strict * rep.cert0_promise,
            rep.cert0_strict * rep.cert1_promise,
        )
        or constant
    )
    if rep.cbs_exact:
        v["lemma34_sandwich"] = rep.bs <= rep.cbs <= rep.bs_perp
    v["bs_perp_cubed"] = rep.depth <= rep.bs_perp**3 or constant
    v["constant_depth_zero"] = (not constant) or rep.depth == 0
    if f.is_total:
        v["total_collapse"] = (
            rep.s == rep.s_perp
            and rep.bs == rep.bs_perp == rep.cbs
            and rep.cert == rep.cert_perp == rep.ccrit
        )
    if cfg["replays"]:
        for variant in _REPLAY_VARIANTS:
            if variant == "L3.2-3" and not rep.ccrit_exact:
                continue
            bound = measures.query_bound(f, variant, undef_budget=cfg["budget"])
            ok = True
            worst = 0
            for x in f.domain():
                out, used = measures.run_cert_bs_algorithm(
                    f, x, variant, undef_budget=cfg["budget"]
                )
                worst = max(worst, used)
                if out != f.evaluate(x) or used > bound:
                    ok = False
                    break
            v[f"replay_{variant}"] = ok
            v[f"replay_{variant}_worst_queries"] = worst <= bound
    return {
        "id": index,
        "params": {"n": n, "undef_prob": undef_prob, "undefined": f.undefined_count},
        "verdicts": v,
        "pass": _verdict_pass(v),
        "pbf": serialize_pbf(f),
    }


# ---------------------------------------------------------------------------
# s4-symmetric: exact formula, gap cross-check, degree lower bound


def _instance_s4_symmetric(index: int, cfg: dict) -> dict:
    rng = generators.instance_rng(cfg["seed"], index)
    n_lo, n_hi = cfg["n_min"], cfg["n_max"]
    n = n_lo + index % (n_hi - n_lo + 1)
    profile = generators.random_profile(n, rng)
    f = profile.to_function()
    g = symmetric.gap(profile)
    v: dict = {}
    v["formula_matches_tree_search"] = (
        measures.deterministic_complexity(f) == symmetric.exact_deterministic(profile)
    )
    if n <= 8:
        pairs = [
            (x, y)
            for x in f.domain()
            for y in f.domain()
            if f.table[x] != f.table[y]
        ]
        brute = min(((x ^ y).bit_count() for x, y in pairs), default=None)
        v["gap_is_min_hamming_distance"] = brute == g
    if cfg["adeg"] and g is not None:
        adeg = polynomials.approx_degree(f)
        v["symmetrization_bound"] = adeg >= symmetric.adeg_lower_bound(profile) - 0.5
    if g is not None and index % 5 == 0 and cfg["montecarlo"] > 0:
        failure = 0.2
        errors = 0
        dom_weights = profile.defined_weights()
        for _ in range(cfg["montecarlo"]):
            w = int(rng.choice(dom_weights))
            idx = rng.choice(n, size=w, replace=False)
            x = int(sum(1 << int(i) for i in idx))
            out, _ = symmetric.sampling_classifier(profile, x, failure, rng)
            if out != profile.labels[w]:
                errors += 1
        # binomial slack: 4 sigma above the nominal failure probability
        slack = 4.0 * math.sqrt(failure * (1 - failure) / cfg["montecarlo"])
        v["sampling_classifier"] = errors / cfg["montecarlo"] <= failure + slack
    return {
        "id": index,
        "params": {"n": n, "gap": g},
        "verdicts": v,
        "pass": _verdict_pass(v),
        "pbf": serialize_pbf(f),
    }


# ---------------------------------------------------------------------------
# s4-slice: balanced blocks, the slice replay, and its bound


def _instance_s4_slice(index: int, cfg: dict) -> dict:
    rng = generators.instance_rng(cfg["seed"], index)
    n_lo, n_hi = max(2, cfg["n_min"]), cfg["n_max"]
    n = n_lo + index % (n_hi - n_lo + 1)
    k = int(rng.integers(0, n + 1))
    f = generators.random_slice_function(n, k, rng)
    bound = slices.slice_query_bound(f)
    v: dict = {}
    v["balanced_equals_general_bs"] = all(
        slices.balanced_block_sensitivity(f, x) == measures.block_sensitivity(f, x)
        for x in f.domain()
    )
    correct = True
    worst = 0
    for x in f.domain():
        out, used = slices.run_slice_algorithm(f, x)
        worst = max(worst, used)
        if out != f.evaluate(x):
            correct = False
            break
    v["replay_correct_everywhere"] = correct
    if math.isfinite(bound):
        v["replay_query_bound"] = worst <= bound
        v["depth_within_bound"] = measures.deterministic_complexity(f) <= bound
    return {
        "id": index,
        "params": {"n": n, "k": k, "bound": bound if math.isfinite(bound) else None},
        "verdicts": v,
        "pass": _verdict_pass(v),
        "pbf": serialize_pbf(f),
    }


# ---------------------------------------------------------------------------
# s5-completion: the depth identity, the parity criterion, naive products


def _instance_s5_completion(index: int, cfg: dict) -> dict:
    rng = generators.instance_rng(cfg["seed"], index)
    v: dict = {}
    params: dict = {}
    phases = cfg["phases"]
    f = None
    if "identity" in phases or "parity" in phases:
        while True:
            f = generators.random_partial_function(4, rng, 0.3)
            if f.undefined_count <= 8:
                break
        params["n"] = 4
        params["undefined"] = f.undefined_count
    if "identity" in phases:
        val, witness, exact = completion.completion_complexity(f, "D", prune=False)
        v["depth_identity_exact"] = exact and val == measures.deterministic_complexity(f)
        v["witness_is_completion"] = all(
            witness.table[x] == f.table[x] for x in f.domain()
        )
    if "parity" in phases:
        ok = True
        for g in completion.completions(f):
            deg = polynomials.mobius_coefficients(g).degree
            for d in range(5):
                if completion.exact_degree_completion_check(g, d) != (deg <= d):
                    ok = False
                    break
            if not ok:
                break
        v["parity_iff_moebius"] = ok
    if "naive" in phases:
        n = cfg["n_min"] + index % (cfg["n_max"] - cfg["n_min"] + 1)
        q_size = int(rng.integers(1, min(3, n) + 1))
        while True:
            g_tab = [int(rng.integers(0, 2)) for _ in range(1 << q_size)]
            if any(g_tab):
                break
        dom_table = bytes(g_tab[x & ((1 << q_size) - 1)] for x in range(1 << n))
        total = generators.random_total_function(n, rng)
        f_tab = bytes(
            total.table[x] if dom_table[x] else UNDEF for x in range(1 << n)
        )
        fj = PartialFunction(n, f_tab)
        params.update({"n": n, "junta": q_size, "domain": fj.domain_size})
        p = polynomials.mobius_coefficients(total)
        indicator = polynomials.MultilinearPoly.from_values(
            n, [float(b) for b in dom_table], polynomials.MONOMIAL
        )
        noise = rng.uniform(0.0, 0.15)
        noisy_vals = np.array([float(b) for b in dom_table]) + rng.uniform(
            -noise, noise, size=1 << n
        )
        noisy = polynomials.MultilinearPoly.from_values(
            n, noisy_vals, polynomials.MONOMIAL
        )
        ok = True
        for q_ind in (indicator, noisy):
            for value in (0, 1):
                try:
                    res = completion.naive_indicator_product(fj, p, q_ind, value)
                except ValueError:
                    ok = False
                    break
                if res.max_error > res.eps + res.eps_prime + 1e-9:
                    ok = False
                if res.poly.degree > min(n, res.degree_bound):
                    ok = False
            if not ok:
                break
        v["naive_error_bound"] = ok
    return {
        "id": index,
        "params": params,
        "verdicts": v,
        "pass": _verdict_pass(v),
        "pbf": serialize_pbf(f) if f is not None else None,
    }


# ---------------------------------------------------------------------------
# s5-admissibility: engineered instances and the boosting pipeline


def _instance_s5_admissibility(index: int, cfg: dict) -> dict:
    v: dict = {}
    n = 6
    if index % 2 == 0:
        # smooth low-influence polynomial over an almost-full domain
        rng = generators.instance_rng(cfg["seed"], index)
        hole = int(rng.integers(0, 1 << n))
        table = bytearray([0] * (1 << n))
        table[hole] = UNDEF
        f = PartialFunction(n, bytes(table))
        p = polynomials.MultilinearPoly(
            n, polynomials.FOURIER, {0: 5.0 / 6.0, 0b11: 1.0 / 12.0}
        )
        for c in cfg["exponents"]:
            rep = completion.admissibility(f, p, c, bias=0.5)
            v[f"criteria_hold_c{c}"] = bool(rep.criteria["lipschitz"]) and bool(
                rep.criteria["influence_sparsity"]
            )
            v[f"implication_c{c}"] = rep.implication_ok
        rep = completion.admissibility(f, p, 1.0)
        boosted, sp, natural = completion.boost_natural(p, rep.floor)
        diff = np.max(
            np.abs(
                boosted.values() - np.array([1.0 - 2.0 * t for t in natural.table])
            )
        )
        v["boost_within_third"] = bool(diff <= 1.0 / 3.0 + 1e-9)
        params = {"kind": "engineered", "hole": hole}
    else:
        # gap majority: influence criterion must fail strictly
        table = bytearray([UNDEF] * (1 << n))
        for x in range(1 << n):
            w = x.bit_count()
            if w <= 1:
                table[x] = 0
            elif w >= n - 1:
                table[x] = 1
        f = PartialFunction(n, bytes(table))
        p = polynomials.MultilinearPoly(
            n, polynomials.FOURIER, {1 << i: 1.0 / n for i in range(n)}
        )
        rep = completion.admissibility(f, p, 1.0)
        v["influence_criterion_false"] = rep.criteria["influence_sparsity"] is False
        v["lipschitz_criterion_false"] = rep.criteria["lipschitz"] is False
        params = {"kind": "gap-majority"}
    return {
        "id": index,
        "params": params,
        "verdicts": v,
        "pass": _verdict_pass(v),
        "pbf": serialize_pbf(f),
    }


# ---------------------------------------------------------------------------
# s5-pf: the hardness pipeline against brute-force satisfiability


def _instance_s5_pf(index: int, cfg: dict) -> dict:
    rng = generators.instance_rng(cfg["seed"], index)
    num_vars = int(rng.integers(3, cfg["max_vars"] + 1))
    max_ratio = cfg["max_clauses"] / num_vars
    ratio = rng.uniform(1.0, max(4.8, max_ratio))
    num_clauses = max(1, min(cfg["max_clauses"], round(ratio * num_vars)))
    cnf = generators.random_3cnf(num_vars, num_clauses, rng)
    want = perturbation.sat_brute_force(cnf)
    lma = perturbation.reduce_3sat_to_lma(cnf)
    inst = perturbation.reduce_lma_to_pf(lma)
    decision, delta = perturbation.pf_solve_reduced(inst)
    v: dict = {}
    v["matches_brute_force"] = (decision == "YES") == want
    if delta is not None:
        v["witness_verifies"] = inst.check(delta)
    a = np.array(lma.a, dtype=float)
    b = np.array(lma.b, dtype=float)
    trial = rng.uniform(-1, 1, size=lma.num_vars)
    shifted = inst.shifted_values(trial)
    v["value_table_fidelity"] = bool(
        np.max(np.abs(shifted[: lma.num_rows] - (a @ trial + b))) <= 1e-9
    )
    rescaled = perturbation.pf_rescale(inst, 2.0, 3.0)
    decision2, _ = perturbation.pf_solve_reduced(rescaled)
    v["rescale_preserves_decision"] = decision2 == decision
    functionals = rng.normal(size=(5, 4))
    offsets = rng.normal(size=5)
    vec = perturbation.slab_avoid(functionals, offsets, 0.25, rng)
    v["slab_avoidance"] = bool(np.all(np.abs(functionals @ vec - offsets) > 0.25))
    return {
        "id": index,
        "params": {"vars": num_vars, "clauses": num_clauses, "satisfiable": want},
        "verdicts": v,
        "pass": _verdict_pass(v),
        "cnf": serialize_dimacs(cnf),
    }


# ---------------------------------------------------------------------------
# appendix: sculpting ratio report and LP duality


def _instance_appendix(index: int, cfg: dict) -> dict:
    rng = generators.instance_rng(cfg["seed"], index)
    n = cfg["n_min"] + index % (cfg["n_max"] - cfg["n_min"] + 1)
    f = generators.random_partial_function(n, rng, (0.1, 0.3)[index % 2])
    adeg = polynomials.approx_degree(f)
    ratio = measures.appendix_ratio(f, adeg)
    gap_max = 0.0
    for x in f.domain():
        fc = measures.fractional_certificate(f, x)
        fbs = measures.fractional_block_sensitivity(f, x)
        gap_max = max(gap_max, abs(fc - fbs))
    v = {"lp_duality_gap": gap_max <= 1e-6}
    return {
        "id": index,
        "params": {"n": n, "adeg": adeg, "ratio": ratio, "duality_gap": gap_max},
        "verdicts": v,
        "pass": _verdict_pass(v),
        "pbf": serialize_pbf(f),
    }


# ---------------------------------------------------------------------------
# the orchestrator


_SUITE_IMPL = {
    "s3-inequalities": (_instance_s3, 500),
    "s4-symmetric": (_instance_s4_symmetric, 200),
    "s4-slice": (_instance_s4_slice, 50),
    "s5-completion": (_instance_s5_completion, 20),
    "s5-admissibility": (_instance_s5_admissibility, 8),
    "s5-pf": (_instance_s5_pf, 20),
    "appendix-ratios": (_instance_appendix, 40),
}


def _default_config(suite: str) -> dict:
    cfg = {
        "seed": 0,
        "n_min": 3,
        "n_max": 6,
        "budget": measures.DEFAULT_UNDEF_BUDGET,
        "replays": False,
        "adeg": False,
        "montecarlo": 0,
        "phases": ("identity", "parity", "naive"),
        "exponents": (1.0, 2.0, 3.0),
        "max_vars": 10,
        "max_clauses": 20,
    }
    if suite == "s4-symmetric":
        cfg.update(n_min=4, n_max=10)
    elif suite == "s4-slice":
        cfg.update(n_min=2, n_max=8)
    elif suite == "s5-completion":
        cfg.update(n_min=6, n_max=10)
    elif suite == "appendix-ratios":
        cfg.update(n_min=3, n_max=5)
    return cfg


def _run_instance(args):
    suite, index, cfg = args
    impl, _ = _SUITE_IMPL[suite]
    return impl(index, cfg)


def run_suite(
    suite: str,
    *,
    instances: int | None = None,
    seed: int = 0,
    jobs: int = 1,
    artifact_dir: str | None = None,
    **overrides,
) -> dict:
    """Run one verification suite; returns the JSON-ready report."""
    suite = _ALIASES.get(suite, suite)
    if suite not in _SUITE_IMPL:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITE_NAMES}")
    impl, default_instances = _SUITE_IMPL[suite]
    count = default_instances if instances is None else instances
    cfg = _default_config(suite)
    cfg["seed"] = seed
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in cfg:
            raise ValueError(f"unknown config key {key!r}")
        cfg[key] = value
    tasks = [(suite, i, cfg) for i in range(count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_instance, tasks))
    else:
        results = [_run_instance(t) for t in tasks]
    results.sort(key=lambda r: r["id"])
    failures = [r["id"] for r in results if not r["pass"]]
    if artifact_dir:
        out = Path(artifact_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in results:
            if not r["pass"]:
                if r.get("pbf"):
                    (out / f"replay_{suite}_{r['id']}.pbf").write_text(r["pbf"])
                if r.get("cnf"):
                    (out / f"replay_{suite}_{r['id']}.cnf").write_text(r["cnf"])
                (out / f"replay_{suite}_{r['id']}.json").write_text(
                    json.dumps(r, sort_keys=True, indent=1, default=str)
                )
    for r in results:
        r.pop("pbf", None)
        r.pop("cnf", None)
    return {
        "schema": 1,
        "suite": suite,
        "seed": seed,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in cfg.items()},
        "instances": results,
        "count": count,
        "failures": failures,
        "pass": not failures,
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
