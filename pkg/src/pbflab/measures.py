"""Combinatorial query-complexity measures of partial Boolean functions.

Covers sensitivity and block sensitivity (standard and promise-aware),
strict and promise certificates, exact decision-tree depth, critical block
sensitivity and critical certificate over completions, fractional
certificate/block-sensitivity LPs, and replayable adaptive query algorithms
whose query counts realize the certificate-times-block-sensitivity bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from pbflab import kernels, lp
from pbflab.boolfn import ONE, UNDEF, ZERO, PartialFunction, point_to_bits

#: Completions are enumerated exhaustively only up to this many undefined points.
DEFAULT_UNDEF_BUDGET = 16

#: Exact decision-tree search is refused above this arity.
DEFAULT_EXACT_ARITY_CAP = 14


class ExactComputationRefused(ValueError):
    """Raised when an exhaustive computation would exceed the configured cap."""

    def __init__(self, what: str, n: int, cap: int):
        super().__init__(
            f"exact {what} refused for arity {n}: above the exhaustive cap {cap}"
        )
        self.cap = cap


def _require_domain_point(f: PartialFunction, x: int) -> int:
    v = f.evaluate(x)
    if v == UNDEF:
        raise ValueError(f"point {point_to_bits(x, f.n)} is outside the domain")
    return v


def sensitivity(f: PartialFunction, x: int, promise: bool = False) -> int:
    """Number of single-coordinate flips reaching the opposite label
    (promise variant: the opposite label or an undefined point)."""
    v = _require_domain_point(f, x)
    count = 0
    for i in range(f.n):
        t = f.table[x ^ (1 << i)]
        if t == 1 - v or (promise and t == UNDEF):
            count += 1
    return count


def block_sensitivity(f: PartialFunction, x: int, promise: bool = False) -> int:
    _require_domain_point(f, x)
    return kernels.bs_at(f.table, f.n, x, promise)


def certificate(f: PartialFunction, x: int, *, strict: bool) -> int:
    """Smallest certificate size at x.

    strict=True demands that every consistent point carries the same label;
    strict=False tolerates undefined consistent points.
    """
    _require_domain_point(f, x)
    return kernels.cert_at(f.table, f.n, x, strict)


def _max_over(values) -> int:
    return max(values, default=0)


@lru_cache(maxsize=4096)
def sensitivity_measure(f: PartialFunction, promise: bool = False) -> int:
    return _max_over(sensitivity(f, x, promise) for x in f.domain())


@lru_cache(maxsize=4096)
def block_sensitivity_measure(f: PartialFunction, promise: bool = False) -> int:
    return _max_over(kernels.bs_at(f.table, f.n, x, promise) for x in f.domain())


@lru_cache(maxsize=4096)
def certificate_side_measure(f: PartialFunction, b: int, *, strict: bool) -> int:
    """Max over b-labeled domain points of the smallest certificate."""
    return _max_over(
        kernels.cert_at(f.table, f.n, x, strict)
        for x in f.domain()
        if f.table[x] == b
    )


def deterministic_complexity(
    f: PartialFunction, *, arity_cap: int = DEFAULT_EXACT_ARITY_CAP
) -> int:
    """Depth of the shallowest decision tree correct on the whole domain;
    off-domain outputs are unconstrained."""
    if f.n > arity_cap:
        raise ExactComputationRefused("decision-tree depth", f.n, arity_cap)
    return kernels.decision_depth(f.table, f.n, f.n)


def _depth_capped(table: bytes, n: int, ub: int) -> int:
    """min(D, ub+1); used for branch-and-bound over completions."""
    return kernels.decision_depth(table, n, ub)


@lru_cache(maxsize=512)
def _critical_data(f: PartialFunction, budget: int):
    """(cbs, cbs_exact, ccrit, ccrit witness) with exhaustive search only when
    the number of undefined points is within budget."""
    u = f.undefined_count
    if u > budget:
        return block_sensitivity_measure(f, promise=True), False, None, None
    cbs, _ = kernels.cbs_exact(f.table, f.n)
    ccrit, witness = kernels.ccrit_exact(f.table, f.n, cbs)
    return cbs, True, ccrit, PartialFunction(f.n, witness)


def critical_block_sensitivity(
    f: PartialFunction, budget: int = DEFAULT_UNDEF_BUDGET
) -> tuple[int, bool]:
    """Minimum over completions of the maximum block sensitivity on the
    original domain.  Above budget, returns the sandwich upper bound
    bs_perp(f) with exact=False."""
    cbs, exact, _, _ = _critical_data(f, budget)
    return cbs, exact


def critical_certificate(
    f: PartialFunction, budget: int = DEFAULT_UNDEF_BUDGET
) -> tuple[int, bool]:
    """Among completions realizing the critical block sensitivity, the least
    possible maximum certificate complexity on the domain."""
    _, exact, ccrit, _ = _critical_data(f, budget)
    if not exact:
        raise ValueError(
            "critical certificate unavailable: critical block sensitivity "
            f"was not computed exactly (undefined points exceed budget {budget})"
        )
    return ccrit, True


def critical_witness(
    f: PartialFunction, budget: int = DEFAULT_UNDEF_BUDGET
) -> PartialFunction:
    """A completion realizing both cbs(f) and the critical certificate."""
    _, exact, _, witness = _critical_data(f, budget)
    if not exact:
        raise ValueError("critical witness unavailable above the exact budget")
    return witness


# ---------------------------------------------------------------------------
# fractional certificate / fractional block sensitivity (an LP dual pair)


def _conflicting(f: PartialFunction, x: int) -> list[int]:
    v = f.table[x]
    return [y for y in f.domain() if f.table[y] == 1 - v]


def fractional_certificate(f: PartialFunction, x: int) -> float:
    """LP relaxation of the certificate at x: minimize total weight subject to
    unit coverage of every conflicting domain point."""
    _require_domain_point(f, x)
    conflicts = _conflicting(f, x)
    if not conflicts:
        return 0.0
    n = f.n
    rows = []
    for y in conflicts:
        d = x ^ y
        rows.append([-1.0 if (d >> i) & 1 else 0.0 for i in range(n)])
    res = lp.solve(
        c=np.ones(n),
        a_ub=np.array(rows),
        b_ub=-np.ones(len(rows)),
        bounds=(0, None),
    )
    if not res.feasible:  # pragma: no cover - always feasible
        raise RuntimeError("fractional certificate LP reported infeasible")
    return res.value


def fractional_block_sensitivity(f: PartialFunction, x: int) -> float:
    """Dual packing LP: maximize total mass on conflicting points subject to
    per-coordinate load at most one."""
    _require_domain_point(f, x)
    conflicts = _conflicting(f, x)
    if not conflicts:
        return 0.0
    n = f.n
    cols = np.zeros((n, len(conflicts)))
    for j, y in enumerate(conflicts):
        d = x ^ y
        for i in range(n):
            if (d >> i) & 1:
                cols[i, j] = 1.0
    res = lp.solve(
        c=-np.ones(len(conflicts)),
        a_ub=cols,
        b_ub=np.ones(n),
        bounds=(0, None),
    )
    if not res.feasible:  # pragma: no cover
        raise RuntimeError("fractional block sensitivity LP reported infeasible")
    return -res.value


# ---------------------------------------------------------------------------
# the measure report


@dataclass
class MeasureReport:
    n: int
    domain_size: int
    undefined_count: int
    s: int
    s_perp: int
    bs: int
    bs_perp: int
    cert0_strict: int
    cert1_strict: int
    cert0_promise: int
    cert1_promise: int
    cert: int
    cert_perp: int
    cbs: int
    cbs_exact: bool
    ccrit: int | None
    ccrit_exact: bool
    depth: int
    per_point: dict = field(default_factory=dict)
    fc: float | None = None
    fbs: float | None = None

    def to_dict(self) -> dict:
        out = {
            "schema": 1,
            "n": self.n,
            "domain_size": self.domain_size,
            "undefined_count": self.undefined_count,
            "s": self.s,
            "s_perp": self.s_perp,
            "bs": self.bs,
            "bs_perp": self.bs_perp,
            "cert0_strict": self.cert0_strict,
            "cert1_strict": self.cert1_strict,
            "cert0_promise": self.cert0_promise,
            "cert1_promise": self.cert1_promise,
            "cert": self.cert,
            "cert_perp": self.cert_perp,
            "cbs": self.cbs,
            "cbs_exact": self.cbs_exact,
            "ccrit": self.ccrit,
            "ccrit_exact": self.ccrit_exact,
            "depth": self.depth,
            "per_point": self.per_point,
        }
        if self.fc is not None:
            out["fc"] = self.fc
            out["fbs"] = self.fbs
        return out


def measure_report(
    f: PartialFunction,
    *,
    undef_budget: int = DEFAULT_UNDEF_BUDGET,
    arity_cap: int = DEFAULT_EXACT_ARITY_CAP,
    with_fractional: bool = False,
    per_point: bool = True,
) -> MeasureReport:
    """Compute every measure of one function, with per-point breakdowns."""
    tbl, n = f.table, f.n
    points = {}
    s = s_perp = bs = bs_perp = 0
    cert_s = [0, 0]
    cert_p = [0, 0]
    fc_max = fbs_max = 0.0
    for x in f.domain():
        v = tbl[x]
        px = {
            "value": v,
            "s": sensitivity(f, x, False),
            "s_perp": sensitivity(f, x, True),
            "bs": kernels.bs_at(tbl, n, x, False),
            "bs_perp": kernels.bs_at(tbl, n, x, True),
            "cert_strict": kernels.cert_at(tbl, n, x, True),
            "cert_promise": kernels.cert_at(tbl, n, x, False),
        }
        if with_fractional:
            px["fc"] = fractional_certificate(f, x)
            px["fbs"] = fractional_block_sensitivity(f, x)
            fc_max = max(fc_max, px["fc"])
            fbs_max = max(fbs_max, px["fbs"])
        s = max(s, px["s"])
        s_perp = max(s_perp, px["s_perp"])
        bs = max(bs, px["bs"])
        bs_perp = max(bs_perp, px["bs_perp"])
        cert_s[v] = max(cert_s[v], px["cert_strict"])
        cert_p[v] = max(cert_p[v], px["cert_promise"])
        if per_point:
            points[point_to_bits(x, n)] = px
    cbs, cbs_exact, ccrit, _ = _critical_data(f, undef_budget)
    depth = deterministic_complexity(f, arity_cap=arity_cap)
    return MeasureReport(
        n=n,
        domain_size=f.domain_size,
        undefined_count=f.undefined_count,
        s=s,
        s_perp=s_perp,
        bs=bs,
        bs_perp=bs_perp,
        cert0_strict=cert_s[0],
        cert1_strict=cert_s[1],
        cert0_promise=cert_p[0],
        cert1_promise=cert_p[1],
        cert=max(cert_p),
        cert_perp=max(cert_s),
        cbs=cbs,
        cbs_exact=cbs_exact,
        ccrit=ccrit,
        ccrit_exact=ccrit is not None,
        depth=depth,
        per_point=points,
        fc=fc_max if with_fractional else None,
        fbs=fbs_max if with_fractional else None,
    )


def speedup_requirements_report(
    f: PartialFunction, *, undef_budget: int = DEFAULT_UNDEF_BUDGET
) -> dict:
    """Condition ratios behind the no-speedup theorem plus the concrete
    per-instance inequality chains.

    The chains are asserted exactly; the ratios are reported without any
    asymptotic claim.
    """
    r = measure_report(f, undef_budget=undef_budget, per_point=False)

    def ratio(a, b):
        if b in (0, None) or a is None:
            return None
        return a / b

    min_strict = min(r.cert0_strict, r.cert1_strict)
    conditions = {
        "cbs_vs_bs_perp": {"cbs": r.cbs, "bs_perp": r.bs_perp, "ratio": ratio(r.bs_perp, r.cbs)},
        "cbs_vs_ccrit": {"cbs": r.cbs, "ccrit": r.ccrit, "ratio": ratio(r.ccrit, r.cbs)},
        "min_strict_cert_vs_cbs": {
            "min_strict_cert": min_strict,
            "cbs": r.cbs,
            "ratio": ratio(min_strict, r.cbs),
        },
        "cert_collapse": {
            "cert": r.cert,
            "cert_perp": r.cert_perp,
            "ratio": ratio(r.cert_perp, r.cert),
        },
        "bs_vs_s_perp": {"bs": r.bs, "s_perp": r.s_perp, "ratio": ratio(r.bs, r.s_perp)},
    }
    constant = f.is_constant_on_domain()
    chains = {
        "d_le_cert_times_bs_perp": r.depth <= r.cert * r.bs_perp or constant,
        "cert_le_bs_times_s_perp": r.cert <= r.bs * r.s_perp or constant,
        "le_bs_perp_cubed": r.depth <= r.bs_perp**3 or constant,
        "d_le_cert_times_cert_perp": r.depth <= r.cert * r.cert_perp or constant,
        "d_zero_if_constant": (not constant) or r.depth == 0,
    }
    return {
        "measures": r.to_dict(),
        "conditions": conditions,
        "chains": chains,
        "all_chains_hold": all(chains.values()),
    }


# ---------------------------------------------------------------------------
# adaptive algorithm replays


@lru_cache(maxsize=4096)
def _anchor_cert_sizes(
    table: bytes, anchor_table: bytes, n: int, label: int, strict: bool
) -> dict:
    """Certificate size on `table` at every `label`-point of `anchor_table`."""
    return {
        z: kernels.cert_at(table, n, z, strict)
        for z in range(1 << n)
        if anchor_table[z] == label
    }


class _Oracle:
    """Query counter around a hidden input."""

    __slots__ = ("x", "queried")

    def __init__(self, x: int):
        self.x = x
        self.queried = 0  # mask

    def query(self, i: int) -> int:
        self.queried |= 1 << i
        return (self.x >> i) & 1

    @property
    def count(self) -> int:
        return self.queried.bit_count()


def _census_output(f: PartialFunction, fixed: int, vals: int) -> int:
    """The common label of all domain points consistent with the queried
    assignment (exists by the correctness argument of each round bound)."""
    labels = kernels.subcube_labels(f.table, f.n, fixed, vals)
    has0, has1 = bool(labels & 1), bool(labels & 2)
    if has0 and has1:
        raise RuntimeError("round bound exhausted with conflicting labels; bug")
    if has1:
        return ONE
    if has0:
        return ZERO
    raise RuntimeError("no consistent domain point; oracle contract violated")


def _run_certificate_rounds(
    f: PartialFunction,
    oracle: _Oracle,
    *,
    side: int,
    strict: bool,
    rounds: int,
    cert_table: bytes | None = None,
) -> int:
    """The shared round structure: repeatedly pick the lexicographically
    smallest minimum-size side-certificate consistent with what was queried,
    query it, and conclude by a hard-coded output.

    ``cert_table`` switches certificate validity to a completion while
    anchors stay on the original domain (the critical variant).
    """
    n = f.n
    table = f.table if cert_table is None else cert_table
    anchors = None if cert_table is None else f.table
    sizes = _anchor_cert_sizes(table, f.table, n, side, strict)
    anchor_pts = sorted(sizes)
    fixed = vals = 0
    for _ in range(rounds):
        live = [z for z in anchor_pts if (z & fixed) == (vals & fixed)]
        if not live:
            return 1 - side
        k = min(sizes[z] for z in live)
        cert = kernels.lex_min_certificate(
            table, n, fixed, vals, side, strict, anchors, size=k
        )
        assert cert is not None
        support, cvals = cert
        for i in range(n):
            bit = 1 << i
            if support & bit and not fixed & bit:
                b = oracle.query(i)
                fixed |= bit
                if b:
                    vals |= bit
        if (vals & support) == cvals:
            return side
    return _census_output(f, fixed, vals)


def run_cert_bs_algorithm(
    f: PartialFunction,
    x: int,
    variant: str,
    *,
    undef_budget: int = DEFAULT_UNDEF_BUDGET,
) -> tuple[int, int]:
    """Replay one of the adaptive certificate/block-sensitivity procedures on
    a hidden domain input.  Returns (output bit, queries used).

    Variants: ``L3.2-1`` (promise certificates, promise-bs rounds),
    ``L3.2-2`` (strict certificates, bs rounds), ``L3.2-3`` (certificates of
    a critical completion, cbs rounds), ``L3.3`` (two-certificate loop).
    """
    if f.evaluate(x) == UNDEF:
        raise ValueError("hidden input must satisfy the promise")
    oracle = _Oracle(x)

    if variant == "L3.2-1":
        side = min((0, 1), key=lambda b: certificate_side_measure(f, b, strict=False))
        rounds = block_sensitivity_measure(f, promise=True)
        out = _run_certificate_rounds(f, oracle, side=side, strict=False, rounds=rounds)
    elif variant == "L3.2-2":
        side = min((0, 1), key=lambda b: certificate_side_measure(f, b, strict=True))
        rounds = block_sensitivity_measure(f, promise=False)
        out = _run_certificate_rounds(f, oracle, side=side, strict=True, rounds=rounds)
    elif variant == "L3.2-3":
        cbs, exact = critical_block_sensitivity(f, undef_budget)
        if not exact:
            raise ValueError("critical variant requires an exact cbs computation")
        witness = critical_witness(f, undef_budget)
        out = _run_certificate_rounds(
            f, oracle, side=1, strict=True, rounds=cbs, cert_table=witness.table
        )
    elif variant == "L3.3":
        out = _run_two_certificate_algorithm(f, oracle)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return out, oracle.count


def _run_two_certificate_algorithm(f: PartialFunction, oracle: _Oracle) -> int:
    """Certificate-vs-certificate loop: query strict a-certificates for at
    most (promise certificate of the other side) rounds.

    After the full loop, every domain point consistent with the queried
    assignment carries the same label (each round burns a fresh coordinate
    of any surviving opposite certificate), so the run finishes with the
    hard-coded census output.
    """
    n = f.n
    prod = {}
    for a in (0, 1):
        prod[a] = certificate_side_measure(f, a, strict=True) * certificate_side_measure(
            f, 1 - a, strict=False
        )
    a = min((1, 0), key=lambda side: prod[side])
    rounds = certificate_side_measure(f, 1 - a, strict=False)
    sizes = _anchor_cert_sizes(f.table, f.table, n, a, True)
    anchor_pts = sorted(sizes)
    fixed = vals = 0
    for _ in range(rounds):
        labels = kernels.subcube_labels(f.table, n, fixed, vals)
        if not labels & (1 << a):
            # the queried assignment certifies the other side on the promise
            return 1 - a
        live = [z for z in anchor_pts if (z & fixed) == (vals & fixed)]
        k = min(sizes[z] for z in live)
        cert = kernels.lex_min_certificate(f.table, n, fixed, vals, a, True, size=k)
        assert cert is not None
        support, cvals = cert
        for i in range(n):
            bit = 1 << i
            if support & bit and not fixed & bit:
                b = oracle.query(i)
                fixed |= bit
                if b:
                    vals |= bit
        if (vals & support) == cvals:
            return a
    return _census_output(f, fixed, vals)


def query_bound(f: PartialFunction, variant: str, *, undef_budget: int = DEFAULT_UNDEF_BUDGET) -> int:
    """The stated worst-case query bound for one replay variant."""
    if variant == "L3.2-1":
        return min(
            certificate_side_measure(f, 0, strict=False),
            certificate_side_measure(f, 1, strict=False),
        ) * block_sensitivity_measure(f, promise=True)
    if variant == "L3.2-2":
        return min(
            certificate_side_measure(f, 0, strict=True),
            certificate_side_measure(f, 1, strict=True),
        ) * block_sensitivity_measure(f, promise=False)
    if variant == "L3.2-3":
        cbs, exact = critical_block_sensitivity(f, undef_budget)
        if not exact:
            raise ValueError("critical variant requires an exact cbs computation")
        ccrit, _ = critical_certificate(f, undef_budget)
        return ccrit * cbs
    if variant == "L3.3":
        c0s = certificate_side_measure(f, 0, strict=True)
        c1s = certificate_side_measure(f, 1, strict=True)
        c0p = certificate_side_measure(f, 0, strict=False)
        c1p = certificate_side_measure(f, 1, strict=False)
        return min(c1s * c0p, c0s * c1p)
    raise ValueError(f"unknown variant {variant!r}")


def appendix_ratio(f: PartialFunction, adeg: int) -> float:
    """D(f) / (adeg^2 * ln^2(2 + |Dom|)); reported, never asserted."""
    d = deterministic_complexity(f)
    denom = max(adeg, 1) ** 2 * math.log(2 + f.domain_size) ** 2
    return d / denom
