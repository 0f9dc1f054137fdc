"""Completions of partial functions: enumeration, completion complexity,
naive and natural completions, admissibility criteria for sign-boosting,
and the parity test for exact-degree completions."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from pbflab import kernels, measures, polynomials
from pbflab.boolfn import ONE, UNDEF, ZERO, PartialFunction
from pbflab.polynomials import FOURIER, MultilinearPoly, SignPolynomial

COMPLETION_MEASURES = ("D", "deg", "adeg", "C", "bs", "s")

#: LP-backed measures are enumerated over a smaller default budget.
DEFAULT_BUDGET = 16
DEFAULT_ADEG_BUDGET = 12


def completions(f: PartialFunction) -> Iterator[PartialFunction]:
    """All 2**u total extensions, in binary-counter order over the undefined
    points taken ascending (bit j of the counter = value of the j-th one)."""
    und = list(f.undefined_points())
    base = bytearray(f.table)
    for bits in range(1 << len(und)):
        for j, z in enumerate(und):
            base[z] = (bits >> j) & 1
        yield PartialFunction(f.n, bytes(base))


def _total_measure(g: PartialFunction, measure: str) -> int:
    tbl, n = g.table, g.n
    if measure == "D":
        return kernels.decision_depth(tbl, n, n)
    if measure == "deg":
        return polynomials.mobius_coefficients(g).degree
    if measure == "adeg":
        return polynomials.approx_degree(g)
    if measure == "C":
        return max((kernels.cert_at(tbl, n, x, False) for x in range(1 << n)), default=0)
    if measure == "bs":
        return max((kernels.bs_at(tbl, n, x, False) for x in range(1 << n)), default=0)
    if measure == "s":
        return max(
            (measures.sensitivity(g, x, False) for x in range(1 << n)), default=0
        )
    raise ValueError(f"unknown measure {measure!r}")


def completion_complexity(
    f: PartialFunction,
    measure: str,
    budget: int | None = None,
    *,
    prune: bool = True,
) -> tuple[int, PartialFunction, bool]:
    """Minimum of a total-function measure over completions.

    Exhaustive (exact=True) when the number of undefined points is within
    budget; otherwise the best completion found over a truncated enumeration
    is returned with exact=False.  For the decision-tree measure the search
    is branch-and-bound: each candidate is evaluated with the incumbent as a
    depth cap.  ``prune=False`` disables the anytime lower-bound stop (used
    when the enumeration itself is the thing under test).
    """
    if measure not in COMPLETION_MEASURES:
        raise ValueError(f"measure must be one of {COMPLETION_MEASURES}")
    if budget is None:
        budget = DEFAULT_ADEG_BUDGET if measure == "adeg" else DEFAULT_BUDGET
    u = f.undefined_count
    exact = u <= budget
    lower = kernels.decision_depth(f.table, f.n, f.n) if measure == "D" else None
    best = None
    witness = None
    count = 0
    for g in completions(f):
        if measure == "D" and best is not None:
            val = kernels.decision_depth(g.table, g.n, best - 1) if best > 0 else best
            if val >= best:
                val = None
        else:
            val = _total_measure(g, measure)
        if val is not None and (best is None or val < best):
            best, witness = val, g
            if prune and lower is not None and best <= lower:
                break
        count += 1
        if not exact and count >= (1 << budget):
            break
    assert best is not None and witness is not None
    return best, witness, exact


def naive_completion(f: PartialFunction, value: int) -> PartialFunction:
    """Total extension constant equal to ``value`` off the domain."""
    if value not in (ZERO, ONE):
        raise ValueError("off-domain value must be ZERO or ONE")
    table = bytes(value if v == UNDEF else v for v in f.table)
    return PartialFunction(f.n, table)


@dataclass
class NaiveProductResult:
    poly: MultilinearPoly
    eps: float
    eps_prime: float
    max_error: float
    degree_bound: int


def naive_indicator_product(
    f: PartialFunction,
    p: MultilinearPoly,
    q_ind: MultilinearPoly,
    value: int = ZERO,
) -> NaiveProductResult:
    """Combine an approximator of f with an approximator of the domain
    indicator into an approximator of the naive completion.

    ``value=0`` uses p*q; ``value=1`` uses p*q + 1 - q.  The achieved
    pointwise error is checked against eps + eps' and the offending point is
    reported on violation (which would indicate a broken input contract).
    """
    n = f.n
    if p.n != n or q_ind.n != n:
        raise ValueError("arity mismatch")
    pv = p.to_basis(polynomials.MONOMIAL).values()
    qv = q_ind.to_basis(polynomials.MONOMIAL).values()
    dom = np.array([v != UNDEF for v in f.table])
    fv = np.array([0.0 if v == UNDEF else float(v) for v in f.table])
    if not dom.any():
        raise ValueError("empty domain")
    eps = float(np.max(np.abs(pv[dom] - fv[dom])))
    indicator = dom.astype(float)
    eps_prime = float(np.max(np.abs(qv - indicator)))
    if eps >= 1.0:
        worst = int(np.argmax(np.abs(pv - fv) * dom))
        raise ValueError(f"p does not approximate f on the domain (point {worst:#x})")
    rv = pv * qv if value == ZERO else pv * qv + 1.0 - qv
    target = np.where(dom, fv, float(value))
    errors = np.abs(rv - target)
    max_error = float(np.max(errors))
    if max_error > eps + eps_prime + 1e-9:
        worst = int(np.argmax(errors))
        raise ValueError(
            f"product exceeds the eps+eps' bound at point {worst:#x}: "
            f"{max_error:.3g} > {eps + eps_prime:.3g}"
        )
    poly = MultilinearPoly.from_values(n, rv, polynomials.MONOMIAL)
    return NaiveProductResult(poly, eps, eps_prime, max_error, p.degree + q_ind.degree)


def natural_completion(p: MultilinearPoly) -> PartialFunction:
    """Sign completion of a +-1-convention polynomial: label +1 (bit 0) where
    p(x) >= 0, label -1 (bit 1) otherwise."""
    if p.basis != FOURIER:
        raise ValueError("natural completion expects the +-1 (fourier) basis")
    values = p.values()
    table = bytes(ZERO if v >= 0 else ONE for v in values)
    return PartialFunction(p.n, table)


def covering_radius(n: int, points) -> int:
    """Largest distance from any cube point to the set; multi-source BFS."""
    pts = list(points)
    if not pts:
        raise ValueError("covering radius of an empty set")
    size = 1 << n
    dist = [-1] * size
    queue = deque()
    for x in pts:
        dist[x] = 0
        queue.append(x)
    worst = 0
    while queue:
        x = queue.popleft()
        for i in range(n):
            y = x ^ (1 << i)
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                worst = max(worst, dist[y])
                queue.append(y)
    return worst


@dataclass
class AdmissibilityReport:
    n: int
    degree: int
    exponent: float
    covering: int
    eta: float | None
    edge_lipschitz: float
    influence_sparsity_bound: float
    biased_bound: float | None
    biased_threshold: float | None
    min_offdomain_abs: float
    floor: float  # degree**(-exponent)
    criteria: dict
    implication_ok: bool
    degree_bound_claim: int


def admissibility(
    f: PartialFunction,
    p: MultilinearPoly,
    c: float,
    bias: float | None = None,
) -> AdmissibilityReport:
    """Evaluate the smoothness criteria under which the sign completion of p
    can be boosted without a degree blow-up.

    Criteria (each sufficient): edge-Lipschitz constant <= eta; influence-
    sparsity bound max_i 2*sqrt(spar_i * Inf_i) <= eta; and, when a bias is
    supplied, max_i sqrt(Inf_i under the biased basis) <= sigma*eta/(2*sqrt(K)).
    Whenever a criterion holds, the off-domain values of p must stay at least
    degree**(-c) away from zero; that implication is asserted.
    """
    n = f.n
    if p.n != n:
        raise ValueError("arity mismatch")
    pf = p.to_basis(FOURIER)
    values = pf.values()
    dom = [x for x in range(1 << n) if f.table[x] != UNDEF]
    if not dom:
        raise ValueError("empty domain")
    fv = np.array([1.0 - 2.0 * f.table[x] for x in dom])
    approx_err = float(np.max(np.abs(values[dom] - fv)))
    if approx_err > 1.0 / 3.0 + 1e-9:
        raise ValueError("p must approximate f on the domain within 1/3")
    d = pf.degree
    floor = d ** (-c) if d > 0 else math.inf
    off = [x for x in range(1 << n) if f.table[x] == UNDEF]
    min_off = (
        float(np.min(np.abs(values[off]))) if off else float(np.min(np.abs(values)))
    )
    r_c = covering_radius(n, dom)
    eta = None
    if r_c > 0 and d > 0:
        eta = (2.0 / 3.0 - floor) / r_c
    edge = 0.0
    for x in range(1 << n):
        for i in range(n):
            y = x ^ (1 << i)
            if y > x:
                edge = max(edge, abs(float(values[x] - values[y])))
    inf_spar = max(
        (2.0 * math.sqrt(pf.sparsity_at(i) * pf.influence(i)) for i in range(n)),
        default=0.0,
    )
    biased_bound = biased_threshold = None
    if bias is not None:
        basis = polynomials.BiasedBasis(bias)
        expansion = polynomials.biased_expand_poly(pf, bias)
        biased_bound = max(
            (math.sqrt(expansion.influence(i)) for i in range(n)), default=0.0
        )
        if eta is not None and d >= 1:
            k = polynomials.biased_K(n, d, bias)
            biased_threshold = (
                basis.sigma * eta / (2.0 * math.sqrt(k)) if k > 0 else math.inf
            )
    # criteria are None (vacuous) when eta is undefined: a total domain or a
    # constant polynomial leaves only the direct min-|p| check
    if eta is None:
        criteria = {"lipschitz": None, "influence_sparsity": None}
        if bias is not None:
            criteria["biased"] = None
    else:
        criteria = {
            "lipschitz": edge <= eta + 1e-12,
            "influence_sparsity": inf_spar <= eta + 1e-12,
        }
        if bias is not None:
            criteria["biased"] = (
                biased_threshold is not None
                and biased_bound <= biased_threshold + 1e-12
            )
    implication_ok = (not any(criteria.values())) or min_off >= floor - 1e-9
    if not implication_ok:  # pragma: no cover - would contradict the theorems
        raise RuntimeError(
            "admissibility criterion held but the off-domain margin failed; bug"
        )
    claim = int(math.ceil(d ** (c + 1))) if d > 0 else 0
    return AdmissibilityReport(
        n=n,
        degree=d,
        exponent=c,
        covering=r_c,
        eta=eta,
        edge_lipschitz=edge,
        influence_sparsity_bound=inf_spar,
        biased_bound=biased_bound,
        biased_threshold=biased_threshold,
        min_offdomain_abs=min_off,
        floor=floor,
        criteria=criteria,
        implication_ok=implication_ok,
        degree_bound_claim=claim,
    )


def boost_natural(
    p: MultilinearPoly, margin: float
) -> tuple[MultilinearPoly, SignPolynomial, PartialFunction]:
    """Boost a polynomial with |p| >= margin everywhere into a 1/3
    approximator of its natural completion."""
    pf = p.to_basis(FOURIER)
    values = pf.values()
    low = float(np.min(np.abs(values)))
    if low + 1e-12 < margin:
        raise ValueError(f"margin {margin} not met: min |p| = {low:.6g}")
    scale = max(1.0, float(np.max(np.abs(values))) / 2.0)
    sp = polynomials.sign_polynomial(margin / scale, 1.0 / 3.0)
    boosted, _ = polynomials.compose_boost(pf, sp, scale)
    return boosted, sp, natural_completion(pf)


def exact_degree_completion_check(g: PartialFunction, d: int) -> bool:
    """Parity condition for deg(g) <= d: inside every subset of more than d
    coordinates, the 1-points of even and odd weight are equinumerous."""
    if not g.is_total:
        raise ValueError("the parity condition applies to total functions")
    n = g.n
    signed = np.array(
        [(-1.0 if x.bit_count() & 1 else 1.0) * g.table[x] for x in range(1 << n)]
    )
    sums = polynomials._zeta(signed, n)
    for s in range(1 << n):
        if s.bit_count() > d and abs(sums[s]) > 1e-9:
            return False
    return True


def completion_report(f: PartialFunction, budget: int = DEFAULT_BUDGET) -> dict:
    """Cross-measure table over optimal completions plus the report-only
    sculpting ratio D / (adeg^2 * ln^2(2 + |Dom|))."""
    table_measures = ("D", "adeg", "C", "bs")
    witnesses = {}
    exact = {}
    for m in table_measures:
        b = min(budget, DEFAULT_ADEG_BUDGET) if m == "adeg" else budget
        value, wit, ok = completion_complexity(f, m, b)
        witnesses[m] = wit
        exact[m] = ok
    cross = {
        m: {m2: _total_measure(witnesses[m2], m) for m2 in table_measures}
        for m in table_measures
    }
    adeg = polynomials.approx_degree(f)
    return {
        "completion_values": {m: cross[m][m] for m in table_measures},
        "cross_table": cross,
        "exact": exact,
        "adeg": adeg,
        "appendix_ratio": measures.appendix_ratio(f, adeg),
        "undefined_count": f.undefined_count,
    }
