"""Coefficient perturbations of approximating polynomials and the
perturbation-finding hardness pipeline (3-SAT -> linear margin avoidance ->
perturbation finding), with exact solvers for the reduced instances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from pbflab import polynomials
from pbflab.boolfn import UNDEF, PartialFunction
from pbflab.formats import CNF
from pbflab.polynomials import FOURIER, MultilinearPoly, SignPolynomial

KERNEL_SINGULAR_THRESHOLD = 1e-10
KERNEL_RESIDUAL_TOLERANCE = 1e-8


@dataclass
class DomainEvaluationMatrix:
    """Rows: domain points; columns: the nonzero characters of a polynomial;
    entries: character evaluations.  Maps coefficient perturbations to the
    value changes they induce on the domain."""

    points: list[int]
    characters: list[int]
    matrix: np.ndarray

    def kernel_basis(self) -> np.ndarray:
        """Orthonormal basis of the (numerical) kernel, columns; rank decided
        by a singular-value threshold."""
        m = len(self.characters)
        if not self.points:
            return np.eye(m)
        _, sv, vt = np.linalg.svd(self.matrix)
        rank = int(np.sum(sv > KERNEL_SINGULAR_THRESHOLD))
        return vt[rank:].T.copy()


def build_domain_matrix(f: PartialFunction, p: MultilinearPoly) -> DomainEvaluationMatrix:
    pf = p.to_basis(FOURIER)
    if pf.n != f.n:
        raise ValueError("arity mismatch")
    points = [x for x in range(1 << f.n) if f.table[x] != UNDEF]
    characters = sorted(pf.coeffs)
    matrix = np.array(
        [
            [1.0 - 2.0 * ((s & x).bit_count() & 1) for s in characters]
            for x in points
        ]
    ).reshape(len(points), len(characters))
    return DomainEvaluationMatrix(points, characters, matrix)


def slab_avoid(
    functionals: np.ndarray,
    offsets: np.ndarray,
    eps: float,
    rng: np.random.Generator,
    max_direction_tries: int = 100,
) -> np.ndarray:
    """A vector v with |<l_i, v> - b_i| > eps for every row l_i.

    Draws a random direction u with all <l_i, u> nonzero (resampling on
    failure), then scales past T_i = (|b_i| + eps) / |<l_i, u>|.
    """
    functionals = np.atleast_2d(np.asarray(functionals, dtype=float))
    offsets = np.asarray(offsets, dtype=float)
    t, d = functionals.shape
    norms = np.linalg.norm(functionals, axis=1)
    if np.any(norms < 1e-300):
        raise ValueError("slab avoidance requires nonzero functionals")
    for _ in range(max_direction_tries):
        u = rng.normal(size=d)
        dots = functionals @ u
        if np.all(np.abs(dots) > 1e-12 * norms * np.linalg.norm(u)):
            scales = (np.abs(offsets) + eps) / np.abs(dots)
            v = (float(np.max(scales)) + 1.0) * u
            assert np.all(np.abs(functionals @ v - offsets) > eps)
            return v
    raise RuntimeError("failed to find a direction avoiding all slab normals")


@dataclass
class KernelBoostResult:
    delta: np.ndarray
    characters: list[int]
    perturbed: MultilinearPoly
    boosted: MultilinearPoly
    sign_poly: SignPolynomial
    margin: float


def kernel_perturbation_boost(
    f: PartialFunction,
    p: MultilinearPoly,
    box_bound: float,
    eps: float,
    effort: int = 200,
    seed: int = 0,
):
    """Search the kernel of the domain evaluation matrix for a perturbation
    that clears every cube point away from zero, then boost.

    Incomplete by design (the underlying decision problem is NP-complete):
    returns a verified :class:`KernelBoostResult` or None once the effort
    budget is exhausted.  A returned perturbation always has kernel residual
    at most 1e-8, sup-norm at most the box bound, and |p_delta| >= eps on
    the whole cube; the boosted polynomial is within 1/3 of sign(p) on the
    domain.
    """
    pf = p.to_basis(FOURIER)
    dem = build_domain_matrix(f, pf)
    values = pf.values()
    dom_mask = np.array([f.table[x] != UNDEF for x in range(1 << f.n)])
    if dom_mask.any() and np.min(np.abs(values[dom_mask])) < eps:
        return None  # kernel perturbations cannot move domain values
    characters = dem.characters
    char_matrix = np.array(
        [
            [1.0 - 2.0 * ((s & x).bit_count() & 1) for s in characters]
            for x in range(1 << f.n)
        ]
    )

    def verify(delta: np.ndarray):
        if np.max(np.abs(delta), initial=0.0) > box_bound + 1e-12:
            return None
        if dem.points and np.max(np.abs(dem.matrix @ delta)) > KERNEL_RESIDUAL_TOLERANCE:
            return None
        shifted = values + char_matrix @ delta
        if np.min(np.abs(shifted)) < eps:
            return None
        return shifted

    rng = np.random.default_rng(seed)
    if verify(np.zeros(len(characters))) is not None:
        return _finish_boost(f, pf, np.zeros(len(characters)), characters, values, eps)
    kernel = dem.kernel_basis()
    if kernel.shape[1] == 0:
        return None
    off = [x for x in range(1 << f.n) if not dom_mask[x]]
    lin = char_matrix[off] @ kernel  # functionals of the kernel coordinates
    centers = -values[off]
    live = np.linalg.norm(lin, axis=1) > 1e-12
    if np.any(~live) and np.any(np.abs(values[np.array(off)[~live]]) < eps):
        return None  # blocked point no kernel direction can move
    for attempt in range(effort):
        if attempt % 2 == 0 and live.any():
            try:
                w = slab_avoid(lin[live], centers[live], eps, rng)
            except RuntimeError:
                continue
            # the avoidance scale may breach the box; also try shrunk copies
            candidates = [w * s for s in (1.0, 0.5, 0.25, 0.1)]
        else:
            scale = box_bound * 10.0 ** rng.uniform(-2, 0)
            candidates = [rng.normal(size=kernel.shape[1]) * scale]
        for w in candidates:
            delta = kernel @ w
            if verify(delta) is not None:
                return _finish_boost(f, pf, delta, characters, values + char_matrix @ delta, eps)
    return None


def _finish_boost(f, pf, delta, characters, shifted, eps):
    perturbed = MultilinearPoly(
        pf.n,
        FOURIER,
        {
            s: pf.coeffs.get(s, 0.0) + delta[j]
            for j, s in enumerate(characters)
        },
    )
    margin = float(np.min(np.abs(shifted)))
    scale = max(1.0, float(np.max(np.abs(shifted))) / 2.0)
    sp = polynomials.sign_polynomial(margin / scale, 1.0 / 3.0)
    boosted, _ = polynomials.compose_boost(perturbed, sp, scale)
    return KernelBoostResult(
        delta=np.asarray(delta, dtype=float),
        characters=list(characters),
        perturbed=perturbed,
        boosted=boosted,
        sign_poly=sp,
        margin=margin,
    )


# ---------------------------------------------------------------------------
# the hardness pipeline


@dataclass(frozen=True)
class LMAInstance:
    """Decide: is there Delta with |(A Delta + b)_r| >= 1 for all rows and
    ||Delta||_inf <= 1?"""

    a: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]

    @property
    def num_vars(self) -> int:
        return len(self.a[0]) if self.a else 0

    @property
    def num_rows(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class PerturbationInstance:
    """Value-table form of the perturbation-finding problem: polynomials on
    {-1,1}**t given by their 2**t evaluations in point order."""

    t: int
    p_values: tuple[float, ...]
    q_values: tuple[tuple[float, ...], ...]
    epsilon: float
    box_bound: float
    origin: str = "general"

    def __post_init__(self):
        size = 1 << self.t
        if len(self.p_values) != size or any(len(q) != size for q in self.q_values):
            raise ValueError("value tables must have length 2**t")
        if self.epsilon <= 0 or self.box_bound <= 0:
            raise ValueError("epsilon and the box bound must be positive")

    @property
    def num_perturbations(self) -> int:
        return len(self.q_values)

    def shifted_values(self, delta) -> np.ndarray:
        p = np.asarray(self.p_values)
        if self.q_values:
            p = p + np.asarray(delta) @ np.asarray(self.q_values)
        return p

    def check(self, delta) -> bool:
        if np.max(np.abs(np.asarray(delta, dtype=float)), initial=0.0) > self.box_bound + 1e-12:
            return False
        return bool(np.min(np.abs(self.shifted_values(delta))) >= self.epsilon - 1e-12)


def reduce_3sat_to_lma(cnf: CNF) -> LMAInstance:
    """Unit rows pin each coordinate to +-1; a clause row sums its literal
    signs against offset 3, failing the unit margin exactly when all three
    literals are false."""
    n = cnf.num_vars
    rows: list[tuple[int, ...]] = []
    b: list[int] = []
    for i in range(n):
        rows.append(tuple(1 if j == i else 0 for j in range(n)))
        b.append(0)
    for clause in cnf.clauses:
        if len(clause) != 3 or len({abs(l) for l in clause}) != 3:
            raise ValueError(f"clause {clause} must have three distinct variables")
        row = [0] * n
        for lit in clause:
            row[abs(lit) - 1] = 1 if lit > 0 else -1
        rows.append(tuple(row))
        b.append(3)
    return LMAInstance(tuple(rows), tuple(b))


def reduce_lma_to_pf(lma: LMAInstance) -> PerturbationInstance:
    """Embed the rows as the first N points of a cube in canonical point
    order; off-row points get p = 2 and q_j = 0, so only rows constrain."""
    big_n = lma.num_rows
    if big_n < 1:
        raise ValueError("need at least one row")
    t = max(1, math.ceil(math.log2(big_n)))
    size = 1 << t
    p_vals = [2.0] * size
    q_vals = [[0.0] * size for _ in range(lma.num_vars)]
    for r in range(big_n):
        p_vals[r] = float(lma.b[r])
        for j in range(lma.num_vars):
            q_vals[j][r] = float(lma.a[r][j])
    return PerturbationInstance(
        t=t,
        p_values=tuple(p_vals),
        q_values=tuple(tuple(q) for q in q_vals),
        epsilon=1.0,
        box_bound=1.0,
        origin="sat-reduced",
    )


def pf_solve_reduced(
    inst: PerturbationInstance,
    origin: str | None = None,
    effort: int = 500,
    seed: int = 0,
) -> tuple[str, np.ndarray | None]:
    """Decide a perturbation-finding instance.

    For sat-reduced instances the decision is exact: unit rows and the box
    force every coordinate to +-1, so the +-1 assignments are enumerated.
    For general instances a randomized search returns a verified YES or
    UNKNOWN, never NO and never an unverified witness.
    """
    origin = origin or inst.origin
    n = inst.num_perturbations
    if origin == "sat-reduced":
        # unit rows and the box force |delta_i| = B, so the +-B corners are
        # exhaustive (invariant under the margin/box rescaling)
        b = inst.box_bound
        for bits in range(1 << n):
            delta = np.array([b if (bits >> j) & 1 else -b for j in range(n)])
            if inst.check(delta):
                return "YES", delta
        return "NO", None
    rng = np.random.default_rng(seed)
    for _ in range(effort):
        delta = rng.uniform(-inst.box_bound, inst.box_bound, size=n)
        if inst.check(delta):
            return "YES", delta
    q = np.asarray(inst.q_values, dtype=float)
    if n and q.size:
        live = np.linalg.norm(q.T, axis=1) > 1e-12
        if live.any():
            for _ in range(max(1, effort // 10)):
                try:
                    v = slab_avoid(
                        q.T[live], -np.asarray(inst.p_values)[live], inst.epsilon, rng
                    )
                except (RuntimeError, ValueError):
                    break
                for s in (1.0, 0.5, 0.25, 0.1, 0.01):
                    if inst.check(v * s):
                        return "YES", v * s
    return "UNKNOWN", None


def pf_rescale(
    inst: PerturbationInstance, eps_new: float, box_new: float
) -> PerturbationInstance:
    """Equivalent instance at a different margin and box: p' = (e'/e) p,
    q' = (e' B / (e B')) q, with witnesses mapping via delta' = (B'/B) delta."""
    if eps_new <= 0 or box_new <= 0:
        raise ValueError("scaled parameters must be positive")
    f = eps_new / inst.epsilon
    g = f * inst.box_bound / box_new
    return PerturbationInstance(
        t=inst.t,
        p_values=tuple(f * v for v in inst.p_values),
        q_values=tuple(tuple(g * v for v in q) for q in inst.q_values),
        epsilon=eps_new,
        box_bound=box_new,
        origin=inst.origin,
    )


def sat_brute_force(cnf: CNF) -> bool:
    """Reference satisfiability decision by enumeration."""
    for bits in range(1 << cnf.num_vars):
        ok = True
        for clause in cnf.clauses:
            if not any(
                ((bits >> (abs(l) - 1)) & 1) == (1 if l > 0 else 0) for l in clause
            ):
                ok = False
                break
        if ok:
            return True
    return False
