"""Multilinear polynomial machinery.

Two bases are supported for polynomials on the cube:

* ``fourier``: characters over the +-1 cube (bit 0 -> +1, bit 1 -> -1);
  boundedness convention [-1, 1].
* ``monomial``: products of 0/1 variables; boundedness convention [0, 1].

Degrees of (partial) Boolean functions are computed by LP feasibility /
minimax searches through :mod:`pbflab.lp`.  Coefficients with magnitude at
most ``ZERO_TOLERANCE`` are dropped at construction, which is what sparsity
counts refer to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev

from pbflab import lp
from pbflab.boolfn import UNDEF, PartialFunction

ZERO_TOLERANCE = 1e-12

FOURIER = "fourier"
MONOMIAL = "monomial"


class ConstructionFailure(RuntimeError):
    """A constructive fit failed its verification grid."""


# ---------------------------------------------------------------------------
# dense transforms between coefficient vectors and value vectors


def _zeta(v: np.ndarray, n: int) -> np.ndarray:
    """values[m] = sum of monomial coefficients over subsets of m."""
    v = v.copy()
    for i in range(n):
        w = v.reshape(-1, 2, 1 << i)
        w[:, 1, :] += w[:, 0, :]
    return v


def _mobius(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`_zeta` (inclusion-exclusion over subsets)."""
    v = v.copy()
    for i in range(n):
        w = v.reshape(-1, 2, 1 << i)
        w[:, 1, :] -= w[:, 0, :]
    return v


def _wht(v: np.ndarray, n: int) -> np.ndarray:
    """Walsh-Hadamard transform matching chi_S(x) = (-1)^{|S & x|}."""
    v = v.copy()
    for i in range(n):
        w = v.reshape(-1, 2, 1 << i)
        a = w[:, 0, :].copy()
        w[:, 0, :] = a + w[:, 1, :]
        w[:, 1, :] = a - w[:, 1, :]
    return v


class MultilinearPoly:
    """A multilinear polynomial as a sparse subset-mask coefficient map."""

    __slots__ = ("n", "basis", "coeffs")

    def __init__(self, n: int, basis: str, coeffs: dict):
        if basis not in (FOURIER, MONOMIAL):
            raise ValueError(f"unknown basis {basis!r}")
        if any(not 0 <= s < (1 << n) for s in coeffs):
            raise ValueError("coefficient masks must be subsets of the coordinates")
        self.n = n
        self.basis = basis
        self.coeffs = {s: float(c) for s, c in coeffs.items() if abs(c) > ZERO_TOLERANCE}

    @classmethod
    def from_values(cls, n: int, values, basis: str) -> "MultilinearPoly":
        """Exact multilinear interpolant of the given 2**n cube values."""
        v = np.asarray(values, dtype=float)
        if v.shape != (1 << n,):
            raise ValueError("values must have length 2**n")
        if basis == FOURIER:
            c = _wht(v, n) / (1 << n)
        else:
            c = _mobius(v, n)
        return cls(n, basis, {s: c[s] for s in range(1 << n)})

    @property
    def degree(self) -> int:
        return max((s.bit_count() for s in self.coeffs), default=0)

    def values(self) -> np.ndarray:
        v = np.zeros(1 << self.n)
        for s, c in self.coeffs.items():
            v[s] = c
        if self.basis == FOURIER:
            return _wht(v, self.n)
        return _zeta(v, self.n)

    def evaluate(self, x: int) -> float:
        if self.basis == FOURIER:
            return sum(
                c * (1 - 2 * ((s & x).bit_count() & 1)) for s, c in self.coeffs.items()
            )
        return sum(c for s, c in self.coeffs.items() if s & x == s)

    def __call__(self, x: int) -> float:
        return self.evaluate(x)

    def to_basis(self, basis: str) -> "MultilinearPoly":
        if basis == self.basis:
            return self
        return MultilinearPoly.from_values(self.n, self.values(), basis)

    def sparsity(self) -> int:
        """Number of nonzero coefficients in the Fourier representation."""
        return len(self.to_basis(FOURIER).coeffs)

    def sparsity_at(self, i: int) -> int:
        bit = 1 << i
        return sum(1 for s in self.to_basis(FOURIER).coeffs if s & bit)

    def influence(self, i: int) -> float:
        bit = 1 << i
        return sum(c * c for s, c in self.to_basis(FOURIER).coeffs.items() if s & bit)

    def discrete_derivative(self, i: int) -> "MultilinearPoly":
        """The coordinate-i derivative sum_{S containing i} c_S chi_{S \\ i}.

        Pointwise it equals x_i * (p(x) - p(x^i)) / 2; the sign factor x_i
        drops out of every magnitude bound built on it.
        """
        bit = 1 << i
        p = self.to_basis(FOURIER)
        return MultilinearPoly(
            self.n, FOURIER, {s ^ bit: c for s, c in p.coeffs.items() if s & bit}
        )

    def scale(self, factor: float) -> "MultilinearPoly":
        return MultilinearPoly(
            self.n, self.basis, {s: c * factor for s, c in self.coeffs.items()}
        )

    def __repr__(self) -> str:
        return f"MultilinearPoly(n={self.n}, basis={self.basis}, terms={len(self.coeffs)}, degree={self.degree})"


def mobius_coefficients(f: PartialFunction) -> MultilinearPoly:
    """Monomial coefficients of a total function by Moebius inversion."""
    if not f.is_total:
        raise ValueError("Moebius inversion requires a total function")
    return MultilinearPoly.from_values(f.n, [float(v) for v in f.table], MONOMIAL)


# ---------------------------------------------------------------------------
# exact and approximate degree via LP


def _degree_masks(n: int, d: int) -> list[int]:
    return sorted((s for s in range(1 << n) if s.bit_count() <= d), key=lambda s: (s.bit_count(), s))


def _monomial_value_matrix(n: int, masks: list[int]) -> np.ndarray:
    """V[x, j] = 1 iff masks[j] is a subset of x."""
    size = 1 << n
    v = np.zeros((size, len(masks)))
    for j, s in enumerate(masks):
        xs = np.arange(size)
        v[:, j] = (xs & s) == s
    return v


def _dom_and_labels(f: PartialFunction) -> tuple[list[int], np.ndarray]:
    dom = [x for x in range(1 << f.n) if f.table[x] != UNDEF]
    if not dom:
        raise ValueError("degree is undefined for an empty domain")
    return dom, np.array([float(f.table[x]) for x in dom])


def exact_degree(f: PartialFunction, tolerance: float = lp.DEFAULT_TOLERANCE) -> int:
    """Smallest degree of a polynomial equal to f on the domain and inside
    [0, 1] on the whole cube; found by increasing the degree from 0."""
    dom, labels = _dom_and_labels(f)
    for d in range(f.n + 1):
        masks = _degree_masks(f.n, d)
        v = _monomial_value_matrix(f.n, masks)
        a_ub = np.vstack([v, -v])
        b_ub = np.concatenate([np.ones(len(v)), np.zeros(len(v))])
        res = lp.solve(
            c=np.zeros(len(masks)),
            a_ub=a_ub,
            b_ub=b_ub,
            a_eq=v[dom],
            b_eq=labels,
        )
        if res.feasible:
            return d
    raise RuntimeError("degree-n interpolation must be feasible")  # pragma: no cover


def _approx_lp(f: PartialFunction, d: int) -> tuple[float, MultilinearPoly]:
    """Best uniform error on the domain achievable at degree d, with witness."""
    dom, labels = _dom_and_labels(f)
    masks = _degree_masks(f.n, d)
    v = _monomial_value_matrix(f.n, masks)
    m = len(masks)
    size = len(v)
    nd = len(dom)
    # variables: coefficients then the error bound t
    a_ub = np.zeros((2 * nd + 2 * size, m + 1))
    b_ub = np.zeros(2 * nd + 2 * size)
    a_ub[:nd, :m] = v[dom]
    a_ub[:nd, m] = -1.0
    b_ub[:nd] = labels
    a_ub[nd : 2 * nd, :m] = -v[dom]
    a_ub[nd : 2 * nd, m] = -1.0
    b_ub[nd : 2 * nd] = -labels
    a_ub[2 * nd : 2 * nd + size, :m] = v
    b_ub[2 * nd : 2 * nd + size] = 1.0
    a_ub[2 * nd + size :, :m] = -v
    b_ub[2 * nd + size :] = 0.0
    c = np.zeros(m + 1)
    c[m] = 1.0
    bounds = [(None, None)] * m + [(0, None)]
    res = lp.solve(c=c, a_ub=a_ub, b_ub=b_ub, bounds=bounds)
    if not res.feasible:  # pragma: no cover - always feasible
        raise RuntimeError("approximate-degree LP reported infeasible")
    poly = MultilinearPoly(f.n, MONOMIAL, {s: res.x[j] for j, s in enumerate(masks)})
    return res.value, poly


def approx_degree_witness(
    f: PartialFunction,
    eps: float = 1.0 / 3.0,
    tolerance: float = lp.DEFAULT_TOLERANCE,
) -> tuple[int, MultilinearPoly]:
    """(approximate degree, witness polynomial) at error eps."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    for d in range(f.n + 1):
        err, poly = _approx_lp(f, d)
        if err <= eps + tolerance:
            return d, poly
    raise RuntimeError("degree-n approximation must succeed")  # pragma: no cover


def approx_degree(
    f: PartialFunction,
    eps: float = 1.0 / 3.0,
    tolerance: float = lp.DEFAULT_TOLERANCE,
) -> int:
    return approx_degree_witness(f, eps, tolerance)[0]


# ---------------------------------------------------------------------------
# odd sign-approximating polynomial by constrained minimax fit


#: Documented degree constant: the fitted degree satisfies
#: degree <= SIGN_DEGREE_CONSTANT * ln(1/eps) / delta.
SIGN_DEGREE_CONSTANT = 12.0

#: Safety margins: the LP fits to SIGN_SAFETY_FACTOR * eps and keeps
#: |P| <= 1 - SIGN_BOX_MARGIN on the fit grid, so the 1e-3 verification grid
#: passes with headroom (the continuum in between is not certified).
SIGN_SAFETY_FACTOR = 0.9
SIGN_BOX_MARGIN = 1e-4

_SIGN_GRID_STEP = 1e-3


@dataclass
class SignPolynomial:
    """An odd polynomial close to sign(x) on [-2,-delta] u [delta,2] and
    bounded by 1 on [-2, 2] (both checked on a 1e-3 grid)."""

    cheb_coeffs: np.ndarray
    degree: int
    delta: float
    eps: float

    def __call__(self, x):
        return chebyshev.chebval(np.asarray(x, dtype=float) / 2.0, self.cheb_coeffs)

    def verify_grid(self) -> bool:
        xs = np.arange(-2.0, 2.0 + _SIGN_GRID_STEP / 2, _SIGN_GRID_STEP)
        vals = self(xs)
        if np.max(np.abs(vals)) > 1.0 + 1e-12:
            return False
        outside = np.abs(xs) >= self.delta
        return bool(
            np.max(np.abs(vals[outside] - np.sign(xs[outside]))) <= self.eps + 1e-12
        )


def sign_polynomial(delta: float, eps: float) -> SignPolynomial:
    """Constrained minimax fit of an odd polynomial to sign(x).

    The degree is doubled until the fit achieves error
    ``SIGN_SAFETY_FACTOR * eps`` on the grid; odd symmetry makes the
    negative half automatic.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    delta = min(delta, 1.0)
    xs = np.arange(0.0, 2.0 + _SIGN_GRID_STEP / 2, _SIGN_GRID_STEP)
    xs = np.unique(np.append(xs, [delta, 2.0]))
    approach = xs[xs >= delta]
    d = 1
    while d <= 255:
        odd = list(range(1, d + 1, 2))
        full = chebyshev.chebvander(xs / 2.0, d)
        design = full[:, odd]
        da = design[xs >= delta]
        na, nb = len(da), len(design)
        m = len(odd)
        a_ub = np.zeros((2 * na + 2 * nb, m + 1))
        b_ub = np.zeros(2 * na + 2 * nb)
        a_ub[:na, :m] = da
        a_ub[:na, m] = -1.0
        b_ub[:na] = 1.0
        a_ub[na : 2 * na, :m] = -da
        a_ub[na : 2 * na, m] = -1.0
        b_ub[na : 2 * na] = -1.0
        a_ub[2 * na : 2 * na + nb, :m] = design
        b_ub[2 * na : 2 * na + nb] = 1.0 - SIGN_BOX_MARGIN
        a_ub[2 * na + nb :, :m] = -design
        b_ub[2 * na + nb :] = 1.0 - SIGN_BOX_MARGIN
        c = np.zeros(m + 1)
        c[m] = 1.0
        bounds = [(None, None)] * m + [(0, None)]
        res = lp.solve(c=c, a_ub=a_ub, b_ub=b_ub, bounds=bounds)
        if res.feasible and res.value <= SIGN_SAFETY_FACTOR * eps:
            coeffs = np.zeros(d + 1)
            for j, k in enumerate(odd):
                coeffs[k] = res.x[j]
            poly = SignPolynomial(coeffs, d, delta, eps)
            if poly.verify_grid():
                return poly
        d = 2 * d + 1
    raise ConstructionFailure(
        f"no odd polynomial of degree <= 255 fits sign(x) at delta={delta}, eps={eps}"
    )


def compose_boost(
    p: MultilinearPoly, sign_poly: SignPolynomial, scale: float
) -> tuple[MultilinearPoly, int]:
    """Exact multilinear interpolant of x -> P(p(x)/scale).

    Returns (polynomial, analytic degree bound deg(P)*deg(p)); the stored
    interpolant's true degree never exceeds the bound.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    vals = p.values() / scale
    worst = int(np.argmax(np.abs(vals)))
    if abs(vals[worst]) > 2.0 + 1e-9:
        raise ValueError(
            f"|p/scale| exceeds 2 at point {worst:#x}: {vals[worst]:.6g}"
        )
    boosted = MultilinearPoly.from_values(p.n, sign_poly(np.clip(vals, -2, 2)), FOURIER)
    return boosted, sign_poly.degree * p.degree


# ---------------------------------------------------------------------------
# the p-biased basis


@dataclass(frozen=True)
class BiasedBasis:
    """Orthonormal character basis for the bias-p product measure.

    The bias is the probability of bit value 1 (the -1 point), so the
    coordinate mean is mu = 1 - 2p under the global +-1 convention.
    """

    p: float

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError("bias must lie in (0, 1)")

    @property
    def mu(self) -> float:
        return 1.0 - 2.0 * self.p

    @property
    def sigma(self) -> float:
        return 2.0 * math.sqrt(self.p * (1.0 - self.p))

    @property
    def beta(self) -> float:
        r = self.p / (1.0 - self.p)
        return math.sqrt(max(r, 1.0 / r))

    def phi(self, value: int) -> float:
        """phi at a +-1 coordinate value."""
        return (value - self.mu) / self.sigma

    def point_weight(self, x: int, n: int) -> float:
        ones = x.bit_count()
        return self.p**ones * (1.0 - self.p) ** (n - ones)

    def orthonormality_residual(self) -> float:
        """max of |E[phi]| and |E[phi^2] - 1| by exact two-point summation."""
        e1 = (1.0 - self.p) * self.phi(1) + self.p * self.phi(-1)
        e2 = (1.0 - self.p) * self.phi(1) ** 2 + self.p * self.phi(-1) ** 2
        return max(abs(e1), abs(e2 - 1.0))


@dataclass
class BiasedExpansion:
    n: int
    bias: float
    coeffs: np.ndarray  # indexed by character mask

    def values(self) -> np.ndarray:
        return _biased_character_matrix(self.n, BiasedBasis(self.bias)).T @ self.coeffs

    def influence(self, i: int) -> float:
        masks = np.arange(1 << self.n)
        sel = (masks >> i) & 1 == 1
        return float(np.sum(self.coeffs[sel] ** 2))

    def parseval_residual(self, values: np.ndarray) -> float:
        basis = BiasedBasis(self.bias)
        weights = np.array([basis.point_weight(x, self.n) for x in range(1 << self.n)])
        return abs(float(np.sum(self.coeffs**2)) - float(weights @ (values**2)))


def _biased_character_matrix(n: int, basis: BiasedBasis) -> np.ndarray:
    """Phi[S, x] = phi_S(x); built by iterated Kronecker products."""
    m = np.array([[1.0, 1.0], [basis.phi(1), basis.phi(-1)]])
    out = np.array([[1.0]])
    for _ in range(n):
        out = np.kron(m, out)
    return out


def biased_expand(f: PartialFunction, bias: float) -> BiasedExpansion:
    """Exact-summation coefficients of a total function over the bias-p cube."""
    if not f.is_total:
        raise ValueError("biased expansion requires a total function")
    basis = BiasedBasis(bias)
    n = f.n
    phi = _biased_character_matrix(n, basis)
    weights = np.array([basis.point_weight(x, n) for x in range(1 << n)])
    values = np.array([1.0 - 2.0 * v for v in f.table])  # +-1 convention
    coeffs = phi @ (weights * values)
    return BiasedExpansion(n, bias, coeffs)


def biased_expand_poly(p: MultilinearPoly, bias: float) -> BiasedExpansion:
    """Biased-basis coefficients of an arbitrary polynomial's cube values."""
    basis = BiasedBasis(bias)
    phi = _biased_character_matrix(p.n, basis)
    weights = np.array([basis.point_weight(x, p.n) for x in range(1 << p.n)])
    coeffs = phi @ (weights * p.values())
    return BiasedExpansion(p.n, bias, coeffs)


def biased_K(n: int, d: int, bias: float) -> float:
    """Closed-form character-mass bound: sum_{l<d} C(n-1, l) beta^(2l)."""
    beta = BiasedBasis(bias).beta
    return float(sum(math.comb(n - 1, l) * beta ** (2 * l) for l in range(d)))
