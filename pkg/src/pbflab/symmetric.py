"""Symmetric partial functions: the gap parameter, the exact deterministic
formula, the symmetrization lower bound, the sampling classifier, and the
report-only speedup-regime table."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pbflab.boolfn import ONE, UNDEF, ZERO, PartialFunction, make_symmetric, weight

#: Sampling constant for the weight-estimation classifier, from Hoeffding's
#: inequality (valid for sampling without replacement): t = ceil(C0 * (n/gap)^2
#: * ln(2/failure_prob)) drives the two-sided deviation below failure_prob.
SAMPLING_CONSTANT = 2.0


@dataclass(frozen=True)
class WeightProfile:
    """Labels per Hamming weight; weights labeled UNDEF are off the promise."""

    n: int
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != self.n + 1:
            raise ValueError("labels must cover weights 0..n")
        if all(v == UNDEF for v in self.labels):
            raise ValueError("at least one weight must be defined")
        if any(v not in (ZERO, ONE, UNDEF) for v in self.labels):
            raise ValueError("labels must be ZERO, ONE or UNDEF")

    @classmethod
    def from_map(cls, n: int, profile) -> "WeightProfile":
        labels = [UNDEF] * (n + 1)
        for w, v in profile.items():
            labels[w] = v
        return cls(n, tuple(labels))

    def to_function(self) -> PartialFunction:
        return make_symmetric(self.n, {w: v for w, v in enumerate(self.labels) if v != UNDEF})

    def defined_weights(self) -> list[int]:
        return [w for w, v in enumerate(self.labels) if v != UNDEF]


def gap(profile: WeightProfile) -> int | None:
    """Least weight separation between conflicting labels; None when the
    function is constant on its domain."""
    zeros = [w for w, v in enumerate(profile.labels) if v == ZERO]
    ones = [w for w, v in enumerate(profile.labels) if v == ONE]
    if not zeros or not ones:
        return None
    return min(abs(a - b) for a in zeros for b in ones)


def exact_deterministic(profile: WeightProfile) -> int:
    """n - gap + 1 for non-constant profiles; 0 when constant on the domain."""
    g = gap(profile)
    if g is None:
        return 0
    return profile.n - g + 1


def adeg_lower_bound(profile: WeightProfile) -> float:
    """Symmetrization bound sqrt(n / (3 * gap))."""
    g = gap(profile)
    if g is None:
        raise ValueError("no degree bound for a function constant on its domain")
    return math.sqrt(profile.n / (3.0 * g))


def sample_count(profile: WeightProfile, failure_prob: float) -> int:
    g = gap(profile)
    if g is None:
        return 0
    n = profile.n
    t = math.ceil(SAMPLING_CONSTANT * (n / g) ** 2 * math.log(2.0 / failure_prob))
    return min(t, n)


def sampling_classifier(
    profile: WeightProfile,
    x: int,
    failure_prob: float,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Classify a hidden promise input by estimating its Hamming weight from
    uniform samples without replacement.  Returns (label, samples used)."""
    if not 0 < failure_prob < 1:
        raise ValueError("failure probability must lie in (0, 1)")
    n = profile.n
    if x >= (1 << n) or profile.labels[weight(x)] == UNDEF:
        raise ValueError("hidden input must satisfy the promise")
    g = gap(profile)
    if g is None:
        constant = next(v for v in profile.labels if v != UNDEF)
        return constant, 0
    t = sample_count(profile, failure_prob)
    if t >= n:
        return profile.labels[weight(x)], n
    idx = rng.choice(n, size=t, replace=False)
    ones = sum((x >> int(i)) & 1 for i in idx)
    estimate = ones * n / t
    # nearest defined weight decides the label; ties resolve to the smaller
    best = min(profile.defined_weights(), key=lambda w: (abs(w - estimate), w))
    return profile.labels[best], t


# Report-only regime rendering at finite n.  Thresholds (documented here,
# asserted nowhere): with a = ln(gap)/ln(n), the label is "exponential" when
# gap >= n/4 or a >= 0.9, "superpolynomial" when a >= 0.75, "polynomial" when
# a >= 0.25, and "none" below; a constant function reports "constant".
_REGIME_EXP_FRACTION = 0.25
_REGIME_EXP_EXPONENT = 0.9
_REGIME_SUPERPOLY_EXPONENT = 0.75
_REGIME_POLY_EXPONENT = 0.25


def regime_label(n: int, g: int | None) -> str:
    if g is None:
        return "constant"
    if n <= 1:
        return "none"
    if g >= _REGIME_EXP_FRACTION * n:
        return "exponential"
    a = math.log(max(g, 1)) / math.log(n)
    if a >= _REGIME_EXP_EXPONENT:
        return "exponential"
    if a >= _REGIME_SUPERPOLY_EXPONENT:
        return "superpolynomial"
    if a >= _REGIME_POLY_EXPONENT:
        return "polynomial"
    return "none"


def regime_report(profile: WeightProfile) -> dict:
    """One row of the speedup-regime table; informational only."""
    g = gap(profile)
    n = profile.n
    return {
        "n": n,
        "gap": g,
        "deterministic": exact_deterministic(profile),
        "quantum_scale": None if g is None else n / g,
        "regime": regime_label(n, g),
    }
