"""Seeded random instance generators for the verification sweeps.

Reproducibility scheme: a run is driven by one root seed; instance ``i``
uses ``numpy`` generator ``default_rng(SeedSequence(root_seed, spawn_key=(i,)))``,
so sweeps parallelize without sharing generator state.
"""

from __future__ import annotations

import numpy as np

from pbflab.boolfn import ONE, UNDEF, ZERO, PartialFunction, make_slice, weight
from pbflab.formats import CNF
from pbflab.symmetric import WeightProfile


def instance_rng(root_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(root_seed, spawn_key=(index,)))


def random_partial_function(
    n: int, rng: np.random.Generator, undef_prob: float = 0.25
) -> PartialFunction:
    """Pointwise random table; resamples until the domain is nonempty."""
    probs = [(1 - undef_prob) / 2, (1 - undef_prob) / 2, undef_prob]
    while True:
        table = rng.choice([ZERO, ONE, UNDEF], size=1 << n, p=probs)
        if np.any(table != UNDEF):
            return PartialFunction(n, bytes(int(v) for v in table))


def random_total_function(n: int, rng: np.random.Generator) -> PartialFunction:
    table = rng.integers(0, 2, size=1 << n)
    return PartialFunction(n, bytes(int(v) for v in table))


def random_profile(
    n: int, rng: np.random.Generator, undef_prob: float = 0.34
) -> WeightProfile:
    probs = [(1 - undef_prob) / 2, (1 - undef_prob) / 2, undef_prob]
    while True:
        labels = tuple(int(v) for v in rng.choice([ZERO, ONE, UNDEF], size=n + 1, p=probs))
        if any(v != UNDEF for v in labels):
            return WeightProfile(n, labels)


def random_slice_function(n: int, k: int, rng: np.random.Generator) -> PartialFunction:
    labels = {
        x: int(rng.integers(0, 2)) for x in range(1 << n) if weight(x) == k
    }
    return make_slice(n, k, labels)


def random_3cnf(num_vars: int, num_clauses: int, rng: np.random.Generator) -> CNF:
    """Clauses over three distinct variables with random polarities."""
    if num_vars < 3:
        raise ValueError("need at least three variables")
    clauses = []
    for _ in range(num_clauses):
        vars3 = rng.choice(num_vars, size=3, replace=False)
        clauses.append(
            tuple(int(v) + 1 if rng.random() < 0.5 else -(int(v) + 1) for v in vars3)
        )
    return CNF(num_vars, tuple(clauses))
