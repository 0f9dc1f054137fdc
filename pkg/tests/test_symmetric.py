import math

import numpy as np
import pytest

from pbflab import measures, polynomials, symmetric
from pbflab.boolfn import UNDEF


def prof(n, mapping):
    return symmetric.WeightProfile.from_map(n, mapping)


def test_gap_examples():
    assert symmetric.gap(prof(4, {0: 0, 4: 1})) == 4
    assert symmetric.gap(prof(4, {0: 0, 4: 0, 2: 1})) == 2
    assert symmetric.gap(prof(3, {0: 0, 2: 0})) is None


def test_exact_deterministic_examples():
    assert symmetric.exact_deterministic(prof(4, {0: 0, 4: 1})) == 1
    assert symmetric.exact_deterministic(prof(4, {0: 0, 4: 0, 2: 1})) == 3
    assert symmetric.exact_deterministic(prof(3, {1: 1})) == 0


def test_formula_equals_tree_search_sweep():
    rng = np.random.default_rng(2)
    for _ in range(60):
        n = int(rng.integers(2, 9))
        labels = tuple(int(v) for v in rng.choice([0, 1, UNDEF], size=n + 1))
        if all(v == UNDEF for v in labels):
            continue
        p = symmetric.WeightProfile(n, labels)
        assert measures.deterministic_complexity(p.to_function()) == (
            symmetric.exact_deterministic(p)
        )


def test_adeg_lower_bound():
    assert symmetric.adeg_lower_bound(prof(12, {0: 0, 4: 1})) == pytest.approx(1.0)
    assert symmetric.adeg_lower_bound(prof(4, {0: 0, 2: 1})) == pytest.approx(
        math.sqrt(2 / 3)
    )
    with pytest.raises(ValueError):
        symmetric.adeg_lower_bound(prof(4, {0: 0}))


def test_adeg_lower_bound_vs_lp():
    rng = np.random.default_rng(3)
    for _ in range(12):
        n = int(rng.integers(2, 8))
        labels = tuple(int(v) for v in rng.choice([0, 1, UNDEF], size=n + 1))
        if all(v == UNDEF for v in labels):
            continue
        p = symmetric.WeightProfile(n, labels)
        if symmetric.gap(p) is None:
            continue
        assert polynomials.approx_degree(p.to_function()) >= (
            symmetric.adeg_lower_bound(p) - 0.5
        )


def test_sample_count_formula():
    # gap = n collapses the sample count to O(log(1/failure))
    p = prof(16, {0: 0, 16: 1})
    assert symmetric.sample_count(p, 0.05) == math.ceil(2 * math.log(2 / 0.05))
    # constant profiles need no samples
    assert symmetric.sample_count(prof(8, {3: 1}), 0.05) == 0


def test_classifier_constant_and_full_read():
    rng = np.random.default_rng(0)
    out, used = symmetric.sampling_classifier(prof(6, {2: 1, 4: 1}), 0b11, 0.1, rng)
    assert (out, used) == (1, 0)
    # tiny gap relative to n forces the deterministic full read
    p = prof(4, {0: 0, 1: 1})
    out, used = symmetric.sampling_classifier(p, 0b1, 0.2, rng)
    assert out == 1 and used == 4


def test_classifier_error_rate_deutsch_jozsa():
    n = 64
    p = prof(n, {0: 0, n: 0, n // 2: 1})
    rng = np.random.default_rng(42)
    trials = 1000
    errors = 0
    for _ in range(trials):
        w = int(rng.choice([0, n, n // 2]))
        if w == 0:
            x = 0
        elif w == n:
            x = (1 << n) - 1
        else:
            idx = rng.choice(n, size=w, replace=False)
            x = int(sum(1 << int(i) for i in idx))
        out, used = symmetric.sampling_classifier(p, x, 0.05, rng)
        assert used <= n
        errors += out != p.labels[w]
    ci = 4 * math.sqrt(0.05 * 0.95 / trials)
    assert errors / trials <= 0.05 + ci


def test_classifier_rejects_off_promise():
    with pytest.raises(ValueError):
        symmetric.sampling_classifier(prof(4, {0: 0, 4: 1}), 0b1, 0.1, np.random.default_rng(0))


def test_regime_labels():
    assert symmetric.regime_label(64, 32) == "exponential"
    assert symmetric.regime_label(64, 1) == "none"
    assert symmetric.regime_label(64, 8) == "polynomial"
    assert symmetric.regime_label(4, None) == "constant"
    row = symmetric.regime_report(prof(64, {0: 0, 32: 1}))
    assert row["regime"] == "exponential"
    assert row["quantum_scale"] == pytest.approx(2.0)
