import numpy as np
import pytest

from pbflab import perturbation as PB
from pbflab import polynomials
from pbflab.boolfn import UNDEF, PartialFunction
from pbflab.formats import CNF
from pbflab.polynomials import FOURIER, MultilinearPoly


def test_domain_matrix_examples():
    f = PartialFunction(2, bytes([0, 0, UNDEF, UNDEF]))
    p = MultilinearPoly(2, FOURIER, {0: 0.1, 0b01: 0.2, 0b10: 0.3})
    dem = PB.build_domain_matrix(f, p)
    assert dem.matrix.shape == (2, 3)
    assert list(dem.matrix[:, 0]) == [1.0, 1.0]  # the empty character
    single = PB.build_domain_matrix(f, MultilinearPoly(2, FOURIER, {0b01: 1.0}))
    assert list(single.matrix[:, 0]) == [1.0, -1.0]


def test_domain_matrix_reconstruction():
    rng = np.random.default_rng(2)
    for n in (2, 4, 6):
        table = bytes(int(v) for v in rng.choice([0, 1, 2], size=1 << n))
        f = PartialFunction(n, table)
        p = MultilinearPoly.from_values(n, rng.normal(size=1 << n), FOURIER)
        dem = PB.build_domain_matrix(f, p)
        coef = np.array([p.coeffs[s] for s in dem.characters])
        vals = p.values()
        assert np.allclose(dem.matrix @ coef, [vals[x] for x in dem.points], atol=1e-9)


def test_slab_avoid():
    rng = np.random.default_rng(0)
    l = np.array([[1.0, 0.0]])
    v = PB.slab_avoid(l, np.array([0.0]), 1.0, rng)
    assert abs(v[0]) > 1.0
    funcs = rng.normal(size=(9, 5))
    offs = rng.normal(size=9)
    v = PB.slab_avoid(funcs, offs, 0.5, rng)
    assert np.all(np.abs(funcs @ v - offs) > 0.5)
    # parallel slabs: one scaling clears both
    two = np.array([[1.0, 1.0], [1.0, 1.0]])
    v = PB.slab_avoid(two, np.array([0.0, 5.0]), 0.7, rng)
    assert np.all(np.abs(two @ v - np.array([0.0, 5.0])) > 0.7)
    with pytest.raises(ValueError):
        PB.slab_avoid(np.zeros((1, 3)), np.zeros(1), 0.5, rng)


def test_kernel_boost_trivial_delta():
    # domain covers everything p needs: delta = 0 suffices
    f = PartialFunction(2, bytes([0, 0, 0, 0]))
    p = MultilinearPoly(2, FOURIER, {0: 0.9})
    res = PB.kernel_perturbation_boost(f, p, box_bound=1.0, eps=0.5)
    assert res is not None
    assert np.allclose(res.delta, 0.0)


def test_kernel_boost_planted():
    table = bytearray([UNDEF] * 4)
    table[0] = 0
    f = PartialFunction(2, bytes(table))
    p = MultilinearPoly(2, FOURIER, {0: 0.8, 0b01: 0.1})
    res = PB.kernel_perturbation_boost(f, p, box_bound=1.0, eps=0.75)
    assert res is not None
    shifted = res.perturbed.values()
    assert np.min(np.abs(shifted)) >= 0.75 - 1e-9
    assert np.max(np.abs(res.delta)) <= 1.0 + 1e-12
    # kernel residual: the domain value is untouched
    assert res.perturbed.evaluate(0) == pytest.approx(p.evaluate(0), abs=1e-8)
    # boosted polynomial within 1/3 of sign(p) on the domain
    assert abs(res.boosted.evaluate(0) - 1.0) <= 1 / 3 + 1e-9


def test_kernel_boost_blocked_returns_none():
    # empty kernel and an off-domain point pinned near zero
    table = bytearray([UNDEF] * 4)
    table[0b00] = 0
    table[0b01] = 0
    table[0b10] = 0
    f = PartialFunction(2, bytes(table))
    p = MultilinearPoly(2, FOURIER, {0: 0.6, 0b01: 0.25, 0b10: 0.25})
    assert PB.build_domain_matrix(f, p).kernel_basis().shape[1] == 0
    assert PB.kernel_perturbation_boost(f, p, box_bound=1.0, eps=0.5) is None


def test_kernel_boost_domain_blocked_returns_none():
    f = PartialFunction(2, bytes([0, UNDEF, UNDEF, UNDEF]))
    p = MultilinearPoly(2, FOURIER, {0: 0.1})
    assert PB.kernel_perturbation_boost(f, p, box_bound=1.0, eps=0.5) is None


def test_reduce_3sat_examples():
    cnf = CNF(3, ((1, 2, 3),))
    lma = PB.reduce_3sat_to_lma(cnf)
    assert lma.a[0] == (1, 0, 0) and lma.b[0] == 0
    assert lma.a[3] == (1, 1, 1) and lma.b[3] == 3
    neg = PB.reduce_3sat_to_lma(CNF(3, ((-1, -2, -3),)))
    assert neg.a[3] == (-1, -1, -1)
    # all-true assignment leaves a negated clause at margin zero
    delta = np.ones(3)
    row = np.array(neg.a[3], dtype=float)
    assert abs(row @ delta + 3) < 1
    empty = PB.reduce_3sat_to_lma(CNF(2, ()))
    assert empty.num_rows == 2
    with pytest.raises(ValueError):
        PB.reduce_3sat_to_lma(CNF(2, ((1, 1, 2),)))


def test_reduce_lma_to_pf_shapes():
    lma = PB.reduce_3sat_to_lma(CNF(3, ((1, 2, 3),)))  # N = 4
    inst = PB.reduce_lma_to_pf(lma)
    assert inst.t == 2 and all(v != 2.0 for v in inst.p_values)
    five = PB.LMAInstance(tuple((1, 0) for _ in range(5)), tuple([0] * 5))
    inst5 = PB.reduce_lma_to_pf(five)
    assert inst5.t == 3
    assert sum(1 for v in inst5.p_values if v == 2.0) == 3  # padding points


def test_reduce_value_table_fidelity():
    rng = np.random.default_rng(8)
    cnf = CNF(5, ((1, -2, 4), (-3, 4, 5)))
    lma = PB.reduce_3sat_to_lma(cnf)
    inst = PB.reduce_lma_to_pf(lma)
    a = np.array(lma.a, dtype=float)
    b = np.array(lma.b, dtype=float)
    for _ in range(5):
        delta = rng.uniform(-1, 1, size=5)
        shifted = inst.shifted_values(delta)
        assert np.allclose(shifted[: lma.num_rows], a @ delta + b, atol=1e-9)


def test_pf_pipeline_matches_sat():
    rng = np.random.default_rng(31)
    seen = {"YES": 0, "NO": 0}
    for trial in range(25):
        nv = int(rng.integers(3, 8))
        nc = int(rng.integers(1, 21))
        clauses = []
        for _ in range(nc):
            vs = rng.choice(nv, size=3, replace=False)
            clauses.append(
                tuple(int(v) + 1 if rng.random() < 0.5 else -(int(v) + 1) for v in vs)
            )
        cnf = CNF(nv, tuple(clauses))
        want = PB.sat_brute_force(cnf)
        inst = PB.reduce_lma_to_pf(PB.reduce_3sat_to_lma(cnf))
        decision, delta = PB.pf_solve_reduced(inst)
        assert (decision == "YES") == want
        seen[decision] += 1
        if delta is not None:
            assert inst.check(delta)
    assert seen["YES"] > 0 and seen["NO"] > 0


def test_pf_rescale():
    cnf = CNF(3, ((1, 2, 3), (-1, -2, -3)))
    inst = PB.reduce_lma_to_pf(PB.reduce_3sat_to_lma(cnf))
    same = PB.pf_rescale(inst, inst.epsilon, inst.box_bound)
    assert same.p_values == inst.p_values and same.q_values == inst.q_values
    scaled = PB.pf_rescale(inst, 2.0, 3.0)
    d1, delta = PB.pf_solve_reduced(inst)
    d2, delta2 = PB.pf_solve_reduced(scaled)
    assert d1 == d2 == "YES"
    assert scaled.check(3.0 * np.asarray(delta))
    with pytest.raises(ValueError):
        PB.pf_rescale(inst, -1.0, 1.0)


def test_pf_general_mode_never_false():
    # general search may say UNKNOWN but a returned YES is always verified
    inst = PB.PerturbationInstance(
        t=2,
        p_values=(0.0, 0.0, 0.0, 0.0),
        q_values=((1.0, 1.0, 1.0, 1.0),),
        epsilon=0.5,
        box_bound=1.0,
        origin="general",
    )
    decision, delta = PB.pf_solve_reduced(inst, origin="general", effort=50)
    assert decision in ("YES", "UNKNOWN")
    if decision == "YES":
        assert inst.check(delta)
    # an unsatisfiable-by-box instance must come back UNKNOWN (never NO)
    hard = PB.PerturbationInstance(
        t=1,
        p_values=(0.0, 0.0),
        q_values=((1.0, -1.0),),
        epsilon=5.0,
        box_bound=1.0,
        origin="general",
    )
    decision, _ = PB.pf_solve_reduced(hard, origin="general", effort=30)
    assert decision == "UNKNOWN"
