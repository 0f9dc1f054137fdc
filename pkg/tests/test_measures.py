import math
import random

import pytest

import oracles
from pbflab import measures as M
from pbflab.boolfn import UNDEF, PartialFunction, make_slice, make_symmetric


def or3():
    return PartialFunction.total_from_ones(3, range(1, 8))


def dictator_slice3():
    return make_slice(3, 1, {1: 1, 2: 0, 4: 0})


def separator4():
    # f(e_i) = 1 iff i <= 2, on the 1-slice of the 4-cube
    return make_slice(4, 1, {1: 1, 2: 1, 4: 0, 8: 0})


def const0_punctured():
    return PartialFunction(3, bytes([UNDEF] + [0] * 7))


def test_sensitivity_examples():
    assert M.sensitivity(or3(), 0) == 3
    assert M.sensitivity(dictator_slice3(), 1, promise=False) == 0
    assert M.sensitivity(dictator_slice3(), 1, promise=True) == 3
    with pytest.raises(ValueError):
        M.sensitivity(const0_punctured(), 0)


def test_block_sensitivity_examples():
    assert M.block_sensitivity(or3(), 0) == 3
    assert M.block_sensitivity(const0_punctured(), 0b001, promise=True) == 1
    assert M.block_sensitivity(const0_punctured(), 0b001, promise=False) == 0


def test_certificate_examples():
    assert M.certificate(separator4(), 1, strict=False) == 1
    assert M.certificate(separator4(), 1, strict=True) == 4
    assert M.certificate(or3(), 0, strict=True) == 3


def test_deterministic_complexity_examples():
    xor3 = PartialFunction.from_values(3, [x.bit_count() % 2 for x in range(8)])
    assert M.deterministic_complexity(xor3) == 3
    assert M.deterministic_complexity(make_symmetric(4, {0: 0, 4: 1})) == 1
    dj4 = make_symmetric(4, {0: 0, 4: 0, 2: 1})
    assert M.deterministic_complexity(dj4) == 3  # n - gap + 1 = 4 - 2 + 1


def test_deterministic_complexity_cap_refusal():
    f = make_symmetric(6, {0: 0, 6: 1})
    with pytest.raises(M.ExactComputationRefused):
        M.deterministic_complexity(f, arity_cap=5)


def test_critical_measures_examples():
    # unique completion of a total function
    f = or3()
    assert M.critical_block_sensitivity(f) == (3, True)
    assert M.critical_certificate(f) == (3, True)
    # punctured constant: the constant completion kills every sensitive block
    assert M.critical_block_sensitivity(const0_punctured()) == (0, True)
    # slice dictator: full enumeration over 2**5 completions
    cbs, exact = M.critical_block_sensitivity(dictator_slice3())
    assert exact
    rep = M.measure_report(dictator_slice3())
    assert rep.bs <= cbs <= rep.bs_perp
    assert cbs == 1  # the global dictator extension achieves bs = 1


def test_critical_budget_fallback():
    f = PartialFunction(5, bytes([UNDEF] * 20 + [0, 1] * 6))
    cbs, exact = M.critical_block_sensitivity(f, budget=8)
    assert not exact
    assert cbs == M.block_sensitivity_measure(f, promise=True)
    with pytest.raises(ValueError):
        M.critical_certificate(f, budget=8)


def test_monotone_domain_completion_achieves_certificate():
    # domain = points below x*; g(x) = f(x & x*) realizes cbs = bs and
    # a critical certificate equal to C(f)
    rng = random.Random(5)
    for _ in range(10):
        n = 4
        xstar = rng.randrange(1, 1 << n)
        table = bytearray([UNDEF]) * (1 << n)
        for x in range(1 << n):
            if x & ~xstar == 0:
                table[x] = rng.randint(0, 1)
        f = PartialFunction(n, bytes(table))
        rep = M.measure_report(f)
        assert rep.cbs_exact and rep.cbs == rep.bs
        assert rep.ccrit == rep.cert


def test_fractional_certificate_examples():
    f = or3()
    assert M.fractional_certificate(f, 0) == pytest.approx(3.0, abs=1e-7)
    assert M.fractional_certificate(f, 0b001) == pytest.approx(1.0, abs=1e-7)
    assert M.fractional_block_sensitivity(f, 0) == pytest.approx(3.0, abs=1e-7)
    const = PartialFunction(2, bytes([0, 0, UNDEF, UNDEF]))
    assert M.fractional_certificate(const, 0) == 0.0
    assert M.fractional_block_sensitivity(const, 0) == 0.0


def test_fractional_duality_random():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(2, 5)
        table = bytes(rng.choice([0, 1, 2]) for _ in range(1 << n))
        f_dom = [x for x in range(1 << n) if table[x] != 2]
        if not f_dom:
            continue
        f = PartialFunction(n, table)
        for x in f_dom:
            fc = M.fractional_certificate(f, x)
            fbs = M.fractional_block_sensitivity(f, x)
            assert abs(fc - fbs) <= 1e-6
            assert fbs <= M.certificate(f, x, strict=False) + 1e-6
            assert M.block_sensitivity(f, x) <= fbs + 1e-6


def test_measure_report_total_collapse():
    rng = random.Random(3)
    for _ in range(10):
        table = bytes(rng.randint(0, 1) for _ in range(16))
        rep = M.measure_report(PartialFunction(4, table))
        assert rep.s == rep.s_perp
        assert rep.bs == rep.bs_perp == rep.cbs
        assert rep.cert == rep.cert_perp == rep.ccrit


def test_observation_chains_random():
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(2, 5)
        table = bytes(rng.choice([0, 0, 1, 1, 2]) for _ in range(1 << n))
        f = PartialFunction(n, table)
        if f.domain_size == 0:
            continue
        rep = M.measure_report(f)
        for px in rep.per_point.values():
            assert px["s_perp"] <= px["bs_perp"] <= px["cert_strict"]
            assert px["s"] <= px["bs"] <= px["cert_promise"]
            assert px["s"] <= px["s_perp"]
            assert px["bs"] <= px["bs_perp"]
        if not f.is_constant_on_domain():
            assert rep.cert <= rep.bs * rep.s_perp
            assert rep.depth <= min(rep.cert0_promise, rep.cert1_promise) * rep.bs_perp
            assert rep.depth <= min(rep.cert0_strict, rep.cert1_strict) * rep.bs
            assert rep.depth <= min(
                rep.cert1_strict * rep.cert0_promise,
                rep.cert0_strict * rep.cert1_promise,
            )
            assert rep.depth <= rep.bs_perp**3
        if rep.cbs_exact:
            assert rep.bs <= rep.cbs <= rep.bs_perp
            assert rep.depth <= rep.ccrit * rep.cbs or f.is_constant_on_domain()


def test_speedup_requirements_report():
    rep = M.speedup_requirements_report(make_symmetric(4, {0: 0, 4: 0, 2: 1}))
    assert rep["all_chains_hold"]
    assert rep["conditions"]["cbs_vs_bs_perp"]["ratio"] >= 1.0
    total = M.speedup_requirements_report(or3())
    assert total["conditions"]["cert_collapse"]["ratio"] == 1.0
    assert total["conditions"]["cbs_vs_bs_perp"]["ratio"] == 1.0


def test_replay_variants_exact_examples():
    out, used = M.run_cert_bs_algorithm(or3(), 0b101, "L3.2-2")
    assert out == 1 and used <= 3
    sep = separator4()
    bound = M.query_bound(sep, "L3.3")
    out, used = M.run_cert_bs_algorithm(sep, 0b0100, "L3.3")
    assert out == 0 and used <= bound
    const = const0_punctured()
    for x in const.domain():
        out, used = M.run_cert_bs_algorithm(const, x, "L3.2-1")
        assert out == 0 and used == 0


def test_replays_randomized():
    rng = random.Random(23)
    for _ in range(50):
        n = rng.randint(2, 5)
        table = bytes(rng.choice([0, 0, 1, 1, 2]) for _ in range(1 << n))
        f = PartialFunction(n, table)
        if f.domain_size == 0:
            continue
        for variant in ("L3.2-1", "L3.2-2", "L3.2-3", "L3.3"):
            bound = M.query_bound(f, variant)
            for x in f.domain():
                out, used = M.run_cert_bs_algorithm(f, x, variant)
                assert out == f.evaluate(x)
                assert used <= bound


def test_replay_rejects_off_domain_input():
    with pytest.raises(ValueError):
        M.run_cert_bs_algorithm(const0_punctured(), 0, "L3.2-1")


def test_appendix_ratio_positive():
    f = make_symmetric(4, {0: 0, 4: 1})
    r = M.appendix_ratio(f, 1)
    assert r == pytest.approx(1 / math.log(4) ** 2, rel=1e-9)
