import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from windext.catalog import random_case
from windext.criteria import (
    CERTIFIED,
    F_PLUS_PI_P,
    INCONCLUSIVE,
    PF_PLUS_ONE,
    REFUTED,
    ProbeFamily,
    certify_by_deflation,
    certify_meromorphic_extension,
    classify_with_factors,
    generate_probes,
    probe_winding,
    reduce_nonvanishing,
    shift_criterion_test,
    witness_search,
)
from windext.errors import NodeValueZero, ZeroOnBoundary
from windext.extension import meromorphic_test
from windext.spectral import BoundaryFunction, CircleGrid, Polynomial, ZeroFactorSet
from windext.winding import winding_number

PF1 = ProbeFamily(PF_PLUS_ONE)
PI_Z = ProbeFamily(F_PLUS_PI_P, ZeroFactorSet.of([(0, 1)]))


def test_probe_winding_examples(sample):
    assert probe_winding(sample(lambda z: z), Polynomial([0.5]), PF1).winding == 0
    f = sample(np.conj)
    rep = probe_winding(f, Polynomial([0.5, -1]), PF1)
    assert rep.winding == -1


def test_invalid_probe_is_not_a_violation(sample):
    with pytest.raises(ZeroOnBoundary):
        probe_winding(sample(lambda z: z), Polynomial([-1]), PF1)


def test_counterexample_satisfies_criterion_on_every_valid_probe(sample):
    f = sample(lambda z: z / (z - 0.5))
    for p in generate_probes(f, PI_Z, 300, seed=2):
        try:
            assert probe_winding(f, p, PI_Z).winding >= 0
        except ZeroOnBoundary:
            pass


def test_witness_found_for_conj_z(sample):
    res = witness_search(sample(np.conj), PF1, 1000, seed=0)
    assert res.found and res.winding <= -1 and res.probes_tried <= 1000
    assert probe_winding(sample(np.conj), res.probe, PF1).winding <= -1


@pytest.mark.parametrize("family", [PF1, PI_Z, ProbeFamily(F_PLUS_PI_P, ZeroFactorSet.of([(1, 1), (0.5, 1)]))])
def test_no_witness_for_extendible(sample, family):
    res = witness_search(sample(lambda z: z ** 3), family, 10_000, seed=1)
    assert not res.found and res.probes_tried == 10_000 and res.min_winding >= -family.budget


def test_no_witness_for_counterexample(sample):
    res = witness_search(sample(lambda z: z / (z - 0.5)), PI_Z, 10_000, seed=0)
    assert not res.found and res.valid_probes > 0
    assert "message=no witness found in 10000 probes" in res.lines()


def test_witness_search_is_reproducible(sample):
    f = sample(lambda z: np.conj(z) ** 2 + 0.3 * z)
    a = witness_search(f, PF1, 500, seed=7)
    b = witness_search(f, PF1, 500, seed=7, workers=4)
    assert a.found == b.found and a.probes_tried == b.probes_tried
    if a.found:
        assert np.array_equal(a.probe.coeffs, b.probe.coeffs)


def test_larger_budget_needs_stronger_witness(sample):
    f = sample(np.conj)
    res = witness_search(f, ProbeFamily(PF_PLUS_ONE, budget=1), 2000, seed=0)
    assert not res.found or res.winding <= -2


@settings(max_examples=25)
@given(st.integers(0, 2 ** 31 - 1))
def test_reciprocal_identity(seed):
    grid = CircleGrid(1024)
    rng = np.random.default_rng(seed)
    f = BoundaryFunction(grid, (grid.z - 0.3) * (2 + np.conj(grid.z) * rng.uniform(0.1, 1.5)))
    P = Polynomial(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    try:
        lhs = winding_number(f * P(grid.z) + 1).winding
        rhs = winding_number(f).winding + winding_number(f.reciprocal() + P(grid.z)).winding
    except ZeroOnBoundary:
        return
    assert lhs == rhs


def test_reduce_nonvanishing_examples(sample):
    h, N = reduce_nonvanishing(sample(lambda z: z))
    assert N == 1 and np.allclose(h.values, 1 / h.z)
    h, N = reduce_nonvanishing(sample(lambda z: 2 + z))
    assert N == 0 and np.allclose(h.values, 1 / (2 + h.z))
    f = sample(lambda z: z ** 2 * (2 + z.real))
    assert reduce_nonvanishing(f)[1] == 2


# three worked certification examples
def test_certify_double_node_holomorphic(sample):
    res = certify_meromorphic_extension(sample(lambda z: (z - 1) ** 2 / (1 - z / 3)), ZeroFactorSet.of([(1, 2)]), 0)
    assert res.status == CERTIFIED and res.pole_count == 0 and res.residual <= 1e-7


def test_certify_one_pole(sample):
    f = sample(lambda z: (z - 1) / (z - 0.5))
    res = certify_meromorphic_extension(f, ZeroFactorSet.of([(1, 1)]), 1)
    assert res.status == CERTIFIED and res.pole_count == 1 and res.residual <= 1e-7
    assert abs(res.poles[0][0] - 0.5) < 1e-8
    ext = res.extension.on(f.grid).values
    assert np.max(np.abs(ext - f.values)) <= 1e-7 * f.sup_norm()
    hankel = meromorphic_test(f, 1)
    assert hankel.pole_count == 1 and abs(hankel.poles()[0] - res.poles[0][0]) < 1e-6


def test_certify_non_extendible(sample):
    f = sample(lambda z: (z - 1) * np.conj(z))
    nodes = ZeroFactorSet.of([(1, 1)])
    res = certify_meromorphic_extension(f, nodes, 0)
    assert res.status == INCONCLUSIVE and res.witness is None
    res = certify_meromorphic_extension(f, nodes, 0, probes=1000)
    assert res.status == REFUTED and res.witness.found
    assert probe_winding(f, res.witness.probe, PF1).winding <= -1
    with pytest.raises(NodeValueZero):
        certify_meromorphic_extension(f, nodes, 0, strict=True)


def test_certified_never_exceeds_budget(sample):
    f = sample(lambda z: (z - 1) / ((z - 0.5) * (z + 0.4)))
    nodes = ZeroFactorSet.of([(1, 1)])
    assert certify_meromorphic_extension(f, nodes, 1).status != CERTIFIED
    res = certify_meromorphic_extension(f, nodes, 2)
    assert res.status == CERTIFIED and res.pole_count == 2


# three worked deflation examples
def test_deflation_polynomial(sample):
    res = certify_by_deflation(sample(lambda z: (z - 1) ** 2 * (z + 2)), ZeroFactorSet.of([(1, 2)]), 0)
    assert res.status == CERTIFIED and res.pole_count == 0


def test_deflation_one_pole(sample):
    res = certify_by_deflation(sample(lambda z: (z - 1) / (z - 1 / 3)), ZeroFactorSet.of([(1, 1)]), 1)
    assert res.status == CERTIFIED and res.pole_count == 1
    assert abs(res.poles[0][0] - 1 / 3) < 1e-6


def test_deflation_non_extendible(sample):
    f = sample(lambda z: (z - 1) * np.exp(np.conj(z)))
    res = certify_by_deflation(f, ZeroFactorSet.of([(1, 1)]), 0, probes=1000)
    assert res.status == REFUTED and res.witness.found
    assert probe_winding(f, res.witness.probe, PF1).winding <= -1


# worked examples for mixed node polynomials
def test_classify_inside_factor(sample):
    res = classify_with_factors(sample(lambda z: z / (z - 0.5)), ZeroFactorSet.of([(0, 1)]), 0)
    assert res.status == CERTIFIED and res.budget == 1 and res.pole_count == 1


def test_classify_outside_factor_dropped(sample):
    f = sample(lambda z: z ** 2)
    a = classify_with_factors(f, ZeroFactorSet.of([(2, 1)]), 0)
    b = classify_with_factors(f, ZeroFactorSet(), 0)
    assert a.status == b.status == CERTIFIED and a.pole_count == b.pole_count == 0


def test_classify_mixed(sample):
    f = sample(lambda z: (z - 1) / (1 - z / 3))
    res = classify_with_factors(f, ZeroFactorSet.of([(1, 1), (0.5, 1)]), 0)
    assert res.status == CERTIFIED and res.pole_count == 1
    assert abs(res.poles[0][0] - 0.5) < 1e-6


def test_shift_examples(sample):
    assert shift_criterion_test(sample(lambda z: z ** 2)).status == CERTIFIED
    res = shift_criterion_test(sample(np.conj), probes=1000)
    assert res.status == REFUTED and res.witness.found
    assert shift_criterion_test(sample(lambda z: 0 * z)).status == CERTIFIED


def test_soundness_on_random_extendible_cases():
    grid = CircleGrid(1024)
    for seed in range(5):
        case = random_case("extendible", seed, grid)
        res = witness_search(case.f, PF1, 300, seed=seed)
        assert not res.found and (res.min_winding is None or res.min_winding >= 0)
