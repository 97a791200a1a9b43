"""Decomposition search: exactness on easy cases, oracle bounds, qubit identity."""

import numpy as np
import pytest

from coherence_lab import (
    DensityMatrix,
    RoofOptimizerError,
    average_g,
    convex_roof_g,
    eigendecompose,
    g_coherence_pure,
    l1_coherence,
    projector,
    random_mixed_state,
    random_pure_state,
    sampled_roof_bound,
)
from coherence_lab.states import PureState


def eigen_ensemble_average(rho: DensityMatrix) -> float:
    # direct arithmetic on the spectral decomposition, no optimizer involved
    lam, vecs = eigendecompose(rho)
    return sum(
        lam[j] * g_coherence_pure(PureState(vecs[:, j])) for j in range(len(lam)) if lam[j] > 0
    )


def test_rank1_matches_pure_closed_form():
    psi = random_pure_state(3, 12)
    result = convex_roof_g(projector(psi), seed=0)
    assert result.converged and result.restarts_used == 0
    assert abs(result.value - g_coherence_pure(psi)) < 1e-10


def test_incoherent_diagonal_gives_zero():
    rho = DensityMatrix(np.diag([0.3, 0.7]).astype(complex))
    result = convex_roof_g(rho, seed=1)
    assert result.value < 1e-12


def test_value_matches_ensemble_average():
    rho = random_mixed_state(2, 2, 8)
    result = convex_roof_g(rho, seed=2)
    assert abs(result.value - average_g(result.ensemble)) < 1e-10


def test_ensemble_reproduces_input():
    rho = random_mixed_state(3, 2, 19)
    result = convex_roof_g(rho, seed=3)
    result.ensemble.assert_reproduces(rho, tol=1e-8)


def test_bounded_by_eigen_ensemble_and_sampling_oracle():
    for seed in (0, 1, 2):
        rho = random_mixed_state(2, 2, seed)
        result = convex_roof_g(rho, seed=seed + 100)
        assert result.value <= eigen_ensemble_average(rho) + 1e-10
        oracle = sampled_roof_bound(rho, 2000, seed=seed + 200)
        assert result.value <= oracle + 1e-8


def test_qubit_roof_equals_l1():
    for seed in range(5):
        rho = random_mixed_state(2, 2, seed + 40)
        result = convex_roof_g(rho, seed=seed)
        assert abs(result.value - l1_coherence(rho)) < 1e-6


def test_qutrit_rank2_below_eigen_average():
    rho = random_mixed_state(3, 2, 77)
    result = convex_roof_g(rho, seed=5)
    assert result.value <= eigen_ensemble_average(rho) + 1e-10


def test_convexity_one_sided():
    rng = np.random.default_rng(3)
    for seed in range(3):
        rho_a = random_mixed_state(2, 2, seed)
        rho_b = random_mixed_state(2, 2, seed + 50)
        lam = float(rng.uniform())
        mix = DensityMatrix(lam * rho_a.matrix + (1 - lam) * rho_b.matrix)
        v_mix = convex_roof_g(mix, seed=seed).value
        v_a = convex_roof_g(rho_a, seed=seed + 1).value
        v_b = convex_roof_g(rho_b, seed=seed + 2).value
        assert v_mix <= lam * v_a + (1 - lam) * v_b + 2e-8


def test_determinism():
    rho = random_mixed_state(2, 2, 4)
    first = convex_roof_g(rho, seed=9)
    second = convex_roof_g(rho, seed=9)
    assert first.value == second.value


def test_rejects_zero_restarts():
    with pytest.raises(RoofOptimizerError):
        convex_roof_g(random_mixed_state(2, 2, 0), restarts=0)
