"""State types and thermal-quantity tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qledger.errors import DimMismatch, NonPositiveTemperature, NotHermitian
from qledger.qstate import (
    DensityMatrix,
    Hamiltonian,
    OverlapMatrix,
    ThermalParams,
    free_energy,
    gibbs_state,
    internal_energy,
    l1_coherence,
    overlap_matrix,
    partition_function,
    state_decomposition,
    two_level_hamiltonian,
    von_neumann_entropy,
)

# -sum(p ln p) over the frozen decayed-plus eigenvalues at t = 1
# (0.06197721461516115, 0.9380227853848389); recomputed in-test below.
DECAYED_PLUS_T1_ENTROPY = 0.23237359134627755


def decayed_plus_state(t):
    x = np.exp(-t)
    r = 0.5 * np.sqrt(x)
    return DensityMatrix(
        np.array([[1.0 - 0.5 * x, r], [r, 0.5 * x]], dtype=np.complex128)
    )


def haar_like_unitary(rng, dim):
    q, _ = np.linalg.qr(
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    )
    return q


def test_gibbs_populations_at_log_two():
    # beta * gap = ln 2 makes the Boltzmann weights (1, 1/2)
    h = two_level_hamiltonian(0.0, 1.0)
    rho = gibbs_state(h, ThermalParams(1.0 / np.log(2.0)))
    np.testing.assert_allclose(
        np.diag(rho.matrix).real, [2.0 / 3.0, 1.0 / 3.0], atol=1e-14
    )
    assert abs(rho.matrix[0, 1]) == 0.0


def test_gibbs_ground_state_at_low_temperature():
    rho = gibbs_state(two_level_hamiltonian(0.0, 1.0), ThermalParams(1e-6))
    np.testing.assert_allclose(np.diag(rho.matrix).real, [1.0, 0.0], atol=1e-15)


def test_partition_function_and_free_energy():
    h = two_level_hamiltonian(0.0, 1.0)
    thermal = ThermalParams(0.5)
    z = partition_function(h, thermal)
    assert z == pytest.approx(1.0 + np.exp(-2.0), abs=1e-14)
    assert free_energy(h, thermal) == pytest.approx(-0.5 * np.log(z), abs=1e-14)


def test_free_energy_identity():
    # F = U - T S for the equilibrium state
    h = Hamiltonian(np.array([[-0.3, 0.2], [0.2, 0.9]], dtype=complex))
    for temperature in (0.2, 1.0, 5.0):
        thermal = ThermalParams(temperature)
        rho = gibbs_state(h, thermal)
        lhs = free_energy(h, thermal)
        rhs = internal_energy(rho, h) - temperature * von_neumann_entropy(rho)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_entropy_decayed_plus_frozen():
    lo, hi = 0.06197721461516115, 0.9380227853848389
    assert -(lo * np.log(lo) + hi * np.log(hi)) == pytest.approx(
        DECAYED_PLUS_T1_ENTROPY, abs=1e-15
    )
    assert von_neumann_entropy(decayed_plus_state(1.0)) == pytest.approx(
        DECAYED_PLUS_T1_ENTROPY, abs=1e-12
    )


def test_entropy_unitary_invariance():
    rng = np.random.default_rng(11)
    p = np.array([0.5, 0.3, 0.2])
    ref = float(-(p * np.log(p)).sum())
    for _ in range(5):
        q = haar_like_unitary(rng, 3)
        rho = DensityMatrix((q * p) @ q.conj().T)
        assert von_neumann_entropy(rho) == pytest.approx(ref, abs=1e-12)


def test_entropy_of_pure_state_is_zero():
    rho = DensityMatrix(np.diag([1.0, 0.0, 0.0]).astype(complex))
    assert von_neumann_entropy(rho) == 0.0


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=40, deadline=None)
def test_overlap_matrix_doubly_stochastic(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 7))
    w = overlap_matrix(haar_like_unitary(rng, dim), haar_like_unitary(rng, dim))
    np.testing.assert_allclose(w.w.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(w.w.sum(axis=1), 1.0, atol=1e-12)
    assert float(w.w.min()) >= 0.0


def test_overlap_matrix_rejects_non_stochastic():
    with pytest.raises(ValueError):
        OverlapMatrix(np.array([[0.9, 0.0], [0.0, 0.9]]))
    with pytest.raises(DimMismatch):
        overlap_matrix(np.eye(2), np.eye(3))


def test_l1_coherence_decays_at_half_rate():
    # off-diagonal magnitudes sqrt(x)/2 on each side: l1 = exp(-t/2)
    for t in (0.0, 0.5, 1.0, 3.0):
        rho = decayed_plus_state(t)
        assert l1_coherence(rho, np.eye(2, dtype=complex)) == pytest.approx(
            np.exp(-0.5 * t), abs=1e-14
        )


def test_l1_coherence_vanishes_in_own_eigenbasis():
    rho = decayed_plus_state(0.7)
    dec = state_decomposition(rho)
    assert l1_coherence(rho, dec.vectors) == pytest.approx(0.0, abs=1e-13)


def test_internal_energy_hand_value():
    rho = DensityMatrix(np.diag([0.25, 0.75]).astype(complex))
    assert internal_energy(rho, two_level_hamiltonian(0.0, 2.0)) == pytest.approx(
        1.5, abs=1e-15
    )


def test_density_matrix_gates():
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.6, 0.6]).astype(complex))  # trace 1.2
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]).astype(complex))  # negative eigenvalue
    with pytest.raises(NotHermitian):
        DensityMatrix(np.array([[0.5, 0.5], [0.1, 0.5]], dtype=complex))


def test_thermal_params_gate():
    with pytest.raises(NonPositiveTemperature):
        ThermalParams(0.0)
    with pytest.raises(NonPositiveTemperature):
        ThermalParams(-1.0)
    assert ThermalParams(0.25).beta == 4.0


def test_matrices_are_read_only():
    h = two_level_hamiltonian(0.0, 1.0)
    with pytest.raises(ValueError):
        h.matrix[0, 0] = 5.0
    rho = decayed_plus_state(1.0)
    with pytest.raises(ValueError):
        rho.matrix[0, 1] = 0.0
