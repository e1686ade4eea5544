"""Decay-channel and driven-state tests."""

import numpy as np
import pytest

from qledger.channels import (
    DecayParams,
    KrausChannel,
    ad_closed_form,
    amplitude_damping_kraus,
    apply_channel,
    iterate_channel,
    plus_state,
    rabi_state,
)
from qledger.errors import NegativeTime, ProbabilityOutOfRange
from qledger.qstate import DensityMatrix

# n-step excited-population survival factor (1 - 1/n)^n at n = 1000,
# versus its continuum limit exp(-1); both frozen from direct evaluation.
SURVIVAL_1000 = 0.36769542477096373
SURVIVAL_GAP_1000 = 1.840164004786038e-04


def test_kraus_completeness():
    for p in (0.0, 0.3, 1.0):
        channel = amplitude_damping_kraus(p)
        total = sum(k.conj().T @ k for k in channel.operators)
        np.testing.assert_allclose(total, np.eye(2), atol=1e-15)


def test_kraus_channel_rejects_incomplete_set():
    half = np.array([[0.5, 0.0], [0.0, 0.5]], dtype=complex)
    with pytest.raises(ValueError):
        KrausChannel((half,))
    with pytest.raises(ValueError):
        KrausChannel(())


def test_apply_channel_hand_value():
    # p = 3/4 on the equal superposition: excited 0.5 -> 0.125, the lost
    # 0.375 lands in the ground population, coherence scales by 1/2
    out = apply_channel(amplitude_damping_kraus(0.75), plus_state())
    np.testing.assert_allclose(
        out.matrix, [[0.875, 0.25], [0.25, 0.125]], rtol=0.0, atol=1e-15
    )


def test_probability_gate():
    with pytest.raises(ProbabilityOutOfRange):
        amplitude_damping_kraus(1.2)
    with pytest.raises(ProbabilityOutOfRange):
        amplitude_damping_kraus(-0.1)


def test_closed_form_plus_state():
    decay = DecayParams(0.7)
    rho = ad_closed_form(plus_state(), decay, 2.0)
    x = np.exp(-1.4)
    r = 0.5 * np.sqrt(x)
    np.testing.assert_allclose(
        rho.matrix, [[1.0 - 0.5 * x, r], [r, 0.5 * x]], rtol=0.0, atol=1e-15
    )


def test_closed_form_general_state():
    # populations relax with exp(-g t), coherences with exp(-g t / 2)
    rho0 = DensityMatrix(np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, 0.7]]))
    out = ad_closed_form(rho0, DecayParams(1.3), 0.9)
    x = np.exp(-1.3 * 0.9)
    assert out.matrix[1, 1] == pytest.approx(0.7 * x, abs=1e-15)
    assert out.matrix[0, 0] == pytest.approx(0.3 + 0.7 * (1.0 - x), abs=1e-15)
    assert out.matrix[0, 1] == pytest.approx((0.2 - 0.1j) * np.sqrt(x), abs=1e-15)


def test_closed_form_time_zero_is_identity():
    rho0 = plus_state()
    out = ad_closed_form(rho0, DecayParams(2.0), 0.0)
    np.testing.assert_array_equal(out.matrix, rho0.matrix)


def test_iterate_vs_closed_form_frozen_gap():
    decay = DecayParams(1.0)
    out = iterate_channel(plus_state(), decay, 1.0, 1000)
    # 1000 applications accumulate ~1.5e-14 of roundoff vs the exact power
    assert out.matrix[1, 1].real == pytest.approx(0.5 * SURVIVAL_1000, abs=1e-12)
    exact = ad_closed_form(plus_state(), decay, 1.0)
    gap = out.matrix[1, 1].real - exact.matrix[1, 1].real
    assert -gap == pytest.approx(0.5 * SURVIVAL_GAP_1000, abs=1e-12)
    # coherence accumulates the half-rate factor per step
    assert out.matrix[0, 1].real == pytest.approx(0.5 * 0.999**500, abs=1e-12)


def test_step_probability_and_gates():
    decay = DecayParams(2.0)
    assert decay.step_probability(1.0, 1000) == pytest.approx(0.002, abs=1e-18)
    with pytest.raises(NegativeTime):
        decay.step_probability(-1.0, 10)
    with pytest.raises(ValueError):
        decay.step_probability(1.0, 0)
    with pytest.raises(ValueError):
        DecayParams(-0.5)
    with pytest.raises(ProbabilityOutOfRange):
        iterate_channel(plus_state(), DecayParams(5.0), 1.0, 2)  # step p = 2.5


def test_rabi_state_pure_and_periodic():
    omega = np.pi
    for t in (0.0, 0.3, 1.0, 1.7):
        m = rabi_state(omega, t).matrix
        np.testing.assert_allclose(m @ m, m, atol=1e-14)  # projector
    np.testing.assert_allclose(
        rabi_state(omega, 1.0).matrix, np.diag([0.0, 1.0]), atol=1e-14
    )
    np.testing.assert_allclose(
        rabi_state(omega, 2.0).matrix, rabi_state(omega, 0.0).matrix, atol=1e-14
    )


def test_rabi_state_quarter_turn_coherence():
    # at omega t = pi/2 the off-diagonal reaches its maximum magnitude 1/2
    m = rabi_state(np.pi, 0.5).matrix
    assert m[0, 1] == pytest.approx(-0.5j, abs=1e-15)
    assert m[1, 0] == pytest.approx(0.5j, abs=1e-15)


def test_rabi_state_gates():
    with pytest.raises(ValueError):
        rabi_state(0.0, 1.0)
    with pytest.raises(NegativeTime):
        rabi_state(1.0, -0.1)
