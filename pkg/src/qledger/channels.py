"""Two-level dynamics: amplitude damping (Kraus form and closed form) and
resonant Rabi driving.

The amplitude-damping channel models spontaneous emission of the excited
level into a zero-temperature environment.  Its single-step Kraus pair is

    K0 = |g><g| + sqrt(1 - p) |e><e|        (nothing decayed)
    K1 = sqrt(p) |g><e|                     (one quantum emitted)

with p the decay probability for the step.  Composing n steps of
p = gamma * t / n converges (first order in 1/n) to the continuous-time
closed form implemented in :func:`ad_closed_form`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NegativeTime, ProbabilityOutOfRange
from .qstate import DensityMatrix

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class DecayParams:
    """Spontaneous-emission parameters.

    Parameters
    ----------
    gamma:
        Decay rate (inverse natural time), must be >= 0.
    """

    gamma: float

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 0.0:
            raise ValueError(f"decay rate must be >= 0, got {self.gamma!r}")

    def step_probability(self, t: float, n: int) -> float:
        """Decay probability per step when [0, t] is split into n steps."""
        if t < 0.0:
            raise NegativeTime(f"evolution time must be >= 0, got {t!r}")
        if n < 1:
            raise ValueError(f"step count must be >= 1, got {n!r}")
        return self.gamma * t / n


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace-preserving map in Kraus form.

    Parameters
    ----------
    operators:
        Tuple of equally sized square complex matrices K_i satisfying the
        completeness relation sum_i K_i^dagger K_i = identity within
        COMPLETENESS_TOL.
    """

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=np.complex128, copy=True) for k in self.operators)
        if not ops:
            raise ValueError("a Kraus channel needs at least one operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.ndim != 2 or k.shape != (dim, dim):
                raise DimMismatch(f"Kraus operators must all be {dim}x{dim}")
        total = sum(k.conj().T @ k for k in ops)
        defect = float(np.max(np.abs(total - np.eye(dim))))
        if defect > COMPLETENESS_TOL:
            raise ValueError(
                f"Kraus completeness defect {defect:.3e} exceeds {COMPLETENESS_TOL:g}"
            )
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def amplitude_damping_kraus(p: float) -> KrausChannel:
    """Kraus pair of the amplitude-damping channel.

    Parameters
    ----------
    p:
        Probability that the excited level decays during the step; must lie
        in [0, 1].

    Returns
    -------
    KrausChannel
        The two-operator channel (K0, K1) described in the module docstring.
    """
    if not np.isfinite(p) or p < 0.0 or p > 1.0:
        raise ProbabilityOutOfRange(f"decay probability must be in [0, 1], got {p!r}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1))


def apply_channel(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a Kraus channel: rho -> sum_i K_i rho K_i^dagger.

    The output trace is checked against 1 within COMPLETENESS_TOL before the
    result is re-wrapped as a DensityMatrix (which re-validates Hermiticity
    and positivity).
    """
    if channel.dim != rho.dim:
        raise DimMismatch(f"channel dim {channel.dim} vs state dim {rho.dim}")
    out = np.zeros_like(rho.matrix)
    for k in channel.operators:
        out = out + k @ rho.matrix @ k.conj().T
    tr = float(np.trace(out).real)
    if abs(tr - 1.0) > COMPLETENESS_TOL:
        raise ValueError(f"channel output trace {tr!r} deviates from 1")
    return DensityMatrix(out)


def ad_closed_form(rho0: DensityMatrix, decay: DecayParams, t: float) -> DensityMatrix:
    """Continuous-time amplitude damping of an arbitrary two-level state.

    Populations relax as exp(-gamma t) and coherences as exp(-gamma t / 2):

        rho_gg(t) = rho_gg + (1 - exp(-gamma t)) rho_ee
        rho_ge(t) = exp(-gamma t / 2) rho_ge
        rho_ee(t) = exp(-gamma t) rho_ee

    Parameters
    ----------
    rho0:
        Initial two-level state.
    decay:
        Decay rate container.
    t:
        Elapsed time, must be >= 0.
    """
    if rho0.dim != 2:
        raise DimMismatch(f"closed form is two-level only, got dim {rho0.dim}")
    if t < 0.0:
        raise NegativeTime(f"evolution time must be >= 0, got {t!r}")
    g = decay.gamma
    m = rho0.matrix
    decayed = np.exp(-g * t)
    half = np.exp(-0.5 * g * t)
    out = np.array(
        [
            [m[0, 0] + (1.0 - decayed) * m[1, 1], half * m[0, 1]],
            [half * m[1, 0], decayed * m[1, 1]],
        ],
        dtype=np.complex128,
    )
    return DensityMatrix(out)


def iterate_channel(
    rho0: DensityMatrix, decay: DecayParams, t: float, n: int
) -> DensityMatrix:
    """Compose n amplitude-damping steps of probability gamma*t/n each.

    Raises ProbabilityOutOfRange when gamma*t/n exceeds 1, i.e. when the
    discretization is too coarse for the requested decay.
    """
    p = decay.step_probability(t, n)
    channel = amplitude_damping_kraus(p)
    rho = rho0
    for _ in range(n):
        rho = apply_channel(channel, rho)
    return rho


def rabi_state(omega: float, t: float) -> DensityMatrix:
    """Pure state of a resonantly driven two-level system.

    The amplitude vector is (cos(omega t / 2), i sin(omega t / 2)) in the
    (ground, excited) basis; the returned matrix is its outer product, so
    the state is exactly pure.

    Parameters
    ----------
    omega:
        Rabi angular frequency, must be > 0.
    t:
        Time, must be >= 0.
    """
    if not np.isfinite(omega) or omega <= 0.0:
        raise ValueError(f"Rabi frequency must be > 0, got {omega!r}")
    if t < 0.0:
        raise NegativeTime(f"evolution time must be >= 0, got {t!r}")
    half = 0.5 * omega * t
    psi = np.array([np.cos(half), 1j * np.sin(half)], dtype=np.complex128)
    return DensityMatrix(np.outer(psi, psi.conj()))


def plus_state() -> DensityMatrix:
    """Equal superposition (|g> + |e>)/sqrt(2) as a density matrix."""
    return DensityMatrix(np.full((2, 2), 0.5, dtype=np.complex128))
