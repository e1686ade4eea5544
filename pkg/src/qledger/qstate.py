"""States, Hamiltonians, thermal quantities, and basis-overlap helpers.

Natural units throughout: hbar = k_B = 1, logarithms are natural, so
entropy is in nats and beta = 1/T.  Basis convention for two-level
systems: index 0 is the ground state, index 1 the excited state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, NonPositiveTemperature, NotHermitian
from .linalg import (
    HERMITICITY_TOL,
    SpectralDecomposition,
    as_square_matrix,
    hermitian_eig,
    hermiticity_defect,
    trace_product,
)

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
STOCHASTIC_TOL = 1e-10


def _frozen_copy(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def _require_hermitian(m: np.ndarray, name: str) -> None:
    defect = hermiticity_defect(m)
    if defect > HERMITICITY_TOL * max(float(np.linalg.norm(m)), 1.0):
        raise NotHermitian(f"{name} deviates from Hermitian by {defect:.3e}")


@dataclass(frozen=True)
class Hamiltonian:
    """Hermitian generator; entries are energies in natural units."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square_matrix(self.matrix, "Hamiltonian")
        _require_hermitian(m, "Hamiltonian")
        object.__setattr__(self, "matrix", _frozen_copy(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive-semidefinite Hermitian state."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square_matrix(self.matrix, "density matrix")
        _require_hermitian(m, "density matrix")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr!r} deviates from 1")
        # eigvalsh is validation plumbing only; production eigenpaths all go
        # through hermitian_eig.
        smallest = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
        if smallest < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {smallest:.3e}")
        object.__setattr__(self, "matrix", _frozen_copy(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ThermalParams:
    """Bath temperature in natural units (k_B = 1)."""

    temperature: float

    def __post_init__(self):
        if not (self.temperature > 0.0) or not np.isfinite(self.temperature):
            raise NonPositiveTemperature(
                f"temperature must be > 0, got {self.temperature!r}"
            )

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


@dataclass(frozen=True)
class OverlapMatrix:
    """w[n, k] = |<n|k>|^2 between two orthonormal bases; doubly stochastic."""

    w: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimMismatch(f"overlap matrix must be square, got {w.shape}")
        n = w.shape[0]
        row_defect = float(np.max(np.abs(w.sum(axis=1) - 1.0))) if n else 0.0
        col_defect = float(np.max(np.abs(w.sum(axis=0) - 1.0))) if n else 0.0
        if w.size and (float(w.min()) < -STOCHASTIC_TOL):
            raise ValueError(f"overlap matrix has negative entry {w.min():.3e}")
        if max(row_defect, col_defect) > STOCHASTIC_TOL:
            raise ValueError(
                "overlap matrix is not doubly stochastic: "
                f"row defect {row_defect:.3e}, column defect {col_defect:.3e}"
            )
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def dim(self) -> int:
        return self.w.shape[0]


def two_level_hamiltonian(e_ground: float, e_excited: float) -> Hamiltonian:
    """Diagonal two-level Hamiltonian, ground level first."""
    return Hamiltonian(np.diag([float(e_ground), float(e_excited)]).astype(complex))


def overlap_matrix(basis_a: np.ndarray, basis_b: np.ndarray) -> OverlapMatrix:
    """Squared-overlap matrix between two orthonormal column bases."""
    a = np.asarray(basis_a, dtype=np.complex128)
    b = np.asarray(basis_b, dtype=np.complex128)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"bases must be square and matched: {a.shape} vs {b.shape}")
    return OverlapMatrix(np.abs(a.conj().T @ b) ** 2)


def gibbs_state(h: Hamiltonian, thermal: ThermalParams) -> DensityMatrix:
    """Thermal equilibrium state exp(-beta H)/Z."""
    dec = hermitian_eig(h.matrix)
    # Shift by the ground energy before exponentiating so that large beta
    # underflows gracefully instead of overflowing.
    shifted = dec.values - dec.values[0]
    weights = np.exp(-thermal.beta * shifted)
    populations = weights / weights.sum()
    m = (dec.vectors * populations) @ dec.vectors.conj().T
    return DensityMatrix(m)


def partition_function(h: Hamiltonian, thermal: ThermalParams) -> float:
    """Z = sum_n exp(-beta E_n)."""
    values = hermitian_eig(h.matrix).values
    shifted = values - values[0]
    return float(np.exp(-thermal.beta * values[0]) * np.exp(-thermal.beta * shifted).sum())


def free_energy(h: Hamiltonian, thermal: ThermalParams) -> float:
    """Helmholtz free energy F = -T ln Z, computed overflow-safe."""
    values = hermitian_eig(h.matrix).values
    shifted = values - values[0]
    log_z = -thermal.beta * values[0] + np.log(np.exp(-thermal.beta * shifted).sum())
    return float(-thermal.temperature * log_z)


def clamped_populations(values: np.ndarray) -> np.ndarray:
    """Clamp near-boundary eigenvalues of a state into [0, 1]."""
    v = np.asarray(values, dtype=np.float64)
    if v.size and float(v.min()) < -PSD_TOL:
        raise ValueError(f"population {v.min():.3e} below -{PSD_TOL:g}")
    return np.clip(v, 0.0, 1.0)


def entropy_from_populations(values: np.ndarray) -> float:
    """Shannon entropy (nats) of a clamped population vector."""
    p = clamped_populations(values)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -tr(rho ln rho) in nats."""
    return entropy_from_populations(hermitian_eig(rho.matrix).values)


def internal_energy(rho: DensityMatrix, h: Hamiltonian) -> float:
    """U = tr(rho H); the imaginary part must vanish to roundoff."""
    u = trace_product(rho.matrix, h.matrix)
    scale = max(float(np.linalg.norm(h.matrix)), 1.0)
    if abs(u.imag) > 1e-10 * scale:
        raise ValueError(f"tr(rho H) has imaginary part {u.imag:.3e}")
    return float(u.real)


def l1_coherence(rho: DensityMatrix, basis: np.ndarray) -> float:
    """Sum of |off-diagonal| entries of rho expressed in the given basis."""
    b = np.asarray(basis, dtype=np.complex128)
    if b.shape != rho.matrix.shape:
        raise DimMismatch(f"basis shape {b.shape} does not match state {rho.matrix.shape}")
    in_basis = b.conj().T @ rho.matrix @ b
    mags = np.abs(in_basis)
    return float(mags.sum() - np.trace(mags))


def state_decomposition(rho: DensityMatrix) -> SpectralDecomposition:
    """Eigen-decomposition of a state via the production eigensolver."""
    return hermitian_eig(rho.matrix)
