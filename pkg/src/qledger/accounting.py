"""Per-step energy accounting along a (state, Hamiltonian) trajectory.

The internal energy U = tr(rho H) can be written as a double sum over the
Hamiltonian eigensystem {E_n, |n>} and the state eigensystem {p_k, |k>}:

    U = sum_{n,k} E_n * p_k * w[n,k],      w[n,k] = |<n|k>|^2.

A step from sample a to sample b therefore splits the exact energy change
into three channels, one per moving factor, each discretized with the
midpoint (trapezoid-consistent) product rule:

    work      = sum (p_k w_nk)~ * dE_n     (energy levels shift)
    heat      = sum (E_n w_nk)~ * dp_k     (state populations shift)
    coherence = sum (E_n p_k)~  * dw_nk    (bases realign)

where x~ is the average of x at the two ends, taken over branch-matched
quantities.  The scheme leaves a third-order per-step residual
-sum dE dp dw / 2 which is reported, never folded into a channel; its
accumulated magnitude is the closure defect of the ledger.

Two cross-check decompositions are carried alongside: the energy-basis
split (populations P_n = <n|rho|n> against level shifts) and the
state-basis split (branch mean energies eps_k = <k|H|k> against population
shifts).  In the continuum the identities

    state-basis work  = work + coherence
    energy-basis heat = heat + coherence

hold exactly; discretely they agree within the closure tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, TrackingFailure
from .linalg import (
    SpectralDecomposition,
    branch_overlaps,
    hermitian_eig,
    track_eigenpairs,
)
from .qstate import (
    DensityMatrix,
    Hamiltonian,
    entropy_from_populations,
    internal_energy,
    l1_coherence,
    overlap_matrix,
)

POPULATION_TOL = 1e-10
DEGENERACY_TOL = 1e-8
OVERLAP_AMBIGUITY = 0.5


@dataclass(frozen=True)
class TrajectorySample:
    """One time point: the instantaneous Hamiltonian and state."""

    t: float
    hamiltonian: Hamiltonian
    state: DensityMatrix

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise ValueError(f"sample time must be finite, got {self.t!r}")
        if self.hamiltonian.dim != self.state.dim:
            raise DimMismatch(
                f"Hamiltonian dim {self.hamiltonian.dim} vs state dim {self.state.dim}"
            )

    @property
    def dim(self) -> int:
        return self.state.dim


@dataclass(frozen=True)
class Trajectory:
    """Ordered samples with strictly increasing times and a common dimension."""

    samples: tuple

    def __post_init__(self):
        samples = tuple(self.samples)
        if len(samples) < 2:
            raise ValueError(f"a trajectory needs >= 2 samples, got {len(samples)}")
        dim = samples[0].dim
        for i, s in enumerate(samples):
            if s.dim != dim:
                raise DimMismatch(f"sample {i} has dim {s.dim}, expected {dim}")
            if i and not (s.t > samples[i - 1].t):
                raise ValueError(
                    f"sample times must strictly increase: t[{i - 1}]={samples[i - 1].t!r}, "
                    f"t[{i}]={s.t!r}"
                )
        object.__setattr__(self, "samples", samples)

    @property
    def dim(self) -> int:
        return self.samples[0].dim

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class StepIncrement:
    """Energy bookkeeping for one interval; energy_change splits exactly."""

    work: float
    heat: float
    coherence: float
    energy_change: float
    residual: float

    @property
    def work_plus_coherence(self) -> float:
        """State-basis work of the step (levels shift plus realignment)."""
        return self.work + self.coherence

    @property
    def heat_plus_coherence(self) -> float:
        """Energy-basis heat of the step (population shift plus realignment)."""
        return self.heat + self.coherence


@dataclass(frozen=True)
class ClassicalDecompositions:
    """Cumulative two-way splits along both instantaneous eigenbases."""

    classical_work: np.ndarray
    classical_heat: np.ndarray
    state_work: np.ndarray
    state_heat: np.ndarray


@dataclass(frozen=True)
class EnergyLedger:
    """Cumulative energy columns over a trajectory.

    All columns are aligned with the sample times; cumulative columns are
    zero at the first sample.  ``closure_defect[m]`` is
    |U(m) - U(0) - (work + heat + coherence)(m)| and is bounded by
    ``closure_tolerance`` for the cross-check identities.
    """

    t: np.ndarray
    energy: np.ndarray
    work: np.ndarray
    heat: np.ndarray
    coherence: np.ndarray
    classical_work: np.ndarray
    classical_heat: np.ndarray
    state_work: np.ndarray
    state_heat: np.ndarray
    entropy: np.ndarray
    l1_coherence: np.ndarray
    closure_defect: np.ndarray
    closure_floor: float = field(default=0.0)
    closure_tolerance: float = field(default=0.0)

    def __post_init__(self):
        columns = {
            "t": self.t,
            "energy": self.energy,
            "work": self.work,
            "heat": self.heat,
            "coherence": self.coherence,
            "classical_work": self.classical_work,
            "classical_heat": self.classical_heat,
            "state_work": self.state_work,
            "state_heat": self.state_heat,
            "entropy": self.entropy,
            "l1_coherence": self.l1_coherence,
            "closure_defect": self.closure_defect,
        }
        n = len(self.t)
        for name, col in columns.items():
            arr = np.asarray(col, dtype=np.float64)
            if arr.shape != (n,):
                raise ValueError(f"ledger column {name} has shape {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"ledger column {name} has non-finite entries")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if n < 2:
            raise ValueError("a ledger needs >= 2 rows")
        if np.any(np.diff(self.t) <= 0.0):
            raise ValueError("ledger times must strictly increase")
        for name in ("work", "heat", "coherence", "classical_work",
                     "classical_heat", "state_work", "state_heat",
                     "closure_defect"):
            if getattr(self, name)[0] != 0.0:
                raise ValueError(f"ledger column {name} must start at exactly 0")
        tol = self.closure_tolerance
        split_work = np.max(np.abs(self.state_work - (self.work + self.coherence)))
        split_heat = np.max(np.abs(self.classical_heat - (self.heat + self.coherence)))
        if split_work > tol or split_heat > tol:
            raise ValueError(
                "ledger identities out of tolerance: "
                f"work split {split_work:.3e}, heat split {split_heat:.3e}, "
                f"allowed {tol:.3e}"
            )

    @property
    def work_plus_coherence(self) -> np.ndarray:
        return self.work + self.coherence

    @property
    def heat_plus_coherence(self) -> np.ndarray:
        return self.heat + self.coherence

    @property
    def max_closure_defect(self) -> float:
        return float(np.max(self.closure_defect))

    def __len__(self) -> int:
        return len(self.t)


def populations_energy_basis(rho: DensityMatrix, h: Hamiltonian) -> np.ndarray:
    """Diagonal of the state in the Hamiltonian eigenbasis (ascending order)."""
    if rho.dim != h.dim:
        raise DimMismatch(f"state dim {rho.dim} vs Hamiltonian dim {h.dim}")
    vectors = hermitian_eig(h.matrix).vectors
    pops = np.einsum("in,ij,jn->n", vectors.conj(), rho.matrix, vectors).real
    total = float(pops.sum())
    if abs(total - 1.0) > POPULATION_TOL:
        raise ValueError(f"populations sum to {total!r}, expected 1")
    if pops.size and float(pops.min()) < -POPULATION_TOL:
        raise ValueError(f"population {pops.min():.3e} below -{POPULATION_TOL:g}")
    return pops


@dataclass(frozen=True)
class _SampleEigs:
    """Branch-aligned per-sample eigendata consumed by the step rule."""

    t: float
    energies: np.ndarray
    energy_vectors: np.ndarray
    populations: np.ndarray
    state_vectors: np.ndarray
    overlap: np.ndarray
    u: float
    pops_direct: np.ndarray
    eps_direct: np.ndarray
    entropy: float
    l1: float


def _branch_isolated(values: np.ndarray, idx: int, tol: float) -> bool:
    gaps = np.abs(values - values[idx])
    gaps[idx] = np.inf
    return float(gaps.min()) > tol


def _check_tracking(
    prev: SpectralDecomposition,
    new: SpectralDecomposition,
    step_index: int,
    which: str,
) -> None:
    overlaps = branch_overlaps(prev, new)
    weak = np.nonzero(overlaps < OVERLAP_AMBIGUITY)[0]
    if weak.size == 0:
        return
    pv = prev.branch_values()
    nv = new.branch_values()
    scale = max(1.0, float(np.max(np.abs(pv))), float(np.max(np.abs(nv))))
    tol = DEGENERACY_TOL * scale
    for b in weak:
        # A feeble overlap inside a (near-)degenerate cluster is gauge, not
        # ambiguity: any orthonormal frame of the cluster is acceptable.
        if _branch_isolated(pv, b, tol) and _branch_isolated(nv, b, tol):
            raise TrackingFailure(
                f"{which} branch {b} continuity ambiguous at step {step_index}: "
                f"matched overlap {overlaps[b]:.3f} with isolated eigenvalue",
                step_index=step_index,
            )


def _sample_eigs(
    sample: TrajectorySample,
    h_dec: SpectralDecomposition,
    r_dec: SpectralDecomposition,
) -> _SampleEigs:
    v = h_dec.branch_vectors()
    k = r_dec.branch_vectors()
    energies = h_dec.branch_values()
    populations = r_dec.branch_values()
    w = overlap_matrix(v, k).w
    pops_direct = np.einsum(
        "in,ij,jn->n", v.conj(), sample.state.matrix, v
    ).real
    eps_direct = np.einsum(
        "ik,ij,jk->k", k.conj(), sample.hamiltonian.matrix, k
    ).real
    return _SampleEigs(
        t=sample.t,
        energies=energies,
        energy_vectors=v,
        populations=populations,
        state_vectors=k,
        overlap=w,
        u=internal_energy(sample.state, sample.hamiltonian),
        pops_direct=pops_direct,
        eps_direct=eps_direct,
        entropy=entropy_from_populations(r_dec.values),
        l1=l1_coherence(sample.state, v),
    )


def _sweep_eigendata(traj: Trajectory):
    """Decompose every sample with branch tracking threaded along the chain."""
    out = []
    h_dec = None
    r_dec = None
    prev_h_matrix = None
    for i, sample in enumerate(traj.samples):
        if h_dec is not None and np.array_equal(sample.hamiltonian.matrix, prev_h_matrix):
            new_h = h_dec
        else:
            eig_h = hermitian_eig(sample.hamiltonian.matrix)
            if h_dec is None:
                new_h = eig_h
            else:
                new_h = track_eigenpairs(h_dec, eig_h)
                _check_tracking(h_dec, new_h, i, "Hamiltonian")
        eig_r = hermitian_eig(sample.state.matrix)
        if r_dec is None:
            new_r = eig_r
        else:
            new_r = track_eigenpairs(r_dec, eig_r)
            _check_tracking(r_dec, new_r, i, "state")
        out.append(_sample_eigs(sample, new_h, new_r))
        h_dec, r_dec = new_h, new_r
        prev_h_matrix = sample.hamiltonian.matrix
    return out


def _pair_increment(a: _SampleEigs, b: _SampleEigs) -> StepIncrement:
    d_level = b.energies - a.energies
    d_pop = b.populations - a.populations
    d_w = b.overlap - a.overlap
    work = float(
        np.sum(0.5 * (a.populations * a.overlap + b.populations * b.overlap)
               * d_level[:, None])
    )
    heat = float(
        np.sum(0.5 * (a.energies[:, None] * a.overlap + b.energies[:, None] * b.overlap)
               * d_pop[None, :])
    )
    coherence = float(
        np.sum(0.5 * (np.outer(a.energies, a.populations)
                      + np.outer(b.energies, b.populations)) * d_w)
    )
    energy_change = b.u - a.u
    residual = energy_change - work - heat - coherence
    return StepIncrement(
        work=work,
        heat=heat,
        coherence=coherence,
        energy_change=energy_change,
        residual=residual,
    )


def step_increment(a: TrajectorySample, b: TrajectorySample) -> StepIncrement:
    """Three-way energy split for a single interval, tracked from ``a``."""
    if a.dim != b.dim:
        raise DimMismatch(f"sample dims differ: {a.dim} vs {b.dim}")
    eigs = _sweep_eigendata(Trajectory((a, b)))
    return _pair_increment(eigs[0], eigs[1])


def _accumulate(values) -> np.ndarray:
    return np.concatenate([[0.0], np.cumsum(np.asarray(values, dtype=np.float64))])


def analyze(traj: Trajectory) -> EnergyLedger:
    """Fold the step rule over a trajectory into a cumulative ledger."""
    eigs = _sweep_eigendata(traj)
    n_steps = len(eigs) - 1
    d_work = np.empty(n_steps)
    d_heat = np.empty(n_steps)
    d_coh = np.empty(n_steps)
    residuals = np.empty(n_steps)
    d_wcl = np.empty(n_steps)
    d_qcl = np.empty(n_steps)
    d_ws = np.empty(n_steps)
    d_qs = np.empty(n_steps)
    for i in range(n_steps):
        a, b = eigs[i], eigs[i + 1]
        inc = _pair_increment(a, b)
        d_work[i] = inc.work
        d_heat[i] = inc.heat
        d_coh[i] = inc.coherence
        residuals[i] = inc.residual
        d_level = b.energies - a.energies
        d_wcl[i] = np.sum(0.5 * (a.pops_direct + b.pops_direct) * d_level)
        d_qcl[i] = np.sum(0.5 * (a.energies + b.energies)
                          * (b.pops_direct - a.pops_direct))
        d_ws[i] = np.sum(0.5 * (a.populations + b.populations)
                         * (b.eps_direct - a.eps_direct))
        d_qs[i] = np.sum(0.5 * (a.eps_direct + b.eps_direct)
                         * (b.populations - a.populations))

    t = np.array([s.t for s in eigs])
    energy = np.array([s.u for s in eigs])
    work = _accumulate(d_work)
    heat = _accumulate(d_heat)
    coherence = _accumulate(d_coh)
    closure = np.abs((energy - energy[0]) - (work + heat + coherence))

    dim = traj.dim
    energy_scale = max(1.0, max(float(np.max(np.abs(s.energies))) for s in eigs))
    # Roundoff floor for identity comparisons: accumulating n_steps sums of
    # dim^2 products can legitimately drift by this much even when the
    # discretization residual is identically zero.
    floor = n_steps * dim * dim * 8.0 * np.finfo(np.float64).eps * energy_scale
    tolerance = 10.0 * (float(np.sum(np.abs(residuals))) + floor)

    return EnergyLedger(
        t=t,
        energy=energy,
        work=work,
        heat=heat,
        coherence=coherence,
        classical_work=_accumulate(d_wcl),
        classical_heat=_accumulate(d_qcl),
        state_work=_accumulate(d_ws),
        state_heat=_accumulate(d_qs),
        entropy=np.array([s.entropy for s in eigs]),
        l1_coherence=np.array([s.l1 for s in eigs]),
        closure_defect=closure,
        closure_floor=floor,
        closure_tolerance=tolerance,
    )


def classical_decompositions(traj: Trajectory) -> ClassicalDecompositions:
    """Cumulative two-way splits (energy basis and state basis) for a trajectory."""
    ledger = analyze(traj)
    return ClassicalDecompositions(
        classical_work=ledger.classical_work,
        classical_heat=ledger.classical_heat,
        state_work=ledger.state_work,
        state_heat=ledger.state_heat,
    )


def first_law_residual(traj: Trajectory) -> float:
    """Largest closure defect |dU - (work + heat + coherence)| over the run."""
    return analyze(traj).max_closure_defect
