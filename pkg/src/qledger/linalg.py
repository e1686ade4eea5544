"""Dense complex Hermitian eigen-machinery for small matrices.

Everything downstream (thermal states, energy accounting) runs through
``hermitian_eig`` and ``track_eigenpairs``.  The solver is a cyclic Jacobi
iteration with complex Givens rotations; it is dimension-independent but
tuned for the small matrices (dim <= 8) this package targets.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimMismatch, NoConvergence, NotHermitian

HERMITICITY_TOL = 1e-12
SPECTRAL_TOL = 1e-10
OFF_DIAG_TARGET = 1e-14
MAX_SWEEPS = 50


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite square complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch(f"{name} must be square, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m.view(np.float64))):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def hermiticity_defect(a: np.ndarray) -> float:
    """Largest entrywise deviation |A - A^dagger|."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending), eigenvector columns, and branch labels.

    ``labels[j]`` is the branch identity of slot ``j``; freshly decomposed
    matrices get identity labels, and ``track_eigenpairs`` permutes them to
    keep branches continuous along a trajectory.  All downstream consumers
    use eigenvectors only through squared overlaps, so vector phases are
    free.
    """

    values: np.ndarray
    vectors: np.ndarray
    labels: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def branch_order(self) -> np.ndarray:
        """Slot indices sorted so that position b holds branch b."""
        return np.argsort(self.labels)

    def branch_values(self) -> np.ndarray:
        return self.values[self.branch_order()]

    def branch_vectors(self) -> np.ndarray:
        return self.vectors[:, self.branch_order()]


def _off_diagonal_mass(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _rotate(w: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate w[p,q] with a unitary Givens rotation; accumulate into v."""
    b = w[p, q]
    apq = abs(b)
    if apq == 0.0:
        return
    phase = b / apq
    tau = (w[p, p].real - w[q, q].real) / (2.0 * apq)
    # Smaller root of t^2 + 2*tau*t - 1 = 0 keeps |t| <= 1 and the rotation
    # angle <= 45 degrees, which is what makes the sweep numerically stable.
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    # Column update (A <- A U), then row update (A <- U^dagger A).
    col_p = w[:, p] * c + w[:, q] * (s * np.conj(phase))
    col_q = w[:, p] * (-s * phase) + w[:, q] * c
    w[:, p] = col_p
    w[:, q] = col_q
    row_p = w[p, :] * c + w[q, :] * (s * phase)
    row_q = w[p, :] * (-s * np.conj(phase)) + w[q, :] * c
    w[p, :] = row_p
    w[q, :] = row_q
    # The rotation leaves roundoff crumbs exactly where it just cancelled;
    # pin the invariants the iteration relies on.
    w[p, q] = 0.0
    w[q, p] = 0.0
    w[p, p] = w[p, p].real
    w[q, q] = w[q, q].real

    vcol_p = v[:, p] * c + v[:, q] * (s * np.conj(phase))
    vcol_q = v[:, p] * (-s * phase) + v[:, q] * c
    v[:, p] = vcol_p
    v[:, q] = vcol_q


def hermitian_eig(matrix) -> SpectralDecomposition:
    """Full eigensystem of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps rotate every off-diagonal pair until the off-diagonal Frobenius
    mass drops below OFF_DIAG_TARGET times the input Frobenius norm, with a
    hard cap of MAX_SWEEPS sweeps.  Raises NotHermitian when the input is
    not Hermitian within HERMITICITY_TOL relative to its norm, and
    NoConvergence when the cap is hit or the reconstruction check fails.
    """
    a = as_square_matrix(matrix)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if hermiticity_defect(a) > HERMITICITY_TOL * max(scale, 1.0):
        raise NotHermitian(
            f"matrix deviates from Hermitian by {hermiticity_defect(a):.3e}"
        )

    w = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    target = OFF_DIAG_TARGET * scale
    off = _off_diagonal_mass(w)
    sweeps = 0
    while off > target:
        if sweeps >= MAX_SWEEPS:
            raise NoConvergence(
                f"off-diagonal mass {off:.3e} above target {target:.3e} "
                f"after {sweeps} sweeps",
                residual=off,
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(w, v, p, q)
        sweeps += 1
        off = _off_diagonal_mass(w)

    values = w.diagonal().real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]

    ortho = float(np.linalg.norm(vectors.conj().T @ vectors - np.eye(n)))
    recon = float(np.linalg.norm((vectors * values) @ vectors.conj().T - a))
    if ortho > SPECTRAL_TOL or recon > SPECTRAL_TOL * max(scale, 1.0):
        raise NoConvergence(
            f"eigensystem failed post-checks: orthonormality {ortho:.3e}, "
            f"reconstruction {recon:.3e}",
            residual=max(ortho, recon),
        )
    return SpectralDecomposition(
        values=values, vectors=vectors, labels=np.arange(n, dtype=np.int64)
    )


def track_eigenpairs(
    prev: SpectralDecomposition, new: SpectralDecomposition
) -> SpectralDecomposition:
    """Relabel ``new`` so branches continue ``prev`` as smoothly as possible.

    Solves the assignment that maximizes the total squared overlap between
    predecessor and successor eigenvectors (exact Hungarian assignment), and
    carries the predecessor's branch labels across it.  Ordering of values
    and vectors is untouched; only ``labels`` changes.
    """
    if prev.dim != new.dim:
        raise DimMismatch(f"cannot track dim {prev.dim} against dim {new.dim}")
    overlap = np.abs(prev.vectors.conj().T @ new.vectors) ** 2
    rows, cols = linear_sum_assignment(-overlap)
    labels = np.empty(new.dim, dtype=np.int64)
    labels[cols] = prev.labels[rows]
    return replace(new, labels=labels)


def branch_overlaps(
    prev: SpectralDecomposition, new: SpectralDecomposition
) -> np.ndarray:
    """Squared overlap of each branch's vector with its own predecessor."""
    if prev.dim != new.dim:
        raise DimMismatch(f"cannot compare dim {prev.dim} against dim {new.dim}")
    a = prev.branch_vectors()
    b = new.branch_vectors()
    return np.abs(np.sum(a.conj() * b, axis=0)) ** 2


def trace_product(a, b) -> complex:
    """tr(A B) without forming the full product."""
    ma = as_square_matrix(a, "a")
    mb = as_square_matrix(b, "b")
    if ma.shape != mb.shape:
        raise DimMismatch(f"trace_product shapes differ: {ma.shape} vs {mb.shape}")
    return complex(np.einsum("ij,ji->", ma, mb))
