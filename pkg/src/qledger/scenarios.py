"""Built-in benchmark trajectories and their analytic reference curves.

Four scenarios on a uniform time grid over [0, t_max]:

* ``zeeman``: excited state held fixed while its energy ramps linearly;
  pure work, no heat, no coherence flow.
* ``rabi``: resonant drive of a pure state under a constant Hamiltonian;
  the entire energy change flows through the coherence channel.
* ``spontaneous_emission``: an equal superposition decaying by amplitude
  damping; heat and coherence flow, no work.
* ``isothermal``: the state pinned to thermal equilibrium while the upper
  level ramps; the stepped ledger converges to the reversible limit
  (work -> free-energy change, heat -> T times entropy change).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .accounting import Trajectory, TrajectorySample
from .channels import DecayParams, ad_closed_form, plus_state, rabi_state
from .errors import InvalidSpec, NegativeTime
from .linalg import SpectralDecomposition
from .qstate import (
    DensityMatrix,
    ThermalParams,
    free_energy,
    gibbs_state,
    internal_energy,
    two_level_hamiltonian,
    von_neumann_entropy,
)

KINDS = ("zeeman", "rabi", "spontaneous_emission", "isothermal")


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of a built-in scenario; unused fields stay None."""

    kind: str
    e_ground: float = 0.0
    e_excited: float = 1.0
    t_max: float = 1.0
    steps: int = 1000
    omega: float | None = None
    gamma: float | None = None
    temperature: float | None = None
    e_final: float | None = None
    shift: float | None = None
    b_field: float | None = None
    shift_coefficient: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown scenario kind {self.kind!r}; choose from {KINDS}")
        if not (np.isfinite(self.t_max) and self.t_max > 0.0):
            raise InvalidSpec(f"t_max must be > 0, got {self.t_max!r}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise InvalidSpec(f"steps must be a positive integer, got {self.steps!r}")
        if not (self.e_excited > self.e_ground):
            raise InvalidSpec(
                f"excited energy {self.e_excited!r} must exceed ground {self.e_ground!r}"
            )
        if self.kind == "rabi":
            if self.omega is None or not (self.omega > 0.0):
                raise InvalidSpec("rabi needs a drive frequency omega > 0")
        elif self.kind == "spontaneous_emission":
            if self.gamma is None or self.gamma < 0.0:
                raise InvalidSpec("spontaneous_emission needs a decay rate gamma >= 0")
        elif self.kind == "isothermal":
            if self.temperature is None or not (self.temperature > 0.0):
                raise InvalidSpec("isothermal needs a temperature > 0")
            if self.e_final is None or not (self.e_final > self.e_ground):
                raise InvalidSpec(
                    "isothermal needs a ramp endpoint e_final above the ground energy"
                )
        elif self.kind == "zeeman":
            direct = self.shift is not None
            derived = self.b_field is not None or self.shift_coefficient is not None
            if direct and derived:
                raise InvalidSpec("give either shift or b_field+shift_coefficient, not both")
            if not direct and not (
                self.b_field is not None and self.shift_coefficient is not None
            ):
                raise InvalidSpec(
                    "zeeman needs a total shift, or a b_field with a shift_coefficient"
                )

    @property
    def total_shift(self) -> float:
        if self.kind != "zeeman":
            raise InvalidSpec("total_shift is defined for zeeman scenarios only")
        if self.shift is not None:
            return float(self.shift)
        return float(self.b_field * self.shift_coefficient)


def build_trajectory(spec: ScenarioSpec) -> Trajectory:
    """Sample a scenario on its uniform grid of ``steps + 1`` points."""
    times = np.linspace(0.0, spec.t_max, spec.steps + 1)
    h_const = two_level_hamiltonian(spec.e_ground, spec.e_excited)
    samples = []
    if spec.kind == "rabi":
        for t in times:
            samples.append(TrajectorySample(float(t), h_const, rabi_state(spec.omega, float(t))))
    elif spec.kind == "spontaneous_emission":
        decay = DecayParams(spec.gamma)
        start = plus_state()
        for t in times:
            samples.append(
                TrajectorySample(float(t), h_const, ad_closed_form(start, decay, float(t)))
            )
    elif spec.kind == "zeeman":
        excited = DensityMatrix(np.diag([0.0, 1.0]).astype(complex))
        ramp = spec.total_shift
        for t in times:
            h = two_level_hamiltonian(
                spec.e_ground, spec.e_excited + ramp * float(t) / spec.t_max
            )
            samples.append(TrajectorySample(float(t), h, excited))
    else:  # isothermal
        thermal = ThermalParams(spec.temperature)
        for t in times:
            e_top = spec.e_excited + (spec.e_final - spec.e_excited) * float(t) / spec.t_max
            h = two_level_hamiltonian(spec.e_ground, e_top)
            samples.append(TrajectorySample(float(t), h, gibbs_state(h, thermal)))
    return Trajectory(tuple(samples))


def rabi_coherence_ref(e_ground: float, e_excited: float, omega: float, t):
    """Coherence energy of the driven pure state (exact for all t)."""
    half = 0.5 * omega * np.asarray(t, dtype=np.float64)
    sin2 = np.sin(half) ** 2
    return e_ground * (np.cos(half) ** 2 - 1.0) + e_excited * sin2


def emission_heat_ref(e_ground: float, e_excited: float, t):
    """Closed-form cumulative heat for unit-rate amplitude damping of the
    equal superposition; scales with the level gap."""
    gap = e_excited - e_ground
    s3 = np.sqrt(3.0)
    x = np.exp(-np.asarray(t, dtype=np.float64))
    return 0.25 * gap * (
        2.0 * x
        - 0.5 * np.log(x * x - x + 1.0)
        - s3 * np.arctan((2.0 * x - 1.0) / s3)
        + np.pi / (2.0 * s3)
        - 2.0
    )


def emission_coherence_ref(e_ground: float, e_excited: float, t):
    """Closed-form cumulative coherence energy for the same decay."""
    gap = e_excited - e_ground
    s3 = np.sqrt(3.0)
    tt = np.asarray(t, dtype=np.float64)
    y = np.exp(tt)
    return 0.25 * gap * (
        0.5 * np.log(y * y - y + 1.0)
        - s3 * np.arctan((2.0 * y - 1.0) / s3)
        - tt
        + np.pi / (2.0 * s3)
    )


def emission_heat_limit(e_ground: float, e_excited: float) -> float:
    """t -> infinity limit of the cumulative heat."""
    return 0.25 * (e_excited - e_ground) * (np.pi / np.sqrt(3.0) - 2.0)


def emission_coherence_limit(e_ground: float, e_excited: float) -> float:
    """t -> infinity limit of the cumulative coherence energy."""
    return -0.25 * (e_excited - e_ground) * np.pi / np.sqrt(3.0)


def emission_eigensystem(t: float) -> SpectralDecomposition:
    """Exact eigensystem of the decaying equal superposition at unit rate.

    Values ascend; labels are slot order.  Useful as an oracle for the
    numerical eigensolver and the branch tracker.
    """
    if t < 0.0:
        raise NegativeTime(f"evolution time must be >= 0, got {t!r}")
    e = np.exp(t)
    root = np.sqrt(e * e - e + 1.0)
    lo = 0.5 * np.exp(-t) * (e - root)
    hi = 0.5 * np.exp(-t) * (e + root)
    damp = np.exp(-0.5 * t)
    k_hi = np.array([damp * (root + e - 1.0), 1.0], dtype=np.complex128)
    k_lo = np.array([damp * (-root + e - 1.0), 1.0], dtype=np.complex128)
    k_hi /= np.linalg.norm(k_hi)
    k_lo /= np.linalg.norm(k_lo)
    return SpectralDecomposition(
        values=np.array([lo, hi]),
        vectors=np.column_stack([k_lo, k_hi]),
        labels=np.array([0, 1], dtype=np.int64),
    )


@dataclass(frozen=True)
class IsothermalReference:
    """Reversible-limit totals for an isothermal ramp."""

    delta_free_energy: float
    heat_reference: float


def isothermal_reference(spec: ScenarioSpec) -> IsothermalReference:
    """Free-energy change and T*dS between the ramp endpoints."""
    if spec.kind != "isothermal":
        raise InvalidSpec(f"isothermal_reference needs an isothermal spec, got {spec.kind!r}")
    thermal = ThermalParams(spec.temperature)
    h_start = two_level_hamiltonian(spec.e_ground, spec.e_excited)
    h_end = two_level_hamiltonian(spec.e_ground, spec.e_final)
    d_free = free_energy(h_end, thermal) - free_energy(h_start, thermal)
    d_entropy = von_neumann_entropy(gibbs_state(h_end, thermal)) - von_neumann_entropy(
        gibbs_state(h_start, thermal)
    )
    return IsothermalReference(
        delta_free_energy=float(d_free),
        heat_reference=float(spec.temperature * d_entropy),
    )


@dataclass(frozen=True)
class ReferencePoint:
    """Reference column values at one time; None where no closed form exists."""

    work: float | None
    heat: float | None
    coherence: float | None
    energy: float | None


@dataclass(frozen=True)
class AnalyticReference:
    """Evaluator for the reference curves of one scenario."""

    note: str
    _evaluate: object = field(repr=False)

    def evaluate(self, t: float) -> ReferencePoint:
        return self._evaluate(float(t))


def analytic_reference(spec: ScenarioSpec) -> AnalyticReference:
    """Reference-curve evaluator for a scenario; see each branch's note."""
    if spec.kind == "rabi":
        def evaluate(t: float) -> ReferencePoint:
            c = float(rabi_coherence_ref(spec.e_ground, spec.e_excited, spec.omega, t))
            return ReferencePoint(work=0.0, heat=0.0, coherence=c,
                                  energy=spec.e_ground + c)

        note = "all columns exact for every t"
    elif spec.kind == "spontaneous_emission":
        exact_rate = spec.gamma == 1.0

        def evaluate(t: float) -> ReferencePoint:
            x = np.exp(-spec.gamma * t)
            u = 0.5 * (spec.e_ground * (2.0 - x) + spec.e_excited * x)
            if exact_rate:
                q = float(emission_heat_ref(spec.e_ground, spec.e_excited, t))
                c = float(emission_coherence_ref(spec.e_ground, spec.e_excited, t))
            else:
                q = None
                c = None
            return ReferencePoint(work=0.0, heat=q, coherence=c, energy=float(u))

        note = (
            "work and energy exact for every rate; heat and coherence closed "
            "forms exact at unit rate only"
        )
    elif spec.kind == "zeeman":
        ramp = spec.total_shift

        def evaluate(t: float) -> ReferencePoint:
            w = ramp * t / spec.t_max
            return ReferencePoint(work=float(w), heat=0.0, coherence=0.0,
                                  energy=float(spec.e_excited + w))

        note = "all columns exact for every t"
    else:  # isothermal
        thermal = ThermalParams(spec.temperature)
        h0 = two_level_hamiltonian(spec.e_ground, spec.e_excited)
        f0 = free_energy(h0, thermal)
        s0 = von_neumann_entropy(gibbs_state(h0, thermal))

        def evaluate(t: float) -> ReferencePoint:
            e_top = spec.e_excited + (spec.e_final - spec.e_excited) * t / spec.t_max
            h = two_level_hamiltonian(spec.e_ground, e_top)
            rho = gibbs_state(h, thermal)
            w = free_energy(h, thermal) - f0
            q = spec.temperature * (von_neumann_entropy(rho) - s0)
            return ReferencePoint(work=float(w), heat=float(q), coherence=0.0,
                                  energy=float(internal_energy(rho, h)))

        note = (
            "reversible limit: the stepped ledger converges to these columns "
            "as steps grow"
        )
    return AnalyticReference(note=note, _evaluate=evaluate)
