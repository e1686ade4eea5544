"""Trajectory input files and ledger output files.

Trajectory files are JSON: an optional ``units`` block (natural units are
the default and the only accepted values) and a ``samples`` list of
records ``{"t": <number>, "H": <matrix>, "rho": <matrix>}`` where each
complex matrix is a pair of real matrices ``{"re": [[...]], "im": [[...]]}``.

Ledger files are CSV with the fixed column order

    t,U,W,Q_cal,C,W_cl,Q_cl,S,l1_coherence,closure_defect

and every float printed with 17 significant digits, so files are
byte-deterministic and round-trip exactly.  Both writers go through a
temp-file rename, so readers never observe partial output.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .accounting import EnergyLedger, Trajectory, TrajectorySample
from .errors import TrajectoryFormatError
from .qstate import DensityMatrix, Hamiltonian

FILE_TRACE_TOL = 1e-8

LEDGER_COLUMNS = (
    "t", "U", "W", "Q_cal", "C", "W_cl", "Q_cl", "S", "l1_coherence",
    "closure_defect",
)

_LEDGER_FIELDS = (
    "t", "energy", "work", "heat", "coherence", "classical_work",
    "classical_heat", "entropy", "l1_coherence", "closure_defect",
)


def _atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qledger-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _matrix_to_json(m: np.ndarray) -> dict:
    return {
        "re": [[float(x.real) for x in row] for row in m],
        "im": [[float(x.imag) for x in row] for row in m],
    }


def write_trajectory(traj: Trajectory, path) -> None:
    """Emit a trajectory as a JSON file (atomic replace)."""
    doc = {
        "units": {"hbar": 1.0, "kB": 1.0},
        "samples": [
            {
                "t": float(s.t),
                "H": _matrix_to_json(s.hamiltonian.matrix),
                "rho": _matrix_to_json(s.state.matrix),
            }
            for s in traj.samples
        ],
    }
    _atomic_write_text(path, json.dumps(doc, indent=1) + "\n")


def _real_matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise TrajectoryFormatError(f"{where} must be a non-empty list of rows")
    width = None
    for r, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise TrajectoryFormatError(f"{where} row {r} must be a non-empty list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise TrajectoryFormatError(f"{where} row {r} has length {len(row)}, expected {width}")
        for c, x in enumerate(row):
            if not isinstance(x, (int, float)) or isinstance(x, bool) or not np.isfinite(x):
                raise TrajectoryFormatError(f"{where}[{r}][{c}] is not a finite number: {x!r}")
    m = np.array(obj, dtype=np.float64)
    if m.shape[0] != m.shape[1]:
        raise TrajectoryFormatError(f"{where} must be square, got shape {m.shape}")
    return m


def _complex_matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, dict):
        raise TrajectoryFormatError(f"{where} must be an object with 're' and 'im' matrices")
    for key in ("re", "im"):
        if key not in obj:
            raise TrajectoryFormatError(f"{where} is missing the {key!r} matrix")
    re = _real_matrix(obj["re"], f"{where}.re")
    im = _real_matrix(obj["im"], f"{where}.im")
    if re.shape != im.shape:
        raise TrajectoryFormatError(
            f"{where} re/im shapes differ: {re.shape} vs {im.shape}"
        )
    return re + 1j * im


def _check_units(units) -> None:
    if not isinstance(units, dict):
        raise TrajectoryFormatError("units must be an object")
    for key, value in units.items():
        if key not in ("hbar", "kB"):
            raise TrajectoryFormatError(f"units has unsupported key {key!r}")
        if not isinstance(value, (int, float)) or isinstance(value, bool) or abs(value - 1.0) > 1e-12:
            raise TrajectoryFormatError(
                f"units.{key} must be 1 (natural units), got {value!r}"
            )


def read_trajectory(path) -> Trajectory:
    """Parse and fully validate a trajectory file.

    Raises TrajectoryFormatError naming the offending record and field,
    including the sample index for non-unit-trace states.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise TrajectoryFormatError(f"not valid JSON: {exc}") from exc

    if not isinstance(doc, dict):
        raise TrajectoryFormatError("top level must be an object")
    if "units" in doc:
        _check_units(doc["units"])
    records = doc.get("samples")
    if not isinstance(records, list) or len(records) < 2:
        raise TrajectoryFormatError("samples must be a list of at least 2 records")

    samples = []
    for i, record in enumerate(records):
        where = f"samples[{i}]"
        if not isinstance(record, dict):
            raise TrajectoryFormatError(f"{where} must be an object")
        for key in ("t", "H", "rho"):
            if key not in record:
                raise TrajectoryFormatError(f"{where} is missing field {key!r}")
        t = record["t"]
        if not isinstance(t, (int, float)) or isinstance(t, bool) or not np.isfinite(t):
            raise TrajectoryFormatError(f"{where}.t is not a finite number: {t!r}")
        h = _complex_matrix(record["H"], f"{where}.H")
        rho = _complex_matrix(record["rho"], f"{where}.rho")
        if h.shape != rho.shape:
            raise TrajectoryFormatError(
                f"{where}: H shape {h.shape} does not match rho shape {rho.shape}"
            )
        trace = float(np.trace(rho).real)
        if abs(trace - 1.0) > FILE_TRACE_TOL:
            raise TrajectoryFormatError(
                f"{where}.rho is not trace preserving: tr rho = {trace!r}"
            )
        try:
            samples.append(TrajectorySample(float(t), Hamiltonian(h), DensityMatrix(rho)))
        except ValueError as exc:
            raise TrajectoryFormatError(f"{where}: {exc}") from exc
    try:
        return Trajectory(tuple(samples))
    except ValueError as exc:
        raise TrajectoryFormatError(str(exc)) from exc


def ledger_text(ledger: EnergyLedger) -> str:
    """Render a ledger as deterministic CSV text."""
    lines = [",".join(LEDGER_COLUMNS)]
    columns = [getattr(ledger, name) for name in _LEDGER_FIELDS]
    for row in zip(*columns):
        lines.append(",".join(f"{v:.16e}" for v in row))
    return "\n".join(lines) + "\n"


def write_ledger(ledger: EnergyLedger, path) -> None:
    """Emit a ledger CSV (atomic replace)."""
    _atomic_write_text(path, ledger_text(ledger))
