"""Labeled density matrix with physicality checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-9
POSITIVITY_TOL = 1e-7


@dataclass(frozen=True)
class DensityMatrix:
    """A complex density matrix over a labeled basis."""

    entries: np.ndarray
    basis_labels: tuple[str, ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("entries must be a square matrix")
        if len(self.basis_labels) != entries.shape[0]:
            raise ValueError("one basis label per dimension required")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.entries - self.entries.conj().T).max())

    def min_eigenvalue(self) -> float:
        sym = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(sym).min())

    def population(self, label: str) -> float:
        idx = self.basis_labels.index(label)
        return float(self.entries[idx, idx].real)

    def validate(self, trace_tol: float = TRACE_TOL,
                 herm_tol: float = HERMITICITY_TOL,
                 pos_tol: float = POSITIVITY_TOL) -> None:
        """Raise ``ValueError`` unless trace, Hermiticity and positivity hold."""
        if abs(self.trace - 1.0) > trace_tol:
            raise ValueError(f"trace {self.trace} differs from 1")
        if self.hermiticity_defect() > herm_tol:
            raise ValueError("matrix is not Hermitian within tolerance")
        if self.min_eigenvalue() < -pos_tol:
            raise ValueError("matrix has a significantly negative eigenvalue")
