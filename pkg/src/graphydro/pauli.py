"""Pauli-basis algebra for Hermitian 2x2 matrices.

Every Hermitian 2x2 matrix M has a unique expansion M = sum_s c_s sigma_s
with four real coefficients c_s = (1/2) tr(sigma_s M).  These coefficients
carry the spinorial densities and currents throughout the moment equations,
so the round trip compose/decompose must be exact up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModelDomainError

SIGMA = np.array(
    [
        [[1.0, 0.0], [0.0, 1.0]],
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class PauliComponents:
    """Four real coefficients of a Hermitian 2x2 matrix in the Pauli basis."""

    c0: float
    c1: float
    c2: float
    c3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1, self.c2, self.c3])

    @classmethod
    def from_array(cls, a) -> "PauliComponents":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {a.shape}")
        return cls(*a)


def hermiticity_defect(m: np.ndarray) -> float:
    """Relative deviation of a 2x2 matrix from Hermiticity."""
    m = np.asarray(m, dtype=complex)
    scale = max(np.abs(m).max(), 1e-300)
    return float(np.abs(m - m.conj().T).max() / scale)


def pauli_decompose(m, tol: float = HERMITICITY_TOL) -> PauliComponents:
    """Project a Hermitian 2x2 matrix onto the Pauli basis.

    Rejects non-Hermitian input (defect above `tol`, relative to the largest
    entry); imaginary residues of the trace formula below tolerance are
    discarded.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ModelDomainError(
            f"matrix is not Hermitian: relative defect {defect:.3e} > {tol:.1e}"
        )
    c = 0.5 * np.einsum("sij,ji->s", SIGMA, m)
    return PauliComponents(*c.real)


def pauli_compose(c) -> np.ndarray:
    """Assemble sum_s c_s sigma_s; Hermitian for real coefficients."""
    if isinstance(c, PauliComponents):
        c = c.as_array()
    c = np.asarray(c, dtype=float)
    return np.einsum("s,sij->ij", c, SIGMA)


def levi_civita(s: int, k: int, j: int) -> int:
    """Totally antisymmetric symbol on indices 1..3, normalized to (1,2,3) -> +1."""
    for idx in (s, k, j):
        if idx not in (1, 2, 3):
            raise ValueError(f"index out of range 1..3: {idx}")
    if s == k or k == j or s == j:
        return 0
    return 1 if (s, k, j) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


# Dense table eta[s-1, k-1, j-1], handy for contractions.
LEVI_CIVITA = np.zeros((3, 3, 3))
for _s in (1, 2, 3):
    for _k in (1, 2, 3):
        for _j in (1, 2, 3):
            if _s != _k and _k != _j and _s != _j:
                LEVI_CIVITA[_s - 1, _k - 1, _j - 1] = levi_civita(_s, _k, _j)
