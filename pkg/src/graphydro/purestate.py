"""Pure-state spinor wavefunctions, their moments, and Klein barrier states.

A pure state psi = (psi_1, psi_2) carries hydrodynamic moments through the
pointwise density matrix N_ij = psi_i conj(psi_j) and the current matrix
C_ij = (hbar/2i) (psi_i' conj(psi_j) - psi_i conj(psi_j)'); the moments are
the Pauli components of those two Hermitian matrices.  Pure states satisfy
|n_vec| = n_0 pointwise and an exact identity expressing the spin currents
through the densities, used here as a verification oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelDomainError
from .params import PhysParams


@dataclass(frozen=True)
class SpinorField1D:
    """Two-component wavefunction sampled on a strictly increasing 1D grid.

    If analytic derivative samples `dpsi` are absent, second-order central
    differences are used (one-sided at the boundaries), which needs at
    least 3 grid points.
    """

    r: np.ndarray
    psi: np.ndarray          # shape (2, N), complex
    dpsi: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        object.__setattr__(self, "psi", np.asarray(self.psi, dtype=complex))
        if self.psi.shape != (2, self.r.size):
            raise ValueError("psi must have shape (2, len(r))")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.dpsi is not None:
            dpsi = np.asarray(self.dpsi, dtype=complex)
            if dpsi.shape != self.psi.shape:
                raise ValueError("dpsi must match psi's shape")
            object.__setattr__(self, "dpsi", dpsi)

    def derivatives(self) -> np.ndarray:
        if self.dpsi is not None:
            return self.dpsi
        if self.r.size < 3:
            raise ValueError(
                "need at least 3 grid points for finite-difference derivatives"
            )
        return np.gradient(self.psi, self.r, axis=1)


def moments_from_spinor(field: SpinorField1D, params: PhysParams):
    """Densities and currents of a pure state, per grid point.

    Returns (n, J), both (4, N) real: n_s are the Pauli components of
    psi_i conj(psi_j), J_s those of (hbar/2i)(psi_i' conj(psi_j)
    - psi_i conj(psi_j)').
    """
    psi = field.psi
    dpsi = field.derivatives()
    n11 = (psi[0] * psi[0].conj()).real
    n22 = (psi[1] * psi[1].conj()).real
    n12 = psi[0] * psi[1].conj()
    c11 = (params.hbar * (dpsi[0] * psi[0].conj() - psi[0] * dpsi[0].conj()) / 2j).real
    c22 = (params.hbar * (dpsi[1] * psi[1].conj() - psi[1] * dpsi[1].conj()) / 2j).real
    c12 = params.hbar * (dpsi[0] * psi[1].conj() - psi[0] * dpsi[1].conj()) / 2j
    n = np.stack([0.5 * (n11 + n22), n12.real, -n12.imag, 0.5 * (n11 - n22)])
    J = np.stack([0.5 * (c11 + c22), c12.real, -c12.imag, 0.5 * (c11 - c22)])
    return n, J


def pure_state_identity_residual(n, J, dr: float, n_gradient=None) -> np.ndarray:
    """Residual of the pure-state closure identity, per grid point.

    R_s = J_s - [ n_s J_0 / n_0 - (1/2) eta_{sij} n_i d/dr (n_j / n_0) ],
    s = 1, 2, 3.  Vanishes identically for the moments of any pure state;
    the derivative is taken by central differences unless `n_gradient`
    supplies d(n_s)/dr analytically (shape (4, N)).
    """
    n = np.asarray(n, dtype=float)
    J = np.asarray(J, dtype=float)
    if np.any(n[0] <= 0.0):
        raise ModelDomainError("scalar density must be positive on the grid")
    if n_gradient is not None:
        dn = np.asarray(n_gradient, dtype=float)
        ratio_grad = (dn[1:] * n[0] - n[1:] * dn[0]) / n[0] ** 2
    else:
        ratio_grad = np.gradient(n[1:] / n[0], dr, axis=1)
    # eta contraction, components written out: (a x b)_s with a = n_vec,
    # b = grad(n_vec/n0)
    cross = np.stack([
        n[2] * ratio_grad[2] - n[3] * ratio_grad[1],
        n[3] * ratio_grad[0] - n[1] * ratio_grad[2],
        n[1] * ratio_grad[1] - n[2] * ratio_grad[0],
    ])
    return J[1:] - (n[1:] * J[0] / n[0] - 0.5 * cross)


def transmission(phi: float, q_phase: float) -> float:
    """Oblique-incidence barrier transmission probability.

    T = cos^2(phi) / (1 - cos^2(q) sin^2(phi)) for incidence angle phi in
    (-pi/2, pi/2); equals 1 at normal incidence for every barrier phase q.
    """
    if not (abs(phi) < math.pi / 2):
        raise ModelDomainError(f"incidence angle must lie in (-pi/2, pi/2), got {phi}")
    denom = 1.0 - math.cos(q_phase) ** 2 * math.sin(phi) ** 2
    if denom <= 0.0:
        raise ModelDomainError(f"transmission denominator vanishes (phi={phi}, q={q_phase})")
    return math.cos(phi) ** 2 / denom


@dataclass(frozen=True)
class KleinState:
    """Normal-incidence scattering state of a rectangular barrier.

    Piecewise plane-wave spinor with wavenumber k outside and q inside the
    barrier [a, b]; band signs s = sign(E), s' = sign(E - V0) select the
    branch, and the transmitted amplitude t is a pure phase, so |t|^2 = 1
    (perfect tunneling).
    """

    E: float
    V0: float
    a: float
    b: float
    params: PhysParams = field(default_factory=PhysParams)

    def __post_init__(self):
        if self.E == 0.0 or self.E == self.V0:
            raise ModelDomainError(
                "energy must differ from 0 and from the barrier height "
                f"(E={self.E}, V0={self.V0})"
            )
        if not (self.a < self.b):
            raise ValueError(f"barrier edges must satisfy a < b, got {self.a}, {self.b}")

    @property
    def k(self) -> float:
        return abs(self.E) / (self.params.hbar * self.params.v_F)

    @property
    def q(self) -> float:
        return abs(self.E - self.V0) / (self.params.hbar * self.params.v_F)

    @property
    def s(self) -> float:
        return math.copysign(1.0, self.E)

    @property
    def s_prime(self) -> float:
        return math.copysign(1.0, self.E - self.V0)

    @property
    def alpha(self) -> float:
        return 0.5 * (1.0 + self.s_prime / self.s)

    @property
    def beta(self) -> float:
        return 0.5 * (1.0 - self.s_prime / self.s)

    @property
    def t(self) -> complex:
        # transmitted phase accumulated over the barrier width b - a
        width = self.b - self.a
        return np.exp(1j * width * (self.s / self.s_prime * self.q - self.k))

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x > self.a) & (x < self.b), self.V0, 0.0)

    def psi(self, x):
        """Evaluate the spinor; x scalar or (M,), returns (2,) or (2, M)."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 0
        xx = np.atleast_1d(x)
        out = np.empty((2, xx.size), dtype=complex)
        left = xx < self.a
        inside = (xx >= self.a) & (xx <= self.b)
        right = xx > self.b
        ek = np.exp(1j * self.k * xx)
        out[0, left] = ek[left]
        out[1, left] = self.s * ek[left]
        ep = self.alpha * np.exp(1j * self.q * xx[inside])
        em = self.beta * np.exp(-1j * self.q * xx[inside])
        out[0, inside] = ep + em
        out[1, inside] = self.s_prime * (ep - em)
        out[0, right] = self.t * ek[right]
        out[1, right] = self.s * self.t * ek[right]
        return out[:, 0] if single else out

    def psi_prime(self, x):
        """Analytic spatial derivative of the spinor."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 0
        xx = np.atleast_1d(x)
        out = np.empty((2, xx.size), dtype=complex)
        left = xx < self.a
        inside = (xx >= self.a) & (xx <= self.b)
        right = xx > self.b
        dek = 1j * self.k * np.exp(1j * self.k * xx)
        out[0, left] = dek[left]
        out[1, left] = self.s * dek[left]
        dep = 1j * self.q * self.alpha * np.exp(1j * self.q * xx[inside])
        dem = -1j * self.q * self.beta * np.exp(-1j * self.q * xx[inside])
        out[0, inside] = dep + dem
        out[1, inside] = self.s_prime * (dep - dem)
        out[0, right] = self.t * dek[right]
        out[1, right] = self.s * self.t * dek[right]
        return out[:, 0] if single else out


def klein_state(E: float, V0: float, a: float, b: float,
                params: PhysParams | None = None) -> KleinState:
    """Construct the barrier scattering state; E must avoid 0 and V0."""
    return KleinState(E=E, V0=V0, a=a, b=b, params=params or PhysParams())


def klein_moments(state: KleinState, r, params: PhysParams | None = None):
    """Hydrodynamic moments of the Klein state, constant per region.

    n = (1, s, 0, 0);  J_0 = (E - V(r)) n_1 / v_F,  J_1 = (E - V(r)) n_0 / v_F,
    J_2 = J_3 = 0.  r may be scalar or an array; returns (n, J) with shape
    (4,) or (4, M).
    """
    params = params or state.params
    r = np.asarray(r, dtype=float)
    single = r.ndim == 0
    rr = np.atleast_1d(r)
    ev = state.E - state.potential(rr)
    n = np.zeros((4, rr.size))
    J = np.zeros((4, rr.size))
    n[0] = 1.0
    n[1] = state.s
    J[0] = ev * n[1] / params.v_F
    J[1] = ev * n[0] / params.v_F
    return (n[:, 0], J[:, 0]) if single else (n, J)


def spinor_preset(name: str, r) -> SpinorField1D:
    """Named pure-state presets used by tests and the CLI.

    plane-wave      equal-amplitude conduction-band plane wave, k = 1.3
    gaussian-packet two-component packet with unequal widths and momenta
    polarized-packet single-component packet (second spinor entry zero)
    """
    r = np.asarray(r, dtype=float)
    if name == "plane-wave":
        k = 1.3
        wave = np.exp(1j * k * r)
        return SpinorField1D(r, np.stack([wave, wave]))
    if name == "gaussian-packet":
        p1 = np.exp(-r ** 2 / 2.0) * np.exp(1j * 1.0 * r)
        p2 = 0.7 * np.exp(-r ** 2 / (2.0 * 1.5 ** 2)) * np.exp(-1j * 0.5 * r)
        return SpinorField1D(r, np.stack([p1, p2]))
    if name == "polarized-packet":
        k = 1.0
        p1 = np.exp(-r ** 2 / 2.0) * np.exp(1j * k * r)
        return SpinorField1D(r, np.stack([p1, np.zeros_like(p1)]))
    raise ValueError(f"unknown spinor preset: {name!r}")
