"""Two-dimensional 12-moment solver on a periodic rectangle.

Strang splitting around a flux-form global Lax-Friedrichs transport step:
half a cell-local algebraic step (spin sources from the closure tensor plus
potential forcing, integrated by RK4), one transport step at wave speed
v_F, half an algebraic step.  The spatially homogeneous reduction of the
same equations is exposed as `uniform_ode_rhs` so an independent ODE
integration can cross-check the field solver.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .equilibrium import MomentState, closure_tensor, mixedness_check
from .errors import ModelDomainError
from .params import PhysParams

DENSITY_FLOOR = 1e-12

# Homogeneous states reuse the pointwise moment container.
UniformState = MomentState


@dataclass
class Field2D:
    """Cell-averaged moments on a uniform periodic N_x x N_y grid.

    U stacks the 12 unknowns as [n0..n3, J0x..J3x, J0y..J3y] with shape
    (12, N_x, N_y).
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    U: np.ndarray

    def __post_init__(self):
        self.U = np.ascontiguousarray(self.U, dtype=float)
        if self.U.ndim != 3 or self.U.shape[0] != 12:
            raise ValueError(f"U must have shape (12, Nx, Ny), got {self.U.shape}")
        if self.U.shape[1] < 8 or self.U.shape[2] < 8:
            raise ValueError("need at least 8 cells per axis")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("domain must have positive extent")
        if np.any(self.U[0] <= 0.0):
            raise ModelDomainError("scalar density must be positive in every cell")

    @property
    def shape(self):
        return self.U.shape[1:]

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.U.shape[1]

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.U.shape[2]

    @property
    def x(self) -> np.ndarray:
        return self.x_min + (np.arange(self.U.shape[1]) + 0.5) * self.dx

    @property
    def y(self) -> np.ndarray:
        return self.y_min + (np.arange(self.U.shape[2]) + 0.5) * self.dy

    @property
    def n(self) -> np.ndarray:
        return self.U[:4]

    @property
    def J(self) -> np.ndarray:
        """Currents as (4, 2, Nx, Ny); a copy, mutate through U."""
        return np.stack([self.U[4:8], self.U[8:12]], axis=1)

    def copy(self) -> "Field2D":
        return Field2D(self.x_min, self.x_max, self.y_min, self.y_max, self.U.copy())

    @classmethod
    def uniform(cls, state: UniformState, x_min, x_max, y_min, y_max,
                nx: int, ny: int) -> "Field2D":
        U = np.empty((12, nx, ny))
        U[:4] = state.n[:, None, None]
        U[4:8] = state.J[:, 0][:, None, None]
        U[8:12] = state.J[:, 1][:, None, None]
        return cls(x_min, x_max, y_min, y_max, U)


@dataclass(frozen=True)
class SmoothPotential2D:
    """Smooth potential on cell centers: values v and gradient (dvx, dvy)."""

    v: np.ndarray
    dvx: np.ndarray
    dvy: np.ndarray

    def __post_init__(self):
        for name in ("v", "dvx", "dvy"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.v.shape == self.dvx.shape == self.dvy.shape):
            raise ValueError("potential samples and gradient must share a shape")


@dataclass(frozen=True)
class SolverConfig2D:
    cfl: float = 0.9
    t_end: float = 1.0
    output_stride: int = 1

    def __post_init__(self):
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not (self.t_end > 0.0):
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.output_stride < 1:
            raise ValueError("output_stride must be >= 1")


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------

def _ddx_periodic(w, dx):
    return (np.roll(w, -1, axis=0) - np.roll(w, 1, axis=0)) / (2.0 * dx)


def _ddy_periodic(w, dy):
    return (np.roll(w, -1, axis=1) - np.roll(w, 1, axis=1)) / (2.0 * dy)


def _local_sources(n, Jx, Jy, params):
    """Algebraic eta-contraction sources of the 12 equations.

    Closure entries L_s^{ik} are evaluated pointwise from the current
    moments; the tensor is symmetric in (i, k) by construction.
    """
    mtheta = params.mtheta
    omega = params.omega
    u0x = Jx[0] / n[0]
    u0y = Jy[0] / n[0]
    axx = mtheta - u0x * u0x
    ayy = mtheta - u0y * u0y
    axy = -u0x * u0y
    L_xx = [n[s] * axx + 2.0 * u0x * Jx[s] for s in (1, 2, 3)]
    L_yy = [n[s] * ayy + 2.0 * u0y * Jy[s] for s in (1, 2, 3)]
    L_xy = [n[s] * axy + u0x * Jy[s] + u0y * Jx[s] for s in (1, 2, 3)]
    dn = [np.zeros_like(n[0]), omega * Jy[3], -omega * Jx[3], omega * (Jx[2] - Jy[1])]
    dJx = [np.zeros_like(n[0]), omega * L_xy[2], -omega * L_xx[2],
           omega * (L_xx[1] - L_xy[0])]
    dJy = [np.zeros_like(n[0]), omega * L_yy[2], -omega * L_xy[2],
           omega * (L_xy[1] - L_yy[0])]
    return dn, dJx, dJy


def rhs_2d(f: Field2D, V: SmoothPotential2D | None, params: PhysParams) -> np.ndarray:
    """Semi-discrete time derivative of the 12 moment fields.

    Advection by second-order central differences (periodic), the
    eta-contraction sources from the closure tensor, and the potential
    forcing -n_s grad V.  Diagnostic form; the time stepper uses
    Lax-Friedrichs fluxes instead.
    """
    if np.any(f.U[0] <= 0.0):
        raise ModelDomainError("scalar density must be positive in every cell")
    n = f.U[:4]
    Jx = f.U[4:8]
    Jy = f.U[8:12]
    dx, dy = f.dx, f.dy
    v_F = params.v_F
    dn, dJx, dJy = _local_sources(n, Jx, Jy, params)
    out = np.empty_like(f.U)
    out[0] = -v_F * (_ddx_periodic(n[1], dx) + _ddy_periodic(n[2], dy)) + dn[0]
    out[1] = -v_F * _ddx_periodic(n[0], dx) + dn[1]
    out[2] = -v_F * _ddy_periodic(n[0], dy) + dn[2]
    out[3] = dn[3]
    out[4] = -v_F * (_ddx_periodic(Jx[1], dx) + _ddy_periodic(Jx[2], dy))
    out[5] = -v_F * _ddx_periodic(Jx[0], dx) + dJx[1]
    out[6] = -v_F * _ddy_periodic(Jx[0], dy) + dJx[2]
    out[7] = dJx[3]
    out[8] = -v_F * (_ddx_periodic(Jy[1], dx) + _ddy_periodic(Jy[2], dy))
    out[9] = -v_F * _ddx_periodic(Jy[0], dx) + dJy[1]
    out[10] = -v_F * _ddy_periodic(Jy[0], dy) + dJy[2]
    out[11] = dJy[3]
    if V is not None:
        for s in range(4):
            out[4 + s] -= n[s] * V.dvx
            out[8 + s] -= n[s] * V.dvy
    return out


def uniform_ode_rhs(u: UniformState, params: PhysParams) -> UniformState:
    """Homogeneous reduction: all gradients zero, no potential.

    n0 and J0 are constants of motion; the spin moments rotate under the
    eta-contraction of J and of the closure tensor.
    """
    u.require_positive_density()
    L = closure_tensor(u, params)
    omega = params.omega
    dn = np.zeros(4)
    dJ = np.zeros((4, 2))
    # eta_{skj} J_j^k with the third cartesian slot identically zero
    dn[1] = omega * u.J[3, 1]
    dn[2] = -omega * u.J[3, 0]
    dn[3] = omega * (u.J[2, 0] - u.J[1, 1])
    dJ[1, 0] = omega * L[2, 0, 1]
    dJ[1, 1] = omega * L[2, 1, 1]
    dJ[2, 0] = -omega * L[2, 0, 0]
    dJ[2, 1] = -omega * L[2, 1, 0]
    dJ[3, 0] = omega * (L[1, 0, 0] - L[0, 0, 1])
    dJ[3, 1] = omega * (L[1, 1, 0] - L[0, 1, 1])
    return UniformState(n=dn, J=dJ)


# ---------------------------------------------------------------------------
# time stepping
# ---------------------------------------------------------------------------

def time_step_2d(f: Field2D, cfg: SolverConfig2D, params: PhysParams) -> float:
    """Admissible dt: cfl * min(dx, dy) / (2 v_F), capped by the spin
    stiffness bound as in 1D (the local block always uses RK4 here)."""
    dt = cfg.cfl * min(f.dx, f.dy) / (2.0 * params.v_F)
    umax = float(np.max(np.hypot(f.U[4] / f.U[0], f.U[8] / f.U[0])))
    lam_max = umax + math.sqrt(params.mtheta)
    return min(dt, 0.5 / (params.omega * lam_max))


def step_2d(f: Field2D, V: SmoothPotential2D | None, dt: float,
            params: PhysParams, cfg: SolverConfig2D) -> Field2D:
    """One Strang step: local RK4 half-step, Lax-Friedrichs transport,
    local RK4 half-step.  Total n0 is conserved exactly (flux form)."""
    if dt > time_step_2d(f, cfg, params) * (1.0 + 1e-12):
        raise ValueError(
            f"CFL violation: dt={dt:.3e} exceeds the admissible "
            f"{time_step_2d(f, cfg, params):.3e}"
        )
    if np.min(f.U[0]) <= DENSITY_FLOOR:
        raise ModelDomainError("scalar density fell below the solver floor")
    k = _backend.active()
    U = f.U.copy()
    dVx = V.dvx if V is not None else None
    dVy = V.dvy if V is not None else None
    k.local_step_rk4_2d(U, dVx, dVy, params.mtheta, params.omega, 0.5 * dt)
    U = np.ascontiguousarray(k.lxf_step_2d(U, dt, f.dx, f.dy, params.v_F))
    k.local_step_rk4_2d(U, dVx, dVy, params.mtheta, params.omega, 0.5 * dt)
    return Field2D(f.x_min, f.x_max, f.y_min, f.y_max, U)


def run_2d(f: Field2D, V: SmoothPotential2D | None, cfg: SolverConfig2D,
           params: PhysParams, warn_mixedness: bool = False):
    """Evolve to t_end with uniform steps; returns [(t, Field2D), ...]."""
    def check_regime(field, t):
        margin = float(np.min(mixedness_margin(field, params)))
        if margin <= 0.0:
            warnings.warn(
                f"state is outside the strongly-mixed regime at t={t:.4g} "
                f"(min margin {margin:.3e})",
                RuntimeWarning,
                stacklevel=3,
            )

    dt_max = time_step_2d(f, cfg, params)
    nsteps = max(1, math.ceil(cfg.t_end / dt_max - 1e-9))
    dt = cfg.t_end / nsteps
    out = [(0.0, f.copy())]
    if warn_mixedness:
        check_regime(f, 0.0)
    cur = f
    for istep in range(1, nsteps + 1):
        cur = step_2d(cur, V, dt, params, cfg)
        if istep % cfg.output_stride == 0 or istep == nsteps:
            out.append((istep * dt, cur.copy()))
            if warn_mixedness:
                check_regime(cur, istep * dt)
    return out


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def conserved_totals(f: Field2D):
    """Cell sums times cell area: (total n0, total J0 as a 2-vector)."""
    area = f.dx * f.dy
    return (float(np.sum(f.U[0])) * area,
            np.array([np.sum(f.U[4]), np.sum(f.U[8])]) * area)


def mixedness_margin(f: Field2D, params: PhysParams) -> np.ndarray:
    """Per-cell margin bound - ratio of the strongly-mixed condition.

    Field-level diagnostic: spin components with |n_s| below the solver
    floor contribute no kinetic mismatch (pointwise checks should use
    `equilibrium.mixedness_check`, which rejects such cells instead).
    """
    n = f.U[:4]
    Jx = f.U[4:8]
    Jy = f.U[8:12]
    u0x = Jx[0] / n[0]
    u0y = Jy[0] / n[0]
    K = np.zeros_like(n[0])
    for s in (1, 2, 3):
        safe = np.abs(n[s]) > DENSITY_FLOOR
        ns = np.where(safe, n[s], 1.0)
        dux = np.where(safe, Jx[s] / ns - u0x, 0.0)
        duy = np.where(safe, Jy[s] / ns - u0y, 0.0)
        K += (dux * dux + duy * duy) / (2.0 * params.m)
    ratio = (n[1] ** 2 + n[2] ** 2 + n[3] ** 2) / n[0] ** 2
    bound = 1.0 / (1.0 + 2.0 * K / (3.0 * params.theta))
    return bound - ratio
