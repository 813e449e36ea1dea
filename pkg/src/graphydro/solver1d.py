"""One-dimensional 8-moment solver with barrier jump conditions.

The 1D system splits into two linear wave blocks, (n0, n1) and (J0, J1),
advected at speeds +-v_F along the Riemann invariants n0 +- n1 and
J0 +- J1, and a stiff cell-local spin block (n2, n3, J2, J3) rotating at
rate (2 v_F/hbar) with frozen coefficients set by (n0, J0).  Time stepping
is Strang splitting: half a spin step, one upwind transport step, half a
spin step.  A rectangular barrier is handled without smearing its delta
derivative: the equations are solved with V = 0 inside each subdomain and
the subdomains are coupled through interface jump conditions
(energy balance, momentum balance, vanishing n2 and n3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ModelDomainError
from .params import PhysParams

DENSITY_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# containers
# ---------------------------------------------------------------------------

@dataclass
class Field1D:
    """Cell-averaged moments on a uniform grid over [r_min, r_max].

    U stacks the 8 unknowns as rows [n0, n1, n2, n3, J0, J1, J2, J3];
    boundary condition is 'periodic' or 'copy' (outflow).
    """

    r_min: float
    r_max: float
    U: np.ndarray
    bc: str = "periodic"

    def __post_init__(self):
        self.U = np.ascontiguousarray(self.U, dtype=float)
        if self.U.ndim != 2 or self.U.shape[0] != 8:
            raise ValueError(f"U must have shape (8, cells), got {self.U.shape}")
        if self.cells < 8:
            raise ValueError(f"need at least 8 cells, got {self.cells}")
        if not (self.r_max > self.r_min):
            raise ValueError("domain must have positive length")
        if self.bc not in ("periodic", "copy"):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if np.any(self.U[0] <= 0.0):
            raise ModelDomainError("scalar density must be positive in every cell")

    @classmethod
    def from_moments(cls, r_min, r_max, n, J, bc="periodic") -> "Field1D":
        return cls(r_min, r_max, np.vstack([n, J]), bc)

    @property
    def cells(self) -> int:
        return self.U.shape[1]

    @property
    def dr(self) -> float:
        return (self.r_max - self.r_min) / self.cells

    @property
    def r(self) -> np.ndarray:
        """Cell-center coordinates."""
        return self.r_min + (np.arange(self.cells) + 0.5) * self.dr

    @property
    def n(self) -> np.ndarray:
        return self.U[:4]

    @property
    def J(self) -> np.ndarray:
        return self.U[4:]

    def copy(self) -> "Field1D":
        return Field1D(self.r_min, self.r_max, self.U.copy(), self.bc)

    def mass(self) -> float:
        """Total scalar density, sum(n0) * dr."""
        return float(np.sum(self.U[0])) * self.dr


@dataclass(frozen=True)
class Barrier:
    """Rectangular potential: V0 on (a, b), zero elsewhere."""

    V0: float
    a: float
    b: float

    def __post_init__(self):
        if not (self.a < self.b):
            raise ValueError(f"barrier edges must satisfy a < b, got {self.a}, {self.b}")

    def values(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return np.where((r > self.a) & (r < self.b), self.V0, 0.0)


@dataclass(frozen=True)
class SmoothPotential1D:
    """Smooth potential sampled at cell centers: values v, slope dv."""

    v: np.ndarray
    dv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        object.__setattr__(self, "dv", np.asarray(self.dv, dtype=float))
        if self.v.shape != self.dv.shape:
            raise ValueError("potential samples and slope must share a shape")


@dataclass(frozen=True)
class SolverConfig1D:
    cfl: float = 0.5
    t_end: float = 1.0
    splitting: str = "strang"
    rotation_integrator: str = "exact_frozen"
    output_stride: int = 1

    def __post_init__(self):
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not (self.t_end > 0.0):
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.splitting not in ("strang", "lie"):
            raise ValueError(f"unknown splitting {self.splitting!r}")
        if self.rotation_integrator not in ("exact_frozen", "rk4"):
            raise ValueError(f"unknown rotation integrator {self.rotation_integrator!r}")
        if self.output_stride < 1:
            raise ValueError("output_stride must be >= 1")


# ---------------------------------------------------------------------------
# semi-discrete right-hand side (central differences; diagnostics)
# ---------------------------------------------------------------------------

def _central(w, dr, bc):
    if bc == "periodic":
        return (np.roll(w, -1) - np.roll(w, 1)) / (2.0 * dr)
    return np.gradient(w, dr)


def spin_coefficients(n0, J0, mtheta):
    """Frozen coefficients of the spin block: a = m*theta - u0^2, b = 2 u0."""
    u0 = J0 / n0
    return mtheta - u0 * u0, 2.0 * u0


def rhs_smooth(f: Field1D, V: SmoothPotential1D | None, params: PhysParams) -> np.ndarray:
    """Time derivative of the 8 moment fields for a smooth potential.

    Advection terms use second-order central differences (this form is for
    diagnostics and residual checks; the time stepper uses upwinding), the
    spin-rotation and potential sources are algebraic and exact.
    """
    if np.any(f.U[0] <= 0.0):
        raise ModelDomainError("scalar density must be positive in every cell")
    n0, n1, n2, n3, J0, J1, J2, J3 = f.U
    dr = f.dr
    omega = params.omega
    ac, bc_ = spin_coefficients(n0, J0, params.mtheta)
    L2 = n2 * ac + bc_ * J2
    L3 = n3 * ac + bc_ * J3
    g = V.dv if V is not None else 0.0
    out = np.empty_like(f.U)
    out[0] = -params.v_F * _central(n1, dr, f.bc)
    out[1] = -params.v_F * _central(n0, dr, f.bc)
    out[2] = -omega * J3
    out[3] = omega * J2
    out[4] = -params.v_F * _central(J1, dr, f.bc) - n0 * g
    out[5] = -params.v_F * _central(J0, dr, f.bc) - n1 * g
    out[6] = -omega * L3 - n2 * g
    out[7] = omega * L2 - n3 * g
    return out


# ---------------------------------------------------------------------------
# time stepping
# ---------------------------------------------------------------------------

def time_step(f: Field1D, cfg: SolverConfig1D, params: PhysParams) -> float:
    """Largest admissible dt: CFL on the wave blocks, plus the stiffness cap
    (2 v_F/hbar) * lambda_max * dt <= 0.5 when the spin block uses RK4."""
    dt = cfg.cfl * f.dr / params.v_F
    if cfg.rotation_integrator == "rk4":
        lam_max = float(np.max(np.abs(f.U[4] / f.U[0]))) + math.sqrt(params.mtheta)
        dt = min(dt, 0.5 / (params.omega * lam_max))
    return dt


def _check_dt(f, dt, cfg, params):
    if dt > time_step(f, cfg, params) * (1.0 + 1e-12):
        raise ValueError(
            f"CFL violation: dt={dt:.3e} exceeds the admissible "
            f"{time_step(f, cfg, params):.3e}"
        )


def _spin_substep(U, g, dt, cfg, params):
    k = _backend.active()
    n2, n3 = np.ascontiguousarray(U[2]), np.ascontiguousarray(U[3])
    J2, J3 = np.ascontiguousarray(U[6]), np.ascontiguousarray(U[7])
    stepper = (k.spin_step_exact if cfg.rotation_integrator == "exact_frozen"
               else k.spin_step_rk4)
    stepper(n2, n3, J2, J3, U[0], U[4], g, params.mtheta, params.omega, dt)
    U[2], U[3], U[6], U[7] = n2, n3, J2, J3


def _advect_pair(U, lo, hi, c, bc, kernels):
    """Upwind both Riemann invariants of the pair (U[lo], U[hi]); returns
    the invariant increments (delta_plus, delta_minus)."""
    wp = U[lo] + U[hi]
    wm = U[lo] - U[hi]
    if bc == "periodic":
        in_p, in_m = wp[-1], wm[0]
    else:
        in_p, in_m = wp[0], wm[-1]
    return (kernels.advect_from_left(wp, c, in_p) - wp,
            kernels.advect_from_right(wm, c, in_m) - wm)


def _transport_substep(U, g, dt, dr, bc, params):
    """Upwind transport of both wave blocks plus the potential source on J.

    The update is applied in increment form, so a spatially constant state
    is a bitwise fixed point; the increments are flux differences, which
    keeps the n0 total exactly conserved under periodic boundaries.
    """
    k = _backend.active()
    c = params.v_F * dt / dr
    n0, n1 = U[0], U[1]
    dn_p, dn_m = _advect_pair(U, 0, 1, c, bc, k)
    dj_p, dj_m = _advect_pair(U, 4, 5, c, bc, k)
    if g is not None:
        dj_p = dj_p - dt * (n0 + n1) * g
        dj_m = dj_m - dt * (n0 - n1) * g
    U[0] += 0.5 * (dn_p + dn_m)
    U[1] += 0.5 * (dn_p - dn_m)
    U[4] += 0.5 * (dj_p + dj_m)
    U[5] += 0.5 * (dj_p - dj_m)


def step(f: Field1D, V: SmoothPotential1D | None, dt: float,
         cfg: SolverConfig1D, params: PhysParams) -> Field1D:
    """Advance one time step with a smooth (or zero) potential."""
    _check_dt(f, dt, cfg, params)
    if np.min(f.U[0]) <= DENSITY_FLOOR:
        raise ModelDomainError("scalar density fell below the solver floor")
    U = f.U.copy()
    g = V.dv if V is not None else None
    if cfg.splitting == "strang":
        _spin_substep(U, g, 0.5 * dt, cfg, params)
        _transport_substep(U, g, dt, f.dr, f.bc, params)
        _spin_substep(U, g, 0.5 * dt, cfg, params)
    else:
        _spin_substep(U, g, dt, cfg, params)
        _transport_substep(U, g, dt, f.dr, f.bc, params)
    return Field1D(f.r_min, f.r_max, U, f.bc)


def run_smooth(f: Field1D, V: SmoothPotential1D | None,
               cfg: SolverConfig1D, params: PhysParams):
    """Evolve to t_end with uniform steps; returns [(t, Field1D), ...]."""
    dt_max = time_step(f, cfg, params)
    nsteps = max(1, math.ceil(cfg.t_end / dt_max - 1e-9))
    dt = cfg.t_end / nsteps
    out = [(0.0, f.copy())]
    cur = f
    for istep in range(1, nsteps + 1):
        cur = step(cur, V, dt, cfg, params)
        if istep % cfg.output_stride == 0 or istep == nsteps:
            out.append((istep * dt, cur.copy()))
    return out


# ---------------------------------------------------------------------------
# barrier mode
# ---------------------------------------------------------------------------

def _interface_indices(f: Field1D, barrier: Barrier):
    out = []
    for r0 in (barrier.a, barrier.b):
        pos = (r0 - f.r_min) / f.dr
        idx = round(pos)
        if abs(pos - idx) > 1e-9 or not (0 < idx < f.cells):
            raise ValueError(
                f"barrier edge {r0} must sit on an interior cell interface"
            )
        out.append(int(idx))
    return out


def jump_residual(f: Field1D, barrier: Barrier, params: PhysParams) -> np.ndarray:
    """Six interface residuals of the jump conditions.

    [energy_a, momentum_a, energy_b, momentum_b, n2_edge, n3_edge] where
    energy = v_F [J1] + n0(r0) [V], momentum = v_F [J0] + n1(r0) [V];
    one-sided limits come from the adjacent cells, n_s(r0) is the two-sided
    average, and the n2/n3 entries report the larger-magnitude edge value.
    """
    ia, ib = _interface_indices(f, barrier)
    n0, n1, n2, n3 = f.U[0], f.U[1], f.U[2], f.U[3]
    J0, J1 = f.U[4], f.U[5]
    out = np.empty(6)
    for pos, (idx, vjump) in enumerate(((ia, barrier.V0), (ib, -barrier.V0))):
        navg0 = 0.5 * (n0[idx - 1] + n0[idx])
        navg1 = 0.5 * (n1[idx - 1] + n1[idx])
        out[2 * pos] = params.v_F * (J1[idx] - J1[idx - 1]) + navg0 * vjump
        out[2 * pos + 1] = params.v_F * (J0[idx] - J0[idx - 1]) + navg1 * vjump
    edge_n2 = [0.5 * (n2[i - 1] + n2[i]) for i in (ia, ib)]
    edge_n3 = [0.5 * (n3[i - 1] + n3[i]) for i in (ia, ib)]
    out[4] = max(edge_n2, key=abs)
    out[5] = max(edge_n3, key=abs)
    return out


def _barrier_transport(U, dt, dr, bc, params, ia, ib, V0):
    """Transport substep with interface-coupled wave blocks.

    The (n0, n1) block has no potential term and n_s is continuous, so it is
    advected globally.  The (J0, J1) invariants are advected per subdomain
    with ghost values offset by the interface jumps, which enforces
    v_F [J1] + n0 [V] = 0 and v_F [J0] + n1 [V] = 0 at both edges.
    """
    k = _backend.active()
    c = params.v_F * dt / dr
    n0, n1 = U[0], U[1]
    dn_p, dn_m = _advect_pair(U, 0, 1, c, bc, k)

    bp = U[4] + U[5]
    bm = U[4] - U[5]
    segments = ((0, ia), (ia, ib), (ib, U.shape[1]))
    jumps = {ia: V0, ib: -V0}
    db_p = np.empty_like(bp)
    db_m = np.empty_like(bm)
    for lo, hi in segments:
        if lo == 0:
            in_bp = bp[-1] if bc == "periodic" else bp[0]
        else:
            navg_sum = 0.5 * (n0[lo - 1] + n0[lo]) + 0.5 * (n1[lo - 1] + n1[lo])
            in_bp = bp[lo - 1] - navg_sum * jumps[lo] / params.v_F
        if hi == U.shape[1]:
            in_bm = bm[0] if bc == "periodic" else bm[-1]
        else:
            navg_diff = 0.5 * (n0[hi - 1] + n0[hi]) - 0.5 * (n1[hi - 1] + n1[hi])
            in_bm = bm[hi] - navg_diff * jumps[hi] / params.v_F
        seg_p = np.ascontiguousarray(bp[lo:hi])
        seg_m = np.ascontiguousarray(bm[lo:hi])
        db_p[lo:hi] = k.advect_from_left(seg_p, c, in_bp) - seg_p
        db_m[lo:hi] = k.advect_from_right(seg_m, c, in_bm) - seg_m
    U[0] += 0.5 * (dn_p + dn_m)
    U[1] += 0.5 * (dn_p - dn_m)
    U[4] += 0.5 * (db_p + db_m)
    U[5] += 0.5 * (db_p - db_m)


def step_barrier(f: Field1D, barrier: Barrier, dt: float,
                 cfg: SolverConfig1D, params: PhysParams) -> Field1D:
    """One step in barrier mode: V = 0 in the subdomains plus jump coupling."""
    _check_dt(f, dt, cfg, params)
    if np.min(f.U[0]) <= DENSITY_FLOOR:
        raise ModelDomainError("scalar density fell below the solver floor")
    ia, ib = _interface_indices(f, barrier)
    U = f.U.copy()
    if cfg.splitting == "strang":
        _spin_substep(U, None, 0.5 * dt, cfg, params)
        _barrier_transport(U, dt, f.dr, f.bc, params, ia, ib, barrier.V0)
        _spin_substep(U, None, 0.5 * dt, cfg, params)
    else:
        _spin_substep(U, None, dt, cfg, params)
        _barrier_transport(U, dt, f.dr, f.bc, params, ia, ib, barrier.V0)
    # third jump condition: n2, n3 vanish at the interfaces
    for idx in (ia - 1, ia, ib - 1, ib):
        U[2, idx] = 0.0
        U[3, idx] = 0.0
    return Field1D(f.r_min, f.r_max, U, f.bc)


def run_barrier(f: Field1D, barrier: Barrier, cfg: SolverConfig1D,
                params: PhysParams):
    """Evolve in barrier mode; the initial field must satisfy the jump
    conditions (tolerance 1e-8 scaled by v_F max|J|).  Returns
    [(t, Field1D), ...]."""
    res = jump_residual(f, barrier, params)
    tol = 1e-8 * max(1.0, params.v_F * float(np.max(np.abs(f.J))))
    if np.max(np.abs(res)) > tol:
        raise ModelDomainError(
            "initial field violates the interface jump conditions: "
            f"residuals {np.array2string(res, precision=3)} exceed {tol:.1e}"
        )
    dt_max = time_step(f, cfg, params)
    nsteps = max(1, math.ceil(cfg.t_end / dt_max - 1e-9))
    dt = cfg.t_end / nsteps
    out = [(0.0, f.copy())]
    cur = f
    for istep in range(1, nsteps + 1):
        cur = step_barrier(cur, barrier, dt, cfg, params)
        if istep % cfg.output_stride == 0 or istep == nsteps:
            out.append((istep * dt, cur.copy()))
    return out


# ---------------------------------------------------------------------------
# analytic solutions and diagnostics
# ---------------------------------------------------------------------------

def piecewise_constant(beta0: float, beta1: float, n0: float, n1: float,
                       barrier: Barrier, params: PhysParams,
                       r_min: float, r_max: float, cells: int,
                       bc: str = "copy") -> Field1D:
    """Exact piecewise-constant barrier solution.

    n2 = n3 = J2 = J3 = 0, constant n0 and n1, and currents
    J0 = (beta0 - n1 V(r))/v_F, J1 = (beta1 - n0 V(r))/v_F.  Satisfies the
    jump conditions exactly and is steady under `run_barrier`.
    """
    if not (n0 > 0.0):
        raise ModelDomainError(f"scalar density must be positive, got {n0}")
    U = np.zeros((8, cells))
    dr = (r_max - r_min) / cells
    v = barrier.values(r_min + (np.arange(cells) + 0.5) * dr)
    U[0] = n0
    U[1] = n1
    U[4] = (beta0 - n1 * v) / params.v_F
    U[5] = (beta1 - n0 * v) / params.v_F
    return Field1D(r_min, r_max, U, bc)


def energy_density(n0, J1, V, params: PhysParams):
    """Mean energy per particle: v_F J1/n0 + theta/2 + V."""
    n0 = np.asarray(n0, dtype=float)
    if np.any(n0 <= 0.0):
        raise ModelDomainError("scalar density must be positive")
    out = params.v_F * np.asarray(J1, dtype=float) / n0 + 0.5 * params.theta + V
    return float(out) if out.ndim == 0 else out


def pde_residual(f_a: Field1D, f_b: Field1D, dt: float,
                 V: SmoothPotential1D | None, params: PhysParams,
                 barrier: Barrier | None = None):
    """Finite-difference residual of the 8 equations between two snapshots.

    Uses the midpoint state for the spatial and algebraic terms, so the
    residual of an exact smooth solution decays at second order in (dr, dt).
    Returns (residual (8, cells), valid (cells,) bool); cells whose stencil
    touches a domain edge (non-periodic) or a barrier interface are marked
    invalid.
    """
    if f_a.U.shape != f_b.U.shape:
        raise ValueError("snapshots must share a grid")
    mid = Field1D(f_a.r_min, f_a.r_max, 0.5 * (f_a.U + f_b.U), f_a.bc)
    residual = (f_b.U - f_a.U) / dt - rhs_smooth(mid, V, params)
    valid = np.ones(f_a.cells, dtype=bool)
    if f_a.bc != "periodic":
        valid[0] = valid[-1] = False
    if barrier is not None:
        ia, ib = _interface_indices(f_a, barrier)
        for idx in (ia - 1, ia, ib - 1, ib):
            valid[idx] = False
    return residual, valid
