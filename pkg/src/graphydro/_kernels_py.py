"""Pure-NumPy reference implementations of the hot solver kernels.

The compiled extension (`graphydro._kernels`) exposes the same signatures;
either backend may be selected through `graphydro._backend`.  All arrays
are float64 and C-contiguous; updates marked in-place mutate their inputs.
"""

import numpy as np

BACKEND_NAME = "numpy"


# ---------------------------------------------------------------------------
# 1D transport: first-order upwind on a single advected quantity
# ---------------------------------------------------------------------------

def advect_from_left(w, c, inflow):
    """Right-moving upwind step: w_i <- w_i - c (w_i - w_{i-1}), ghost = inflow."""
    shifted = np.empty_like(w)
    shifted[0] = inflow
    shifted[1:] = w[:-1]
    return w - c * (w - shifted)


def advect_from_right(w, c, inflow):
    """Left-moving upwind step: w_i <- w_i - c (w_i - w_{i+1}), ghost = inflow."""
    shifted = np.empty_like(w)
    shifted[-1] = inflow
    shifted[:-1] = w[1:]
    return w - c * (w - shifted)


# ---------------------------------------------------------------------------
# 1D spin block (n2, n3, J2, J3): frozen-coefficient linear update
# ---------------------------------------------------------------------------
# In the complex variables zn = n2 + i n3, zJ = J2 + i J3 the block reads
#   d/dt [zn, zJ] = [[0, i w], [i w ac - g, i w bc]] [zn, zJ]
# with ac = m theta - (J0/n0)^2, bc = 2 J0/n0, g = dV/dr, w = 2 v_F/hbar.
# The eigenvalue discriminant is -w^2 m theta - i w g, never zero.

def _spin_matrix_exp(n0, J0, g, mtheta, omega, dt):
    u0 = J0 / n0
    ac = mtheta - u0 * u0
    bc = 2.0 * u0
    tr = 1j * omega * bc
    sq = np.sqrt(-(omega * omega) * mtheta - 1j * omega * g + 0j)
    mu_p = 0.5 * tr + sq
    mu_m = 0.5 * tr - sq
    ep = np.exp(mu_p * dt)
    em = np.exp(mu_m * dt)
    denom = mu_p - mu_m
    m21_coef = 1j * omega * ac - g
    m11 = (ep * (-mu_m) - em * (-mu_p)) / denom
    m12 = (ep - em) * (1j * omega) / denom
    m21 = (ep - em) * m21_coef / denom
    m22 = (ep * (tr - mu_m) - em * (tr - mu_p)) / denom
    return m11, m12, m21, m22


def spin_step_exact(n2, n3, J2, J3, n0, J0, g, mtheta, omega, dt):
    """Exact frozen-coefficient update of the spin block (in place).

    g is the local potential slope dV/dr, either None (free streaming) or an
    array matching the cell count.
    """
    m11, m12, m21, m22 = _spin_matrix_exp(n0, J0, 0.0 if g is None else g,
                                          mtheta, omega, dt)
    zn = n2 + 1j * n3
    zJ = J2 + 1j * J3
    zn_new = m11 * zn + m12 * zJ
    zJ_new = m21 * zn + m22 * zJ
    n2[:] = zn_new.real
    n3[:] = zn_new.imag
    J2[:] = zJ_new.real
    J3[:] = zJ_new.imag


def spin_step_rk4(n2, n3, J2, J3, n0, J0, g, mtheta, omega, dt):
    """Classical RK4 on the same frozen-coefficient spin block (in place)."""
    u0 = J0 / n0
    ac = mtheta - u0 * u0
    bc = 2.0 * u0
    a21 = 1j * omega * ac - (0.0 if g is None else g)
    a22 = 1j * omega * bc

    def rhs(zn, zJ):
        return 1j * omega * zJ, a21 * zn + a22 * zJ

    zn = n2 + 1j * n3
    zJ = J2 + 1j * J3
    k1n, k1J = rhs(zn, zJ)
    k2n, k2J = rhs(zn + 0.5 * dt * k1n, zJ + 0.5 * dt * k1J)
    k3n, k3J = rhs(zn + 0.5 * dt * k2n, zJ + 0.5 * dt * k2J)
    k4n, k4J = rhs(zn + dt * k3n, zJ + dt * k3J)
    zn = zn + dt / 6.0 * (k1n + 2.0 * k2n + 2.0 * k3n + k4n)
    zJ = zJ + dt / 6.0 * (k1J + 2.0 * k2J + 2.0 * k3J + k4J)
    n2[:] = zn.real
    n3[:] = zn.imag
    J2[:] = zJ.real
    J3[:] = zJ.imag


# ---------------------------------------------------------------------------
# 2D transport: global Lax-Friedrichs, periodic
# ---------------------------------------------------------------------------
# State layout U (12, Nx, Ny): [n0..n3, J0x..J3x, J0y..J3y].  The advective
# flux couples the pairs (0,1), (4,5), (8,9) in x and (0,2), (4,6), (8,10)
# in y; every component receives the global-wave-speed diffusion term.

_PAIRS_X = ((0, 1), (4, 5), (8, 9))
_PAIRS_Y = ((0, 2), (4, 6), (8, 10))


def _flux(U, pairs, v_F):
    F = np.zeros_like(U)
    for a, b in pairs:
        F[a] = v_F * U[b]
        F[b] = v_F * U[a]
    return F


def lxf_step_2d(U, dt, dx, dy, v_F):
    """One flux-form Lax-Friedrichs transport step; returns a new array."""
    Fx = _flux(U, _PAIRS_X, v_F)
    Fy = _flux(U, _PAIRS_Y, v_F)
    Hx = 0.5 * (Fx + np.roll(Fx, -1, axis=1)) - 0.5 * v_F * (np.roll(U, -1, axis=1) - U)
    Hy = 0.5 * (Fy + np.roll(Fy, -1, axis=2)) - 0.5 * v_F * (np.roll(U, -1, axis=2) - U)
    # interface fluxes telescope bitwise, so the n0 total is conserved exactly
    return (U - (dt / dx) * (Hx - np.roll(Hx, 1, axis=1))
              - (dt / dy) * (Hy - np.roll(Hy, 1, axis=2)))


# ---------------------------------------------------------------------------
# 2D cell-local algebraic block: spin sources + potential forcing, RK4
# ---------------------------------------------------------------------------

def _local_rhs_2d(U, dVx, dVy, mtheta, omega):
    n0 = U[0]
    u0x = U[4] / n0
    u0y = U[8] / n0
    axx = mtheta - u0x * u0x
    ayy = mtheta - u0y * u0y
    axy = -u0x * u0y
    # closure L_s^{ik} for s = 1..3; symmetric in (i, k) by construction
    L_xx = [U[s] * axx + 2.0 * u0x * U[4 + s] for s in (1, 2, 3)]
    L_yy = [U[s] * ayy + 2.0 * u0y * U[8 + s] for s in (1, 2, 3)]
    L_xy = [U[s] * axy + u0x * U[8 + s] + u0y * U[4 + s] for s in (1, 2, 3)]
    D = np.zeros_like(U)
    D[1] = omega * U[11]                 # eta_{1kj} J_j^k = J3^y
    D[2] = -omega * U[7]                 # -J3^x
    D[3] = omega * (U[6] - U[9])         # J2^x - J1^y
    D[5] = omega * L_xy[2]               # J1^x <- L3^{xy}
    D[9] = omega * L_yy[2]               # J1^y <- L3^{yy}
    D[6] = -omega * L_xx[2]              # J2^x <- -L3^{xx}
    D[10] = -omega * L_xy[2]             # J2^y <- -L3^{yx}
    D[7] = omega * (L_xx[1] - L_xy[0])   # J3^x <- L2^{xx} - L1^{xy}
    D[11] = omega * (L_xy[1] - L_yy[0])  # J3^y <- L2^{xy} - L1^{yy}
    if dVx is not None:
        for s in range(4):
            D[4 + s] -= U[s] * dVx
            D[8 + s] -= U[s] * dVy
    return D


def local_step_rk4_2d(U, dVx, dVy, mtheta, omega, dt):
    """RK4 update of the cell-local nonlinear block (in place)."""
    k1 = _local_rhs_2d(U, dVx, dVy, mtheta, omega)
    k2 = _local_rhs_2d(U + 0.5 * dt * k1, dVx, dVy, mtheta, omega)
    k3 = _local_rhs_2d(U + 0.5 * dt * k2, dVx, dVy, mtheta, omega)
    k4 = _local_rhs_2d(U + dt * k3, dVx, dVy, mtheta, omega)
    U += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
