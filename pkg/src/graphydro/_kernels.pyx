# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the solver hot kernels (see _kernels_py for semantics).

Same signatures and array layouts as the NumPy fallback; selected at import
time by graphydro._backend.  Loops are fused per cell, single threaded, so
results are deterministic.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double creal(double complex)
    double cimag(double complex)

BACKEND_NAME = "cython"


def advect_from_left(double[::1] w, double c, double inflow):
    cdef Py_ssize_t n = w.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    out[0] = w[0] - c * (w[0] - inflow)
    for i in range(1, n):
        out[i] = w[i] - c * (w[i] - w[i - 1])
    return out_arr


def advect_from_right(double[::1] w, double c, double inflow):
    cdef Py_ssize_t n = w.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(n - 1):
        out[i] = w[i] - c * (w[i] - w[i + 1])
    out[n - 1] = w[n - 1] - c * (w[n - 1] - inflow)
    return out_arr


cdef inline void _spin_cell_exact(double* n2, double* n3, double* J2, double* J3,
                                  double n0, double J0, double g,
                                  double mtheta, double omega, double dt) nogil:
    cdef double u0 = J0 / n0
    cdef double ac = mtheta - u0 * u0
    cdef double bc = 2.0 * u0
    cdef double complex tr = 1j * omega * bc
    cdef double complex sq = csqrt(-omega * omega * mtheta - 1j * omega * g)
    cdef double complex mu_p = 0.5 * tr + sq
    cdef double complex mu_m = 0.5 * tr - sq
    cdef double complex ep = cexp(mu_p * dt)
    cdef double complex em = cexp(mu_m * dt)
    cdef double complex denom = mu_p - mu_m
    cdef double complex m11 = (em * mu_p - ep * mu_m) / denom
    cdef double complex m12 = (ep - em) * (1j * omega) / denom
    cdef double complex m21 = (ep - em) * (1j * omega * ac - g) / denom
    cdef double complex m22 = (ep * (tr - mu_m) - em * (tr - mu_p)) / denom
    cdef double complex zn = n2[0] + 1j * n3[0]
    cdef double complex zJ = J2[0] + 1j * J3[0]
    cdef double complex zn_new = m11 * zn + m12 * zJ
    cdef double complex zJ_new = m21 * zn + m22 * zJ
    n2[0] = creal(zn_new)
    n3[0] = cimag(zn_new)
    J2[0] = creal(zJ_new)
    J3[0] = cimag(zJ_new)


def spin_step_exact(double[::1] n2, double[::1] n3,
                    double[::1] J2, double[::1] J3,
                    double[::1] n0, double[::1] J0, g,
                    double mtheta, double omega, double dt):
    cdef Py_ssize_t n = n2.shape[0]
    cdef Py_ssize_t i
    cdef double[::1] garr
    if g is None:
        for i in range(n):
            _spin_cell_exact(&n2[i], &n3[i], &J2[i], &J3[i],
                             n0[i], J0[i], 0.0, mtheta, omega, dt)
    else:
        garr = g
        for i in range(n):
            _spin_cell_exact(&n2[i], &n3[i], &J2[i], &J3[i],
                             n0[i], J0[i], garr[i], mtheta, omega, dt)


cdef inline void _spin_cell_rk4(double* n2, double* n3, double* J2, double* J3,
                                double n0, double J0, double g,
                                double mtheta, double omega, double dt) nogil:
    cdef double u0 = J0 / n0
    cdef double ac = mtheta - u0 * u0
    cdef double bc = 2.0 * u0
    cdef double complex a12 = 1j * omega
    cdef double complex a21 = 1j * omega * ac - g
    cdef double complex a22 = 1j * omega * bc
    cdef double complex zn = n2[0] + 1j * n3[0]
    cdef double complex zJ = J2[0] + 1j * J3[0]
    cdef double complex k1n = a12 * zJ
    cdef double complex k1J = a21 * zn + a22 * zJ
    cdef double complex k2n = a12 * (zJ + 0.5 * dt * k1J)
    cdef double complex k2J = a21 * (zn + 0.5 * dt * k1n) + a22 * (zJ + 0.5 * dt * k1J)
    cdef double complex k3n = a12 * (zJ + 0.5 * dt * k2J)
    cdef double complex k3J = a21 * (zn + 0.5 * dt * k2n) + a22 * (zJ + 0.5 * dt * k2J)
    cdef double complex k4n = a12 * (zJ + dt * k3J)
    cdef double complex k4J = a21 * (zn + dt * k3n) + a22 * (zJ + dt * k3J)
    zn = zn + dt / 6.0 * (k1n + 2.0 * k2n + 2.0 * k3n + k4n)
    zJ = zJ + dt / 6.0 * (k1J + 2.0 * k2J + 2.0 * k3J + k4J)
    n2[0] = creal(zn)
    n3[0] = cimag(zn)
    J2[0] = creal(zJ)
    J3[0] = cimag(zJ)


def spin_step_rk4(double[::1] n2, double[::1] n3,
                  double[::1] J2, double[::1] J3,
                  double[::1] n0, double[::1] J0, g,
                  double mtheta, double omega, double dt):
    cdef Py_ssize_t n = n2.shape[0]
    cdef Py_ssize_t i
    cdef double[::1] garr
    if g is None:
        for i in range(n):
            _spin_cell_rk4(&n2[i], &n3[i], &J2[i], &J3[i],
                           n0[i], J0[i], 0.0, mtheta, omega, dt)
    else:
        garr = g
        for i in range(n):
            _spin_cell_rk4(&n2[i], &n3[i], &J2[i], &J3[i],
                           n0[i], J0[i], garr[i], mtheta, omega, dt)


# partner component for the advective flux, -1 when the flux vanishes
cdef int[12] _PARTNER_X = [1, 0, -1, -1, 5, 4, -1, -1, 9, 8, -1, -1]
cdef int[12] _PARTNER_Y = [2, -1, 0, -1, 6, -1, 4, -1, 10, -1, 8, -1]


def lxf_step_2d(double[:, :, ::1] U, double dt, double dx, double dy, double v_F):
    cdef Py_ssize_t nc = U.shape[0], nx = U.shape[1], ny = U.shape[2]
    out_arr = np.empty((nc, nx, ny))
    hx_arr = np.empty((nc, nx, ny))
    hy_arr = np.empty((nc, nx, ny))
    cdef double[:, :, ::1] out = out_arr
    cdef double[:, :, ::1] Hx = hx_arr
    cdef double[:, :, ::1] Hy = hy_arr
    cdef Py_ssize_t c, i, j, ip, jp, im, jm
    cdef int px, py
    cdef double fc, fe, fn, cx = dt / dx, cy = dt / dy
    for c in range(nc):
        px = _PARTNER_X[c]
        py = _PARTNER_Y[c]
        for i in range(nx):
            ip = i + 1 if i + 1 < nx else 0
            for j in range(ny):
                jp = j + 1 if j + 1 < ny else 0
                fc = v_F * U[px, i, j] if px >= 0 else 0.0
                fe = v_F * U[px, ip, j] if px >= 0 else 0.0
                Hx[c, i, j] = 0.5 * (fc + fe) - 0.5 * v_F * (U[c, ip, j] - U[c, i, j])
                fc = v_F * U[py, i, j] if py >= 0 else 0.0
                fn = v_F * U[py, i, jp] if py >= 0 else 0.0
                Hy[c, i, j] = 0.5 * (fc + fn) - 0.5 * v_F * (U[c, i, jp] - U[c, i, j])
    for c in range(nc):
        for i in range(nx):
            im = i - 1 if i > 0 else nx - 1
            for j in range(ny):
                jm = j - 1 if j > 0 else ny - 1
                out[c, i, j] = (U[c, i, j]
                                - cx * (Hx[c, i, j] - Hx[c, im, j])
                                - cy * (Hy[c, i, j] - Hy[c, i, jm]))
    return out_arr


cdef inline void _local_rhs_cell(double* u, double* d, double dVx, double dVy,
                                 double mtheta, double omega) nogil:
    cdef double n0 = u[0]
    cdef double u0x = u[4] / n0
    cdef double u0y = u[8] / n0
    cdef double axx = mtheta - u0x * u0x
    cdef double ayy = mtheta - u0y * u0y
    cdef double axy = -u0x * u0y
    cdef double L1xx = u[1] * axx + 2.0 * u0x * u[5]
    cdef double L2xx = u[2] * axx + 2.0 * u0x * u[6]
    cdef double L3xx = u[3] * axx + 2.0 * u0x * u[7]
    cdef double L1yy = u[1] * ayy + 2.0 * u0y * u[9]
    cdef double L2yy = u[2] * ayy + 2.0 * u0y * u[10]
    cdef double L3yy = u[3] * ayy + 2.0 * u0y * u[11]
    cdef double L1xy = u[1] * axy + u0x * u[9] + u0y * u[5]
    cdef double L2xy = u[2] * axy + u0x * u[10] + u0y * u[6]
    cdef double L3xy = u[3] * axy + u0x * u[11] + u0y * u[7]
    d[0] = 0.0
    d[1] = omega * u[11]
    d[2] = -omega * u[7]
    d[3] = omega * (u[6] - u[9])
    d[4] = -u[0] * dVx
    d[5] = omega * L3xy - u[1] * dVx
    d[6] = -omega * L3xx - u[2] * dVx
    d[7] = omega * (L2xx - L1xy) - u[3] * dVx
    d[8] = -u[0] * dVy
    d[9] = omega * L3yy - u[1] * dVy
    d[10] = -omega * L3xy - u[2] * dVy
    d[11] = omega * (L2xy - L1yy) - u[3] * dVy


def local_step_rk4_2d(double[:, :, ::1] U, dVx, dVy,
                      double mtheta, double omega, double dt):
    cdef Py_ssize_t nx = U.shape[1], ny = U.shape[2]
    cdef double[:, ::1] gx
    cdef double[:, ::1] gy
    cdef bint has_v = dVx is not None
    if has_v:
        gx = dVx
        gy = dVy
    cdef Py_ssize_t i, j, c
    cdef double vx = 0.0, vy = 0.0
    cdef double u[12]
    cdef double y[12]
    cdef double k1[12]
    cdef double k2[12]
    cdef double k3[12]
    cdef double k4[12]
    for i in range(nx):
        for j in range(ny):
            if has_v:
                vx = gx[i, j]
                vy = gy[i, j]
            for c in range(12):
                u[c] = U[c, i, j]
            _local_rhs_cell(u, k1, vx, vy, mtheta, omega)
            for c in range(12):
                y[c] = u[c] + 0.5 * dt * k1[c]
            _local_rhs_cell(y, k2, vx, vy, mtheta, omega)
            for c in range(12):
                y[c] = u[c] + 0.5 * dt * k2[c]
            _local_rhs_cell(y, k3, vx, vy, mtheta, omega)
            for c in range(12):
                y[c] = u[c] + dt * k3[c]
            _local_rhs_cell(y, k4, vx, vy, mtheta, omega)
            for c in range(12):
                U[c, i, j] = u[c] + dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c])
