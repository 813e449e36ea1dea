"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report.  Tolerances are fixed here and nowhere else.
"""

import math

import numpy as np
import pytest

from graphydro import equilibrium as eq
from graphydro import purestate as ps
from graphydro import solver1d as s1
from graphydro import solver2d as s2
from graphydro.params import PhysParams

PARAMS = PhysParams()


def report(name, detail):
    print(f"ACCEPTANCE {name}: PASS ({detail})")


# ---------------------------------------------------------------------------

def test_closure_oracle():
    """Gauss-Hermite moments of the equilibrium reproduce the state and the
    closure tensor to 1e-8 relative, over 50 random admissible states."""
    rng = np.random.default_rng(20240815)
    worst_first, worst_second = 0.0, 0.0
    for _ in range(50):
        n0 = rng.uniform(0.5, 2.0)
        nv = rng.uniform(-0.4, 0.4, size=3) * n0
        u0 = rng.uniform(-0.7, 0.7, size=2)
        J = rng.uniform(-0.5, 0.5, size=(4, 2))
        J[0] = n0 * u0
        state = eq.MomentState(n=np.concatenate([[n0], nv]), J=J)
        quad = eq.QuadratureSpec.for_state(state, PARAMS, order=20)
        n_rec, J_rec, Q2 = eq.quadrature_moments(
            lambda p: eq.strongly_mixed_equilibrium(state, PARAMS, p), quad)
        L = eq.closure_tensor(state, PARAMS)
        scale1 = max(np.abs(state.n).max(), np.abs(state.J).max())
        worst_first = max(worst_first,
                          np.abs(n_rec - state.n).max() / scale1,
                          np.abs(J_rec - state.J).max() / scale1)
        worst_second = max(worst_second,
                           np.abs(Q2[1:] - L).max() / max(np.abs(L).max(), 1e-30))
    assert worst_first <= 1e-8
    assert worst_second <= 1e-8
    report("closure-oracle",
           f"first-moment rel err {worst_first:.2e}, closure rel err {worst_second:.2e}")


def test_klein_piecewise_equivalence():
    """Klein moments equal the piecewise-constant solution with
    beta0 = n1 E, beta1 = n0 E; jump residuals and the energy jump vanish."""
    ks = ps.klein_state(E=2.0, V0=1.0, a=1.0, b=2.0, params=PARAMS)
    barrier = s1.Barrier(V0=1.0, a=1.0, b=2.0)
    field = s1.piecewise_constant(beta0=ks.s * 2.0, beta1=2.0, n0=1.0, n1=ks.s,
                                  barrier=barrier, params=PARAMS,
                                  r_min=0.0, r_max=4.0, cells=512, bc="copy")
    n, J = ps.klein_moments(ks, field.r, PARAMS)
    assert np.array_equal(field.U[:4], n)
    assert np.array_equal(field.U[4], J[0])
    assert np.array_equal(field.U[5], J[1])
    res = s1.jump_residual(field, barrier, PARAMS)
    assert np.abs(res).max() <= 1e-14
    energy = s1.energy_density(field.U[0], field.U[5], barrier.values(field.r), PARAMS)
    assert np.abs(np.diff(energy)).max() <= 1e-14
    report("klein-equivalence",
           f"jump residual {np.abs(res).max():.1e}, "
           f"energy jump {np.abs(np.diff(energy)).max():.1e}")


def test_transmission():
    """T(0, q) = 1 for 20 phases; |t| = 1 for 20 random admissible states."""
    for q in np.linspace(0.0, 8.0, 20):
        assert ps.transmission(0.0, q) == pytest.approx(1.0, abs=1e-14)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        E = rng.uniform(-4.0, 4.0)
        V0 = rng.uniform(-4.0, 4.0)
        a = rng.uniform(-1.0, 0.0)
        ks = ps.klein_state(E=E, V0=V0, a=a, b=a + rng.uniform(0.1, 3.0), params=PARAMS)
        worst = max(worst, abs(abs(ks.t) - 1.0))
    assert worst <= 1e-14
    report("transmission", f"max | |t| - 1 | = {worst:.1e}")


def test_barrier_steady_state():
    """The piecewise-constant field stays steady to 1e-10 per unit time over
    t = 10 on 512 cells in barrier mode."""
    barrier = s1.Barrier(V0=1.0, a=1.0, b=2.0)
    field = s1.piecewise_constant(2.0, 2.0, 1.0, 1.0, barrier, PARAMS,
                                  r_min=0.0, r_max=4.0, cells=512, bc="copy")
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=10.0, output_stride=10 ** 9)
    traj = s1.run_barrier(field, barrier, cfg, PARAMS)
    t_end, final = traj[-1]
    drift = np.abs(final.U - field.U).max() / t_end
    assert drift <= 1e-10
    report("barrier-steady", f"max-norm drift {drift:.2e} per unit time")


def test_spin_block_dynamics():
    """Uniform spin rotation at omega = 1: n2 = cos t, J3 = sin t to 1e-12
    with the exact integrator and at fourth order with RK4, up to t = 10."""
    omega1 = PhysParams(hbar=2.0)

    def run(integrator, cells=16):
        U = np.zeros((8, cells))
        U[0] = 1.0
        U[2] = 1.0
        f = s1.Field1D(0.0, 1.0, U, "periodic")
        cfg = s1.SolverConfig1D(cfl=0.5, t_end=10.0, rotation_integrator=integrator,
                                output_stride=10 ** 9)
        t, fin = s1.run_smooth(f, None, cfg, omega1)[-1]
        err = max(np.abs(fin.U[2] - math.cos(t)).max(),
                  np.abs(fin.U[7] - math.sin(t)).max())
        dt = t / round(t / s1.time_step(f, cfg, omega1) + 0.5)
        return err, dt

    err_exact, _ = run("exact_frozen")
    assert err_exact <= 1e-12
    err_c, dt_c = run("rk4", cells=16)
    err_f, dt_f = run("rk4", cells=32)
    order = math.log(err_c / err_f) / math.log(dt_c / dt_f)
    assert order >= 3.8
    assert err_c <= 10.0 * dt_c ** 4
    report("spin-block",
           f"exact err {err_exact:.2e}; rk4 err {err_c:.2e} at dt {dt_c:.3g}, "
           f"order {order:.2f}")


def test_wave_transport():
    """Sinusoidal right-mover converges in L1 at order >= 0.9 over
    128/256/512 cells; total n0 conserved to 1e-12 relative."""
    errs = []
    for cells in (128, 256, 512):
        U = np.zeros((8, cells))
        r = (np.arange(cells) + 0.5) / cells
        wave = 0.1 * np.sin(2.0 * math.pi * r)
        U[0] = 1.0 + wave
        U[1] = wave
        f = s1.Field1D(0.0, 1.0, U, "periodic")
        cfg = s1.SolverConfig1D(cfl=0.5, t_end=0.5, output_stride=10 ** 9)
        t, fin = s1.run_smooth(f, None, cfg, PARAMS)[-1]
        exact = 1.0 + 0.1 * np.sin(2.0 * math.pi * (fin.r - PARAMS.v_F * t))
        errs.append(np.abs(fin.U[0] - exact).sum() * fin.dr)
        assert abs(fin.mass() - f.mass()) <= 1e-12 * f.mass()
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) >= 0.9
    report("wave-transport", f"L1 orders {orders[0]:.3f}, {orders[1]:.3f}")


def test_pure_state_identity():
    """Two-component Gaussian packet: identity residual converges at order
    >= 1.9 over three grids; constant plane-wave moments give residual 0
    exactly; |n_vec| = n0 to 1e-12 for every preset."""
    errs = []
    for m in (401, 801, 1601):
        r = np.linspace(-8.0, 8.0, m)
        n, J = ps.moments_from_spinor(ps.spinor_preset("gaussian-packet", r), PARAMS)
        res = ps.pure_state_identity_residual(n, J, r[1] - r[0])
        errs.append(np.abs(res).max())
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) >= 1.9

    n = np.zeros((4, 64))
    J = np.zeros((4, 64))
    n[0] = n[1] = 1.0
    J[0] = J[1] = 1.3
    plane_res = ps.pure_state_identity_residual(n, J, 0.1)
    assert np.array_equal(plane_res, np.zeros_like(plane_res))

    worst = 0.0
    for preset in ("plane-wave", "gaussian-packet", "polarized-packet"):
        r = np.linspace(-8.0, 8.0, 801)
        n, _ = ps.moments_from_spinor(ps.spinor_preset(preset, r), PARAMS)
        defect = np.abs(np.sqrt(n[1] ** 2 + n[2] ** 2 + n[3] ** 2) - n[0]).max()
        worst = max(worst, defect / n[0].max())
    assert worst <= 1e-12
    report("pure-state-identity",
           f"orders {orders[0]:.3f}, {orders[1]:.3f}; plane-wave residual 0; "
           f"polarization defect {worst:.1e}")


def test_homogeneous_2d_oracle():
    """Uniform-state PDE trajectory matches an independent plain-float RK4
    integration of the homogeneous reduction to 1e-6 at t = 1; n0 and J0
    stay constant to 1e-12."""
    n = [1.0, 0.12, -0.08, 0.05]
    Jx = [0.15, 0.02, -0.03, 0.01]
    Jy = [-0.05, 0.04, 0.02, -0.02]
    state = s2.UniformState(n=np.array(n), J=np.column_stack([Jx, Jy]))
    f = s2.Field2D.uniform(state, 0.0, 1.0, 0.0, 1.0, 8, 8)
    cfg = s2.SolverConfig2D(cfl=0.9, t_end=1.0)
    dt = 1e-3
    cur = f
    for _ in range(1000):
        cur = s2.step_2d(cur, None, dt, PARAMS, cfg)

    def rhs(y):
        n0, n1, n2, n3, j0x, j1x, j2x, j3x, j0y, j1y, j2y, j3y = y
        om, mt = PARAMS.omega, PARAMS.mtheta
        u0x, u0y = j0x / n0, j0y / n0
        axx, ayy, axy = mt - u0x * u0x, mt - u0y * u0y, -u0x * u0y
        L = {}
        for s, (ns, jx, jy) in enumerate(
                ((n1, j1x, j1y), (n2, j2x, j2y), (n3, j3x, j3y)), start=1):
            L[s, "xx"] = ns * axx + 2.0 * u0x * jx
            L[s, "yy"] = ns * ayy + 2.0 * u0y * jy
            L[s, "xy"] = ns * axy + u0x * jy + u0y * jx
        return [0.0, om * j3y, -om * j3x, om * (j2x - j1y),
                0.0, om * L[3, "xy"], -om * L[3, "xx"], om * (L[2, "xx"] - L[1, "xy"]),
                0.0, om * L[3, "yy"], -om * L[3, "xy"], om * (L[2, "xy"] - L[1, "yy"])]

    y = n + Jx + Jy
    h = 1e-5
    for _ in range(100000):
        k1 = rhs(y)
        k2 = rhs([a + 0.5 * h * b for a, b in zip(y, k1)])
        k3 = rhs([a + 0.5 * h * b for a, b in zip(y, k2)])
        k4 = rhs([a + h * b for a, b in zip(y, k3)])
        y = [a + h / 6.0 * (b + 2 * c + 2 * d + e)
             for a, b, c, d, e in zip(y, k1, k2, k3, k4)]

    err = np.abs(cur.U[:, 0, 0] - np.array(y)).max()
    assert err <= 1e-6
    const_defect = max(np.abs(cur.U[0] - n[0]).max(),
                       np.abs(cur.U[4] - Jx[0]).max(),
                       np.abs(cur.U[8] - Jy[0]).max())
    assert const_defect <= 1e-12
    report("homogeneous-2d", f"PDE vs ODE err {err:.2e}, "
                             f"invariant defect {const_defect:.1e}")


def test_entropy_values():
    """Unit Maxwellian entropy equals -log(2 pi) to 1e-6; the polarization
    entropy satisfies c(0) = 0 and c(1 - 1e-10) = log 2 to 1e-6."""
    state = eq.MomentState(n=np.array([1.0, 0, 0, 0]), J=np.zeros((4, 2)))
    quad = eq.QuadratureSpec.for_state(state, PARAMS)
    val = eq.semiclassical_entropy(
        lambda r, p: eq.strongly_mixed_equilibrium(state, PARAMS, p),
        PARAMS, quad, [((0.0, 0.0), 1.0)])
    target = -math.log(2.0 * math.pi)
    assert val == pytest.approx(target, abs=1e-6)
    assert eq.polarization_entropy(0.0) == 0.0
    assert eq.polarization_entropy(1.0 - 1e-10) == pytest.approx(math.log(2.0), abs=1e-6)
    report("entropy", f"Maxwellian entropy {val:.9f} vs {target:.9f}")


def test_mixedness_diagnostic():
    """Worked state reports bound 0.75 to 1e-12; pure-state presets report
    ratio 1 and are flagged outside the strongly-mixed regime."""
    state = eq.MomentState(
        n=np.array([1.0, 0.1, 0.0, 0.0]),
        J=np.array([[0.0, 0.0], [0.1, 0.0], [0.0, 0.0], [0.0, 0.0]]))
    rep = eq.mixedness_check(state, PARAMS)
    assert rep.bound == pytest.approx(0.75, abs=1e-12)
    assert rep.ratio == pytest.approx(0.01, abs=1e-12)

    flagged = []
    ks = ps.klein_state(E=2.0, V0=1.0, a=0.0, b=1.0, params=PARAMS)
    n, J = ps.klein_moments(ks, -1.0, PARAMS)
    pure_states = [eq.MomentState(n=n, J=np.column_stack([J, np.zeros(4)]))]
    k = 1.3
    pure_states.append(eq.MomentState(
        n=np.array([1.0, 1.0, 0.0, 0.0]),
        J=np.array([[k, 0.0], [k, 0.0], [0.0, 0.0], [0.0, 0.0]])))
    for st in pure_states:
        r = eq.mixedness_check(st, PARAMS)
        assert r.ratio == pytest.approx(1.0, abs=1e-14)
        assert not r.in_regime
        flagged.append(r.margin)
    report("mixedness", f"worked bound {rep.bound}; pure-state margins {flagged}")
