import math

import numpy as np
import pytest

from graphydro import solver1d as s1
from graphydro.errors import ModelDomainError
from graphydro.params import PhysParams

PARAMS = PhysParams()
OMEGA1 = PhysParams(hbar=2.0)    # 2 v_F / hbar = 1


def constant_field(cells=16, bc="periodic", **overrides):
    U = np.zeros((8, cells))
    U[0] = 1.0
    for key, val in overrides.items():
        U[{"n0": 0, "n1": 1, "n2": 2, "n3": 3, "J0": 4, "J1": 5, "J2": 6, "J3": 7}[key]] = val
    return s1.Field1D(0.0, 1.0, U, bc)


def wave_field(cells, amplitude=0.1):
    U = np.zeros((8, cells))
    r = (np.arange(cells) + 0.5) / cells
    wave = amplitude * np.sin(2.0 * math.pi * r)
    U[0] = 1.0 + wave
    U[1] = wave
    return s1.Field1D(0.0, 1.0, U, "periodic")


# ---------------------------------------------------------------------------
# rhs_smooth
# ---------------------------------------------------------------------------

def test_rhs_constant_decoupled_state_is_zero():
    f = constant_field(J0=0.3, J1=-0.2)
    rhs = s1.rhs_smooth(f, None, PARAMS)
    np.testing.assert_array_equal(rhs, 0.0)


def test_rhs_uniform_spin_rotation_example():
    f = constant_field(n2=1.0)
    rhs = s1.rhs_smooth(f, None, OMEGA1)
    np.testing.assert_array_equal(rhs[2], 0.0)
    np.testing.assert_array_equal(rhs[3], 0.0)
    np.testing.assert_array_equal(rhs[6], 0.0)
    np.testing.assert_allclose(rhs[7], 1.0, rtol=1e-15)


def test_rhs_constant_potential_slope():
    f = constant_field(n1=0.5)
    g = 0.7
    V = s1.SmoothPotential1D(v=np.zeros(f.cells), dv=np.full(f.cells, g))
    rhs = s1.rhs_smooth(f, V, PARAMS)
    np.testing.assert_allclose(rhs[4], -1.0 * g, rtol=1e-15)
    np.testing.assert_allclose(rhs[5], -0.5 * g, rtol=1e-15)


def test_rhs_rejects_nonpositive_density():
    f = constant_field()
    f.U[0, 3] = -1.0
    with pytest.raises(ModelDomainError):
        s1.rhs_smooth(f, None, PARAMS)


# ---------------------------------------------------------------------------
# stepping
# ---------------------------------------------------------------------------

def test_step_fixed_point_bitwise(backend):
    f = constant_field(n1=0.25, J0=0.1, J1=0.4)
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=1.0)
    out = s1.step(f, None, s1.time_step(f, cfg, PARAMS), cfg, PARAMS)
    np.testing.assert_array_equal(out.U, f.U)


def test_step_spin_rotation_harmonic(backend):
    # frozen-coefficient block with n0 = 1, J0 = 0, m theta = 1, omega = 1:
    # n2(t) = cos t, J3(t) = sin t
    f = constant_field(n2=1.0)
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=10.0)
    traj = s1.run_smooth(f, None, cfg, OMEGA1)
    t, fin = traj[-1]
    assert t == pytest.approx(10.0, abs=1e-12)
    np.testing.assert_allclose(fin.U[2], math.cos(t), atol=5e-13)
    np.testing.assert_allclose(fin.U[7], math.sin(t), atol=5e-13)
    np.testing.assert_array_equal(fin.U[3], 0.0)
    np.testing.assert_array_equal(fin.U[6], 0.0)


def test_step_spin_rotation_rk4_order(backend):
    errs = []
    for cells in (16, 32):
        U = np.zeros((8, cells))
        U[0] = 1.0
        U[2] = 1.0
        f = s1.Field1D(0.0, 1.0, U, "periodic")
        cfg = s1.SolverConfig1D(cfl=0.5, t_end=2.0, rotation_integrator="rk4")
        traj = s1.run_smooth(f, None, cfg, OMEGA1)
        t, fin = traj[-1]
        errs.append(abs(fin.U[2, 0] - math.cos(t)))
    order = math.log2(errs[0] / errs[1])
    assert order >= 3.8


def test_step_wave_transport_first_order(backend):
    errs = []
    for cells in (128, 256, 512):
        f = wave_field(cells)
        cfg = s1.SolverConfig1D(cfl=0.5, t_end=0.5, output_stride=10 ** 6)
        traj = s1.run_smooth(f, None, cfg, PARAMS)
        t, fin = traj[-1]
        exact = 1.0 + 0.1 * np.sin(2.0 * math.pi * (fin.r - PARAMS.v_F * t))
        errs.append(np.abs(fin.U[0] - exact).sum() * fin.dr)
        assert abs(fin.mass() - f.mass()) <= 1e-12 * f.mass()
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) >= 0.9


def test_step_riemann_invariant_totals(backend):
    f = wave_field(128, amplitude=0.2)
    f.U[1] += 0.05
    cfg = s1.SolverConfig1D(cfl=0.7, t_end=0.3)
    traj = s1.run_smooth(f, None, cfg, PARAMS)
    fin = traj[-1][1]
    for sign in (1.0, -1.0):
        before = np.sum(f.U[0] + sign * f.U[1]) * f.dr
        after = np.sum(fin.U[0] + sign * fin.U[1]) * fin.dr
        assert after == pytest.approx(before, rel=1e-13)


def test_step_spin_block_decoupling(backend):
    # zero spin block stays exactly zero while the wave block moves
    f = wave_field(64)
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=0.2)
    traj = s1.run_smooth(f, None, cfg, PARAMS)
    fin = traj[-1][1]
    np.testing.assert_array_equal(fin.U[2:4], 0.0)
    np.testing.assert_array_equal(fin.U[6:8], 0.0)


def test_step_spin_quadratic_invariant(backend):
    # eigen-decomposed energies |zJ - lam zn|^2 (lam = u0 +- sqrt(mtheta))
    # are conserved by one exact frozen-coefficient step
    rng = np.random.default_rng(31)
    U = np.zeros((8, 16))
    U[0] = 1.4
    U[4] = 0.5
    U[2], U[3], U[6], U[7] = rng.normal(size=(4, 16)) * 0.3
    f = s1.Field1D(0.0, 1.0, U, "periodic")
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=1.0)

    def invariants(field):
        zn = field.U[2] + 1j * field.U[3]
        zJ = field.U[6] + 1j * field.U[7]
        u0 = field.U[4] / field.U[0]
        lam_p = u0 + math.sqrt(PARAMS.mtheta)
        lam_m = u0 - math.sqrt(PARAMS.mtheta)
        return np.abs(zJ - lam_p * zn) ** 2 + np.abs(zJ - lam_m * zn) ** 2

    before = invariants(f)
    U2 = f.U.copy()
    s1._spin_substep(U2, None, 0.123, cfg, PARAMS)
    after = invariants(s1.Field1D(0.0, 1.0, U2, "periodic"))
    np.testing.assert_allclose(after, before, rtol=1e-13)


def test_step_rejects_cfl_violation():
    f = constant_field()
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=1.0)
    with pytest.raises(ValueError, match="CFL"):
        s1.step(f, None, 10.0 * s1.time_step(f, cfg, PARAMS), cfg, PARAMS)


def test_step_rejects_vacuum_density():
    f = constant_field()
    f.U[0, :] = 1e-13
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=1.0)
    with pytest.raises(ModelDomainError, match="floor"):
        s1.step(f, None, 1e-3, cfg, PARAMS)


def test_lie_splitting_runs(backend):
    f = constant_field(n2=0.5)
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=0.4, splitting="lie")
    traj = s1.run_smooth(f, None, cfg, OMEGA1)
    t, fin = traj[-1]
    # constant coefficients: Lie and Strang agree, rotation stays exact
    np.testing.assert_allclose(fin.U[2], 0.5 * math.cos(t), atol=1e-13)


# ---------------------------------------------------------------------------
# piecewise-constant solutions and jump conditions
# ---------------------------------------------------------------------------

def klein_setup(cells=128):
    barrier = s1.Barrier(V0=1.0, a=1.0, b=2.0)
    field = s1.piecewise_constant(2.0, 2.0, 1.0, 1.0, barrier, PARAMS,
                                  r_min=0.0, r_max=4.0, cells=cells, bc="copy")
    return barrier, field


def test_piecewise_constant_profile():
    barrier, field = klein_setup()
    inside = (field.r > 1.0) & (field.r < 2.0)
    np.testing.assert_array_equal(field.U[4][~inside], 2.0)
    np.testing.assert_array_equal(field.U[4][inside], 1.0)
    np.testing.assert_array_equal(field.U[5], field.U[4])
    np.testing.assert_array_equal(field.U[2:4], 0.0)
    np.testing.assert_array_equal(field.U[6:8], 0.0)


def test_piecewise_constant_zero_barrier_is_uniform():
    barrier = s1.Barrier(V0=0.0, a=1.0, b=2.0)
    field = s1.piecewise_constant(1.5, 0.7, 1.0, 0.3, barrier, PARAMS,
                                  r_min=0.0, r_max=4.0, cells=64)
    assert np.ptp(field.U[4]) == 0.0
    assert np.ptp(field.U[5]) == 0.0


def test_jump_residual_exact_zero_for_solution():
    barrier, field = klein_setup()
    res = s1.jump_residual(field, barrier, PARAMS)
    np.testing.assert_array_equal(res, 0.0)


def test_jump_residual_uncompensated_constant():
    barrier = s1.Barrier(V0=0.8, a=1.0, b=2.0)
    field = constant_field(cells=64, n1=0.0, J0=0.2, J1=0.2)
    field = s1.Field1D(0.0, 4.0, field.U, "copy")
    res = s1.jump_residual(field, barrier, PARAMS)
    # [J] = 0 so the energy residual is +- n0 V0; momentum pairs with n1 = 0
    assert res[0] == pytest.approx(0.8)
    assert res[2] == pytest.approx(-0.8)
    assert res[1] == res[3] == 0.0


def test_jump_residual_reports_edge_spin_densities():
    barrier = s1.Barrier(V0=0.0, a=1.0, b=2.0)
    field = constant_field(cells=64, n2=0.25, n3=-0.5)
    field = s1.Field1D(0.0, 4.0, field.U, "copy")
    res = s1.jump_residual(field, barrier, PARAMS)
    np.testing.assert_array_equal(res[:4], 0.0)
    assert res[4] == pytest.approx(0.25)
    assert res[5] == pytest.approx(-0.5)


# ---------------------------------------------------------------------------
# barrier evolution
# ---------------------------------------------------------------------------

def test_run_barrier_keeps_exact_solution_steady(backend):
    barrier, field = klein_setup()
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=2.0, output_stride=1000)
    traj = s1.run_barrier(field, barrier, cfg, PARAMS)
    drift = max(np.abs(f.U - field.U).max() for _, f in traj)
    assert drift <= 1e-12 * cfg.t_end
    res_max = max(np.abs(s1.jump_residual(f, barrier, PARAMS)).max() for _, f in traj)
    assert res_max <= 1e-8


def test_run_barrier_zero_height_equals_smooth(backend):
    barrier = s1.Barrier(V0=0.0, a=1.0, b=2.0)
    U = np.zeros((8, 64))
    r = (np.arange(64) + 0.5) * 4.0 / 64
    U[0] = 1.0 + 0.1 * np.sin(2.0 * math.pi * r / 4.0)
    U[1] = 0.1 * np.cos(2.0 * math.pi * r / 4.0)
    U[4] = 0.05
    f = s1.Field1D(0.0, 4.0, U, "periodic")
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=0.5)
    smooth = s1.run_smooth(f, None, cfg, PARAMS)[-1][1]
    jumped = s1.run_barrier(f, barrier, cfg, PARAMS)[-1][1]
    np.testing.assert_array_equal(smooth.U, jumped.U)


def test_run_barrier_rejects_violating_initial_field():
    barrier, field = klein_setup()
    inside = (field.r > barrier.a) & (field.r < barrier.b)
    field.U[5, inside] += 0.3   # break the energy balance at both edges
    cfg = s1.SolverConfig1D(cfl=0.5, t_end=1.0)
    with pytest.raises(ModelDomainError, match="jump conditions"):
        s1.run_barrier(field, barrier, cfg, PARAMS)


def test_barrier_edges_must_sit_on_interfaces():
    barrier = s1.Barrier(V0=1.0, a=1.05, b=2.0)
    field = constant_field(cells=64)
    field = s1.Field1D(0.0, 4.0, field.U, "copy")
    with pytest.raises(ValueError, match="interface"):
        s1.jump_residual(field, barrier, PARAMS)


# ---------------------------------------------------------------------------
# energy density
# ---------------------------------------------------------------------------

def test_energy_density_thermal_only():
    assert s1.energy_density(1.0, 0.0, 0.0, PARAMS) == pytest.approx(0.5)


def test_energy_density_continuous_across_barrier():
    barrier, field = klein_setup()
    v = barrier.values(field.r)
    e = s1.energy_density(field.U[0], field.U[5], v, PARAMS)
    np.testing.assert_allclose(e, 2.5, atol=1e-14)


def test_energy_density_scale_invariance():
    fast = PhysParams(v_F=2.0)
    assert (s1.energy_density(1.0, 0.5, 0.3, PARAMS)
            == pytest.approx(s1.energy_density(1.0, 0.25, 0.3, fast)))


def test_energy_density_rejects_vacuum():
    with pytest.raises(ModelDomainError):
        s1.energy_density(0.0, 1.0, 0.0, PARAMS)


# ---------------------------------------------------------------------------
# PDE residual
# ---------------------------------------------------------------------------

def test_pde_residual_steady_state():
    barrier, field = klein_setup()
    res, valid = s1.pde_residual(field, field, 1e-3, None, PARAMS, barrier=barrier)
    assert np.abs(res[:, valid]).max() <= 1e-12


def test_pde_residual_manufactured_right_mover():
    # exact d'Alembert solution sampled at two times; the centered residual
    # decays at second order in the grid spacing (dt tied to dr)
    errs = []
    for cells in (64, 128, 256):
        r = (np.arange(cells) + 0.5) / cells
        dt = 0.5 / cells

        def snapshot(t):
            U = np.zeros((8, cells))
            wave = 0.1 * np.sin(2.0 * math.pi * (r - t))
            U[0] = 1.0 + wave
            U[1] = wave
            return s1.Field1D(0.0, 1.0, U, "periodic")

        res, valid = s1.pde_residual(snapshot(0.2), snapshot(0.2 + dt), dt, None, PARAMS)
        errs.append(np.abs(res[:, valid]).max())
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) >= 1.9


def test_pde_residual_detects_non_solution():
    rng = np.random.default_rng(33)
    U = rng.uniform(0.5, 1.5, size=(8, 64))
    f_a = s1.Field1D(0.0, 1.0, U, "periodic")
    f_b = s1.Field1D(0.0, 1.0, U + rng.uniform(0.1, 0.2, size=(8, 64)), "periodic")
    res, valid = s1.pde_residual(f_a, f_b, 1e-2, None, PARAMS)
    assert np.abs(res[:, valid]).max() > 1.0
