"""Scenario runner: config parsing, preset experiments, CSV/manifest output.

Config files are flat INI (`key = value`) with sections [phys], [grid],
[solver], [scenario], [output].  Every CSV starts with `#`-prefixed header
lines echoing the effective configuration, so a run is reproducible from
its own output; reruns of the same config are byte-identical.  Exit codes:
0 success, 2 config validation failure, 3 model-domain violation.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys

import numpy as np

from . import _backend, equilibrium, purestate, solver1d, solver2d
from .errors import ConfigError, ModelDomainError
from .params import PhysParams

_REQUIRED = object()


class Config:
    """Validated view of an INI config; missing/bad fields name themselves."""

    def __init__(self, sections: dict[str, dict[str, str]]):
        self.sections = {k: dict(v) for k, v in sections.items()}

    @classmethod
    def from_file(cls, path: str) -> "Config":
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file not readable: {path}")
        return cls({name: dict(parser[name]) for name in parser.sections()})

    def get(self, section: str, key: str, conv=float, default=_REQUIRED):
        raw = self.sections.get(section, {}).get(key)
        if raw is None:
            if default is _REQUIRED:
                raise ConfigError(f"{key}: required (section [{section}])")
            return default
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{key}: invalid value {raw!r} ({exc})") from exc

    def set(self, section: str, key: str, value):
        if value is None:
            return
        self.sections.setdefault(section, {})[key] = str(value)

    def items(self):
        for section in sorted(self.sections):
            for key in sorted(self.sections[section]):
                yield f"{section}.{key}", self.sections[section][key]


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(path: str, config: Config, columns, rows):
    with open(path, "w") as fh:
        for key, value in config.items():
            fh.write(f"# {key} = {value}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_manifest(path: str, config: Config, derived: dict):
    with open(path, "w") as fh:
        fh.write("[config]\n")
        for key, value in config.items():
            fh.write(f"{key} = {value}\n")
        fh.write("[derived]\n")
        for key, value in derived.items():
            fh.write(f"{key} = {_fmt(value)}\n")


def _phys(config: Config, required: bool) -> PhysParams:
    default = _REQUIRED if required else 1.0
    return PhysParams(
        hbar=config.get("phys", "hbar", float, default),
        v_F=config.get("phys", "v_f", float, default),
        m=config.get("phys", "m", float, default),
        theta=config.get("phys", "theta", float, default),
    )


def _solver_cfg(config: Config) -> solver1d.SolverConfig1D:
    try:
        return solver1d.SolverConfig1D(
            cfl=config.get("solver", "cfl", float, 0.5),
            t_end=config.get("solver", "t_end", float),
            splitting=config.get("solver", "splitting", str, "strang"),
            rotation_integrator=config.get(
                "solver", "rotation_integrator", str, "exact_frozen"),
            output_stride=config.get("solver", "output_stride", int, 1),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _field_rows(trajectory):
    for t, f in trajectory:
        r = f.r
        for i in range(f.cells):
            yield (t, r[i], *f.U[:, i])


_COLUMNS_1D = ["t", "r", "n0", "n1", "n2", "n3", "J0", "J1", "J2", "J3"]


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def scenario_klein(config: Config, phys_required=True) -> dict:
    params = _phys(config, phys_required)
    E = config.get("scenario", "energy")
    V0 = config.get("scenario", "v0")
    a = config.get("scenario", "barrier_a")
    b = config.get("scenario", "barrier_b")
    r_min = config.get("grid", "r_min", float, a - (b - a))
    r_max = config.get("grid", "r_max", float, b + (b - a))
    cells = config.get("grid", "cells", int, 256)
    try:
        ks = purestate.klein_state(E, V0, a, b, params)
    except ValueError as exc:
        if isinstance(exc, ModelDomainError):
            raise
        raise ConfigError(str(exc)) from exc
    r = np.linspace(r_min, r_max, cells)
    n, J = purestate.klein_moments(ks, r, params)
    rows = [(0.0, r[i], *n[:, i], *J[:, i]) for i in range(r.size)]
    path = config.get("output", "path", str)
    write_csv(path, config, _COLUMNS_1D, rows)
    print(f"k = {_fmt(ks.k)}")
    print(f"q = {_fmt(ks.q)}")
    print(f"s = {int(ks.s)}  s' = {int(ks.s_prime)}")
    print(f"T = {_fmt(ks.T)}")
    report = equilibrium.mixedness_check(
        equilibrium.MomentState(n=n[:, 0], J=np.column_stack([J[:, 0], np.zeros(4)])),
        params)
    derived = {
        "k": ks.k, "q": ks.q, "s": ks.s, "s_prime": ks.s_prime,
        "alpha": ks.alpha, "beta": ks.beta, "T": ks.T, "abs_t": abs(ks.t),
        "mixedness_ratio": report.ratio, "mixedness_bound": report.bound,
        "mixedness_margin": report.margin,
        "strongly_mixed": report.in_regime,
    }
    write_manifest(path + ".manifest", config, derived)
    return derived


def _initial_1d(config: Config, params: PhysParams):
    name = config.get("scenario", "name", str)
    r_min = config.get("grid", "r_min", float, 0.0)
    r_max = config.get("grid", "r_max", float, 1.0)
    cells = config.get("grid", "cells", int, 256)
    if name == "wave1d":
        amp = config.get("scenario", "amplitude", float, 0.1)
        bc = config.get("scenario", "bc", str, "periodic")
        U = np.zeros((8, cells))
        r = r_min + (np.arange(cells) + 0.5) * (r_max - r_min) / cells
        wave = amp * np.sin(2.0 * math.pi * (r - r_min) / (r_max - r_min))
        U[0] = 1.0 + wave
        U[1] = wave
        try:
            return solver1d.Field1D(r_min, r_max, U, bc), None
        except ModelDomainError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if name == "spin_rotation":
        amp = config.get("scenario", "amplitude", float, 1.0)
        U = np.zeros((8, cells))
        U[0] = 1.0
        U[2] = amp
        return solver1d.Field1D(r_min, r_max, U, "periodic"), None
    if name == "barrier":
        E = config.get("scenario", "energy")
        V0 = config.get("scenario", "v0")
        a = config.get("scenario", "barrier_a")
        b = config.get("scenario", "barrier_b")
        barrier = solver1d.Barrier(V0=V0, a=a, b=b)
        sign = math.copysign(1.0, E)
        field = solver1d.piecewise_constant(
            beta0=sign * E, beta1=E, n0=1.0, n1=sign,
            barrier=barrier, params=params,
            r_min=r_min, r_max=r_max, cells=cells, bc="copy")
        return field, barrier
    raise ConfigError(f"name: unknown 1d scenario {name!r}")


def scenario_run1d(config: Config, phys_required=True) -> dict:
    params = _phys(config, phys_required)
    cfg = _solver_cfg(config)
    field, barrier = _initial_1d(config, params)
    mass0 = field.mass()
    if barrier is None:
        trajectory = solver1d.run_smooth(field, None, cfg, params)
        jump_max = ""
    else:
        trajectory = solver1d.run_barrier(field, barrier, cfg, params)
        jump_max = max(
            float(np.max(np.abs(solver1d.jump_residual(f, barrier, params))))
            for _, f in trajectory)
    path = config.get("output", "path", str)
    write_csv(path, config, _COLUMNS_1D, _field_rows(trajectory))
    t_end, final = trajectory[-1]
    dt_max = solver1d.time_step(field, cfg, params)
    nsteps = max(1, math.ceil(cfg.t_end / dt_max - 1e-9))
    derived = {
        "dt": cfg.t_end / nsteps,
        "steps": nsteps,
        "snapshots": len(trajectory),
        "t_end": t_end,
        "mass_initial": mass0,
        "mass_drift_rel": abs(final.mass() - mass0) / abs(mass0),
        "steady_drift_per_time": float(np.max(np.abs(final.U - trajectory[0][1].U))) / t_end,
    }
    if barrier is not None:
        derived["jump_residual_max"] = jump_max
    write_manifest(path + ".manifest", config, derived)
    print(f"wrote {path} ({len(trajectory)} snapshots)")
    return derived


def scenario_run2d(config: Config, phys_required=True) -> dict:
    params = _phys(config, phys_required)
    name = config.get("scenario", "name", str, "uniform2d")
    if name != "uniform2d":
        raise ConfigError(f"name: unknown 2d scenario {name!r}")
    nx = config.get("grid", "nx", int, 16)
    ny = config.get("grid", "ny", int, 16)
    extent = (config.get("grid", "x_min", float, 0.0),
              config.get("grid", "x_max", float, 1.0),
              config.get("grid", "y_min", float, 0.0),
              config.get("grid", "y_max", float, 1.0))
    n = np.array([config.get("scenario", f"n{s}", float, 1.0 if s == 0 else 0.0)
                  for s in range(4)])
    J = np.array([[config.get("scenario", f"j{s}x", float, 0.0),
                   config.get("scenario", f"j{s}y", float, 0.0)]
                  for s in range(4)])
    state = solver2d.UniformState(n=n, J=J)
    state.require_positive_density()
    cfg = solver2d.SolverConfig2D(
        cfl=config.get("solver", "cfl", float, 0.9),
        t_end=config.get("solver", "t_end", float),
        output_stride=config.get("solver", "output_stride", int, 1),
    )
    field = solver2d.Field2D.uniform(state, *extent, nx=nx, ny=ny)
    mass0, mom0 = solver2d.conserved_totals(field)
    trajectory = solver2d.run_2d(field, None, cfg, params, warn_mixedness=True)
    path = config.get("output", "path", str)
    columns = ["t", "x", "y"] + [f"n{s}" for s in range(4)] + \
        [f"J{s}x" for s in range(4)] + [f"J{s}y" for s in range(4)]

    def rows():
        for t, f in trajectory:
            xs, ys = f.x, f.y
            for i in range(nx):
                for j in range(ny):
                    yield (t, xs[i], ys[j], *f.U[:, i, j])

    write_csv(path, config, columns, rows())
    mass1, mom1 = solver2d.conserved_totals(trajectory[-1][1])
    margin = float(np.min(solver2d.mixedness_margin(trajectory[-1][1], params)))
    dt_max = solver2d.time_step_2d(field, cfg, params)
    nsteps = max(1, math.ceil(cfg.t_end / dt_max - 1e-9))
    derived = {
        "dt": cfg.t_end / nsteps,
        "steps": nsteps,
        "t_end": trajectory[-1][0],
        "mass_drift_rel": abs(mass1 - mass0) / abs(mass0),
        "momentum_drift_abs": float(np.max(np.abs(mom1 - mom0))),
        "mixedness_margin_min": margin,
    }
    write_manifest(path + ".manifest", config, derived)
    print(f"wrote {path} ({len(trajectory)} snapshots)")
    return derived


def scenario_equilibrium_check(config: Config, phys_required=True) -> dict:
    params = _phys(config, phys_required)
    seed = config.get("scenario", "seed", int, 20240815)
    count = config.get("scenario", "count", int, 10)
    order = config.get("scenario", "order", int, 20)
    rng = np.random.default_rng(seed)
    rows = []
    max_rel = 0.0
    for trial in range(count):
        n0 = rng.uniform(0.5, 2.0)
        nv = rng.uniform(-0.4, 0.4, size=3) * n0
        u0 = rng.uniform(-0.7, 0.7, size=2)
        J = rng.uniform(-0.5, 0.5, size=(4, 2))
        J[0] = n0 * u0
        state = equilibrium.MomentState(n=np.concatenate([[n0], nv]), J=J)
        quad = equilibrium.QuadratureSpec.for_state(state, params, order=order)
        n_rec, J_rec, _ = equilibrium.quadrature_moments(
            lambda p: equilibrium.strongly_mixed_equilibrium(state, params, p), quad)
        scale = max(np.max(np.abs(state.n)), np.max(np.abs(state.J)), 1e-30)
        rel = max(np.max(np.abs(n_rec - state.n)), np.max(np.abs(J_rec - state.J))) / scale
        max_rel = max(max_rel, rel)
        for s in range(4):
            rows.append((trial, s, state.n[s], n_rec[s],
                         state.J[s, 0], J_rec[s, 0], state.J[s, 1], J_rec[s, 1], rel))
    path = config.get("output", "path", str)
    write_csv(path, config,
              ["trial", "s", "n_in", "n_rec", "Jx_in", "Jx_rec", "Jy_in", "Jy_rec",
               "rel_err"], rows)
    derived = {"max_rel_error": max_rel, "trials": count, "quadrature_order": order}
    write_manifest(path + ".manifest", config, derived)
    print(f"max relative moment-recovery error: {max_rel:.3e}")
    return derived


def scenario_purestate_check(config: Config, phys_required=True) -> dict:
    params = _phys(config, phys_required)
    preset = config.get("scenario", "preset", str, "gaussian-packet")
    cells = config.get("scenario", "cells", int, 256)
    half_width = config.get("scenario", "half_width", float, 8.0)
    rows = []
    residuals = []
    polar_max = 0.0
    for level in range(3):
        m = cells * 2 ** level
        r = np.linspace(-half_width, half_width, m)
        field = purestate.spinor_preset(preset, r)
        n, J = purestate.moments_from_spinor(field, params)
        res = purestate.pure_state_identity_residual(n, J, r[1] - r[0])
        max_res = float(np.max(np.abs(res)))
        residuals.append(max_res)
        polar_max = max(polar_max, float(np.max(np.abs(
            np.sqrt(n[1] ** 2 + n[2] ** 2 + n[3] ** 2) - n[0]))))
        rows.append((m, max_res))
    orders = [math.log2(residuals[i] / residuals[i + 1]) if residuals[i + 1] > 0
              else float("inf") for i in range(2)]
    path = config.get("output", "path", str)
    write_csv(path, config, ["cells", "max_residual"], rows)
    derived = {
        "preset": preset,
        "residuals": " ".join(_fmt(x) for x in residuals),
        "order_1": orders[0],
        "order_2": orders[1],
        "polarization_defect_max": polar_max,
    }
    write_manifest(path + ".manifest", config, derived)
    print(f"max identity residual: {residuals[-1]:.3e}")
    print(f"convergence orders: {orders[0]:.3f}, {orders[1]:.3f}")
    return derived


def scenario_entropy_eval(config: Config, phys_required=True) -> dict:
    params = _phys(config, phys_required)
    preset = config.get("scenario", "preset", str, "maxwellian")
    order = config.get("scenario", "order", int, 20)
    if preset == "maxwellian":
        density = config.get("scenario", "density", float, 1.0)
    else:
        raise ConfigError(f"preset: unknown entropy preset {preset!r}")
    state = equilibrium.MomentState(
        n=np.array([density, 0.0, 0.0, 0.0]), J=np.zeros((4, 2)))
    quad = equilibrium.QuadratureSpec.for_state(state, params, order=order)
    value = equilibrium.semiclassical_entropy(
        lambda r, p: equilibrium.strongly_mixed_equilibrium(state, params, p),
        params, quad, [((0.0, 0.0), 1.0)])
    path = config.get("output", "path", str, None)
    derived = {"preset": preset, "density": density, "entropy": value}
    if path is not None:
        write_csv(path, config, ["preset", "density", "entropy"],
                  [(preset, density, value)])
        write_manifest(path + ".manifest", config, derived)
    print(f"entropy = {value:.12f}")
    return derived


_SCENARIOS = {
    "klein": scenario_klein,
    "wave1d": scenario_run1d,
    "spin_rotation": scenario_run1d,
    "barrier": scenario_run1d,
    "uniform2d": scenario_run2d,
    "equilibrium_check": scenario_equilibrium_check,
    "purestate_check": scenario_purestate_check,
    "entropy_eval": scenario_entropy_eval,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_phys_flags(p):
    p.add_argument("--hbar", type=float, default=None, help="reduced Planck constant (action; default 1)")
    p.add_argument("--v-f", type=float, default=None, help="Fermi speed (length/time; default 1)")
    p.add_argument("--mass", type=float, default=None, help="effective mass (default 1)")
    p.add_argument("--theta", type=float, default=None, help="temperature (energy; default 1)")


def _base_config(args) -> Config:
    if getattr(args, "config", None):
        config = Config.from_file(args.config)
    else:
        config = Config({})
    for key, attr in (("hbar", "hbar"), ("v_f", "v_f"), ("m", "mass"), ("theta", "theta")):
        config.set("phys", key, getattr(args, attr, None))
    # subcommand invocations fall back to nondimensional defaults
    for key in ("hbar", "v_f", "m", "theta"):
        if key not in config.sections.get("phys", {}):
            config.set("phys", key, 1.0)
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphydro",
        description="Entropy-closed 12-moment hydrodynamics for graphene "
                    "Dirac-point transport")
    parser.add_argument("--backend", choices=_backend.available(), default=None,
                        help="kernel backend override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario described by a config file")
    p.add_argument("config", help="INI config with [phys],[grid],[solver],[scenario],[output]")

    p = sub.add_parser("run1d", help="1D solver scenarios")
    p.add_argument("--config", default=None, help="INI config file; flags override its values")
    p.add_argument("--scenario", choices=["wave1d", "spin_rotation", "barrier"],
                   default=None)
    _add_phys_flags(p)
    p.add_argument("--cells", type=int, default=None, help="grid cells (dimensionless count)")
    p.add_argument("--r-min", type=float, default=None, help="domain left edge (length)")
    p.add_argument("--r-max", type=float, default=None, help="domain right edge (length)")
    p.add_argument("--t-end", type=float, default=None, help="final time (time units)")
    p.add_argument("--cfl", type=float, default=None, help="CFL number in (0, 1] (dimensionless)")
    p.add_argument("--rotation-integrator", choices=["exact_frozen", "rk4"], default=None, help="spin-block integrator")
    p.add_argument("--output-stride", type=int, default=None, help="record every N steps")
    p.add_argument("--amplitude", type=float, default=None, help="wave/spin amplitude (density units)")
    p.add_argument("--energy", type=float, default=None, help="electron energy (energy units)")
    p.add_argument("--v0", type=float, default=None, help="barrier height (energy units)")
    p.add_argument("--a", dest="barrier_a", type=float, default=None, help="barrier left edge (length)")
    p.add_argument("--b", dest="barrier_b", type=float, default=None, help="barrier right edge (length)")
    p.add_argument("--output", default=None, help="CSV output path; manifest written alongside")

    p = sub.add_parser("run2d", help="2D solver scenarios (uniform state)")
    p.add_argument("--config", default=None, help="INI config file; flags override its values")
    _add_phys_flags(p)
    p.add_argument("--nx", type=int, default=None, help="grid cells in x (count)")
    p.add_argument("--ny", type=int, default=None, help="grid cells in y (count)")
    p.add_argument("--t-end", type=float, default=None, help="final time (time units)")
    p.add_argument("--cfl", type=float, default=None, help="CFL number in (0, 1] (dimensionless)")
    p.add_argument("--output-stride", type=int, default=None, help="record every N steps")
    for s in range(4):
        p.add_argument(f"--n{s}", type=float, default=None, help=f"density n{s}")
        p.add_argument(f"--j{s}x", type=float, default=None, help=f"current J{s}^x")
        p.add_argument(f"--j{s}y", type=float, default=None, help=f"current J{s}^y")
    p.add_argument("--output", default=None, help="CSV output path; manifest written alongside")

    p = sub.add_parser("klein", help="Klein barrier state: T and moment profile")
    p.add_argument("--config", default=None, help="INI config file; flags override its values")
    _add_phys_flags(p)
    p.add_argument("--energy", type=float, default=None, help="electron energy (energy units), != 0 and != v0")
    p.add_argument("--v0", type=float, default=None, help="barrier height (energy units)")
    p.add_argument("--a", dest="barrier_a", type=float, default=None, help="barrier left edge (length)")
    p.add_argument("--b", dest="barrier_b", type=float, default=None, help="barrier right edge (length)")
    p.add_argument("--cells", type=int, default=None, help="profile sample count")
    p.add_argument("--r-min", type=float, default=None, help="domain left edge (length)")
    p.add_argument("--r-max", type=float, default=None, help="domain right edge (length)")
    p.add_argument("--output", default=None, help="CSV output path; manifest written alongside")

    p = sub.add_parser("equilibrium-check",
                       help="moment recovery of the strongly-mixed equilibrium")
    p.add_argument("--config", default=None, help="INI config file; flags override its values")
    _add_phys_flags(p)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (deterministic rerun)")
    p.add_argument("--count", type=int, default=None, help="number of random states")
    p.add_argument("--order", type=int, default=None, help="Gauss-Hermite order per axis")
    p.add_argument("--output", default=None, help="CSV output path; manifest written alongside")

    p = sub.add_parser("purestate-check",
                       help="pure-state identity residual convergence study")
    p.add_argument("--config", default=None, help="INI config file; flags override its values")
    _add_phys_flags(p)
    p.add_argument("--preset", default=None, help="pure-state preset",
                   choices=["plane-wave", "gaussian-packet", "polarized-packet"])
    p.add_argument("--cells", type=int, default=None, help="coarsest grid size")
    p.add_argument("--half-width", type=float, default=None, help="grid half extent (length)")
    p.add_argument("--output", default=None, help="CSV output path; manifest written alongside")

    p = sub.add_parser("entropy-eval", help="entropy functional of a preset state")
    p.add_argument("--config", default=None, help="INI config file; flags override its values")
    _add_phys_flags(p)
    p.add_argument("--preset", default=None, choices=["maxwellian"], help="state preset")
    p.add_argument("--density", type=float, default=None, help="scalar density n0")
    p.add_argument("--order", type=int, default=None, help="Gauss-Hermite order per axis (even, <= 128)")
    p.add_argument("--output", default=None, help="CSV output path; manifest written alongside")

    return parser


_FLAG_MAP = {
    "run1d": {
        "grid": [("cells", "cells"), ("r_min", "r_min"), ("r_max", "r_max")],
        "solver": [("cfl", "cfl"), ("t_end", "t_end"),
                   ("rotation_integrator", "rotation_integrator"),
                   ("output_stride", "output_stride")],
        "scenario": [("name", "scenario"), ("amplitude", "amplitude"),
                     ("energy", "energy"), ("v0", "v0"),
                     ("barrier_a", "barrier_a"), ("barrier_b", "barrier_b")],
        "output": [("path", "output")],
    },
    "run2d": {
        "grid": [("nx", "nx"), ("ny", "ny")],
        "solver": [("cfl", "cfl"), ("t_end", "t_end"),
                   ("output_stride", "output_stride")],
        "scenario": [(f"n{s}", f"n{s}") for s in range(4)]
        + [(f"j{s}x", f"j{s}x") for s in range(4)]
        + [(f"j{s}y", f"j{s}y") for s in range(4)],
        "output": [("path", "output")],
    },
    "klein": {
        "grid": [("cells", "cells"), ("r_min", "r_min"), ("r_max", "r_max")],
        "scenario": [("energy", "energy"), ("v0", "v0"),
                     ("barrier_a", "barrier_a"), ("barrier_b", "barrier_b")],
        "output": [("path", "output")],
    },
    "equilibrium-check": {
        "scenario": [("seed", "seed"), ("count", "count"), ("order", "order")],
        "output": [("path", "output")],
    },
    "purestate-check": {
        "scenario": [("preset", "preset"), ("cells", "cells"),
                     ("half_width", "half_width")],
        "output": [("path", "output")],
    },
    "entropy-eval": {
        "scenario": [("preset", "preset"), ("density", "density"), ("order", "order")],
        "output": [("path", "output")],
    },
}

_COMMAND_SCENARIO = {
    "klein": "klein",
    "run2d": "uniform2d",
    "equilibrium-check": "equilibrium_check",
    "purestate-check": "purestate_check",
    "entropy-eval": "entropy_eval",
}


def _run_scenario(name, config, phys_required):
    # parameter problems surfacing as module preconditions are config
    # failures; model-domain violations keep their own exit code
    try:
        _SCENARIOS[name](config, phys_required=phys_required)
    except (ModelDomainError, ConfigError):
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _dispatch(args) -> int:
    if args.command == "run":
        config = Config.from_file(args.config)
        name = config.get("scenario", "name", str)
        if name not in _SCENARIOS:
            raise ConfigError(f"name: unknown scenario {name!r}")
        _run_scenario(name, config, phys_required=True)
        return 0
    config = _base_config(args)
    for section, pairs in _FLAG_MAP[args.command].items():
        for key, attr in pairs:
            config.set(section, key, getattr(args, attr, None))
    if args.command in _COMMAND_SCENARIO:
        config.set("scenario", "name", _COMMAND_SCENARIO[args.command])
    name = config.get("scenario", "name", str)
    if name not in _SCENARIOS:
        raise ConfigError(f"name: unknown scenario {name!r}")
    if args.command in ("klein", "equilibrium-check", "purestate-check", "entropy-eval") \
            and "path" not in config.sections.get("output", {}):
        config.set("output", "path", f"{name}.csv")
    _run_scenario(name, config, phys_required=False)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.backend:
        _backend.use(args.backend)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ModelDomainError as exc:
        print(f"model domain violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
