"""Equilibrium Wigner states, entropy functional, quadrature moments, closure.

The local equilibrium minimizes the semiclassical free-energy functional
under the constraint of given densities n_s and currents J_s^k.  Two forms
are provided: the full Lagrange-multiplier solution (cosh/sinh in the
multiplier magnitude) and the strongly-mixed linearization, which is the
one that closes the moment equations.  Momentum integrals are evaluated on
tensor Gauss-Hermite grids matched to the Maxwellian factor, which makes
every moment of the strongly-mixed family exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelDomainError
from .params import PhysParams

LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# state containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentState:
    """Pointwise hydrodynamic unknowns: densities n_s and currents J_s^k.

    n has shape (4,), J has shape (4, 2).  The scalar density n[0] must be
    positive wherever an equilibrium is constructed from the state.
    """

    n: np.ndarray
    J: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", np.asarray(self.n, dtype=float))
        object.__setattr__(self, "J", np.asarray(self.J, dtype=float))
        if self.n.shape != (4,) or self.J.shape != (4, 2):
            raise ValueError(
                f"expected n (4,) and J (4,2), got {self.n.shape}, {self.J.shape}"
            )

    def require_positive_density(self):
        if not (self.n[0] > 0.0):
            raise ModelDomainError(f"scalar density must be positive, got {self.n[0]}")

    @property
    def u0(self) -> np.ndarray:
        """Mean velocity J_0/n_0."""
        self.require_positive_density()
        return self.J[0] / self.n[0]


@dataclass(frozen=True)
class Multipliers:
    """Lagrange multipliers of the constrained entropy minimum (point values).

    q0_0 and q0_k enter the scalar exponent; qs_0 (3,) and qs_k (3, 2) build
    the three spin multiplier functions, linear in momentum.
    """

    q0_0: float = 0.0
    q0_k: np.ndarray = field(default_factory=lambda: np.zeros(2))
    qs_0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    qs_k: np.ndarray = field(default_factory=lambda: np.zeros((3, 2)))

    def __post_init__(self):
        object.__setattr__(self, "q0_k", np.asarray(self.q0_k, dtype=float))
        object.__setattr__(self, "qs_0", np.asarray(self.qs_0, dtype=float))
        object.__setattr__(self, "qs_k", np.asarray(self.qs_k, dtype=float))
        if self.q0_k.shape != (2,) or self.qs_0.shape != (3,) or self.qs_k.shape != (3, 2):
            raise ValueError("multiplier shapes must be (), (2,), (3,), (3,2)")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor Gauss-Hermite rule: `order` nodes per momentum axis,
    affinely mapped to center +/- sqrt(2)*scale*x."""

    order: int = 20
    center: np.ndarray = field(default_factory=lambda: np.zeros(2))
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.order < 4 or self.order > 128 or self.order % 2:
            raise ValueError(f"order must be even and in [4, 128], got {self.order}")
        if not (self.scale > 0.0):
            raise ValueError(f"scale must be positive, got {self.scale}")

    @classmethod
    def for_state(cls, state: MomentState, params: PhysParams, order: int = 20):
        """Rule matched to the state's Maxwellian: center u_0, scale sqrt(m*theta)."""
        return cls(order=order, center=state.u0, scale=math.sqrt(params.mtheta))

    def nodes(self):
        """Return momentum nodes p (2, M) and weights (M,) such that
        sum(w * f(p)) approximates the 2D integral of f."""
        x, w = np.polynomial.hermite.hermgauss(self.order)
        root2s = math.sqrt(2.0) * self.scale
        w1 = w * np.exp(x * x) * root2s
        p1 = self.center[0] + root2s * x
        p2 = self.center[1] + root2s * x
        P1, P2 = np.meshgrid(p1, p2, indexing="ij")
        W = np.outer(w1, w1)
        return np.stack([P1.ravel(), P2.ravel()]), W.ravel()


# ---------------------------------------------------------------------------
# entropy functional
# ---------------------------------------------------------------------------

def polarization_entropy(lam):
    """Entropy contribution c(lambda) of the spin polarization fraction.

    c(lambda) = (1/2) log(1 - lambda^2) + (lambda/2) log((1+lambda)/(1-lambda)),
    rewritten as ((1+l)/2) log(1+l) + ((1-l)/2) log(1-l) close to lambda = 1
    to avoid cancellation.  Defined for 0 <= lambda < 1, with c(0) = 0 and
    c -> log 2 as lambda -> 1.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0.0) or np.any(lam >= 1.0):
        bad = lam[(lam < 0.0) | (lam >= 1.0)].ravel()[0]
        raise ModelDomainError(f"polarization fraction must lie in [0, 1), got {bad}")
    out = np.empty_like(lam)
    near1 = lam > 1.0 - 1e-8
    l0 = lam[~near1]
    out[~near1] = 0.5 * np.log1p(-l0 * l0) + 0.5 * l0 * np.log((1.0 + l0) / (1.0 - l0))
    l1 = lam[near1]
    out[near1] = 0.5 * (1.0 + l1) * np.log1p(l1) + 0.5 * (1.0 - l1) * np.log1p(-l1)
    return out if out.ndim else float(out)


def polarization_entropy_deriv(lam):
    """d/dlambda of `polarization_entropy`; equals atanh(lambda)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0.0) or np.any(lam >= 1.0):
        raise ModelDomainError("polarization fraction must lie in [0, 1)")
    out = np.arctanh(lam)
    return out if out.ndim else float(out)


def semiclassical_entropy(w, params: PhysParams, quad: QuadratureSpec,
                          spatial_weights) -> float:
    """Free-energy-like entropy of a spinorial phase-space distribution.

    Integrates  w0*(log w0 + c(|w_vec|/w0) + |p|^2/(2 m theta))
              + (v_F/theta) * p . w_vec
    over momentum (Gauss-Hermite per `quad`) and position (the explicit
    (r, weight) pairs in `spatial_weights`).

    `w(r, p)` must accept p of shape (2, M) and return components (4, M).
    Every sample must satisfy w0 > 0 and |w_vec| < w0; a violation is
    reported with the offending position and momentum node.
    """
    p, wq = quad.nodes()
    mtheta = params.mtheta
    total = 0.0
    for r, weight in spatial_weights:
        comps = np.asarray(w(r, p), dtype=float)
        w0 = comps[0]
        wv = comps[1:]
        norm = np.sqrt(np.sum(wv * wv, axis=0))
        bad = (w0 <= 0.0) | (norm >= w0)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ModelDomainError(
                "distribution violates positivity dominance "
                f"(w0 > |w_vec| > 0) at r={r}, p={p[:, i]}: "
                f"w0={w0[i]:.6g}, |w_vec|={norm[i]:.6g}"
            )
        integrand = w0 * (np.log(w0) + polarization_entropy(norm / w0)
                          + (p[0] ** 2 + p[1] ** 2) / (2.0 * mtheta))
        # p is cartesian (third slot zero), so p . w_vec has no w3 term
        integrand += (params.v_F / params.theta) * (p[0] * wv[0] + p[1] * wv[1])
        total += weight * float(np.sum(wq * integrand))
    return total


# ---------------------------------------------------------------------------
# equilibrium distributions
# ---------------------------------------------------------------------------

def _sinch(q):
    """sinh(q)/q with the removable singularity patched by its series."""
    q = np.asarray(q, dtype=float)
    small = np.abs(q) < 1e-4
    out = np.empty_like(q)
    qs = q[small]
    out[small] = 1.0 + qs * qs / 6.0 + qs ** 4 / 120.0
    qb = q[~small]
    out[~small] = np.sinh(qb) / qb
    return out


def equilibrium_from_multipliers(q: Multipliers, params: PhysParams, p):
    """Constrained entropy minimizer in Lagrange-multiplier form.

    w0 = cosh(Q) exp(-q0),  ws = qs * sinh(Q)/Q * exp(-q0),  with
    q0 = 1 + q0_0 + q0_k p^k + |p|^2/(2 m theta),  qs = qs_0 + qs_k p^k,
    Q = |q_vec|.  Accepts p of shape (2,) or (2, M); returns (4,) or (4, M).
    Positivity dominance w0 > |w_vec| holds for every input.
    """
    p = np.asarray(p, dtype=float)
    single = p.ndim == 1
    pp = p[:, None] if single else p
    q0 = (1.0 + q.q0_0 + q.q0_k[0] * pp[0] + q.q0_k[1] * pp[1]
          + (pp[0] ** 2 + pp[1] ** 2) / (2.0 * params.mtheta))
    qs = q.qs_0[:, None] + q.qs_k @ pp
    Q = np.sqrt(np.sum(qs * qs, axis=0))
    boltz = np.exp(-q0)
    out = np.empty((4, pp.shape[1]))
    out[0] = np.cosh(Q) * boltz
    out[1:] = qs * _sinch(Q) * boltz
    return out[:, 0] if single else out


def strongly_mixed_equilibrium(state: MomentState, params: PhysParams, p):
    """Local equilibrium in the strongly-mixed regime.

    With u0 = J_0/n_0 and G(p) the unit Maxwellian centered at u0,

        w_s = [ n_s + (J_s - n_s u0) . (p - u0) / (m theta) ] G(p).

    This is the n_s-weighted form of the textbook expression
    n_s [1 + (u_s - u0).(p - u0)/(m theta)] G(p); it stays defined when a
    spin density n_s vanishes (where u_s would be 0/0).  Accepts p of shape
    (2,) or (2, M).
    """
    state.require_positive_density()
    p = np.asarray(p, dtype=float)
    single = p.ndim == 1
    pp = p[:, None] if single else p
    mtheta = params.mtheta
    u0 = state.u0
    dp = pp - u0[:, None]
    g = np.exp(-(dp[0] ** 2 + dp[1] ** 2) / (2.0 * mtheta)) / (2.0 * math.pi * mtheta)
    centered_J = state.J - np.outer(state.n, u0)
    out = (state.n[:, None] + (centered_J @ dp) / mtheta) * g
    return out[:, 0] if single else out


# ---------------------------------------------------------------------------
# moments, closure, diagnostics
# ---------------------------------------------------------------------------

def quadrature_moments(w, quad: QuadratureSpec):
    """Zeroth, first and second momentum moments of w on the quadrature grid.

    `w(p)` takes p of shape (2, M) and returns (4, M).  Returns
    (n (4,), J (4, 2), Q2 (4, 2, 2)); accuracy is the caller's business via
    the quadrature order.
    """
    p, wq = quad.nodes()
    vals = np.asarray(w(p), dtype=float)
    n = vals @ wq
    J = np.stack([vals @ (wq * p[0]), vals @ (wq * p[1])], axis=1)
    Q2 = np.empty((4, 2, 2))
    for i in range(2):
        for k in range(i, 2):
            Q2[:, i, k] = vals @ (wq * p[i] * p[k])
            Q2[:, k, i] = Q2[:, i, k]
    return n, J, Q2


def closure_tensor(state: MomentState, params: PhysParams) -> np.ndarray:
    """Second moments of the strongly-mixed equilibrium, in closed form.

    L_s^{ik} = n_s (m theta d_{ik} - J_0^i J_0^k / n_0^2)
             + (J_0^i J_s^k + J_s^i J_0^k) / n_0,   s = 1, 2, 3.

    Returns shape (3, 2, 2), symmetric in the two cartesian indices.
    """
    state.require_positive_density()
    n, J = state.n, state.J
    mtheta = params.mtheta
    u0 = J[0] / n[0]
    L = np.empty((3, 2, 2))
    for s in (1, 2, 3):
        L[s - 1, 0, 0] = n[s] * (mtheta - u0[0] * u0[0]) + 2.0 * u0[0] * J[s, 0]
        L[s - 1, 1, 1] = n[s] * (mtheta - u0[1] * u0[1]) + 2.0 * u0[1] * J[s, 1]
        # single off-diagonal entry, assigned to both slots: exact symmetry
        L[s - 1, 0, 1] = L[s - 1, 1, 0] = (
            -n[s] * u0[0] * u0[1] + u0[0] * J[s, 1] + u0[1] * J[s, 0])
    return L


@dataclass(frozen=True)
class MixednessReport:
    """Outcome of the strongly-mixed-state diagnostic."""

    ratio: float    # |n_vec|^2 / n_0^2
    bound: float    # 1 / (1 + 2K / (3 theta))
    margin: float   # bound - ratio

    @property
    def in_regime(self) -> bool:
        """True when the state sits strictly inside the strongly-mixed bound."""
        return self.margin > 0.0


def mixedness_check(state: MomentState, params: PhysParams) -> MixednessReport:
    """Evaluate the strongly-mixed-state condition |n_vec|^2/n_0^2 << bound.

    K sums |u_j - u_0|^2 / (2m) over spin components; a component with
    n_j = 0 and J_j = 0 contributes zero (continuous limit), while n_j = 0
    with J_j != 0 leaves the velocity u_j undefined and is rejected.  The
    necessary condition ratio < 1 fails for pure states, which sit exactly
    at ratio = 1.
    """
    state.require_positive_density()
    n, J = state.n, state.J
    u0 = state.u0
    K = 0.0
    for j in (1, 2, 3):
        if n[j] != 0.0:
            du = J[j] / n[j] - u0
            K += float(du @ du) / (2.0 * params.m)
        elif np.any(J[j] != 0.0):
            raise ModelDomainError(
                f"spin component {j} has zero density but nonzero current; "
                "velocity undefined"
            )
    ratio = float(n[1] ** 2 + n[2] ** 2 + n[3] ** 2) / n[0] ** 2
    bound = 1.0 / (1.0 + 2.0 * K / (3.0 * params.theta))
    return MixednessReport(ratio=ratio, bound=bound, margin=bound - ratio)
