"""Physical constants of the transport model."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysParams:
    """Model constants: hbar, Fermi speed, effective mass, temperature.

    The temperature is a fixed constant of the isothermal closure; it is
    never evolved.  All four values must be strictly positive.  The usual
    nondimensional choice is all ones.
    """

    hbar: float = 1.0
    v_F: float = 1.0
    m: float = 1.0
    theta: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "v_F", "m", "theta"):
            v = getattr(self, name)
            if not (v > 0.0):
                raise ValueError(f"{name} must be strictly positive, got {v}")

    @property
    def mtheta(self) -> float:
        """Thermal momentum variance m*theta (Maxwellian width squared)."""
        return self.m * self.theta

    @property
    def omega(self) -> float:
        """Spin-rotation rate prefactor 2*v_F/hbar of the moment equations."""
        return 2.0 * self.v_F / self.hbar
