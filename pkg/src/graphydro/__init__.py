"""Entropy-closed 12-moment quantum hydrodynamics near a graphene Dirac point.

Subpackages by concern:

- `pauli`       Pauli-basis algebra and the antisymmetric tensor
- `equilibrium` entropy functional, equilibrium Wigner states, quadrature
                moments, closure tensor, strongly-mixed diagnostic
- `purestate`   spinor wavefunctions, pure-state identity, Klein barrier
- `solver1d`    1D solver with barrier jump conditions
- `solver2d`    2D solver with the homogeneous ODE cross-check
- `cli`         scenario runner and CSV emitter

Hot kernels run on a compiled Cython core when built, with a NumPy fallback
selected at import (`graphydro._backend`).
"""

from . import _backend
from .equilibrium import (
    MomentState,
    Multipliers,
    QuadratureSpec,
    closure_tensor,
    equilibrium_from_multipliers,
    mixedness_check,
    polarization_entropy,
    quadrature_moments,
    semiclassical_entropy,
    strongly_mixed_equilibrium,
)
from .errors import ConfigError, ModelDomainError
from .params import PhysParams
from .pauli import PauliComponents, levi_civita, pauli_compose, pauli_decompose
from .purestate import (
    KleinState,
    SpinorField1D,
    klein_moments,
    klein_state,
    moments_from_spinor,
    pure_state_identity_residual,
    transmission,
)
from .solver1d import Barrier, Field1D, SolverConfig1D
from .solver2d import Field2D, SolverConfig2D, UniformState

__version__ = "0.1.0"

kernel_backend = _backend.name
