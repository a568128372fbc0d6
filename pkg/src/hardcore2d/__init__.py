"""Two hard-core bosons in a two-dimensional isotropic harmonic trap.

The relative motion is solved exactly through Kummer's function ``U``: a level
with angular momentum ``l`` has energy ``l + 1 + 2 m`` where
``U(-m, l + 1, r0**2 / 2) = 0``. Lengths are in oscillator units.
"""

__version__ = "0.1.0"

from .eigensolver import EigenState, QuantumLabel, solve_m_values, solve_state
from .errors import (
    ConvergenceError,
    DomainError,
    HardcoreError,
    PoleError,
    QuadratureError,
    RootNotFoundError,
    StepTooLargeError,
)
from .observables import energy_split, fisher_density, fisher_parameter
from .oracle import OracleConfig, fd_eigenvalues
from .specfun import kummer_m, kummer_u_array, kummer_u_intb, laguerre_u
from .spectrum import detect_crossings, ordered_level_qfi, scan
from .wavefunction import GridConfig, build_profile

__all__ = [
    "__version__",
    "QuantumLabel",
    "EigenState",
    "solve_m_values",
    "solve_state",
    "HardcoreError",
    "PoleError",
    "DomainError",
    "ConvergenceError",
    "RootNotFoundError",
    "QuadratureError",
    "StepTooLargeError",
    "energy_split",
    "fisher_density",
    "fisher_parameter",
    "OracleConfig",
    "fd_eigenvalues",
    "kummer_m",
    "kummer_u_array",
    "kummer_u_intb",
    "laguerre_u",
    "scan",
    "detect_crossings",
    "ordered_level_qfi",
    "GridConfig",
    "build_profile",
]
