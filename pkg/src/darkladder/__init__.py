"""Driven three-level atom in a lossy cavity: dark-state ladder, steady states and cat-state dynamics."""

__version__ = "0.1.0"

from .hilbert import HilbertSpec, InvalidStateError  # noqa: E402
from .model import SystemParams, hamiltonian, liouvillian  # noqa: E402
from .solvers import auto_truncate, evolve, evolve_unitary, solve_auto, steady_state  # noqa: E402
from .observables import concurrence_2x2, evaluate, fidelity, g2_zero  # noqa: E402

__all__ = [
    "HilbertSpec",
    "InvalidStateError",
    "SystemParams",
    "__version__",
    "auto_truncate",
    "concurrence_2x2",
    "evaluate",
    "evolve",
    "evolve_unitary",
    "fidelity",
    "g2_zero",
    "hamiltonian",
    "liouvillian",
    "solve_auto",
    "steady_state",
]
