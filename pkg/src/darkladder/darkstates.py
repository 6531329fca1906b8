"""Closed-form dark-state ladder of the resonant atom-cavity system.

For ``n >= 1`` the zero-energy eigenstates of ``H0`` (all detunings zero) are

    |Psi_n> = Q_n |1, n> - R_n |2, n-1>,
    Q_n = W23 / sqrt(g^2 n + W23^2),   R_n = g sqrt(n) / sqrt(g^2 n + W23^2),

and ``|Psi_0> = |1, 0>`` (``Q_0 = 1``, ``R_0 = 0``).  The ground-state drive
``V`` moves the system up and down this ladder with amplitude
``-W12 Q_n R_{n+1}``; cavity loss moves it down at ``Gamma_n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertSpec, basis_ket, spec_of
from .model import SystemParams


def qn_rn(n: int, g: float, omega23: float) -> tuple[float, float]:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    gn = g * np.sqrt(n)
    s = np.hypot(gn, omega23)  # no underflow for tiny couplings
    if s == 0:
        raise ValueError("Q_n, R_n undefined when g = omega23 = 0")
    return omega23 / s, gn / s


def _coefficients(n: int, g: float, omega23: float) -> tuple[float, float]:
    return (1.0, 0.0) if n == 0 else qn_rn(n, g, omega23)


@dataclass(frozen=True)
class DarkStateVector:
    n: int
    q_n: float
    r_n: float
    vector: np.ndarray


def dark_state(n: int, p: SystemParams, spec: HilbertSpec | None = None) -> DarkStateVector:
    spec = spec or p.spec
    if not 0 <= n <= spec.n_max:
        raise ValueError(f"dark-state index {n} outside 0..{spec.n_max}")
    q, r = _coefficients(n, p.g, p.omega23)
    if n == 0:
        vec = basis_ket(1, 0, spec)
    else:
        vec = q * basis_ket(1, n, spec) - r * basis_ket(2, n - 1, spec)
    return DarkStateVector(n, q, r, vec)


def dark_basis(p: SystemParams, spec: HilbertSpec | None = None) -> np.ndarray:
    """Columns are ``|Psi_0> .. |Psi_{n_max}>``."""
    spec = spec or p.spec
    return np.column_stack([dark_state(n, p, spec).vector for n in range(spec.n_max + 1)])


def ladder_coupling(n: int, p: SystemParams) -> float:
    """``<Psi_{n+1}| H_eff |Psi_n> = -W12 Q_n R_{n+1}``."""
    q, _ = _coefficients(n, p.g, p.omega23)
    _, r_next = qn_rn(n + 1, p.g, p.omega23)
    return -p.omega12 * q * r_next


def ladder_coupling_limit(n: int, p: SystemParams) -> float:
    """Large-``g`` limit of :func:`ladder_coupling`: ``-W12`` for n = 0, else ``-W12 W23 / (g sqrt n)``."""
    if n == 0:
        return -p.omega12
    return -p.omega12 * p.omega23 / (p.g * np.sqrt(n))


def eff_hamiltonian_weak(p: SystemParams, spec: HilbertSpec | None = None) -> np.ndarray:
    """Weak-drive effective Hamiltonian on the dark ladder, truncated at ``n_max``."""
    spec = spec or p.spec
    basis = dark_basis(p, spec)
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    for n in range(spec.n_max):
        h += ladder_coupling(n, p) * np.outer(basis[:, n + 1], basis[:, n].conj())
    return h + h.conj().T


def dark_decay_rate(n: int, p: SystemParams) -> float:
    """``Gamma_n = n kappa (W23^2 + g^2 (n-1)) / (W23^2 + g^2 n)``.

    ``kappa`` here is the field decay rate (``p.field_kappa``), so the
    population of ``|Psi_n>`` leaks to ``|Psi_{n-1}>`` at ``2 Gamma_n``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    w2, g2 = p.omega23**2, p.g**2
    denom = w2 + g2 * n
    if denom == 0:
        return 0.0
    return n * p.field_kappa * (w2 + g2 * (n - 1)) / denom


def bright_energies(n: int, p: SystemParams) -> tuple[float, float]:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    e = np.sqrt(n * p.g**2 + p.omega23**2)
    return float(e), float(-e)


def dark_populations(rho: np.ndarray, p: SystemParams, n_upto: int) -> np.ndarray:
    """Raw ``<Psi_n| rho |Psi_n>`` for ``n = 0..n_upto`` (not renormalized to the dark subspace)."""
    spec = spec_of(rho)
    if n_upto > spec.n_max:
        raise ValueError(f"n_upto={n_upto} exceeds n_max={spec.n_max}")
    basis = np.column_stack([dark_state(n, p, spec).vector for n in range(n_upto + 1)])
    return np.real(np.einsum("in,ij,jn->n", basis.conj(), rho, basis))


def bright_population(rho: np.ndarray, p: SystemParams) -> float:
    """Population outside the span of the truncated dark ladder."""
    spec = spec_of(rho)
    return float(1.0 - dark_populations(rho, p, spec.n_max).sum())


def two_level_populations(p: SystemParams) -> tuple[float, float]:
    """Steady ``(P_0, P_1)`` of the two lowest dark states treated as a driven, damped two-level system.

    Coupling ``-W12`` (large-``g`` value of the first ladder link) and decay
    ``Gamma_1`` in the same dissipator normalization as the full model give
    ``P_1 = W12^2 / (Gamma_1^2 + 2 W12^2)``.
    """
    om2 = p.omega12**2
    gam = dark_decay_rate(1, p)
    denom = gam * gam + 2 * om2
    if denom == 0:
        raise ValueError("two-level model undefined without drive and decay")
    p1 = om2 / denom
    return 1.0 - p1, p1
