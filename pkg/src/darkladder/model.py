"""Hamiltonian and Lindblad generator of the driven Lambda atom in a cavity.

The interaction-picture Hamiltonian is ``H = H0 + V`` with::

    H0 = (g a s31 + W23 s32 + h.c.) - (D - D12 - D23) a^dag a + D23 s33 - D12 s11
    V  = W12 s21 + h.c.

Fields couple with amplitude ``W`` (half of the full Rabi frequency), with no
factors of two inserted anywhere.

Dissipation comes in two normalizations, selected by
``SystemParams.decay_convention``:

``"field"`` (default)
    ``kappa (2 a rho a^dag - a^dag a rho - rho a^dag a)`` plus the analogous
    atomic terms.  ``kappa`` is the field decay rate; the photon number decays
    at ``2 kappa``.
``"energy"``
    ``kappa (a rho a^dag - 1/2 {a^dag a, rho})``, i.e. collapse operators
    ``sqrt(kappa) a``.  ``kappa`` is the photon-number decay rate.  This is
    the same physics as ``"field"`` with every rate halved.

Superoperators act on column-stacked density matrices:
``vec(A rho B) = (B^T (x) A) vec(rho)``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .hilbert import HilbertSpec, annihilation, atomic_sigma, number_operator

CONVENTIONS = ("field", "energy")


@dataclass(frozen=True)
class SystemParams:
    """All physical inputs of one simulation run (rates in units of kappa).

    ``delta=None`` means ``delta12 + delta23``, which removes the
    ``a^dag a`` term from ``H0``.
    """

    g: float = 10.0
    omega12: float = 0.1
    omega23: float = 3.0
    delta12: float = 0.0
    delta23: float = 0.0
    delta: float | None = None
    kappa: float = 1.0
    gamma31: float = 0.5
    gamma32: float = 0.5
    n_max: int = 10
    decay_convention: str = "field"

    def __post_init__(self):
        for name in ("g", "omega12", "omega23", "kappa", "gamma31", "gamma32"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")
        if self.decay_convention not in CONVENTIONS:
            raise ValueError(f"decay_convention must be one of {CONVENTIONS}")

    @property
    def spec(self) -> HilbertSpec:
        return HilbertSpec(int(self.n_max))

    @property
    def cavity_detuning(self) -> float:
        """Resolved ``delta`` (cavity-transition detuning)."""
        return self.delta12 + self.delta23 if self.delta is None else self.delta

    @property
    def rate_scale(self) -> float:
        return 1.0 if self.decay_convention == "field" else 0.5

    @property
    def field_kappa(self) -> float:
        """Cavity decay rate expressed in the ``"field"`` convention."""
        return self.rate_scale * self.kappa

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)


def hamiltonian_h0(p: SystemParams) -> np.ndarray:
    spec = p.spec
    a = annihilation(spec)
    coupling = p.g * a @ atomic_sigma(3, 1, spec) + p.omega23 * atomic_sigma(3, 2, spec)
    h = coupling + coupling.conj().T
    h -= (p.cavity_detuning - p.delta12 - p.delta23) * number_operator(spec)
    h += p.delta23 * atomic_sigma(3, 3, spec) - p.delta12 * atomic_sigma(1, 1, spec)
    return h


def hamiltonian_v(p: SystemParams) -> np.ndarray:
    s21 = atomic_sigma(2, 1, p.spec)
    return p.omega12 * (s21 + s21.conj().T)


def hamiltonian(p: SystemParams) -> np.ndarray:
    return hamiltonian_h0(p) + hamiltonian_v(p)


def collapse_operators(p: SystemParams) -> list[tuple[float, np.ndarray]]:
    """``(rate, c)`` pairs entering as ``rate * (2 c rho c^dag - {c^dag c, rho})``.

    Rates are already converted to the ``"field"`` normalization.
    """
    spec = p.spec
    s = p.rate_scale
    ops = [
        (s * p.kappa, annihilation(spec)),
        (s * p.gamma31, atomic_sigma(1, 3, spec)),
        (s * p.gamma32, atomic_sigma(2, 3, spec)),
    ]
    return [(r, c) for r, c in ops if r > 0]


@dataclass(frozen=True)
class Superoperator:
    """Linear map on column-stacked density matrices (stored as sparse CSR)."""

    spec: HilbertSpec
    matrix: sp.csr_array

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = self.spec.dim
        if rho.shape != (d, d):
            raise ValueError(f"state of shape {rho.shape} does not match dim {d}")
        out = self.matrix @ rho.reshape(-1, order="F")
        return out.reshape(d, d, order="F")

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    @property
    def frobenius_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.matrix.data) ** 2)))


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(x: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(x).reshape(dim, dim, order="F")


def _dissipator(c: sp.csr_array, eye: sp.csr_array) -> sp.csr_array:
    cdc = c.conj().T @ c
    return 2 * sp.kron(c.conj(), c) - sp.kron(eye, cdc) - sp.kron(cdc.T, eye)


def liouvillian(p: SystemParams) -> Superoperator:
    spec = p.spec
    eye = sp.identity(spec.dim, dtype=complex, format="csr")
    h = sp.csr_array(hamiltonian(p))
    L = -1j * (sp.kron(eye, h) - sp.kron(h.T, eye))
    for rate, c in collapse_operators(p):
        L = L + rate * _dissipator(sp.csr_array(c), eye)
    L = sp.csr_array(L)
    L.eliminate_zeros()
    return Superoperator(spec, L)
