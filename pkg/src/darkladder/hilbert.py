"""Truncated atom (x) cavity Hilbert space.

States are ordered atom-major: the ket ``|k, n>`` (atomic level ``k`` in
1..3, ``n`` photons) lives at index ``(k - 1) * (n_max + 1) + n``.  Every
other module goes through :func:`basis_ket` / :meth:`HilbertSpec.index`
instead of computing raw indices.

Operators, kets and density matrices are plain dense ``numpy`` arrays of
complex dtype.  All rates are in units of the cavity decay rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_LEVELS = 3


class InvalidStateError(ValueError):
    """A density matrix violated Hermiticity, normalization or positivity."""


@dataclass(frozen=True)
class HilbertSpec:
    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def n_fock(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return N_LEVELS * self.n_fock

    def index(self, k: int, n: int) -> int:
        if k not in (1, 2, 3):
            raise ValueError(f"atomic level must be 1, 2 or 3, got {k!r}")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n!r} outside 0..{self.n_max}")
        return (k - 1) * self.n_fock + n

    def decode(self, index: int) -> tuple[int, int]:
        """Inverse of :meth:`index`."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index!r} outside 0..{self.dim - 1}")
        k, n = divmod(index, self.n_fock)
        return k + 1, n


def _check_square(A: np.ndarray, spec: HilbertSpec | None = None) -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if spec is not None and A.shape[0] != spec.dim:
        raise ValueError(f"operator dimension {A.shape[0]} does not match spec.dim={spec.dim}")


def spec_of(A: np.ndarray) -> HilbertSpec:
    """Recover the :class:`HilbertSpec` from an operator or ket's shape."""
    d = A.shape[0]
    if d % N_LEVELS:
        raise ValueError(f"dimension {d} is not a multiple of {N_LEVELS}")
    return HilbertSpec(d // N_LEVELS - 1)


def cavity_lowering(n_fock: int) -> np.ndarray:
    """Bosonic lowering operator on the first ``n_fock`` Fock states."""
    return np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1).astype(complex)


def annihilation(spec: HilbertSpec) -> np.ndarray:
    """``I_3 (x) a`` with ``<n-1|a|n> = sqrt(n)``."""
    return np.kron(np.eye(N_LEVELS), cavity_lowering(spec.n_fock))


def number_operator(spec: HilbertSpec) -> np.ndarray:
    a = annihilation(spec)
    return a.conj().T @ a


def atomic_sigma(k: int, l: int, spec: HilbertSpec) -> np.ndarray:
    """``|k><l| (x) I_cav``."""
    for level in (k, l):
        if level not in (1, 2, 3):
            raise ValueError(f"atomic level must be 1, 2 or 3, got {level!r}")
    m = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    m[k - 1, l - 1] = 1.0
    return np.kron(m, np.eye(spec.n_fock))


def basis_ket(k: int, n: int, spec: HilbertSpec) -> np.ndarray:
    v = np.zeros(spec.dim, dtype=complex)
    v[spec.index(k, n)] = 1.0
    return v


def product_ket(atom: np.ndarray, cavity: np.ndarray) -> np.ndarray:
    """Tensor an atomic 3-vector with a cavity vector of length ``n_max + 1``."""
    atom = np.asarray(atom, dtype=complex)
    cavity = np.asarray(cavity, dtype=complex)
    if atom.shape != (N_LEVELS,):
        raise ValueError(f"atomic factor must have shape (3,), got {atom.shape}")
    return np.kron(atom, cavity)


def identity(spec: HilbertSpec) -> np.ndarray:
    return np.eye(spec.dim, dtype=complex)


def adjoint(A: np.ndarray) -> np.ndarray:
    return np.asarray(A).conj().T


def apply(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    _check_square(A)
    if v.shape != (A.shape[0],):
        raise ValueError(f"state of shape {v.shape} does not match operator {A.shape}")
    return A @ v


def ket2dm(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def expectation(rho: np.ndarray, A: np.ndarray) -> complex:
    """``tr(rho A)``."""
    _check_square(rho)
    if A.shape != rho.shape:
        raise ValueError(f"operator shape {A.shape} does not match state {rho.shape}")
    # tr(rho A) without forming the product
    return complex(np.einsum("ij,ji->", rho, A))


def reduce_to_cavity(rho: np.ndarray) -> np.ndarray:
    """Partial trace over the atom."""
    spec = spec_of(rho)
    nf = spec.n_fock
    r = rho.reshape(N_LEVELS, nf, N_LEVELS, nf)
    return np.einsum("kikj->ij", r)


def reduce_to_atom(rho: np.ndarray) -> np.ndarray:
    """Partial trace over the cavity."""
    spec = spec_of(rho)
    nf = spec.n_fock
    r = rho.reshape(N_LEVELS, nf, N_LEVELS, nf)
    return np.einsum("injn->ij", r)


def check_density_matrix(
    rho: np.ndarray,
    spec: HilbertSpec | None = None,
    *,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    eig_tol: float = 1e-8,
) -> np.ndarray:
    """Validate ``rho`` and return it unchanged.

    Raises
    ------
    InvalidStateError
        If any of the Hermiticity, unit-trace or positivity bounds fails.
        Nothing is ever symmetrized or renormalized here.
    """
    rho = np.asarray(rho)
    _check_square(rho, spec)
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise InvalidStateError(f"not Hermitian: max|rho - rho^dag| = {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidStateError(f"trace {tr:.12g} deviates from 1")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam < -eig_tol:
        raise InvalidStateError(f"negative eigenvalue {lam:.3e}")
    return rho
