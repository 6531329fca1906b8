"""Steady states and time evolution of the master equation."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import structural_rank
from scipy.integrate import solve_ivp
from scipy.linalg import null_space

from .hilbert import check_density_matrix, reduce_to_cavity
from .model import Superoperator, SystemParams, collapse_operators, hamiltonian, liouvillian, unvec

log = logging.getLogger(__name__)

# Estimated 1-norm condition number above which the bordered steady-state
# system is treated as singular, i.e. the fixed-point space is degenerate.
DEGENERACY_COND = 1e13
RESIDUAL_REL_TOL = 1e-10

EVOLVE_RTOL = 1e-10
EVOLVE_ATOL = 1e-12

TRUNC_START, TRUNC_STEP, TRUNC_CAP = 8, 4, 40
TRUNC_TAIL = 1e-8


class SolverError(RuntimeError):
    pass


class DegenerateSteadyStateError(SolverError):
    """The Liouvillian has more than one stationary state."""


class IntegrationError(SolverError):
    """Integration stopped early; ``states`` holds the grid points reached before ``last_time``."""

    def __init__(self, message: str, last_time: float | None = None, states=()):
        super().__init__(message)
        self.last_time = last_time
        self.states = list(states)


class TruncationError(SolverError):
    pass


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    t1: float
    n_steps: int

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ValueError("t1 must exceed t0")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError("n_steps must be an integer >= 1")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, int(self.n_steps) + 1)


def _trace_row(dim: int) -> sp.csr_array:
    """``vec(I)^T`` placed in row 0 of an otherwise empty ``dim^2 x dim^2`` matrix."""
    cols = np.arange(dim) * (dim + 1)
    rows = np.zeros(dim, dtype=int)
    n = dim * dim
    return sp.csr_array((np.ones(dim), (rows, cols)), shape=(n, n))


def _hermitian_coordinates(dim: int) -> tuple[sp.csr_array, sp.csr_array]:
    """Real coordinates ``x`` of Hermitian matrices, laid out on the ``vec`` slots.

    Slot ``(i, j)`` with ``i <= j`` holds ``Re rho_ij``; slot ``(j, i)`` holds
    ``Im rho_ij``.  Returns ``T`` with ``vec(rho) = T x`` and the row
    permutation ``S`` that moves slot ``(i, j)`` to ``(j, i)`` for ``i < j``.
    """
    i, j = np.triu_indices(dim, 1)
    up = i + j * dim
    lo = j + i * dim
    diag = np.arange(dim) * (dim + 1)
    n = dim * dim
    rows = np.concatenate([diag, up, lo, up, lo])
    cols = np.concatenate([diag, up, up, lo, lo])
    vals = np.concatenate([np.ones(dim + 2 * up.size), 1j * np.ones(up.size), -1j * np.ones(up.size)])
    T = sp.csr_array((vals, (rows, cols)), shape=(n, n))
    S = sp.csr_array((np.ones(up.size), (lo, up)), shape=(n, n))
    return T, S


def _real_generator(L: Superoperator) -> tuple[sp.csr_array, sp.csr_array]:
    """``L`` restricted to Hermitian matrices, as a real matrix acting on Hermitian coordinates."""
    d = L.spec.dim
    T, S = _hermitian_coordinates(d)
    C = sp.csr_array(L.matrix @ T)
    i, j = np.triu_indices(d)
    keep_re = np.zeros(d * d)
    keep_re[i + j * d] = 1.0
    A = sp.diags_array(keep_re) @ sp.csr_array(C.real) + S @ sp.csr_array(C.imag)
    return sp.csr_array(A), T


def steady_state(L: Superoperator) -> np.ndarray:
    """Unit-trace null vector of ``L``.

    ``L`` preserves Hermiticity, so the problem is posed on the ``d^2`` real
    coordinates of Hermitian matrices and the result is Hermitian by
    construction.  The equation for ``Re rho[0, 0]`` is replaced by the trace
    condition and the sparse real system is LU-factorized.  A (near-)singular
    factorization means the stationary space is more than one dimensional,
    which is reported instead of picking an arbitrary mixture.
    """
    d = L.spec.dim
    n = d * d
    G, T = _real_generator(L)
    keep = np.ones(n)
    keep[0] = 0.0
    A = sp.csc_array(sp.diags_array(keep) @ G + _trace_row(d))
    b = np.zeros(n)
    b[0] = 1.0

    # structurally singular systems would make SuperLU print BLAS noise before failing
    A.eliminate_zeros()
    if structural_rank(sp.csr_matrix(A)) < n:
        raise DegenerateSteadyStateError("stationary space is degenerate (structurally singular)")
    try:
        lu = spla.splu(A)
    except RuntimeError as exc:
        raise DegenerateSteadyStateError(f"stationary space is degenerate ({exc})") from exc

    inv = spla.LinearOperator(A.shape, matvec=lu.solve, rmatvec=lambda x: lu.solve(x, trans="T"), dtype=float)
    cond = spla.norm(A, 1) * spla.onenormest(inv)
    if not np.isfinite(cond) or cond > DEGENERACY_COND:
        raise DegenerateSteadyStateError(f"stationary space is degenerate (cond ~ {cond:.2e})")

    x = lu.solve(b)
    # one step of iterative refinement
    x = x + lu.solve(b - A @ x)
    rho = unvec(T @ x, d)

    resid = np.linalg.norm(L.apply(rho))
    bound = RESIDUAL_REL_TOL * L.frobenius_norm
    if not resid < bound:
        raise SolverError(f"steady-state residual {resid:.3e} exceeds {bound:.3e}")
    return check_density_matrix(rho, L.spec, eig_tol=1e-6)


def evolve(p: SystemParams, rho0: np.ndarray, grid: TimeGrid) -> list[np.ndarray]:
    """Integrate the master equation with an adaptive Dormand-Prince 5(4) pair.

    Returns the density matrices on ``grid.times``.  Each is checked against
    the trace (1e-8), Hermiticity (1e-8) and positivity (-1e-6) bounds; drift
    beyond them raises rather than being renormalized away.
    """
    spec = p.spec
    d = spec.dim
    check_density_matrix(rho0, spec, herm_tol=1e-8, trace_tol=1e-8, eig_tol=1e-6)

    h = hamiltonian(p)
    jumps = collapse_operators(p)
    # rho' = -i (K rho - rho K^dag) + sum 2 r c rho c^dag,  K = H - i sum r c^dag c
    K = h.copy()
    for r, c in jumps:
        K -= 1j * r * (c.conj().T @ c)
    Kd = K.conj().T
    jump_pairs = [(2 * r * c, c.conj().T) for r, c in jumps]

    def rhs(_t, y):
        rho = y.reshape(d, d)
        out = -1j * (K @ rho - rho @ Kd)
        for c2, cd in jump_pairs:
            out += c2 @ rho @ cd
        return out.ravel()

    times = grid.times
    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        np.asarray(rho0, dtype=complex).ravel(),
        method="RK45",
        t_eval=times,
        rtol=EVOLVE_RTOL,
        atol=EVOLVE_ATOL,
    )
    states = [sol.y[:, i].reshape(d, d) for i in range(sol.y.shape[1])]
    for i, (t, rho) in enumerate(zip(sol.t, states)):
        try:
            check_density_matrix(rho, spec, herm_tol=1e-8, trace_tol=1e-8, eig_tol=1e-6)
        except ValueError as exc:
            last = float(sol.t[i - 1]) if i else None
            raise IntegrationError(f"state drift at t={t:g}: {exc}", last, states[:i]) from exc
    if sol.status != 0:
        last = float(sol.t[-1]) if sol.t.size else None
        raise IntegrationError(f"integration failed (stiffness or step-size underflow): {sol.message}", last, states)
    return states


def evolve_unitary(h: np.ndarray, psi0: np.ndarray, times) -> np.ndarray:
    """Exact ``exp(-i h t) psi0`` for each ``t`` (rows of the result)."""
    w, U = np.linalg.eigh(h)
    c0 = U.conj().T @ psi0
    t = np.atleast_1d(np.asarray(times, dtype=float))
    return (np.exp(-1j * np.outer(t, w)) * c0) @ U.T


def fock_tail(rho: np.ndarray, levels: int = 2) -> float:
    """Population of the top ``levels`` Fock states."""
    pn = np.real(np.diag(reduce_to_cavity(rho)))
    return float(pn[-levels:].sum())


def _stationary_tail(p: SystemParams) -> tuple[float, np.ndarray | None]:
    """Top-Fock-level weight of the stationary state(s) at ``p.n_max``.

    For a degenerate stationary space the worst case over a null-space basis
    is returned together with ``None`` in place of the state.
    """
    L = liouvillian(p)
    try:
        rho = steady_state(L)
    except DegenerateSteadyStateError:
        d = p.spec.dim
        basis = null_space(L.toarray(), rcond=1e-10)
        tails = []
        for k in range(basis.shape[1]):
            r = unvec(basis[:, k], d)
            pn = np.abs(np.diag(reduce_to_cavity(r)))
            tails.append(pn[-2:].sum() / max(pn.sum(), np.abs(r).max()))
        return float(max(tails)), None
    return fock_tail(rho), rho


def _truncation_ladder(p: SystemParams):
    for n_max in range(TRUNC_START, TRUNC_CAP + 1, TRUNC_STEP):
        q = p.replace(n_max=n_max)
        tail, rho = _stationary_tail(q)
        if tail < TRUNC_TAIL:
            return n_max, rho
        log.debug("n_max=%d insufficient (tail %.2e)", n_max, tail)
    raise TruncationError(f"top-level population still {tail:.2e} at n_max={TRUNC_CAP}")


def auto_truncate(p: SystemParams) -> int:
    """Smallest ``n_max`` (8, 12, ..., 40) whose steady state leaves < 1e-8 in the top two Fock levels."""
    return _truncation_ladder(p)[0]


def solve_auto(p: SystemParams) -> tuple[int, np.ndarray]:
    """Steady state at the truncation chosen by :func:`auto_truncate`."""
    n_max, rho = _truncation_ladder(p)
    if rho is None:
        raise DegenerateSteadyStateError("stationary space is degenerate")
    return n_max, rho
