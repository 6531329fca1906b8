"""Scalar figures of merit of a steady or evolving state.

Quantities that are undefined for a given state (``g2`` without photons, the
photon ratio without excitation) come back as ``None``; callers render that
as an empty cell, never as a number.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .hilbert import annihilation, atomic_sigma, expectation, spec_of

PHOTON_THRESHOLD = 1e-12
EXCITATION_THRESHOLD = 1e-14
PROJECTED_TRACE_FLOOR = 1e-10

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def photon_number(rho: np.ndarray) -> float:
    a = annihilation(spec_of(rho))
    return expectation(rho, a.conj().T @ a).real


def excited_population(rho: np.ndarray) -> float:
    return expectation(rho, atomic_sigma(3, 3, spec_of(rho))).real


def g2_zero(rho: np.ndarray) -> float | None:
    """``<a^dag^2 a^2> / <a^dag a>^2``, or ``None`` below 1e-12 photons."""
    a = annihilation(spec_of(rho))
    ad = a.conj().T
    n = expectation(rho, ad @ a).real
    if n <= PHOTON_THRESHOLD:
        return None
    return expectation(rho, ad @ ad @ a @ a).real / n**2


def photon_ratio(rho: np.ndarray) -> float | None:
    """``<a^dag a> / <s33>``, or ``None`` when ``<s33>`` is below 1e-14."""
    p33 = excited_population(rho)
    if p33 <= EXCITATION_THRESHOLD:
        return None
    return photon_number(rho) / p33


def project_two_qubit(rho: np.ndarray) -> tuple[np.ndarray, float]:
    """Block of ``rho`` on ``{|1>,|2>} x {|0>,|1>}`` (in that product order) and its trace."""
    spec = spec_of(rho)
    idx = [spec.index(k, n) for k in (1, 2) for n in (0, 1)]
    block = rho[np.ix_(idx, idx)]
    return block, float(np.trace(block).real)


def wootters_concurrence(rho4: np.ndarray) -> float:
    """Concurrence of a normalized two-qubit density matrix.

    Complex conjugation is taken in the computational product basis.
    """
    r = rho4 @ _YY @ rho4.conj() @ _YY
    ev = np.linalg.eigvals(r)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_2x2(rho: np.ndarray, return_trace: bool = False):
    """Concurrence of ``rho`` restricted to atom ``{|1>,|2>}`` x cavity ``{|0>,|1>}``.

    The restricted block is renormalized by its trace; if that trace is below
    1e-10 the result is 0.  With ``return_trace=True`` the projected trace is
    returned too, so callers can judge whether the two-qubit picture holds.
    """
    block, tr = project_two_qubit(rho)
    c = 0.0 if tr < PROJECTED_TRACE_FLOOR else wootters_concurrence(block / tr)
    return (c, tr) if return_trace else c


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    s = _psd_sqrt(rho)
    w = np.linalg.eigvalsh(s @ sigma @ s)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))))


@dataclass(frozen=True)
class ObservableSet:
    n_photon: float
    p33: float
    g2_zero: float | None
    ratio: float | None
    concurrence: float
    concurrence_trace: float

    def as_dict(self) -> dict:
        return asdict(self)


def evaluate(rho: np.ndarray) -> ObservableSet:
    c, tr = concurrence_2x2(rho, return_trace=True)
    return ObservableSet(
        n_photon=photon_number(rho),
        p33=excited_population(rho),
        g2_zero=g2_zero(rho),
        ratio=photon_ratio(rho),
        concurrence=c,
        concurrence_trace=tr,
    )
