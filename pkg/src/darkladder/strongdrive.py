"""Strong ground-state drive: effective dispersive model, cat states, coherent steady states.

With ``W12 >> g, W23`` the ground states split into ``|+->=(|1> +- |2>)/sqrt2``
at energies ``+-W12`` and the excited state can be eliminated.  In the frame
rotating with ``V`` the second-order effective Hamiltonian is::

    H_eff = + (1/2W12) [g^2 a^dag a + W23^2 + g W23 (a + a^dag)] s++
            - (1/2W12) [g^2 a^dag a + W23^2 - g W23 (a + a^dag)] s--

Each branch is a displaced oscillator, ``+-delta (a +- W23/g)^dag (a +- W23/g)``
with ``delta = g^2 / 2W12``.  Starting from ``|1, 0>`` the state stays

    (e^{i phi} |+>|alpha_+> + e^{-i phi} |->|alpha_->) / sqrt2,
    alpha_+- = +-(W23/g) (e^{-+i theta} - 1),   phi = -(W23/g)^2 sin(theta),

where ``theta = delta t`` is the rotation angle.  The branch phase is bounded:
the constant ``W23^2/2W12`` shift is cancelled by the displacement energy.

With cavity loss (field rate ``kappa``) each branch relaxes to a coherent
state ``beta_+- = -i g W23 / (+-i g^2 + 2 W12 kappa)`` and the atom ends in an
equal mixture of ``|+>`` and ``|->``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np

from .hilbert import HilbertSpec, cavity_lowering, product_ket, reduce_to_atom
from .model import SystemParams

PLUS = np.array([1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2)
MINUS = np.array([1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2)


class TruncationTailError(ValueError):
    pass


def _require_drive(p: SystemParams) -> None:
    if p.omega12 <= 0:
        raise ValueError("strong-drive analytics need omega12 > 0")


def rotation_rate(p: SystemParams) -> float:
    """``delta = g^2 / 2W12``."""
    _require_drive(p)
    return p.g**2 / (2 * p.omega12)


def time_for_rotation(theta_rot: float, p: SystemParams) -> float:
    return theta_rot / rotation_rate(p)


def eff_hamiltonian_strong(p: SystemParams, spec: HilbertSpec | None = None) -> np.ndarray:
    _require_drive(p)
    spec = spec or p.spec
    a = cavity_lowering(spec.n_fock)
    nf = spec.n_fock
    num = a.conj().T @ a
    drive = p.g * p.omega23 * (a + a.conj().T)
    base = p.g**2 * num + p.omega23**2 * np.eye(nf)
    h_plus = (base + drive) / (2 * p.omega12)
    h_minus = -(base - drive) / (2 * p.omega12)
    return np.kron(np.outer(PLUS, PLUS.conj()), h_plus) + np.kron(np.outer(MINUS, MINUS.conj()), h_minus)


@dataclass(frozen=True)
class CatSnapshot:
    t: float
    theta_rot: float
    phi: float
    alpha_plus: complex
    alpha_minus: complex


def cat_state(t: float, p: SystemParams) -> CatSnapshot:
    _require_drive(p)
    if p.g <= 0:
        raise ValueError("cat-state analytics need g > 0")
    theta = rotation_rate(p) * t
    c = p.omega23 / p.g
    return CatSnapshot(
        t=float(t),
        theta_rot=float(theta),
        phi=float(-c * c * np.sin(theta)),
        alpha_plus=complex(c * (np.exp(-1j * theta) - 1)),
        alpha_minus=complex(-c * (np.exp(1j * theta) - 1)),
    )


def coherent_embed(alpha: complex, spec: HilbertSpec, tail_tol: float = 1e-10) -> np.ndarray:
    """Normalized coherent state on the ``n_max + 1`` Fock levels.

    Raises :class:`TruncationTailError` when the Poisson weight beyond
    ``n_max`` exceeds ``tail_tol``.
    """
    n = np.arange(spec.n_fock)
    mod = abs(alpha)
    if mod == 0:
        c = np.zeros(spec.n_fock, dtype=complex)
        c[0] = 1.0
        return c
    logw = -mod * mod / 2 + n * np.log(mod) - 0.5 * np.array([lgamma(k + 1) for k in n])
    c = np.exp(logw) * np.exp(1j * n * np.angle(alpha))
    tail = 1.0 - float(np.sum(np.abs(c) ** 2))
    if tail > tail_tol:
        raise TruncationTailError(f"coherent state |{alpha:.3g}> loses {tail:.2e} beyond n_max={spec.n_max}")
    return c / np.linalg.norm(c)


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """``<alpha|beta>`` for untruncated coherent states."""
    return complex(np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + np.conj(alpha) * beta))


def cat_ket(snap: CatSnapshot, spec: HilbertSpec, p: SystemParams | None = None) -> np.ndarray:
    """Full atom-cavity ket of a :class:`CatSnapshot`.

    Without ``p`` the ket is in the frame rotating with ``V`` (the frame of
    :func:`eff_hamiltonian_strong`).  With ``p`` the ``exp(-+ i W12 t)``
    phases of ``|+->`` are restored, giving the ket in the frame of the full
    Hamiltonian.
    """
    ph_plus, ph_minus = snap.phi, -snap.phi
    if p is not None:
        ph_plus -= p.omega12 * snap.t
        ph_minus += p.omega12 * snap.t
    return (
        np.exp(1j * ph_plus) * product_ket(PLUS, coherent_embed(snap.alpha_plus, spec))
        + np.exp(1j * ph_minus) * product_ket(MINUS, coherent_embed(snap.alpha_minus, spec))
    ) / np.sqrt(2)


def cat_projection(snap: CatSnapshot, level: int, spec: HilbertSpec) -> tuple[float, np.ndarray]:
    """Detection probability and normalized cavity state after finding the atom in ``level``.

    Level 1 leaves ``e^{i phi}|alpha_+> + e^{-i phi}|alpha_->``, level 2 the
    odd combination.  The probability uses the analytic coherent-state
    overlap; the returned vector is normalized numerically, or all zeros
    when the outcome is impossible (level 2 at ``theta = 0``).
    """
    if level not in (1, 2):
        raise ValueError("projection defined for levels 1 and 2")
    sign = 1.0 if level == 1 else -1.0
    ap = coherent_embed(snap.alpha_plus, spec)
    am = coherent_embed(snap.alpha_minus, spec)
    vec = np.exp(1j * snap.phi) * ap + sign * np.exp(-1j * snap.phi) * am
    overlap = np.exp(-2j * snap.phi) * coherent_overlap(snap.alpha_plus, snap.alpha_minus)
    prob = 0.25 * (2 + 2 * sign * overlap.real)
    norm = np.linalg.norm(vec)
    return float(prob), (vec / norm if norm > 1e-12 else np.zeros_like(vec))


@dataclass(frozen=True)
class SteadyAmplitudes:
    beta_plus: complex
    beta_minus: complex

    def mixture(self, spec: HilbertSpec) -> np.ndarray:
        """Cavity density matrix ``(|b+><b+| + |b-><b-|) / 2``."""
        vp = coherent_embed(self.beta_plus, spec)
        vm = coherent_embed(self.beta_minus, spec)
        return 0.5 * (np.outer(vp, vp.conj()) + np.outer(vm, vm.conj()))


def steady_amplitudes(p: SystemParams) -> SteadyAmplitudes:
    g2 = p.g**2
    damp = 2 * p.omega12 * p.field_kappa
    if g2 == 0 and damp == 0:
        raise ValueError("steady amplitudes undefined: g = 0 and omega12 * kappa = 0")
    num = -1j * p.g * p.omega23
    return SteadyAmplitudes(complex(num / (1j * g2 + damp)), complex(num / (-1j * g2 + damp)))


def atom_plus_minus_populations(rho: np.ndarray) -> tuple[float, float]:
    """Populations of ``|+>`` and ``|->`` after tracing out the cavity."""
    r = reduce_to_atom(rho)
    return float(np.real(PLUS.conj() @ r @ PLUS)), float(np.real(MINUS.conj() @ r @ MINUS))
