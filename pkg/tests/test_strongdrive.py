import numpy as np
import pytest
from hypothesis import given, strategies as st

from darkladder.hilbert import HilbertSpec, annihilation, cavity_lowering, expectation, product_ket, reduce_to_cavity
from darkladder.model import SystemParams, hamiltonian, liouvillian
from darkladder.observables import fidelity
from darkladder.solvers import evolve_unitary, steady_state
from darkladder.strongdrive import (
    MINUS,
    PLUS,
    TruncationTailError,
    atom_plus_minus_populations,
    cat_ket,
    cat_projection,
    cat_state,
    coherent_embed,
    coherent_overlap,
    eff_hamiltonian_strong,
    rotation_rate,
    steady_amplitudes,
    time_for_rotation,
)

P = SystemParams(g=10, omega12=50, omega23=3, n_max=12)


def branch_block(h, atom, spec):
    """Cavity operator <atom| h |atom>."""
    nf = spec.n_fock
    blocks = h.reshape(3, nf, 3, nf)
    return np.einsum("i,injm,j->nm", atom.conj(), blocks, atom)


def test_effective_matrix_elements():
    spec = P.spec
    h = eff_hamiltonian_strong(P, spec)
    hp = branch_block(h, PLUS, spec)
    # |lambda| = g W23 / 2 W12 and theta = W23^2 / 2 W12
    assert hp[0, 1] == pytest.approx(0.3, abs=1e-14)
    assert hp[0, 0] == pytest.approx(0.09, abs=1e-14)
    assert np.linalg.norm(branch_block(h, np.array([0, 0, 1.0]), spec)) == 0
    cross = np.einsum("i,injm,j->nm", PLUS.conj(), h.reshape(3, 13, 3, 13), MINUS)
    assert np.linalg.norm(cross) < 1e-15


def test_effective_branches_related_by_parity():
    spec = P.spec
    h = eff_hamiltonian_strong(P, spec)
    hp = branch_block(h, PLUS, spec)
    hm = branch_block(h, MINUS, spec)
    parity = np.diag((-1.0) ** np.arange(spec.n_fock))
    np.testing.assert_allclose(hm, -parity @ hp.conj() @ parity, atol=1e-14)


def test_effective_spectrum_matches_full_hamiltonian():
    """Levels near +-W12 of the full model are +-(W12 + k g^2 / 2 W12) up to O(W12^-2)."""
    p = SystemParams(g=10, omega12=200, omega23=3, n_max=20)
    w = np.linalg.eigvalsh(hamiltonian(p))
    delta = rotation_rate(p)
    for k in range(4):
        for sign in (1, -1):
            assert np.min(np.abs(w - sign * (p.omega12 + k * delta))) < 5e-3
    # the opposite sign of the dispersive shift is absent
    assert np.min(np.abs(w - (p.omega12 - 2 * delta))) > 0.4


def test_cat_state_formulas():
    s0 = cat_state(0.0, P)
    assert (s0.alpha_plus, s0.alpha_minus, s0.phi) == (0, 0, 0)
    t = time_for_rotation(np.pi, P)
    s = cat_state(t, P)
    assert s.theta_rot == pytest.approx(np.pi)
    assert s.alpha_plus == pytest.approx(-0.6, abs=1e-12)
    assert s.alpha_minus == pytest.approx(0.6, abs=1e-12)
    assert s.phi == pytest.approx(0, abs=1e-12)


@given(theta=st.floats(0, 2 * np.pi))
def test_cat_ket_is_exact_solution_of_effective_model(theta):
    spec = HilbertSpec(16)
    t = time_for_rotation(theta, P)
    psi = evolve_unitary(eff_hamiltonian_strong(P, spec), product_ket(np.array([1, 0, 0]), np.eye(17)[0]), [t])[0]
    overlap = np.vdot(cat_ket(cat_state(t, P), spec), psi)
    assert abs(overlap) ** 2 == pytest.approx(1.0, abs=1e-9)


def test_cat_ket_model_frame_against_full_dynamics():
    p = SystemParams(g=10, omega12=200, omega23=3, kappa=0, gamma31=0, gamma32=0, n_max=14)
    spec = p.spec
    thetas = np.linspace(0, np.pi, 7)
    times = [time_for_rotation(th, p) for th in thetas]
    states = evolve_unitary(hamiltonian(p), product_ket(np.array([1, 0, 0]), np.eye(15)[0]), times)
    for t, psi in zip(times, states):
        assert abs(np.vdot(cat_ket(cat_state(t, p), spec, p), psi)) ** 2 > 0.99


def test_cat_projection_matches_numerics():
    spec = HilbertSpec(14)
    snap = cat_state(time_for_rotation(2.0, P), P)
    psi = cat_ket(snap, spec)
    nf = spec.n_fock
    for level in (1, 2):
        block = psi.reshape(3, nf)[level - 1]
        prob, vec = cat_projection(snap, level, spec)
        assert prob == pytest.approx(np.vdot(block, block).real, abs=1e-10)
        assert abs(np.vdot(vec, block / np.linalg.norm(block))) == pytest.approx(1.0, abs=1e-10)
    p2, v2 = cat_projection(cat_state(0.0, P), 2, spec)
    assert p2 == 0 and not np.any(v2)
    with pytest.raises(ValueError):
        cat_projection(snap, 3, spec)


def test_coherent_state_properties():
    spec = HilbertSpec(10)
    np.testing.assert_array_equal(coherent_embed(0, spec), np.eye(11)[0])
    alpha = 0.3 * np.exp(0.7j)
    v = coherent_embed(alpha, spec)
    a = cavity_lowering(11)
    assert np.vdot(v, a @ v) == pytest.approx(alpha, abs=1e-10)
    b = -0.2 + 0.25j
    assert np.vdot(v, coherent_embed(b, spec)) == pytest.approx(coherent_overlap(alpha, b), abs=1e-10)
    with pytest.raises(TruncationTailError):
        coherent_embed(3.0, spec)


def test_steady_amplitude_limits():
    b = steady_amplitudes(SystemParams(g=10, omega12=1e-6, omega23=3))
    assert b.beta_plus == pytest.approx(-0.3, abs=1e-6)
    assert b.beta_minus == pytest.approx(0.3, abs=1e-6)
    b = steady_amplitudes(SystemParams(g=1, omega12=500, omega23=3))
    assert b.beta_plus == pytest.approx(b.beta_minus, abs=1e-5)
    assert abs(b.beta_plus) == pytest.approx(0.003, rel=1e-5)
    b = steady_amplitudes(SystemParams(g=10, omega12=30, omega23=3))
    assert abs(b.beta_plus) == pytest.approx(30 / np.sqrt(100**2 + 60**2), abs=1e-12)
    assert abs(b.beta_minus) == pytest.approx(0.25725, abs=1e-5)


def test_steady_amplitude_phase_matches_full_model():
    p = SystemParams(g=1, omega12=500, omega23=3, n_max=8)
    rho = steady_state(liouvillian(p))
    mean_a = expectation(rho, annihilation(p.spec))
    b = steady_amplitudes(p)
    assert mean_a == pytest.approx(0.5 * (b.beta_plus + b.beta_minus), abs=2e-5)


def test_strong_steady_state_is_coherent_mixture():
    rho = steady_state(liouvillian(P.replace(n_max=8)))
    mix = steady_amplitudes(P).mixture(HilbertSpec(8))
    assert fidelity(reduce_to_cavity(rho), mix) > 0.999
    pp, pm = atom_plus_minus_populations(rho)
    assert pp == pytest.approx(0.5, abs=0.01) and pm == pytest.approx(0.5, abs=0.01)


def test_requires_drive():
    with pytest.raises(ValueError):
        rotation_rate(P.replace(omega12=0))
    with pytest.raises(ValueError):
        steady_amplitudes(SystemParams(g=0, omega12=0))
