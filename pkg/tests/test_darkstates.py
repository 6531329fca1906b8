import numpy as np
import pytest
from hypothesis import given, strategies as st

from darkladder.darkstates import (
    bright_energies,
    bright_population,
    dark_basis,
    dark_decay_rate,
    dark_populations,
    dark_state,
    eff_hamiltonian_weak,
    ladder_coupling,
    ladder_coupling_limit,
    qn_rn,
    two_level_populations,
)
from darkladder.hilbert import annihilation, basis_ket, ket2dm
from darkladder.model import SystemParams, hamiltonian_h0, hamiltonian_v, liouvillian
from darkladder.solvers import steady_state

P = SystemParams(g=10, omega12=0.1, omega23=3, n_max=8)


def test_qn_rn_values():
    q, r = qn_rn(1, 10, 3)
    assert q == pytest.approx(3 / np.sqrt(109), abs=1e-12)
    assert r == pytest.approx(10 / np.sqrt(109), abs=1e-12)
    assert (round(q, 6), round(r, 6)) == (0.287348, 0.957826)


def test_qn_rn_small_g_limit():
    q, r = qn_rn(4, 1e-9, 3)
    assert q == pytest.approx(1.0, abs=1e-12) and r < 1e-9


@given(n=st.integers(1, 10), g=st.floats(0, 50), w=st.floats(0, 50))
def test_qn_rn_normalized(n, g, w):
    if g == 0 and w == 0:
        with pytest.raises(ValueError):
            qn_rn(n, g, w)
        return
    q, r = qn_rn(n, g, w)
    assert q * q + r * r == pytest.approx(1.0, abs=1e-12)


def test_qn_rn_rejects_n0():
    with pytest.raises(ValueError):
        qn_rn(0, 1, 1)


def test_dark_state_vectors():
    spec = P.spec
    np.testing.assert_array_equal(dark_state(0, P).vector, basis_ket(1, 0, spec))
    v = dark_state(1, P).vector
    assert v[spec.index(1, 1)] == pytest.approx(0.2873, abs=1e-4)
    assert v[spec.index(2, 0)] == pytest.approx(-0.9578, abs=1e-4)
    B = dark_basis(P)[:, :6]
    np.testing.assert_allclose(B.conj().T @ B, np.eye(6), atol=1e-14)
    with pytest.raises(ValueError):
        dark_state(P.n_max + 1, P)


@given(g=st.floats(0.1, 30), w=st.floats(0.1, 30))
def test_dark_states_are_zero_modes_without_excited_component(g, w):
    p = SystemParams(g=g, omega23=w, n_max=5)
    h0 = hamiltonian_h0(p)
    for n in range(6):
        v = dark_state(n, p).vector
        assert np.linalg.norm(h0 @ v) < 1e-12 * max(g, w, 1)
        assert all(v[p.spec.index(3, m)] == 0 for m in range(6))


def test_weak_effective_hamiltonian_is_projected_drive():
    spec = P.spec
    B = dark_basis(P)
    proj = B @ B.conj().T
    oracle = proj @ hamiltonian_v(P) @ proj
    np.testing.assert_allclose(eff_hamiltonian_weak(P), oracle, atol=1e-14)


def test_weak_effective_first_element():
    h = eff_hamiltonian_weak(P)
    el = dark_state(1, P).vector.conj() @ h @ dark_state(0, P).vector
    assert el == pytest.approx(-0.1 * 0.957826, abs=1e-6)
    assert ladder_coupling(0, P) == pytest.approx(-0.09578, abs=1e-5)


def test_weak_effective_large_g_limit():
    p = SystemParams(g=100, omega12=0.1, omega23=1, n_max=8)
    for n in range(1, 8):
        exact = ladder_coupling(n, p)
        assert exact == pytest.approx(ladder_coupling_limit(n, p), rel=0.01)
        assert exact == pytest.approx(-p.omega12 * p.omega23 / (p.g * np.sqrt(n)), rel=0.01)


def test_weak_effective_kills_bright_sector(rng):
    h = eff_hamiltonian_weak(P)
    B = dark_basis(P)
    v = rng.normal(size=P.spec.dim) + 1j * rng.normal(size=P.spec.dim)
    v -= B @ (B.conj().T @ v)
    assert np.linalg.norm(h @ v) < 1e-13


def test_decay_rate_examples():
    assert dark_decay_rate(1, P) == pytest.approx(9 / 109, abs=1e-15)
    assert dark_decay_rate(1, P) == pytest.approx(0.08257, abs=1e-5)
    assert dark_decay_rate(2, P) == pytest.approx(2 * 109 / 209, abs=1e-15)
    assert dark_decay_rate(1, P.replace(omega23=0)) == 0
    rates = [dark_decay_rate(n, P) for n in range(1, 11)]
    assert all(b > a for a, b in zip(rates, rates[1:]))
    assert dark_decay_rate(1, P.replace(decay_convention="energy")) == pytest.approx(0.5 * 9 / 109)


def test_decay_rate_is_jump_matrix_element():
    spec = P.spec
    a = annihilation(spec)
    for n in range(1, 7):
        amp = dark_state(n - 1, P).vector.conj() @ (np.sqrt(P.kappa) * a) @ dark_state(n, P).vector
        assert abs(amp) ** 2 == pytest.approx(dark_decay_rate(n, P), abs=1e-12)


def test_bright_energies():
    assert bright_energies(1, P) == pytest.approx((np.sqrt(109), -np.sqrt(109)), abs=1e-12)
    assert bright_energies(3, P.replace(g=0, omega23=0)) == (0.0, 0.0)


def test_bright_energies_match_manifold_diagonalization():
    h0 = hamiltonian_h0(P)
    spec = P.spec
    for n in range(1, 6):
        idx = [spec.index(1, n), spec.index(2, n - 1), spec.index(3, n - 1)]
        w = np.linalg.eigvalsh(h0[np.ix_(idx, idx)])
        ep, em = bright_energies(n, P)
        assert np.min(np.abs(w - ep)) < 1e-10
        assert np.min(np.abs(w - em)) < 1e-10
        assert np.min(np.abs(w)) < 1e-10


def test_dark_populations_of_vacuum():
    rho = ket2dm(basis_ket(1, 0, P.spec))
    pops = dark_populations(rho, P, 4)
    np.testing.assert_allclose(pops, [1, 0, 0, 0, 0], atol=1e-15)
    assert bright_population(rho, P) == pytest.approx(0, abs=1e-15)
    with pytest.raises(ValueError):
        dark_populations(rho, P, P.n_max + 1)


def test_equal_sharing_at_small_omega23():
    p = SystemParams(g=10, omega12=0.3, omega23=0.5, n_max=8)
    pops = dark_populations(steady_state(liouvillian(p)), p, 1)
    assert pops.sum() > 0.99
    assert pops[0] == pytest.approx(pops[1], rel=0.02)


def test_population_inversion_exists():
    pops = []
    for w in np.geomspace(0.05, 1.0, 8):
        p = SystemParams(g=10, omega12=w, omega23=3, n_max=8)
        pops.append(dark_populations(steady_state(liouvillian(p)), p, 1))
    assert any(p1 > p0 for p0, p1 in pops)


def test_two_level_model_formula():
    p0, p1 = two_level_populations(P)
    gam = 9 / 109
    assert p1 == pytest.approx(0.01 / (gam**2 + 0.02))
    assert p0 + p1 == pytest.approx(1)
