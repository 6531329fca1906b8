import numpy as np
import pytest
from hypothesis import given, strategies as st

from darkladder.hilbert import (
    HilbertSpec,
    InvalidStateError,
    adjoint,
    annihilation,
    apply,
    atomic_sigma,
    basis_ket,
    check_density_matrix,
    expectation,
    identity,
    ket2dm,
    number_operator,
    product_ket,
    reduce_to_atom,
    reduce_to_cavity,
    spec_of,
)

from .conftest import random_density_matrix


def brute_annihilation(n_max):
    """Atom identity times cavity lowering, assembled element by element."""
    nf = n_max + 1
    a = np.zeros((3 * nf, 3 * nf))
    for k in range(3):
        for n in range(1, nf):
            a[k * nf + n - 1, k * nf + n] = np.sqrt(n)
    return a


def test_lowering_matrix_element():
    spec = HilbertSpec(2)
    a = annihilation(spec)
    assert a[spec.index(1, 1), spec.index(1, 2)] == pytest.approx(1.41421, abs=1e-5)
    np.testing.assert_array_equal(a, brute_annihilation(2))


def test_lowering_kills_vacuum_block():
    spec = HilbertSpec(2)
    a = annihilation(spec)
    for k in (1, 2, 3):
        assert np.linalg.norm(a @ basis_ket(k, 0, spec)) == 0


def test_number_operator_diagonal():
    spec = HilbertSpec(5)
    num = number_operator(spec)
    assert np.count_nonzero(num - np.diag(np.diag(num))) == 0
    np.testing.assert_allclose(np.diag(num).real, np.tile(np.arange(6), 3))


def test_sigma_algebra():
    spec = HilbertSpec(4)
    np.testing.assert_array_equal(atomic_sigma(3, 3, spec), atomic_sigma(3, 1, spec) @ atomic_sigma(1, 3, spec))
    total = sum(atomic_sigma(k, k, spec) for k in (1, 2, 3))
    np.testing.assert_array_equal(total, identity(spec))
    s21 = atomic_sigma(2, 1, spec)
    for n in range(spec.n_fock):
        np.testing.assert_array_equal(s21 @ basis_ket(1, n, spec), basis_ket(2, n, spec))


def test_sigma_rejects_bad_level():
    with pytest.raises(ValueError):
        atomic_sigma(0, 1, HilbertSpec(2))


def test_basis_ket_indexing():
    spec = HilbertSpec(6)
    assert np.argmax(basis_ket(1, 0, spec)) == 0
    assert np.argmax(basis_ket(3, spec.n_max, spec)) == spec.dim - 1
    v = basis_ket(2, 1, spec)
    assert np.vdot(v, atomic_sigma(2, 1, spec) @ basis_ket(1, 1, spec)) == 1


@given(st.integers(1, 12).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, 3 * (m + 1) - 1))))
def test_index_decode_roundtrip(case):
    n_max, i = case
    spec = HilbertSpec(n_max)
    k, n = spec.decode(i)
    assert spec.index(k, n) == i


def test_hilbert_spec_rejects_small_cutoff():
    with pytest.raises(ValueError):
        HilbertSpec(0)


def test_product_ket_matches_kron():
    spec = HilbertSpec(3)
    atom = np.array([0.6, 0.8j, 0])
    cav = np.array([1, 0, 0, 0], dtype=complex)
    v = product_ket(atom, cav)
    np.testing.assert_allclose(v, 0.6 * basis_ket(1, 0, spec) + 0.8j * basis_ket(2, 0, spec))


def test_adjoint_and_expectation(rng):
    spec = HilbertSpec(3)
    A = rng.normal(size=(spec.dim, spec.dim)) + 1j * rng.normal(size=(spec.dim, spec.dim))
    np.testing.assert_array_equal(adjoint(adjoint(A)), A)
    rho = random_density_matrix(spec.dim, rng)
    assert expectation(rho, identity(spec)) == pytest.approx(1.0, abs=1e-12)
    vac = ket2dm(basis_ket(1, 0, spec))
    assert expectation(vac, number_operator(spec)) == 0
    assert expectation(rho, A) == pytest.approx(np.trace(rho @ A), abs=1e-12)


def test_apply_shape_mismatch():
    with pytest.raises(ValueError):
        apply(np.eye(6), np.ones(9))


def test_spec_of_rejects_non_multiple_of_three():
    with pytest.raises(ValueError):
        spec_of(np.eye(7))


def test_partial_traces(rng):
    spec = HilbertSpec(2)
    ra = random_density_matrix(3, rng)
    rc = random_density_matrix(3, rng)
    rho = np.kron(ra, rc)
    np.testing.assert_allclose(reduce_to_atom(rho), ra, atol=1e-12)
    np.testing.assert_allclose(reduce_to_cavity(rho), rc, atol=1e-12)
    assert spec_of(rho) == spec


def test_check_density_matrix(rng):
    spec = HilbertSpec(2)
    rho = random_density_matrix(spec.dim, rng)
    assert check_density_matrix(rho, spec) is rho
    with pytest.raises(InvalidStateError, match="trace"):
        check_density_matrix(2 * rho)
    bad = rho.copy()
    bad[0, 1] += 1e-3
    with pytest.raises(InvalidStateError, match="Hermitian"):
        check_density_matrix(bad)
    v = basis_ket(1, 0, spec) - basis_ket(2, 0, spec)
    neg = 1.5 * ket2dm(basis_ket(1, 0, spec)) - 0.5 * ket2dm(basis_ket(2, 0, spec))
    with pytest.raises(InvalidStateError, match="eigenvalue"):
        check_density_matrix(neg)
    with pytest.raises(ValueError, match="dimension"):
        check_density_matrix(ket2dm(v / np.sqrt(2)), HilbertSpec(3))
