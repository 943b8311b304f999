import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcorr import (
    DensityMatrix,
    PureState,
    ValidationError,
    bures_distance,
    fidelity,
    make_rng,
    partial_trace,
    permute,
    purify,
    random_density,
    random_pure,
    random_unitary,
    tensor,
    trace_distance,
)
from qcorr.core import random_isometry

seeds = st.integers(0, 2**31 - 1)
dims2 = st.tuples(st.integers(1, 3), st.integers(1, 3))


def test_rejects_non_states():
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.2, -0.2]))
    with pytest.raises(ValidationError):
        DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(4) / 4, (2, 3))
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(4) / 4, (2, 2), ("A", "A"))
    with pytest.raises(ValidationError):
        PureState([1.0, 1.0])


def test_tiny_negative_eigenvalues_are_tolerated():
    m = np.diag([1.0 + 5e-11, -5e-11])
    rho = DensityMatrix(m)
    assert rho.eigvals().min() == 0.0


def test_partial_trace_of_product():
    a = np.diag([0.7, 0.3]).astype(complex)
    b = np.diag([0.2, 0.5, 0.3]).astype(complex)
    rho = DensityMatrix(np.kron(a, b), (2, 3), ("A", "B"))
    assert np.allclose(rho.ptrace("A").matrix, a, atol=1e-14)
    assert np.allclose(rho.ptrace("B").matrix, b, atol=1e-14)
    assert rho.ptrace("B").labels == ("B",)


def test_bell_marginal_is_maximally_mixed(bell):
    assert np.allclose(bell.ptrace("A").matrix, np.eye(2) / 2)


def test_unknown_label(bell):
    with pytest.raises(ValidationError):
        bell.ptrace("Z")


def test_permute_swaps_factors():
    a = np.diag([1.0, 0.0]).astype(complex)
    b = np.eye(3) / 3
    rho = DensityMatrix(np.kron(a, b), (2, 3), ("A", "B"))
    swapped = permute(rho, ["B", "A"])
    assert swapped.dims == (3, 2)
    assert np.allclose(swapped.matrix, np.kron(b, a))


def test_tensor_labels():
    r = tensor(DensityMatrix(np.eye(2) / 2, labels=("A",)), DensityMatrix(np.eye(3) / 3, labels=("B",)))
    assert r.dims == (2, 3) and r.labels == ("A", "B")


def test_distances_on_orthogonal_states():
    p, q = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    assert trace_distance(p, q) == pytest.approx(1.0)
    assert fidelity(p, q) == pytest.approx(0.0, abs=1e-14)
    assert bures_distance(p, q) == pytest.approx(np.sqrt(2.0))


def test_make_rng_is_reproducible():
    a = make_rng(7, 3, 1).standard_normal(4)
    b = make_rng(7, 3, 1).standard_normal(4)
    c = make_rng(7, 3, 2).standard_normal(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


@given(seeds, st.integers(1, 5))
def test_random_unitary_and_isometry(seed, d):
    rng = make_rng(seed)
    U = random_unitary(d, rng)
    assert np.allclose(U.conj().T @ U, np.eye(d), atol=1e-12)
    V = random_isometry(d + 2, d, rng)
    assert np.allclose(V.conj().T @ V, np.eye(d), atol=1e-12)


@given(seeds, dims2)
def test_random_density_is_a_state(seed, dims):
    rng = make_rng(seed)
    d = dims[0] * dims[1]
    rank = int(rng.integers(1, d + 1))
    rho = random_density(dims, rank, rng, labels=("A", "B"))
    DensityMatrix(rho.matrix, rho.dims, rho.labels)  # validates
    assert np.linalg.matrix_rank(rho.matrix, tol=1e-10) == rank


@given(seeds, dims2)
def test_purification_reproduces_the_state(seed, dims):
    rho = random_density(dims, None, make_rng(seed), labels=("A", "B"))
    psi = purify(rho)
    assert psi.labels == ("A", "B", "R")
    back = partial_trace(psi.density(), ["A", "B"])
    assert np.allclose(back.matrix, rho.matrix, atol=1e-12)


@given(seeds, st.integers(2, 4))
def test_fuchs_van_de_graaf(seed, d):
    rng = make_rng(seed)
    rho, sigma = random_density(d, None, rng), random_density(d, None, rng)
    F = fidelity(rho, sigma)
    T = trace_distance(rho, sigma)
    assert 1 - np.sqrt(F) <= T + 1e-12
    assert T <= np.sqrt(1 - F) + 1e-12


@given(seeds, dims2)
def test_pure_marginals_share_spectrum(seed, dims):
    psi = random_pure(dims, make_rng(seed), labels=("A", "B")).density()
    wa = np.sort(psi.ptrace("A").eigvals())[::-1]
    wb = np.sort(psi.ptrace("B").eigvals())[::-1]
    n = min(wa.size, wb.size)
    assert np.allclose(wa[:n], wb[:n], atol=1e-12)
