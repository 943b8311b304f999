import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcorr import (
    DensityMatrix,
    Ensemble,
    ValidationError,
    binary_entropy,
    conditional_mutual_information,
    g_func,
    holevo_chi,
    make_rng,
    mutual_information,
    random_density,
    random_pure,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from qcorr.entropy import holevo_chi_divergence

from conftest import LN2

seeds = st.integers(0, 2**31 - 1)


def test_closed_forms(bell, ghz):
    assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(np.log(3), abs=1e-14)
    assert von_neumann_entropy(bell) == pytest.approx(0.0, abs=1e-12)
    assert mutual_information(bell) == pytest.approx(2 * LN2, abs=1e-12)
    assert mutual_information(ghz, "A", "B") == pytest.approx(LN2, abs=1e-12)
    assert conditional_mutual_information(ghz, "A", "B", "C") == pytest.approx(LN2, abs=1e-12)
    assert binary_entropy(0.5) == pytest.approx(LN2)
    assert binary_entropy(0.0) == 0.0
    assert shannon_entropy([0.25] * 4) == pytest.approx(2 * LN2)


def test_g_function():
    assert g_func(0.0) == 0.0
    assert g_func(1.0) == pytest.approx(2 * LN2, abs=1e-15)
    assert g_func(0.5) == pytest.approx(1.5 * np.log(1.5) + 0.5 * LN2, abs=1e-15)
    with pytest.raises(ValidationError):
        g_func(-0.1)


def test_relative_entropy_diagonal():
    p, q = np.array([0.7, 0.3]), np.array([0.4, 0.6])
    expected = float(np.sum(p * np.log(p / q)))
    assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(expected, abs=1e-13)


def test_relative_entropy_infinite_off_support():
    assert relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0.0])) == np.inf


def test_mutual_information_needs_bipartition(ghz):
    with pytest.raises(ValidationError):
        mutual_information(ghz)


def test_holevo_of_orthogonal_pure_states():
    ens = Ensemble([0.5, 0.5], [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert holevo_chi(ens) == pytest.approx(LN2)


def test_ensemble_validation():
    with pytest.raises(ValidationError):
        Ensemble([0.5, 0.6], [np.eye(2) / 2, np.eye(2) / 2])
    with pytest.raises(ValidationError):
        Ensemble([0.5, 0.5], [np.eye(2) / 2, np.eye(3) / 3])


@given(seeds, st.integers(2, 4))
def test_entropy_bounds(seed, d):
    rho = random_density(d, None, make_rng(seed))
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= np.log(d) + 1e-12


@given(seeds, st.integers(2, 3), st.integers(2, 3))
def test_subadditivity_and_araki_lieb(seed, da, db):
    rho = random_density((da, db), None, make_rng(seed), labels=("A", "B"))
    s, sa, sb = (von_neumann_entropy(x) for x in (rho, rho.ptrace("A"), rho.ptrace("B")))
    assert s <= sa + sb + 1e-12
    assert abs(sa - sb) <= s + 1e-12


@given(seeds)
def test_strong_subadditivity(seed):
    rho = random_density((2, 2, 2), None, make_rng(seed), labels=("A", "B", "C"))
    assert conditional_mutual_information(rho, "A", "B", "C") >= 0.0


@given(seeds, st.integers(2, 4), st.integers(2, 5))
def test_holevo_forms_agree(seed, d, k):
    rng = make_rng(seed)
    ens = Ensemble(rng.dirichlet(np.ones(k)), [random_density(d, None, rng) for _ in range(k)])
    chi = holevo_chi(ens)
    assert chi == pytest.approx(holevo_chi_divergence(ens), abs=1e-10)
    assert chi <= min(np.log(d), shannon_entropy(ens.probs)) + 1e-12


@given(seeds, st.integers(2, 3))
def test_klein_inequality(seed, d):
    rng = make_rng(seed)
    assert relative_entropy(random_density(d, None, rng), random_density(d, None, rng)) >= -1e-12


@given(seeds)
def test_pure_state_mutual_information(seed):
    psi = random_pure((2, 3), make_rng(seed), labels=("A", "B")).density()
    assert mutual_information(psi) == pytest.approx(2 * von_neumann_entropy(psi.ptrace("A")), abs=1e-10)
