import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcorr import (
    DensityMatrix,
    Povm,
    ValidationError,
    binary_entropy,
    chi_A,
    classical_correlation,
    constrained_holevo_capacity,
    dephasing_channel,
    depolarizing_channel,
    discord,
    ensemble_povm,
    entanglement_of_formation,
    entropy_reduction,
    erasure_channel,
    holevo_capacity,
    holevo_capacity_ec,
    identity_channel,
    is_qc_state,
    make_rng,
    mutual_information,
    posterior_ensemble,
    purify,
    random_density,
    random_povm,
    random_pure,
    unopt_classical_correlation,
    unopt_discord,
    unopt_discord_dilated,
    von_neumann_entropy,
    wootters_entanglement_of_formation,
)
from qcorr.bounds import f_H, number_operator
from qcorr.measures import projective_grid_classical_correlation
from qcorr.verify import random_decomposition

from conftest import LN2, ket, proj

seeds = st.integers(0, 2**31 - 1)
EQ = 1e-4

PAULI = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])]


def bell_diagonal(c):
    m = np.eye(4, dtype=complex)
    for cj, s in zip(c, PAULI):
        m += cj * np.kron(s, s)
    return DensityMatrix(m / 4, (2, 2), ("A", "B"))


def bell_diagonal_cc(c):
    x = max(abs(v) for v in c)
    return 0.5 * ((1 - x) * np.log1p(-x) + (1 + x) * np.log1p(x)) if x < 1 else LN2


# --- POVMs and unoptimised quantities --------------------------------------


def test_povm_validation():
    with pytest.raises(ValidationError):
        Povm([np.diag([1.0, 0.0]), np.diag([0.5, 0.0])])
    with pytest.raises(ValidationError):
        Povm([np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])])


@given(seeds, st.integers(2, 3), st.integers(0, 6))
def test_random_povm_sums_to_identity(seed, d, extra):
    rng = make_rng(seed)
    for rank_one in (True, False):
        M = random_povm(d, d + extra, rng, rank_one=rank_one)
        assert np.allclose(sum(M.elements), np.eye(d), atol=1e-12)
        assert M.is_rank_one() or not rank_one


def test_bell_values(bell):
    Z = Povm.projective(np.eye(2))
    assert entropy_reduction(bell, Z, "B") == pytest.approx(0.0, abs=1e-12)
    assert unopt_classical_correlation(bell, Z, "B") == pytest.approx(LN2, abs=1e-12)
    assert unopt_discord(bell, Z, "B") == pytest.approx(LN2, abs=1e-12)


def test_product_state_is_trivial():
    rho = DensityMatrix(np.kron(np.diag([0.3, 0.7]), np.diag([0.6, 0.4])), (2, 2), ("A", "B"))
    assert classical_correlation(rho, "B", restarts=2).value == pytest.approx(0.0, abs=1e-10)
    assert discord(rho, "B", restarts=2).value == pytest.approx(0.0, abs=1e-8)


@given(seeds, st.integers(2, 3), st.integers(2, 3))
def test_posterior_ensemble_decomposes_marginal(seed, da, db):
    rng = make_rng(seed)
    rho = random_density((da, db), None, rng, labels=("A", "B"))
    M = random_povm(db, db + 1, rng)
    ens = posterior_ensemble(rho, M, "B")
    assert np.allclose(ens.average().ptrace("A").matrix, rho.ptrace("A").matrix, atol=1e-12)


@given(seeds, st.integers(2, 3), st.integers(2, 3))
def test_unoptimised_identities(seed, da, db):
    rng = make_rng(seed)
    rho = random_density((da, db), int(rng.integers(1, da * db + 1)), rng, labels=("A", "B"))
    M = random_povm(db, int(rng.integers(db, db * db + 1)), rng, rank_one=bool(seed % 2))
    I = mutual_information(rho)
    c = unopt_classical_correlation(rho, M, "B")
    assert -1e-12 <= c <= I + 1e-12
    assert unopt_discord(rho, M, "B") == pytest.approx(I - c, abs=1e-12)
    assert unopt_discord_dilated(rho, M, "B") == pytest.approx(I - c, abs=1e-9)
    er = entropy_reduction(rho, M, "B")
    assert -1e-12 <= er <= min(von_neumann_entropy(rho), von_neumann_entropy(rho.ptrace("B"))) + 1e-12


# --- optimised correlations ------------------------------------------------


def test_bell_optimised(bell):
    assert classical_correlation(bell, "B", restarts=4).value == pytest.approx(LN2, abs=EQ)
    assert discord(bell, "B", restarts=4).value == pytest.approx(LN2, abs=EQ)


@pytest.mark.parametrize("c", [(0.3, -0.2, 0.1), (0.5, 0.5, -0.5), (-0.9, 0.1, 0.2), (0.0, 0.0, 0.7)])
def test_bell_diagonal_closed_form(c):
    rho = bell_diagonal(c)
    assert classical_correlation(rho, "B", restarts=4).value == pytest.approx(bell_diagonal_cc(c), abs=EQ)


def test_ghz_marginals(ghz):
    assert classical_correlation(ghz.ptrace("AB"), "B", restarts=4).value == pytest.approx(LN2, abs=EQ)
    assert entanglement_of_formation(ghz.ptrace("AC"), "A", restarts=4).value == pytest.approx(0.0, abs=EQ)
    assert discord(ghz.ptrace("BC"), "B", restarts=4).value == pytest.approx(0.0, abs=EQ)


@settings(max_examples=6)
@given(seeds)
def test_optimiser_beats_projective_grid(seed):
    rho = random_density((2, 2), None, make_rng(seed), labels=("A", "B"))
    opt = classical_correlation(rho, "B", restarts=4, patience=3).value
    grid = projective_grid_classical_correlation(rho, "B", step_deg=6.0)
    assert opt >= grid - 1e-6


def test_wootters_werner():
    for p in (0.2, 0.5, 0.8, 1.0):
        phi = proj(ket(0, 0) + ket(1, 1)).matrix
        rho = DensityMatrix(p * phi + (1 - p) * np.eye(4) / 4, (2, 2), ("A", "B"))
        C = max(0.0, (3 * p - 1) / 2)
        expected = binary_entropy(0.5 * (1 + np.sqrt(1 - C * C))) if C > 0 else 0.0
        assert wootters_entanglement_of_formation(rho) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=8)
@given(seeds)
def test_ef_matches_wootters(seed):
    rho = random_density((2, 2), int(make_rng(seed).integers(2, 4)), make_rng(seed, 1), labels=("A", "B"))
    ef = entanglement_of_formation(rho, "A", restarts=8, patience=3).value
    assert ef == pytest.approx(wootters_entanglement_of_formation(rho), abs=EQ)


@given(seeds)
def test_ef_of_pure_state_is_marginal_entropy(seed):
    psi = random_pure((2, 3), make_rng(seed), labels=("A", "B")).density()
    assert entanglement_of_formation(psi, "A", restarts=1).value == pytest.approx(
        von_neumann_entropy(psi.ptrace("A")), abs=1e-10)


@settings(max_examples=8)
@given(seeds)
def test_chi_a_routes_agree(seed):
    rho = random_density((2, 3), 2, make_rng(seed), labels=("A", "C"))
    res = chi_A(rho, "A", restarts=4, patience=3)
    assert res.details["route_divergence"] == pytest.approx(res.details["route_identity"], abs=1e-8)
    assert 0.0 <= res.value <= von_neumann_entropy(rho.ptrace("A")) + 1e-12


# --- q-c detection --------------------------------------------------------


def test_qc_detection(bell):
    U = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    m = 0.4 * np.kron(np.diag([1.0, 0.0]), np.outer(U[:, 0], U[:, 0])) \
        + 0.6 * np.kron(np.eye(2) / 2, np.outer(U[:, 1], U[:, 1]))
    flag, basis = is_qc_state(DensityMatrix(m, (2, 2), ("A", "B")), measured="B")
    assert flag
    assert np.allclose(np.abs(basis.conj().T @ U), np.eye(2), atol=1e-8) or \
        np.allclose(np.abs(basis.conj().T @ U), np.eye(2)[::-1], atol=1e-8)
    assert not is_qc_state(bell, measured="B")[0]


# --- capacities -----------------------------------------------------------


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
def test_depolarizing_capacity(q):
    cap = holevo_capacity(depolarizing_channel(2, q), restarts=4)
    assert cap.value == pytest.approx(LN2 - binary_entropy(q / 2), abs=EQ)


@pytest.mark.parametrize("d", [2, 3])
def test_dephasing_and_erasure_capacity(d):
    assert holevo_capacity(dephasing_channel(d), restarts=4).value == pytest.approx(np.log(d), abs=EQ)
    assert holevo_capacity(erasure_channel(d, 0.3), restarts=4).value == pytest.approx(0.7 * np.log(d), abs=EQ)


def test_constrained_capacity_of_dephasing():
    res = constrained_holevo_capacity(dephasing_channel(2), np.eye(2) / 2, restarts=4)
    assert res.value == pytest.approx(LN2, abs=EQ)
    avg = res.argument.average().matrix
    assert np.allclose(avg, np.eye(2) / 2, atol=1e-10)


@pytest.mark.parametrize("E", [0.3, 0.8])
def test_energy_constrained_capacity_of_identity(E):
    H = number_operator(3)
    res = holevo_capacity_ec(identity_channel(3), H, E, restarts=2)
    assert res.value == pytest.approx(f_H(H, E), abs=EQ)
    assert res.details["energy"] <= E + 1e-9


@given(seeds, st.integers(2, 3))
def test_ensemble_povm_reproduces_members(seed, d):
    rng = make_rng(seed)
    rho = random_density(d, None, rng, labels=("A",))
    mu = random_decomposition(rho, int(rng.integers(1, d * d + 1)), rng)
    M = ensemble_povm(rho, mu, "R")
    big = purify(rho).density()
    post = posterior_ensemble(big, M, "R")
    for p, s, q, t in zip(mu.probs, mu.states, post.probs, post.states):
        assert q == pytest.approx(p, abs=1e-10)
        assert np.allclose(t.ptrace("A").matrix, s.matrix, atol=1e-8)
