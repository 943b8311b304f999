import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcorr import (
    Channel,
    DensityMatrix,
    ValidationError,
    apply_local,
    bures_distance_channels,
    channel_mutual_information,
    choi_matrix,
    complementary,
    compose,
    dephasing_channel,
    depolarizing_channel,
    depolarizing_semigroup,
    diamond_distance,
    diamond_upper,
    ec_distance,
    entropy_exchange,
    erasure_channel,
    identity_channel,
    make_rng,
    random_channel,
    random_density,
    random_unitary_mixture,
    stinespring,
    unitary_channel,
    von_neumann_entropy,
)
from qcorr.bounds import number_operator
from qcorr.channels import (
    channel_mutual_information_purified,
    entropy_exchange_purified,
    measurement_channel,
    mix_channels,
    partial_trace_channel,
)
from qcorr.measures import Povm

from conftest import LN2

seeds = st.integers(0, 2**31 - 1)


def _random_pair(seed):
    rng = make_rng(seed)
    da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
    de = int(rng.integers(-(-da // db), 4))
    return random_channel(da, db, de, rng), random_channel(da, db, de, rng), rng


def test_kraus_completeness_is_checked():
    with pytest.raises(ValidationError):
        Channel([np.eye(2), np.eye(2)])
    with pytest.raises(ValidationError):
        Channel([np.eye(2), np.ones((3, 2))])


def test_erasure_layout():
    ch = erasure_channel(2, 0.3)
    out = ch(np.diag([1.0, 0.0]))
    assert out.shape == (3, 3)
    assert out[2, 2] == pytest.approx(0.3)
    assert out[0, 0] == pytest.approx(0.7)


def test_dephasing_kills_coherences():
    out = dephasing_channel(2)(np.full((2, 2), 0.5))
    assert np.allclose(out, np.eye(2) / 2)


def test_depolarizing_semigroup_composes():
    a = compose(depolarizing_semigroup(0.4), depolarizing_semigroup(0.7))
    b = depolarizing_semigroup(1.1)
    assert np.allclose(choi_matrix(a), choi_matrix(b), atol=1e-12)


def test_partial_trace_channel():
    rho = random_density((2, 3), None, make_rng(3), labels=("A", "B"))
    ch = partial_trace_channel([2, 3], [1])
    assert np.allclose(ch(rho.matrix), rho.ptrace("B").matrix, atol=1e-12)


def test_measurement_channel_outputs_probabilities():
    M = Povm.projective(np.eye(2))
    out = measurement_channel(M)(np.diag([0.2, 0.8]))
    assert np.allclose(out, np.diag([0.2, 0.8]))


def test_mix_channels_is_convex_combination():
    a, b = identity_channel(2), dephasing_channel(2)
    m = mix_channels([0.25, 0.75], [a, b])
    x = np.full((2, 2), 0.5)
    assert np.allclose(m(x), 0.25 * a(x) + 0.75 * b(x))


def test_diamond_of_unitaries():
    # ‖U·U† - V·V†‖⋄ = 2 sin(θ/2) for U = I, V = diag(1, e^{iθ})
    for theta in (0.3, 1.0, np.pi / 2, np.pi):
        V = np.diag([1.0, np.exp(1j * theta)])
        dist = diamond_distance(identity_channel(2), unitary_channel(V), restarts=8)
        assert dist.lower <= dist.upper + 1e-9
        assert dist.lower == pytest.approx(2 * np.sin(theta / 2), abs=1e-6)


def test_identity_vs_dephasing_diamond():
    dist = diamond_distance(identity_channel(2), dephasing_channel(2), restarts=8)
    assert dist.lower == pytest.approx(1.0, abs=1e-6)
    assert dist.upper >= 1.0 - 1e-12


def test_diamond_mismatched_dims():
    with pytest.raises(ValidationError):
        diamond_upper(identity_channel(2), identity_channel(3))


def test_ec_distance_is_monotone_in_energy():
    rng = make_rng(5)
    phi, psi = random_channel(4, 2, 2, rng), random_channel(4, 2, 2, rng)
    H = number_operator(4)
    vals = [ec_distance(phi, psi, H, E, restarts=6).lower for E in (0.5, 1.0, 2.0)]
    assert vals[0] <= vals[1] + 1e-12 <= vals[2] + 2e-12
    assert vals[-1] <= diamond_upper(phi, psi) + 1e-9


@given(seeds)
def test_complementary_output_spectrum_matches_for_pure_input(seed):
    phi, _, rng = _random_pair(seed)
    v = rng.standard_normal(phi.d_in) + 1j * rng.standard_normal(phi.d_in)
    rho = np.outer(v, v.conj()) / np.vdot(v, v).real
    s_b = von_neumann_entropy(DensityMatrix(phi(rho), validate=False))
    s_e = von_neumann_entropy(DensityMatrix(complementary(phi)(rho), validate=False))
    assert s_b == pytest.approx(s_e, abs=1e-10)


@given(seeds)
def test_stinespring_is_isometry(seed):
    phi, _, _ = _random_pair(seed)
    V = stinespring(phi).V
    assert np.allclose(V.conj().T @ V, np.eye(phi.d_in), atol=1e-12)


@given(seeds)
def test_mutual_information_two_ways(seed):
    phi, _, rng = _random_pair(seed)
    rho = random_density(phi.d_in, int(rng.integers(1, phi.d_in + 1)), rng)
    assert channel_mutual_information(phi, rho) == pytest.approx(
        channel_mutual_information_purified(phi, rho), abs=1e-10)
    assert entropy_exchange(phi, rho) == pytest.approx(entropy_exchange_purified(phi, rho), abs=1e-10)
    assert channel_mutual_information(phi, rho) <= 2 * von_neumann_entropy(rho) + 1e-12


@settings(max_examples=15)
@given(seeds)
def test_diamond_bracket_is_ordered(seed):
    phi, psi, _ = _random_pair(seed)
    dist = diamond_distance(phi, psi, restarts=4, seed=seed)
    assert 0.0 <= dist.lower <= dist.upper + 1e-9
    assert dist.upper <= 2.0 + 1e-9


@settings(max_examples=5)
@given(seeds)
def test_bures_bracket_is_ordered(seed):
    phi, psi, _ = _random_pair(seed)
    b = bures_distance_channels(phi, psi, restarts=3, seed=seed, refine=1)
    assert 0.0 <= b.lower <= b.upper + 1e-9


@given(seeds)
def test_local_channel_application(seed):
    phi, _, rng = _random_pair(seed)
    rho = random_density((phi.d_in, 2), None, rng, labels=("A", "R"))
    out = apply_local(phi, rho, "A", "B")
    assert out.labels == ("B", "R")
    assert np.allclose(out.ptrace("R").matrix, rho.ptrace("R").matrix, atol=1e-12)
    assert np.allclose(out.ptrace("B").matrix, phi(rho.ptrace("A").matrix), atol=1e-12)


@given(seeds, st.integers(2, 4))
def test_unitary_mixture_is_unital(seed, n):
    ch = random_unitary_mixture(3, n, make_rng(seed))
    assert np.allclose(ch(np.eye(3)), np.eye(3), atol=1e-12)


def test_depolarizing_identity_limit():
    assert np.allclose(choi_matrix(depolarizing_channel(2, 0.0)), choi_matrix(identity_channel(2)))
    assert channel_mutual_information(depolarizing_semigroup(0.0), np.eye(2) / 2) == pytest.approx(2 * LN2)
