"""Measurement-based and optimisation-based correlation measures.

Entropy reduction, one-way classical correlation and discord (unoptimised
and optimised), entanglement of formation, constrained Holevo capacities and
detection of quantum-classical states.

Optimised quantities return an :class:`OptResult` whose ``kind`` states
which side of the true optimum the value is guaranteed to lie on: every
reported value is attained by an explicit POVM or ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _stiefel
from .channels import Channel, complementary, measurement_channel, stinespring
from .core import (
    DensityMatrix,
    PureState,
    ValidationError,
    as_density,
    herm_eig,
    make_rng,
    permute_array,
    ptrace_array,
    random_isometry,
)
from .entropy import (
    Ensemble,
    conditional_mutual_information,
    holevo_chi,
    mutual_information,
    relative_entropy,
    von_neumann_entropy,
)

ZERO_PROB = 1e-12
LOWER = "lower_bound_of_sup"
UPPER = "upper_bound_of_inf"


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive operator-valued measure on the subsystem ``label``."""

    elements: tuple[np.ndarray, ...]
    label: str

    def __init__(self, elements: Sequence[np.ndarray], label: str = "B", validate: bool = True):
        els = [np.array(m, dtype=complex, ndmin=2) for m in elements]
        if not els:
            raise ValidationError("a POVM needs at least one element")
        d = els[0].shape[0]
        if any(m.shape != (d, d) for m in els):
            raise ValidationError("POVM elements must be square and share a shape")
        if validate:
            if np.max(np.abs(sum(els) - np.eye(d))) > 1e-10:
                raise ValidationError("POVM elements do not sum to the identity")
            for m in els:
                if np.max(np.abs(m - m.conj().T)) > 1e-10 or np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] < -1e-10:
                    raise ValidationError("POVM element is not positive semidefinite")
        for m in els:
            m.setflags(write=False)
        object.__setattr__(self, "elements", tuple(els))
        object.__setattr__(self, "label", str(label))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_frame(cls, T: np.ndarray, label: str = "B") -> "Povm":
        """Rank-one POVM ``M_i = t_i t_i†`` from the columns of ``T`` (``TT† = I``)."""
        T = np.asarray(T, dtype=complex)
        return cls([np.outer(T[:, i], T[:, i].conj()) for i in range(T.shape[1])], label)

    @classmethod
    def projective(cls, basis: np.ndarray, label: str = "B") -> "Povm":
        return cls.from_frame(np.asarray(basis), label)

    def is_rank_one(self, tol: float = 1e-10) -> bool:
        return all(np.sum(np.linalg.eigvalsh(m) > tol) <= 1 for m in self.elements)

    def __repr__(self) -> str:
        return f"Povm(n={len(self)}, dim={self.dim}, label={self.label!r})"


@dataclass
class OptResult:
    """Optimiser output: ``value`` is attained by ``argument``."""

    value: float
    kind: str
    argument: object = field(repr=False)
    restarts: int
    converged: bool
    details: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind, "restarts": self.restarts,
                "converged": self.converged}


def random_povm(d: int, k: int, rng: np.random.Generator, label: str = "B",
                rank_one: bool = True) -> Povm:
    """Naimark compression of a Haar basis.

    With ``rank_one`` (requires ``k ≥ d``) the elements are ``t_i t_i†`` for
    the columns of the first ``d`` rows of a Haar unitary of size ``k``;
    otherwise ``M_i = V†(|i><i| ⊗ I)V`` for a Haar isometry ``V``.
    """
    if d < 1 or k < 1:
        raise ValidationError("POVM needs positive dimension and outcome count")
    if rank_one:
        if k < d:
            raise ValidationError("a rank-one POVM needs at least d outcomes")
        return Povm.from_frame(random_isometry(k, d, rng).T, label)
    V = random_isometry(k * d, d, rng).reshape(k, d, d)
    return Povm([V[i].conj().T @ V[i] for i in range(k)], label)


# ---------------------------------------------------------------------------
# unoptimised quantities


def _bipartition(omega: DensityMatrix, measured: str | None) -> tuple[np.ndarray, int, int, tuple, tuple]:
    """Matrix with the measured factor moved last, plus (d_rest, d_meas)."""
    if measured is None:
        measured = omega.labels[-1]
    j = omega.index(measured)
    order = [i for i in range(len(omega.dims)) if i != j] + [j]
    m = permute_array(omega.matrix, omega.dims, order)
    rest_dims = tuple(omega.dims[i] for i in order[:-1])
    rest_labels = tuple(omega.labels[i] for i in order[:-1])
    return m, int(np.prod(rest_dims)), omega.dims[j], rest_dims, rest_labels


def _measured_label(omega: DensityMatrix, povm: Povm | None, measured: str | None) -> str:
    if measured is not None:
        return measured
    if povm is not None and povm.label in omega.labels:
        return povm.label
    return omega.labels[-1]


def _check_povm(povm: Povm, d: int) -> None:
    if povm.dim != d:
        raise ValidationError(f"POVM acts on dimension {povm.dim}, subsystem has {d}")


def entropy_reduction(omega, povm: Povm, measured: str | None = None) -> float:
    """``ER(ω, I⊗M) = S(ω) - Σ p_i S(ω_i)`` with ``ω_i ∝ (I⊗√M_i) ω (I⊗√M_i)``."""
    omega = as_density(omega)
    measured = _measured_label(omega, povm, measured)
    m, da, db, _, _ = _bipartition(omega, measured)
    _check_povm(povm, db)
    total = von_neumann_entropy(DensityMatrix(m, validate=False))
    acc = 0.0
    for M in povm.elements:
        w, v = herm_eig(M, check=False)
        root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
        K = np.kron(np.eye(da), root)
        post = K @ m @ K.conj().T
        p = float(np.trace(post).real)
        if p > ZERO_PROB:
            acc += p * von_neumann_entropy(DensityMatrix(post / p, validate=False))
    return total - acc


def _posteriors(m: np.ndarray, da: int, db: int, elements) -> list[np.ndarray]:
    t = m.reshape(da, db, da, db)
    return [np.einsum("abcd,db->ac", t, M) for M in elements]


def posterior_ensemble(omega, povm: Povm, measured: str | None = None) -> Ensemble:
    """``{p_i, ω_A^i}`` with ``p_i ω_A^i = Tr_B (I⊗M_i) ω``; null outcomes dropped."""
    omega = as_density(omega)
    measured = _measured_label(omega, povm, measured)
    m, da, db, rdims, rlabels = _bipartition(omega, measured)
    _check_povm(povm, db)
    probs, states = [], []
    for s in _posteriors(m, da, db, povm.elements):
        p = float(np.trace(s).real)
        if p > ZERO_PROB:
            probs.append(p)
            states.append(DensityMatrix(s / p, rdims, rlabels, validate=False))
    probs = np.array(probs)
    return Ensemble(probs / probs.sum(), states, validate=False)


def unopt_classical_correlation(omega, povm: Povm, measured: str | None = None) -> float:
    """``C_B^M(ω) = χ`` of the posterior ensemble."""
    return holevo_chi(posterior_ensemble(omega, povm, measured))


def unopt_discord(omega, povm: Povm, measured: str | None = None) -> float:
    """``D_B^M(ω) = I(A:B) - C_B^M(ω)``."""
    omega = as_density(omega)
    measured = _measured_label(omega, povm, measured)
    rest = [lab for lab in omega.labels if lab != measured]
    return mutual_information(omega, rest, [measured]) - unopt_classical_correlation(omega, povm, measured)


def unopt_discord_dilated(omega, povm: Povm, measured: str | None = None) -> float:
    """``I(A:F|E)`` of ``(I⊗V_M) ω (I⊗V_M)†`` for the Stinespring isometry of the q-c channel."""
    omega = as_density(omega)
    measured = _measured_label(omega, povm, measured)
    m, da, db, _, _ = _bipartition(omega, measured)
    _check_povm(povm, db)
    iso = stinespring(measurement_channel(povm))
    K = np.kron(np.eye(da), iso.V)
    big = K @ m @ K.conj().T
    state = DensityMatrix(big, (da, iso.d_out, iso.d_env), ("A", "E", "F"), validate=False)
    return conditional_mutual_information(state, "A", "F", "E")


# ---------------------------------------------------------------------------
# shared objective pieces


def _entropy_terms(sig: np.ndarray) -> tuple[float, np.ndarray]:
    """``Σ_k S̃(σ_k)`` and ``L_k = -ln(σ_k / Tr σ_k)`` for a stack of PSD matrices.

    ``S̃(σ) = Tr σ · S(σ / Tr σ)`` is homogeneous of degree one and
    ``dS̃ = Tr L dσ``.
    """
    w, v = np.linalg.eigh(0.5 * (sig + np.conj(np.swapaxes(sig, 1, 2))))
    w = np.clip(w, 0.0, None)
    p = w.sum(axis=1)
    live = p > 1e-300
    ratio = np.where(live[:, None], w / np.where(live, p, 1.0)[:, None], 0.0)
    logr = np.log(np.clip(ratio, 1e-16, None))
    f = float(-np.sum(np.where(ratio > 0, w * np.log(np.where(ratio > 0, ratio, 1.0)), 0.0)))
    L = np.einsum("kij,kj,klj->kil", v, -logr * live[:, None], v.conj())
    return f, L


def _frame_start_from_basis(U: np.ndarray, k: int) -> np.ndarray:
    """Frame with ``k`` columns realising the projective measurement in ``U``."""
    d = U.shape[0]
    reps = int(np.ceil(k / d))
    cols = [U[:, i % d] for i in range(k)]
    counts = np.bincount(np.arange(k) % d, minlength=d)
    T = np.stack(cols, axis=1) / np.sqrt(counts[np.arange(k) % d])
    return T


def _bloch_basis(theta: float, phi: float) -> np.ndarray:
    a = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    b = np.array([-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)])
    return np.stack([a, b], axis=1)


# ---------------------------------------------------------------------------
# optimised classical correlation and discord


def _cb_objective(t: np.ndarray):
    """Average posterior entropy for a state tensor ``t[a, b, a', b']``."""
    def fun(T):
        sig = np.einsum("bk,abcd,dk->kac", T.conj(), t, T, optimize=True)
        f, L = _entropy_terms(sig)
        W = np.einsum("kca,abcd->kbd", L, t, optimize=True)
        return f, np.einsum("kbd,dk->bk", W, T)
    return fun


def classical_correlation(omega, measured: str | None = None, restarts: int = 32, seed: int = 0,
                          outcomes: int | None = None, starts: Sequence = (),
                          patience: int | None = None) -> OptResult:
    """One-way classical correlation ``C_B`` (measurement on ``measured``).

    Maximises the Holevo quantity of the posterior ensemble over rank-one
    POVMs with ``outcomes`` elements (default ``d_B²``, which also covers
    every smaller outcome count). Warm starts: the eigenbasis of ``ω_B``, a
    coarse Bloch-sphere grid for qubits and any POVMs passed in ``starts``.
    """
    omega = as_density(omega)
    measured = measured if measured is not None else omega.labels[-1]
    m, da, db, _, _ = _bipartition(omega, measured)
    k = outcomes if outcomes is not None else db * db
    if k < db:
        raise ValidationError("need at least d_B outcomes")
    t = m.reshape(da, db, da, db)
    fun = _cb_objective(t)
    rho_b = ptrace_array(m, [da, db], [1])
    init = [_frame_start_from_basis(herm_eig(rho_b, check=False)[1], k)]
    if db == 2:
        grid = [(th, ph) for th in np.linspace(0, np.pi, 7) for ph in np.linspace(0, 2 * np.pi, 8, endpoint=False)]
        scored = sorted(grid, key=lambda a: fun(_frame_start_from_basis(_bloch_basis(*a), 2))[0])
        init += [_frame_start_from_basis(_bloch_basis(*a), k) for a in scored[:2]]
    for s in starts:
        init.append(_frame_from_povm(s, k))
    rng = make_rng(seed, 1)
    res = _stiefel.minimize_frame(fun, db, k, rng, restarts=restarts, starts=init, patience=patience)
    povm = Povm.from_frame(res.frame, measured)
    value = unopt_classical_correlation(omega, povm, measured)
    return OptResult(value, LOWER, povm, res.restarts, res.converged, {"runs": res.values})


def _frame_from_povm(povm, k: int) -> np.ndarray:
    """Frame with ``k`` columns for a rank-one POVM (padding by splitting elements)."""
    if isinstance(povm, np.ndarray):
        T = povm
    else:
        cols = []
        for M in povm.elements:
            w, v = np.linalg.eigh(M)
            for lam, vec in zip(w, v.T):
                if lam > 1e-12:
                    cols.append(np.sqrt(lam) * vec)
        T = np.stack(cols, axis=1)
    while T.shape[1] < k:
        j = int(np.argmax(np.linalg.norm(T, axis=0)))
        T = np.concatenate([T, T[:, j:j + 1] / np.sqrt(2)], axis=1)
        T[:, j] /= np.sqrt(2)
    if T.shape[1] > k:
        raise ValidationError("starting POVM has more elements than the outcome cap")
    return T


def discord(omega, measured: str | None = None, restarts: int = 32, seed: int = 0,
            outcomes: int | None = None, starts: Sequence = (), patience: int | None = None) -> OptResult:
    """Quantum discord ``D_B = I(A:B) - C_B``; an upper bound of the infimum."""
    omega = as_density(omega)
    measured = measured if measured is not None else omega.labels[-1]
    cb = classical_correlation(omega, measured, restarts, seed, outcomes, starts, patience)
    rest = [lab for lab in omega.labels if lab != measured]
    val = mutual_information(omega, rest, [measured]) - cb.value
    return OptResult(val, UPPER, cb.argument, cb.restarts, cb.converged, cb.details)


def projective_grid_classical_correlation(omega, measured: str | None = None, step_deg: float = 2.0) -> float:
    """Brute-force ``max`` over projective qubit measurements on a Bloch grid."""
    omega = as_density(omega)
    measured = measured if measured is not None else omega.labels[-1]
    m, da, db, _, _ = _bipartition(omega, measured)
    if db != 2:
        raise ValidationError("grid search is for a qubit measured system")
    fun = _cb_objective(m.reshape(da, 2, da, 2))
    best = np.inf
    for th in np.deg2rad(np.arange(0.0, 180.0 + 1e-9, step_deg)):
        for ph in np.deg2rad(np.arange(0.0, 360.0, step_deg)):
            best = min(best, fun(_bloch_basis(th, ph))[0])
            if th == 0.0:
                break
    rho_a = ptrace_array(m, [da, db], [0])
    return von_neumann_entropy(DensityMatrix(rho_a, validate=False)) - best


# ---------------------------------------------------------------------------
# decompositions: entanglement of formation and constrained capacities


def _decomposition_objective(A: np.ndarray, dk: int, dt: int):
    """Average entropy of the ``dk`` factor over decompositions ``x_k = A t_k``.

    ``A`` has shape ``(dk·dt, r)``; the kept factor comes first.
    """
    def fun(T):
        X = (A @ T).T.reshape(-1, dk, dt)
        sig = X @ np.conj(np.swapaxes(X, 1, 2))
        f, L = _entropy_terms(sig)
        G = (L @ X).reshape(X.shape[0], -1)
        return f, A.conj().T @ G.T
    return fun


def _spectral_factor(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w, v = herm_eig(m, check=False)
    keep = w > 1e-12
    w, v = np.clip(w[keep], 0.0, None)[::-1], v[:, keep][:, ::-1]
    return v * np.sqrt(w), w, v


def _min_marginal_entropy(m: np.ndarray, dk: int, dt: int, restarts: int, seed: int,
                          members: int | None, starts: Sequence = (),
                          patience: int | None = None) -> tuple[_stiefel.StiefelResult, np.ndarray]:
    A, w, _ = _spectral_factor(m)
    r = w.size
    k = members if members is not None else r * r
    k = max(k, r)
    fun = _decomposition_objective(A, dk, dt)
    init = [np.eye(r, k) if k == r else _frame_start_from_basis(np.eye(r), k)]
    init += [np.asarray(s) for s in starts]
    rng = make_rng(seed, 2)
    if r == 1:
        T = np.ones((1, 1), dtype=complex)
        res = _stiefel.StiefelResult(fun(T)[0], T, 1, True, [fun(T)[0]])
    else:
        res = _stiefel.minimize_frame(fun, r, k, rng, restarts=restarts, starts=init, patience=patience)
    return res, A


def _pure_ensemble(A: np.ndarray, T: np.ndarray, dims, labels) -> Ensemble:
    X = (A @ T).T
    p = np.sum(np.abs(X) ** 2, axis=1)
    live = p > ZERO_PROB
    states = [PureState(x / np.sqrt(q), dims, labels, validate=False).density() for x, q in zip(X[live], p[live])]
    return Ensemble(p[live] / p[live].sum(), states, validate=False)


def _decomposition_starts(starts: Sequence, A: np.ndarray, perm, dims, k: int) -> tuple[list[np.ndarray], int]:
    """Frames reproducing the pure refinements of the ensembles in ``starts``."""
    frames = []
    for ens in starts:
        vecs = []
        for p, s in zip(ens.probs, ens.states):
            m = permute_array(s.matrix, dims, perm)
            w, v = np.linalg.eigh(m)
            vecs += [np.sqrt(lam * p) * vec for lam, vec in zip(w, v.T) if lam * p > 1e-14]
        T = np.linalg.lstsq(A, np.stack(vecs, axis=1), rcond=None)[0]
        frames.append(T)
    k = max([k] + [T.shape[1] for T in frames])
    return [_frame_from_povm(T, k) for T in frames], k


def entanglement_of_formation(omega, keep: str | None = None, restarts: int = 32, seed: int = 0,
                              members: int | None = None, starts: Sequence = (),
                              patience: int | None = None) -> OptResult:
    """``E_F(ω) = min Σ p_k S(Tr_C φ_k)`` over pure decompositions.

    Decompositions are ``√ω = Σ``-rotations by right-unitary ``m × r`` mixing
    matrices, ``r = rank ω`` and ``m = r²`` by default. ``keep`` names the
    subsystem whose entropy is averaged (default: the first label).
    ``starts`` may hold ensembles averaging to ``ω``; their pure refinements
    are used as warm starts.
    """
    omega = as_density(omega)
    if len(omega.labels) != 2:
        raise ValidationError("entanglement of formation needs a bipartite state")
    keep = keep if keep is not None else omega.labels[0]
    i = omega.index(keep)
    perm = [i, 1 - i]
    m = permute_array(omega.matrix, omega.dims, perm)
    dk, dt = omega.dims[i], omega.dims[1 - i]
    A, w, _ = _spectral_factor(m)
    r = w.size
    k = max(r, members if members is not None else r * r)
    frames, k = _decomposition_starts(starts, A, perm, omega.dims, k)
    res, A = _min_marginal_entropy(m, dk, dt, restarts, seed, k, frames, patience)
    dims = (dk, dt)
    labels = (omega.labels[i], omega.labels[1 - i])
    ens = _pure_ensemble(A, res.frame, dims, labels)
    value = float(sum(p * von_neumann_entropy(s.ptrace(keep)) for p, s in zip(ens.probs, ens.states)))
    return OptResult(value, UPPER, ens, res.restarts, res.converged, {"runs": res.values})


def chi_A(omega, keep: str | None = None, restarts: int = 32, seed: int = 0,
          members: int | None = None, starts: Sequence = (),
          patience: int | None = None) -> OptResult:
    """Constrained Holevo capacity of the partial trace onto ``keep`` at ``ω``.

    The optimal decomposition comes from :func:`entanglement_of_formation`;
    it is scored both as ``Σ p_k D([ω_k]_A ‖ ω_A)`` and as ``S(ω_A) - E_F(ω)``.
    ``value`` is the larger (both are attained lower bounds) and both are
    kept in ``details``.
    """
    omega = as_density(omega)
    keep = keep if keep is not None else omega.labels[0]
    rho_a = omega.ptrace(keep)
    s_a = von_neumann_entropy(rho_a)
    ef = entanglement_of_formation(omega, keep, restarts, seed, members, starts, patience)
    route_ii = s_a - ef.value
    route_i = float(sum(p * relative_entropy(s.ptrace(keep), rho_a)
                        for p, s in zip(ef.argument.probs, ef.argument.states) if p > ZERO_PROB))
    return OptResult(max(route_i, route_ii), LOWER, ef.argument, ef.restarts, ef.converged,
                     {"route_divergence": route_i, "route_identity": route_ii})


def _dilated_input(channel: Channel, rho: np.ndarray) -> np.ndarray:
    V = stinespring(channel).V
    return V @ rho @ V.conj().T


def constrained_holevo_capacity(channel: Channel, rho, restarts: int = 32, seed: int = 0,
                                members: int | None = None, starts: Sequence = ()) -> OptResult:
    """``C̄(Φ,ρ) = sup χ(Φ(μ))`` over pure-state ensembles ``μ`` averaging to ``ρ``.

    The ensemble is searched through decompositions of ``ρ`` (``m = r²``
    members by default). ``starts`` may hold input ensembles (their members
    must decompose ``ρ``) used as warm starts.
    """
    rho = as_density(rho)
    m = rho.matrix
    if m.shape[0] != channel.d_in:
        raise ValidationError("state does not match the channel input")
    big = _dilated_input(channel, m)
    out = channel(m)
    s_out = von_neumann_entropy(DensityMatrix(out, validate=False))
    A_in, w, _ = _spectral_factor(m)
    r = w.size
    k = max(r, members if members is not None else r * r)
    frames = [_frame_from_ensemble(ens, A_in, k) for ens in starts]
    V = stinespring(channel).V
    A = V @ A_in
    fun = _decomposition_objective(A, channel.d_out, channel.n_kraus)
    init = [np.eye(r, k) if k == r else _frame_start_from_basis(np.eye(r), k)] + frames
    if r == 1:
        T = np.ones((1, 1), dtype=complex)
        res = _stiefel.StiefelResult(fun(T)[0], T, 1, True, [fun(T)[0]])
    else:
        res = _stiefel.minimize_frame(fun, r, k, make_rng(seed, 4), restarts=restarts, starts=init)
    ens = _pure_ensemble(A_in, res.frame, (channel.d_in,), ("A",))
    value = holevo_chi(ens.map(lambda s: DensityMatrix(channel(s.matrix), validate=False)))
    return OptResult(value, LOWER, ens, res.restarts, res.converged,
                     {"runs": res.values, "output_entropy": s_out, "dilated": big.shape})


def _frame_from_ensemble(ens: Ensemble, A_in: np.ndarray, k: int) -> np.ndarray:
    """Frame ``T`` with ``A_in T`` reproducing the (pure) members of ``ens``."""
    vecs = []
    for p, s in zip(ens.probs, ens.states):
        w, v = np.linalg.eigh(s.matrix)
        for lam, vec in zip(w, v.T):
            if lam * p > 1e-14:
                vecs.append(np.sqrt(lam * p) * vec)
    X = np.stack(vecs, axis=1)
    T = np.linalg.lstsq(A_in, X, rcond=None)[0]
    T = _stiefel.polar(T)[0] if T.shape[1] >= T.shape[0] else T
    return _frame_from_povm(T, k) if T.shape[1] < k else T[:, :k]


def _capacity_terms(channel: Channel, G: np.ndarray):
    """Scale-invariant ``-χ`` of the ensemble ``{g_k}`` and its gradient in ``Ḡ``."""
    ks = channel.stack
    n = float(np.sum(np.abs(G) ** 2))
    out_avg = channel(G @ G.conj().T)
    # member outputs Φ(g g†) = Σ_j (K_j g)(K_j g)†
    Kg = np.einsum("jba,ak->kbj", ks, G)
    outs = Kg @ np.conj(np.swapaxes(Kg, 1, 2))
    f0, L0 = _entropy_terms(out_avg[None])
    fk, Lk = _entropy_terms(outs)
    N = -f0 + fk
    adj = lambda L: np.einsum("jba,bc,jcd->ad", ks.conj(), L, ks)
    grad_N = -adj(L0[0]) @ G
    grad_N += np.einsum("jba,kbc,jcd,dk->ak", ks.conj(), Lk, ks, G, optimize=True)
    return N / n, grad_N / n - N * G / n**2


def _basis_starts(d: int, k: int, rng: np.random.Generator, count: int) -> list[np.ndarray]:
    starts = [_frame_start_from_basis(np.eye(d), k)]
    from .core import random_unitary
    starts += [_frame_start_from_basis(random_unitary(d, rng), k) for _ in range(count)]
    return starts


def holevo_capacity(channel: Channel, restarts: int = 32, seed: int = 0,
                    members: int | None = None) -> OptResult:
    """Unconstrained Holevo capacity ``C̄(Φ) = sup χ(Φ(μ))`` over pure ensembles.

    Searches ensembles of ``m = d_in²`` members directly; warm starts include
    uniform ensembles over the computational basis and random orthonormal
    bases.
    """
    d = channel.d_in
    k = members if members is not None else d * d
    rng = make_rng(seed, 5)
    starts = _basis_starts(d, k, rng, 4)
    res = _stiefel.minimize_free(lambda G: _capacity_terms(channel, G), d, k, rng,
                                 restarts=restarts, starts=starts)
    ens = _ensemble_from_columns(res.frame, d)
    value = holevo_chi(ens.map(lambda s: DensityMatrix(channel(s.matrix), validate=False)))
    return OptResult(value, LOWER, ens, res.restarts, res.converged, {"runs": res.values})


def _ensemble_from_columns(G: np.ndarray, d: int) -> Ensemble:
    p = np.sum(np.abs(G) ** 2, axis=0)
    live = p > ZERO_PROB * p.sum()
    states = [PureState(G[:, i] / np.sqrt(p[i]), (d,), ("A",), validate=False).density()
              for i in np.flatnonzero(live)]
    return Ensemble(p[live] / p[live].sum(), states, validate=False)


def _ec_terms(channel: Channel, G: np.ndarray, H: np.ndarray, E: float, e0: float, g0: np.ndarray):
    """``-χ`` of ``{g_k}`` mixed with the ground state just enough to meet ``Tr Hρ̄ ≤ E``."""
    n = float(np.sum(np.abs(G) ** 2))
    Y = G / np.sqrt(n)
    HY = H @ Y
    e = float(np.real(np.sum(Y.conj() * HY)))
    if e > E and e - e0 > 1e-15:
        lam = (e - E) / (e - e0)
        dlam = (E - e0) / (e - e0) ** 2
    else:
        lam, dlam = 0.0, 0.0
    c, s = np.sqrt(1.0 - lam), np.sqrt(lam)
    Yp = np.concatenate([c * Y, s * g0[:, None]], axis=1)
    f, gp = _capacity_terms(channel, Yp)
    gam = c * gp[:, :-1]
    if lam > 0.0:
        r1 = float(np.real(np.sum(gp[:, :-1].conj() * Y)))
        r2 = float(np.real(gp[:, -1].conj() @ g0))
        a = dlam * (-r1 / (2 * c) if c > 1e-12 else 0.0) + dlam * (r2 / (2 * s) if s > 1e-12 else 0.0)
        gam = gam + 2.0 * a * HY
    gam_g = (gam - np.real(np.sum(gam.conj() * Y)) * Y) / np.sqrt(n)
    return f, gam_g, lam


def holevo_capacity_ec(channel: Channel, H, E: float, restarts: int = 32, seed: int = 0,
                       members: int | None = None) -> OptResult:
    """Energy-constrained Holevo capacity ``sup {χ(Φ(μ)) : Tr H ρ̄(μ) ≤ E}``.

    Any ensemble with too much energy is projected onto the constraint by
    adding the ground state with the minimal weight that meets it.
    """
    Hm = np.asarray(getattr(H, "matrix", H), dtype=complex)
    if Hm.ndim == 1:
        Hm = np.diag(Hm)
    d = channel.d_in
    if Hm.shape != (d, d):
        raise ValidationError("Hamiltonian does not act on the channel input")
    hw, hv = herm_eig(Hm)
    if E < hw[0]:
        raise ValidationError(f"energy {E} below ground energy {hw[0]}")
    g0 = hv[:, 0]
    k = members if members is not None else d * d
    rng = make_rng(seed, 6)
    starts = _basis_starts(d, k, rng, 4)
    fun = lambda G: _ec_terms(channel, G, Hm, E, hw[0], g0)[:2]
    res = _stiefel.minimize_free(fun, d, k, rng, restarts=restarts, starts=starts)
    G = res.frame
    lam = _ec_terms(channel, G, Hm, E, hw[0], g0)[2]
    Y = np.concatenate([np.sqrt(1 - lam) * G / np.linalg.norm(G), np.sqrt(lam) * g0[:, None]], axis=1)
    ens = _ensemble_from_columns(Y, d)
    value = holevo_chi(ens.map(lambda s: DensityMatrix(channel(s.matrix), validate=False)))
    energy = float(np.real(np.trace(Hm @ ens.average().matrix)))
    return OptResult(value, LOWER, ens, res.restarts, res.converged, {"energy": energy, "runs": res.values})


# ---------------------------------------------------------------------------
# ensemble-induced measurement on a purifying system


def ensemble_povm(rho, ensemble: Ensemble, label: str = "R") -> Povm:
    """POVM ``M^μ`` on the purifying system of :func:`qcorr.core.purify`.

    ``Tr_R (I⊗M_i) ρ̂ = p_i ρ_i`` for the members of ``μ`` (which must
    average to ``ρ``). ``M_i`` is the transpose, in the purification's
    eigenbasis, of ``p_i ρ^{-1/2} ρ_i ρ^{-1/2}`` restricted to the support.
    """
    rho = as_density(rho)
    w, v = herm_eig(rho.matrix, check=False)
    keep = w > 1e-12
    w, v = w[keep][::-1], v[:, keep][:, ::-1]
    avg = ensemble.average().matrix
    if np.max(np.abs(avg - rho.matrix)) > 1e-8:
        raise ValidationError("ensemble does not average to the given state")
    scale = 1.0 / np.sqrt(w)
    els = []
    for p, s in zip(ensemble.probs, ensemble.states):
        mt = p * (v.conj().T @ s.matrix @ v) * np.outer(scale, scale)
        els.append(mt.T)
    rest = np.eye(w.size) - sum(els)
    if np.max(np.abs(rest)) > 1e-9:
        els.append(rest)
    return Povm(els, label, validate=False)


# ---------------------------------------------------------------------------
# q-c detection and closed forms


def is_qc_state(omega, tol: float = 1e-8, measured: str | None = None) -> tuple[bool, np.ndarray | None]:
    """Whether ``ω = Σ_k ω_k ⊗ |k><k|`` for some orthonormal basis of ``measured``.

    Forms the blocks ``B_mn = <m_A|ω|n_A>`` on the measured system; ``ω`` is
    quantum-classical iff these are normal and commute pairwise. The basis is
    found by diagonalising a generic Hermitian combination and is returned
    only when every block is diagonal in it within ``tol``.
    """
    omega = as_density(omega)
    measured = measured if measured is not None else omega.labels[-1]
    m, da, db, _, _ = _bipartition(omega, measured)
    blocks = m.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db, db)
    scale = max(1.0, float(np.max(np.abs(blocks))))
    comm = np.einsum("iab,jbc->ijac", blocks, blocks) - np.einsum("jab,ibc->ijac", blocks, blocks)
    if np.max(np.abs(comm)) > tol * scale:
        return False, None
    adj = np.conj(np.swapaxes(blocks, 1, 2))
    if np.max(np.abs(blocks @ adj - adj @ blocks)) > tol * scale:
        return False, None
    rng = make_rng(0x9C, da, db)
    c1, c2 = rng.standard_normal(da * da), rng.standard_normal(da * da)
    X = np.einsum("i,iab->ab", c1, blocks + adj) + 1j * np.einsum("i,iab->ab", c2, blocks - adj)
    _, U = np.linalg.eigh(0.5 * (X + X.conj().T))
    rot = np.einsum("ba,ibc,cd->iad", U.conj(), blocks, U)
    off = rot - np.einsum("iaa->ia", rot)[:, :, None] * np.eye(db)
    if np.max(np.abs(off)) > max(tol, 1e-10) * scale * 10:
        return False, None
    return True, U


def wootters_entanglement_of_formation(omega) -> float:
    """Closed-form two-qubit ``E_F`` through the concurrence (nats)."""
    m = as_density(omega).matrix
    if m.shape != (4, 4):
        raise ValidationError("Wootters formula needs a two-qubit state")
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    tilde = yy @ m.conj() @ yy
    ev = np.sqrt(np.clip(np.sort(np.linalg.eigvals(m @ tilde).real)[::-1], 0.0, None))
    c = max(0.0, ev[0] - ev[1] - ev[2] - ev[3])
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    from .entropy import binary_entropy
    return binary_entropy(min(1.0, x))
