"""Quantum channels in Kraus form.

A :class:`Channel` stores Kraus operators ``K_k`` (``d_out × d_in``). The
Stinespring isometry is ``V = Σ_k K_k ⊗ |k>_E`` (output first, environment
second), so the complementary channel has the environment basis indexed by
the Kraus index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    DensityMatrix,
    PureState,
    ValidationError,
    as_density,
    herm_eig,
    kron_all,
    make_rng,
    psd_sqrt,
    ptrace_array,
    purify,
    random_isometry,
    random_pure,
    random_unitary,
    resolve_labels,
)
from .entropy import mutual_information, von_neumann_entropy


@dataclass(frozen=True, eq=False)
class Channel:
    """CPTP map ``ρ ↦ Σ_k K_k ρ K_k†``."""

    kraus: tuple[np.ndarray, ...]
    d_in: int
    d_out: int

    def __init__(self, kraus: Sequence[np.ndarray], validate: bool = True):
        ks = [np.array(k, dtype=complex, ndmin=2) for k in kraus]
        if not ks:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ks[0].shape
        if any(k.shape != shape for k in ks):
            raise ValidationError("Kraus operators must share a shape")
        d_out, d_in = shape
        if validate:
            s = sum(k.conj().T @ k for k in ks)
            if np.max(np.abs(s - np.eye(d_in))) > 1e-10:
                raise ValidationError("Kraus operators are not trace preserving")
        for k in ks:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", tuple(ks))
        object.__setattr__(self, "d_in", d_in)
        object.__setattr__(self, "d_out", d_out)

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)

    @property
    def stack(self) -> np.ndarray:
        """Kraus operators as an array of shape ``(n, d_out, d_in)``."""
        return np.stack(self.kraus)

    def __call__(self, m: np.ndarray) -> np.ndarray:
        """Apply to a raw (possibly unnormalised) ``d_in × d_in`` matrix."""
        ks = self.stack
        return np.einsum("kij,jl,kml->im", ks, m, ks.conj())

    def adjoint(self, m: np.ndarray) -> np.ndarray:
        """Heisenberg-picture map ``X ↦ Σ K† X K``."""
        ks = self.stack
        return np.einsum("kji,jl,klm->im", ks.conj(), m, ks)

    def __repr__(self) -> str:
        return f"Channel(d_in={self.d_in}, d_out={self.d_out}, n_kraus={self.n_kraus})"


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    V: np.ndarray
    d_out: int
    d_env: int


@dataclass(frozen=True)
class ChannelDistance:
    """Certified bracket ``lower ≤ true value ≤ upper``."""

    lower: float
    upper: float
    kind: str
    params: dict | None = None
    witness: np.ndarray | None = field(default=None, repr=False, compare=False)


# ---------------------------------------------------------------------------
# application


def apply(channel: Channel, rho, label: str | None = None) -> DensityMatrix:
    """Output state ``Φ(ρ)`` of a single-system input."""
    rho = as_density(rho)
    if rho.dim != channel.d_in:
        raise ValidationError(f"channel expects dimension {channel.d_in}, got {rho.dim}")
    lab = label if label is not None else (rho.labels[0] if len(rho.labels) == 1 else "B")
    return DensityMatrix(channel(rho.matrix), (channel.d_out,), (lab,), validate=False)


def apply_local_array(channel: Channel, m: np.ndarray, dims: Sequence[int], target: int) -> np.ndarray:
    """Apply ``channel`` to factor ``target`` of a raw operator on ``dims``."""
    dims = list(dims)
    if dims[target] != channel.d_in:
        raise ValidationError(f"channel expects dimension {channel.d_in}, factor has {dims[target]}")
    left = int(np.prod(dims[:target]))
    right = int(np.prod(dims[target + 1:]))
    t = np.asarray(m).reshape(left, channel.d_in, right, left, channel.d_in, right)
    ks = channel.stack
    out = np.einsum("kij,ajbclm,knl->aibcnm", ks, t, ks.conj(), optimize=True)
    d = left * channel.d_out * right
    return out.reshape(d, d)


def apply_local(channel: Channel, rho, target: str, new_label: str | None = None) -> DensityMatrix:
    """``(Φ ⊗ id)(ρ)`` with ``Φ`` acting on the factor labelled ``target``."""
    rho = as_density(rho)
    i = rho.index(target)
    m = apply_local_array(channel, rho.matrix, rho.dims, i)
    dims = list(rho.dims)
    dims[i] = channel.d_out
    labels = list(rho.labels)
    if new_label is not None:
        labels[i] = new_label
    return DensityMatrix(m, dims, labels, validate=False)


def compose(outer: Channel, inner: Channel) -> Channel:
    """``outer ∘ inner``; Kraus operators ``L_j K_k`` with environment index ``(j, k)``."""
    if outer.d_in != inner.d_out:
        raise ValidationError("dimension mismatch in composition")
    return Channel([l @ k for l in outer.kraus for k in inner.kraus], validate=False)


def stinespring(channel: Channel) -> StinespringIsometry:
    ks = channel.stack  # (e, b, a)
    V = ks.transpose(1, 0, 2).reshape(channel.d_out * channel.n_kraus, channel.d_in)
    return StinespringIsometry(V, channel.d_out, channel.n_kraus)


def complementary(channel: Channel) -> Channel:
    """``Φ̂(ρ) = Tr_B VρV†``; output basis indexed by the Kraus index."""
    ks = channel.stack  # F_b[e, a] = K_e[b, a]
    return Channel(list(ks.transpose(1, 0, 2)), validate=False)


def choi_matrix(channel: Channel) -> np.ndarray:
    """Unnormalised Choi matrix ``Σ_ij |i><j| ⊗ Φ(|i><j|)`` (input ⊗ output)."""
    ks = channel.stack
    vecs = ks.transpose(0, 2, 1).reshape(channel.n_kraus, -1)  # |K>> = Σ_i |i> ⊗ K|i>
    return vecs.T @ vecs.conj()


# ---------------------------------------------------------------------------
# information measures


def channel_mutual_information(channel: Channel, rho) -> float:
    """``I(Φ,ρ) = S(ρ) + S(Φ(ρ)) - S(Φ̂(ρ))``."""
    m = as_density(rho).matrix
    val = (von_neumann_entropy(DensityMatrix(m, validate=False))
           + von_neumann_entropy(DensityMatrix(channel(m), validate=False))
           - von_neumann_entropy(DensityMatrix(complementary(channel)(m), validate=False)))
    return max(val, 0.0)


def channel_mutual_information_purified(channel: Channel, rho) -> float:
    """``I(B:R)`` of ``(Φ ⊗ id_R)(ρ̂)`` for the canonical purification ``ρ̂``."""
    psi = purify(as_density(rho).relabel(("A",)))
    out = apply_local(channel, psi.density(), "A", new_label="B")
    return mutual_information(out, "B", "R")


def entropy_exchange(channel: Channel, rho) -> float:
    """``S(Φ,ρ) = S(Φ̂(ρ))``."""
    m = as_density(rho).matrix
    return von_neumann_entropy(DensityMatrix(complementary(channel)(m), validate=False))


def entropy_exchange_purified(channel: Channel, rho) -> float:
    """Entropy of ``(Φ ⊗ id_R)(ρ̂)``."""
    psi = purify(as_density(rho).relabel(("A",)))
    return von_neumann_entropy(apply_local(channel, psi.density(), "A"))


# ---------------------------------------------------------------------------
# distances


def _check_pair(phi: Channel, psi: Channel) -> None:
    if (phi.d_in, phi.d_out) != (psi.d_in, psi.d_out):
        raise ValidationError("channels have different input/output dimensions")


def diamond_upper(phi: Channel, psi: Channel) -> float:
    """``min{2, ‖Tr_B |J(Φ-Ψ)|‖_∞}``; the dual-feasible certificate ``Y = |J|``.

    The cap is the trivial bound ``‖Φ-Ψ‖_⋄ ≤ ‖Φ‖_⋄ + ‖Ψ‖_⋄ = 2``.
    """
    _check_pair(phi, psi)
    J = choi_matrix(phi) - choi_matrix(psi)
    w, v = herm_eig(J, check=False)
    absJ = (v * np.abs(w)) @ v.conj().T
    reduced = ptrace_array(absJ, [phi.d_in, phi.d_out], [0])
    return min(2.0, float(np.max(np.linalg.eigvalsh(0.5 * (reduced + reduced.conj().T)))))


def _local_on_first(ks: np.ndarray, m: np.ndarray, d_in: int, d_ref: int) -> np.ndarray:
    """``(Σ_k K_k ⊗ I) m (K_k ⊗ I)†`` for Kraus stack ``ks``."""
    d_out = ks.shape[1]
    t = m.reshape(d_in, d_ref, d_in, d_ref)
    out = np.einsum("kij,jrls,kml->irms", ks, t, ks.conj(), optimize=True)
    return out.reshape(d_out * d_ref, d_out * d_ref)


def _adjoint_on_first(ks: np.ndarray, w: np.ndarray, d_out: int, d_ref: int) -> np.ndarray:
    d_in = ks.shape[2]
    t = w.reshape(d_out, d_ref, d_out, d_ref)
    out = np.einsum("kji,jrls,klm->irms", ks.conj(), t, ks, optimize=True)
    return out.reshape(d_in * d_ref, d_in * d_ref)


def _difference_output(phi: Channel, psi: Channel, vec: np.ndarray) -> np.ndarray:
    d = phi.d_in
    rho = np.outer(vec, vec.conj())
    return _local_on_first(phi.stack, rho, d, d) - _local_on_first(psi.stack, rho, d, d)


def _ascent(phi: Channel, psi: Channel, vec: np.ndarray, max_iter: int = 500,
            rtol: float = 1e-9) -> tuple[float, np.ndarray]:
    """Alternating maximisation of ``Tr W (Θ⊗id)(ψ)`` over ``ψ`` and ``‖W‖ ≤ 1``.

    With ``W`` the sign of the output and ``ψ`` the top eigenvector of
    ``(Θ†⊗id)(W)`` every step is non-decreasing in ``‖(Θ⊗id)(ψ)‖₁``.
    """
    d = phi.d_in
    ka, kb = phi.stack, psi.stack
    best = -1.0
    for _ in range(max_iter):
        Y = _difference_output(phi, psi, vec)
        w, v = np.linalg.eigh(0.5 * (Y + Y.conj().T))
        val = float(np.sum(np.abs(w)))
        if val <= best * (1.0 + rtol) + 1e-300:
            best = max(best, val)
            break
        best = val
        W = (v * np.sign(w)) @ v.conj().T
        Z = _adjoint_on_first(ka, W, phi.d_out, d) - _adjoint_on_first(kb, W, phi.d_out, d)
        _, zv = np.linalg.eigh(0.5 * (Z + Z.conj().T))
        vec = zv[:, -1]
    return best, vec


def _ascent_states(phi: Channel, psi: Channel, restarts: int, seed: int) -> list[tuple[float, np.ndarray]]:
    d = phi.d_in
    out = []
    for r in range(restarts):
        rng = make_rng(seed, r)
        v0 = random_pure(d * d, rng).amplitudes.copy()
        out.append(_ascent(phi, psi, v0))
    return out


def diamond_distance(phi: Channel, psi: Channel, restarts: int = 64, seed: int = 0) -> ChannelDistance:
    """Bracket on ``‖Φ-Ψ‖_⋄`` with reference dimension ``d_in``.

    ``lower`` is the best multistart ascent value; ``upper`` the Choi-matrix
    certificate. ``witness`` is the maximising input vector on ``A ⊗ R``.
    """
    _check_pair(phi, psi)
    upper = diamond_upper(phi, psi)
    runs = _ascent_states(phi, psi, restarts, seed)
    val, vec = max(runs, key=lambda t: t[0])
    return ChannelDistance(min(val, upper) if val <= upper + 1e-9 else val, upper, "diamond", None, vec)


def _pair_fidelity_distance(phi: Channel, psi: Channel, vec: np.ndarray) -> float:
    d = phi.d_in
    rho = np.outer(vec, vec.conj())
    a = _local_on_first(phi.stack, rho, d, d)
    b = _local_on_first(psi.stack, rho, d, d)
    s = np.linalg.svd(psd_sqrt(a) @ psd_sqrt(b), compute_uv=False)
    f = min(1.0, float(np.sum(s)) ** 2)
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * np.sqrt(f))))


def bures_distance_channels(phi: Channel, psi: Channel, restarts: int = 64, seed: int = 0,
                            refine: int = 4) -> ChannelDistance:
    """Bracket on ``β(Φ,Ψ) = sup_ρ β(Φ⊗id(ρ), Ψ⊗id(ρ))``.

    Candidates are the diamond-ascent endpoints and Haar states; the best few
    are refined by a local search. ``upper = √(diamond upper)``.
    """
    from scipy.optimize import minimize

    _check_pair(phi, psi)
    upper = float(np.sqrt(diamond_upper(phi, psi)))
    d2 = phi.d_in ** 2
    cands = [v for _, v in _ascent_states(phi, psi, restarts, seed)]
    rng = make_rng(seed, 10**6)
    cands += [random_pure(d2, rng).amplitudes.copy() for _ in range(restarts)]
    vals = [_pair_fidelity_distance(phi, psi, v) for v in cands]
    order = np.argsort(vals)[::-1]
    best, best_vec = vals[order[0]], cands[order[0]]

    def neg(x):
        v = x[:d2] + 1j * x[d2:]
        n = np.linalg.norm(v)
        return 0.0 if n < 1e-12 else -_pair_fidelity_distance(phi, psi, v / n)

    for i in order[:refine]:
        v = cands[i]
        res = minimize(neg, np.concatenate([v.real, v.imag]), method="Nelder-Mead",
                       options={"maxiter": 400 * d2, "xatol": 1e-10, "fatol": 1e-12})
        if -res.fun > best:
            x = res.x[:d2] + 1j * res.x[d2:]
            best, best_vec = -res.fun, x / np.linalg.norm(x)
    return ChannelDistance(min(best, upper), upper, "bures", None, best_vec)


def _hamiltonian_matrix(H) -> np.ndarray:
    m = getattr(H, "matrix", H)
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = np.diag(m)
    return m


def ec_distance(phi: Channel, psi: Channel, H, E: float, kind: str = "diamond",
                restarts: int = 64, seed: int = 0, path_points: int = 41) -> ChannelDistance:
    """Energy-constrained bracket (``kind`` is ``"diamond"`` or ``"bures"``).

    The candidate pool does not depend on ``E``: ascent endpoints and Haar
    states, each joined to a ground-energy anchor ``|g>_A|0>_R`` by a path of
    normalised interpolations. ``lower`` is the best value over candidates
    with ``Tr H ρ_A ≤ E``, so it is monotone in ``E``. ``upper`` is the
    unconstrained certificate.
    """
    _check_pair(phi, psi)
    if kind not in ("diamond", "bures"):
        raise ValidationError(f"unknown distance kind {kind!r}")
    Hm = _hamiltonian_matrix(H)
    d = phi.d_in
    if Hm.shape != (d, d):
        raise ValidationError("Hamiltonian does not act on the channel input")
    hw, hv = herm_eig(Hm)
    if E < hw[0]:
        raise ValidationError(f"energy {E} below ground energy {hw[0]}")
    anchor = np.kron(hv[:, 0], np.eye(d)[0])
    HA = np.kron(Hm, np.eye(d))

    if kind == "diamond":
        value = lambda v: float(np.sum(np.abs(np.linalg.eigvalsh(_difference_output(phi, psi, v)))))
        upper = diamond_upper(phi, psi)
    else:
        value = lambda v: _pair_fidelity_distance(phi, psi, v)
        upper = float(np.sqrt(diamond_upper(phi, psi)))

    starts = [v for _, v in _ascent_states(phi, psi, restarts, seed)]
    rng = make_rng(seed, 10**6)
    starts += [random_pure(d * d, rng).amplitudes.copy() for _ in range(restarts)]
    best, best_vec = 0.0, anchor
    for v in starts:
        for lam in np.linspace(0.0, 1.0, path_points):
            x = (1.0 - lam) * v + lam * anchor
            n = np.linalg.norm(x)
            if n < 1e-12:
                continue
            x = x / n
            if float(np.real(x.conj() @ HA @ x)) > E:
                continue
            val = value(x)
            if val > best:
                best, best_vec = val, x
    return ChannelDistance(min(best, upper), upper, "ec_" + kind, {"E": float(E)}, best_vec)


# ---------------------------------------------------------------------------
# constructors


def identity_channel(d: int) -> Channel:
    return Channel([np.eye(d)], validate=False)


def unitary_channel(U: np.ndarray) -> Channel:
    return Channel([np.asarray(U)])


def random_channel(d_in: int, d_out: int, d_env: int, rng: np.random.Generator) -> Channel:
    """Stinespring compression of a Haar isometry ``C^{d_in} → C^{d_out} ⊗ C^{d_env}``."""
    if d_out * d_env < d_in:
        raise ValidationError("d_out * d_env must be at least d_in")
    V = random_isometry(d_out * d_env, d_in, rng)
    ks = V.reshape(d_out, d_env, d_in).transpose(1, 0, 2)
    return Channel(list(ks), validate=False)


def random_unitary_mixture(d: int, n: int, rng: np.random.Generator) -> Channel:
    """Uniform mixture of ``n`` Haar unitaries (a bistochastic channel)."""
    return Channel([random_unitary(d, rng) / np.sqrt(n) for _ in range(n)], validate=False)


def erasure_channel(d: int, p: float) -> Channel:
    """``Φ_p(ρ) = (1-p)ρ ⊕ p Tr ρ |τ₀><τ₀|`` into ``C^{d+1}``, with ``τ₀`` the last basis vector."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError("erasure probability must lie in [0, 1]")
    J = np.eye(d + 1, d)
    ks = [np.sqrt(1.0 - p) * J]
    for j in range(d):
        k = np.zeros((d + 1, d))
        k[d, j] = np.sqrt(p)
        ks.append(k)
    return Channel(ks, validate=False)


def dephasing_channel(d: int, basis: np.ndarray | None = None) -> Channel:
    """``ρ ↦ Σ_k <φ_k|ρ|φ_k> |φ_k><φ_k|`` for the columns ``φ_k`` of ``basis``."""
    U = np.eye(d) if basis is None else np.asarray(basis, dtype=complex)
    if U.shape != (d, d) or np.max(np.abs(U.conj().T @ U - np.eye(d))) > 1e-10:
        raise ValidationError("basis must be a unitary matrix")
    return Channel([np.outer(U[:, k], U[:, k].conj()) for k in range(d)], validate=False)


def weyl_operators(d: int) -> list[np.ndarray]:
    """``X^a Z^b`` for ``a, b = 0..d-1`` (Pauli group for ``d = 2``)."""
    X = np.roll(np.eye(d), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b)
            for a in range(d) for b in range(d)]


def depolarizing_channel(d: int, q: float) -> Channel:
    """``ρ ↦ (1-q)ρ + q Tr ρ I/d`` for ``q ∈ [0, 1]``."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError("depolarizing parameter must lie in [0, 1]")
    ws = weyl_operators(d)
    ks = [np.sqrt(1.0 - q + q / d**2) * ws[0]] + [np.sqrt(q) / d * w for w in ws[1:]]
    return Channel(ks, validate=False)


def depolarizing_semigroup(t: float, d: int = 2) -> Channel:
    """``Φ_t = e^{-t} id + (1-e^{-t}) Tr(·) I/d``; ``Φ_t ∘ Φ_s = Φ_{t+s}``."""
    if t < 0:
        raise ValidationError("time must be nonnegative")
    return depolarizing_channel(d, -np.expm1(-t))


def measurement_channel(povm) -> Channel:
    """q-c channel ``ρ ↦ Σ_i Tr(M_i ρ) |i><i|``."""
    elements = getattr(povm, "elements", povm)
    n = len(elements)
    ks = []
    for i, M in enumerate(elements):
        w, v = herm_eig(np.asarray(M, dtype=complex), check=False)
        for lam, vec in zip(w, v.T):
            if lam > 1e-14:
                k = np.zeros((n, vec.size), dtype=complex)
                k[i] = np.sqrt(lam) * vec.conj()
                ks.append(k)
    return Channel(ks)


def partial_trace_channel(dims: Sequence[int], keep: Sequence[int]) -> Channel:
    """Channel ``X_1 ⊗ ... ⊗ X_n → ⊗_{i ∈ keep} X_i`` (kept factors in order)."""
    dims = list(dims)
    keep = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    ks = []
    for idx in np.ndindex(*[dims[i] for i in traced]):
        bra = [None] * len(dims)
        for pos, i in enumerate(traced):
            bra[i] = np.eye(dims[i])[idx[pos]][None, :]
        for i in keep:
            bra[i] = np.eye(dims[i])
        ks.append(kron_all(bra).reshape(d_keep, -1))
    return Channel(ks, validate=False)


def mix_channels(weights: Sequence[float], channels: Sequence[Channel]) -> Channel:
    """Convex combination ``Σ w_i Φ_i``."""
    ks = []
    for w, ch in zip(weights, channels):
        if w < 0:
            raise ValidationError("negative mixing weight")
        ks += [np.sqrt(w) * k for k in ch.kraus]
    return Channel(ks)
