"""Dense linear algebra, labelled multipartite states and seeded generators.

All states are dense complex matrices with an explicit tensor structure:
``dims`` lists subsystem dimensions in tensor order and ``labels`` gives each
factor a name (``"A"``, ``"B"``, ...). Objects are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERM_TOL = 1e-12
EIG_CLAMP = 1e-10
TRACE_TOL = 1e-10
SUPPORT_TOL = 1e-10
MAX_DIM = 4096


class ValidationError(ValueError):
    """Raised when an input violates a type invariant."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol * scale)


def herm_eig(m: np.ndarray, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending eigenvalues and a unitary whose columns are the
    eigenvectors. The matrix is symmetrised before LAPACK is called.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if check and not is_hermitian(m, 1e-10):
        raise ValidationError("matrix is not Hermitian")
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def clamp_spectrum(w: np.ndarray, tol: float = EIG_CLAMP) -> np.ndarray:
    """Clamp roundoff negativity in ``[-tol, 0]`` to zero; reject worse."""
    if w.size and w.min() < -tol:
        raise ValidationError(f"eigenvalue {w.min():.3e} below -{tol:g}")
    return np.clip(w, 0.0, None)


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = herm_eig(m, check=False)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values."""
    m = np.asarray(m)
    if m.ndim == 2 and m.shape[0] == m.shape[1] and is_hermitian(m, 1e-10):
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def op_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


# ---------------------------------------------------------------------------
# array-level partial trace / permutation


def ptrace_array(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of an operator on ``dims`` keeping factor indices ``keep``.

    The kept factors appear in the order given by ``keep``.
    """
    dims = list(dims)
    n = len(dims)
    keep = list(keep)
    t = np.asarray(m).reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # einsum letters: rows i, cols i+n; traced factors share the row letter
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    for i in traced:
        letters[i + n] = letters[i]
    out = [letters[i] for i in keep] + [letters[i + n] for i in keep]
    expr = "".join(letters) + "->" + "".join(out)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return np.einsum(expr, t).reshape(d, d)


def permute_array(m: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator: new factor j is old ``order[j]``."""
    dims = list(dims)
    n = len(dims)
    order = list(order)
    t = np.asarray(m).reshape(dims + dims)
    t = t.transpose(order + [i + n for i in order])
    d = int(np.prod(dims))
    return t.reshape(d, d)


# ---------------------------------------------------------------------------
# labelled states


def _check_layout(dims: Sequence[int], labels: Sequence[str]) -> tuple[tuple[int, ...], tuple[str, ...]]:
    dims = tuple(int(d) for d in dims)
    labels = tuple(str(lab) for lab in labels)
    if len(dims) != len(labels):
        raise ValidationError("dims and labels have different lengths")
    if any(d < 1 for d in dims):
        raise ValidationError("dimensions must be positive")
    if len(set(labels)) != len(labels):
        raise ValidationError(f"duplicate labels {labels}")
    if int(np.prod(dims)) > MAX_DIM:
        raise ValidationError(f"total dimension exceeds {MAX_DIM}")
    return dims, labels


def default_labels(n: int) -> tuple[str, ...]:
    return tuple("ABCDEFGH"[:n]) if n <= 8 else tuple(f"S{i}" for i in range(n))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density operator on a labelled tensor product.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix of size ``prod(dims)``.
    dims : sequence of int, optional
        Subsystem dimensions; defaults to a single factor.
    labels : sequence of str, optional
        Subsystem names; defaults to ``A, B, C, ...``.
    validate : bool
        Check hermiticity, positivity and unit trace.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __init__(self, matrix, dims=None, labels=None, validate: bool = True):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"density matrix must be square, got {m.shape}")
        if dims is None:
            dims = (m.shape[0],)
        if labels is None:
            labels = default_labels(len(dims))
        dims, labels = _check_layout(dims, labels)
        if int(np.prod(dims)) != m.shape[0]:
            raise ValidationError(f"dims {dims} do not match matrix size {m.shape[0]}")
        if validate:
            if not is_hermitian(m):
                raise ValidationError("density matrix is not Hermitian")
            if abs(np.trace(m).real - 1.0) > TRACE_TOL:
                raise ValidationError(f"trace {np.trace(m).real!r} differs from 1")
            w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
            if w[0] < -EIG_CLAMP:
                raise ValidationError(f"negative eigenvalue {w[0]:.3e}")
        object.__setattr__(self, "matrix", _frozen(0.5 * (m + m.conj().T)))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown label {label!r}; have {self.labels}") from None

    def indices(self, group) -> list[int]:
        return [self.index(lab) for lab in resolve_labels(group, self.labels)]

    def eigvals(self) -> np.ndarray:
        return clamp_spectrum(np.linalg.eigvalsh(self.matrix))

    def ptrace(self, keep) -> "DensityMatrix":
        return partial_trace(self, keep)

    def relabel(self, labels: Sequence[str]) -> "DensityMatrix":
        return DensityMatrix(self.matrix, self.dims, labels, validate=False)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims}, labels={self.labels})"


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit vector on a labelled tensor product."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __init__(self, amplitudes, dims=None, labels=None, validate: bool = True):
        v = np.asarray(amplitudes, dtype=complex).ravel()
        if dims is None:
            dims = (v.size,)
        if labels is None:
            labels = default_labels(len(dims))
        dims, labels = _check_layout(dims, labels)
        if int(np.prod(dims)) != v.size:
            raise ValidationError(f"dims {dims} do not match vector size {v.size}")
        if validate and abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValidationError("state vector is not normalised")
        object.__setattr__(self, "amplitudes", _frozen(v))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    def density(self) -> DensityMatrix:
        v = self.amplitudes
        return DensityMatrix(np.outer(v, v.conj()), self.dims, self.labels, validate=False)

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims}, labels={self.labels})"


def resolve_labels(group, labels: Sequence[str]) -> list[str]:
    """Turn ``"AC"``, ``"A"`` or ``["A", "C"]`` into a list of labels."""
    if isinstance(group, str):
        if group in labels:
            return [group]
        out = list(group)
    else:
        out = [str(g) for g in group]
    for lab in out:
        if lab not in labels:
            raise ValidationError(f"unknown label {lab!r}; have {tuple(labels)}")
    if len(set(out)) != len(out):
        raise ValidationError(f"repeated label in {group!r}")
    return out


def as_density(state) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.density()
    return DensityMatrix(state)


def partial_trace(rho, keep) -> DensityMatrix:
    """Reduce ``rho`` to the subsystems named in ``keep`` (kept in tensor order)."""
    rho = as_density(rho)
    labs = resolve_labels(keep, rho.labels)
    if not labs:
        raise ValidationError("keep must be non-empty")
    idx = sorted(rho.index(lab) for lab in labs)
    m = ptrace_array(rho.matrix, rho.dims, idx)
    return DensityMatrix(m, [rho.dims[i] for i in idx], [rho.labels[i] for i in idx], validate=False)


def permute(rho, order) -> DensityMatrix:
    """Reorder the tensor factors of ``rho`` to the label order ``order``."""
    rho = as_density(rho)
    labs = resolve_labels(order, rho.labels)
    if len(labs) != len(rho.labels):
        raise ValidationError("permutation must list every label")
    idx = [rho.index(lab) for lab in labs]
    m = permute_array(rho.matrix, rho.dims, idx)
    return DensityMatrix(m, [rho.dims[i] for i in idx], labs, validate=False)


def tensor(a, b):
    """Tensor product of two states (labelled) or two plain operators."""
    if isinstance(a, (DensityMatrix, PureState)) or isinstance(b, (DensityMatrix, PureState)):
        a, b = as_density(a), as_density(b)
        labels = a.labels + b.labels
        if len(set(labels)) != len(labels):
            raise ValidationError(f"label clash in tensor product: {labels}")
        return DensityMatrix(np.kron(a.matrix, b.matrix), a.dims + b.dims, labels, validate=False)
    return np.kron(np.asarray(a), np.asarray(b))


def purify(rho, env_label: str = "R") -> PureState:
    """Canonical purification on ``X ⊗ R`` with ``dim R = rank(rho)``.

    Uses the eigendecomposition ``rho = Σ λ_j |e_j><e_j|`` and returns
    ``Σ √λ_j |e_j>|j>``.
    """
    rho = as_density(rho)
    w, v = herm_eig(rho.matrix, check=False)
    w = clamp_spectrum(w)
    keep = w > 1e-12
    w, v = w[keep][::-1], v[:, keep][:, ::-1]
    r = w.size
    psi = (v * np.sqrt(w)).reshape(rho.dim, r)
    psi = psi / np.linalg.norm(psi)
    label = env_label
    while label in rho.labels:
        label += "'"
    return PureState(psi.ravel(), rho.dims + (r,), rho.labels + (label,), validate=False)


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``‖√ρ √σ‖₁²``."""
    a, b = _mat(rho), _mat(sigma)
    if a.shape != b.shape:
        raise ValidationError("dimension mismatch")
    s = np.linalg.svd(psd_sqrt(a) @ psd_sqrt(b), compute_uv=False)
    return float(min(1.0, np.sum(s) ** 2))


def bures_distance(rho, sigma) -> float:
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * np.sqrt(fidelity(rho, sigma)))))


def trace_distance(rho, sigma) -> float:
    a, b = _mat(rho), _mat(sigma)
    if a.shape != b.shape:
        raise ValidationError("dimension mismatch")
    return 0.5 * trace_norm(a - b)


def _mat(x) -> np.ndarray:
    if isinstance(x, DensityMatrix):
        return x.matrix
    if isinstance(x, PureState):
        return x.density().matrix
    return np.asarray(x, dtype=complex)


# ---------------------------------------------------------------------------
# seeded generators


def make_rng(seed, *stream) -> np.random.Generator:
    """PCG64 generator keyed by ``seed`` and an optional integer stream path.

    Identical keys give identical streams on every platform.
    """
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(s) for s in stream]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary via QR with phase correction."""
    if d < 1:
        raise ValidationError("dimension must be positive")
    q, r = np.linalg.qr(_ginibre(rng, d, d))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_isometry(d_out: int, d_in: int, rng: np.random.Generator) -> np.ndarray:
    if d_out < d_in:
        raise ValidationError(f"no isometry from dimension {d_in} into {d_out}")
    return random_unitary(d_out, rng)[:, :d_in]


def random_pure(dims, rng: np.random.Generator, labels=None) -> PureState:
    dims = (int(dims),) if np.isscalar(dims) else tuple(dims)
    v = _ginibre(rng, int(np.prod(dims)), 1).ravel()
    return PureState(v / np.linalg.norm(v), dims, labels, validate=False)


def random_density(dims, rank: int | None, rng: np.random.Generator, labels=None) -> DensityMatrix:
    """Partial trace of a Haar-random pure state on ``dims ⊗ C^rank``."""
    dims = (int(dims),) if np.isscalar(dims) else tuple(dims)
    d = int(np.prod(dims))
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise ValidationError(f"rank must lie in [1, {d}]")
    g = _ginibre(rng, d, rank)
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(m, dims, labels, validate=False)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = _ginibre(rng, d, d)
    return 0.5 * (g + g.conj().T)
