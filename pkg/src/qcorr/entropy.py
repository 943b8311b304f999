"""Entropies, relative entropy, mutual informations and the Holevo quantity.

Natural logarithms throughout. Functions accept :class:`DensityMatrix`
objects; subsystems are addressed by label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    SUPPORT_TOL,
    DensityMatrix,
    ValidationError,
    as_density,
    clamp_spectrum,
    herm_eig,
    partial_trace,
    resolve_labels,
)

CMI_CLAMP = 1e-8


class NumericalConsistencyError(ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""


def _eta_sum(w: np.ndarray) -> float:
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


def entropy_of_spectrum(w: np.ndarray) -> float:
    return _eta_sum(clamp_spectrum(np.asarray(w, dtype=float)))


def von_neumann_entropy(rho) -> float:
    """``S(ρ) = -Tr ρ ln ρ`` over the clamped spectrum."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else as_density(rho).matrix
    return entropy_of_spectrum(np.linalg.eigvalsh(m))


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    if p.size and p.min() < -1e-12:
        raise ValidationError("negative probability")
    return _eta_sum(np.clip(p, 0.0, None))


def binary_entropy(p: float) -> float:
    """``h₂(p) = -p ln p - (1-p) ln(1-p)``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p={p} outside [0, 1]")
    return _eta_sum(np.array([p, 1.0 - p])) + 0.0  # no -0.0 at the endpoints


def g_func(eps: float) -> float:
    """``g(ε) = (ε+1) ln(ε+1) - ε ln ε`` with ``g(0) = 0``."""
    eps = float(eps)
    if not eps >= 0.0:
        raise ValidationError(f"eps={eps} must be nonnegative")
    if eps == 0.0:
        return 0.0
    return float((eps + 1.0) * np.log1p(eps) - eps * np.log(eps))


def relative_entropy(rho, sigma) -> float:
    """``D(ρ‖σ)``; returns ``inf`` when ``supp ρ ⊄ supp σ``.

    Support is the span of eigenvectors with eigenvalue above 1e-10.
    """
    a, b = as_density(rho).matrix, as_density(sigma).matrix
    if a.shape != b.shape:
        raise ValidationError("dimension mismatch")
    wa, va = herm_eig(a, check=False)
    wb, vb = herm_eig(b, check=False)
    wa, wb = clamp_spectrum(wa), clamp_spectrum(wb)
    sa, sb = wa > SUPPORT_TOL, wb > SUPPORT_TOL
    # part of supp ρ outside supp σ
    if sa.any():
        va_s = va[:, sa]
        ker_b = vb[:, ~sb]
        if ker_b.size and np.linalg.norm(ker_b.conj().T @ va_s) > 1e-6:
            return float("inf")
    # Σ_i λ_i ln λ_i − Σ_i λ_i Σ_j |<a_i|b_j>|² ln μ_j over supports
    overlap = np.abs(va[:, sa].conj().T @ vb[:, sb]) ** 2
    lam = wa[sa]
    val = float(np.sum(lam * np.log(lam)) - lam @ overlap @ np.log(wb[sb]))
    return max(val, 0.0) if val > -1e-10 else val


def _split(rho: DensityMatrix, a, b) -> tuple[list[str], list[str]]:
    if a is None and b is None:
        if len(rho.labels) != 2:
            raise ValidationError("bipartite labelling required; pass the two groups explicitly")
        return [rho.labels[0]], [rho.labels[1]]
    la, lb = resolve_labels(a, rho.labels), resolve_labels(b, rho.labels)
    if set(la) & set(lb):
        raise ValidationError("subsystem groups overlap")
    return la, lb


def mutual_information(rho, a=None, b=None) -> float:
    """``I(A:B) = S(ρ_A) + S(ρ_B) - S(ρ_AB)``.

    With no groups given the state must be bipartite. Other subsystems are
    traced out.
    """
    rho = as_density(rho)
    la, lb = _split(rho, a, b)
    s_ab = von_neumann_entropy(partial_trace(rho, la + lb))
    val = (von_neumann_entropy(partial_trace(rho, la))
           + von_neumann_entropy(partial_trace(rho, lb)) - s_ab)
    return max(val, 0.0)


def conditional_mutual_information(rho, a=None, b=None, c=None) -> float:
    """``I(A:B|C) = S(AC) + S(BC) - S(ABC) - S(C)``.

    Negative values within 1e-8 are clamped; larger negativity raises.
    """
    rho = as_density(rho)
    if a is None and b is None and c is None:
        if len(rho.labels) != 3:
            raise ValidationError("tripartite labelling required")
        a, b, c = rho.labels
    la, lb, lc = (resolve_labels(x, rho.labels) for x in (a, b, c))
    if set(la) & set(lb) or set(la) & set(lc) or set(lb) & set(lc):
        raise ValidationError("subsystem groups overlap")
    S = lambda g: von_neumann_entropy(partial_trace(rho, g))
    val = S(la + lc) + S(lb + lc) - S(la + lb + lc) - (S(lc) if lc else 0.0)
    if val < -CMI_CLAMP:
        raise NumericalConsistencyError(f"conditional mutual information {val:.3e} < 0")
    return max(val, 0.0)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Finite ensemble ``{p_k, ρ_k}`` of states on a common space."""

    probs: np.ndarray
    states: tuple[DensityMatrix, ...]

    def __init__(self, probs, states, validate: bool = True):
        p = np.asarray(probs, dtype=float).ravel()
        states = tuple(as_density(s) for s in states)
        if len(states) != p.size or p.size == 0:
            raise ValidationError("ensemble needs matching, nonempty probs and states")
        if validate:
            if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-10:
                raise ValidationError("probabilities must be nonnegative and sum to 1")
            shapes = {s.matrix.shape for s in states}
            if len(shapes) != 1:
                raise ValidationError("ensemble states live on different spaces")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)

    def average(self) -> DensityMatrix:
        m = sum(p * s.matrix for p, s in zip(self.probs, self.states))
        s0 = self.states[0]
        return DensityMatrix(m, s0.dims, s0.labels, validate=False)

    def map(self, fn) -> "Ensemble":
        """Apply ``fn`` to every member (e.g. a channel)."""
        return Ensemble(self.probs, [fn(s) for s in self.states], validate=False)


def holevo_chi(ens: Ensemble) -> float:
    """``χ = S(ρ̄) - Σ p_k S(ρ_k)``."""
    s_avg = von_neumann_entropy(ens.average())
    val = s_avg - sum(p * von_neumann_entropy(s) for p, s in zip(ens.probs, ens.states) if p > 0)
    return max(val, 0.0)


def holevo_chi_divergence(ens: Ensemble) -> float:
    """Relative-entropy form ``Σ p_k D(ρ_k‖ρ̄)``."""
    avg = ens.average()
    return float(sum(p * relative_entropy(s, avg) for p, s in zip(ens.probs, ens.states) if p > 0))
