"""Gibbs states, growth functions and closed-form continuity bounds.

Hamiltonians are finite diagonal truncations given by their spectrum. The
energy-constrained bounds take a growth function ``F`` or ``G`` that is
evaluated pointwise; :func:`cb_min` minimises the parametric bound
``CB_t(E, ε | C, D)`` over ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .channels import Channel, complementary, apply_local_array
from .core import DensityMatrix, ValidationError, trace_norm
from .entropy import entropy_of_spectrum, g_func
from .measures import is_qc_state

LN2 = float(np.log(2.0))


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Diagonal Hamiltonian with ascending nonnegative ``eigenvalues``."""

    eigenvalues: np.ndarray

    def __init__(self, eigenvalues):
        e = np.asarray(eigenvalues, dtype=float).ravel()
        if e.size == 0 or e.min() < 0 or np.any(np.diff(e) < 0):
            raise ValidationError("eigenvalues must be nonnegative and ascending")
        e.setflags(write=False)
        object.__setattr__(self, "eigenvalues", e)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    @property
    def ground(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.eigenvalues).astype(complex)

    @property
    def mean(self) -> float:
        """``Tr H / d``, the energy of the maximally mixed state."""
        return float(self.eigenvalues.mean())


def number_operator(dim: int = 32) -> Hamiltonian:
    """Truncated ``a†a`` of a single mode."""
    return Hamiltonian(np.arange(dim, dtype=float))


def _gibbs_weights(e: np.ndarray, beta: float) -> np.ndarray:
    x = np.exp(-beta * (e - e[0]))
    return x / x.sum()


def _mean_energy(e: np.ndarray, beta: float) -> float:
    return float(_gibbs_weights(e, beta) @ e)


def gibbs_beta(H: Hamiltonian, E: float, iters: int = 200) -> float:
    """Inverse temperature with ``Tr Hγ = E`` for ``E ∈ (E₀, Tr H/d]``."""
    e = H.eigenvalues
    if not (H.ground < E <= H.mean + 1e-12):
        raise ValidationError(f"energy {E} outside ({H.ground}, {H.mean}]")
    if E >= H.mean:
        return 0.0
    lo, hi = 0.0, 1.0
    while _mean_energy(e, hi) > E:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise ValidationError("could not bracket the inverse temperature")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _mean_energy(e, mid) > E:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def gibbs_state(H: Hamiltonian, E: float) -> tuple[float, DensityMatrix]:
    """``(β, γ_H(E))`` with ``γ = e^{-βH} / Tr e^{-βH}``."""
    beta = gibbs_beta(H, E)
    return beta, DensityMatrix(np.diag(_gibbs_weights(H.eigenvalues, beta)), validate=False)


def f_H(H: Hamiltonian, E: float) -> float:
    """``F_H(E) = sup {S(ρ) : Tr Hρ ≤ E}``.

    Equals ``S(γ_H(E))`` on ``(E₀, Tr H/d]``, ``ln m(E₀)`` at the ground
    energy and ``ln d`` above the mean energy.
    """
    e = H.eigenvalues
    if E < H.ground:
        raise ValidationError(f"energy {E} below ground energy {H.ground}")
    if E >= H.mean:
        return float(np.log(H.dim))
    if E == H.ground:
        return float(np.log(np.sum(e == e[0])))
    return entropy_of_spectrum(_gibbs_weights(e, gibbs_beta(H, E)))


def g_osc(modes: int, frequencies, E: float) -> float:
    """``G_{ℓ,ω}(E) = ℓ ln((E + 2E₀)/(ℓ E_*)) + ℓ`` (ħ = 1)."""
    w = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if w.size != modes or np.any(w <= 0):
        raise ValidationError("need one positive frequency per mode")
    if E < 0:
        raise ValidationError("energy must be nonnegative")
    e0 = 0.5 * w.sum()
    e_star = float(np.exp(np.mean(np.log(w))))
    return float(modes * np.log((E + 2 * e0) / (modes * e_star)) + modes)


@dataclass(frozen=True)
class GrowthFunction:
    """Increasing function of energy used in place of ``F_H``."""

    kind: str
    evaluator: Callable[[float], float] = field(repr=False)
    params: dict = field(default_factory=dict)

    def __call__(self, E: float) -> float:
        return float(self.evaluator(float(E)))

    def inverse(self, y: float, tol: float = 1e-14) -> float:
        """Solve ``G(E) = y`` for ``E ≥ 0`` by bisection."""
        if y <= self(0.0):
            return 0.0
        lo, hi = 0.0, 1.0
        while self(hi) < y:
            lo, hi = hi, 2.0 * hi
            if hi > 1e300:
                raise ValidationError("growth function does not reach the requested value")
        for _ in range(400):
            mid = 0.5 * (lo + hi)
            if self(mid) < y:
                lo = mid
            else:
                hi = mid
            if hi - lo <= tol * max(1.0, hi):
                break
        return 0.5 * (lo + hi)


def growth_osc(modes: int = 1, frequencies=(1.0,)) -> GrowthFunction:
    freqs = tuple(float(w) for w in np.atleast_1d(frequencies))
    return GrowthFunction("G_osc", lambda E: g_osc(modes, freqs, E), {"modes": modes, "frequencies": freqs})


def growth_from_hamiltonian(H: Hamiltonian) -> GrowthFunction:
    return GrowthFunction("F_H", lambda E: f_H(H, max(E, H.ground)), {"dim": H.dim})


def growth_table(energies, values) -> GrowthFunction:
    """Piecewise-linear growth function through increasing sample points."""
    x = np.asarray(energies, dtype=float)
    y = np.asarray(values, dtype=float)
    if np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
        raise ValidationError("table must be strictly increasing")
    return GrowthFunction("custom", lambda E: float(np.interp(E, x, y)), {"points": x.size})


# ---------------------------------------------------------------------------
# the parametric bound CB_t


def d_zero(G: GrowthFunction) -> int:
    """Minimal natural ``d₀`` with ``ln d₀ > G(0)``."""
    g0 = G(0.0)
    d = 2
    while np.log(d) <= g0:
        d += 1
    return d


def t_max(E: float, eps: float, G: GrowthFunction) -> float:
    """``T = (1/ε) min{1, √(E / G⁻¹(ln d₀))}``."""
    inv = G.inverse(float(np.log(d_zero(G))))
    if inv < 1e-12:
        raise ValidationError("G^{-1}(ln d0) is numerically zero; T is undefined")
    return min(1.0, float(np.sqrt(E / inv))) / eps


def cb_t(E: float, eps: float, t: float, C: float, D: float, G: GrowthFunction) -> float:
    """``C ε (1+4t)(G[E/(εt)²] + Δ) + D (2g(εt) + g(ε(1+2t)))`` with ``Δ = 1/d₀ + ln 2``."""
    if eps == 0:
        return 0.0
    if E <= 0 or eps < 0 or t <= 0 or C < 0 or D < 0:
        raise ValidationError("need E, eps, t > 0 and C, D >= 0")
    T = t_max(E, eps, G)
    if t > T * (1 + 1e-12):
        raise ValidationError(f"t={t} exceeds T={T}")
    delta = 1.0 / d_zero(G) + LN2
    first = C * eps * (1 + 4 * t) * (G(E / (eps * t) ** 2) + delta) if C else 0.0
    return float(first + D * (2 * g_func(eps * t) + g_func(eps * (1 + 2 * t))))


def cb_min(E: float, eps: float, C: float, D: float, G: GrowthFunction,
           grid: int = 64, span: float = 1e-8, width: float = 1e-10) -> float:
    """``min_{t ∈ (0,T]} CB_t``: log-spaced grid, then golden-section refinement."""
    if eps == 0 or (C == 0 and D == 0):
        return 0.0
    T = t_max(E, eps, G)
    ts = np.geomspace(T * span, T, grid)
    vals = np.array([cb_t(E, eps, t, C, D, G) for t in ts])
    i = int(np.argmin(vals))
    a = ts[max(i - 1, 0)]
    b = ts[min(i + 1, grid - 1)]
    best = vals[i]
    f = lambda t: cb_t(E, eps, t, C, D, G)
    invphi = (np.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(300):
        if b - a <= width:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return float(min(best, fc, fd))


# ---------------------------------------------------------------------------
# bound evaluators


def _check_eps(eps: float) -> None:
    if not 0.0 < eps <= 1.0:
        raise ValidationError(f"eps={eps} must lie in (0, 1]")


def _check_d(d: int) -> None:
    if d < 2:
        raise ValidationError("dimension must be at least 2")


def er_cb(eps: float, d: int) -> float:
    """Entropy reduction, finite dimension: ``ε ln d + g(ε)``."""
    _check_eps(eps), _check_d(d)
    return eps * np.log(d) + g_func(eps)


def er_cb_energy(delta: float, E: float, F: GrowthFunction) -> float:
    """Entropy reduction under an energy bound: ``δ F(2E/δ²) + g(δ)``."""
    _check_eps(delta)
    return delta * F(2 * E / delta**2) + g_func(delta)


def er_cb_tight(eps: float, E: float, G: GrowthFunction) -> float:
    _check_eps(eps)
    return cb_min(E, eps, 1, 1, G)


def chi_cb_finite(eps: float, d: int) -> float:
    """Holevo quantity of channel outputs, diamond-norm form: ``ε ln d + g(ε)``."""
    _check_eps(eps), _check_d(d)
    return eps * np.log(d) + g_func(eps)


def chi_cb_old(eps: float, d: int) -> float:
    """Earlier Bures-distance form ``ε ln d + ε ln 2 + g(ε)``."""
    _check_eps(eps), _check_d(d)
    return eps * np.log(d) + eps * LN2 + g_func(eps)


def chi_cb_ec(eps: float, E: float, F: GrowthFunction) -> float:
    _check_eps(eps)
    return eps * F(2 * E / eps**2) + 2 * g_func(eps)


def chi_cb_ec_tight(eps: float, E: float, G: GrowthFunction) -> float:
    _check_eps(eps)
    return cb_min(E, eps, 1, 2, G)


def comp_chi_cb_ec(eps: float, E: float, F: GrowthFunction) -> float:
    _check_eps(eps)
    return eps * F(2 * E / eps**2) + g_func(eps)


def comp_chi_cb_ec_tight(eps: float, E: float, G: GrowthFunction) -> float:
    _check_eps(eps)
    return cb_min(E, eps, 1, 1, G)


def cap_cb(eps: float, d: int) -> float:
    """Holevo capacity, finite input dimension: ``ε ln d + g(ε)``."""
    _check_eps(eps), _check_d(d)
    return eps * np.log(d) + g_func(eps)


def cap_cb_ec(eps: float, E: float, F: GrowthFunction) -> float:
    _check_eps(eps)
    return eps * F(2 * E / eps**2) + g_func(eps)


def cap_cb_ec_tight(eps: float, E: float, G: GrowthFunction, complement: bool = False) -> float:
    """``min_t CB_t(E, ε | 1, 2)``, or ``(1, 1)`` when ``ε`` bounds the complements."""
    _check_eps(eps)
    return cb_min(E, eps, 1, 1 if complement else 2, G)


def delta_from_trace_distance(eps: float) -> float:
    """Smallest admissible ``δ = √((2-ε)ε)`` for trace distance ``ε``."""
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"eps={eps} must lie in [0, 1]")
    return float(np.sqrt((2.0 - eps) * eps))


BOUNDS = {
    "er_cb": er_cb,
    "er_cb_energy": er_cb_energy,
    "er_cb_tight": er_cb_tight,
    "chi_cb_finite": chi_cb_finite,
    "chi_cb_old": chi_cb_old,
    "chi_cb_ec": chi_cb_ec,
    "chi_cb_ec_tight": chi_cb_ec_tight,
    "comp_chi_cb_ec": comp_chi_cb_ec,
    "comp_chi_cb_ec_tight": comp_chi_cb_ec_tight,
    "cap_cb": cap_cb,
    "cap_cb_ec": cap_cb_ec,
    "cap_cb_ec_tight": cap_cb_ec_tight,
}


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    value: float
    formula: str

    def to_dict(self) -> dict:
        return {"name": self.name, "inputs": self.inputs, "value": self.value, "formula": self.formula}


FORMULAS = {
    "er_cb": "eps*ln(d) + g(eps)",
    "er_cb_energy": "delta*F(2E/delta^2) + g(delta)",
    "er_cb_tight": "min_t CB_t(E,eps|1,1)",
    "chi_cb_finite": "eps*ln(d) + g(eps)",
    "chi_cb_old": "eps*ln(d) + eps*ln(2) + g(eps)",
    "chi_cb_ec": "eps*F(2E/eps^2) + 2g(eps)",
    "chi_cb_ec_tight": "min_t CB_t(E,eps|1,2)",
    "comp_chi_cb_ec": "eps*F(2E/eps^2) + g(eps)",
    "comp_chi_cb_ec_tight": "min_t CB_t(E,eps|1,1)",
    "cap_cb": "eps*ln(d) + g(eps)",
    "cap_cb_ec": "eps*F(2E/eps^2) + g(eps)",
    "cap_cb_ec_tight": "min_t CB_t(E,eps|1,2)",
    "delta_from_trace_distance": "sqrt((2-eps)*eps)",
    "g": "(eps+1)ln(eps+1) - eps*ln(eps)",
}


# ---------------------------------------------------------------------------
# capacity lower bound from a q-c witness


def maximally_entangled(d: int) -> np.ndarray:
    v = np.eye(d).ravel() / np.sqrt(d)
    return np.outer(v, v.conj())


def check_qc_witness(theta: np.ndarray, d_env: int, d: int, tol: float = 1e-8) -> None:
    """Validate ``ϑ = (1/d) Σ_i ρ_i ⊗ |i><i|`` on ``E ⊗ R`` (some basis of ``R``)."""
    theta = np.asarray(theta, dtype=complex)
    try:
        state = DensityMatrix(theta, (d_env, d), ("E", "R"))
    except ValidationError as exc:
        raise ValidationError(f"witness is not a state: {exc}") from None
    if np.max(np.abs(state.ptrace("R").matrix - np.eye(d) / d)) > tol:
        raise ValidationError("witness marginal on R is not maximally mixed")
    if not is_qc_state(state, tol, "R")[0]:
        raise ValidationError("witness is not quantum-classical on R")


def complement_witness_distance(channel: Channel, theta: np.ndarray) -> float:
    """``ε = ½‖Φ̂⊗id_R(ω_m) - ϑ‖₁`` for the maximally entangled ``ω_m``."""
    d = channel.d_in
    comp = complementary(channel)
    check_qc_witness(theta, comp.d_out, d)
    out = apply_local_array(comp, maximally_entangled(d), [d, d], 0)
    return 0.5 * trace_norm(out - theta)


def chi_capacity_lower_bound(channel: Channel, theta: np.ndarray) -> float:
    """``(1-ε) ln d_A - g(ε)`` with ``ε`` from :func:`complement_witness_distance`."""
    eps = min(1.0, complement_witness_distance(channel, theta))
    return float((1.0 - eps) * np.log(channel.d_in) - g_func(eps))


def dephased_witness(channel: Channel) -> np.ndarray:
    """``ϑ = Φ̂⊗id`` of the dephased maximally entangled state (always in the class)."""
    d = channel.d_in
    dephased = np.diag(np.eye(d).ravel() / d).astype(complex)
    return apply_local_array(complementary(channel), dephased, [d, d], 0)


def erasure_witness(d: int, p: float) -> np.ndarray:
    """``ϑ = p I/d² ⊕ (1-p)/d |τ₀><τ₀| ⊗ I_R`` for the complement of :func:`erasure_channel`.

    The complement keeps the flag ``τ₀`` at environment index 0 and the
    input at indices ``1..d``; ``ε = p(1 - 1/d²)`` against ``ω_m``.
    """
    theta = np.zeros(((d + 1) * d, (d + 1) * d), dtype=complex)
    flag = np.zeros((d + 1, d + 1))
    flag[0, 0] = 1.0
    block = np.zeros((d + 1, d + 1))
    block[1:, 1:] = np.eye(d)
    theta += p / d**2 * np.kron(block, np.eye(d))
    theta += (1.0 - p) / d * np.kron(flag, np.eye(d))
    return theta
