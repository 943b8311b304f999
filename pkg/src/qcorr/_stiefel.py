"""Multistart optimisation over ``{T ∈ C^{d×k} : T T† = I_d}``.

The chart is polar normalisation of an unconstrained complex matrix,
``T = (G G†)^{-1/2} G``. Objectives return their value and the Wirtinger
gradient ``Γ = ∂f/∂T̄`` (so that ``df = 2 Re Tr Γ† dT``); the chain rule
through the polar map is done here, after which L-BFGS runs on the real
coordinates of ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


def polar(G: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s, U = np.linalg.eigh(G @ G.conj().T)
    s = np.clip(s, 1e-300, None)
    inv_sqrt = (U * s ** -0.5) @ U.conj().T
    return inv_sqrt @ G, s, U


def _pullback(G: np.ndarray, gamma: np.ndarray, s: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Real gradient in ``G`` coordinates from ``Γ = ∂f/∂T̄``."""
    r = s ** -0.5
    ds = s[:, None] - s[None, :]
    close = np.abs(ds) <= 1e-12 * np.maximum(s[:, None], s[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(close, -0.5 * (s[:, None] * s[None, :]) ** -0.75, (r[:, None] - r[None, :]) / ds)
    inv_sqrt = (U * r) @ U.conj().T
    Y = U.conj().T @ G @ gamma.conj().T @ U
    Q = U @ (K * Y) @ U.conj().T
    Xi = gamma.conj().T @ inv_sqrt + G.conj().T @ (Q + Q.conj().T)
    # df = 2 Re Σ Ξ_ji dG_ij
    gr = 2.0 * Xi.T.real
    gi = -2.0 * Xi.T.imag
    return np.concatenate([gr.ravel(), gi.ravel()])


def _unpack(x: np.ndarray, d: int, k: int) -> np.ndarray:
    n = d * k
    return (x[:n] + 1j * x[n:]).reshape(d, k)


def _pack(G: np.ndarray) -> np.ndarray:
    return np.concatenate([G.real.ravel(), G.imag.ravel()])


def random_frame(d: int, k: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    return polar(g)[0]


def minimize_free(fun: Objective, d: int, k: int, rng: np.random.Generator,
                  restarts: int = 32, starts: Sequence[np.ndarray] = (),
                  maxiter: int = 2000) -> "StiefelResult":
    """Minimise a scale-invariant ``fun(G)`` over nonzero ``G ∈ C^{d×k}``.

    ``fun`` returns its value and ``∂f/∂Ḡ``.
    """
    def wrapped(x):
        G = _unpack(x, d, k)
        f, gamma = fun(G)
        return f, 2.0 * _pack(gamma)

    init = [np.asarray(s, dtype=complex) for s in starts]
    best_val, best_G, converged, values = np.inf, None, False, []
    for i in range(len(init) + restarts):
        G0 = init[i] if i < len(init) else rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
        G0 = G0 / np.linalg.norm(G0)
        res = minimize(wrapped, _pack(G0), jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-10, "maxcor": 30})
        G = _unpack(res.x, d, k)
        G = G / np.linalg.norm(G)
        f = float(fun(G)[0])
        values.append(f)
        if f < best_val:
            best_val, best_G, converged = f, G, bool(res.success)
    return StiefelResult(best_val, best_G, len(values), converged, values)


def minimize_frame_numeric(fun: Callable[[np.ndarray], float], d: int, k: int,
                           rng: np.random.Generator, restarts: int = 8,
                           starts: Sequence[np.ndarray] = (), maxiter: int = 2000) -> "StiefelResult":
    """Derivative-free variant (finite-difference L-BFGS) for small charts."""
    wrapped = lambda x: fun(polar(_unpack(x, d, k))[0])
    init = [np.asarray(s, dtype=complex) for s in starts]
    best_val, best_T, converged, values = np.inf, None, False, []
    for i in range(len(init) + restarts):
        T0 = init[i] if i < len(init) else random_frame(d, k, rng)
        res = minimize(wrapped, _pack(T0), method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-9})
        T = polar(_unpack(res.x, d, k))[0]
        f = float(fun(T))
        values.append(f)
        if f < best_val:
            best_val, best_T, converged = f, T, bool(res.success)
    return StiefelResult(best_val, best_T, len(values), converged, values)


@dataclass
class StiefelResult:
    value: float
    frame: np.ndarray
    restarts: int
    converged: bool
    values: list


def minimize_frame(fun: Objective, d: int, k: int, rng: np.random.Generator,
                   restarts: int = 32, starts: Sequence[np.ndarray] = (),
                   maxiter: int = 2000, patience: int | None = None,
                   agree_tol: float = 1e-9) -> StiefelResult:
    """Minimise ``fun`` over frames, from ``starts`` followed by random starts.

    ``patience`` stops early once that many runs have reproduced the best
    value within ``agree_tol``; ``None`` always runs every start.
    """
    def wrapped(x):
        G = _unpack(x, d, k)
        T, s, U = polar(G)
        f, gamma = fun(T)
        return f, _pullback(G, gamma, s, U)

    init = [np.asarray(s, dtype=complex) for s in starts]
    best_val, best_T = np.inf, None
    values = []
    hits = 0
    converged = False
    n_runs = len(init) + restarts
    for i in range(n_runs):
        T0 = init[i] if i < len(init) else random_frame(d, k, rng)
        res = minimize(wrapped, _pack(T0), jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-10, "maxcor": 30})
        T = polar(_unpack(res.x, d, k))[0]
        f = float(fun(T)[0])
        values.append(f)
        if f < best_val - agree_tol:
            hits = 1
            best_val, best_T = f, T
            converged = bool(res.success)
        elif abs(f - best_val) <= agree_tol:
            hits += 1
            if f < best_val:
                best_val, best_T = f, T
            converged = converged or bool(res.success)
        if patience is not None and hits >= patience and i + 1 >= len(init):
            break
    return StiefelResult(best_val, best_T, len(values), converged, values)
