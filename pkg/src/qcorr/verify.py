"""Randomised verification campaigns.

Each suite draws seeded random instances and checks identities and
inequalities between the quantities in this package. Instance ``i`` of suite
``s`` with seed ``k`` always uses the generator ``make_rng(k, crc32(s), i)``,
so any single record can be replayed from its witness.

Tolerance tiers: ``strict`` (closed forms, default 1e-8) and ``eq`` (an
optimiser appears on either side, default 1e-4).
"""

from __future__ import annotations

import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from . import bounds as bd
from .channels import (
    Channel,
    apply_local,
    channel_mutual_information,
    channel_mutual_information_purified,
    complementary,
    compose,
    dephasing_channel,
    depolarizing_semigroup,
    diamond_distance,
    diamond_upper,
    entropy_exchange,
    erasure_channel,
    random_channel,
    random_unitary_mixture,
)
from .core import (
    DensityMatrix,
    PureState,
    kron_all,
    make_rng,
    purify,
    random_density,
    random_pure,
    random_unitary,
    trace_distance,
)
from .entropy import (
    Ensemble,
    binary_entropy,
    g_func,
    holevo_chi,
    mutual_information,
    von_neumann_entropy,
)
from .measures import (
    Povm,
    chi_A,
    classical_correlation,
    constrained_holevo_capacity,
    discord,
    ensemble_povm,
    entanglement_of_formation,
    entropy_reduction,
    holevo_capacity,
    holevo_capacity_ec,
    is_qc_state,
    posterior_ensemble,
    random_povm,
    unopt_classical_correlation,
    unopt_discord,
    unopt_discord_dilated,
    wootters_entanglement_of_formation,
)
from ._stiefel import polar
from .serialize import channel_to_json, povm_to_json, state_to_json

LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class SuiteConfig:
    """Parameters of one campaign.

    ``dims`` cycles over instances; ``restarts``/``patience`` are passed to
    the optimisers. ``sys_dim`` and ``trunc_dim`` size the oscillator used by
    the energy suite.
    """

    suite: str
    n: int = 100
    dims: tuple = ()
    seed: int = 42
    tol_eq: float = 1e-4
    tol_strict: float = 1e-8
    restarts: int = 8
    patience: int | None = 3
    sys_dim: int = 8
    trunc_dim: int = 32

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("instance count must be positive")
        if not (self.tol_eq > 0 and self.tol_strict > 0):
            raise ValueError("tolerances must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dims"] = [list(x) for x in self.dims]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        d = dict(d)
        d["dims"] = tuple(tuple(x) for x in d.get("dims", ()))
        return cls(**d)


@dataclass
class CheckRecord:
    """One checked relation.

    ``relation`` is ``"le"`` (``lhs ≤ rhs``, ``margin = rhs - lhs``, passes if
    ``margin ≥ -tol``) or ``"eq"`` (``margin = |lhs - rhs|``, passes if
    ``margin ≤ tol``).
    """

    id: str
    suite: str
    check: str
    anchor: str
    instance: int
    relation: str
    tier: str
    tol: float
    lhs: float
    rhs: float
    margin: float
    passed: bool
    witness: dict | None = field(default=None)

    def to_dict(self) -> dict:
        return asdict(self)


class _Recorder:
    def __init__(self, cfg: SuiteConfig, index: int):
        self.cfg = cfg
        self.index = index
        self.records: list[CheckRecord] = []
        self.instance: dict = {}

    def _tol(self, tier: str, tol: float | None) -> float:
        if tol is not None:
            return tol
        return self.cfg.tol_strict if tier == "strict" else self.cfg.tol_eq

    def le(self, check: str, anchor: str, lhs: float, rhs: float, tier: str = "strict",
           tol: float | None = None) -> None:
        t = self._tol(tier, tol)
        margin = float(rhs) - float(lhs)
        self._add(check, anchor, "le", tier, t, lhs, rhs, margin, margin >= -t)

    def eq(self, check: str, anchor: str, lhs: float, rhs: float, tier: str = "strict",
           tol: float | None = None) -> None:
        t = self._tol(tier, tol)
        margin = abs(float(lhs) - float(rhs))
        self._add(check, anchor, "eq", tier, t, lhs, rhs, margin, margin <= t)

    def _add(self, check, anchor, relation, tier, tol, lhs, rhs, margin, passed):
        suite = self.cfg.suite
        self.records.append(CheckRecord(
            f"{suite}/{check}/{self.index}", suite, check, anchor, self.index, relation, tier,
            float(tol), float(lhs), float(rhs), float(margin), bool(passed)))

    def finish(self) -> list[CheckRecord]:
        for r in self.records:
            if not r.passed:
                r.witness = {"config": self.cfg.to_dict(), "index": self.index, "check": r.check,
                             "instance": self.instance}
        return self.records


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2**31 - 1))


def _dims(cfg: SuiteConfig, index: int, default) -> tuple:
    choices = cfg.dims or default
    return tuple(choices[index % len(choices)])


def _opt(cfg: SuiteConfig, rng) -> dict:
    return {"restarts": cfg.restarts, "seed": _seed(rng), "patience": cfg.patience}


def _apply_out(channel: Channel, ens: Ensemble) -> Ensemble:
    return Ensemble(ens.probs, [DensityMatrix(channel(s.matrix), validate=False) for s in ens.states],
                    validate=False)


def _chi_out(channel: Channel, ens: Ensemble) -> float:
    return holevo_chi(_apply_out(channel, ens))


def random_decomposition(rho: DensityMatrix, members: int, rng: np.random.Generator) -> Ensemble:
    """Pure-state ensemble averaging exactly to ``rho`` (Haar mixing of ``√ρ``)."""
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > 1e-12
    A = v[:, keep] * np.sqrt(w[keep])
    r = A.shape[1]
    members = max(members, r)
    T = random_isometry_rows(r, members, rng)
    X = (A @ T).T
    p = np.sum(np.abs(X) ** 2, axis=1)
    live = p > 1e-14
    states = [PureState(x / np.sqrt(q), rho.dims, rho.labels, validate=False).density()
              for x, q in zip(X[live], p[live])]
    return Ensemble(p[live] / p[live].sum(), states, validate=False)


def random_isometry_rows(r: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """``r × m`` matrix with orthonormal rows."""
    return random_unitary(m, rng)[:r]


def random_ensemble(d: int, members: int, rng: np.random.Generator, pure: bool = True) -> Ensemble:
    p = rng.dirichlet(np.ones(members))
    if pure:
        states = [random_pure((d,), rng).density() for _ in range(members)]
    else:
        states = [random_density((d,), int(rng.integers(1, d + 1)), rng) for _ in range(members)]
    return Ensemble(p, states, validate=False)


def perturbed_channel(channel: Channel, scale: float, rng: np.random.Generator) -> Channel:
    """Channel whose Stinespring isometry is the polar part of ``V + scale·G``."""
    ks = channel.stack
    n, d_out, d_in = ks.shape
    V = ks.transpose(1, 0, 2).reshape(d_out * n, d_in)
    G = rng.standard_normal(V.shape) + 1j * rng.standard_normal(V.shape)
    W = polar((V + scale * G / np.sqrt(2 * V.size)).conj().T)[0].conj().T
    return Channel(list(W.reshape(d_out, n, d_in).transpose(1, 0, 2)), validate=False)


def _pure_tripartite(dims, rng) -> DensityMatrix:
    return random_pure(dims, rng, labels=("A", "B", "C")).density()


# ---------------------------------------------------------------------------
# suites: one function per instance


def _koashi_winter(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    dims = _dims(cfg, i, [(2, 2, 2), (2, 2, 3)])
    omega = _pure_tripartite(dims, rng)
    rec.instance["state"] = state_to_json(omega)
    w_ab, w_ac = omega.ptrace("AB"), omega.ptrace("AC")
    cb = classical_correlation(w_ab, "B", **_opt(cfg, rng))
    ef = entanglement_of_formation(w_ac, "A", **_opt(cfg, rng))
    s_a = von_neumann_entropy(omega.ptrace("A"))
    rec.eq("kw_pure", "koashi-winter: C_B(AB) + E_F(AC) = S(A)", cb.value + ef.value, s_a, "eq")
    if dims[0] == 2 and dims[2] == 2:
        rec.eq("ef_wootters", "entanglement of formation vs concurrence formula",
               ef.value, wootters_entanglement_of_formation(w_ac), "eq")

    mixed = random_density(dims, 2, rng, labels=("A", "B", "C"))
    rec.instance["mixed"] = state_to_json(mixed)
    k = int(rng.integers(dims[1], dims[1] ** 2 + 1))
    povm = random_povm(dims[1], k, rng, "B", rank_one=bool(rng.random() < 0.5))
    rec.instance["povm"] = povm_to_json(povm)
    lhs = unopt_classical_correlation(mixed.ptrace("AB"), povm, "B")
    ens = posterior_ensemble(mixed, povm, "B")
    rhs = holevo_chi(ens.map(lambda s: s.ptrace("A")))
    rec.eq("kw_unopt", "C_B^M(AB) = chi of the induced ensemble traced to A", lhs, rhs, "strict")

    cbm = classical_correlation(mixed.ptrace("AB"), "B", **_opt(cfg, rng))
    start = posterior_ensemble(mixed, cbm.argument, "B")
    chi = chi_A(mixed.ptrace("AC"), "A", starts=[start], **_opt(cfg, rng))
    rec.le("kw_mixed", "C_B(AB) <= chi_A(AC) for mixed states", cbm.value, chi.value, "eq")
    rec.eq("chi_routes", "chi_A divergence and identity routes agree",
           chi.details["route_divergence"], chi.details["route_identity"], "eq")


def _xi(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    dims = _dims(cfg, i, [(2, 2, 2), (2, 2, 3), (3, 2, 2)])
    omega = _pure_tripartite(dims, rng)
    rec.instance["state"] = state_to_json(omega)
    w_ab, w_bc = omega.ptrace("AB"), omega.ptrace("BC")
    cb = classical_correlation(w_ab, "B", **_opt(cfg, rng))
    db = discord(w_bc, "B", **_opt(cfg, rng))
    s_b = von_neumann_entropy(omega.ptrace("B"))
    rec.eq("xi_pure", "xi-lu-wang-li: C_B(AB) + D_B(BC) = S(B)", cb.value + db.value, s_b, "eq")
    worst = 0.0
    for _ in range(20):
        povm = random_povm(dims[1], int(rng.integers(dims[1], dims[1] ** 2 + 1)), rng, "B")
        a = unopt_classical_correlation(w_ab, povm, "B")
        b = entropy_reduction(w_bc, povm, "B")
        if abs(a - b) >= worst:
            worst, pair = abs(a - b), (a, b)
            rec.instance["povm"] = povm_to_json(povm)
    rec.eq("xi_unopt", "C_B^M(AB) = ER(BC, M x I) for rank-one M (worst of 20)", pair[0], pair[1], "strict")


def _er(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    da, db = _dims(cfg, i, [(2, 2), (2, 3), (3, 2), (3, 3)])
    lab = ("A", "B")
    rho = random_density((da, db), int(rng.integers(1, da * db + 1)), rng, labels=lab)
    sigma = random_density((da, db), int(rng.integers(1, da * db + 1)), rng, labels=lab)
    k = int(rng.integers(db, db * db + 1))
    povm = random_povm(db, k, rng, "B", rank_one=bool(rng.random() < 0.5))
    rec.instance.update(rho=state_to_json(rho), sigma=state_to_json(sigma), povm=povm_to_json(povm))
    er = lambda w: entropy_reduction(w, povm, "B")
    e_rho, e_sig = er(rho), er(sigma)
    rec.le("er_nonneg", "entropy reduction is nonnegative", 0.0, e_rho)
    rec.le("er_ub", "ER <= min{S(w), S(w_B)}", e_rho,
           min(von_neumann_entropy(rho), von_neumann_entropy(rho.ptrace("B"))))
    p = float(rng.random())
    mix = DensityMatrix(p * rho.matrix + (1 - p) * sigma.matrix, rho.dims, lab, validate=False)
    e_mix = er(mix)
    rec.le("er_concave", "ER concave under mixing", p * e_rho + (1 - p) * e_sig, e_mix)
    rec.le("er_laa2", "ER(mixture) <= average + h2(p)", e_mix, p * e_rho + (1 - p) * e_sig + binary_entropy(p))
    phi = random_channel(da, da, int(rng.integers(1, da + 1)), rng)
    rec.instance["channel"] = channel_to_json(phi)
    processed = apply_local(phi, rho, "A")
    rec.le("er_local_channel", "ER does not decrease under a channel on the unmeasured side", e_rho, er(processed))
    marg = rho.ptrace("B")
    rec.le("er_marginal", "ER(w_B, M) >= ER(w, I x M)", e_rho, entropy_reduction(marg, povm, "B"))
    eps = trace_distance(rho, sigma)
    span = int(np.linalg.matrix_rank(rho.matrix + sigma.matrix, tol=1e-10))
    d = max(2, min(db, span))
    if eps > 0:
        rec.le("er_cb_finite", "|ER(rho) - ER(sigma)| <= eps ln d + g(eps)", abs(e_rho - e_sig), bd.er_cb(min(eps, 1.0), d))

    # tightness constructions
    pr = Povm.projective(np.eye(db), "B")
    chaotic = DensityMatrix(np.eye(da * db) / (da * db), (da, db), lab, validate=False)
    pure = DensityMatrix(np.diag(np.eye(da * db)[0]).astype(complex), (da, db), lab, validate=False)
    rec.eq("er_chaotic", "ER of the chaotic state equals ln d_B", entropy_reduction(chaotic, pr, "B"), np.log(db))
    rec.eq("er_pure_zero", "ER of a product pure state is 0", entropy_reduction(pure, pr, "B"), 0.0)
    rec.eq("er_chaotic_eps", "trace distance chaotic vs pure = 1 - 1/(d d_A)",
           trace_distance(chaotic, pure), 1 - 1 / (da * db))
    rec.le("er_chaotic_bound", "chaotic vs pure satisfies the finite bound",
           np.log(db), bd.er_cb(1 - 1 / (da * db), db) if db >= 2 else np.inf)
    dd = min(da, db)
    corr = sum(np.kron(np.diag(np.eye(da)[j]), np.diag(np.eye(db)[j])) for j in range(dd)) / dd
    corr_state = DensityMatrix(corr.astype(complex), (da, db), lab, validate=False)
    rec.eq("er_classical_corr", "ER of the classically correlated state equals ln d",
           entropy_reduction(corr_state, pr, "B"), np.log(dd))
    rec.eq("er_classical_eps", "trace distance classical vs product = 1 - 1/d",
           trace_distance(corr_state, pure), 1 - 1 / dd)


def _qc_state(da: int, db: int, rng) -> tuple[DensityMatrix, np.ndarray]:
    p = rng.dirichlet(np.ones(db))
    U = random_unitary(db, rng)
    m = np.zeros((da * db, da * db), dtype=complex)
    for kk in range(db):
        proj = np.outer(U[:, kk], U[:, kk].conj())
        m += p[kk] * np.kron(random_density((da,), None, rng).matrix, proj)
    ua = random_unitary(da, rng)
    L = np.kron(ua, np.eye(db))
    return DensityMatrix(L @ m @ L.conj().T, (da, db), ("A", "B"), validate=False), U


def _discord(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    da, db = _dims(cfg, i, [(2, 2), (2, 3), (3, 2), (3, 3)])
    lab = ("A", "B")
    omega = random_density((da, db), int(rng.integers(1, da * db + 1)), rng, labels=lab)
    sigma = random_density((da, db), int(rng.integers(1, da * db + 1)), rng, labels=lab)
    phi = random_channel(da, da, int(rng.integers(1, da + 1)), rng)
    povm = random_povm(db, int(rng.integers(db, db * db + 1)), rng, "B")
    gen = random_povm(db, int(rng.integers(2, db * db + 1)), rng, "B", rank_one=False)
    rec.instance.update(omega=state_to_json(omega), sigma=state_to_json(sigma),
                        channel=channel_to_json(phi), povm=povm_to_json(povm), general=povm_to_json(gen))
    processed = apply_local(phi, omega, "A")
    for name, M in (("rank_one", povm), ("general", gen)):
        rec.le(f"un_db_m_{name}", "unoptimised discord monotone under channels on A",
               unopt_discord(processed, M, "B"), unopt_discord(omega, M, "B"))
        rec.eq(f"dilated_{name}", "I(A:F|E) representation equals D_B^M",
               unopt_discord_dilated(omega, M, "B"), unopt_discord(omega, M, "B"))
    d_hat = unopt_discord_dilated(omega, povm, "B")
    s_b = von_neumann_entropy(omega.ptrace("B"))
    rec.eq("heq", "D^M + ER(w, I x M) = S(w_B) for rank-one M", d_hat + entropy_reduction(omega, povm, "B"), s_b)
    rec.le("dilated_lower", "D^M >= S(w_B) - S(w) for rank-one M", s_b - von_neumann_entropy(omega), d_hat)
    p = float(rng.random())
    mix = DensityMatrix(p * omega.matrix + (1 - p) * sigma.matrix, omega.dims, lab, validate=False)
    dm, ds, dmix = (unopt_discord_dilated(x, gen, "B") for x in (omega, sigma, mix))
    avg = p * dm + (1 - p) * ds
    rec.le("db_laa1", "D^M(mixture) >= average - h2(p)", avg - binary_entropy(p), dmix)
    rec.le("db_laa2", "D^M(mixture) <= average + h2(p)", dmix, avg + binary_entropy(p))

    opt = discord(omega, "B", **_opt(cfg, rng))
    opt_p = discord(processed, "B", starts=[opt.argument], **_opt(cfg, rng))
    rec.le("db_m", "optimised discord monotone under channels on A", opt_p.value, opt.value, "eq")
    rec.le("discord_nonneg", "discord is nonnegative", -1e-6, opt.value, tol=0.0)
    cb_val = mutual_information(omega, "A", "B") - opt.value
    rec.le("cb_le_mi", "C_B <= I(A:B)", cb_val, mutual_information(omega, "A", "B"))

    # zero discord <=> q-c
    qc, _ = _qc_state(da, db, rng)
    rec.instance["qc"] = state_to_json(qc)
    rec.le("qc_discord_zero", "q-c states have zero discord", discord(qc, "B", **_opt(cfg, rng)).value, 1e-6, tol=0.0)
    rec.eq("qc_detected", "q-c states pass detection", float(is_qc_state(qc, 1e-8, "B")[0]), 1.0, tol=0.0)
    ent = random_pure((da, db), rng, labels=lab).density()
    rec.instance["entangled"] = state_to_json(ent)
    rec.le("entangled_discord_positive", "entangled pure states have discord >= 1e-3",
           1e-3, discord(ent, "B", **_opt(cfg, rng)).value, tol=0.0)
    rec.eq("entangled_rejected", "entangled pure states fail detection", float(is_qc_state(ent, 1e-8, "B")[0]), 0.0, tol=0.0)


def _relations_instance(cfg, rng, rec):
    da = int(rng.integers(2, 4))
    db = int(rng.integers(2, 4))
    de = int(rng.integers(max(1, -(-da // db)), 4))
    phi = random_channel(da, db, de, rng)
    rho = random_density((da,), int(rng.integers(1, da + 1)), rng, labels=("A",))
    rec.instance.update(channel=channel_to_json(phi), rho=state_to_json(rho))
    return phi, rho


def _channel_relations(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    phi, rho = _relations_instance(cfg, rng, rec)
    mu = random_decomposition(rho, int(rng.integers(1, rho.dim ** 2 + 1)), rng)
    psi = purify(rho)
    out = apply_local(phi, psi.density(), "A", "B")
    i_phi = channel_mutual_information(phi, rho)
    rec.eq("mi_rep", "I(Phi, rho) = I(B:R) of the purified output", i_phi, mutual_information(out, "B", "R"))
    M = ensemble_povm(rho, mu, "R")
    chi_mu = _chi_out(phi, mu)
    rec.eq("mi_chi_rep", "C_R^{M_mu} = chi(Phi(mu))", unopt_classical_correlation(out, M, "R"), chi_mu)
    rec.eq("d_rep_unopt", "D_R^{M_mu} = I(Phi, rho) - chi(Phi(mu))", unopt_discord(out, M, "R"), i_phi - chi_mu)
    rec.eq("er_rep_unopt", "ER(out, I x M_mu) = chi(complement(mu)) for pure mu",
           entropy_reduction(out, M, "R"), _chi_out(complementary(phi), mu))

    cbar = constrained_holevo_capacity(phi, rho, restarts=cfg.restarts, seed=_seed(rng))
    start = ensemble_povm(rho, cbar.argument, "R")
    c_r = classical_correlation(out, "R", starts=[start], **_opt(cfg, rng))
    rec.eq("chi_rep", "constrained capacity = C_R of the purified output", cbar.value, c_r.value, "eq")
    d_r = mutual_information(out, "B", "R") - c_r.value
    rec.eq("d_rep", "D_R of the purified output = I(Phi, rho) - constrained capacity", d_r, i_phi - cbar.value, "eq")


def _monotonicity(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    phi, rho = _relations_instance(cfg, rng, rec)
    db = phi.d_out
    dc = int(rng.integers(2, 4))
    psi = random_channel(db, dc, int(rng.integers(max(1, -(-db // dc)), 4)), rng)
    bist = random_unitary_mixture(db, int(rng.integers(2, 5)), rng)
    rec.instance.update(psi=channel_to_json(psi), bistochastic=channel_to_json(bist))
    comp = compose(psi, phi)
    mu = random_decomposition(rho, int(rng.integers(1, rho.dim ** 2 + 1)), rng)
    rec.le("nmp", "chi(complement(mu)) does not decrease under concatenation",
           _chi_out(complementary(phi), mu), _chi_out(complementary(comp), mu))
    rec.le("bistochastic_entropy", "bistochastic channel does not decrease entropy",
           von_neumann_entropy(DensityMatrix(phi(rho.matrix), validate=False)),
           von_neumann_entropy(DensityMatrix(bist(phi(rho.matrix)), validate=False)))
    rec.le("entropy_exchange", "S(Psi o Phi, rho) >= S(Phi, rho) for bistochastic Psi",
           entropy_exchange(phi, rho), entropy_exchange(compose(bist, phi), rho))

    nu = random_ensemble(phi.d_in, int(rng.integers(2, 5)), rng, pure=bool(rng.random() < 0.5))
    avg = nu.average()
    drop = _chi_out(phi, nu) - _chi_out(comp, nu)
    rec.le("dm_lower", "chi(Phi(mu)) - chi(Psi o Phi(mu)) >= 0", 0.0, drop)
    rec.le("dm_upper", "chi drop <= mutual information drop", drop,
           channel_mutual_information(phi, avg) - channel_mutual_information(comp, avg))

    c1 = constrained_holevo_capacity(phi, rho, restarts=cfg.restarts, seed=_seed(rng))
    c2 = constrained_holevo_capacity(comp, rho, restarts=cfg.restarts, seed=_seed(rng), starts=[c1.argument])
    rec.le("um", "I - constrained capacity does not increase under concatenation",
           channel_mutual_information(comp, rho) - c2.value, channel_mutual_information(phi, rho) - c1.value, "eq")

    t, s = float(rng.uniform(0, 2)), float(rng.uniform(0, 2))
    ens = random_ensemble(2, int(rng.integers(2, 5)), rng, pure=bool(rng.random() < 0.5))
    G = lambda x: _chi_out(depolarizing_semigroup(x), ens)
    F = lambda x: channel_mutual_information(depolarizing_semigroup(x), ens.average())
    rec.le("semigroup_g_decreasing", "G(t+s) <= G(t) on the depolarizing semigroup", G(t + s), G(t))
    rec.le("semigroup_rate", "G(t) - G(t+s) <= F(t) - F(t+s)", G(t) - G(t + s), F(t) - F(t + s))


def _ed(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    da = int(rng.integers(2, 4))
    db = int(rng.integers(2, 4))
    phi = random_channel(da, db, int(rng.integers(max(1, -(-da // db)), 4)), rng)
    pure = bool(i % 2 == 0)
    mu = random_ensemble(da, int(rng.integers(2, 6)), rng, pure=pure)
    rec.instance.update(channel=channel_to_json(phi), ensemble=[state_to_json(s) for s in mu.states],
                        probs=mu.probs.tolist())
    rho = mu.average()
    comp = complementary(phi)
    lhs = holevo_chi(mu) - _chi_out(phi, mu)
    i_comp = channel_mutual_information(comp, rho)
    rhs = i_comp - _chi_out(comp, mu)
    rec.le("ed_ub", "entropic disturbance <= I(complement) - chi(complement(mu))", lhs, rhs)
    if pure:
        rec.eq("ed_ub_pure", "equality for pure ensembles", lhs, rhs)
    rec.eq("mi_complement", "I(complement, rho) = 2 S(rho) - I(Phi, rho)",
           i_comp, 2 * von_neumann_entropy(rho) - channel_mutual_information(phi, rho))
    rec.le("ed_ub_s", "entropic disturbance <= 2 S(rho) - I(Phi, rho)", lhs,
           2 * von_neumann_entropy(rho) - channel_mutual_information(phi, rho))
    rho_l = DensityMatrix(rho.matrix, (da,), ("A",), validate=False)
    M = ensemble_povm(rho_l, mu, "R")
    out = apply_local(comp, purify(rho_l).density(), "A", "E")
    rec.eq("ed_discord", "I(complement) - chi(complement(mu)) = D_R^{M_mu}", rhs, unopt_discord(out, M, "R"))


def _bounds(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    if i == 0:
        _pin_dephasing_pair(cfg, rec)
    da = int(rng.integers(2, 4))
    db = int(rng.integers(2, 4))
    de = int(rng.integers(max(1, -(-da // db)), 4))
    phi = random_channel(da, db, de, rng)
    scale = float(10 ** rng.uniform(-2, 0.5))
    psi = perturbed_channel(phi, scale, rng)
    rec.instance.update(phi=channel_to_json(phi), psi=channel_to_json(psi))
    eps = min(1.0, 0.5 * diamond_upper(phi, psi))
    comp_phi, comp_psi = complementary(phi), complementary(psi)
    eps_c = min(1.0, 0.5 * diamond_upper(comp_phi, comp_psi))
    if eps > 0:
        bound = bd.chi_cb_finite(eps, da)
        rec.le("cb_sharper", "new bound strictly below the Bures-form bound", bound, bd.chi_cb_old(eps, da), tol=0.0)
        for j in range(5):
            mu = random_ensemble(da, int(rng.integers(2, 6)), rng, pure=bool(j % 2))
            rec.le(f"chi_cb_{j}", "|chi(Phi(mu)) - chi(Psi(mu))| <= eps ln d + g(eps)",
                   abs(_chi_out(phi, mu) - _chi_out(psi, mu)), bound)
            if j % 2:
                rec.le(f"comp_chi_cb_{j}", "complementary outputs, pure mu",
                       abs(_chi_out(comp_phi, mu) - _chi_out(comp_psi, mu)), bound)
    c_phi = holevo_capacity(phi, restarts=cfg.restarts, seed=_seed(rng))
    c_psi = holevo_capacity(psi, restarts=cfg.restarts, seed=_seed(rng))
    diff = abs(c_phi.value - c_psi.value)
    if eps > 0:
        rec.le("cap_cb", "|C(Phi) - C(Psi)| <= eps ln d + g(eps)", diff, bd.cap_cb(eps, da))
    if eps_c > 0:
        rec.le("cap_cb_complement", "same bound with eps from the complements", diff, bd.cap_cb(eps_c, da))


def _pin_pair() -> tuple[Channel, Channel]:
    pin = Channel([np.array([[1, 0], [0, 0]]), np.array([[0, 1], [0, 0]])])
    return pin, dephasing_channel(2)


def _pin_dephasing_pair(cfg: SuiteConfig, rec: _Recorder) -> None:
    pin, deph = _pin_pair()
    dist = diamond_distance(pin, deph, restarts=16, seed=cfg.seed)
    rec.le("pin_diamond_lower", "diamond lower bracket certifies 2", 2.0 - 1e-6, dist.lower, tol=0.0)
    rec.le("pin_diamond_upper", "diamond upper bracket >= 2", 2.0, dist.upper, tol=1e-12)
    rec.le("pin_diamond_gap", "diamond upper bracket within 0.05 of 2", dist.upper - 2.0, 0.05, tol=0.0)
    cdist = diamond_distance(complementary(pin), complementary(deph), restarts=16, seed=cfg.seed)
    rec.le("pin_comp_lower", "complement lower bracket certifies 1", 1.0 - 1e-6, cdist.lower, tol=0.0)
    rec.le("pin_comp_upper", "complement upper bracket >= 1", 1.0, cdist.upper, tol=1e-12)
    rec.le("pin_comp_gap", "complement upper bracket within 0.05 of 1", cdist.upper - 1.0, 0.05, tol=0.0)
    diff = abs(holevo_capacity(pin, restarts=4).value - holevo_capacity(deph, restarts=4).value)
    rec.eq("pin_capacity_gap", "|C(pin) - C(dephasing)| = ln 2", diff, LN2, "eq")
    b1 = bd.cap_cb(min(1.0, 0.5 * dist.upper), 2)
    b2 = bd.cap_cb(min(1.0, 0.5 * cdist.upper), 2)
    rec.eq("pin_bound_direct", "direct bound = 3 ln 2", bd.cap_cb(1.0, 2), 3 * LN2, tol=1e-12)
    rec.eq("pin_bound_complement", "complement bound = ln 2 + (3/2) ln(3/2)",
           bd.cap_cb(0.5, 2), LN2 + 1.5 * np.log(1.5), tol=1e-12)
    rec.le("pin_direct_holds", "capacity gap below direct bound", diff, b1, "eq")
    rec.le("pin_complement_holds", "capacity gap below complement bound", diff, b2, "eq")


def _energy(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    d = cfg.sys_dim
    H = bd.number_operator(d)
    F = bd.growth_from_hamiltonian(bd.number_operator(cfg.trunc_dim))
    G = bd.growth_osc(1, (1.0,))
    E = (1.0, 2.0)[i % 2]
    if i < 2:
        _energy_static(cfg, rec, E, F, G)

    # entropy reduction on A (qubit) x B (oscillator)
    rho = _energy_state((2, d), E, rng)
    tau = _energy_state((2, d), E, rng)
    s = float(10 ** rng.uniform(-3, -0.5))
    sigma = DensityMatrix((1 - s) * rho.matrix + s * tau.matrix, (2, d), ("A", "B"), validate=False)
    povm = random_povm(d, d, rng, "B")
    rec.instance.update(rho=state_to_json(rho), sigma=state_to_json(sigma), povm=povm_to_json(povm))
    diff = abs(entropy_reduction(rho, povm, "B") - entropy_reduction(sigma, povm, "B"))
    eps = trace_distance(rho, sigma)
    if eps > 0:
        rec.le("er_cb_energy", "ER difference <= delta F(2E/delta^2) + g(delta)", diff,
               bd.er_cb_energy(bd.delta_from_trace_distance(eps), E, F))
        rec.le("er_cb_tight", "ER difference <= min_t CB_t(E, eps | 1, 1)", diff, bd.er_cb_tight(eps, E, G))

    # channels on the oscillator
    d_out = int(rng.integers(2, 4))
    phi = random_channel(d, d_out, -(-d // d_out) + 1, rng)
    psi = perturbed_channel(phi, float(10 ** rng.uniform(-3, -1)), rng)
    rec.instance.update(phi=channel_to_json(phi), psi=channel_to_json(psi))
    up = diamond_upper(phi, psi)
    eps_b = float(np.sqrt(up))
    eps_d = 0.5 * up
    comp_phi, comp_psi = complementary(phi), complementary(psi)
    eps_c = 0.5 * diamond_upper(comp_phi, comp_psi)
    mu = _energy_ensemble(d, E, rng, pure=bool(rng.random() < 0.5))
    pure_mu = _energy_ensemble(d, E, rng, pure=True)
    dchi = abs(_chi_out(phi, mu) - _chi_out(psi, mu))
    dchi_c = abs(_chi_out(comp_phi, pure_mu) - _chi_out(comp_psi, pure_mu))
    if 0 < eps_b <= 1:
        rec.le("chi_cb_ec", "chi difference <= eps F(2E/eps^2) + 2 g(eps)", dchi, bd.chi_cb_ec(eps_b, E, F))
        rec.le("comp_chi_cb_ec", "complement chi difference <= eps F(2E/eps^2) + g(eps)",
               dchi_c, bd.comp_chi_cb_ec(eps_b, E, F))
    if 0 < eps_d <= 1:
        rec.le("chi_cb_ec_tight", "chi difference <= min_t CB_t(E, eps | 1, 2)", dchi, bd.chi_cb_ec_tight(eps_d, E, G))
        rec.le("comp_chi_cb_ec_tight", "complement chi difference <= min_t CB_t(E, eps | 1, 1)",
               dchi_c, bd.comp_chi_cb_ec_tight(eps_d, E, G))

    opt = {"restarts": 1, "members": d}
    c_phi = holevo_capacity_ec(phi, H, E, seed=_seed(rng), **opt)
    c_psi = holevo_capacity_ec(psi, H, E, seed=_seed(rng), **opt)
    diff_c = abs(c_phi.value - c_psi.value)
    if 0 < eps_b <= 1:
        rec.le("cap_cb_ec", "capacity difference <= eps F(2E/eps^2) + g(eps)", diff_c, bd.cap_cb_ec(eps_b, E, F))
    if 0 < eps_d <= 1:
        rec.le("cap_cb_ec_tight", "capacity difference <= min_t CB_t(E, eps | 1, 2)",
               diff_c, bd.cap_cb_ec_tight(eps_d, E, G))
    if 0 < eps_c <= 1:
        rec.le("cap_cb_ec_tight_complement", "capacity difference <= min_t CB_t(E, eps_c | 1, 1)",
               diff_c, bd.cap_cb_ec_tight(eps_c, E, G, complement=True))


def _energy_static(cfg: SuiteConfig, rec: _Recorder, E: float, F, G) -> None:
    rec.eq("f_h_truncation", "truncated F_H(E) matches g(E)", F(E), g_func(E), tol=1e-3)
    grid = np.linspace(0.1, 5.0, 50)
    rec.le("g_dominates_f", "G_{1,1} >= F_H on the grid", 0.0, min(G(x) - F(x) for x in grid))
    vals = [bd.cb_min(1.0, e, 1, 1, G) for e in (1e-1, 1e-2, 1e-3, 1e-4)]
    rec.le("cb_min_monotone", "cb_min decreases as eps sweeps down", max(np.diff(vals)), 0.0)
    rec.le("cb_min_small", "cb_min(E=1, eps=1e-4) < 1e-2", vals[-1], 1e-2, tol=0.0)


def _energy_state(dims, E: float, rng) -> DensityMatrix:
    """Random state with ``Tr H ρ_B ≤ E`` (mixed with the ground state when needed)."""
    da, d = dims
    rho = random_density(dims, None, rng, labels=("A", "B")).matrix
    HB = np.kron(np.eye(da), np.diag(np.arange(d, dtype=float)))
    e = float(np.real(np.trace(HB @ rho)))
    if e > E:
        lam = (e - E) / e
        g = np.zeros((da * d, da * d), dtype=complex)
        g[0, 0] = 1.0
        rho = (1 - lam) * rho + lam * g
    return DensityMatrix(rho, dims, ("A", "B"), validate=False)


def _energy_ensemble(d: int, E: float, rng, pure: bool) -> Ensemble:
    ens = random_ensemble(d, int(rng.integers(2, 5)), rng, pure=pure)
    h = np.arange(d, dtype=float)
    e = float(np.real(np.trace(np.diag(h) @ ens.average().matrix)))
    if e <= E:
        return ens
    lam = (e - E) / e
    ground = DensityMatrix(np.diag(np.eye(d)[0]).astype(complex), validate=False)
    return Ensemble(np.append((1 - lam) * ens.probs, lam), list(ens.states) + [ground], validate=False)


def _chi_lb_cases():
    cases = [("dephasing", d, 0.0) for d in (2, 3, 4)]
    cases += [("erasure", d, p) for d in (2, 3) for p in (0.1, 0.3, 0.5)]
    return cases


def _chi_lb(cfg: SuiteConfig, i: int, rng, rec: _Recorder) -> None:
    cases = _chi_lb_cases()
    kind, d, p = cases[i % len(cases)]
    if kind == "dephasing":
        ch = dephasing_channel(d)
        theta = bd.dephased_witness(ch)
        eps = bd.complement_witness_distance(ch, theta)
        rec.le(f"dephasing_{d}_eps", "complement distance to the q-c witness vanishes", eps, 1e-8, tol=0.0)
        rec.eq(f"dephasing_{d}_bound", "lower bound equals ln d", bd.chi_capacity_lower_bound(ch, theta), np.log(d), tol=1e-6)
        cap = holevo_capacity(ch, restarts=cfg.restarts, seed=_seed(rng))
        rec.eq(f"dephasing_{d}_capacity", "capacity equals ln d", cap.value, np.log(d), tol=1e-3)
    else:
        ch = erasure_channel(d, p)
        theta = bd.erasure_witness(d, p)
        eps = bd.complement_witness_distance(ch, theta)
        rec.eq(f"erasure_{d}_{p}_eps", "witness distance = p(1 - 1/d^2)", eps, p * (1 - 1 / d**2))
        lb = bd.chi_capacity_lower_bound(ch, theta)
        formula = (1 - p + p / d**2) * np.log(d) - g_func(p * (1 - 1 / d**2))
        rec.eq(f"erasure_{d}_{p}_formula", "bound = (1-p+p/d^2) ln d - g(p(1-1/d^2))", lb, formula)
        cap = holevo_capacity(ch, restarts=cfg.restarts, seed=_seed(rng))
        rec.eq(f"erasure_{d}_{p}_capacity", "capacity = (1-p) ln d", cap.value, (1 - p) * np.log(d), tol=1e-3)
        rec.le(f"erasure_{d}_{p}_bound", "lower bound <= capacity", lb, cap.value, tol=1e-6)


SUITES: dict[str, tuple[Callable, int]] = {
    "koashi_winter": (_koashi_winter, 40),
    "xi": (_xi, 40),
    "er": (_er, 100),
    "discord": (_discord, 60),
    "channel_relations": (_channel_relations, 40),
    "monotonicity": (_monotonicity, 40),
    "bounds": (_bounds, 20),
    "energy": (_energy, 6),
    "ed": (_ed, 100),
    "chi_lb": (_chi_lb, 9),
}


def suite_id(name: str) -> int:
    return zlib.crc32(name.encode())


def default_config(name: str, **overrides) -> SuiteConfig:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    overrides = {k: v for k, v in overrides.items() if v is not None}
    overrides.setdefault("n", SUITES[name][1])
    return SuiteConfig(name, **overrides)


def run_instance(cfg: SuiteConfig, index: int) -> list[CheckRecord]:
    fn = SUITES[cfg.suite][0]
    rng = make_rng(cfg.seed, suite_id(cfg.suite), index)
    rec = _Recorder(cfg, index)
    fn(cfg, index, rng, rec)
    return rec.finish()


def _worker(args):
    cfg, index = args
    return run_instance(cfg, index)


def workers() -> int:
    cap = os.environ.get("QCORR_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def run_suite(cfg: SuiteConfig, max_workers: int | None = None) -> list[CheckRecord]:
    """All records of a campaign, ordered by instance index."""
    n_workers = max_workers if max_workers is not None else workers()
    jobs = [(cfg, i) for i in range(cfg.n)]
    if n_workers <= 1 or cfg.n == 1:
        chunks = [_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            chunks = list(pool.map(_worker, jobs))
    return [r for chunk in chunks for r in chunk]


def run_all(seed: int = 42, **overrides) -> list[CheckRecord]:
    out = []
    for name in SUITES:
        out += run_suite(default_config(name, seed=seed, **overrides))
    return out


def replay(witness: dict) -> CheckRecord:
    """Recompute the record named by a failure witness."""
    cfg = SuiteConfig.from_dict(witness["config"])
    for r in run_instance(cfg, witness["index"]):
        if r.check == witness["check"]:
            return r
    raise KeyError(f"check {witness['check']!r} not produced on replay")


def summary(records: list[CheckRecord]) -> dict:
    """Per-suite ``{"checks", "failed"}`` counts."""
    by_suite: dict[str, dict] = {}
    for r in records:
        s = by_suite.setdefault(r.suite, {"checks": 0, "failed": 0})
        s["checks"] += 1
        s["failed"] += int(not r.passed)
    return by_suite


def records_from_json(items: list) -> list[CheckRecord]:
    return [CheckRecord(**d) for d in items]
