"""Acceptance criteria 1-10; each test records a PASS/FAIL line for the run summary."""

import subprocess
import sys
import time

import numpy as np
import pytest

from qcorr import verify as vf

from conftest import ACCEPTANCE, LN2


def report(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    assert ok, detail


def _run(name, **kw):
    t0 = time.perf_counter()
    recs = vf.run_suite(vf.default_config(name, **kw))
    return recs, time.perf_counter() - t0


def _pick(records, prefix):
    return [r for r in records if r.check.startswith(prefix)]


def _failures(records):
    return [f"{r.id} (margin {r.margin:.2e})" for r in records if not r.passed]


@pytest.fixture(scope="module")
def chi_lb():
    return _run("chi_lb", seed=42, n=9)


@pytest.fixture(scope="module")
def discord_run():
    return _run("discord", seed=42, n=500, dims=((2, 2), (2, 3), (3, 2), (3, 3)))


def test_criterion_01_pin_vs_dephasing():
    t0 = time.perf_counter()
    rec = vf._Recorder(vf.default_config("bounds", seed=42), 0)
    vf._pin_dephasing_pair(rec.cfg, rec)
    recs = rec.finish()
    dt = time.perf_counter() - t0
    byname = {r.check: r for r in recs}
    gap = byname["pin_capacity_gap"]
    ok = not _failures(recs) and dt < 30 and abs(gap.lhs - LN2) <= 1e-4
    report(1, ok, f"{len(recs)} checks, capacity gap {gap.lhs:.6f} vs ln2, "
                  f"diamond upper {byname['pin_diamond_upper'].rhs:.4f}/{byname['pin_comp_upper'].rhs:.4f}, "
                  f"{dt:.1f}s; failures: {_failures(recs)}")


def test_criterion_02_erasure(chi_lb):
    recs, dt = chi_lb
    er = [r for r in recs if r.check.startswith("erasure_")]
    caps = _pick(er, "erasure_")
    n_points = len({r.check.rsplit("_", 1)[0] for r in caps})
    ok = not _failures(er) and n_points == 6 and dt < 120
    report(2, ok, f"{n_points} grid points, {len(er)} checks, {dt:.1f}s; failures: {_failures(er)}")


def test_criterion_03_dephasing(chi_lb):
    recs, _ = chi_lb
    de = _pick(recs, "dephasing_")
    eps = _pick(de, "dephasing_")
    ok = not _failures(de) and len({r.check.split("_")[1] for r in de}) == 3
    worst = max(r.lhs for r in eps if r.check.endswith("_eps"))
    report(3, ok, f"{len(de)} checks over d=2,3,4, worst witness distance {worst:.1e}; failures: {_failures(de)}")


def _residual_policy(records, strict=1e-3, loose=1e-2, share=0.99):
    res = np.array([abs(r.lhs - r.rhs) for r in records])
    return res, np.mean(res <= strict) >= share and np.all(res <= loose)


def test_criterion_04_koashi_winter():
    t0 = time.perf_counter()
    a, _ = _run("koashi_winter", seed=42, n=200, dims=((2, 2, 2),))
    b, _ = _run("koashi_winter", seed=43, n=100, dims=((2, 2, 3),))
    dt = time.perf_counter() - t0
    kw = _pick(a, "kw_pure") + _pick(b, "kw_pure")
    res, ok_policy = _residual_policy(kw)
    woot = _pick(a, "ef_wootters")
    woot_ok = len(woot) == 200 and all(abs(r.lhs - r.rhs) <= 1e-4 for r in woot)
    ok = len(kw) == 300 and ok_policy and woot_ok and dt < 600
    report(4, ok, f"{len(kw)} states, max residual {res.max():.2e}, "
                  f"max Wootters gap {max(abs(r.lhs - r.rhs) for r in woot):.2e}, {dt:.0f}s")


def test_criterion_05_xi():
    recs, dt = _run("xi", seed=42, n=200)
    xi = _pick(recs, "xi_pure")
    res, ok_policy = _residual_policy(xi)
    un = _pick(recs, "xi_unopt")
    un_ok = len(un) == 200 and all(abs(r.lhs - r.rhs) <= 1e-8 for r in un)
    ok = len(xi) == 200 and ok_policy and un_ok
    report(5, ok, f"{len(xi)} states, max residual {res.max():.2e}, "
                  f"worst unoptimised residual {max(abs(r.lhs - r.rhs) for r in un):.1e}, {dt:.0f}s")


PROPERTY_CHECKS = {
    "er": ("er_nonneg", "er_ub", "er_concave", "er_laa2", "er_local_channel", "er_marginal"),
    "discord": ("un_db_m", "db_m", "heq", "dilated_lower", "db_laa1", "db_laa2", "dilated_"),
    "monotonicity": ("nmp", "bistochastic_entropy", "entropy_exchange", "dm_lower", "dm_upper"),
    "ed": ("ed_ub", "ed_ub_pure", "ed_ub_s", "mi_complement", "ed_discord"),
}


def test_criterion_06_property_suites(discord_run):
    lines, ok = [], True
    for name, prefixes in PROPERTY_CHECKS.items():
        recs = discord_run[0] if name == "discord" else _run(name, seed=42, n=500)[0]
        sel = [r for r in recs if r.check.startswith(prefixes)]
        n_inst = len({r.instance for r in sel})
        fails = _failures(sel)
        ok &= n_inst == 500 and not fails
        lines.append(f"{name}: {len(sel)} checks/{n_inst} instances, {len(fails)} failed")
    report(6, ok, "; ".join(lines))


def test_criterion_07_finite_bounds():
    recs, dt = _run("bounds", seed=42, n=200)
    sel = [r for r in recs if r.check.startswith(("chi_cb_", "comp_chi_cb_", "cap_cb"))]
    pairs = len({r.instance for r in sel if r.check == "cap_cb"})
    comp = _pick(sel, "cap_cb_complement")
    worst = min(r.margin for r in sel)
    ok = pairs == 200 and len(comp) == 200 and worst >= -1e-8 and not _failures(sel)
    report(7, ok, f"{pairs} channel pairs, {len(sel)} checks, worst margin {worst:.2e}, {dt:.0f}s")


def test_criterion_08_energy_bounds():
    recs, dt = _run("energy", seed=42, n=50)
    sel = [r for r in recs if r.check.startswith(("er_cb", "chi_cb_ec", "comp_chi_cb_ec", "cap_cb_ec"))]
    worst = min(r.margin for r in sel)
    trend = _pick(recs, "cb_min_")
    insts = len({r.instance for r in sel})
    ok = insts == 50 and worst >= -1e-8 and len(trend) >= 2 and not _failures(trend) and not _failures(sel)
    report(8, ok, f"{insts} instances, {len(sel)} checks, worst margin {worst:.2e}, "
                  f"cb_min(eps=1e-4) = {_pick(recs, 'cb_min_small')[0].lhs:.2e}, {dt:.0f}s")


def test_criterion_09_zero_discord(discord_run):
    recs = [r for r in discord_run[0] if r.instance < 100]
    qc = _pick(recs, "qc_")
    ent = _pick(recs, "entangled_")
    ok = len(qc) == 200 and len(ent) == 200 and not _failures(qc + ent)
    worst_qc = max(r.lhs for r in qc if r.check == "qc_discord_zero")
    least_ent = min(r.rhs for r in ent if r.check == "entangled_discord_positive")
    report(9, ok, f"100 q-c states (max discord {worst_qc:.1e}), "
                  f"100 entangled states (min discord {least_ent:.3f})")


def test_criterion_10_determinism(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"report{k}.json"
        proc = subprocess.run([sys.executable, "-m", "qcorr.cli", "verify", "all", "--seed", "42",
                               "--out", str(path)], capture_output=True, text=True)
        assert proc.returncode in (0, 1), proc.stderr
        outs.append((proc.returncode, path.read_bytes()))
    same = outs[0][1] == outs[1][1]
    ok = same and outs[0][0] == 0 and outs[1][0] == 0
    report(10, ok, f"two runs of 'verify all --seed 42': byte-identical={same}, "
                   f"exit codes {outs[0][0]}/{outs[1][0]}, {len(outs[0][1])} bytes")
