import pytest

from qcorr import verify as vf


def _cfg(name, **kw):
    return vf.default_config(name, **{"n": 2, **kw})


def test_config_validation():
    with pytest.raises(ValueError):
        vf.SuiteConfig("er", n=0)
    with pytest.raises(ValueError):
        vf.SuiteConfig("er", tol_eq=0.0)
    with pytest.raises(KeyError):
        vf.default_config("nope")


def test_config_round_trip():
    cfg = _cfg("er", dims=((2, 3),))
    assert vf.SuiteConfig.from_dict(cfg.to_dict()) == cfg


def test_margin_conventions():
    rec = vf._Recorder(vf.SuiteConfig("er", n=1), 0)
    rec.le("a", "x", 1.0, 1.5)
    rec.le("b", "x", 1.0, 1.0 - 1e-9)
    rec.le("c", "x", 1.0, 0.9)
    rec.eq("d", "x", 1.0, 1.0 + 5e-5, "eq")
    rec.eq("e", "x", 1.0, 1.0 + 5e-5)
    a, b, c, d, e = rec.finish()
    assert (a.margin, a.passed) == (0.5, True)
    assert b.passed and not c.passed and c.margin == pytest.approx(-0.1)
    assert d.passed and d.tol == 1e-4 and d.margin == pytest.approx(5e-5)
    assert not e.passed and e.tol == 1e-8
    assert c.witness["check"] == "c" and a.witness is None


def test_suites_are_reproducible():
    a = vf.run_suite(_cfg("ed"), max_workers=1)
    b = vf.run_suite(_cfg("ed"), max_workers=1)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    c = vf.run_suite(_cfg("ed", seed=7), max_workers=1)
    assert [r.lhs for r in a] != [r.lhs for r in c]


def test_instances_do_not_depend_on_count():
    small = vf.run_suite(_cfg("er", n=1), max_workers=1)
    big = vf.run_suite(_cfg("er", n=3), max_workers=1)
    assert [r.to_dict() for r in small] == [r.to_dict() for r in big if r.instance == 0]


def test_parallel_matches_serial():
    cfg = _cfg("monotonicity", n=3)
    serial = vf.run_suite(cfg, max_workers=1)
    parallel = vf.run_suite(cfg, max_workers=2)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("QCORR_THREADS", "1")
    assert vf.workers() == 1


def test_witness_replays_the_margin():
    # a vanishing strict tolerance makes round-off residuals fail
    cfg = _cfg("xi", n=1, tol_strict=1e-300)
    failed = [r for r in vf.run_suite(cfg, max_workers=1) if not r.passed]
    assert failed
    for r in failed:
        again = vf.replay(r.witness)
        assert again.margin == r.margin and again.lhs == r.lhs and again.rhs == r.rhs


@pytest.mark.parametrize("name", sorted(vf.SUITES))
def test_every_suite_runs_clean(name):
    n = 1 if name == "energy" else 2
    records = vf.run_suite(_cfg(name, n=n), max_workers=1)
    assert records
    assert all(r.anchor for r in records)
    bad = [(r.id, r.margin) for r in records if not r.passed]
    assert not bad


def test_summary_counts():
    recs = vf.run_suite(_cfg("chi_lb", n=2), max_workers=1)
    s = vf.summary(recs)
    assert s["chi_lb"]["checks"] == len(recs) and s["chi_lb"]["failed"] == 0
    assert [r.to_dict() for r in vf.records_from_json([r.to_dict() for r in recs])] == [r.to_dict() for r in recs]
