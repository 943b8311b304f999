"""Command-line entry point: ``qcorr {verify,compute,bounds,report}``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on a usage
or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import bounds as bd
from . import verify as vf
from .channels import (
    channel_mutual_information,
    diamond_distance,
    entropy_exchange,
)
from .core import ValidationError
from .entropy import mutual_information, von_neumann_entropy
from .measures import (
    chi_A,
    classical_correlation,
    constrained_holevo_capacity,
    discord,
    entanglement_of_formation,
    entropy_reduction,
    holevo_capacity,
    is_qc_state,
    unopt_classical_correlation,
    unopt_discord,
    wootters_entanglement_of_formation,
)
from .serialize import channel_from_json, dump_json, load_json, povm_from_json, state_from_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_dims(text: str | None) -> tuple | None:
    """``"2,2,2;2,2,3"`` -> ``((2, 2, 2), (2, 2, 3))``."""
    if text is None:
        return None
    try:
        out = tuple(tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip())
    except ValueError:
        raise UsageError(f"bad --dims {text!r}; expected e.g. '2,2,2;2,2,3'") from None
    if not out or any(d < 1 for dims in out for d in dims):
        raise UsageError(f"bad --dims {text!r}")
    return out


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    names = list(vf.SUITES) if args.suite == "all" else [args.suite]
    dims = _parse_dims(args.dims)
    records = []
    for name in names:
        try:
            cfg = vf.default_config(name, seed=args.seed, n=args.n, dims=dims, tol_eq=args.tol_eq,
                                    tol_strict=args.tol_strict, restarts=args.restarts)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        recs = vf.run_suite(cfg)
        failed = sum(not r.passed for r in recs)
        print(f"{name}: {len(recs)} checks, {failed} failed", file=sys.stderr if args.out == "-" else sys.stdout)
        records += recs
    text = dump_json([r.to_dict() for r in records])
    if args.out == "-":
        print(text)
    elif args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


# ---------------------------------------------------------------------------
# compute


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"this measure needs --{n.replace('_', '-')}")


def _state(args):
    _need(args, "state")
    return state_from_json(load_json(args.state))


def _povm(args):
    _need(args, "povm")
    return povm_from_json(load_json(args.povm))


def _channel(args, which="channel"):
    _need(args, which)
    return channel_from_json(load_json(getattr(args, which)))


def _opt(args) -> dict:
    return {"restarts": args.restarts, "seed": args.seed}


def _compute(args) -> dict:
    m = args.measure
    if m == "entropy":
        return {"value": von_neumann_entropy(_state(args))}
    if m == "mutual_information":
        rho = _state(args)
        a = args.a or rho.labels[0]
        b = args.b or [lab for lab in rho.labels if lab != a]
        return {"value": mutual_information(rho, a, b)}
    if m == "entropy_reduction":
        return {"value": entropy_reduction(_state(args), _povm(args), args.measured)}
    if m == "unopt_classical_correlation":
        return {"value": unopt_classical_correlation(_state(args), _povm(args), args.measured)}
    if m == "unopt_discord":
        return {"value": unopt_discord(_state(args), _povm(args), args.measured)}
    if m in ("classical_correlation", "discord"):
        fn = classical_correlation if m == "classical_correlation" else discord
        res = fn(_state(args), args.measured, **_opt(args))
        return {"value": res.value, "kind": res.kind, "restarts": res.restarts}
    if m == "entanglement_of_formation":
        res = entanglement_of_formation(_state(args), args.keep, **_opt(args))
        return {"value": res.value, "kind": res.kind, "restarts": res.restarts}
    if m == "wootters":
        return {"value": wootters_entanglement_of_formation(_state(args))}
    if m == "chi_a":
        res = chi_A(_state(args), args.keep, **_opt(args))
        return {"value": res.value, "kind": res.kind, **res.details}
    if m == "is_qc":
        flag, _ = is_qc_state(_state(args), measured=args.measured)
        return {"value": bool(flag)}
    if m == "holevo_capacity":
        res = holevo_capacity(_channel(args), **_opt(args))
        return {"value": res.value, "kind": res.kind}
    if m == "constrained_capacity":
        res = constrained_holevo_capacity(_channel(args), _state(args), **_opt(args))
        return {"value": res.value, "kind": res.kind}
    if m == "channel_mutual_information":
        return {"value": channel_mutual_information(_channel(args), _state(args))}
    if m == "entropy_exchange":
        return {"value": entropy_exchange(_channel(args), _state(args))}
    if m == "diamond":
        res = diamond_distance(_channel(args), _channel(args, "channel2"), restarts=args.restarts, seed=args.seed)
        return {"lower": res.lower, "upper": res.upper}
    raise UsageError(f"unknown measure {m!r}")


MEASURES = (
    "entropy", "mutual_information", "entropy_reduction", "unopt_classical_correlation", "unopt_discord",
    "classical_correlation", "discord", "entanglement_of_formation", "wootters", "chi_a", "is_qc",
    "holevo_capacity", "constrained_capacity", "channel_mutual_information", "entropy_exchange", "diamond",
)


def cmd_compute(args) -> int:
    out = {"measure": args.measure, **_compute(args)}
    print(dump_json(out))
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds


def _hamiltonian(spec: str | None) -> bd.Hamiltonian:
    """``number:N`` or a JSON file holding a list of eigenvalues / ``{"eigenvalues": [...]}``."""
    if spec is None:
        return bd.number_operator(32)
    if spec.startswith("number:"):
        try:
            return bd.number_operator(int(spec.split(":", 1)[1]))
        except ValueError:
            raise UsageError(f"bad --ham {spec!r}") from None
    obj = load_json(spec)
    return bd.Hamiltonian(obj["eigenvalues"] if isinstance(obj, dict) else obj)


def _growth(args):
    if args.growth == "osc":
        return bd.growth_osc(1, (1.0,))
    return bd.growth_from_hamiltonian(_hamiltonian(args.ham))


def cmd_bounds(args) -> int:
    name = args.name
    inputs = {"eps": args.eps}
    if name in ("er_cb", "chi_cb_finite", "chi_cb_old", "cap_cb"):
        _need(args, "eps", "d")
        value = bd.BOUNDS[name](args.eps, args.d)
        inputs["d"] = args.d
    elif name == "delta_from_trace_distance":
        _need(args, "eps")
        value = bd.delta_from_trace_distance(args.eps)
    elif name in bd.BOUNDS:
        _need(args, "eps", "E")
        if name.endswith("_tight"):
            G = bd.growth_osc(1, (1.0,)) if args.growth is None else _growth(args)
        else:
            G = bd.growth_from_hamiltonian(_hamiltonian(args.ham)) if args.growth is None else _growth(args)
        kw = {"complement": True} if name == "cap_cb_ec_tight" and args.complement else {}
        value = bd.BOUNDS[name](args.eps, args.E, G, **kw)
        inputs.update(E=args.E, growth=G.kind, **G.params, **kw)
    else:
        raise UsageError(f"unknown bound {name!r}")
    report = bd.BoundReport(name, inputs, float(value), bd.FORMULAS[name])
    print(dump_json(report.to_dict()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# report

FIELDS = ("id", "suite", "check", "anchor", "instance", "relation", "tier", "tol", "lhs", "rhs", "margin", "passed")


def render_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in records:
        w.writerow([r[f] for f in FIELDS])
    return buf.getvalue()


def render_md(records: list[dict]) -> str:
    recs = vf.records_from_json(records)
    lines = ["| suite | check | anchor | checks | failed | worst margin |", "|---|---|---|---|---|---|"]
    groups: dict = {}
    for r in recs:
        groups.setdefault((r.suite, r.check.rstrip("0123456789_") or r.check), []).append(r)
    for (suite, check), rs in groups.items():
        # worst = closest to failing, measured relative to its tolerance
        worst = min(rs, key=lambda r: (r.margin + r.tol) if r.relation == "le" else (r.tol - r.margin))
        lines.append(f"| {suite} | {check} | {rs[0].anchor} | {len(rs)} | {sum(not r.passed for r in rs)} "
                     f"| {worst.margin:.3e} |")
    total = len(recs)
    failed = sum(not r.passed for r in recs)
    lines += ["", f"{total} checks, {failed} failed"]
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    data = load_json(args.input)
    if not isinstance(data, list):
        raise UsageError("report input must be a list of check records")
    text = render_csv(data) if args.format == "csv" else render_md(data)
    sys.stdout.write(text)
    return EXIT_OK if all(d.get("passed") for d in data) else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcorr", description="Quantum correlation measures and verification campaigns.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=["all", *vf.SUITES])
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--n", type=int, default=None, help="instances per suite (default: suite-specific)")
    v.add_argument("--dims", default=None, help="dimension tuples, e.g. '2,2,2;2,2,3'")
    v.add_argument("--tol-eq", type=float, default=1e-4)
    v.add_argument("--tol-strict", type=float, default=1e-8)
    v.add_argument("--restarts", type=int, default=None)
    v.add_argument("--out", default=None, help="report path ('-' for stdout)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compute", help="evaluate one measure")
    c.add_argument("measure", choices=MEASURES)
    c.add_argument("--state")
    c.add_argument("--povm")
    c.add_argument("--channel")
    c.add_argument("--channel2")
    c.add_argument("--measured", default=None, help="label of the measured subsystem")
    c.add_argument("--keep", default=None, help="label whose marginal entropy is averaged")
    c.add_argument("--a", default=None)
    c.add_argument("--b", default=None)
    c.add_argument("--restarts", type=int, default=16)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_compute)

    b = sub.add_parser("bounds", help="evaluate a continuity bound")
    b.add_argument("name", choices=[*bd.BOUNDS, "delta_from_trace_distance"])
    b.add_argument("--eps", type=float)
    b.add_argument("--d", type=int)
    b.add_argument("--E", type=float)
    b.add_argument("--ham", default=None, help="'number:N' or JSON eigenvalue file (default number:32)")
    b.add_argument("--growth", choices=["osc", "ham"], default=None)
    b.add_argument("--complement", action="store_true")
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("report", help="render a verification report")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--format", choices=["csv", "md"], default="md")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (ValidationError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
