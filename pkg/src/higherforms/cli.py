"""Command line entry point: ``higherforms <command> ...``.

Exit codes: 0 success/pass, 1 verified failure, 2 inconclusive (budget),
3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field as dc_field, fields

from .construct_nf import (
    InadmissibleTargetSet,
    NFConstructionParams,
    TargetSetNF,
    construct_excluding_nf,
    construct_universal,
)
from .construct_z import (
    InadmissibleSet,
    TargetSetZ,
    construct_excluding_z,
    rank_bound_z,
)
from .lattice_nf import BudgetExceeded, compute_Mn, compute_domain, power_subring, reduce_to_F
from .repsearch import SearchBudget, default_max_nodes, verify_exact
from .ring import AlgInt, Field, make_field, parse_algint
from .serialize import SCHEMA, dumps, form_from_json, form_to_json, read_json, write_json
from .waring import WaringParams, choose_waring_params, decompose_z, g

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INVALID = 0, 1, 2, 3


@dataclass
class RunConfig:
    D: int | None = None
    m: int = 4
    A: list = dc_field(default_factory=list)  # coordinates [a, b] (or ints over Q)
    waring: dict | None = None  # {"m", "G_hat", "P_hat"}
    bound: int = 30
    norm_bound: int = 50
    verify_bound: int = 100
    max_nodes: int = dc_field(default_factory=default_max_nodes)
    timeout: float | None = None
    parallel_width: int = 1
    form_path: str = "form.json"
    report_path: str | None = None
    seed: int = 0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, doc: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    def budget(self) -> SearchBudget:
        return SearchBudget(self.max_nodes, self.timeout, self.parallel_width)

    def field(self) -> Field:
        return make_field(self.D)


def _emit(doc, path: str | None) -> None:
    if path:
        write_json(path, doc)
    else:
        sys.stdout.write(dumps(doc))


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_A(text: str | None, field: Field) -> list[AlgInt]:
    if not text:
        return []
    return [parse_algint(s, field) for s in text.split(",") if s.strip()]


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_json(read_json(args.config)) if getattr(args, "config", None) else RunConfig()
    for name in ("D", "m", "bound", "norm_bound", "verify_bound", "max_nodes", "timeout", "parallel_width", "seed"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, name, v)
    if getattr(args, "A", None) is not None:
        field = cfg.field()
        cfg.A = [x.to_json() for x in _parse_A(args.A, field)]
    for src, dst in (("form", "form_path"), ("out", "form_path"), ("report", "report_path")):
        v = getattr(args, src, None)
        if v is not None:
            setattr(cfg, dst, v)
    return cfg


# -- commands -----------------------------------------------------------------


def cmd_construct_z(args) -> int:
    cfg = _config_from_args(args)
    A = TargetSetZ(a if isinstance(a, int) else a[0] for a in cfg.A)
    try:
        Q = construct_excluding_z(A, cfg.m)
    except InadmissibleSet as e:
        _say(f"invalid input: {e}")
        print(dumps({"schema": SCHEMA, "error": "inadmissible", "message": str(e), "witness": list(e.witness)}), end="")
        return EXIT_INVALID
    doc = {
        "schema": SCHEMA,
        "provenance": {
            "construction": "integer exclusion form: threshold form plus coupled diagonal on the small non-targets",
            "field": "Q",
            "m": cfg.m,
            "A": sorted(A.elements),
            "B": A.B,
            "g": g(cfg.m),
            "rank": Q.rank,
            "rank_bound": rank_bound_z(A, cfg.m),
            "caveats": [],
        },
        "form": form_to_json(Q),
    }
    _emit(doc, cfg.form_path)
    _say(f"constructed rank-{Q.rank} form excluding {sorted(A.elements)} (m={cfg.m}) -> {cfg.form_path}")
    return EXIT_OK


def _load_artifact(path: str):
    doc = read_json(path)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"{path}: unsupported schema {doc.get('schema')!r}")
    return doc, form_from_json(doc["form"])


def _finish_report(diff, cfg: RunConfig, extra: dict) -> int:
    doc = {"schema": SCHEMA, "report": diff.to_json(), **extra}
    _emit(doc, cfg.report_path)
    verdict = diff.verdict
    _say(f"verdict: {verdict} ({diff.checked} targets, {diff.nodes} nodes)")
    return {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[verdict]


def cmd_verify_z(args) -> int:
    cfg = _config_from_args(args)
    try:
        doc, Q = _load_artifact(cfg.form_path)
    except (OSError, ValueError, KeyError) as e:
        _say(f"invalid input: {e}")
        return EXIT_INVALID
    if not Q.field.is_rational:
        _say("invalid input: verify-z needs a form over Q")
        return EXIT_INVALID
    A = set(doc.get("provenance", {}).get("A", []))
    diff = verify_exact(Q, lambda t: t.a not in A, cfg.bound, cfg.budget())
    return _finish_report(diff, cfg, {"A": sorted(A), "provenance": doc.get("provenance", {})})


def _nf_params(cfg: RunConfig, field: Field, args) -> NFConstructionParams:
    if getattr(args, "params", None):
        return NFConstructionParams.from_json(read_json(args.params))
    if cfg.waring:
        return NFConstructionParams(WaringParams(**cfg.waring), cfg.verify_bound)
    if field.is_rational:
        return NFConstructionParams(WaringParams(cfg.m, g(cfg.m), 1), cfg.verify_bound)
    wp, exc = choose_waring_params(field, cfg.m, cfg.verify_bound)
    return NFConstructionParams(wp, cfg.verify_bound, exceptions=tuple(tuple(e.element.to_json()) for e in exc))


def cmd_construct_nf(args) -> int:
    cfg = _config_from_args(args)
    field = cfg.field()
    try:
        A0 = TargetSetNF(field, [AlgInt(*(a if isinstance(a, list) else [a, 0]), field) for a in cfg.A])
        params = _nf_params(cfg, field, args)
        if args.universal:
            C, _ = construct_universal(field, cfg.m, params)
        else:
            C = construct_excluding_nf(A0, cfg.m, params)
    except InadmissibleTargetSet as e:
        _say(f"invalid input: {e}")
        a, b = e.witness
        print(dumps({"schema": SCHEMA, "error": "inadmissible", "message": str(e),
                     "witness": [a.to_json(), b.to_json()]}), end="")
        return EXIT_INVALID
    except BudgetExceeded as e:
        _say(f"refused: {e}")
        return EXIT_INCONCLUSIVE
    except ValueError as e:
        _say(f"invalid input: {e}")
        return EXIT_INVALID
    prov = dict(C.provenance)
    prov["A0"] = [a.to_json() for a in A0.A0]
    doc = {"schema": SCHEMA, "provenance": prov, "params": params.to_json(), "form": form_to_json(C.form)}
    _emit(doc, cfg.form_path)
    _say(f"constructed form of rank {C.rank} over {field} -> {cfg.form_path}")
    return EXIT_OK


def cmd_verify_nf(args) -> int:
    cfg = _config_from_args(args)
    try:
        doc, Q = _load_artifact(cfg.form_path)
    except (OSError, ValueError, KeyError) as e:
        _say(f"invalid input: {e}")
        return EXIT_INVALID
    field = Q.field
    layout = doc.get("params", {}).get("layout", "centered")
    dom = compute_domain(field, Q.m, layout)
    A0 = TargetSetNF(field, [AlgInt(a, b, field) for a, b in doc.get("provenance", {}).get("A0", [])])
    reps = A0.orbit_reps(dom)
    zero = AlgInt(0, 0, field)

    def expected(t: AlgInt) -> bool:
        return t == zero or reduce_to_F(t, dom)[1] not in reps

    diff = verify_exact(Q, expected, cfg.norm_bound, cfg.budget(), dom=dom)
    return _finish_report(diff, cfg, {"A0": [a.to_json() for a in A0.A0], "provenance": doc.get("provenance", {})})


def field_info(field: Field, m: int, layout: str = "centered") -> dict:
    doc = {"schema": SCHEMA, "field": field.to_json(), "m": m}
    if field.is_rational:
        doc["omega"] = None
        return doc
    u = field.fundamental_unit
    psr = power_subring(field, m)
    dom = compute_domain(field, m, layout)
    doc.update({
        "omega": "sqrt(D)" if field.omega_kind == "sqrt" else "(1+sqrt(D))/2",
        "unit": u.to_json(),
        "unit_norm": u.norm(),
        "eta": dom.eta.to_json(),
        "power_subring": psr.to_json(),
        "domain": dom.to_json(),
        "M0": compute_Mn(0, dom, psr),
    })
    return doc


def cmd_field_info(args) -> int:
    cfg = _config_from_args(args)
    try:
        field = cfg.field()
        doc = field_info(field, cfg.m, args.layout)
    except ValueError as e:
        _say(f"invalid input: {e}")
        return EXIT_INVALID
    _emit(doc, args.out)
    return EXIT_OK


def cmd_waring(args) -> int:
    cfg = _config_from_args(args)
    try:
        doc = {"schema": SCHEMA, "m": cfg.m, "g": g(cfg.m)}
        ts = [int(s) for s in args.t.split(",")] if args.t else []
        doc["decompositions"] = [{"t": t, "bases": decompose_z(t, cfg.m)} for t in ts]
        if cfg.D is not None:
            wp, exc = choose_waring_params(cfg.field(), cfg.m, cfg.verify_bound)
            doc["field"] = cfg.field().to_json()
            doc["empirical"] = {"params": wp.to_json(), "norm_bound": cfg.verify_bound,
                                "not_sums": [e.element.to_json() for e in exc]}
    except ValueError as e:
        _say(f"invalid input: {e}")
        return EXIT_INVALID
    _emit(doc, args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    cfg = _config_from_args(args)
    rng = random.Random(cfg.seed)
    checks = []

    def check(name, ok):
        checks.append({"name": name, "ok": bool(ok)})

    check("g(2..4)", [g(2), g(3), g(4)] == [4, 9, 19])
    for t in rng.sample(range(1, 2000), 20):
        check(f"decompose_z({t})", sum(b**4 for b in decompose_z(t, 4)) == t)
    K = make_field(2)
    check("unit D=2", K.fundamental_unit == K(1, 1))
    check("power subring D=2 m=2", power_subring(K, 2).r == 2)
    for A in ([], [2], [2, 3]):
        Q = construct_excluding_z(A, 4)
        check(f"exclusion A={A}", verify_exact(Q, lambda t: t.a not in A, 20).verdict == "pass")
    doc = {"schema": SCHEMA, "seed": cfg.seed, "checks": checks, "ok": all(c["ok"] for c in checks)}
    _emit(doc, None)
    return EXIT_OK if doc["ok"] else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="higherforms", description="Higher degree forms that represent prescribed sets.")
    p.add_argument("--config", help="RunConfig JSON file supplying defaults")
    sub = p.add_subparsers(dest="command", required=True)

    def budget_opts(sp):
        sp.add_argument("--max-nodes", dest="max_nodes", type=int)
        sp.add_argument("--timeout", type=float)
        sp.add_argument("--parallel", dest="parallel_width", type=int)
        sp.add_argument("--report", help="write the report JSON here instead of stdout")

    sp = sub.add_parser("construct-z", help="form over Z representing exactly Z>=0 minus A")
    sp.add_argument("--A", help="comma separated positive integers")
    sp.add_argument("--m", type=int)
    sp.add_argument("--out", help="artifact path (default form.json)")
    sp.set_defaults(func=cmd_construct_z)

    sp = sub.add_parser("verify-z", help="exhaustively compare a Z form with its target up to a bound")
    sp.add_argument("--form")
    sp.add_argument("--bound", type=int)
    budget_opts(sp)
    sp.set_defaults(func=cmd_verify_z)

    sp = sub.add_parser("construct-nf", help="exclusion (or universal) form over Q(sqrt D)")
    sp.add_argument("--D", type=int, help="squarefree D > 1; omit for Q")
    sp.add_argument("--m", type=int)
    sp.add_argument("--A", help='comma separated elements "a+b*w"')
    sp.add_argument("--params", help="NFConstructionParams JSON")
    sp.add_argument("--verify-bound", dest="verify_bound", type=int, help="norm bound for choosing Waring parameters")
    sp.add_argument("--universal", action="store_true", help="build the universal form instead")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct_nf)

    sp = sub.add_parser("verify-nf", help="compare represented orbits with the target up to a norm bound")
    sp.add_argument("--form")
    sp.add_argument("--norm-bound", dest="norm_bound", type=int)
    budget_opts(sp)
    sp.set_defaults(func=cmd_verify_nf)

    sp = sub.add_parser("field-info", help="units, power subring and fundamental domain data")
    sp.add_argument("--D", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--layout", default="centered", choices=["centered", "arc"])
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_field_info)

    sp = sub.add_parser("waring", help="g(m), decompositions over Z, empirical field data")
    sp.add_argument("--m", type=int)
    sp.add_argument("--t", help="comma separated integers to decompose")
    sp.add_argument("--D", type=int)
    sp.add_argument("--verify-bound", dest="verify_bound", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_waring)

    sp = sub.add_parser("selftest", help="quick internal consistency checks")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        _say(f"invalid input: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
