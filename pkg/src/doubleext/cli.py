"""Command line entry point.

    doubleext verify S --N 8
    doubleext verify ./ring.de --json
    doubleext suite --only A,B,C
    doubleext list-families
    doubleext dual Z --params f=2
    doubleext enumerate --q 3 --P 2,0 --Q 2,0 --workers 4 --out sols.txt
    doubleext normals C
    doubleext dual-dims O

Exit codes: 0 pass, 1 a check failed, 2 usage or input error.
The default degree bound comes from DEXT_DEGREE_BOUND (8 if unset).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from typing import Dict, List, Optional

from . import catalog, dext, diagnostics, enumeration
from .exactnum import ParseError, parse_field
from .freealg import format_poly
from .ncgb import DegreeBoundError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MIN_N = 4  # the normal-element claims reach degree 4
CHECKS = ("system_c", "r3_cross_check", "hilbert_14641", "koszul_dual", "resolution", "lemma22",
          "detsigma_match", "ore_flags", "duality_witness", "normal_claims")


class UsageError(Exception):
    pass


def default_n() -> int:
    raw = os.environ.get("DEXT_DEGREE_BOUND", "8")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"DEXT_DEGREE_BOUND must be an integer, got {raw!r}")


# ---------------------------------------------------------------- reports

@dataclass
class CheckResult:
    status: str  # pass, fail, skip
    detail: str = ""
    seconds: float = 0.0


@dataclass
class VerifyReport:
    target: str
    kind: str  # family or file
    params: Dict[str, str]
    field: str
    N: int
    relations: List[str] = dc_field(default_factory=list)
    checks: Dict[str, CheckResult] = dc_field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if all(c.status != "fail" for c in self.checks.values()) else "fail"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> "VerifyReport":
        checks = {k: CheckResult(**v) for k, v in d["checks"].items()}
        return cls(d["target"], d["kind"], dict(d["params"]), d["field"], d["N"], list(d["relations"]), checks)

    @classmethod
    def from_json(cls, text: str) -> "VerifyReport":
        return cls.from_dict(json.loads(text))


def _timed(report: VerifyReport, name: str, fn):
    t0 = time.perf_counter()
    status, detail = fn()
    report.checks[name] = CheckResult(status, detail, round(time.perf_counter() - t0, 4))


def run_checks(d: dext.DEData, N: int, target: str, kind: str, params: Dict[str, str],
               spec: Optional[catalog.Specialization] = None) -> VerifyReport:
    pres = diagnostics.presentation(d)
    rep = VerifyReport(target, kind, params, d.field.spec(), N,
                       [format_poly(r) for r in pres.relations])
    fmt = d.field.format
    rec = catalog.get(target) if kind == "family" else None
    state = {}

    def system_c():
        r = dext.check_system_c(d)
        bad = list(r.violations) + ([] if r.det_nonzero else ["det Sigma = 0"])
        return ("pass" if r.ok else "fail"), ", ".join(bad)

    def r3():
        lit = [v for v in dext.check_system_c(d).violations if v[1] in "456"]
        alt = dext.check_r3_trimmed(d).violations
        if lit != alt:
            return "fail", f"literal {lit} vs composition {alt}"
        return ("pass" if not alt else "fail"), ", ".join(alt)

    def hilbert():
        t = diagnostics.check_type_14641(pres, N)
        state["dims"] = t.dims
        return ("pass" if t.ok else "fail"), f"dims {t.dims}" + ("; " + "; ".join(t.failures) if t.failures else "")

    def koszul():
        kd = diagnostics.koszul_dual_dims(pres, N, state.get("dims"))
        want = ([1, 4, 6, 4, 1] + [0] * N)[:N + 1]
        ok = kd.dual_dims == want and kd.euler_ok
        return ("pass" if ok else "fail"), f"dual dims {kd.dual_dims}, Euler identity {'holds' if kd.euler_ok else 'fails'}"

    def resolution():
        try:
            rp = diagnostics.resolution_matrices(pres, N)
        except diagnostics.ResolutionError as e:
            return "fail", str(e)
        state["rp"] = rp
        bad = diagnostics.resolution_identities(rp, pres, N)
        xp = ", ".join(format_poly(x) for x in rp.xprime)
        return ("pass" if not bad else "fail"), (f"kernel {rp.kernel_dim}, left kernel {rp.left_kernel_dim}, "
                                                 f"x' = ({xp})" + ("; " + "; ".join(bad) if bad else ""))

    def lemma22():
        if "rp" not in state:
            return "fail", "no resolution matrices"
        r = diagnostics.check_lemma22(state["rp"], pres)
        return ("pass" if r.ok else "fail"), "; ".join(r.failures)

    def detsigma():
        got = dext.det_sigma(d)
        text = "[" + "; ".join(", ".join(fmt(x) for x in row) for row in got) + "]"
        if rec is None:
            return "skip", text
        want = catalog.expected_detsigma(rec.name, spec.values(), d.field)
        ok = [list(r) for r in got] == [list(r) for r in want]
        return ("pass" if ok else "fail"), text if ok else f"{text}, expected [" + "; ".join(
            ", ".join(fmt(x) for x in row) for row in want) + "]"

    def ore():
        flags = sorted(k for k, v in dext.ore_flags(d).items() if v)
        text = ", ".join(flags) or "none"
        if rec is None:
            return "pass", text
        ok = flags == sorted(rec.ore_flags)
        return ("pass" if ok else "fail"), text if ok else f"{text}, expected {', '.join(rec.ore_flags) or 'none'}"

    def witness():
        if rec is None:
            return "skip", "not a catalog family"
        partner = catalog.partner_of(rec.name)
        if partner is None:
            return "skip", "no duality partner"
        if rec.witness is None:
            return "skip", f"pair certified by the witness stored on {partner}"
        try:
            w = catalog.witness_check(rec.name, spec)
        except catalog.ConstraintError as e:
            return "fail", str(e)
        return ("pass" if w.ok else "fail"), f"dual ~ {w.partner} over {w.field}"

    def normals():
        if rec is None or not rec.normal_claims:
            return "skip", "no stored claims"
        res = diagnostics.verify_family_normals(rec.name, spec, N)
        bad = [r.element + " / " + r.W for r in res if not r.ok]
        return ("pass" if not bad else "fail"), f"{len(res) - len(bad)}/{len(res)} claims" + (
            "; failing " + ", ".join(bad) if bad else "")

    steps = [("system_c", system_c), ("r3_cross_check", r3), ("hilbert_14641", hilbert), ("koszul_dual", koszul),
             ("resolution", resolution), ("lemma22", lemma22), ("detsigma_match", detsigma), ("ore_flags", ore),
             ("duality_witness", witness), ("normal_claims", normals)]
    for name, fn in steps:
        _timed(rep, name, fn)
    return rep


# ---------------------------------------------------------------- target resolution

def _parse_params(items: Optional[List[str]]) -> Dict[str, str]:
    out = {}
    for item in items or []:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise UsageError(f"parameter {part!r} is not of the form name=value")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def family_spec(name: str, params: Dict[str, str], field_text: Optional[str]) -> catalog.Specialization:
    rec = catalog.get(name)
    if not params and not field_text:
        return rec.specializations[0]
    params = dict(params)
    if "h" in rec.params and "h" not in params:
        params["h"] = "1"
    fld = field_text or rec.minpoly or "Q"
    ordered = tuple((k, params[k]) for k in rec.params if k in params)
    extra = tuple((k, v) for k, v in params.items() if k not in rec.params)
    return catalog.Specialization(fld, ordered + extra)


def load_target(target: str, params, field_text):
    """(DEData, kind, canonical target name, params dict, spec or None)."""
    if os.path.exists(target) or target.endswith(".de"):
        try:
            with open(target, encoding="utf-8") as fh:
                d = dext.parse_de(fh.read())
        except OSError as e:
            raise UsageError(f"cannot read {target}: {e}")
        return d, "file", target, {}, None
    try:
        rec = catalog.get(target)
    except KeyError:
        raise UsageError(f"unknown family or missing file {target!r}")
    spec = family_spec(rec.name, params, field_text)
    d = catalog.instantiate_spec(rec.name, spec)
    return d, "family", rec.name, dict(spec.params), spec


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    N = args.N if args.N is not None else default_n()
    if N < MIN_N:
        raise UsageError(f"degree bound N={N} is below {MIN_N}, the least degree the checks need")
    if (args.target is None) == (args.sigma_file is None):
        raise UsageError("give exactly one of a target or --sigma-file")
    target = args.target or args.sigma_file
    if args.sigma_file and not os.path.exists(target):
        raise UsageError(f"cannot read {target}")
    d, kind, name, params, spec = load_target(target, _parse_params(args.params), args.field)
    rep = run_checks(d, N, name, kind, params, spec)
    if args.json:
        print(rep.to_json())
    else:
        print(f"{name} ({kind}) {', '.join(f'{k}={v}' for k, v in params.items())} over {rep.field}, N={N}")
        for r in rep.relations:
            print(f"  relation  {r}")
        for k, c in rep.checks.items():
            print(f"  {k:16s} {c.status:5s} {c.detail}")
        print(f"overall: {rep.status}")
    return EXIT_PASS if rep.status == "pass" else EXIT_FAIL


def _suite_unit(args):
    name, spec, N = args
    d = catalog.instantiate_spec(name, spec)
    return name, spec.label(), run_checks(d, N, name, "family", dict(spec.params), spec).to_dict()


def run_suite(names: List[str], N: int, workers: int = 1):
    units = [(n, sp, N) for n in names for sp in catalog.default_specializations(n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_suite_unit, units))
    else:
        results = [_suite_unit(u) for u in units]
    by_family: Dict[str, list] = {n: [] for n in names}
    for name, label, rep in results:
        by_family[name].append((label, rep))
    return by_family


def cmd_suite(args) -> int:
    N = args.N if args.N is not None else default_n()
    if N < MIN_N:
        raise UsageError(f"degree bound N={N} is below {MIN_N}")
    names = catalog.family_names()
    if args.only:
        try:
            names = [catalog.get(x).name for x in args.only.split(",") if x.strip()]
        except KeyError as e:
            raise UsageError(str(e))
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    by_family = run_suite(names, N, workers)
    passed = 0
    rows = []
    for name in names:
        reps = by_family[name]
        failing = sorted({k for _, r in reps for k, c in r["checks"].items() if c["status"] == "fail"})
        ok = not failing
        passed += ok
        rows.append({"family": name, "symbol": catalog.get(name).symbol, "runs": len(reps),
                     "passed": sum(r["status"] == "pass" for _, r in reps), "failing_checks": failing,
                     "status": "pass" if ok else "fail"})
    if args.json:
        print(json.dumps({"families": rows, "passed": passed, "total": len(names),
                          "reports": {n: [r for _, r in by_family[n]] for n in names}}, indent=2, ensure_ascii=False))
    else:
        for r in rows:
            fail = ", ".join(r["failing_checks"])
            print(f"{r['family']}  {r['symbol']}  {r['passed']}/{r['runs']}  {r['status']}  {fail}")
        print(f"{passed}/{len(names)} families pass")
    return EXIT_PASS if passed == len(names) else EXIT_FAIL


def cmd_list(args) -> int:
    for name in catalog.family_names():
        rec = catalog.get(name)
        cons = "; ".join(c.label for c in rec.constraints) or "-"
        dual = {catalog.SELFDUAL: "selfdual", catalog.NONE: "-"}.get(rec.duality, rec.duality)
        print(f"{rec.name} {rec.symbol}  params={','.join(rec.params)}  P=({', '.join(rec.P)})  "
              f"Q=({', '.join(rec.Q)})  constraints: {cons}  dual: {dual}")
    return EXIT_PASS


def cmd_dual(args) -> int:
    d, kind, name, params, spec = load_target(args.target, _parse_params(args.params), args.field)
    print("# dual data (P°, Q°, M)")
    print(dext.dual_data(d).to_text(), end="")
    if kind != "family":
        return EXIT_PASS
    rec = catalog.get(name)
    if rec.witness is None:
        partner = catalog.partner_of(name)
        print(f"# no stored witness on {name}" + (f"; see {partner}" if partner else ""))
        return EXIT_PASS
    w = catalog.witness_check(name, spec)
    print(f"# witness: dual({name}) ~ {w.partner} over {w.field}: {'certified' if w.ok else 'FAILED'}")
    return EXIT_PASS if w.ok else EXIT_FAIL


def _pair(text: str):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected two integers like 1,0, got {text!r}")
    return a, b


def cmd_enumerate(args) -> int:
    if not enumeration.is_prime(args.q):
        raise UsageError(f"q = {args.q} is not prime")
    P, Q = _pair(args.P), _pair(args.Q)
    try:
        sols = enumeration.enumerate_csolutions(args.q, P, Q, workers=args.workers)
    except ValueError as e:
        raise UsageError(str(e))
    lines = [enumeration.format_sigma(s) for s in sols]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    else:
        for line in lines:
            print(line)
    summary = enumeration.bucket_solutions(sols, args.q, P, Q)
    print(f"# q={args.q} P={P} Q={Q}: {summary.total} solutions, {summary.non_ore} outside every Ore bucket")
    print("# S12=0 S21=0 M12=0 M21=0  charpoly(det sigma)  count")
    for key, n in summary.rows():
        flags = " ".join("y" if b else "n" for b in key[:4])
        print(f"# {flags}  t^2+{key[4][1]}t+{key[4][2]}  {n}")
    status = EXIT_PASS
    if args.naive:
        naive = enumeration.naive_csolutions(args.q, P, Q)
        same = set(naive) == set(sols)
        print(f"# naive scan: {len(naive)} solutions, {'identical' if same else 'DIFFERENT'}")
        status = EXIT_PASS if same else EXIT_FAIL
    return status


def cmd_normals(args) -> int:
    rec = catalog.get(args.family)
    spec = family_spec(rec.name, _parse_params(args.params), args.field)
    N = args.N if args.N is not None else default_n()
    if not rec.normal_claims:
        print(f"{rec.name}: no stored normal-element claims")
        return EXIT_PASS
    res = diagnostics.verify_family_normals(rec.name, spec, N)
    for r in res:
        print(f"{r.element:14s} W={r.W:5s} normal={'yes' if r.normal else 'NO'}")
        for text, ok in r.identities:
            print(f"    {'ok ' if ok else 'BAD'} {text}")
    return EXIT_PASS if all(r.ok for r in res) else EXIT_FAIL


def cmd_dual_dims(args) -> int:
    N = args.N if args.N is not None else default_n()
    d, kind, name, params, spec = load_target(args.target, _parse_params(args.params), args.field)
    kd = diagnostics.koszul_dual_dims(diagnostics.presentation(d), N)
    print(f"dual relations: {kd.dual_relation_dim}")
    print(f"dual dims: {tuple(kd.dual_dims)}")
    print(f"Euler identity: {'holds' if kd.euler_ok else 'fails'}")
    want = ([1, 4, 6, 4, 1] + [0] * N)[:N + 1]
    return EXIT_PASS if kd.dual_dims == want and kd.euler_ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="doubleext", description="Checks for trimmed double extensions.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def target_opts(sp, with_n=True):
        sp.add_argument("--params", action="append", help="name=value pairs, comma separated")
        sp.add_argument("--field", help="coefficient field, e.g. Q, Q(a^2+1), GF(7)")
        if with_n:
            sp.add_argument("--N", type=int, default=None, help="degree bound")

    v = sub.add_parser("verify", help="run every check on a family or a .de file")
    v.add_argument("target", nargs="?")
    v.add_argument("--sigma-file", help="a .de file (same as giving the path as target)")
    target_opts(v)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="verify all families at their default specializations")
    s.add_argument("--only", help="comma separated family letters")
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_suite)

    l = sub.add_parser("list-families", help="one line per family")
    l.set_defaults(func=cmd_list)

    du = sub.add_parser("dual", help="dual data and the stored duality witness")
    du.add_argument("target")
    target_opts(du, with_n=False)
    du.set_defaults(func=cmd_dual)

    e = sub.add_parser("enumerate", help="all System C solutions over GF(q)")
    e.add_argument("--q", type=int, default=3)
    e.add_argument("--P", default="1,0")
    e.add_argument("--Q", default="1,0")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out")
    e.add_argument("--naive", action="store_true", help="also run the full-scan oracle and compare")
    e.set_defaults(func=cmd_enumerate)

    n = sub.add_parser("normals", help="check the stored normal-element claims")
    n.add_argument("family")
    target_opts(n)
    n.set_defaults(func=cmd_normals)

    dd = sub.add_parser("dual-dims", help="graded dims of the quadratic dual")
    dd.add_argument("target")
    target_opts(dd)
    dd.set_defaults(func=cmd_dual_dims)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, ParseError, catalog.ConstraintError, dext.DataError, DegreeBoundError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
