"""Command-line front end: catalog, compute, check, verify-chain, selftest.

Exit codes: 0 = success / verdict Holds, 1 = verdict Fails, 2 = precondition
or usage error (a machine-readable JSON error object goes to stderr),
3 = verdict Inconclusive.  Reports embed the resolved configuration and are
byte-stable for identical inputs (no timestamps, deterministic numerics).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import catalog as cat
from .derived import FAMILY_NAMES, derive_family, seq_K, seq_L, seq_Q, seq_S, seq_underline_L
from .errors import UltraweightsError
from .func_core import (
    WeightFn,
    WeightMatrix,
    fn_predicates,
    kappa,
    kappa_fn,
    log_t_grid,
    matrix_from_omega,
    omega_from_seq,
    phi_star_involution_check,
    poisson_imag,
    prec_st,
)
from .relations import (
    cond_invmg,
    cond_liminf,
    cond_liminf2,
    cond_Mmg,
    cond_roquS,
    lambda_membership,
    matrix_braces_preceq,
    r_moderate_growth,
)
from .seq_core import (
    WeightSeq,
    has_moderate_growth,
    is_non_quasianalytic,
    log_convex_minorant,
    seq_equivalent,
    seq_preceq,
    seq_to_csv,
    seq_to_json,
)
from .verdicts import Status, Verdict

DERIVE_CHOICES = ("none", "L", "underlineL", "S", "K", "Q", "omega_M", "kappa", "poisson", "minorant")
CHECK_CHOICES = (
    "preceq", "equiv", "sv", "gamma1", "st", "mg", "mmg",
    "braces-preceq", "rmg", "liminf", "liminf2", "roquS", "invmg", "membership",
)


def _err(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return 2


def load_config(path: str | None) -> dict:
    """Plain key=value configuration; '#' starts a comment."""
    cfg: dict[str, str] = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                k, _, v = line.partition("=")
                cfg[k.strip()] = v.strip()
    return cfg


def _resolved_config(args, cfg: dict) -> dict:
    n = args.n if args.n is not None else int(cfg.get("n", 256))
    lo, hi = -3, 3
    grid_spec = getattr(args, "grid", None) or cfg.get("grid")
    if grid_spec:
        lo_s, _, hi_s = grid_spec.partition("..")
        lo, hi = int(lo_s), int(hi_s)
    return {
        "n": n,
        "grid": grid_spec or f"{lo}..{hi}",
        "grid_values": [float(2.0**e) for e in range(lo, hi + 1)],
    }


def _resolve(uri: str, n: int, grid) -> object:
    """Catalog URIs plus the derived:OP(inner) composition."""
    if uri.startswith("derived:"):
        body = uri[len("derived:"):]
        op, _, rest = body.partition("(")
        if not rest.endswith(")"):
            raise cat.CatalogError(f"malformed derived URI {uri!r}")
        inner = _resolve(rest[:-1], n, grid)
        if isinstance(inner, WeightSeq):
            fns = {"L": seq_L, "underlineL": seq_underline_L, "S": seq_S, "K": seq_K, "Q": seq_Q,
                   "minorant": log_convex_minorant}
            if op not in fns:
                raise cat.CatalogError(f"unknown derived op {op!r}")
            return fns[op](inner, n)
        if isinstance(inner, WeightMatrix):
            if op not in FAMILY_NAMES:
                raise cat.CatalogError(f"unknown family op {op!r}")
            return derive_family(inner, op, n)
        raise cat.CatalogError(f"derived:{op} expects a sequence or matrix")
    return cat.resolve(uri, grid=grid)


# -- catalog --------------------------------------------------------------------


def cmd_catalog(args) -> int:
    rows = cat.entries()
    if args.json:
        print(json.dumps([e.__dict__ | {"make": None} for e in rows], indent=2, default=str))
        return 0
    for e in rows:
        params = f" ({e.params})" if e.params else ""
        print(f"{e.key:16s} [{e.kind}]{params}: {e.doc}")
    return 0


# -- compute --------------------------------------------------------------------


def _csv_table(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def cmd_compute(args) -> int:
    cfg = _resolved_config(args, load_config(args.config))
    n = cfg["n"]
    obj = _resolve(args.entry, n, cfg["grid_values"])
    derive = args.derive

    if isinstance(obj, WeightSeq):
        if derive in ("L", "underlineL", "S", "K", "Q", "minorant"):
            fns = {"L": seq_L, "underlineL": seq_underline_L, "S": seq_S, "K": seq_K, "Q": seq_Q,
                   "minorant": log_convex_minorant}
            out_seq = fns[derive](obj, n)
            if args.format == "json":
                payload = json.dumps(seq_to_json(out_seq, n) | {"config": cfg}, indent=2)
            else:
                col = {"minorant": "log_m"}.get(derive, f"log_{derive}")
                vals = out_seq.values(n)
                payload = _csv_table(["k", col], [(k, float(vals[k])) for k in range(n + 1)])
        elif derive == "omega_M":
            w = omega_from_seq(obj)
            ts = log_t_grid(1.0, 10.0 ** max(4, int(math.log10(max(obj.mu(min(n, 64)), 10.0)) * 2)), n)
            om = w.omega(ts)
            payload = _csv_table(["t", "omega"], zip(map(float, ts), map(float, om)))
        elif derive == "none":
            if args.format == "json":
                payload = json.dumps(seq_to_json(obj, n) | {"config": cfg}, indent=2)
            else:
                payload = seq_to_csv(obj, n)
        else:
            return _err("UsageError", f"derivation {derive!r} does not apply to a sequence")
    elif isinstance(obj, WeightFn):
        ts = log_t_grid(1.0, 1e8, n)
        if derive == "kappa":
            payload = _csv_table(["t", "kappa"], [(float(t), kappa(obj, float(t))) for t in ts])
        elif derive == "poisson":
            payload = _csv_table(["t", "poisson"], [(float(t), poisson_imag(obj, float(t))) for t in ts])
        elif derive == "none":
            rows = []
            for t in ts:
                row = [float(t), float(obj.omega(float(t)))]
                try:
                    row += [kappa(obj, float(t)), poisson_imag(obj, float(t))]
                except UltraweightsError:
                    row += ["", ""]
                rows.append(row)
            payload = _csv_table(["t", "omega", "kappa", "poisson"], rows)
        else:
            return _err("UsageError", f"derivation {derive!r} does not apply to a function")
    elif isinstance(obj, WeightMatrix):
        if derive in FAMILY_NAMES:
            obj = derive_family(obj, derive, n)
        elif derive != "none":
            return _err("UsageError", f"derivation {derive!r} does not apply to a matrix")
        payload = json.dumps(obj.to_json(n) | {"config": cfg}, indent=2)
    else:
        return _err("UsageError", f"cannot compute on {type(obj).__name__}")

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
    if args.plot_data:
        with open(args.plot_data, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload if payload.startswith("{") is False else payload)
    return 0


# -- check ----------------------------------------------------------------------


def cmd_check(args) -> int:
    cfg = _resolved_config(args, load_config(args.config))
    n = cfg["n"]
    grid = cfg["grid_values"]

    def seq(uri):
        o = _resolve(uri, n, grid)
        if not isinstance(o, WeightSeq):
            raise cat.CatalogError(f"{uri!r} is not a sequence")
        return o

    def mat(uri):
        o = _resolve(uri, n, grid)
        if not isinstance(o, WeightMatrix):
            raise cat.CatalogError(f"{uri!r} is not a matrix")
        return o

    def fn(uri):
        o = _resolve(uri, n, grid)
        if not isinstance(o, WeightFn):
            raise cat.CatalogError(f"{uri!r} is not a function")
        return o

    rel = args.relation
    from .relations import prec_SV, prec_gamma1

    if rel == "preceq":
        v = seq_preceq(seq(args.lhs), seq(args.rhs), n)
    elif rel == "equiv":
        v = seq_equivalent(seq(args.lhs), seq(args.rhs), n)
    elif rel == "sv":
        v = prec_SV(seq(args.lhs), seq(args.rhs), n)
    elif rel == "gamma1":
        v = prec_gamma1(seq(args.lhs), seq(args.rhs), n)
    elif rel == "st":
        v = prec_st(fn(args.lhs), fn(args.rhs))
    elif rel == "mg":
        v = has_moderate_growth(seq(args.lhs), n)
    elif rel == "mmg":
        v = cond_Mmg(seq(args.lhs), n)
    elif rel == "braces-preceq":
        v = matrix_braces_preceq(mat(args.lhs), mat(args.rhs), n)
    elif rel == "rmg":
        v = r_moderate_growth(mat(args.lhs), n)
    elif rel == "liminf":
        v = cond_liminf(mat(args.lhs), n)
    elif rel == "liminf2":
        v = cond_liminf2(mat(args.lhs), n)
    elif rel == "roquS":
        m = _resolve(args.lhs, n, grid)
        fam = m if "S[" in getattr(m, "name", "") else derive_family(m, "S", n)
        v = cond_roquS(fam, n)
    elif rel == "invmg":
        v = cond_invmg(mat(args.lhs), n)
    elif rel == "membership":
        with open(args.lhs, "r", encoding="utf-8") as fh:
            a_log = [float(row[args.column]) for row in csv.DictReader(fh)]
        v = lambda_membership(np.asarray(a_log), _resolve(args.rhs, n, grid), min(n, len(a_log) - 1))
    else:
        return _err("UsageError", f"unknown relation {rel!r}")

    print(v.to_json(indent=2))
    return v.exit_code()


# -- verify-chain -----------------------------------------------------------------


def cmd_verify_chain(args) -> int:
    cfg = _resolved_config(args, load_config(args.config))
    n = cfg["n"]
    mat = _resolve(args.matrix, n, cfg["grid_values"])
    if not isinstance(mat, WeightMatrix):
        return _err("UsageError", f"{args.matrix!r} is not a matrix")

    for a in mat.grid:
        if not is_non_quasianalytic(mat.member(a)).holds:
            return _err("QuasianalyticInput", f"member {a:g} of {mat.name} is not certified non-quasianalytic")

    fams = {which: derive_family(mat, which, n) for which in FAMILY_NAMES}
    links: list[dict] = []

    def link(name: str, detail: str, verdict: Verdict) -> None:
        links.append({"name": name, "detail": detail, "verdict": verdict.to_dict()})

    link("S_into_K", "every S member dominated by a K member", matrix_braces_preceq(fams["S"], fams["K"], n))
    link("K_into_Q", "every K member dominated by a Q member", matrix_braces_preceq(fams["K"], fams["Q"], n))
    link("Q_into_K", "every Q member dominated by a K member", matrix_braces_preceq(fams["Q"], fams["K"], n))
    link("K_into_uL", "every K member dominated by a minorant-L member", matrix_braces_preceq(fams["K"], fams["underlineL"], n))
    link("uL_into_L", "minorant never exceeds its source", matrix_braces_preceq(fams["underlineL"], fams["L"], n))

    src = getattr(mat, "source_fn", None)
    if src is not None:
        link("uL_into_K", "reverse inclusion closing the equality loop", matrix_braces_preceq(fams["underlineL"], fams["K"], n))
        try:
            kmat = matrix_from_omega(kappa_fn(src), grid=mat.grid)
            link("kappaMatrix_into_K", "the transform's own matrix embeds into the K family",
                 matrix_braces_preceq(kmat, fams["K"], n))
            link("K_into_kappaMatrix", "and conversely", matrix_braces_preceq(fams["K"], kmat, n))
        except UltraweightsError as e:
            link("kappaMatrix_equals_K", "skipped: " + str(e), Verdict(Status.INCONCLUSIVE, note=str(e)))
        link("family_moderate_growth", "source family has matrix-level moderate growth", r_moderate_growth(mat, min(n, 128)))

    statuses = [lk["verdict"]["status"] for lk in links]
    overall = "Holds" if all(s == "Holds" for s in statuses) else ("Fails" if "Fails" in statuses else "Inconclusive")
    report = {
        "config": cfg | {"matrix": args.matrix},
        "links": links,
        "summary": {
            "overall": overall,
            "holds": statuses.count("Holds"),
            "fails": statuses.count("Fails"),
            "inconclusive": statuses.count("Inconclusive"),
            "warnings": sum((fams[w].warnings for w in FAMILY_NAMES), []),
        },
    }
    text = json.dumps(report, indent=2, default=str)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return {"Holds": 0, "Fails": 1, "Inconclusive": 3}[overall]


# -- selftest ---------------------------------------------------------------------


def cmd_selftest(args) -> int:
    ok = True

    def report(name: str, passed: bool, detail: str = "") -> None:
        nonlocal ok
        ok = ok and passed
        print(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))

    w = cat.make_power_weight(0.5)
    ts = log_t_grid(1.0, 1e6, 10)
    rel = max(abs(kappa(w, float(t)) - float(w.kappa_ref(t))) / float(w.kappa_ref(t)) for t in ts)
    report("transform matches closed form (power 1/2)", rel < 1e-6, f"max rel {rel:.2e}")

    P = poisson_imag(w, 1.0)
    report("harmonic extension at i (power 1/2)", abs(P - math.sqrt(2)) < 1e-6, f"P(i)={P:.9f}")

    sandwich = all(
        poisson_imag(w, float(r)) <= (4 / math.pi) * kappa(w, float(r)) + 1e-6
        and (4 / math.pi) * kappa(w, float(r)) <= 4 * poisson_imag(w, float(r)) + 1e-6
        for r in log_t_grid(1.0, 1e6, 8)
    )
    report("transform sandwich", sandwich)

    report("biconjugate identity (squared log)", phi_star_involution_check(cat.make_log_square_weight()).holds)

    g2 = cat.make_gevrey(2)
    L = seq_L(g2, 64)
    l1 = math.exp(L.log_m(1))
    report("optimal-sequence first term (trigamma)", abs(l1 - 6 / math.pi**2) < 1e-9, f"L_1={l1:.9f}")

    toy = WeightSeq.from_values("toy", [0.0, 2.0, 2.5])
    report("minorant chord", abs(log_convex_minorant(toy, 2).log_m(1) - 1.25) < 1e-12)

    S = seq_S(g2, 128)
    K = seq_K(g2, 128)
    report("derived S and K equivalent at desk truncation", seq_equivalent(S, K, 128).holds)

    print("selftest:", "ok" if ok else "FAILED")
    return 0 if ok else 1


# -- entry ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ultraweights",
        description="Derived optimal weights and order relations for ultradifferentiable weight calculus",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("catalog", help="list built-in weight families")
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(func=cmd_catalog)

    pm = sub.add_parser("compute", help="evaluate an entry or a derived table")
    pm.add_argument("entry", help="entry URI, e.g. seq:gevrey?s=2 or derived:L(seq:gevrey?s=2)")
    pm.add_argument("--derive", choices=DERIVE_CHOICES, default="none")
    pm.add_argument("--n", type=int, default=None)
    pm.add_argument("--out", default=None)
    pm.add_argument("--format", choices=("csv", "json"), default="csv")
    pm.add_argument("--config", default=None)
    pm.add_argument("--grid", default=None, help="dyadic exponent range for matrices, e.g. -3..3")
    pm.add_argument("--plot-data", default=None, help="also write the table as a plot series CSV")
    pm.set_defaults(func=cmd_compute)

    pk = sub.add_parser("check", help="decide an order relation, print the verdict JSON")
    pk.add_argument("relation", choices=CHECK_CHOICES)
    pk.add_argument("--lhs", required=True)
    pk.add_argument("--rhs", default=None)
    pk.add_argument("--n", type=int, default=None)
    pk.add_argument("--column", default="log_a", help="CSV column for membership coefficients")
    pk.add_argument("--config", default=None)
    pk.add_argument("--grid", default=None)
    pk.set_defaults(func=cmd_check)

    pv = sub.add_parser("verify-chain", help="derive all families of a matrix and verify the inclusion chain")
    pv.add_argument("matrix")
    pv.add_argument("--n", type=int, default=None)
    pv.add_argument("--report", default=None)
    pv.add_argument("--config", default=None)
    pv.add_argument("--grid", default=None)
    pv.set_defaults(func=cmd_verify_chain)

    ps = sub.add_parser("selftest", help="quick end-to-end sanity checks")
    ps.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UltraweightsError as e:
        return _err(type(e).__name__, str(e))
    except FileNotFoundError as e:
        return _err("FileNotFound", str(e))


if __name__ == "__main__":
    raise SystemExit(main())
