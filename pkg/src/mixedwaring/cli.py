"""Command-line entry point: ``mixedwaring <command> ...``.

Exit status: 0 success, 2 invalid input, 3 resource cap hit, 4 integrity
failure.  Errors are reported as one JSON object on stderr.  Every JSON
artifact carries the toolkit version, a hash of the resolved configuration
and the rule identifiers it used.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, _accel
from .core import ExponentSequence, ProgressionSpec, box_sizes
from .errors import IntegrityError, ResourceLimitError
from .local_density import (
    DEFAULT_PCUT,
    MODULUS_CAP,
    euler_factor,
    lemma_hypotheses,
    sigma_positivity_report,
    singular_series,
)
from .representations import (
    MAX_TABLE,
    MAX_WINDOW_BYTES,
    METHODS,
    count_representations,
    count_window,
    empirical_vs_prediction,
    exceptional_scan,
)

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE, EXIT_INTEGRITY = 0, 2, 3, 4

# keys that never feed the config hash
_UNHASHED = {"func", "config", "out_dir", "out", "emit", "threads"}


# --------------------------------------------------------------------------
# serialisation
# --------------------------------------------------------------------------

def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (tuple, set)):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_default, allow_nan=False)


def config_hash(args: argparse.Namespace) -> str:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k not in _UNHASHED}
    blob = json.dumps(resolved, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _meta(args, rules) -> dict:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k not in _UNHASHED}
    return {"version": __version__, "config_hash": config_hash(args), "rules": list(rules),
            "config": json.loads(json.dumps(resolved, default=str)), "backend": _accel.backend()}


def _emit(args, payload: dict, name: str, rules=()) -> int:
    payload = dict(payload)
    payload["meta"] = _meta(args, rules)
    text = dumps(payload)
    print(text)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(text + "\n")
    return EXIT_OK


def _out_path(args, path: str | None) -> Path | None:
    if not path:
        return None
    p = Path(path)
    if args.out_dir and not p.is_absolute():
        p = Path(args.out_dir) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(header)
        w.writerows(rows)


def _parse_pair(text: str) -> tuple[int, int]:
    parts = [t for t in str(text).replace(" ", "").split(",") if t]
    if len(parts) != 2:
        raise ValueError(f"expected 'k,r', got {text!r}")
    return int(parts[0]), int(parts[1])


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_smooth(args) -> int:
    from .smooth import sieve_smooth

    if args.r < 2:
        raise ValueError(f"R must be >= 2, got {args.r}")
    sset = sieve_smooth(args.p, args.r)
    path = _out_path(args, args.emit)
    if path:
        _write_csv(path, None, ([int(x)] for x in sset.members))
    return _emit(args, {"kind": "smooth", "P": args.p, "R": args.r,
                        "cardinality": sset.cardinality, "density": sset.density}, "smooth")


def cmd_exponents(args) -> int:
    from .exponents import AdmissibleFamily, default_family, delta_star, omega, tau_search

    fam = default_family(args.k) if args.family is None else AdmissibleFamily(args.k, args.family)
    t, w = tau_search(args.k, fam)
    out = {"kind": "exponents", "k": args.k, "family": fam.source, "tau": t, "tau_argmax_w": w,
           "omega": omega(args.k), "t_grid": "integers, endpoint s-2, 1/8 refinement near argmin"}
    if args.v is not None:
        out["delta_v"] = fam.delta(Fraction(args.v) if fam.exact else args.v)
        out["v"] = args.v
    if args.s is not None:
        out["delta_star"] = delta_star(args.k, Fraction(args.s) if fam.exact else args.s, fam)
        out["s"] = args.s
    return _emit(args, out, "exponents", ["admissible_delta", "tau", "delta_star", "omega"])


def _generator(spec: dict):
    from . import thresholds as th

    if spec.get("ks"):
        ks = ExponentSequence.coerce(spec["ks"])
        return th.finite_sequence(ks), {"ks": list(ks.ks)}
    if spec.get("ks_constant") is not None:
        k = int(spec["ks_constant"])
        if k < 2:
            raise ValueError(f"exponents must be nondecreasing integers >= 2, got constant {k}")
        return th.constant_sequence(k), {"ks_constant": k}
    if spec.get("progression"):
        k, r = _parse_pair(spec["progression"])
        ProgressionSpec(k, r, 1)
        return th.progression_sequence(k, r), {"progression": [k, r]}
    raise ValueError("give one of --ks, --ks-constant or --progression")


def threshold_result(spec: dict) -> dict:
    """Evaluate one threshold request given as a plain dict (CLI flags or a batch line)."""
    from . import thresholds as th

    rule = spec.get("rule")
    limit = int(spec.get("scan_limit") or th.DEFAULT_SCAN_LIMIT)
    s = spec.get("s")
    if rule in ("thm11", "cor12") or (rule == "eq49" and not spec.get("ks")):
        gen, source = _generator(spec)
        if rule == "thm11":
            rep = th.thm11_min_s(gen, limit)
        elif rule == "cor12":
            rep = th.cor12_min_s(int(spec.get("j") or 1), gen, limit)
        else:
            rep = th.eq49_min_s(gen, limit)
        out = rep.to_dict()
        out["source"] = source
        return out
    if rule == "eq49":
        rep, margin = th.eq49_check(spec["ks"])
        out = rep.to_dict()
        out["minor_arc"] = margin.to_dict()
        return out
    if not spec.get("progression"):
        raise ValueError(f"rule {rule!r} needs --progression k,r")
    k, r = _parse_pair(spec["progression"])
    if rule == "thm13":
        out = th.thm13_report(k, r).to_dict()
        if r == 1:
            out["extra"]["Cor14"] = th.cor14_bound(k)
        if r == k:
            out["extra"]["Cor15"] = th.cor15_bound(k)
        return out
    if rule == "cor44":
        return (th.cor44_check(k, r, int(s)) if s else th.cor44_min_s(k, r)).to_dict()
    if rule == "eq55":
        return (th.eq55_check(k, r, int(s)) if s else th.eq55_min_s(k, r)).to_dict()
    if rule == "theta2":
        if not s:
            raise ValueError("rule theta2 needs --s")
        return th.theta2_margin(k, r, int(s)).to_dict()
    raise ValueError(f"unknown rule {rule!r}")


_THRESHOLD_KEYS = ("rule", "ks", "ks_constant", "progression", "s", "j", "scan_limit")


def cmd_thresholds(args) -> int:
    if args.batch:
        lines = Path(args.batch).read_text().splitlines()
        for lineno, line in enumerate(lines, 1):
            if not line.strip():
                continue
            try:
                spec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"batch line {lineno}: {exc}") from None
            if not isinstance(spec, dict) or set(spec) - set(_THRESHOLD_KEYS):
                raise ValueError(f"batch line {lineno}: keys must be among {_THRESHOLD_KEYS}")
            result = threshold_result(spec)
            result["kind"] = "threshold"
            result["meta"] = _meta(args, [result.get("rule", spec.get("rule"))])
            print(json.dumps(result, sort_keys=True, default=_default))
        return EXIT_OK
    if not args.rule:
        raise ValueError("--rule is required unless --batch is given")
    spec = {key: getattr(args, key) for key in _THRESHOLD_KEYS}
    result = threshold_result(spec)
    result["kind"] = "threshold"
    return _emit(args, result, "thresholds", [result.get("rule", args.rule)])


def cmd_weyl_sum(args) -> int:
    from .weyl import canonical_alpha, lambda_height, parse_alpha, smooth_weyl_sum, weyl_envelope

    alpha = canonical_alpha(args.alpha)
    R = args.r if args.r is not None else args.p
    val = smooth_weyl_sum(alpha, args.p, R, args.k)
    pt = lambda_height(alpha, args.p, args.k)
    env = weyl_envelope(pt.lambda_float, args.p, args.k)
    out = {
        "kind": "weyl_sum", "alpha": f"{alpha.numerator}/{alpha.denominator}",
        "alpha_rounded": alpha != parse_alpha(args.alpha),
        "P": args.p, "R": R, "k": args.k, "value": val.value, "abs": abs(val.value),
        "terms": val.terms, "compensation_error": val.compensation_error,
        "q": pt.q, "a": pt.a, "lambda": pt.lam, "envelope": env, "ratio": abs(val.value) / env,
    }
    return _emit(args, out, "weyl_sum", ["weyl_lambda_envelope"])


def cmd_weyl_scan(args) -> int:
    from .weyl import ScanRow, minor_arc_sup_scan

    R = args.r if args.r is not None else args.p
    Q = Fraction(args.q) if args.q is not None else None
    scan = minor_arc_sup_scan(args.p, R, args.k, Q, args.samples, args.seed)
    path = _out_path(args, args.out)
    if path:
        _write_csv(path, ScanRow.CSV_HEADER, (row.csv_row() for row in scan.rows))
    out = scan.summary()
    out["kind"] = "weyl_scan"
    return _emit(args, out, "weyl_scan", ["minor_arc_sup"])


def cmd_sigma(args) -> int:
    from .smooth import primes_up_to

    ks = ExponentSequence.coerce(args.ks)
    ss = singular_series(ks, args.n, args.x, exact=args.exact, cap=args.max_modulus)
    out = {"kind": "sigma", "ks": list(ks.ks), "n": args.n, "X": args.x, "p_cut": args.pcut,
           "series": ss.to_dict()}
    if lemma_hypotheses(ks.ks):
        rep = sigma_positivity_report(ks, args.n, args.x, args.pcut, cap=args.max_modulus)
        out["positivity"] = rep.to_dict()
        out["ladders"] = {str(p): t.to_dict() for p, t in rep.tables.items()}
    else:
        out["ladders"] = {str(int(p)): euler_factor(ks, args.n, int(p), cap=args.max_modulus).to_dict()
                          for p in primes_up_to(args.pcut)}
        out["positivity"] = None
        out["note"] = "local solubility certificates need s >= 4 k_1 and theta > 2"
    path = _out_path(args, args.out)
    if path:
        path.write_text(dumps(out) + "\n")
    return _emit(args, out, "sigma", ["u_n", "singular_series", "euler_factor", "unit_congruence", "sigma_positivity"])


def cmd_predict(args) -> int:
    from .main_term import gamma_main_term, j_truncated, predict_count

    ks = ExponentSequence.coerce(args.ks)
    pred = predict_count(ks, args.n, args.x, args.eta)
    out = pred.to_dict()
    out["kind"] = "prediction"
    out["gamma_main_term"] = gamma_main_term(ks, args.n)
    out["box_sizes"] = list(box_sizes(ks, args.n))
    if args.j:
        out["j_truncated"] = j_truncated(ks, args.n, args.x).to_dict()
    return _emit(args, out, "predict", ["singular_integral", "gamma_main_term", "prediction"])


def cmd_count(args) -> int:
    eta = None if args.eta is None or args.eta == 1 else args.eta
    res = count_representations(args.ks, args.n, eta, args.method, args.max_table)
    ks = ExponentSequence.coerce(args.ks)
    return _emit(args, {"kind": "count", "ks": list(ks.ks), "n": res.n, "count": res.count,
                        "constraint": res.constraint, "method": res.method}, "count", ["representation_count"])


def cmd_scan(args) -> int:
    ks = ExponentSequence.coerce(args.ks)
    eta = None if args.eta is None or args.eta == 1 else args.eta
    scan = count_window(ks, args.n0, args.n1, eta, args.max_window_bytes)
    path = _out_path(args, args.out)
    if path:
        _write_csv(path, ("n", "count"), scan.rows())
    out = {"kind": "scan", "ks": list(ks.ks), "N0": args.n0, "N1": args.n1,
           "constraint": "none" if eta is None else f"smooth({eta})",
           "zero_set": scan.zero_set, "total": int(sum(int(c) for c in scan.counts))}
    rules = ["representation_count"]
    if args.x is not None:
        if eta is not None:
            raise ValueError("prediction statistics are only defined for eta = 1")
        out["stats"] = empirical_vs_prediction(ks, args.n0, args.n1, args.x, scan).to_dict()
        rules.append("prediction")
    return _emit(args, out, "scan", rules)


def cmd_exceptions(args) -> int:
    eta = None if args.eta is None or args.eta == 1 else args.eta
    res = exceptional_scan(args.ks, args.limit, eta)
    out = res.to_dict()
    out["kind"] = "exceptions"
    return _emit(args, out, "exceptions", ["exceptional_set"])


def _load_bundle(paths) -> list[tuple[str, dict]]:
    files: list[Path] = []
    for p in paths or []:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob("*.json")))
        elif p.exists():
            files.append(p)
        else:
            raise ValueError(f"missing artifact {p}")
    items = []
    for f in files:
        if f.name.startswith("report"):
            continue
        try:
            data = json.loads(f.read_text())
        except json.JSONDecodeError as exc:
            raise ValueError(f"{f}: not JSON ({exc})") from None
        if not isinstance(data, dict) or "kind" not in data or "meta" not in data:
            raise ValueError(f"{f}: not a toolkit artifact (missing kind/meta)")
        items.append((str(f), data))
    if not items:
        raise ValueError("empty bundle: no artifacts to report on")
    return items


def _render_markdown(ks, items) -> str:
    lines = [f"# Summary for ks = {ks}", ""]
    for path, data in items:
        kind = data["kind"]
        lines.append(f"## {kind} ({Path(path).name})")
        if kind == "scan":
            lines.append(f"- window [{data['N0']}, {data['N1']}), zero set size {len(data['zero_set'])}")
            if data.get("stats"):
                st = data["stats"]
                lines.append(f"- mean ratio {st['mean']:.6f}, median {st['median']:.6f}, min {st['min']:.6f}")
        elif kind == "sigma":
            lines.append(f"- S(n; X) = {data['series']['value']:.10g} at n = {data['n']}, X = {data['X']}")
        elif kind == "prediction":
            lines.append(f"- main term {data['main_term']:.10g} at n = {data['n']}")
        elif kind == "threshold":
            lines.append(f"- rule {data.get('rule')}: min_s = {data.get('min_s')}")
        elif kind == "exceptions":
            lines.append(f"- {data['size']} exceptions up to {data['N']}, largest {data['largest']}")
        elif kind == "count":
            lines.append(f"- n = {data['n']}: {data['count']} representations ({data['method']})")
        else:
            lines.append("- see JSON summary")
        lines.append("")
    return "\n".join(lines)


def cmd_report(args) -> int:
    items = _load_bundle(args.inputs)
    seen = {}
    for path, data in items:
        if "ks" in data:
            seen.setdefault(tuple(data["ks"]), []).append(path)
    if len(seen) > 1:
        diff = {str(list(k)): v for k, v in seen.items()}
        raise ValueError(f"artifacts disagree on ks: {json.dumps(diff, sort_keys=True)}")
    ks = list(next(iter(seen))) if seen else None
    summary = {"kind": "report", "ks": ks, "artifacts": []}
    for path, data in items:
        entry = {"path": path, "kind": data["kind"], "config_hash": data["meta"].get("config_hash")}
        if data["kind"] == "scan" and data.get("stats"):
            entry["mean_ratio"] = data["stats"]["mean"]
            summary["mean_ratio"] = data["stats"]["mean"]
        if data["kind"] == "sigma":
            entry["sigma"] = data["series"]["value"]
        if data["kind"] == "prediction":
            entry["main_term"] = data["main_term"]
        if data["kind"] == "threshold":
            entry["rule"] = data.get("rule")
            entry["min_s"] = data.get("min_s")
        summary["artifacts"].append(entry)
    out_dir = Path(args.out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.md").write_text(_render_markdown(ks, items) + "\n")
    return _emit(args, summary, "report")


def run_selftest() -> list[dict]:
    """Constant checks plus the exact-identity suites.  Raises IntegrityError on failure."""
    from .exponents import constant_checks, tau
    from .local_density import u_n, u_n_exact
    from .main_term import gamma_main_term
    from .thresholds import constant_sequence, cor12_min_s, thm13_bound

    results = [{"check": c.name, "lhs": c.lhs, "rhs": c.rhs, "ok": c.ok} for c in constant_checks()]

    def record(name, ok):
        results.append({"check": name, "ok": bool(ok)})
        if not ok:
            raise IntegrityError(f"selftest failed: {name}")

    record("tau(2,hua)=1/8", tau(2, "hua") == Fraction(1, 8))
    record("tau(3,hua)=3/64", tau(3, "hua") == Fraction(3, 64))
    record("gamma(3/2)^2=pi/4", abs(gamma_main_term((2, 2), 1) - math.pi / 4) < 1e-12)
    ks = (2, 3, 4)
    ladder_ok = all(euler_factor(ks, n, p, nu_max=3).ladder_ok for n in range(6) for p in (2, 3, 5))
    record("ladder identity", ladder_ok)
    mult_ok = all(
        u_n_exact(ks, n, a * b) == u_n_exact(ks, n, a) * u_n_exact(ks, n, b)
        for n in range(6) for a in range(1, 13) for b in range(1, 13)
        if math.gcd(a, b) == 1 and a * b <= 60
    )
    record("multiplicativity of U_n", mult_ok)
    for q in range(1, 61):
        u_n(ks, 5, q)
    record("dual-route U_n, q <= 60", True)
    record("cor12 constant 2 -> 13", cor12_min_s(1, constant_sequence(2)).min_s == 13)
    record("thm13(k,1) = 100(k+1)^2", all(thm13_bound(k, 1) == 100 * (k + 1) ** 2 for k in range(2, 51)))
    agree = all(
        count_representations(ks, n, method="naive").count == count_representations(ks, n).count
        == count_representations(ks, n, method="convolution").count
        for n in range(1, 201)
    )
    record("count methods agree, n <= 200", agree)
    return results


def cmd_selftest(args) -> int:
    return _emit(args, {"kind": "selftest", "checks": run_selftest()}, "selftest",
                 ["constant_checks", "exact_identities"])


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--threads", type=int, default=d(None))
    parser.add_argument("--out-dir", default=d(None))
    parser.add_argument("--config", default=d(None), help="JSON file supplying defaults for any flag")
    parser.add_argument("--max-modulus", type=int, default=d(MODULUS_CAP))
    parser.add_argument("--max-window-bytes", type=int, default=d(MAX_WINDOW_BYTES))
    parser.add_argument("--max-table", type=int, default=d(MAX_TABLE))


def build_parser() -> tuple[argparse.ArgumentParser, list[argparse.ArgumentParser]]:
    top = argparse.ArgumentParser(prog="mixedwaring", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(top, suppress=False)
    parents = argparse.ArgumentParser(add_help=False)
    _common(parents, suppress=True)
    sub = top.add_subparsers(dest="command", required=True)
    all_parsers = [top]

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[parents], help=help_text)
        p.set_defaults(func=func)
        all_parsers.append(p)
        return p

    p = add("smooth", cmd_smooth, "sieve R-smooth numbers up to P")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--emit", help="CSV of members, one per line")

    p = add("exponents", cmd_exponents, "admissible and minor-arc exponents")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--family", choices=("hua", "eq42"))
    p.add_argument("--v", type=float)
    p.add_argument("--s", type=float)

    p = add("thresholds", cmd_thresholds, "sufficient-s conditions and least s")
    p.add_argument("--rule", choices=("thm11", "cor12", "eq49", "thm13", "cor44", "eq55", "theta2"))
    src = p.add_mutually_exclusive_group()
    src.add_argument("--ks")
    src.add_argument("--ks-constant", type=int)
    src.add_argument("--progression", help="k,r")
    p.add_argument("--s", type=int)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--scan-limit", type=int, default=None)
    p.add_argument("--batch", help="JSON-lines file of threshold requests")

    p = add("weyl", None, "smooth Weyl sums and minor-arc scans")
    wsub = p.add_subparsers(dest="weyl_command", required=True)
    w = wsub.add_parser("sum", parents=[parents])
    w.set_defaults(func=cmd_weyl_sum)
    w.add_argument("--alpha", required=True, help="N/D, decimal, or float")
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--r", type=int)
    w.add_argument("--k", type=int, default=2)
    all_parsers.append(w)
    w = wsub.add_parser("scan", parents=[parents])
    w.set_defaults(func=cmd_weyl_scan)
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--r", type=int)
    w.add_argument("--k", type=int, default=2)
    w.add_argument("--q", type=float, help="dissection parameter Q (default P^(k/2))")
    w.add_argument("--samples", type=int, default=200)
    w.add_argument("--out", help="CSV of sampled points")
    all_parsers.append(w)

    p = add("sigma", cmd_sigma, "singular series, Euler factors, certificates")
    p.add_argument("--ks", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, default=100)
    p.add_argument("--pcut", type=int, default=DEFAULT_PCUT)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")

    p = add("predict", cmd_predict, "Hardy-Littlewood prediction")
    p.add_argument("--ks", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, default=100)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--j", action="store_true", help="also evaluate J(n; X) by quadrature")

    p = add("count", cmd_count, "exact representation count")
    p.add_argument("--ks", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eta", type=float)
    p.add_argument("--method", choices=METHODS, default="mitm")

    p = add("scan", cmd_scan, "counts over a window")
    p.add_argument("--ks", required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--eta", type=float)
    p.add_argument("--x", type=int, help="also compare with the prediction at this X")
    p.add_argument("--out", help="CSV (n, count)")

    p = add("exceptions", cmd_exceptions, "integers with no representation")
    p.add_argument("--ks", required=True)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--eta", type=float)

    p = add("report", cmd_report, "combine artifacts into markdown and JSON")
    p.add_argument("inputs", nargs="*")

    add("selftest", cmd_selftest, "constant checks and exact identities")
    return top, all_parsers


def _apply_config(argv: list[str], top, parsers) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config {known.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    positional = [cfg.pop(k) for k in ("command", "weyl_command") if k in cfg]
    if positional and not any(a in top._subparsers._group_actions[0].choices for a in argv):
        argv = [str(x) for x in positional] + argv
    known_dests = set()
    for parser in parsers:
        dests = {a.dest for a in parser._actions if a.default is not argparse.SUPPRESS}
        known_dests |= dests
        parser.set_defaults(**{k: v for k, v in cfg.items() if k in dests})
        for action in parser._actions:
            if action.dest in cfg and action.required:
                action.required = False
    unknown = set(cfg) - known_dests
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return argv


def _fail(code: int, exc: Exception) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code},
                     sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        top, parsers = build_parser()
        argv = _apply_config(argv, top, parsers)
        args = top.parse_args(argv)
        _accel.set_threads(args.threads)
        return args.func(args)
    except ResourceLimitError as exc:
        return _fail(EXIT_RESOURCE, exc)
    except IntegrityError as exc:
        return _fail(EXIT_INTEGRITY, exc)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(EXIT_INVALID, exc)


if __name__ == "__main__":
    sys.exit(main())
