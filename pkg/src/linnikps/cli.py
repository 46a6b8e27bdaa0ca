"""Command-line entry point.

Every subcommand takes ``--out``, ``--format {json,csv}``, ``--threads`` and
``--config``.  Values are resolved as flag, then config file, then default.
Exit status: 0 on success, 2 for parameter errors, 3 for capacity errors,
1 for numerical failures.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import arith, bv, decomp, io, kernel, linnik, oscillatory, parallel, solver
from .errors import CapacityError, ParameterError, QuadratureError, TrendError

EXIT_OK, EXIT_NUMERIC, EXIT_PARAM, EXIT_CAPACITY = 0, 1, 2, 3


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ParameterError(f"not a boolean: {v!r}")


def _int(v):
    f = float(v)
    if not f.is_integer():
        raise ParameterError(f"not an integer: {v!r}")
    return int(f)


def _floats(v):
    return [float(x) for x in str(v).split(",") if x.strip()]


# (name, type, default, help); a default of None marks a required value
COMMON = [
    ("out", str, "-", "output path, '-' for stdout"),
    ("format", str, "json", "json or csv"),
    ("threads", _int, None, "worker threads (default: LINNIKPS_THREADS or 1)"),
]

PARAMS = {
    "sieve": [("limit", _int, 100, "sieve limit")],
    "linnik": [("lo", float, 0.0, "lower end (exclusive)"), ("hi", float, 1000.0, "upper end")],
    "kernel": [
        ("a", float, None, "half-width a"), ("delta", float, None, "transition delta"),
        ("k", _int, None, "smoothness k"), ("eps", float, None, "build (9eps/10, eps/10, [log X])"),
        ("X", float, None, "scale for k when --eps is used"), ("points", _int, 11, "sample count"),
    ],
    "expsum": [
        ("X", float, None, "scale"), ("c", float, None, "exponent"), ("t", float, 0.0, "frequency"),
        ("mu", float, 0.5, "lower cutoff fraction"), ("l", _int, 1, "residue"),
        ("d", _int, 1, "modulus"),
    ],
    "moments": [
        ("X", float, None, "scale"), ("c", float, None, "exponent"),
        ("kind", str, "S_over_Delta", "S_over_Delta, I_over_Delta, S_unit_interval, S_ld_over_Delta"),
        ("l", _int, 1, "residue"), ("d", _int, 1, "modulus"),
    ],
    "vaughan": [
        ("y", float, None, "length"), ("u", float, None, "split point"), ("t", float, 0.0, "frequency"),
        ("c", float, None, "exponent"), ("q", _int, 1, "character modulus"),
        ("chi", _int, 0, "character index mod q"),
    ],
    "bilinear": [
        ("M", float, None, "block M"), ("L", float, None, "block L"), ("c", float, None, "exponent"),
        ("t", float, 0.0, "frequency"), ("type", _int, 1, "1 (a = mu) or 2 (a = mu, b = Lambda)"),
    ],
    "bv": [
        ("X", float, None, "scale"), ("Xs", _floats, None, "comma-separated scales for a table"),
        ("c", float, None, "exponent"), ("t", float, 0.0, "frequency"),
        ("t_fraction", float, None, "t as a fraction of X^(1/4-c), per X"),
        ("A", float, 1.0, "log power"), ("mu", float, 0.5, "cutoff fraction"),
        ("log_offset", float, 5.0, "extra log power in the modulus cutoff"),
        ("grid_size", _int, 16, "y grid size"), ("grid_step", float, 0.25, "y grid step in octaves"),
        ("exact", _bool, False, "evaluate at every breakpoint (X <= 1e4)"),
    ],
    "hooley": [("X", float, None, "scale"), ("omega", float, 1.0, "window exponent")],
    "solve": [
        ("N", float, None, "target"), ("c", float, None, "exponent"), ("A", float, 1.0, "log power"),
        ("eps", float, None, "override eps"), ("linnik", _bool, False, "require p1 = x^2+y^2+1"),
        ("limit", _int, None, "maximum number of records"),
    ],
    "gamma": [
        ("N", float, None, "target"), ("c", float, None, "exponent"), ("A", float, 1.0, "log power"),
        ("eps", float, None, "override eps"),
    ],
    "constants": [("P", float, 1e6, "prime cutoff for the singular series")],
    "binary": [("N0", float, None, "target"), ("c", float, None, "exponent"),
               ("eps", float, None, "window")],
}

OPTIONAL = {("kernel", n) for n in ("a", "delta", "k", "eps", "X")} | {
    ("solve", "eps"), ("solve", "limit"), ("gamma", "eps"), ("bv", "X"), ("bv", "Xs"),
    ("bv", "t_fraction"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_PARAM)


def build_parser():
    p = _Parser(prog="linnikps", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd, specs in PARAMS.items():
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", default=None, help="flat key=value file")
        for name, typ, _, hlp in COMMON + specs:
            flag = "--" + name.replace("_", "-")
            if typ is _bool:
                sp.add_argument(flag, dest=name, nargs="?", const="true", default=None, help=hlp)
            else:
                sp.add_argument(flag, dest=name, default=None, help=hlp)
    return p


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for i, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{i}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().lstrip("-").replace("-", "_")] = v.strip()
    return out


def resolve(ns):
    """Merge flags, config file and defaults; convert types."""
    specs = COMMON + PARAMS[ns.command]
    conf = read_config(ns.config) if ns.config else {}
    known = {s[0] for s in specs}
    unknown = set(conf) - known
    if unknown:
        raise ParameterError(f"unknown config keys for '{ns.command}': {', '.join(sorted(unknown))}")
    values = {}
    for name, typ, default, _ in specs:
        raw = getattr(ns, name)
        if raw is None:
            raw = conf.get(name)
        if raw is None:
            if default is None and (ns.command, name) not in OPTIONAL and name != "threads":
                raise ParameterError(f"--{name.replace('_', '-')} is required for '{ns.command}'")
            values[name] = default
            continue
        try:
            values[name] = typ(raw)
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"bad value for --{name}: {raw!r}") from exc
    if values["format"] not in ("json", "csv"):
        raise ParameterError("--format must be json or csv")
    return values


# ---------------------------------------------------------------------------
# commands; each returns (json object, csv header, csv rows)


def cmd_sieve(v):
    tab = arith.build_tables(v["limit"])
    rows = list(tab.rows())
    obj = {"limit": tab.limit, "count": int(tab.primes.size), "primes": tab.primes.tolist()}
    return obj, ("n", "phi", "mu", "tau", "lambda"), rows


def cmd_linnik(v):
    recs = linnik.linnik_primes(v["lo"], v["hi"])
    obj = {"lo": v["lo"], "hi": v["hi"], "count": len(recs),
           "primes": [{"p": r.p, "x": r.x, "y": r.y, "r_weight": r.r_weight} for r in recs]}
    return obj, linnik.LINNIK_HEADER, linnik.linnik_rows(recs)


def cmd_kernel(v):
    if v["eps"] is not None:
        if v["X"] is None:
            raise ParameterError("--X is required with --eps")
        ker = kernel.kernel_from_eps(v["eps"], v["X"])
    else:
        missing = [n for n in ("a", "delta", "k") if v[n] is None]
        if missing:
            raise ParameterError("give --eps and --X, or all of --a --delta --k")
        ker = kernel.make_kernel(v["a"], v["delta"], v["k"])
    pts = np.linspace(0.0, 1.25 * ker.support, max(2, v["points"]))
    th = kernel.theta(ker, pts)
    Th = kernel.theta_hat(ker, pts)
    bd = ker.decay_bound(pts)
    rows = [(float(p), float(a), float(b), float(c)) for p, a, b, c in zip(pts, th, Th, bd)]
    obj = {"a": ker.a, "delta": ker.delta, "k": ker.k, "plateau": ker.plateau,
           "support": ker.support,
           "samples": [{"point": r[0], "theta": r[1], "Theta": r[2], "bound": r[3]} for r in rows]}
    return obj, ("point", "theta", "Theta", "bound"), rows


def cmd_expsum(v):
    residue = (v["l"], v["d"]) if v["d"] > 1 else None
    spec = oscillatory.ExpSumSpec(v["X"], v["c"], v["t"], v["mu"], residue)
    S = oscillatory.exp_sum_primes(spec)
    lo, hi = spec.range
    phi_d = int(arith.tables_for(max(v["d"], 2)).phi[v["d"]])
    I = oscillatory.osc_integral(lo, hi, v["c"], v["t"]) / phi_d
    row = (v["X"], v["c"], v["t"], S.real, S.imag, I.real, I.imag, abs(S - I))
    obj = {"X": v["X"], "c": v["c"], "t": v["t"], "mu": v["mu"], "l": v["l"], "d": v["d"],
           "S": S, "I_over_phi": I, "abs_gap": abs(S - I)}
    return obj, oscillatory.SCALING_HEADER, [row]


def cmd_moments(v):
    residue = (v["l"], v["d"]) if v["d"] > 1 else None
    spec = oscillatory.ExpSumSpec(v["X"], v["c"], 0.0, 0.5, residue)
    try:
        kind = oscillatory.MomentKind(v["kind"])
    except ValueError as exc:
        raise ParameterError(f"unknown moment kind {v['kind']!r}") from exc
    m, cmp_ = oscillatory.second_moment(kind, spec)
    obj = {"X": v["X"], "c": v["c"], "kind": kind.value, "moment": m, "comparison": cmp_,
           "ratio": m / cmp_}
    return obj, ("X", "c", "kind", "moment", "comparison", "ratio"), [
        (v["X"], v["c"], kind.value, m, cmp_, m / cmp_)]


def cmd_vaughan(v):
    group = arith.characters_mod(v["q"])
    if not 0 <= v["chi"] < len(group):
        raise ParameterError(f"--chi must lie in [0, {len(group)})")
    s = decomp.vaughan_split(v["y"], v["u"], group[v["chi"]], v["t"], v["c"])
    obj = {"y": v["y"], "u": v["u"], "t": v["t"], "c": v["c"], "q": v["q"], "chi": v["chi"],
           "U1": s.U1, "U2": s.U2, "U3": s.U3, "U4": s.U4, "Psi1": s.Psi1, "residual": s.residual}
    rows = [(name, z.real, z.imag) for name, z in
            (("U1", s.U1), ("U2", s.U2), ("U3", s.U3), ("U4", s.U4), ("Psi1", s.Psi1))]
    return obj, ("term", "re", "im"), rows


def cmd_bilinear(v):
    m = decomp.dyadic_block(v["M"])
    if m.size == 0:
        raise ParameterError("the block m ~ M is empty")
    tab = arith.tables_for(max(int(v["M"]), int(v["L"]), 2))
    a = tab.mu[m].astype(float)
    if v["type"] == 1:
        spec = decomp.BilinearSpec(v["M"], v["L"], v["c"], v["t"], a)
        S = decomp.type1_sum(spec)
    elif v["type"] == 2:
        l = decomp.dyadic_block(v["L"])
        b = tab.lambda_log[l] / math.log(max(v["L"], 2.0))
        spec = decomp.BilinearSpec(v["M"], v["L"], v["c"], v["t"], a, b)
        S = decomp.type2_sum(spec)
    else:
        raise ParameterError("--type must be 1 or 2")
    cmp_ = spec.comparison()
    obj = {"M": v["M"], "L": v["L"], "c": v["c"], "t": v["t"], "type": v["type"], "S": S,
           "comparison": cmp_, "ratio": abs(S) / cmp_}
    return obj, decomp.BOUND_HEADER, decomp.bound_rows([(f"type{v['type']}", S, cmp_)])


def cmd_bv(v):
    Xs = v["Xs"] or ([v["X"]] if v["X"] is not None else None)
    if not Xs:
        raise ParameterError("give --X or --Xs")
    tmpl = bv.BvConfig(Xs[0], v["c"], 0.0 if v["t_fraction"] is not None else v["t"], v["A"],
                       v["mu"], None, v["log_offset"], v["grid_size"], v["grid_step"])
    rows = bv.bv_table(Xs, tmpl, t_fraction=v["t_fraction"], exact=v["exact"], check=False)
    obj = {"rows": [dict(zip(bv.BV_HEADER, r)) for r in rows]}
    return obj, bv.BV_HEADER, rows


def cmd_hooley(v):
    rows = linnik.hooley_rows([v["X"]], v["omega"])
    return {"rows": [dict(zip(linnik.HOOLEY_HEADER, r)) for r in rows]}, linnik.HOOLEY_HEADER, rows


def cmd_solve(v):
    params = solver.derive_params(v["N"], v["c"], v["A"], v["eps"])
    recs = solver.find_solutions(params, v["linnik"], v["limit"])
    obj = {"params": params.as_dict(), "linnik_only": v["linnik"], "count": len(recs),
           "solutions": [r.as_dict() for r in recs]}
    rows = [(r.p1, r.p2, r.p3, r.x, r.y, r.residual) for r in recs]
    return obj, solver.SOLUTION_HEADER, rows


def cmd_gamma(v):
    params = solver.derive_params(v["N"], v["c"], v["A"], v["eps"])
    g = solver.gamma_weighted(params)
    obj = g.as_dict()
    obj["residual"] = g.residual
    header = ("gamma", "gamma0", "gamma1", "gamma2", "gamma3", "residual")
    return obj, header, [(g.gamma, g.gamma0, g.gamma1, g.gamma2, g.gamma3, g.residual)]


def cmd_constants(v):
    th = solver.theta0()
    ss, tail = solver.singular_series(v["P"])
    cps = solver.chi_phi_sum(v["P"])
    obj = {"theta0": th, "singular_series": ss, "tail_bound": tail, "chi_phi_sum": cps, "P": v["P"]}
    header = ("theta0", "singular_series", "tail_bound", "chi_phi_sum", "P")
    return obj, header, [(th, ss, tail, cps, v["P"])]


def cmd_binary(v):
    n, cmp_ = solver.binary_count(v["N0"], v["c"], v["eps"])
    obj = {"N0": v["N0"], "c": v["c"], "eps": v["eps"], "count": n, "comparison": cmp_}
    return obj, ("N0", "c", "eps", "count", "comparison"), [(v["N0"], v["c"], v["eps"], n, cmp_)]


HANDLERS = {name[4:]: fn for name, fn in globals().items() if name.startswith("cmd_")}


def run(argv=None):
    """Parse, dispatch and write; returns the exit status."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        values = resolve(ns)
        threads = values["threads"]
        if threads is None:
            threads = int(os.environ.get("LINNIKPS_THREADS", "1") or 1)
        if threads < 1:
            raise ParameterError("--threads must be >= 1")
        parallel.set_threads(threads)
        obj, header, rows = HANDLERS[ns.command](values)
        if values["format"] == "json":
            text = io.dumps_json(obj)
        else:
            text = io.dumps_csv(header, rows)
        io.write_text(values["out"], text)
    except CapacityError as exc:
        sys.stderr.write(f"capacity error: {exc}\n")
        return EXIT_CAPACITY
    except ParameterError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return EXIT_PARAM
    except (QuadratureError, TrendError) as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_PARAM
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
