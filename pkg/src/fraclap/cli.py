"""Command-line interface: evaluate the operator definitions on named model
fields, cross-compare them, and run kernel / Besov diagnostic checks.

Subcommands:
  eval      evaluate one or more definitions on a grid of points
  compare   evaluate several definitions and check pairwise agreement
  kernels   kernel identities (mass, decay, semigroup, scaling)
  besov     partition / norm-equivalence / derivative-bound diagnostics

Output is CSV (default) or JSON; rows are deterministic and, with
--no-timestamp, byte-identical across repeated runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Callable, Optional

import numpy as np

from . import __version__
from . import besov as besov_mod
from . import closed_forms, fields, kernels, pointwise_defs, spectral
from .errors import FraclapError
from .quadrature import EvalResult, Field, QuadConfig
from .specfun import Frac

_CSV_HEADER = ("x", "value", "err_est", "definition", "s", "n", "tag")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _parse_params(text: str) -> dict:
    params: dict = {}
    if not text:
        return params
    for item in text.split(","):
        if not item:
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise SystemExit2("malformed parameter %r (expected key=value)" % item)
        try:
            params[key.strip()] = float(val)
        except ValueError:
            params[key.strip()] = val.strip()
    return params


class SystemExit2(SystemExit):
    def __init__(self, msg: str):
        print("error: %s" % msg, file=sys.stderr)
        super().__init__(2)


def _parse_points(text: str) -> list:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SystemExit2("points range must be start:stop:step")
        a, b, h = (float(p) for p in parts)
        if h <= 0:
            raise SystemExit2("points step must be positive")
        count = int(math.floor((b - a) / h + 1e-9)) + 1
        return [a + i * h for i in range(max(count, 0))]
    return [float(p) for p in text.split(",") if p]


def _build_field(spec_text: str, n: int, s: float):
    """Return (field, oracle, tag) for a --func specification."""
    name, _, param_text = spec_text.partition(":")
    p = _parse_params(param_text)
    name = name.strip()
    oracle: Optional[Callable] = None
    if name == "gaussian":
        u = fields.gaussian(n)
    elif name == "bump":
        u = fields.bump(radius=float(p.get("radius", 1.0)), n=n)
    elif name == "plateau":
        u = fields.plateau(inner=float(p.get("inner", 1.0)), outer=float(p.get("outer", 2.0)))
    elif name == "sin":
        u = fields.sin_field()
    elif name == "cos":
        u = fields.cos_field()
    elif name == "log":
        u = fields.log_field()
    elif name == "halfline_power":
        alpha = float(p["alpha"])
        u = fields.halfline_power_field(alpha)
        oracle = lambda x: closed_forms.halfline_power(alpha, s, x)
    elif name == "fullline_power":
        alpha = float(p["alpha"])
        u = fields.radial_power_field(alpha, 1)
        oracle = lambda x: closed_forms.fullline_power(alpha, s, x)
    elif name == "radial_power":
        alpha = float(p["alpha"])
        u = fields.radial_power_field(alpha, n)
        oracle = lambda x: closed_forms.radial_power(alpha, n, s, abs(x)).value
    elif name == "interval_power":
        alpha = float(p["alpha"])
        u = fields.interval_power_field(alpha)
        oracle = lambda x: closed_forms.interval_power(alpha, s, x)
    elif name == "ball_power":
        beta = float(p["beta"])
        u = fields.ball_power_field(beta, n)
        oracle = lambda x: closed_forms.ball_power(beta, n, s, abs(x))
    elif name == "kelvin_power":
        alpha = float(p["alpha"])
        u = fields.kelvin_power_field(alpha, s)
        oracle = lambda x: closed_forms.kelvin_power(alpha, s, x)
    elif name == "boundary_kernel":
        alpha = float(p["alpha"])
        theta = float(p.get("theta", -1.0))
        u = fields.boundary_kernel_field(alpha, s, theta)
        oracle = lambda x: closed_forms.boundary_kernel(alpha, 1, s, [x], [theta])
    else:
        raise SystemExit2("unknown function %r" % name)
    return u, oracle, name


def _definition_runner(def_text: str, u: Field, oracle, frac: Frac, cfg: QuadConfig):
    """Return (label, callable x -> EvalResult)."""
    name, _, param_text = def_text.partition(":")
    p = _parse_params(param_text)
    name = name.strip()
    if name == "pv":
        return name, lambda x: pointwise_defs.flap_pv(u, frac, x, cfg)
    if name == "heat":
        return name, lambda x: pointwise_defs.flap_heat(u, frac, x, cfg)
    if name == "highorder":
        m = int(p.get("m", 2))
        return "highorder_m%d" % m, lambda x: pointwise_defs.flap_highorder(
            u, frac, x, m, cfg
        )
    if name == "riesz":
        return name, lambda x: pointwise_defs.flap_riesz_composition(u, frac, x, cfg)
    if name == "grad":
        return name, lambda x: pointwise_defs.nonlocal_gradient(u, frac.s, x, cfg)
    if name == "divgrad":
        variant = str(p.get("variant", "ss"))
        return "divgrad_%s" % variant, lambda x: pointwise_defs.flap_div_grad(
            u, frac, x, cfg, variant
        )
    if name == "spectral":
        if frac.n != 1:
            raise SystemExit2("spectral definition requires n=1")
        if (
            u.periodic is None
            and u.support_radius is None
            and (u.decay is None or u.decay[0] <= 0.0)
        ):
            raise SystemExit2(
                "spectral definition needs a periodic, compactly supported, "
                "or decaying function (periodizing %r would not converge)"
                % (u.name or "field",)
            )
        if u.periodic is not None:
            nn = int(p.get("N", 1024))
            g = spectral.from_field(u, nn, u.periodic, images=0)
        else:
            nn = int(p.get("N", 8192))
            period = float(p.get("a", 256.0))
            g = spectral.from_field(u, nn, period, images=1)
        gout = spectral.flap_spectral(g, frac.s)
        return name, lambda x: EvalResult(spectral.value_at(gout, x), 1e-12, g.size)
    if name == "oracle":
        if oracle is None:
            raise SystemExit2("the chosen function has no closed-form oracle")
        return name, lambda x: EvalResult(float(oracle(x)), 0.0, 1)
    raise SystemExit2("unknown definition %r" % name)


def _load_config(path: Optional[str]) -> QuadConfig:
    if not path:
        return QuadConfig()
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return QuadConfig(**data)


def _emit(rows, args, extra_meta=None) -> str:
    if args.out == "json":
        meta = {"version": __version__, "flags": " ".join(sys.argv[1:])}
        if not args.no_timestamp:
            meta["timestamp"] = datetime.now(timezone.utc).isoformat()
        if extra_meta:
            meta.update(extra_meta)
        doc = {
            "metadata": meta,
            "rows": [dict(zip(_CSV_HEADER, r)) for r in rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()


def _write_output(text: str, args):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _eval_rows(args, defs_text: str):
    cfg = _load_config(args.config)
    frac = Frac(args.n, args.s)
    u, oracle, tag = _build_field(args.func, args.n, args.s)
    points = _parse_points(args.points)
    runners = [
        _definition_runner(d.strip(), u, oracle, frac, cfg)
        for d in defs_text.split(",")
        if d.strip()
    ]
    tasks = [(label, run, x) for label, run in runners for x in points]

    def work(task):
        label, run, x = task
        res = run(x)
        return (
            _fmt(x),
            _fmt(res.value),
            _fmt(res.err_est),
            label,
            _fmt(args.s),
            str(args.n),
            tag,
        )

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(work, tasks))
    else:
        rows = [work(t) for t in tasks]
    return rows, runners, points


def cmd_eval(args) -> int:
    rows, _, _ = _eval_rows(args, args.defs)
    _write_output(_emit(rows, args), args)
    return 0


def cmd_compare(args) -> int:
    rows, runners, points = _eval_rows(args, args.defs)
    labels = [label for label, _ in runners]
    by_def = {}
    for r in rows:
        by_def.setdefault(r[3], []).append(float(r[1]))
    scale = max(
        (max(abs(v) for v in vals) for vals in by_def.values()), default=1.0
    )
    scale = max(scale, 1e-30)
    worst = 0.0
    matrix_lines = ["pairwise max |difference| / scale (scale=%s):" % _fmt(scale)]
    for i, la in enumerate(labels):
        for lb in labels[i + 1 :]:
            d = max(
                abs(a - b) / scale for a, b in zip(by_def[la], by_def[lb])
            )
            worst = max(worst, d)
            matrix_lines.append("  %-16s %-16s %s" % (la, lb, _fmt(d)))
    _write_output(_emit(rows, args), args)
    verdict = "PASS" if worst <= args.tol else "FAIL"
    print("\n".join(matrix_lines), file=sys.stderr)
    print(
        "%s compare: worst pairwise relative difference %s (tol %s)"
        % (verdict, _fmt(worst), _fmt(args.tol)),
        file=sys.stderr,
    )
    return 0 if verdict == "PASS" else 1


def cmd_kernels(args) -> int:
    cfg = _load_config(args.config)
    s, n = args.s, args.n
    lines = []
    ok = True
    if args.check == "mass":
        res = kernels.bessel_mass(n, s, cfg)
        dev = abs(res.value - 1.0)
        ok = dev <= args.tol
        lines.append(
            ("PASS" if ok else "FAIL")
            + " bessel mass: %s (deviation %s, tol %s)"
            % (_fmt(res.value), _fmt(dev), _fmt(args.tol))
        )
    elif args.check == "decay":
        measured, limit = kernels.bessel_decay_check(n, s, 30.0)
        dev = abs(measured / limit - 1.0)
        ok = dev <= max(args.tol, 2e-2)
        lines.append(
            ("PASS" if ok else "FAIL")
            + " bessel decay at r=30: measured %s vs limit %s (rel dev %s)"
            % (_fmt(measured), _fmt(limit), _fmt(dev))
        )
    elif args.check == "semigroup":
        half = s / 2.0
        f = kernels.bessel_kernel_field(half)
        worst = 0.0
        for x in (0.5, 1.0, 2.0):
            conv = kernels.bessel_convolve_1d(f, half, x, cfg)
            direct = kernels.bessel_kernel(1, s, x)
            worst = max(worst, abs(conv.value - direct.value) / abs(direct.value))
        ok = worst <= max(args.tol, 1e-4)
        lines.append(
            ("PASS" if ok else "FAIL")
            + " bessel semigroup %g*%g -> %g: worst rel dev %s"
            % (half, half, s, _fmt(worst))
        )
    elif args.check == "scaling":
        rep = kernels.hls_scaling_report(fields.bump(), s, 2.0, cfg=cfg)
        ok = rep.spread <= max(args.tol, 1e-3)
        lines.append(
            ("PASS" if ok else "FAIL")
            + " scaling invariance: spread %s over dilations (q=%s)"
            % (_fmt(rep.spread), _fmt(rep.q))
        )
        for theta, nf, ng, ratio in rep.rows:
            lines.append(
                "  theta=%s  |f|_p=%s  |Rf|_q=%s  ratio=%s"
                % (_fmt(theta), _fmt(nf), _fmt(ng), _fmt(ratio))
            )
    print("\n".join(lines))
    return 0 if ok else 1


def cmd_besov(args) -> int:
    n_grid, period = 512, 1.0
    ok = True
    lines = []
    if args.check == "partition":
        g = besov_mod.random_shell_function(n_grid, period, 4, seed=1)
        part = besov_mod.build_partition(g, 6)
        resid = float(
            np.max(np.abs(part.phi.sum(axis=0) + part.tail - 1.0))
        )
        ok = resid <= 1e-12
        lines.append(
            ("PASS" if ok else "FAIL") + " partition residual %s" % _fmt(resid)
        )
    elif args.check == "norms":
        g = besov_mod.random_shell_function(n_grid, period, 4, seed=7)
        part = besov_mod.build_partition(g, 6)
        s = args.s
        b = besov_mod.besov_norm(g, part, s, 2.0, 2.0)
        t = besov_mod.besov_norm_translation(g, s, 2.0, 2.0)
        w = math.sqrt(besov_mod.sobolev_norm_sq(g, s))
        bound = 2.0**s * w
        ok = b <= bound * (1.0 + 1e-12)
        lines.append(
            ("PASS" if ok else "FAIL")
            + " norms: multiplier %s translation %s sobolev-bound %s"
            % (_fmt(b), _fmt(t), _fmt(bound))
        )
    elif args.check == "bernstein":
        worst_lo, worst_hi = math.inf, 0.0
        for j in range(2, 7):
            g = besov_mod.random_shell_function(n_grid, period, j, seed=100 + j)
            r = besov_mod.bernstein_ratio(g, j, 2.0)
            worst_lo = min(worst_lo, r)
            worst_hi = max(worst_hi, r)
            lines.append("  level %d ratio %s" % (j, _fmt(r)))
        ok = worst_hi / worst_lo <= 16.0
        lines.insert(
            0,
            ("PASS" if ok else "FAIL")
            + " derivative-bound ratios within [%s, %s]"
            % (_fmt(worst_lo), _fmt(worst_hi)),
        )
    print("\n".join(lines))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclap",
        description="fractional Laplacian definitions, kernels and norms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--s", type=float, default=0.5, help="fractional order")
        sp.add_argument("--n", type=int, default=1, help="dimension")
        sp.add_argument("--tol", type=float, default=1e-4)
        sp.add_argument("--out", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", default=None, help="output file (default stdout)")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--config", default=None, help="JSON file of quadrature settings")
        sp.add_argument("--no-timestamp", action="store_true")

    sp_eval = sub.add_parser("eval", help="evaluate definitions at points")
    common(sp_eval)
    sp_eval.add_argument("--func", required=True)
    sp_eval.add_argument("--points", required=True)
    sp_eval.add_argument("--defs", default="pv")
    sp_eval.set_defaults(func_cmd=cmd_eval)

    sp_cmp = sub.add_parser("compare", help="cross-compare definitions")
    common(sp_cmp)
    sp_cmp.add_argument("--func", required=True)
    sp_cmp.add_argument("--points", required=True)
    sp_cmp.add_argument("--defs", default="pv,heat")
    sp_cmp.set_defaults(func_cmd=cmd_compare)

    sp_ker = sub.add_parser("kernels", help="kernel identity checks")
    common(sp_ker)
    sp_ker.add_argument(
        "--check", choices=("mass", "decay", "semigroup", "scaling"), required=True
    )
    sp_ker.set_defaults(func_cmd=cmd_kernels)

    sp_bes = sub.add_parser("besov", help="partition and norm diagnostics")
    common(sp_bes)
    sp_bes.add_argument(
        "--check", choices=("partition", "norms", "bernstein"), required=True
    )
    sp_bes.set_defaults(func_cmd=cmd_besov)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func_cmd(args)
    except FraclapError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
