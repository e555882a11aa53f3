"""Command-line interface: ``whasym {sweep,predict,kernel,selftest}``."""

import argparse
import json
import sys
import time

import numpy as np

from . import core
from .asymptotics import predict, wiener_hopf_factorize
from .config import ConfigError, load_config
from .fredholm import discretize, log_det, log_det2, unwrap_to
from .kernels import KernelEvaluator
from .models import NPolicy, convergence_sweep
from .specfun import log_barnes_g, log_gamma
from .symbols import gaussian_bump_symbol, pure_fh_symbol, trivial_symbol

__all__ = ["main", "cmd_sweep", "cmd_predict", "cmd_kernel", "cmd_selftest", "dumps"]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

# magnetic E2/E3 need the Lorentzian width resolved on the quadrature grid
_MAGNETIC_MIN_DELTA = 0.05


def _fmt(x):
    x = float(x)
    if not np.isfinite(x):
        return "nan" if np.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".17g")


def _json_text(x, indent=0):
    pad = "  " * (indent + 1)
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return _fmt(x) if np.isfinite(x) else "null"
    if isinstance(x, (complex, np.complexfloating)):
        x = {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_text(x[k], indent + 1)}" for k in sorted(x)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        items = [pad + _json_text(v, indent + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(str(x))


def dumps(obj):
    """Deterministic JSON text with 17 significant digits; NaN becomes null."""
    return _json_text(obj) + "\n"


def _prediction_fields(pred):
    out = {}
    for key, val in pred.fields().items():
        val = complex(val)
        out[key] = None if not (np.isfinite(val.real) and np.isfinite(val.imag)) else val
    return out


def _predict_for(cfg, spec):
    constants = cfg.constants
    if cfg.model == "flatband":
        constants = False
    if cfg.model == "magnetic" and cfg.params.delta < _MAGNETIC_MIN_DELTA:
        constants = False
    return predict(spec, constants=constants)


def cmd_sweep(cfg, quiet=True):
    """Run a convergence sweep; writes the CSV rows and JSON summary."""
    spec = cfg.symbol()
    policy = NPolicy(per_unit=cfg.n_per_unit, n_max=cfg.n_max, rule=cfg.rule)
    start = time.perf_counter()
    pred = _predict_for(cfg, spec)
    result = convergence_sweep(spec, cfg.T_list, policy, prediction=pred)
    lines = ["T,N,logdet2_re,logdet2_im,pred_re,pred_im,resid_re,resid_im"]
    for r in result.rows:
        vals = [r.T, r.N, r.log_det2.real, r.log_det2.imag, r.predicted.real, r.predicted.imag,
                r.residual.real, r.residual.imag]
        lines.append(",".join([_fmt(vals[0]), str(vals[1])] + [_fmt(v) for v in vals[2:]]))
    with open(cfg.csv, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    summary = {"model": cfg.model, "prediction": _prediction_fields(pred), "fit": None}
    if result.fit is not None:
        f = result.fit
        summary["fit"] = {"rate": f.rate, "exponent": f.exponent, "constant": f.constant,
                          "stderr": dict(f.stderr)}
    with open(cfg.json, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps(summary))
    meta = {"backend": core.BACKEND, "threads": core.thread_count(),
            "elapsed_s": time.perf_counter() - start}
    with open(cfg.json[:-5] + ".meta.json" if cfg.json.endswith(".json") else cfg.json + ".meta",
              "w", encoding="ascii") as fh:
        fh.write(dumps(meta))
    if not quiet:
        print(f"wrote {cfg.csv} and {cfg.json}", file=sys.stderr)
    return EXIT_OK


def cmd_predict(cfg, stream=None):
    """Print the asymptotic decomposition as JSON."""
    pred = _predict_for(cfg, cfg.symbol())
    out = {"model": cfg.model, "variant": pred.variant, "prediction": _prediction_fields(pred)}
    (stream or sys.stdout).write(dumps(out))
    return EXIT_OK


def cmd_kernel(cfg, stream=None):
    """CSV of t, k(t) and k(-t) on [0, t_max]."""
    kernel = KernelEvaluator(cfg.symbol())
    t = np.linspace(0.0, cfg.kernel_t_max, cfg.kernel_count)
    kp = kernel(t)
    km = kernel(-t)
    lines = ["t,k_re,k_im,kneg_re,kneg_im"]
    for row in zip(t, kp.real, kp.imag, km.real, km.imag):
        lines.append(",".join(_fmt(v) for v in row))
    (stream or sys.stdout).write("\n".join(lines) + "\n")
    return EXIT_OK


def _selftest_checks(tol):
    checks = []
    # Barnes recurrence on a complex grid
    re, im = np.meshgrid(np.linspace(0.3, 14.0, 10), np.linspace(-4.0, 4.0, 10))
    z = (re + 1j * im).ravel()
    err = np.abs(np.expm1(log_barnes_g(z + 1) - log_gamma(z) - log_barnes_g(z)))
    checks.append(("barnes_recurrence", float(np.max(err)), tol["barnes"]))
    # det2 identity against an independent factorization
    worst = 0.0
    for spec in (gaussian_bump_symbol(0.5), pure_fh_symbol(0.2, 0.2), pure_fh_symbol(0.15, -0.15)):
        op = discretize(KernelEvaluator(spec), 5.0, 65, "trapezoid")
        sign, logabs = np.linalg.slogdet(op.matrix)
        ref = complex(logabs, np.angle(sign)) - np.trace(op.K)
        worst = max(worst, abs(unwrap_to(log_det2(op), ref) - ref))
    checks.append(("det2_identity", worst, tol["det2"]))
    # factorization of a rational symbol
    wh = wiener_hopf_factorize(lambda w: np.log((w * w + 4.0) / (w * w + 1.0)) + 0j, breakpoints=(0.0,))
    w = np.linspace(-5.0, 5.0, 21)
    prod = np.array([wh.plus(x) * wh.minus(x) for x in w])
    checks.append(("factorization_product", float(np.max(np.abs(prod - (w * w + 4) / (w * w + 1)))),
                   tol["factor"]))
    # trivial symbol
    pred = predict(trivial_symbol())
    op = discretize(KernelEvaluator(trivial_symbol()), 5.0, 16, "trapezoid")
    triv = max([abs(v) for v in pred.fields().values()] + [abs(log_det2(op)), abs(log_det(op))])
    checks.append(("trivial_zeros", float(triv), tol["trivial"]))
    return checks


def cmd_selftest(cfg, stream=None):
    """Run the invariant suite; exit 0 iff every check passes."""
    stream = stream or sys.stdout
    ok = True
    for name, err, tol in _selftest_checks(cfg.tolerances):
        passed = err <= tol
        ok &= passed
        stream.write(f"{'PASS' if passed else 'FAIL'} {name} err={err:.3e} tol={tol:.1e}\n")
    return EXIT_OK if ok else EXIT_NUMERIC


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style configuration file")
    common.add_argument("--out", help="output prefix for CSV/JSON files")
    common.add_argument("--model", help="xray, flatband, magnetic, pure_fh or custom")
    common.add_argument("--T", dest="T", help="comma-separated increasing T values")
    common.add_argument("--N-per-unit", dest="n_per_unit", type=float, help="grid points per unit T")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")
    parser = argparse.ArgumentParser(prog="whasym", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="determinants over a T list with fit")
    sub.add_parser("predict", parents=[common], help="asymptotic decomposition as JSON")
    sub.add_parser("kernel", parents=[common], help="kernel table as CSV")
    sub.add_parser("selftest", parents=[common], help="invariant checks")
    return parser


class _ArgError(Exception):
    pass


def _error(msg):
    print("error: " + " ".join(str(msg).split()), file=sys.stderr)


def main(argv=None):
    parser = _parser()
    parser.error = lambda message: (_ for _ in ()).throw(_ArgError(message))
    try:
        args = parser.parse_args(argv)
    except _ArgError as exc:
        _error(exc)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config, model=args.model, T=args.T, n_per_unit=args.n_per_unit,
                          out=args.out)
        if args.command == "sweep":
            return cmd_sweep(cfg, quiet=args.quiet)
        if args.command == "predict":
            return cmd_predict(cfg)
        if args.command == "kernel":
            return cmd_kernel(cfg)
        return cmd_selftest(cfg)
    except (ConfigError, ValueError, TypeError) as exc:
        _error(exc)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        _error(exc)
        return EXIT_NUMERIC
    except OSError as exc:
        _error(exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
