"""Command-line front end.

Six subcommands: `fit` estimates a model from a data file, `gof` adds the
goodness-of-fit column for it, `compare` runs the nested likelihood-ratio
ladder, `sample` draws from a parameterized model, `eval` tabulates pdf,
cdf, and hazard on a grid, and `curves` tabulates quantile-based shape
measures as functions of c.

Input data files hold one numeric value per line with an optional single
header line.  JSON output carries floats at 17 significant digits and a
top-level schema_version; all outputs are byte-identical for identical
configurations.  Exit codes: 0 success, 2 input error, 3 fit did not
converge (the result is still written), 4 internal numeric failure.
"""

import argparse
import importlib.resources
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import core
from .family import (
    McEParams,
    exp_limit_cdf,
    exp_limit_pdf,
    exp_limit_sample,
    exp_limit_survival,
    make_submodel,
    model_spec,
)
from .inference import Dataset, OptimizerConfig, fit_mle
from .selection import gof_report, lrt
from .shape import curves_to_csv, shape_curves

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_CONVERGENCE = 3
EXIT_NUMERIC = 4

_BUILTIN_DATA = {
    "aarset": "aarset_devices.csv",
    "glass": "glass_fibers.csv",
}

_KS_CAVEAT = (
    "parameters were estimated from the same data; the asymptotic "
    "Kolmogorov law is used without a finite-sample correction"
)


class InputError(Exception):
    """Unusable user input: missing file, bad value, unknown model."""


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation."""

    command: str
    model: str = "mcg"
    data_path: str = ""
    output_path: str = ""
    seed: int = 0
    fmt: str = ""
    n: int = 100
    grid_min: float = 0.0
    grid_max: float = 0.0
    grid_points: int = 0
    starts: int = -1
    max_iter: int = -1
    params: tuple = ()


def _fmt_float(v):
    """Render a float with 17 significant digits, keeping it a JSON float."""
    s = format(float(v), ".17g")
    if s.lstrip("+-").isdigit():
        s += ".0"
    return s


def _json_text(obj, indent=0):
    """Deterministic JSON with insertion-ordered keys and .17g floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{inner}"{k}": {_json_text(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(inner + _json_text(v, indent + 1) for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_output(cfg, text):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_dataset(path):
    """Load one numeric per line; a single leading header line is skipped."""
    if path in _BUILTIN_DATA:
        ref = importlib.resources.files("mcgompertz.data") / _BUILTIN_DATA[path]
        raw = ref.read_text(encoding="utf-8")
        label = path
    else:
        if not os.path.exists(path):
            raise InputError(f"data file not found: {path}")
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
        label = os.path.basename(path)
    lines = [ln.strip() for ln in raw.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError(f"no data in {path}")
    start = 0
    try:
        float(lines[0])
    except ValueError:
        start = 1
    values = []
    for ln in lines[start:]:
        try:
            values.append(float(ln))
        except ValueError:
            raise InputError(f"unparseable data line in {path}: {ln!r}")
    if not values:
        raise InputError(f"no numeric values in {path}")
    try:
        return Dataset(values=tuple(values), label=label)
    except ValueError as exc:
        raise InputError(str(exc))


def _parse_params(text):
    out = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise InputError(f"bad parameter assignment: {piece!r}")
        key, _, val = piece.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise InputError(f"bad parameter value: {piece!r}")
    if not out:
        raise InputError("empty --params")
    return out


def _resolve_model(name):
    try:
        return model_spec(name)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc))


def _build_params(model, mapping):
    spec = _resolve_model(model)
    try:
        return spec, make_submodel(spec.name, dict(mapping))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc))


def _optimizer_config(cfg):
    kwargs = {"seed": cfg.seed}
    if cfg.starts >= 0:
        kwargs["n_starts"] = cfg.starts
    if cfg.max_iter >= 0:
        kwargs["max_iter"] = cfg.max_iter
    return OptimizerConfig(**kwargs)


def _fit_payload(fit, data, cfg):
    return {
        "schema_version": 1,
        "command": "fit",
        "model": fit.model.name,
        "data": data.label,
        "n_obs": data.n,
        "estimates": {k: float(v) for k, v in fit.estimates.items()},
        "std_errors": (
            None
            if fit.std_errors is None
            else {k: float(v) for k, v in fit.std_errors.items()}
        ),
        "neg_loglik": float(fit.neg_loglik),
        "converged": bool(fit.converged),
        "iterations": int(fit.iterations),
        "grad_norm": float(fit.grad_norm),
        "optimizer": {
            "n_starts": cfg.starts if cfg.starts >= 0 else 8,
            "max_iter": cfg.max_iter if cfg.max_iter >= 0 else 500,
            "seed": cfg.seed,
        },
    }


def _kv_csv(payload):
    """Flatten a nested payload to key,value CSV rows."""
    rows = ["key,value"]

    def emit(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                emit(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(obj, (list, tuple)):
            for i, v in enumerate(obj):
                emit(f"{prefix}[{i}]", v)
        elif isinstance(obj, bool):
            rows.append(f"{prefix},{str(obj).lower()}")
        elif isinstance(obj, float):
            rows.append(f"{prefix},{_fmt_float(obj)}")
        elif obj is None:
            rows.append(f"{prefix},")
        else:
            rows.append(f"{prefix},{obj}")

    emit("", payload)
    return "\n".join(rows) + "\n"


def _emit(cfg, payload, default_fmt="json", table=None):
    fmt = cfg.fmt or default_fmt
    if fmt == "json":
        _write_output(cfg, _json_text(payload) + "\n")
    elif table is not None:
        _write_output(cfg, table)
    else:
        _write_output(cfg, _kv_csv(payload))


def cmd_fit(cfg):
    data = _read_dataset(cfg.data_path)
    spec = _resolve_model(cfg.model)
    fit = fit_mle(spec, data, _optimizer_config(cfg))
    _emit(cfg, _fit_payload(fit, data, cfg))
    return EXIT_OK if fit.converged else EXIT_NO_CONVERGENCE


def cmd_gof(cfg):
    data = _read_dataset(cfg.data_path)
    spec = _resolve_model(cfg.model)
    opt = _optimizer_config(cfg)
    fit = fit_mle(spec, data, opt)
    full_fit = None
    if spec.name != "mcg" and set(model_spec("mcg").constraints) < set(
        spec.constraints
    ):
        full_fit = fit_mle("mcg", data, opt)
    report = gof_report(fit, data, full_fit=full_fit)
    payload = {"schema_version": 1, "command": "gof"}
    payload.update(report.to_dict())
    payload["estimates"] = {k: float(v) for k, v in fit.estimates.items()}
    payload["std_errors"] = (
        None
        if fit.std_errors is None
        else {k: float(v) for k, v in fit.std_errors.items()}
    )
    payload["metadata"] = {
        "data": data.label,
        "converged": bool(fit.converged),
        "ks_pvalue_method": "asymptotic-kolmogorov",
        "ks_caveat": _KS_CAVEAT,
    }
    _emit(cfg, payload)
    ok = fit.converged and (full_fit is None or full_fit.converged)
    return EXIT_OK if ok else EXIT_NO_CONVERGENCE


def cmd_compare(cfg):
    data = _read_dataset(cfg.data_path)
    names = [n.strip() for n in cfg.model.split(",") if n.strip()]
    if not names:
        raise InputError("compare needs at least one model name")
    specs = [_resolve_model(n) for n in names]
    full_spec, nested_specs = specs[0], specs[1:]
    opt = _optimizer_config(cfg)
    full = fit_mle(full_spec, data, opt)
    all_converged = full.converged
    ladder = []
    for spec in nested_specs:
        sub = fit_mle(spec, data, opt)
        all_converged = all_converged and sub.converged
        stat, df, pval = lrt(full, sub)
        ladder.append(
            {
                "model": spec.name,
                "neg_loglik": float(sub.neg_loglik),
                "converged": bool(sub.converged),
                "lrt_stat": float(stat),
                "lrt_df": int(df),
                "lrt_pvalue": float(pval),
            }
        )
    payload = {
        "schema_version": 1,
        "command": "compare",
        "data": data.label,
        "n_obs": data.n,
        "full": {
            "model": full_spec.name,
            "neg_loglik": float(full.neg_loglik),
            "converged": bool(full.converged),
            "estimates": {k: float(v) for k, v in full.estimates.items()},
        },
        "ladder": ladder,
    }
    header = "model,neg_loglik,converged,lrt_stat,lrt_df,lrt_pvalue"
    rows = [header]
    rows.append(
        f"{full_spec.name},{_fmt_float(full.neg_loglik)},"
        f"{str(full.converged).lower()},,,"
    )
    for entry in ladder:
        rows.append(
            f"{entry['model']},{_fmt_float(entry['neg_loglik'])},"
            f"{str(entry['converged']).lower()},{_fmt_float(entry['lrt_stat'])},"
            f"{entry['lrt_df']},{_fmt_float(entry['lrt_pvalue'])}"
        )
    _emit(cfg, payload, table="\n".join(rows) + "\n")
    return EXIT_OK if all_converged else EXIT_NO_CONVERGENCE


def cmd_sample(cfg):
    if cfg.n < 1:
        raise InputError("--n must be a positive integer")
    spec, params = _build_params(cfg.model, cfg.params)
    if isinstance(params, McEParams):
        draws = exp_limit_sample(params, cfg.n, cfg.seed)
    else:
        draws = core.sample(params, cfg.n, cfg.seed)
    values = [float(v) for v in np.asarray(draws)]
    table = "value\n" + "\n".join(_fmt_float(v) for v in values) + "\n"
    payload = {
        "schema_version": 1,
        "command": "sample",
        "model": spec.name,
        "n": cfg.n,
        "seed": cfg.seed,
        "values": values,
    }
    _emit(cfg, payload, default_fmt="csv", table=table)
    return EXIT_OK


def _grid(cfg):
    if cfg.grid_points < 2:
        raise InputError("--grid-points must be at least 2")
    if not (0.0 < cfg.grid_min < cfg.grid_max):
        raise InputError("need 0 < --grid-min < --grid-max")
    return np.linspace(cfg.grid_min, cfg.grid_max, cfg.grid_points)


def cmd_eval(cfg):
    spec, params = _build_params(cfg.model, cfg.params)
    ys = _grid(cfg)
    if isinstance(params, McEParams):
        pdf_v = np.asarray([exp_limit_pdf(params, y) for y in ys])
        cdf_v = np.asarray([exp_limit_cdf(params, y) for y in ys])
        sur_v = np.asarray([exp_limit_survival(params, y) for y in ys])
        haz_v = pdf_v / sur_v
    else:
        pdf_v = np.asarray(core.pdf(params, ys))
        cdf_v = np.asarray(core.cdf(params, ys))
        haz_v = np.asarray(core.hazard(params, ys))
    rows = ["y,pdf,cdf,hazard"]
    for y, f, F, h in zip(ys, pdf_v, cdf_v, haz_v):
        rows.append(f"{_fmt_float(y)},{_fmt_float(f)},{_fmt_float(F)},{_fmt_float(h)}")
    payload = {
        "schema_version": 1,
        "command": "eval",
        "model": spec.name,
        "grid": [float(y) for y in ys],
        "pdf": [float(v) for v in pdf_v],
        "cdf": [float(v) for v in cdf_v],
        "hazard": [float(v) for v in haz_v],
    }
    _emit(cfg, payload, default_fmt="csv", table="\n".join(rows) + "\n")
    return EXIT_OK


def cmd_curves(cfg):
    mapping = dict(cfg.params)
    expected = {"a", "b", "theta", "gamma"}
    if set(mapping) != expected:
        raise InputError(
            "curves needs --params with exactly a, b, theta, gamma "
            "(c comes from the grid)"
        )
    if any(v <= 0.0 or not math.isfinite(v) for v in mapping.values()):
        raise InputError("curve parameters must be positive and finite")
    c_grid = _grid(cfg)
    rows = []
    for measure in ("bowley", "moors"):
        rows.extend(
            shape_curves(
                measure,
                c_grid,
                mapping["a"],
                mapping["b"],
                mapping["theta"],
                mapping["gamma"],
            )
        )
    payload = {"schema_version": 1, "command": "curves", "rows": rows}
    _emit(cfg, payload, default_fmt="csv", table=curves_to_csv(rows))
    return EXIT_OK


_COMMANDS = {
    "fit": cmd_fit,
    "gof": cmd_gof,
    "compare": cmd_compare,
    "sample": cmd_sample,
    "eval": cmd_eval,
    "curves": cmd_curves,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mcg",
        description="Generalized Gompertz family: fitting, comparison, tabulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def fit_flags(p, default_model="mcg"):
        p.add_argument("--model", default=default_model)
        p.add_argument("--data", required=True, dest="data_path")
        p.add_argument("--starts", type=int, default=-1)
        p.add_argument("--max-iter", type=int, default=-1)

    def common_flags(p):
        p.add_argument("--out", default="", dest="output_path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv"), default="", dest="fmt")

    def grid_flags(p, lo, hi, n):
        p.add_argument("--grid-min", type=float, default=lo)
        p.add_argument("--grid-max", type=float, default=hi)
        p.add_argument("--grid-points", type=int, default=n)

    p = sub.add_parser("fit", help="maximum-likelihood fit")
    fit_flags(p)
    common_flags(p)

    p = sub.add_parser("gof", help="goodness-of-fit column for one model")
    fit_flags(p)
    common_flags(p)

    p = sub.add_parser("compare", help="nested likelihood-ratio ladder")
    fit_flags(p, default_model="mcg,bg,kumg,mce")
    common_flags(p)

    p = sub.add_parser("sample", help="draw from a parameterized model")
    p.add_argument("--model", default="mcg")
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=int, default=100)
    common_flags(p)

    p = sub.add_parser("eval", help="tabulate pdf, cdf, hazard on a grid")
    p.add_argument("--model", default="mcg")
    p.add_argument("--params", required=True)
    grid_flags(p, 0.05, 5.0, 101)
    common_flags(p)

    p = sub.add_parser("curves", help="shape measures as functions of c")
    p.add_argument("--params", required=True)
    grid_flags(p, 0.5, 5.0, 10)
    common_flags(p)

    return parser


def build_config(argv):
    parser = _build_parser()
    ns = parser.parse_args(argv)
    params = ()
    if getattr(ns, "params", None):
        params = tuple(sorted(_parse_params(ns.params).items()))
    return RunConfig(
        command=ns.command,
        model=getattr(ns, "model", "mcg"),
        data_path=getattr(ns, "data_path", ""),
        output_path=ns.output_path,
        seed=ns.seed,
        fmt=ns.fmt,
        n=getattr(ns, "n", 100),
        grid_min=getattr(ns, "grid_min", 0.0),
        grid_max=getattr(ns, "grid_max", 0.0),
        grid_points=getattr(ns, "grid_points", 0),
        starts=ns.starts if hasattr(ns, "starts") else -1,
        max_iter=getattr(ns, "max_iter", -1),
        params=params,
    )


def main(argv=None):
    try:
        cfg = build_config(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return _COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
