"""``popkda`` command line: scenarios, random features, spam pipeline, grids, fit, score.

Every artifact is a CSV whose first line is ``# {json}`` holding the
:class:`RunConfig`; ``--format json`` writes the same tables as JSON objects.
A JSON manifest of written files goes to stdout; failures print a JSON error
object to stderr and exit nonzero.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .eigen import SingularWithinClass
from .kernels import parse_kernel
from .population import (GridSpec, fit_gaussian_truncated, fit_homogeneous, fit_inhomogeneous,
                         lambda_curve)
from .rff import fit_population as rff_fit, sample_features, VARIANTS
from .sample import LabeledSample, choose_threshold, classify, fit, fit_moment_space
from .scenarios import draw, scenario

EXIT_USAGE = 2
EXIT_FAILURE = 1


class CliError(Exception):
    def __init__(self, message: str, kind: str = "error", code: int = EXIT_FAILURE):
        super().__init__(message)
        self.kind = kind
        self.code = code


@dataclass
class RunConfig:
    command: str
    seed: int
    ridge: float | None
    format: str
    out_dir: str
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.ridge is not None and self.ridge < 0:
            raise CliError("--ridge must be non-negative", "invalid_argument", EXIT_USAGE)
        if self.format not in ("csv", "json"):
            raise CliError("--format must be csv or json", "invalid_argument", EXIT_USAGE)

    def to_dict(self) -> dict:
        return asdict(self)


class Writer:
    """Writes tables under ``out_dir`` and records them for the manifest."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.out = Path(config.out_dir)
        self.written: list[str] = []

    def table(self, name: str, columns, rows, extra: dict | None = None) -> Path:
        meta = {"run": self.config.to_dict(), "table": name}
        if extra:
            meta.update(extra)
        rows = [list(r) for r in rows]
        if self.config.format == "csv":
            path = io.write_csv(self.out / f"{name}.csv", list(columns), rows, meta)
        else:
            path = io.write_json(self.out / f"{name}.json",
                                 {"meta": meta, "columns": list(columns), "rows": rows})
        self.written.append(str(path))
        return path

    def json(self, name: str, obj: dict) -> Path:
        path = io.write_json(self.out / f"{name}.json", {"run": self.config.to_dict(), **obj})
        self.written.append(str(path))
        return path

    def grid(self, name: str, model, grid: GridSpec, extra: dict | None = None) -> Path:
        extra = dict(extra or {})
        extra["grid"] = asdict(grid)
        return self.table(name, ["x", "y", "score"], io.grid_rows(model, grid), extra)


# ---------------------------------------------------------------- parsing helpers

def int_list(text: str) -> list[int]:
    """``"1..4"``, ``"1,3,5"`` or a mix such as ``"1..3,6"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                a, b = part.split("..")
                lo, hi = int(a), int(b)
                if hi < lo:
                    raise ValueError
                out.extend(range(lo, hi + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def grid_arg(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def kernel_arg(text: str):
    try:
        return parse_kernel(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def truncated_arg(text: str) -> tuple[float, int]:
    try:
        w, n = text.split(":")
        return float(w), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected bandwidth:N, got {text!r}") from None


def _pop_ridge(config: RunConfig) -> float:
    return 0.0 if config.ridge is None else config.ridge


def _coef_rows(models: dict) -> tuple[list[str], list[list]]:
    labels: list[str] = []
    for m in models.values():
        for lab in m.basis.labels():
            if lab not in labels:
                labels.append(lab)
    cols = ["term"] + list(models)
    rows = []
    for lab in labels:
        row = [lab]
        for m in models.values():
            row.append(m.coefficients().get(lab, ""))
        rows.append(row)
    rows.append(["lambda"] + [m.lam for m in models.values()])
    rows.append(["degenerate"] + [int(m.degenerate) for m in models.values()])
    return cols, rows


# ---------------------------------------------------------------- commands

def cmd_scenario(args, config: RunConfig, out: Writer) -> None:
    problem = scenario(args.id)
    ridge = _pop_ridge(config)
    sid = args.id
    for name, fitter, degrees in (("homo", fit_homogeneous, args.poly_homo),
                                  ("inhomo", fit_inhomogeneous, args.poly_inhomo)):
        if not degrees:
            continue
        models = {f"{name}{d}": fitter(problem, d, ridge) for d in degrees}
        cols, rows = _coef_rows(models)
        out.table(f"scenario{sid}_{name}_coefficients", cols, rows)
        for key, m in models.items():
            if args.grid:
                out.grid(f"scenario{sid}_{key}_grid", m, args.grid)
            if args.save_models:
                out.json(f"scenario{sid}_{key}_model", {"model": m.to_dict()})
    for bw, N in args.gaussian_truncated or []:
        m = fit_gaussian_truncated(problem, bw, N, ridge)
        cols, rows = _coef_rows({f"gauss{bw:g}_N{N}": m})
        out.table(f"scenario{sid}_gauss{bw:g}_N{N}_coefficients", cols, rows)
        if args.grid:
            out.grid(f"scenario{sid}_gauss{bw:g}_N{N}_grid", m, args.grid)
        if args.save_models:
            out.json(f"scenario{sid}_gauss{bw:g}_N{N}_model", {"model": m.to_dict()})
    if args.lambda_curve:
        out.table(f"scenario{sid}_lambda_curve", ["N", "lambda"], lambda_curve(problem, args.lambda_curve, ridge))
    if args.sample_n:
        points, labels = draw(problem, args.sample_n, config.seed)
        sample = LabeledSample(points, labels)
        out.table(f"scenario{sid}_sample", ["x1", "x2", "label"],
                  [(p[0], p[1], int(lab)) for p, lab in zip(points, labels)])
        grid = args.grid or GridSpec()
        for spec in args.sample_kernel:
            model = choose_threshold(fit(sample, spec, config.ridge), sample)
            tag = _kernel_tag(spec)
            out.grid(f"scenario{sid}_sample_{tag}_grid", model, grid,
                     {"lambda": model.lam, "threshold": model.threshold, "ridge_used": model.ridge})


def _kernel_tag(spec) -> str:
    d = spec.to_dict()
    return d["kind"] + "".join(f"{v:g}" if isinstance(v, float) else str(v)
                               for k, v in sorted(d.items()) if k != "kind")


def cmd_rff(args, config: RunConfig, out: Writer) -> None:
    problem = scenario(args.id)
    ridge = _pop_ridge(config)
    d_list = sorted(set(args.D))
    feats = sample_features(problem.dim, max(d_list + [args.D_max]), args.bandwidth, args.variant, config.seed)
    curve = []
    for D in range(1, args.D_max + 1):
        try:
            curve.append((D, rff_fit(problem, feats.prefix(D), ridge).lam, ""))
        except SingularWithinClass as exc:
            curve.append((D, float("nan"), f"singular (condition {exc.condition:.3g})"))
    out.table(f"scenario{args.id}_rff_lambda_curve", ["D", "lambda", "note"], curve,
              {"features": feats.to_dict()})
    grid = args.grid or GridSpec()
    for D in d_list:
        model = rff_fit(problem, feats.prefix(D), ridge)
        out.grid(f"scenario{args.id}_rff_D{D}_grid", model, grid, {"lambda": model.lam})


def cmd_spam(args, config: RunConfig, out: Writer) -> None:
    from .dataprep import prepare_spam

    path = Path(args.data)
    if not path.is_file():
        raise CliError(f"spambase file not found: {path}", "missing_data")
    data = prepare_spam(path, args.k, args.train_frac, config.seed, args.transform_policy)
    train_idx = set(data.train_index.tolist())
    out.json("spam_pca", {"pca": data.pca.to_dict(), "n": data.table.n,
                          "proportions": data.table.proportions})
    out.table("spam_scores", [f"pc{c + 1}" for c in range(args.k)] + ["label", "split"],
              [list(x) + [int(lab), "train" if i in train_idx else "test"]
               for i, (x, lab) in enumerate(zip(data.scores, data.labels))])
    rows, models = [], {}
    for d in args.degrees:
        model = choose_threshold(fit_moment_space(data.train, parse_kernel(f"inhomo:{d}"), config.ridge),
                                 data.train)
        models[f"degree{d}"] = model
        tr = classify(model, data.train.points, data.train.labels)
        te = classify(model, data.test.points, data.test.labels)
        spam_err, regular_err = te.class_errors
        rows.append((d, model.lam, tr.error, spam_err, regular_err, te.error))
    out.table("spam_table", ["degree", "ratio", "train_error", "spam_misclassified",
                             "regular_misclassified", "test_error"], rows)
    cols, crow = _coef_rows(models)
    out.table("spam_coefficients", cols, crow)
    if args.k == 2:
        lo, hi = data.scores.min(axis=0), data.scores.max(axis=0)
        grid = args.grid or GridSpec(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]), 121, 121)
        for key, m in models.items():
            out.grid(f"spam_{key}_grid", m, grid, {"threshold": m.threshold})


def cmd_grid(args, config: RunConfig, out: Writer) -> None:
    model = _load_model(args.model)
    grid = args.grid or GridSpec()
    try:
        out.grid(args.name, model, grid, {"model": str(args.model)})
    except ValueError as exc:
        raise CliError(str(exc), "dimension_mismatch") from None


def _load_model(path):
    try:
        return io.load_model(path)
    except FileNotFoundError:
        raise CliError(f"model file not found: {path}", "missing_model") from None
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError(f"invalid model file {path}: {exc}", "invalid_model") from None


def _load_sample(path) -> LabeledSample:
    try:
        return LabeledSample.from_csv(path)
    except FileNotFoundError:
        raise CliError(f"data file not found: {path}", "missing_data") from None
    except ValueError as exc:
        raise CliError(str(exc), "invalid_data") from None


def cmd_fit(args, config: RunConfig, out: Writer) -> None:
    sample = _load_sample(args.data)
    if args.moment_space:
        try:
            model = fit_moment_space(sample, args.kernel, config.ridge)
        except ValueError as exc:
            raise CliError(str(exc), "invalid_argument", EXIT_USAGE) from None
    else:
        model = fit(sample, args.kernel, config.ridge)
    model = choose_threshold(model, sample)
    train = classify(model, sample.points, sample.labels)
    out.json(args.name, {"model": model.to_dict(), "train_error": train.error})


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def cmd_score(args, config: RunConfig, out: Writer) -> None:
    model = _load_model(args.model)
    try:
        _, header, raw = io.read_csv(args.data)
        if header and all(_is_number(v) for v in header):
            raw = [header] + raw
        rows = np.array([[float(v) for v in r] for r in raw], dtype=float)
    except FileNotFoundError:
        raise CliError(f"data file not found: {args.data}", "missing_data") from None
    except ValueError as exc:
        raise CliError(f"invalid data file {args.data}: {exc}", "invalid_data") from None
    if rows.ndim != 2 or rows.size == 0:
        raise CliError(f"{args.data}: no data rows", "invalid_data")
    labelled = rows.shape[1] == model.dim + 1
    if not labelled and rows.shape[1] != model.dim:
        raise CliError(f"model expects {model.dim} columns, file has {rows.shape[1]}", "dimension_mismatch")
    X = rows[:, :model.dim]
    scores = model.score(X)
    cols = [f"x{k + 1}" for k in range(model.dim)] + ["score"]
    table = [list(x) + [s] for x, s in zip(X, scores)]
    extra = {}
    if model.threshold is not None:
        truth = rows[:, -1].astype(int) if labelled else None
        res = classify(model, X, truth)
        cols.append("predicted")
        for row, lab in zip(table, res.labels):
            row.append(int(lab))
        if truth is not None:
            extra["error"] = res.error
            extra["class_errors"] = list(res.class_errors)
    out.table(args.name, cols, table, extra)


COMMANDS = {"scenario": cmd_scenario, "rff": cmd_rff, "spam": cmd_spam,
            "grid": cmd_grid, "fit": cmd_fit, "score": cmd_score}


# ---------------------------------------------------------------- parser

class JsonArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}", "usage", EXIT_USAGE)


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="seed for every random draw (default 0)")
    p.add_argument("--out-dir", default=d("out"), help="output directory (default ./out)")
    p.add_argument("--ridge", type=float, default=d(None),
                   help="within-class ridge; default 0 for population fits, trace-scaled for sample fits")
    p.add_argument("--format", choices=("csv", "json"), default=d("csv"))


def build_parser() -> argparse.ArgumentParser:
    parser = JsonArgumentParser(prog="popkda", description="Two-class kernel discriminant analysis.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=JsonArgumentParser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        return p

    p = add("scenario", "population and sample fits for a bivariate normal preset")
    p.add_argument("id", type=int, choices=(1, 2))
    p.add_argument("--poly-homo", type=int_list, default=None, metavar="DEGREES", help="e.g. 1..4")
    p.add_argument("--poly-inhomo", type=int_list, default=None, metavar="DEGREES")
    p.add_argument("--gaussian-truncated", type=truncated_arg, action="append", metavar="BW:N")
    p.add_argument("--lambda-curve", type=int, default=None, metavar="N_MAX")
    p.add_argument("--sample-n", type=int, default=None, help="points per class for the sample fits")
    p.add_argument("--sample-kernel", type=kernel_arg, action="append", default=None,
                   help="kernel for sample fits (repeatable); default homo:1, inhomo:2, gaussian:1")
    p.add_argument("--grid", type=grid_arg, default=None, metavar="XMIN,XMAX,YMIN,YMAX,NX,NY")
    p.add_argument("--save-models", action="store_true", help="also write each population model as JSON")

    p = add("rff", "random Fourier feature fits for a preset")
    p.add_argument("id", type=int, choices=(1, 2))
    p.add_argument("--bandwidth", type=float, default=1.0)
    p.add_argument("--D-max", dest="D_max", type=int, default=40, help="largest D on the lambda curve")
    p.add_argument("--D", type=int_list, default=[2, 10, 40], help="D values for grids (default 2,10,40)")
    p.add_argument("--variant", choices=VARIANTS, default="cos")
    p.add_argument("--grid", type=grid_arg, default=None)

    p = add("spam", "spambase pipeline and error table")
    p.add_argument("--data", default="data/spambase.data")
    p.add_argument("--degrees", type=int_list, default=list(range(1, 7)))
    p.add_argument("--k", type=int, default=2, help="number of principal components")
    p.add_argument("--train-frac", type=float, default=0.6)
    p.add_argument("--transform-policy", choices=("logit-log", "logit-all"), default="logit-log")
    p.add_argument("--grid", type=grid_arg, default=None)

    p = add("grid", "evaluate a saved model on a regular 2-d grid")
    p.add_argument("model")
    p.add_argument("--grid", type=grid_arg, default=None)
    p.add_argument("--name", default="grid")

    p = add("fit", "fit a sample model from a labelled CSV (features then label 1/2)")
    p.add_argument("data")
    p.add_argument("--kernel", type=kernel_arg, required=True, help="homo:D, inhomo:D or gaussian:BW")
    p.add_argument("--moment-space", action="store_true", help="polynomial kernels only: fit from moments")
    p.add_argument("--name", default="model")

    p = add("score", "score (and classify) points with a saved model")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("--name", default="scores")
    return parser


_RUN_KEYS = ("command", "seed", "ridge", "format", "out_dir")


def config_from_args(args) -> RunConfig:
    params = {}
    for k, v in sorted(vars(args).items()):
        if k in _RUN_KEYS:
            continue
        params[k] = _param_json(v)
    config = RunConfig(args.command, args.seed, args.ridge, args.format, args.out_dir, params)
    config.validate()
    return config


def _param_json(v):
    if isinstance(v, GridSpec):
        return asdict(v)
    if isinstance(v, list):
        return [_param_json(x) for x in v]
    if isinstance(v, tuple):
        return list(v)
    if hasattr(v, "to_dict"):
        return v.to_dict()
    return v


def _validate(args) -> None:
    if args.command == "scenario":
        if args.sample_n is not None and args.sample_n < 2:
            raise CliError("--sample-n must be at least 2", "invalid_argument", EXIT_USAGE)
        if args.sample_n and args.sample_kernel is None:
            args.sample_kernel = [parse_kernel(s) for s in ("homo:1", "inhomo:2", "gaussian:1")]
        if args.sample_kernel is None:
            args.sample_kernel = []
    if args.command == "rff":
        if args.D_max < 1 or min(args.D) < 1:
            raise CliError("D values must be positive", "invalid_argument", EXIT_USAGE)
        if args.bandwidth <= 0:
            raise CliError("--bandwidth must be positive", "invalid_argument", EXIT_USAGE)
    if args.command == "spam" and not 0.0 < args.train_frac < 1.0:
        raise CliError("--train-frac must lie in (0, 1)", "invalid_argument", EXIT_USAGE)


def _emit_error(exc: Exception, kind: str, code: int) -> int:
    print(json.dumps({"status": "error", "kind": kind, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        config = config_from_args(args)
        out = Writer(config)
        COMMANDS[args.command](args, config, out)
    except CliError as exc:
        return _emit_error(exc, exc.kind, exc.code)
    except SingularWithinClass as exc:
        return _emit_error(exc, "singular_within_class", EXIT_FAILURE)
    except (ValueError, OSError) as exc:
        return _emit_error(exc, type(exc).__name__, EXIT_FAILURE)
    print(json.dumps({"status": "ok", "command": config.command, "files": out.written}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
