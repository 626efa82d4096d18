"""Command-line front end: ``pdebin {binarize,evaluate,sweep,curves,channels}``.

Exit codes: 0 success, 1 parameter error, 2 IO error, 3 degenerate data.
"""
import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import grids, reporting
from .binarizer import ThresholdSpec, otsu_threshold, sweep_thresholds
from .edge_field import EdgeParams
from .errors import DegenerateDataError, ImageIOError, ParameterError, PdeBinError
from .image_model import (AUTO_CANDIDATES, CHANNEL_MODES, channel, channel_report, is_rgb,
                          load_ground_truth, load_image, save_binary, save_image, scan_dataset,
                          to_unit)
from .metrics import METRIC_NAMES, evaluate, thin
from .pipeline import RunConfig, run_pipeline
from .solver import SolverParams

log = logging.getLogger("pdebin")

EDGE_MODE_FLAGS = {"gradient": "gradient", "structure-tensor": "structure_tensor",
                   "hessian": "hessian"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ParameterError.exit_code, f"{self.prog}: error: {message}\n")


def _add_model_flags(p):
    d_s, d_e = SolverParams(), EdgeParams()
    g = p.add_argument_group("model")
    g.add_argument("--channel", choices=CHANNEL_MODES, default="gray")
    g.add_argument("--a", type=float, default=d_s.a, help="source shape, 0 < a <= 1")
    g.add_argument("--p", type=float, default=d_e.p)
    g.add_argument("--q", type=float, default=d_e.q)
    g.add_argument("--k", default=str(d_e.k), help="'auto' or a positive float")
    g.add_argument("--cs", type=float, default=d_s.c_s, help="source coefficient")
    g.add_argument("--ce", type=float, default=d_s.c_e, help="edge coefficient")
    g.add_argument("--tau", type=float, default=d_s.tau)
    g.add_argument("--iters", type=int, default=d_s.N)
    g.add_argument("--alpha", type=float, default=d_s.alpha, help="fractional order")
    g.add_argument("--memory-len", type=int, default=None)
    g.add_argument("--sigma", type=float, default=d_e.sigma)
    g.add_argument("--rho", type=float, default=d_e.rho)
    g.add_argument("--edge-mode", choices=list(EDGE_MODE_FLAGS), default="structure-tensor")
    g.add_argument("--frozen-edges", action="store_true")
    g.add_argument("--threshold", default="fixed:0.5", help="'fixed:<T0>' or 'otsu'")
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--config", help="flat JSON file keyed by flag names; flags override it")
    g.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = _Parser(prog="pdebin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("binarize", help="binarize one image")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output PNG path or directory")
    _add_model_flags(p)

    p = sub.add_parser("evaluate", help="binarize and score a GT-paired corpus")
    p.add_argument("--dataset", required=True)
    p.add_argument("--gt-suffix", default="_GT")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--save-images", action="store_true")
    _add_model_flags(p)

    p = sub.add_parser("sweep", help="evaluate a corpus over a parameter grid")
    p.add_argument("--dataset", required=True)
    p.add_argument("--gt-suffix", default="_GT")
    p.add_argument("--out", required=True)
    p.add_argument("--grid", required=True, help="fig3|fig4|fig5|fig6 or a JSON grid file")
    p.add_argument("--max-grid", type=int, default=grids.DEFAULT_CAP)
    _add_model_flags(p)

    p = sub.add_parser("curves", help="threshold curves (FM etc. versus T) per image")
    p.add_argument("--dataset", required=True)
    p.add_argument("--gt-suffix", default="_GT")
    p.add_argument("--out", required=True)
    p.add_argument("--lo", type=float, default=0.05)
    p.add_argument("--hi", type=float, default=0.95)
    p.add_argument("--step", type=float, default=0.05)
    _add_model_flags(p)

    p = sub.add_parser("channels", help="write gray/H/S/I channels and their bimodality")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _config_defaults(path, subparser):
    """Map a flat JSON config (keys = flag names) onto parser defaults."""
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ImageIOError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"config file {path} must hold a flat JSON object")
    known = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in data.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known or dest in ("config", "help"):
            raise ParameterError(f"unknown config key {key!r}")
        action = known[dest]
        if action.type is not None and value is not None and not isinstance(value, bool):
            try:
                value = action.type(value)
            except (TypeError, ValueError):
                raise ParameterError(f"config key {key!r}: bad value {value!r}") from None
        if action.choices is not None and value not in action.choices:
            raise ParameterError(f"config key {key!r} must be one of {list(action.choices)}")
        defaults[dest] = value
    return defaults


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**_config_defaults(args.config, sub))
        args = parser.parse_args(argv)
    return args


def _parse_k(text):
    if str(text) == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"--k must be 'auto' or a number, got {text!r}") from None


def config_from_args(args):
    solver = SolverParams(a=args.a, c_s=args.cs, c_e=args.ce, tau=args.tau, N=args.iters,
                          alpha=args.alpha, frozen_edges=args.frozen_edges,
                          memory_len=args.memory_len)
    edge = EdgeParams(sigma=args.sigma, rho=args.rho, k=_parse_k(args.k), p=args.p, q=args.q,
                      mode=EDGE_MODE_FLAGS[args.edge_mode])
    return RunConfig(solver=solver, edge=edge, threshold=ThresholdSpec.parse(args.threshold),
                     channel=args.channel, jobs=args.jobs)


def _write(path, text):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc


def _outdir(path):
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ImageIOError(f"cannot create {path}: {exc}") from exc
    return path


def _paired(dataset, gt_suffix):
    entries = [e for e in scan_dataset(dataset, gt_suffix) if e.gt_path is not None]
    if not entries:
        raise DegenerateDataError(f"no GT-paired images in {dataset} (suffix {gt_suffix!r})")
    return entries


def _map(fn, items, jobs):
    """Ordered map, in a process pool when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*items)))


# ---- binarize ---------------------------------------------------------------

def cmd_binarize(args):
    config = config_from_args(args)
    img = load_image(args.input)
    out = Path(args.out)
    if out.is_dir() or not out.suffix:
        out = out / f"{Path(args.input).stem}.png"
    convergence = []

    def sink(n, delta):
        convergence.append(delta)
        log.info("iter %d  mean|du| = %.6g", n, delta)

    result = run_pipeline(img, config, sink)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_binary(out, result.binary)
    sidecar = result.sidecar(config)
    sidecar["input"] = str(args.input)
    sidecar["convergence"] = convergence
    _write(out.with_suffix(".json"), reporting.dumps(sidecar))
    print(out)
    return 0


# ---- evaluate ---------------------------------------------------------------

def evaluate_entry(entry, config, save_dir=None):
    img = load_image(entry.image_path)
    gt = load_ground_truth(entry.gt_path, img.shape)
    result = run_pipeline(img, config)
    if save_dir is not None:
        save_binary(Path(save_dir) / f"{entry.stem}.png", result.binary)
    return entry.stem, evaluate(result.binary, gt)


def cmd_evaluate(args):
    config = config_from_args(args)
    out = _outdir(args.out)
    entries = _paired(args.dataset, args.gt_suffix)
    save_dir = _outdir(out / "images") if args.save_images else None
    rows = _map(evaluate_entry, [(e, config, save_dir) for e in entries], config.jobs)
    _write(out / "metrics.csv", reporting.write_metrics_csv(rows))
    summary = reporting.summarize(rows)
    summary["config"] = config.to_dict()
    summary["per_image"] = [reporting.metrics_json(s, r) for s, r in sorted(rows)]
    _write(out / "summary.json", reporting.dumps(summary))
    m = summary["mean"]
    print(" ".join(f"{name}={m[name]}" for name in METRIC_NAMES))
    return 0


# ---- sweep ------------------------------------------------------------------

def _base_value(config, name):
    if name == "T0":
        return config.threshold.T0 if config.threshold.kind == "fixed" else ""
    if name in SolverParams.__dataclass_fields__:
        return getattr(config.solver, name)
    return getattr(config.edge, name)


def sweep_entry(entry, config, points):
    img = load_image(entry.image_path)
    gt = load_ground_truth(entry.gt_path, img.shape)
    skeleton = thin(gt)
    rows = []
    for i, point in enumerate(points):
        cfg = config.with_values(**point)
        result = run_pipeline(img, cfg)
        rows.append((i, cfg, evaluate(result.binary, gt, skeleton)))
    return entry.stem, rows


def cmd_sweep(args):
    config = config_from_args(args)
    points = grids.load_grid(args.grid, args.max_grid)
    for point in points:  # validate every grid point before any work
        config.with_values(**point)
    out = _outdir(args.out)
    entries = _paired(args.dataset, args.gt_suffix)
    cols = grids.columns(points)
    results = _map(sweep_entry, [(e, config, points) for e in entries], config.jobs)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["stem", "point"] + cols + list(METRIC_NAMES))
    for stem, rows in sorted(results, key=lambda r: r[0]):
        for i, cfg, report in rows:
            vals = reporting.formatted_values(report)
            writer.writerow([stem, i] + [_base_value(cfg, c) for c in cols]
                            + [vals[m] for m in METRIC_NAMES])
    _write(out / "sweep.csv", buf.getvalue())
    _write(out / "sweep.json", reporting.dumps({"grid": args.grid, "points": points,
                                                "config": config.to_dict()}))
    print(out / "sweep.csv")
    return 0


# ---- curves -----------------------------------------------------------------

def curve_entry(entry, config, lo, hi, step):
    img = load_image(entry.image_path)
    gt = load_ground_truth(entry.gt_path, img.shape)
    result = run_pipeline(img, config)
    curve = sweep_thresholds(result.field, gt, lo, hi, step)
    try:
        otsu = otsu_threshold(to_unit(result.field))
    except DegenerateDataError:
        otsu = None
    return entry.stem, curve, otsu


def cmd_curves(args):
    config = config_from_args(args)
    out = _outdir(args.out)
    entries = _paired(args.dataset, args.gt_suffix)
    results = _map(curve_entry, [(e, config, args.lo, args.hi, args.step) for e in entries],
                   config.jobs)
    combined = []
    summary = {}
    for stem, curve, otsu in sorted(results, key=lambda r: r[0]):
        text = curve.to_csv()
        _write(out / "curves" / f"{stem}.csv", text)
        lines = text.splitlines()
        if not combined:
            combined.append("stem," + lines[0])
        combined.extend(f"{stem},{line}" for line in lines[1:])
        best_t, best_fm = curve.best()
        summary[stem] = {
            "argmax_fm_threshold": best_t,
            "argmax_fm": round(best_fm, 6),
            "otsu_threshold": otsu,
            "labels": {"argmax_fm_threshold": "oracle dynamic threshold (uses GT)",
                       "otsu_threshold": "Otsu on the evolved field (no GT)"},
        }
    _write(out / "curves.csv", "\n".join(combined) + "\n")
    _write(out / "curves.json", reporting.dumps({"images": summary, "lo": args.lo,
                                                 "hi": args.hi, "step": args.step,
                                                 "config": config.to_dict()}))
    print(out / "curves.csv")
    return 0


# ---- channels ---------------------------------------------------------------

def cmd_channels(args):
    img = load_image(args.input)
    out = _outdir(args.out)
    stem = Path(args.input).stem
    if not is_rgb(img):
        print(f"notice: {args.input} is grayscale; writing the gray channel only", file=sys.stderr)
        save_image(out / f"{stem}_gray.png", img)
        _write(out / f"{stem}_channels.json", reporting.dumps(
            {"input": str(args.input), "grayscale_input": True, "chosen": "gray"}))
        return 0
    for name in ("gray", "hue", "saturation", "intensity"):
        save_image(out / f"{stem}_{name}.png", channel(img, name))
    chosen, scores = channel_report(img)
    _write(out / f"{stem}_channels.json", reporting.dumps({
        "input": str(args.input),
        "grayscale_input": False,
        "between_class_variance": scores,
        "candidates": list(AUTO_CANDIDATES),
        "chosen": chosen,
    }))
    print(chosen)
    return 0


COMMANDS = {"binarize": cmd_binarize, "evaluate": cmd_evaluate, "sweep": cmd_sweep,
            "curves": cmd_curves, "channels": cmd_channels}


def main(argv=None):
    try:
        args = parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        return COMMANDS[args.command](args)
    except PdeBinError as exc:
        print(f"pdebin: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"pdebin: {exc}", file=sys.stderr)
        return ImageIOError.exit_code


if __name__ == "__main__":
    sys.exit(main())
