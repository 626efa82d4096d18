"""CSV/JSON serialization of metric reports and corpus summaries."""
import csv
import io
import json
import math

from .metrics import FPS_VARIANT, METRIC_NAMES, pooled

METRICS_HEADER = ("stem",) + METRIC_NAMES + ("TP", "FP", "TN", "FN")
# FM and Fps are written as percentages ("88.00")
DECIMALS = {"FM": 2, "Fps": 2, "PSNR": 2, "DRD": 2, "NRM": 4}
PERCENT = {"FM", "Fps"}


def _fmt(value, decimals):
    if math.isinf(value):
        return "inf"
    return f"{value:.{decimals}f}"


def formatted_values(report):
    """Metric name -> display string (percent for FM/Fps)."""
    out = {}
    for name, value in report.values().items():
        scale = 100.0 if name in PERCENT else 1.0
        out[name] = _fmt(value * scale, DECIMALS[name])
    return out


def metrics_row(stem, report):
    vals = formatted_values(report)
    c = report.counts
    return [stem] + [vals[m] for m in METRIC_NAMES] + [c.TP, c.FP, c.TN, c.FN]


def metrics_json(stem, report):
    """Same keys as the CSV row; numbers as written there, ``"inf"`` kept as a string."""
    vals = formatted_values(report)
    out = {"stem": stem}
    for m in METRIC_NAMES:
        out[m] = vals[m] if vals[m] == "inf" else float(vals[m])
    c = report.counts
    out.update(TP=c.TP, FP=c.FP, TN=c.TN, FN=c.FN)
    return out


def write_metrics_csv(rows):
    """``rows`` is an iterable of ``(stem, MetricsReport)``; sorted by stem."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    for stem, report in sorted(rows, key=lambda r: r[0]):
        writer.writerow(metrics_row(stem, report))
    return buf.getvalue()


def read_metrics_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    for r in rows:
        for m in METRIC_NAMES:
            r[m] = float(r[m])
        for c in ("TP", "FP", "TN", "FN"):
            r[c] = int(r[c])
    return rows


def summarize(rows):
    """Unweighted per-image means (of the values as written) plus pooled counts."""
    rows = sorted(rows, key=lambda r: r[0])
    written = read_metrics_csv(write_metrics_csv(rows))
    mean = {}
    for m in METRIC_NAMES:
        vals = [r[m] for r in written]
        avg = math.fsum(vals) / len(vals)
        mean[m] = "inf" if math.isinf(avg) else round(avg, DECIMALS[m])
    pool = pooled([rep.counts for _, rep in rows])
    pooled_out = {
        "FM": round(pool["FM"] * 100.0, 2),
        "PSNR": "inf" if math.isinf(pool["PSNR"]) else round(pool["PSNR"], 2),
        "NRM": round(pool["NRM"], 4),
        "counts": pool["counts"],
    }
    return {
        "n_images": len(rows),
        "mean": mean,
        "pooled": pooled_out,
        "units": {"FM": "%", "Fps": "%", "PSNR": "dB", "DRD": "", "NRM": "fraction"},
        "fps_variant": FPS_VARIANT,
    }


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
