"""Thresholding of the evolved field and threshold-curve emission."""
import csv
import io
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import DegenerateDataError, ParameterError
from .image_model import to_unit
from .metrics import METRIC_NAMES, MetricsReport, evaluate, thin

CURVE_HEADER = ("T",) + METRIC_NAMES


@dataclass(frozen=True)
class ThresholdSpec:
    kind: str = "fixed"
    T0: float = 0.5
    lo: float = 0.05
    hi: float = 0.95
    step: float = 0.05

    def __post_init__(self):
        if self.kind == "fixed":
            if not 0 <= self.T0 <= 1:
                raise ParameterError(f"T0 must lie in [0, 1], got {self.T0}")
        elif self.kind == "sweep":
            if not self.lo < self.hi:
                raise ParameterError(f"sweep needs lo < hi, got {self.lo} >= {self.hi}")
            if not self.step > 0:
                raise ParameterError(f"sweep step must be > 0, got {self.step}")
        elif self.kind != "otsu":
            raise ParameterError(f"unknown threshold kind {self.kind!r}")

    @classmethod
    def parse(cls, text):
        """Parse ``fixed:<T0>`` or ``otsu``."""
        text = str(text).strip()
        if text == "otsu":
            return cls(kind="otsu")
        if text.startswith("fixed:"):
            try:
                return cls(kind="fixed", T0=float(text[6:]))
            except ValueError:
                raise ParameterError(f"bad threshold {text!r}") from None
        raise ParameterError(f"threshold must be 'fixed:<T0>' or 'otsu', got {text!r}")

    def __str__(self):
        if self.kind == "fixed":
            return f"fixed:{self.T0:g}"
        return self.kind


@dataclass
class ThresholdCurve:
    rows: List[Tuple[float, MetricsReport]]

    @property
    def thresholds(self):
        return [t for t, _ in self.rows]

    def best(self):
        """``(T, FM)`` at the largest FM; ties go to the lowest T."""
        best_t, best_fm = None, -1.0
        for t, rep in self.rows:
            if rep.fm > best_fm:
                best_t, best_fm = t, rep.fm
        return best_t, best_fm

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CURVE_HEADER)
        for t, rep in self.rows:
            writer.writerow([fmt6(t)] + [fmt6(v) for v in rep.values().values()])
        return buf.getvalue()


def fmt6(value):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.6f}"


def read_curve_csv(text):
    """Parse curve CSV text into ``[(T, {metric: value})]``."""
    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != CURVE_HEADER:
        raise ValueError(f"unexpected curve header {rows[0]}")
    return [(float(r[0]), dict(zip(METRIC_NAMES, map(float, r[1:])))) for r in rows[1:]]


def binarize_fixed(u, T0):
    """Foreground where the unit-scaled field ``(u + 1) / 2`` is below ``T0``."""
    if not 0 <= T0 <= 1:
        raise ParameterError(f"T0 must lie in [0, 1], got {T0}")
    return to_unit(np.asarray(u, dtype=np.float64)) < T0


def otsu_scan(img):
    """Otsu scan over 256 levels; returns ``(threshold, between_class_variance)``.

    Values are quantized to ``round(v * 255)``. The split "levels <= t" is
    returned as the midpoint ``(t + 0.5) / 255`` so that a strict ``v < T``
    test reproduces it. Between-class variance is in unit-range units.
    """
    img = np.asarray(img, dtype=np.float64)
    levels = np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.int64)
    hist = np.bincount(levels.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    if np.count_nonzero(hist) < 2:
        raise DegenerateDataError("degenerate histogram: image is constant")
    centers = np.arange(256) / 255.0
    w0 = np.cumsum(hist)[:-1] / total
    m_cum = np.cumsum(hist * centers)[:-1] / total
    m_total = float((hist * centers).sum() / total)
    w1 = 1.0 - w0
    with np.errstate(divide="ignore", invalid="ignore"):
        var = (m_total * w0 - m_cum) ** 2 / (w0 * w1)
    var[(w0 <= 0) | (w1 <= 0)] = -1.0
    t = int(np.argmax(var))  # first maximum = lowest threshold
    return (t + 0.5) / 255.0, float(var[t])


def otsu_threshold(img):
    return otsu_scan(img)[0]


def binarize(u, spec):
    """Apply a fixed or Otsu threshold spec; returns ``(binary, T_used)``."""
    if spec.kind == "fixed":
        return binarize_fixed(u, spec.T0), spec.T0
    if spec.kind == "otsu":
        t = otsu_threshold(to_unit(np.asarray(u, dtype=np.float64)))
        return binarize_fixed(u, t), t
    raise ParameterError("sweep thresholds need ground truth; use sweep_thresholds")


def threshold_grid(lo, hi, step):
    """``lo, lo + step, ...`` up to and including ``hi`` (with 1e-9 slack)."""
    if not lo < hi or not step > 0:
        raise ParameterError(f"bad sweep range lo={lo} hi={hi} step={step}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    # rounding keeps grid points at their decimal values (0.15, not 0.15000000000000002)
    return [round(lo + i * step, 12) for i in range(n + 1)]


def sweep_thresholds(u, gt, lo=0.05, hi=0.95, step=0.05, skeleton: Optional[np.ndarray] = None):
    """Binarize at every grid threshold and score each result against ``gt``."""
    gt = np.asarray(gt, dtype=bool)
    if np.shape(u) != gt.shape:
        raise ValueError(f"dimension mismatch: field {np.shape(u)} vs gt {gt.shape}")
    if skeleton is None:
        skeleton = thin(gt)
    rows = [(t, evaluate(binarize_fixed(u, t), gt, skeleton)) for t in threshold_grid(lo, hi, step)]
    return ThresholdCurve(rows)
