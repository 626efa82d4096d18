"""DIBCO-style binarization measures: FM, pseudo-FM, PSNR, DRD and NRM.

All functions take boolean arrays where ``True`` is foreground (text), the
positive class.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _backend
from .errors import DegenerateDataError

FPS_VARIANT = "skeleton-recall"
METRIC_NAMES = ("FM", "Fps", "PSNR", "DRD", "NRM")
# larger is better for the first three, smaller for the last two
HIGHER_IS_BETTER = {"FM": True, "Fps": True, "PSNR": True, "DRD": False, "NRM": False}


@dataclass(frozen=True)
class ConfusionCounts:
    TP: int
    FP: int
    TN: int
    FN: int

    @property
    def total(self):
        return self.TP + self.FP + self.TN + self.FN

    def __add__(self, other):
        return ConfusionCounts(self.TP + other.TP, self.FP + other.FP,
                               self.TN + other.TN, self.FN + other.FN)


@dataclass(frozen=True)
class MetricsReport:
    fm: float
    fps: float
    psnr: float
    drd: float
    nrm: float
    counts: ConfusionCounts

    def values(self):
        return {"FM": self.fm, "Fps": self.fps, "PSNR": self.psnr,
                "DRD": self.drd, "NRM": self.nrm}

    def as_dict(self):
        d = self.values()
        d.update(asdict(self.counts))
        return d


def _check_pair(result, gt):
    result = np.asarray(result, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if result.shape != gt.shape:
        raise ValueError(f"dimension mismatch: result {result.shape} vs gt {gt.shape}")
    return result, gt


def confusion(result, gt):
    result, gt = _check_pair(result, gt)
    tp = int(np.count_nonzero(result & gt))
    fp = int(np.count_nonzero(result & ~gt))
    fn = int(np.count_nonzero(~result & gt))
    return ConfusionCounts(TP=tp, FP=fp, TN=result.size - tp - fp - fn, FN=fn)


def _harmonic(p, r):
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def f_measure(c):
    if c.TP == 0:
        return 0.0
    return _harmonic(c.TP / (c.TP + c.FP), c.TP / (c.TP + c.FN))


def thin(mask):
    """Zhang-Suen skeleton of a boolean mask."""
    return _backend.kernels.zhang_suen(np.asarray(mask, dtype=np.uint8)).astype(bool)


def pseudo_f_measure(result, gt, skeleton=None):
    """F-measure with recall measured on the GT skeleton.

    Precision is the ordinary pixel precision; the distance-weighted
    pseudo-precision of later DIBCO editions is not used.
    """
    result, gt = _check_pair(result, gt)
    if not gt.any():
        raise DegenerateDataError("no text in GT")
    if skeleton is None:
        skeleton = thin(gt)
    n_skel = np.count_nonzero(skeleton)
    recall = np.count_nonzero(result & skeleton) / n_skel
    tp = np.count_nonzero(result & gt)
    if tp == 0 or recall == 0:
        return 0.0
    precision = tp / np.count_nonzero(result)
    return _harmonic(precision, recall)


def psnr(result, gt):
    result, gt = _check_pair(result, gt)
    mse = np.count_nonzero(result != gt) / result.size
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def drd_weights():
    """Normalized 5x5 inverse-distance mask with a zero centre."""
    i, j = np.mgrid[-2:3, -2:3]
    dist = np.hypot(i, j)
    w = np.zeros((5, 5))
    w[dist > 0] = 1.0 / dist[dist > 0]
    return w / w.sum()


def nubn(gt, block=8):
    """Number of ``block x block`` GT blocks holding both colours."""
    gt = np.asarray(gt, dtype=bool)
    h, w = gt.shape
    count = 0
    for y in range(0, h, block):
        for x in range(0, w, block):
            b = gt[y:y + block, x:x + block]
            if b.any() and not b.all():
                count += 1
    return count


def drd(result, gt, weights=None):
    result, gt = _check_pair(result, gt)
    if not (result != gt).any():
        return 0.0
    n = nubn(gt)
    if n == 0:
        raise DegenerateDataError("uniform GT: DRD undefined (no non-uniform 8x8 blocks)")
    if weights is None:
        weights = drd_weights()
    total = _backend.kernels.drd_total(result.astype(np.float64), gt.astype(np.float64), weights)
    return total / n


def nrm(c):
    if c.TP + c.FN == 0 or c.FP + c.TN == 0:
        raise DegenerateDataError("NRM undefined: GT has no foreground or no background")
    return (c.FN / (c.FN + c.TP) + c.FP / (c.FP + c.TN)) / 2.0


def evaluate(result, gt, skeleton=None):
    """Full :class:`MetricsReport` for one (result, GT) pair.

    ``skeleton`` lets sweeps thin the GT once and reuse it.
    """
    result, gt = _check_pair(result, gt)
    c = confusion(result, gt)
    return MetricsReport(
        fm=f_measure(c),
        fps=pseudo_f_measure(result, gt, skeleton),
        psnr=psnr(result, gt),
        drd=drd(result, gt),
        nrm=nrm(c),
        counts=c,
    )


def pooled(counts):
    """FM, PSNR and NRM from pixel-pooled confusion counts."""
    total = ConfusionCounts(0, 0, 0, 0)
    for c in counts:
        total = total + c
    wrong = total.FP + total.FN
    return {
        "FM": f_measure(total),
        "PSNR": math.inf if wrong == 0 else 10.0 * math.log10(total.total / wrong),
        "NRM": nrm(total),
        "counts": asdict(total),
    }
