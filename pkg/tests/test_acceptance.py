"""Acceptance checks; each prints one [PASS]/[FAIL] line via the ``record`` fixture."""
import math
import time

import numpy as np
import pytest

from pdebin import _backend
from pdebin.binarizer import fmt6, otsu_scan, read_curve_csv, sweep_thresholds
from pdebin.cli import main
from pdebin.edge_field import EdgeParams
from pdebin.image_model import normalize_signed, rgb_to_hsi
from pdebin.metrics import confusion, drd, f_measure, nrm, psnr
from pdebin.pipeline import RunConfig, run_pipeline
from pdebin.grids import PRESETS
from pdebin.solver import SolverParams, evolve, evolve_fractional
from pdebin.synthetic import bleed_through_document

import oracle
from conftest import write_dataset

pytestmark = pytest.mark.acceptance

FIG3 = PRESETS["fig3"][0]


def fig3_config():
    return RunConfig().with_values(**FIG3)


def test_criterion_01_results_table(record):
    record(1, "published corpus table", False,
           "not reproducible here: needs the full DIBCO corpus and undocumented per-image tuning")
    pytest.skip("requires the DIBCO corpus; covered by the property criteria")


def test_criterion_02_metric_oracles(record):
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    ok = True
    for _ in range(1000):
        res = rng.uniform(size=(16, 16)) < rng.uniform(0.1, 0.9)
        gt = rng.uniform(size=(16, 16)) < rng.uniform(0.1, 0.9)
        tp, fp, tn, fn = oracle.counts(res.tolist(), gt.tolist())
        c = confusion(res, gt)
        ok &= (c.TP, c.FP, c.TN, c.FN) == (tp, fp, tn, fn)
        fm_ref = 0.0 if tp == 0 else 2 * tp / (2 * tp + fp + fn)
        ok &= math.isclose(f_measure(c), fm_ref, rel_tol=1e-15)
        if tp + fn and fp + tn:
            ok &= nrm(c) == (fn / (fn + tp) + fp / (fp + tn)) / 2
        wrong = fp + fn
        ok &= psnr(res, gt) == (math.inf if wrong == 0 else 10 * math.log10(256 / wrong))
    worst = 0.0
    for _ in range(200):
        gt = rng.uniform(size=(32, 32)) < 0.3
        res = gt ^ (rng.uniform(size=gt.shape) < rng.uniform(0.01, 0.3))
        worst = max(worst, abs(drd(res, gt) - oracle.drd(res.astype(int).tolist(),
                                                            gt.astype(int).tolist())))
    elapsed = time.perf_counter() - start
    passed = bool(ok) and worst <= 1e-12 and elapsed < 10
    record(2, "metric-oracle equivalence", passed,
           f"max DRD diff {worst:.1e}, {elapsed:.2f} s")
    assert passed


def test_criterion_03_fractional_reduction(record):
    u0 = np.random.default_rng(3).uniform(-1, 1, (64, 64))
    sp = SolverParams(**{k: v for k, v in FIG3.items()})
    start = time.perf_counter()
    a = evolve_fractional(u0, SolverParams(alpha=1.0, **FIG3), EdgeParams())
    b = evolve(u0, sp, EdgeParams())
    elapsed = time.perf_counter() - start
    diff = float(np.max(np.abs(a - b)))
    passed = diff <= 1e-12 and elapsed < 1
    record(3, "fractional alpha=1 equals integer order", passed,
           f"max diff {diff:.1e}, {elapsed:.3f} s")
    assert passed


def test_criterion_04_pole_absorption(record):
    rng = np.random.default_rng(4)
    ok = True
    for _ in range(20):
        sp = SolverParams(a=rng.uniform(0.05, 1), c_s=rng.uniform(0, 2), c_e=rng.uniform(0, 2),
                          tau=rng.uniform(0.01, 0.5), N=int(rng.integers(1, 15)))
        ep = EdgeParams(sigma=rng.uniform(0, 2), rho=rng.uniform(0, 2), p=rng.uniform(0, 1),
                        q=rng.uniform(0.1, 5), k=[0.5, 1.0, "auto"][rng.integers(3)],
                        mode=["gradient", "structure_tensor", "hessian"][rng.integers(3)])
        ones = np.ones((12, 12))
        ok &= bool(np.all(evolve(ones, sp, ep) == 1.0))
        sp0 = SolverParams(a=sp.a, c_s=sp.c_s, c_e=0.0, tau=sp.tau, N=sp.N)
        ok &= bool(np.all(evolve(-ones, sp0, ep) == -1.0))
    record(4, "pole absorption over 20 parameter draws", ok)
    assert ok


def test_criterion_05_sign_monotonicity(record):
    rng = np.random.default_rng(5)
    ok = True
    for a in (0.5, 1.0):
        u = rng.uniform(-1, 1, (32, 32))
        sign0 = np.sign(u)
        sp = SolverParams(a=a, c_s=1.0, c_e=0.0, N=1)
        for _ in range(10):
            nxt = evolve(u, sp, EdgeParams())
            ok &= bool(np.all(np.abs(nxt) >= np.abs(u)))
            ok &= bool(np.all(np.sign(nxt) == sign0))
            u = nxt
    record(5, "sign monotonicity with c_e=0", ok)
    assert ok


def test_criterion_06_edge_pressure(record):
    img, _ = bleed_through_document(size=128, seed=6)
    u0 = normalize_signed(img)
    means = [float(np.mean(evolve(u0, SolverParams(c_e=ce), EdgeParams(p=1.0))))
             for ce in (0.0, 0.25, 0.5, 0.75, 1.0)]
    passed = all(b >= a for a, b in zip(means, means[1:]))
    record(6, "edge-pressure monotonicity", passed, "mean(u_N) = " + ", ".join(f"{m:.5f}" for m in means))
    assert passed


def test_criterion_07_beats_otsu(record):
    img, gt = bleed_through_document(size=256, seed=0)
    start = time.perf_counter()
    ours = f_measure(confusion(run_pipeline(img, fig3_config()).binary, gt))
    elapsed = time.perf_counter() - start
    t, _ = otsu_scan(img)
    t_ref, _ = oracle.otsu_hist(img.ravel().tolist())
    otsu_agrees = t == (t_ref + 0.5) / 255
    otsu = f_measure(confusion(img < t, gt))
    margin = 100 * (ours - otsu)
    passed = otsu_agrees and margin >= 2 and elapsed < 5
    record(7, "synthetic bleed-through beats global Otsu", passed,
           f"FM {100 * ours:.2f} vs Otsu {100 * otsu:.2f}, margin {margin:.2f} points, {elapsed:.2f} s")
    assert passed


def test_criterion_08_curve(record):
    img, gt = bleed_through_document(size=256, seed=0)
    field = run_pipeline(img, fig3_config()).field
    curve = sweep_thresholds(field, gt, 0.05, 0.95, 0.05)
    fms = [rep.fm for _, rep in curve.rows]
    best = max(fms)
    interior = best > fms[0] and best > fms[-1]
    text = curve.to_csv()
    parsed = read_curve_csv(text)
    rebuilt = "T,FM,Fps,PSNR,DRD,NRM\n" + "".join(
        ",".join([fmt6(t)] + [fmt6(v) for v in vals.values()]) + "\n" for t, vals in parsed)
    passed = interior and rebuilt == text and len(parsed) == 19
    record(8, "threshold curve interior max and CSV round trip", passed,
           f"FM {fms[0]:.4f} .. max {best:.4f} .. {fms[-1]:.4f}")
    assert passed


def test_criterion_09_hsi(record):
    rng = np.random.default_rng(9)
    gray = np.repeat(rng.uniform(size=(8, 8, 1)), 3, axis=2)
    h, s, i = rgb_to_hsi(gray)
    red = rgb_to_hsi(np.array([[[1.0, 0.0, 0.0]]]))
    passed = (bool(np.all(s == 0)) and red[0][0, 0] == 0.0 and red[1][0, 0] == 1.0
              and red[2][0, 0] == 1 / 3)
    record(9, "HSI correctness", passed)
    assert passed


def test_criterion_10_parallel_equivalence(record, tmp_path):
    data = write_dataset(tmp_path / "corpus", n=10, size=64)
    codes = [main(["evaluate", "--dataset", str(data), "--out", str(tmp_path / f"j{j}"),
                   "--jobs", str(j)]) for j in (1, 8)]
    a = (tmp_path / "j1" / "metrics.csv").read_bytes()
    b = (tmp_path / "j8" / "metrics.csv").read_bytes()
    passed = codes == [0, 0] and a == b and a.count(b"\n") == 11
    record(10, "jobs=1 and jobs=8 byte-identical", passed)
    assert passed


def test_criterion_11_performance(record):
    u0 = np.random.default_rng(11).uniform(-1, 1, (512, 512))
    timings = {}
    for name in _backend.available():
        with _backend.using(name):
            evolve(u0[:64, :64], SolverParams(N=1), EdgeParams())  # warm-up
            start = time.perf_counter()
            evolve(u0, SolverParams(N=10), EdgeParams(mode="structure_tensor"))
            timings[name] = time.perf_counter() - start
    used = _backend.current()
    passed = timings[used] < 1.0
    record(11, "512x512, N=10 under 1 s", passed,
           ", ".join(f"{k} {v:.3f} s" for k, v in timings.items()) + f"; default backend {used}")
    assert passed
