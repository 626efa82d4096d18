"""End-to-end binarization: channel -> signed field -> PDE -> threshold."""
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .binarizer import ThresholdSpec, binarize
from .edge_field import EdgeParams, compute_edge_field
from .errors import ParameterError
from .image_model import is_rgb, normalize_signed, resolve_channel
from .solver import SolverParams, evolve, evolve_fractional


@dataclass(frozen=True)
class RunConfig:
    """Every knob of one binarization run.

    Defaults equal the first point of the ``fig3`` preset:
    N=10, tau=0.25, c_e=0.95, c_s=1, with sigma=0.3 and rho=0.4.
    """

    solver: SolverParams = field(default_factory=SolverParams)
    edge: EdgeParams = field(default_factory=EdgeParams)
    threshold: ThresholdSpec = field(default_factory=ThresholdSpec)
    channel: str = "gray"
    jobs: int = 1

    def __post_init__(self):
        if int(self.jobs) != self.jobs or self.jobs < 1:
            raise ParameterError(f"jobs must be >= 1, got {self.jobs}")

    def with_values(self, **values):
        """Copy with flat parameter overrides (``tau=0.5, c_e=1, T0=0.2`` ...)."""
        solver, edge, threshold, top = {}, {}, {}, {}
        for name, value in values.items():
            if name in SolverParams.__dataclass_fields__:
                solver[name] = value
            elif name in EdgeParams.__dataclass_fields__:
                edge[name] = value
            elif name == "T0":
                threshold = {"kind": "fixed", "T0": value}
            elif name in ("channel", "jobs"):
                top[name] = value
            else:
                raise ParameterError(f"unknown parameter {name!r}")
        return replace(
            self,
            solver=replace(self.solver, **solver),
            edge=replace(self.edge, **edge),
            threshold=replace(self.threshold, **threshold),
            **top,
        )

    def to_dict(self):
        return {
            "solver": asdict(self.solver),
            "edge": asdict(self.edge),
            "threshold": str(self.threshold),
            "channel": self.channel,
        }


@dataclass
class PipelineResult:
    field: np.ndarray
    binary: np.ndarray
    channel: str
    k_initial: float
    threshold: float
    u0: Optional[np.ndarray] = None

    def sidecar(self, config):
        d = config.to_dict()
        d["resolved"] = {
            "channel": self.channel,
            "k_initial": self.k_initial,
            "k_rule": "auto: mean(h - min h), recomputed every step"
            if config.edge.k == "auto" else "fixed",
            "threshold": self.threshold,
        }
        return d


def prepare(img, channel="gray"):
    """Reduce an image to the signed initial field; returns ``(u0, channel_used)``."""
    gray, used = resolve_channel(img, channel) if is_rgb(img) else (img, "gray")
    return normalize_signed(gray), used


def run_field(u0, config, progress_sink=None):
    sp = config.solver
    if sp.alpha == 1.0 and sp.memory_len is None:
        return evolve(u0, sp, config.edge, progress_sink)
    return evolve_fractional(u0, sp, config.edge, progress_sink)


def run_pipeline(img, config=None, progress_sink=None):
    """Binarize one unit-range gray or RGB image."""
    config = config or RunConfig()
    u0, used = prepare(img, config.channel)
    k0 = compute_edge_field(u0, config.edge).k
    u = run_field(u0, config, progress_sink)
    binary, t = binarize(u, config.threshold)
    return PipelineResult(field=u, binary=binary, channel=used, k_initial=k0,
                          threshold=float(t), u0=u0)
