"""Parameter sweep grids: JSON cartesian grids and the named presets fig3-fig6."""
import itertools
import json
from pathlib import Path

from .errors import ImageIOError, ParameterError

DEFAULT_CAP = 1000

# grid/CLI aliases -> RunConfig.with_values names
ALIASES = {
    "iters": "N", "N": "N",
    "tau": "tau",
    "ce": "c_e", "c_e": "c_e", "cd": "c_e",
    "cs": "c_s", "c_s": "c_s",
    "a": "a", "p": "p", "q": "q", "k": "k",
    "sigma": "sigma", "rho": "rho",
    "alpha": "alpha", "memory-len": "memory_len", "memory_len": "memory_len",
    "T0": "T0",
}
COLUMN_ORDER = ("N", "tau", "c_e", "c_s", "a", "p", "q", "k", "sigma", "rho",
                "alpha", "memory_len", "T0")

PRESETS = {
    "fig3": [
        dict(N=10, tau=0.25, c_e=0.95, c_s=1.0),
        dict(N=5, tau=0.5, c_e=1.0, c_s=1.0),
    ],
    "fig4": [
        dict(N=10, T0=0.2, tau=0.125, c_e=0.2, c_s=0.9, sigma=0.3, rho=0.4),
        dict(N=10, T0=0.2, tau=0.125, c_e=0.15, c_s=0.9, sigma=0.3, rho=0.4),
        dict(N=10, T0=0.2, tau=0.125, c_e=0.15, c_s=0.85),
    ],
    "fig5": [
        dict(N=5, tau=0.5, c_e=1.0, c_s=1.0),
        dict(N=5, tau=0.25, c_e=0.5, c_s=0.75),
        dict(N=10, tau=0.125, c_e=0.55, c_s=0.8),
        dict(N=10, tau=0.125, c_e=0.5, c_s=0.8),
        dict(N=5, tau=0.25, c_e=0.4, c_s=0.8),
    ],
    "fig6": [
        dict(N=5, tau=0.5, c_e=1.0, c_s=1.0),
        dict(N=5, tau=0.25, c_e=1.0, c_s=1.0),
        dict(N=10, tau=0.25, c_e=1.0, c_s=0.9),
        dict(N=10, tau=0.25, c_e=1.0, c_s=0.85),
    ],
}


def cartesian(grid, cap=DEFAULT_CAP):
    """Expand ``{name: [values]}`` into a list of points."""
    if not grid:
        raise ParameterError("empty sweep grid")
    names = []
    for name, values in grid.items():
        if name not in ALIASES:
            raise ParameterError(f"unknown sweep parameter {name!r}")
        if not isinstance(values, list) or not values:
            raise ParameterError(f"sweep parameter {name!r} needs a non-empty list of values")
        names.append(ALIASES[name])
    size = 1
    for values in grid.values():
        size *= len(values)
    if size > cap:
        raise ParameterError(f"sweep grid has cartesian size {size}, above the cap of {cap}")
    return [dict(zip(names, combo)) for combo in itertools.product(*grid.values())]


def load_grid(spec, cap=DEFAULT_CAP):
    """Resolve ``--grid``: a preset name or a JSON file of ``{name: [values]}``."""
    if spec in PRESETS:
        points = [dict(p) for p in PRESETS[spec]]
        if len(points) > cap:
            raise ParameterError(f"sweep grid has cartesian size {len(points)}, above the cap of {cap}")
        return points
    path = Path(spec)
    try:
        grid = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ImageIOError(f"grid file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"grid file {path} is not valid JSON: {exc}") from exc
    if not isinstance(grid, dict):
        raise ParameterError(f"grid file {path} must hold a JSON object")
    return cartesian(grid, cap)


def columns(points):
    present = set().union(*points) if points else set()
    return [c for c in COLUMN_ORDER if c in present]
