"""Edge indicator ``h`` and the edge term of the reaction PDE."""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _backend
from .errors import ParameterError

EDGE_MODES = ("gradient", "structure_tensor", "hessian")
K_FLOOR = 1e-9


@dataclass(frozen=True)
class EdgeParams:
    """Edge detector and diffusivity settings.

    ``k`` is either a positive float or the string ``"auto"``, in which case
    it is resolved per field as the mean of ``h - min(h)``.
    """

    sigma: float = 0.3
    rho: float = 0.4
    k: Union[float, str] = 1.0
    p: float = 1.0
    q: float = 1.0
    mode: str = "structure_tensor"

    def __post_init__(self):
        if self.mode not in EDGE_MODES:
            raise ParameterError(f"edge mode must be one of {EDGE_MODES}, got {self.mode!r}")
        if not self.p > 0:
            raise ParameterError(f"p must be > 0, got {self.p}")
        if not self.q > 0:
            raise ParameterError(f"q must be > 0, got {self.q}")
        if not self.sigma >= 0:
            raise ParameterError(f"sigma must be >= 0, got {self.sigma}")
        if not self.rho >= 0:
            raise ParameterError(f"rho must be >= 0, got {self.rho}")
        if self.k != "auto":
            if isinstance(self.k, str) or not self.k > 0:
                raise ParameterError(f"k must be > 0 or 'auto', got {self.k!r}")


@dataclass
class EdgeField:
    h: np.ndarray
    h_min: float
    k: float
    E: np.ndarray = None


def gaussian_kernel(sigma):
    """Normalized 1-D Gaussian taps, radius ``ceil(3 sigma)``."""
    if sigma <= 0:
        return np.ones(1)
    r = int(math.ceil(3.0 * sigma))
    x = np.arange(-r, r + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_smooth(img, sigma):
    if sigma < 0:
        raise ParameterError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return np.array(img, dtype=np.float64, copy=True)
    return _backend.kernels.smooth(img, gaussian_kernel(sigma))


def gradient(img):
    """Central differences ``(gx, gy)``; x runs along columns."""
    return _backend.kernels.gradient(img)


def edge_indicator(u, ep):
    """Per-pixel edge strength ``h >= 0`` of a signed image."""
    k = _backend.kernels
    us = gaussian_smooth(u, ep.sigma)
    if ep.mode == "structure_tensor":
        # the kernel floors rounding negatives on flat regions at 0
        return k.structure_tensor_max(us, gaussian_kernel(ep.rho))
    gx, gy = k.gradient(us)
    if ep.mode == "gradient":
        return np.sqrt(gx * gx + gy * gy)
    hxx, hxy = k.gradient(gx)
    hyx, hyy = k.gradient(gy)
    return k.sym_eig_maxabs(hxx, 0.5 * (hxy + hyx), hyy)


def resolve_k(h, h_min, k="auto"):
    if k == "auto":
        return max(float(np.mean(h - h_min)), K_FLOOR)
    if not k > 0:
        raise ParameterError(f"k must be > 0, got {k}")
    return float(k)


def edge_term(h, ep, c_e, h_min=None, k=None):
    """``c_e * (1 - p / (1 + q * ((h - h_min) / k)**2))`` per pixel."""
    if h_min is None:
        h_min = float(np.min(h))
    if k is None:
        k = resolve_k(h, h_min, ep.k)
    elif not k > 0:
        raise ParameterError(f"k must be > 0, got {k}")
    s = (h - h_min) / k
    return c_e * (1.0 - ep.p / (1.0 + ep.q * (s * s)))


def compute_edge_field(u, ep, c_e=None):
    """Edge indicator of ``u`` with resolved ``h_min`` and ``k``.

    The edge term ``E`` is filled in only when ``c_e`` is given.
    """
    h = edge_indicator(u, ep)
    h_min = float(np.min(h))
    k = resolve_k(h, h_min, ep.k)
    field = EdgeField(h=h, h_min=h_min, k=k)
    if c_e is not None:
        field.E = edge_term(h, ep, c_e, h_min, k)
    return field
