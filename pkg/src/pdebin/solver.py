"""Time stepping of the reaction/edge binarization PDE.

The state ``u`` is a signed image in ``[-1, 1]``. Each step adds

    c_s * clamp(arctan(u) / a, -1, 1) + c_e * (1 - p / (1 + q * ((h - h_min) / k)**2))

times ``tau`` and clamps back to ``[-1, 1]``. There is no diffusion term.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .edge_field import EdgeParams, compute_edge_field
from .errors import ParameterError

TAU_WARN = 0.5
DEFAULT_MEMORY_BUDGET = 1 << 30


@dataclass(frozen=True)
class SolverParams:
    a: float = 1.0
    c_s: float = 1.0
    c_e: float = 0.95
    tau: float = 0.25
    N: int = 10
    alpha: float = 1.0
    frozen_edges: bool = False
    memory_len: Optional[int] = None

    def __post_init__(self):
        if not 0 < self.a <= 1:
            raise ParameterError(f"a must lie in (0, 1], got {self.a}")
        if not self.tau > 0:
            raise ParameterError(f"tau must be > 0, got {self.tau}")
        if not 0 < self.alpha <= 1:
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha}")
        if int(self.N) != self.N or self.N < 0:
            raise ParameterError(f"N must be a non-negative integer, got {self.N}")
        if self.memory_len is not None and (int(self.memory_len) != self.memory_len
                                            or self.memory_len < 1):
            raise ParameterError(f"memory_len must be a positive integer, got {self.memory_len}")


def source_term(u, a):
    """``clamp(arctan(u) / a, -1, 1)``; works on scalars and arrays."""
    if not 0 < a <= 1:
        raise ParameterError(f"a must lie in (0, 1], got {a}")
    s = np.clip(np.arctan(u) / a, -1.0, 1.0)
    return float(s) if np.ndim(s) == 0 else s


def rhs(u, sp, ep, edges=None):
    """Right-hand side of the PDE at state ``u``.

    ``edges`` is an :class:`~pdebin.edge_field.EdgeField` to reuse instead of
    recomputing ``h`` from ``u`` (the frozen-edge variant).
    """
    u = np.asarray(u, dtype=np.float64)
    if edges is None:
        edges = compute_edge_field(u, ep)
    return _backend.kernels.reaction_rhs(
        u, edges.h, edges.h_min, edges.k, sp.c_s, sp.a, sp.c_e, ep.p, ep.q)


def euler_step(u, sp, ep, edges=None):
    """``clamp(u + tau * rhs(u), -1, 1)``."""
    u = np.asarray(u, dtype=np.float64)
    if edges is None:
        edges = compute_edge_field(u, ep)
    return _backend.kernels.euler_update(
        u, edges.h, edges.h_min, edges.k, sp.c_s, sp.a, sp.c_e, ep.p, ep.q, sp.tau)


def _check_tau(sp):
    if sp.tau > TAU_WARN:
        warnings.warn(f"tau = {sp.tau} exceeds {TAU_WARN}; the explicit scheme may overshoot",
                      RuntimeWarning, stacklevel=3)


def evolve(u0, sp, ep, progress_sink=None):
    """Run ``sp.N`` explicit Euler steps from ``u0``.

    ``progress_sink(iteration, mean_abs_delta)`` is called after every step
    when given.
    """
    _check_tau(sp)
    u = np.array(u0, dtype=np.float64, copy=True)
    edges = compute_edge_field(u, ep) if sp.frozen_edges else None
    for n in range(sp.N):
        nxt = euler_step(u, sp, ep, edges)
        if progress_sink is not None:
            progress_sink(n + 1, float(np.mean(np.abs(nxt - u))))
        u = nxt
    return u


def gl_weights(alpha, n):
    """Grunwald-Letnikov weights ``(-1)**j * binom(alpha, j)`` for j = 0..n."""
    if not 0 < alpha <= 1:
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    w = np.empty(n + 1)
    w[0] = 1.0
    for j in range(1, n + 1):
        w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / j)
    return w


def evolve_fractional(u0, sp, ep, progress_sink=None, memory_budget=DEFAULT_MEMORY_BUDGET):
    """Fractional-order stepping with Grunwald-Letnikov memory.

    ``u[n+1] = clamp(tau**alpha * rhs(u[n]) - sum_j w[j] * u[n+1-j])`` with
    the sum over the ``memory_len`` most recent states (all when unset).
    With ``alpha = 1`` the weights collapse to ``[1, -1, 0, ...]`` and this
    reproduces :func:`evolve`.
    """
    _check_tau(sp)
    u = np.array(u0, dtype=np.float64, copy=True)
    depth = sp.N if sp.memory_len is None else min(sp.memory_len, sp.N)
    needed = (depth + 1) * u.nbytes
    if needed > memory_budget:
        raise ParameterError(
            f"fractional history needs {needed} bytes (> budget {memory_budget}); "
            f"set memory_len to at most {max(memory_budget // max(u.nbytes, 1) - 1, 1)}")
    w = gl_weights(sp.alpha, max(depth, 1))
    scale = math.pow(sp.tau, sp.alpha)
    edges = compute_edge_field(u, ep) if sp.frozen_edges else None

    history = [u]  # most recent last
    for n in range(sp.N):
        drive = scale * rhs(history[-1], sp, ep, edges)
        memory = np.zeros_like(u)
        for j in range(1, min(n + 1, depth) + 1):
            memory += w[j] * history[-j]
        nxt = np.clip(drive - memory, -1.0, 1.0)
        if progress_sink is not None:
            progress_sink(n + 1, float(np.mean(np.abs(nxt - history[-1]))))
        history.append(nxt)
        if len(history) > depth:
            del history[0]
    return history[-1]
