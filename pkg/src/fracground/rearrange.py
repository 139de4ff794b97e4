"""Discrete symmetric decreasing rearrangement and related inequality audits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .spectral import Field, dirichlet_energy, lp_norm


def placement_order(n: int) -> np.ndarray:
    """Node indices in the order the rearrangement fills them.

    Centre node ``n//2`` first, then ``n//2+1, n//2-1, n//2+2, ...``
    (right before left at each distance).
    """
    c = n // 2
    order = [c]
    k = 1
    while len(order) < n:
        if c + k < n:
            order.append(c + k)
        if c - k >= 0 and len(order) < n:
            order.append(c - k)
        k += 1
    return np.asarray(order)


def rearrange_values(values) -> np.ndarray:
    """Symmetric decreasing rearrangement of ``|values|`` (any length)."""
    a = np.abs(np.asarray(values, dtype=float))
    out = np.empty_like(a)
    # stable sort keeps the result a pure function of the multiset
    out[placement_order(a.size)] = np.sort(a, kind="stable")[::-1]
    return out


def rearrangement(u: Field) -> Field:
    return Field(u.grid, rearrange_values(u.values))


def modulus_energy_check(u: Field, sigma: float):
    """``(||D^{s/2}|u| ||, ||D^{s/2}u||)``; the first should not exceed the second."""
    return (float(np.sqrt(dirichlet_energy(abs(u), sigma))),
            float(np.sqrt(dirichlet_energy(u, sigma))))


def is_symmetric_decreasing(values, rtol: float = 1e-10) -> bool:
    """Nonnegative and non-increasing along :func:`placement_order`."""
    v = np.asarray(values, dtype=float)
    slack = rtol * max(float(np.max(np.abs(v))), np.finfo(float).tiny)
    if np.any(v < -slack):
        return False
    seq = v[placement_order(v.size)]
    return bool(np.all(np.diff(seq) <= slack))


@dataclass
class DecayBoundReport:
    r: float
    norm: float
    holds: bool
    max_violation: float
    worst_node: int
    nodes_checked: int


def decay_bound_check(u: Field, r: float, rtol: float = 1e-10) -> DecayBoundReport:
    """Check ``u(x) <= 2^{-1/r} |x|^{-1/r} ||u||_r`` at nodes with ``|x| >= h``."""
    if not is_symmetric_decreasing(u.values, rtol):
        raise ShapeError("decay bound needs a nonnegative symmetric decreasing field")
    x = u.grid.x
    mask = np.abs(x) >= u.grid.h * (1 - 1e-12)
    norm = lp_norm(u, r)
    bound = 2.0 ** (-1.0 / r) * np.abs(x[mask]) ** (-1.0 / r) * norm
    excess = u.values[mask] - bound
    idx = int(np.argmax(excess))
    worst = float(excess[idx])
    tol = rtol * max(norm, 1.0)
    return DecayBoundReport(
        r=float(r),
        norm=norm,
        holds=bool(worst <= tol),
        max_violation=max(worst, 0.0),
        worst_node=int(np.flatnonzero(mask)[idx]),
        nodes_checked=int(mask.sum()),
    )
