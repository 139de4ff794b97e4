"""Fourier machinery on a uniform periodic grid truncating the real line.

The line is replaced by ``[-L, L)`` with ``N`` nodes ``x_m = -L + m*h``;
node ``N/2`` sits at the origin. Fractional operators are Fourier
multipliers with wavenumbers ``xi_k = pi*k/L``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import czt

from .errors import DomainError, GridMismatchError


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[-L, L)``."""

    L: float
    N: int

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0):
            raise DomainError(f"half length must be positive, got {self.L!r}")
        if int(self.N) != self.N or self.N < 8 or self.N % 2:
            raise DomainError(f"num_points must be an even integer >= 8, got {self.N!r}")
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def center(self) -> int:
        return self.N // 2

    @property
    def x(self) -> np.ndarray:
        return _nodes(self)

    def to_json(self) -> str:
        return json.dumps({"L": self.L, "N": self.N})

    @classmethod
    def from_dict(cls, data) -> "GridSpec":
        return cls(L=data["L"], N=data["N"])

    def scaled(self, factor: int = 2) -> "GridSpec":
        """Grid with both L and N multiplied by ``factor`` (same spacing)."""
        return GridSpec(self.L * factor, self.N * factor)


@lru_cache(maxsize=32)
def _nodes(grid: GridSpec) -> np.ndarray:
    x = -grid.L + grid.h * np.arange(grid.N)
    x[grid.center] = 0.0
    x.setflags(write=False)
    return x


@lru_cache(maxsize=32)
def _rxi(grid: GridSpec) -> np.ndarray:
    # |xi_k| for the half spectrum k = 0..N/2 (rfft layout, Nyquist last)
    xi = np.pi * np.arange(grid.N // 2 + 1) / grid.L
    xi.setflags(write=False)
    return xi


@lru_cache(maxsize=128)
def _rsymbol(grid: GridSpec, sigma: float) -> np.ndarray:
    s = _rxi(grid) ** sigma
    s[0] = 0.0
    s.setflags(write=False)
    return s


@lru_cache(maxsize=32)
def _rweights(grid: GridSpec) -> np.ndarray:
    # multiplicity of each rfft coefficient in the full two-sided sum
    w = np.full(grid.N // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    w.setflags(write=False)
    return w


class Field:
    """Real samples of a function on a :class:`GridSpec`. Immutable."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: GridSpec, values):
        values = np.array(values, dtype=float)
        if values.shape != (grid.N,):
            raise DomainError(f"expected {grid.N} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("field values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def from_function(cls, grid: GridSpec, func) -> "Field":
        return cls(grid, func(grid.x))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "Field":
        return cls(grid, np.zeros(grid.N))

    def _other(self, other):
        if isinstance(other, Field):
            check_same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return Field(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Field(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return Field(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return Field(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Field(self.grid, self.values / self._other(other))

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __abs__(self):
        return Field(self.grid, np.abs(self.values))

    def __len__(self):
        return self.grid.N

    def __repr__(self):
        return f"Field(grid={self.grid!r}, max={np.max(np.abs(self.values)):.6g})"

    def reflect(self) -> "Field":
        """``u(-x)`` sampled on the grid (reflection about node N/2)."""
        return Field(self.grid, np.roll(self.values[::-1], 1))

    def symmetrize(self) -> "Field":
        return Field(self.grid, 0.5 * (self.values + np.roll(self.values[::-1], 1)))


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients for k = -N/2 .. N/2-1 (``c_k = fft(u)/N``)."""

    grid: GridSpec
    coefficients: np.ndarray

    @property
    def wavenumbers(self) -> np.ndarray:
        k = np.arange(-self.grid.N // 2, self.grid.N // 2)
        return np.pi * k / self.grid.L

    def coeff(self, k: int) -> complex:
        return self.coefficients[k + self.grid.N // 2]


def check_same_grid(*fields: Field) -> GridSpec:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError(f"grid mismatch: {grid} vs {f.grid}")
    return grid


def _check_finite(u: Field):
    if not np.all(np.isfinite(u.values)):
        raise DomainError("non-finite field")


def spectrum(u: Field) -> Spectrum:
    c = np.fft.fftshift(np.fft.fft(u.values)) / u.grid.N
    return Spectrum(u.grid, c)


def _check_sigma(sigma, upper=2.0, closed=True):
    ok = 0.0 < sigma <= upper if closed else 0.0 < sigma < upper
    if not ok:
        raise DomainError(f"sigma must lie in (0, {upper}{']' if closed else ')'}, got {sigma!r}")


def _multiply(u: Field, symbol: np.ndarray) -> Field:
    return Field(u.grid, np.fft.irfft(np.fft.rfft(u.values) * symbol, n=u.grid.N))


def apply_symbol(u: Field, sigma: float) -> Field:
    """Fractional Laplacian ``D^sigma u`` with symbol ``|xi|^sigma``."""
    _check_sigma(sigma)
    _check_finite(u)
    return _multiply(u, _rsymbol(u.grid, float(sigma)))


def resolvent(u: Field, sigma: float, nu: float) -> Field:
    """``(D^sigma + nu)^{-1} u``."""
    _check_sigma(sigma)
    if not nu > 0:
        raise DomainError(f"resolvent shift must be positive, got {nu!r}")
    _check_finite(u)
    return _multiply(u, 1.0 / (_rsymbol(u.grid, float(sigma)) + nu))


def delta(grid: GridSpec) -> Field:
    values = np.zeros(grid.N)
    values[grid.center] = 1.0 / grid.h
    return Field(grid, values)


def kernel(sigma: float, nu: float, grid: GridSpec) -> Field:
    """Discrete ``N_nu^sigma``: the resolvent applied to a unit mass at x=0."""
    _check_sigma(sigma, closed=False)
    return resolvent(delta(grid), sigma, nu)


def quadrature(u: Field) -> float:
    return float(u.grid.h * np.sum(u.values))


def lp_norm(u: Field, r: float) -> float:
    if not r >= 1:
        raise DomainError(f"Lebesgue exponent must be >= 1, got {r!r}")
    return float((u.grid.h * np.sum(np.abs(u.values) ** r)) ** (1.0 / r))


def lp_power(u: Field, r: float) -> float:
    """``||u||_r^r`` without the final root."""
    return float(u.grid.h * np.sum(np.abs(u.values) ** r))


def dirichlet_energy(u: Field, sigma: float) -> float:
    """``||D^{sigma/2} u||_2^2`` evaluated in Fourier space."""
    uh = np.fft.rfft(u.values)
    g = u.grid
    return float(2.0 * g.L / g.N**2 * np.sum(_rweights(g) * _rsymbol(g, float(sigma)) * np.abs(uh) ** 2))


def hsc_norm(u: Field, sigma: float, c: float) -> float:
    """``sqrt(||D^{sigma/2}u||^2 + c ||u||^2)``."""
    if not c > 0:
        raise DomainError(f"c must be positive, got {c!r}")
    return float(np.sqrt(dirichlet_energy(u, sigma) + c * lp_power(u, 2)))


def spectral_l2_norm(u: Field) -> float:
    c = np.fft.fft(u.values) / u.grid.N
    return float(np.sqrt(2.0 * u.grid.L * np.sum(np.abs(c) ** 2)))


def inner(u: Field, v: Field) -> float:
    check_same_grid(u, v)
    return float(u.grid.h * np.dot(u.values, v.values))


def dilate(u: Field, factor: float) -> Field:
    """Trigonometric interpolant of ``u`` evaluated at ``factor * x_m``.

    Returns the field ``x -> u(factor*x)``. Points falling outside
    ``[-L, L)`` see the periodic extension of ``u``.
    """
    if not factor > 0:
        raise DomainError(f"dilation factor must be positive, got {factor!r}")
    g = u.grid
    n = g.N
    c = np.fft.fft(u.values) / n
    # symmetric coefficient list k = -N/2 .. N/2 with the Nyquist term split
    k = np.arange(-n // 2, n // 2 + 1)
    coef = np.concatenate([c[n // 2:], c[: n // 2 + 1]])
    coef[0] *= 0.5
    coef[-1] = coef[0]
    xi = np.pi * k / g.L
    d = coef * np.exp(1j * xi * g.L * (1.0 - factor))
    w = np.exp(2j * np.pi * factor / n)
    vals = czt(d, m=n, w=w, a=1.0)
    m = np.arange(n)
    vals = vals * np.exp(-1j * np.pi * factor * m)
    out = vals.real
    return Field(g, out)


def is_even(u: Field, rtol: float = 1e-12) -> bool:
    """``values[m] == values[(N - m) mod N]`` up to ``rtol * max|u|``."""
    v = u.values
    return bool(np.max(np.abs(v - np.roll(v[::-1], 1))) <= rtol * max(np.max(np.abs(v)), 1e-300))


def kernel_properties(u: Field, trim: float = 0.1, rtol: float = 1e-12) -> dict:
    """Positivity, evenness and decay of a kernel-like field centred at x = 0.

    Decay is checked on ``0 <= x < (1 - trim) L`` only: near the ends the
    periodic images of the kernel take over. The discrete delta has a flat
    spectrum, so the sampled kernel carries a small ``(-1)^m`` ripple that
    can beat the true slope far from the origin; ``decreasing`` therefore
    looks at even and odd nodes separately. ``decreasing_all_nodes`` is the
    plain node-by-node test.
    """
    g = u.grid
    v = u.values
    right = v[g.center:][g.x[g.center:] < (1.0 - trim) * g.L]
    return {
        "quadrature": quadrature(u),
        "positive": bool(np.all(v > 0)),
        "even": is_even(u, rtol),
        "decreasing": bool(np.all(np.diff(right[0::2]) < 0) and np.all(np.diff(right[1::2]) < 0)),
        "decreasing_all_nodes": bool(np.all(np.diff(right) < 0)),
    }
