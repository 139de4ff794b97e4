"""Nonlinearities, action functionals and the scalar quantities built on them.

Every variant has a nonlinearity of the form ``f(s) = a_p*P_p(s) + a_q*P_q(s)``
where ``P_r(s)`` is the odd power ``|s|^{r-1} s`` (or the plain power
``s^r`` for the integer problem). The coefficient pairs are:

=============  ======  ======
variant         a_p     a_q
=============  ======  ======
``sp1``          -1      +1
``sp2``          +1      +1
``sp3``          +1      -1
``sp4``          -1      -1
``single``       +1       -
``integer_sp``   -1      +1   (plain powers, sigma = 1)
=============  ======  ======
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, UnsupportedVariantError
from .spectral import Field, apply_symbol, dirichlet_energy, lp_power, quadrature

VARIANTS = ("sp1", "sp2", "sp3", "sp4", "single", "integer_sp")

_ALIASES = {
    1: "sp1", 2: "sp2", 3: "sp3", 4: "sp4",
    "1": "sp1", "2": "sp2", "3": "sp3", "4": "sp4",
    "single_power": "single",
}

_COEFFS = {
    "sp1": (-1.0, 1.0),
    "sp2": (1.0, 1.0),
    "sp3": (1.0, -1.0),
    "sp4": (-1.0, -1.0),
    "single": (1.0, 0.0),
    "integer_sp": (-1.0, 1.0),
}


def critical_exponent(sigma: float) -> float:
    """``2/(1-sigma)_+``; infinite for ``sigma >= 1``."""
    if not 0.0 < sigma < 2.0:
        raise DomainError(f"sigma must lie in (0, 2), got {sigma!r}")
    if sigma >= 1.0:
        return math.inf
    return 2.0 / (1.0 - sigma)


@dataclass(frozen=True)
class ProblemSpec:
    """One instance of ``D^sigma phi + c phi - f(phi) = 0``."""

    sigma: float
    c: float
    p: float
    q: Optional[float] = None
    variant: str = "sp1"

    def __post_init__(self):
        variant = _ALIASES.get(self.variant, self.variant)
        if variant not in VARIANTS:
            raise UnsupportedVariantError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "variant", variant)
        for name in ("sigma", "c", "p", "q"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, float(value))
        sigma, c, p, q = self.sigma, self.c, self.p, self.q
        if not 0.0 < sigma < 2.0:
            raise DomainError(f"sigma must lie in (0, 2), got {sigma!r}")
        if not c > 0:
            raise DomainError(f"c must be positive, got {c!r}")
        if not p > 1:
            raise DomainError(f"p must exceed 1, got {p!r}")
        crit = critical_exponent(sigma)
        if variant == "single":
            if q is not None:
                raise DomainError("single-power problems take no q")
            if not p < crit - 1:
                raise DomainError(f"need p < 2*_sigma - 1 = {crit - 1}, got p={p}")
            return
        if q is None or not q > p:
            raise DomainError(f"need q > p, got p={p}, q={q}")
        if not q < crit - 1:
            raise DomainError(f"need q < 2*_sigma - 1 = {crit - 1}, got q={q}")
        if variant == "sp3" and sigma > 1:
            raise DomainError("the Pohozaev-constrained problem requires 0 < sigma <= 1")
        if variant == "integer_sp":
            if sigma != 1:
                raise DomainError("integer_sp is the sigma = 1 problem")
            if int(p) != p or int(q) != q or p < 2:
                raise DomainError("integer_sp needs integer powers 2 <= p < q")

    @property
    def coefficients(self):
        return _COEFFS[self.variant]

    @property
    def odd(self) -> bool:
        return self.variant != "integer_sp"

    @property
    def powers(self):
        if self.variant == "single":
            return (self.p,)
        return (self.p, self.q)

    def with_(self, **changes) -> "ProblemSpec":
        data = asdict(self)
        data.update(changes)
        return ProblemSpec(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data) -> "ProblemSpec":
        return cls(sigma=data["sigma"], c=data["c"], p=data["p"], q=data.get("q"),
                   variant=data.get("variant", "sp1"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _power(s, r, odd):
    if odd:
        return np.sign(s) * np.abs(s) ** r
    return np.power(s, int(r))


def _ipow(s, n):
    out = s
    for _ in range(n - 1):
        out = out * s
    return out


def _abs_power(s, r, odd):
    if r == int(r) and 1 <= r <= 8:
        return _ipow(np.abs(s) if odd else s, int(r))
    if odd:
        return np.abs(s) ** r
    return np.power(s, int(r))


def nonlinearity(spec: ProblemSpec, s):
    """``f_j(s)``; accepts scalars or arrays."""
    s = np.asarray(s, dtype=float)
    a = spec.coefficients
    out = sum(ai * _power(s, r, spec.odd) for ai, r in zip(a, spec.powers))
    return out if out.ndim else float(out)


def nonlinearity_derivative(spec: ProblemSpec, s):
    """``f_j'(s)``."""
    s = np.asarray(s, dtype=float)
    a = spec.coefficients
    out = sum(ai * r * _abs_power(s, r - 1, spec.odd) for ai, r in zip(a, spec.powers))
    return out if out.ndim else float(out)


def antiderivative(spec: ProblemSpec, s):
    """``F_j(s) = int_0^s f_j``."""
    s = np.asarray(s, dtype=float)
    a = spec.coefficients
    out = sum(ai * _abs_power(s, r + 1, spec.odd) / (r + 1) for ai, r in zip(a, spec.powers))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Norms:
    """The integrals every functional is assembled from.

    ``lower``/``upper`` are ``int P_r(u) u`` for r = p and r = q, i.e.
    ``||u||_{r+1}^{r+1}`` for the odd powers.
    """

    kinetic: float
    mass: float
    lower: float
    upper: float

    def scaled(self, lam: float, p: float, q: Optional[float]) -> "Norms":
        return Norms(
            lam**2 * self.kinetic,
            lam**2 * self.mass,
            abs(lam) ** (p + 1) * self.lower,
            abs(lam) ** (q + 1) * self.upper if q is not None else 0.0,
        )


def norms(spec: ProblemSpec, u: Field) -> Norms:
    v = u.values
    h = u.grid.h
    p, q = spec.p, spec.q
    lower = h * float(np.sum(_abs_power(v, p + 1, spec.odd)))
    upper = h * float(np.sum(_abs_power(v, q + 1, spec.odd))) if q is not None else 0.0
    return Norms(dirichlet_energy(u, spec.sigma), lp_power(u, 2), lower, upper)


def action_from_norms(spec: ProblemSpec, n: Norms) -> float:
    ap, aq = spec.coefficients
    pot = ap * n.lower / (spec.p + 1)
    if spec.q is not None:
        pot += aq * n.upper / (spec.q + 1)
    return 0.5 * n.kinetic + 0.5 * spec.c * n.mass - pot


def nehari_from_norms(spec: ProblemSpec, n: Norms) -> float:
    ap, aq = spec.coefficients
    return n.kinetic + spec.c * n.mass - ap * n.lower - aq * n.upper


def action(spec: ProblemSpec, u: Field) -> float:
    """``S_j(u) = 1/2 ||D^{s/2}u||^2 + c/2 ||u||^2 - int F_j(u)``."""
    return action_from_norms(spec, norms(spec, u))


def action_gradient(spec: ProblemSpec, u: Field) -> Field:
    """L2 gradient ``D^sigma u + c u - f_j(u)``."""
    return apply_symbol(u, spec.sigma) + spec.c * u - Field(u.grid, nonlinearity(spec, u.values))


def nehari(spec: ProblemSpec, u: Field) -> float:
    """``K_j(u) = <S_j'(u), u>``."""
    return nehari_from_norms(spec, norms(spec, u))


def _require(spec: ProblemSpec, variant: str):
    if spec.variant != variant:
        raise UnsupportedVariantError(f"defined for {variant} only, got {spec.variant}")


def i_one(spec: ProblemSpec, u: Field) -> float:
    _require(spec, "sp1")
    n = norms(spec, u)
    p, q = spec.p, spec.q
    hsc2 = n.kinetic + spec.c * n.mass
    return (0.5 - 1.0 / (q + 1)) * hsc2 + (1.0 / (p + 1) - 1.0 / (q + 1)) * n.lower


def pohozaev_from_norms(spec: ProblemSpec, n: Norms) -> float:
    return -0.5 * spec.c * n.mass + n.lower / (spec.p + 1) - n.upper / (spec.q + 1)


def pohozaev_p(spec: ProblemSpec, u: Field) -> float:
    """``P_c(u) = -c/2 ||u||^2 + ||u||_{p+1}^{p+1}/(p+1) - ||u||_{q+1}^{q+1}/(q+1)``."""
    _require(spec, "sp3")
    return pohozaev_from_norms(spec, norms(spec, u))


def j_three(spec: ProblemSpec, u: Field) -> float:
    _require(spec, "sp3")
    return 0.5 * spec.sigma * dirichlet_energy(u, spec.sigma)


def pohozaev_residual(spec: ProblemSpec, u: Field) -> float:
    """Dilation identity ``(1-s)/2 ||D^{s/2}u||^2 + c/2 ||u||^2 - int F(u)``.

    Vanishes on solutions of the continuum problem.
    """
    kin = dirichlet_energy(u, spec.sigma)
    return (0.5 * (1.0 - spec.sigma) * kin + 0.5 * spec.c * lp_power(u, 2)
            - quadrature(Field(u.grid, antiderivative(spec, u.values))))


# -- threshold for the Pohozaev-constrained problem ---------------------------

@dataclass(frozen=True)
class ThresholdConstants:
    alpha: float
    beta: float
    c0: float


def g_c(spec_or_c, s, p=None, q=None):
    """``G_c(s) = c/2 s^2 - |s|^{p+1}/(p+1) + |s|^{q+1}/(q+1)``.

    Call as ``g_c(spec, s)`` or ``g_c(c, s, p, q)``.
    """
    if isinstance(spec_or_c, ProblemSpec):
        c, p, q = spec_or_c.c, spec_or_c.p, spec_or_c.q
    else:
        c = spec_or_c
    s = np.abs(np.asarray(s, dtype=float))
    out = 0.5 * c * s**2 - s ** (p + 1) / (p + 1) + s ** (q + 1) / (q + 1)
    return out if out.ndim else float(out)


def c_zero_bruteforce(p: float, q: float) -> float:
    """Largest c with ``min G_c < 0``, by direct maximisation.

    ``G_c(s) < 0`` iff ``c < 2 (s^{p-1}/(p+1) - s^{q-1}/(q+1))``, so the
    threshold is the supremum of the right side over ``s > 0``.
    """
    def neg(s):
        return -2.0 * (s ** (p - 1) / (p + 1) - s ** (q - 1) / (q + 1))

    # the maximiser solves s^{q-p} = (p-1)(q+1)/((q-1)(p+1)) < 1; search wider
    hi = 4.0
    res = minimize_scalar(neg, bounds=(1e-12, hi), method="bounded",
                          options={"xatol": 1e-14, "maxiter": 500})
    # polish with a few Newton steps on the derivative
    s = res.x
    for _ in range(20):
        d1 = 2.0 * ((p - 1) * s ** (p - 2) / (p + 1) - (q - 1) * s ** (q - 2) / (q + 1))
        d2 = 2.0 * ((p - 1) * (p - 2) * s ** (p - 3) / (p + 1)
                    - (q - 1) * (q - 2) * s ** (q - 3) / (q + 1))
        if d2 == 0:
            break
        step = d1 / d2
        s -= step
        if abs(step) < 1e-16 * s:
            break
    return -neg(s)


def c_zero(p: float, q: float) -> ThresholdConstants:
    if not (p > 1 and q > p):
        raise DomainError(f"need q > p > 1, got p={p}, q={q}")
    alpha = (q - 1) / (q - p)
    beta = (p - 1) / (q - p)
    c0 = 2.0 * (q - p) * (p - 1) ** beta * (q + 1) ** beta / ((p + 1) ** alpha * (q - 1) ** alpha)
    if __debug__:
        # guard against drift in the exponents of the closed form
        ref = c_zero_bruteforce(p, q)
        if abs(ref - c0) > 1e-9 * c0:
            raise AssertionError(f"closed-form c0={c0!r} disagrees with direct maximisation {ref!r}")
    return ThresholdConstants(alpha, beta, c0)
