"""Ground-state solvers.

* :func:`minimize_nehari` -- action minimisation on the Nehari set for the
  problems with a Nehari-type mountain pass geometry (sp1, sp2, single).
* :func:`minimize_pohozaev` -- kinetic-energy minimisation under the
  Pohozaev constraint for sp3, followed by multiplier recovery and rescaling.
* :func:`petviashvili` -- independent fixed-point solver for single powers.

All descent steps are preconditioned by the resolvent ``(D^sigma + c)^{-1}``,
i.e. they follow the gradient in the ``H^{sigma/2}_c`` inner product.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.sparse.linalg import LinearOperator, gmres

from . import functionals as fn
from .errors import (
    DivergenceError,
    DomainError,
    NoRootError,
    StationarityError,
    ThresholdError,
    TrivialityError,
    UnsupportedVariantError,
)
from .functionals import ProblemSpec
from .rearrange import rearrangement
from .spectral import (
    Field,
    GridSpec,
    _rsymbol,
    _rweights,
    apply_symbol,
    dilate,
    lp_norm,
    resolvent,
)

log = logging.getLogger(__name__)

PROFILES = ("lorentzian", "gaussian", "sech2", "supergaussian", "file")


@dataclass
class SolverConfig:
    max_iter: int = 5000
    grad_tol: float = 1e-8
    step: float = 1.0
    recenter_every: int = 0
    initial_profile: str = "lorentzian"
    init_amplitude: Optional[float] = None
    init_width: Optional[float] = None
    seed: int = 0
    profile_path: Optional[str] = None
    symmetrize: bool = True

    def __post_init__(self):
        if self.grad_tol < 1e-12:
            raise DomainError(f"grad_tol must be >= 1e-12, got {self.grad_tol}")
        if not self.step > 0:
            raise DomainError(f"step must be positive, got {self.step}")
        if self.initial_profile not in PROFILES:
            raise DomainError(f"unknown initial profile {self.initial_profile!r}")
        if self.initial_profile == "file" and not self.profile_path:
            raise DomainError("initial_profile 'file' needs profile_path")
        for name in ("init_amplitude", "init_width"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"{name} must be positive, got {v}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data) -> "SolverConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown solver options: {sorted(unknown)}")
        return cls(**data)


@dataclass
class GroundStateReport:
    profile: Field
    spec: ProblemSpec
    action: float
    nehari_value: float
    pohozaev: float
    el_residual: float
    iterations: int
    converged: bool
    multiplier: Optional[float] = None
    j3_value: Optional[float] = None
    d_estimate: float = math.nan
    halvings: int = 0
    method: str = ""
    notes: list = field(default_factory=list)

    @property
    def scale(self) -> float:
        """``||phi||^2_{H^{sigma/2}_c}``, the natural size of the functionals."""
        n = fn.norms(self.spec, self.profile)
        return n.kinetic + self.spec.c * n.mass

    def scalars(self) -> dict:
        out = {
            "action": self.action,
            "nehari_value": self.nehari_value,
            "pohozaev": self.pohozaev,
            "el_residual": self.el_residual,
            "multiplier": self.multiplier,
            "j3_value": self.j3_value,
            "d_estimate": self.d_estimate,
            "iterations": self.iterations,
            "converged": self.converged,
            "halvings": self.halvings,
            "method": self.method,
        }
        return out


# -- small helpers -------------------------------------------------------------

def initial_profile(grid: GridSpec, kind: str = "lorentzian", amplitude: float = 1.0,
                    width: float = 1.0, path: Optional[str] = None) -> Field:
    x = grid.x / width
    if kind == "lorentzian":
        v = 1.0 / (1.0 + x**2)
    elif kind == "gaussian":
        v = np.exp(-(x**2))
    elif kind == "sech2":
        v = 1.0 / np.cosh(np.clip(x, -350, 350)) ** 2
    elif kind == "supergaussian":
        v = np.exp(-(x**8))
    elif kind == "file":
        from .io import read_field_csv

        u = read_field_csv(path)
        if u.grid != grid:
            raise DomainError("initial profile file is on a different grid")
        return u
    else:
        raise DomainError(f"unknown initial profile {kind!r}")
    return Field(grid, amplitude * v)


def recenter(u: Field) -> Field:
    """Circular shift putting ``argmax |u|`` (first one on ties) at node N/2."""
    a = np.abs(u.values)
    if not np.any(a > 0):
        raise DomainError("cannot recenter the zero field")
    m = int(np.argmax(a))
    return Field(u.grid, np.roll(u.values, u.grid.center - m))


def _relative_residual(g: Field, u: Field) -> float:
    nu = lp_norm(u, 2)
    return lp_norm(g, 2) / nu if nu > 0 else math.inf


def _scaling_coeffs(spec: ProblemSpec, n: fn.Norms):
    """``K(lam u)/lam^2 = a + b lam^{p-1} - g lam^{q-1}``."""
    ap, aq = spec.coefficients
    a = n.kinetic + spec.c * n.mass
    b = -ap * n.lower
    g = aq * n.upper
    return a, b, g


def _positive_root(func, lo_val_sign=1.0):
    """Root of a function positive near 0 and eventually negative."""
    hi = 1.0
    for _ in range(200):
        if func(hi) < 0:
            break
        hi *= 2.0
    else:
        raise NoRootError("scaling function never changes sign")
    lo = hi / 2.0
    for _ in range(2000):
        if func(lo) > 0:
            break
        lo /= 2.0
    else:
        raise NoRootError("scaling function never positive")
    return brentq(func, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def nehari_scaling(spec: ProblemSpec, u: Field) -> float:
    """Unique ``lam > 0`` with ``K(lam u) = 0``."""
    if not np.any(u.values != 0):
        raise DomainError("cannot project the zero field onto the Nehari set")
    if spec.variant == "sp4":
        raise TrivialityError("K_4 > 0 away from zero: the Nehari set of sp4 is empty")
    return nehari_scaling_from_norms(spec, fn.norms(spec, u))


def nehari_scaling_from_norms(spec: ProblemSpec, n: fn.Norms) -> float:
    a, b, g = _scaling_coeffs(spec, n)
    p = spec.p
    q = spec.q if spec.q is not None else spec.p
    if spec.variant == "single":
        # K(lam u)/lam^2 = a - lam^{p-1} ||u||^{p+1}
        if not b < 0:
            raise NoRootError("zero potential term: no Nehari scaling")
        return float((a / -b) ** (1.0 / (p - 1)))
    if not g > 0:
        if b < 0:
            return _positive_root(lambda lam: a + b * lam ** (p - 1) - g * lam ** (q - 1))
        raise NoRootError("K(lam u) > 0 for all lam: no Nehari scaling")
    return _positive_root(lambda lam: a + b * lam ** (p - 1) - g * lam ** (q - 1))


def _default_amplitude(spec: ProblemSpec) -> float:
    # a level where the attractive part of f dominates c*s
    s = np.linspace(1e-3, 20.0, 4000)
    ratio = fn.nonlinearity(spec, s) / s - spec.c
    good = s[ratio > 0]
    if good.size == 0:
        return 1.0
    return float(good[0] * 1.5)


def _default_width(spec: ProblemSpec, amplitude: float) -> float:
    # D^sigma ~ width^{-sigma} balances f(a)/a
    rate = abs(fn.nonlinearity(spec, amplitude) / amplitude)
    return float(max(rate, 1e-3) ** (-1.0 / spec.sigma))


def _start(spec, grid, config, amplitude=None, width=None):
    if config.initial_profile == "file":
        return initial_profile(grid, "file", path=config.profile_path)
    amp = config.init_amplitude or amplitude or _default_amplitude(spec)
    wid = config.init_width or width or _default_width(spec, amp)
    kind = config.initial_profile
    if kind == "lorentzian" and spec.sigma > 1.8:
        kind = "gaussian"
    return initial_profile(grid, kind, amp, wid)


def _finish_report(spec, u, iterations, converged, method, halvings=0, **extra):
    n = fn.norms(spec, u)
    grad = fn.action_gradient(spec, u)
    s = fn.action_from_norms(spec, n)
    return GroundStateReport(
        profile=u,
        spec=spec,
        action=s,
        nehari_value=fn.nehari_from_norms(spec, n),
        pohozaev=fn.pohozaev_residual(spec, u),
        el_residual=_relative_residual(grad, u),
        iterations=iterations,
        converged=converged,
        d_estimate=s,
        halvings=halvings,
        method=method,
        **extra,
    )


# -- Fourier-space workspace --------------------------------------------------------

class _Hat:
    """Half-spectrum (rfft) bookkeeping shared by the descent loops."""

    def __init__(self, grid: GridSpec, sigma: float):
        n = grid.N
        self.grid = grid
        self.n = n
        self.sym = _rsymbol(grid, float(sigma))
        self.w = _rweights(grid)
        self.parity = (-1.0) ** np.arange(n // 2 + 1)
        self.pnorm = 2.0 * grid.L / n**2

    def hat(self, v):
        return np.fft.rfft(v)

    def real(self, vh):
        return np.fft.irfft(vh, n=self.n)

    def even(self, vh):
        # u even about x = 0  <=>  (-1)^k c_k is real
        return self.parity * (self.parity * vh).real

    def sq(self, vh) -> float:
        return float(self.pnorm * np.sum(self.w * (vh.real**2 + vh.imag**2)))

    def kinetic(self, vh) -> float:
        return float(self.pnorm * np.sum(self.w * self.sym * (vh.real**2 + vh.imag**2)))


def _norms(spec: ProblemSpec, hat: _Hat, v, vh) -> fn.Norms:
    h = hat.grid.h
    lower = h * float(np.sum(fn._abs_power(v, spec.p + 1, spec.odd)))
    upper = h * float(np.sum(fn._abs_power(v, spec.q + 1, spec.odd))) if spec.q is not None else 0.0
    return fn.Norms(hat.kinetic(vh), h * float(np.dot(v, v)), lower, upper)


def newton_polish(spec: ProblemSpec, u: Field, tol: float, max_newton: int = 20,
                  symmetrize: bool = True):
    """Newton iteration on ``D^sigma u + c u - f(u) = 0`` started from ``u``.

    Linear systems are solved by GMRES preconditioned with the resolvent
    ``(D^sigma + c)^{-1}``; each update is damped until the residual drops.
    Returns ``(field, relative residual, newton steps)``.
    """
    grid = u.grid
    hat = _Hat(grid, spec.sigma)
    shift = hat.sym + spec.c
    n = grid.N

    def clean(v):
        vh = hat.hat(v)
        return hat.real(hat.even(vh)) if symmetrize else v

    def residual(v):
        return hat.real(shift * hat.hat(v)) - fn.nonlinearity(spec, v)

    v = clean(u.values)
    r = residual(v)
    rel = float(np.linalg.norm(r) / np.linalg.norm(v))
    steps = 0
    while rel > tol and steps < max_newton:
        steps += 1
        df = fn.nonlinearity_derivative(spec, v)
        jac = LinearOperator((n, n), matvec=lambda w: hat.real(shift * hat.hat(w)) - df * w,
                             dtype=float)
        pre = LinearOperator((n, n), matvec=lambda w: hat.real(hat.hat(w) / shift), dtype=float)
        delta, _ = gmres(jac, -r, M=pre, rtol=min(1e-3, 0.1 * tol / rel), atol=0.0,
                         restart=60, maxiter=20)
        delta = clean(delta)
        t = 1.0
        while t > 1e-4:
            trial = v + t * delta
            r_new = residual(trial)
            rel_new = float(np.linalg.norm(r_new) / np.linalg.norm(trial))
            if rel_new < rel:
                break
            t *= 0.5
        else:
            break
        v, r, rel = trial, r_new, rel_new
        log.debug("newton polish: step %d rel residual %.3e (damping %g)", steps, rel, t)
    return Field(grid, v), rel, steps


# -- Nehari minimisation ---------------------------------------------------------

def minimize_nehari(spec: ProblemSpec, grid: GridSpec, config: Optional[SolverConfig] = None,
                    start: Optional[Field] = None) -> GroundStateReport:
    """Minimise the action over the Nehari set by projected descent.

    Each step moves along the preconditioned gradient ``R_c S'(u)`` and
    rescales the result back onto ``{K = 0}``. A step that raises the
    action is retried with half the step length.
    """
    config = config or SolverConfig()
    if spec.variant == "sp4":
        raise TrivialityError(
            "sp4 has only the trivial solution (K_4(u) >= ||u||^2_{H_c} > 0)")
    if spec.variant == "sp3":
        raise UnsupportedVariantError("sp3 is solved by minimize_pohozaev, not on the Nehari set")

    hat = _Hat(grid, spec.sigma)
    shift = hat.sym + spec.c
    u = start if start is not None else _start(spec, grid, config)
    uh = hat.hat(u.values)
    if config.symmetrize:
        uh = hat.even(uh)
    v = hat.real(uh)
    n = _norms(spec, hat, v, uh)
    lam = nehari_scaling_from_norms(spec, n)
    v, uh, n = lam * v, lam * uh, n.scaled(lam, spec.p, spec.q)
    s_old = fn.action_from_norms(spec, n)

    tau = config.step
    halvings = 0
    converged = False
    it = 0
    while True:
        fh = hat.hat(fn.nonlinearity(spec, v))
        gh = shift * uh - fh
        if math.sqrt(hat.sq(gh) / hat.sq(uh)) <= config.grad_tol:
            converged = True
            break
        if it >= config.max_iter:
            break
        it += 1
        dh = uh - fh / shift
        while True:
            th = uh - tau * dh
            if config.symmetrize:
                th = hat.even(th)
            t = hat.real(th)
            nt = _norms(spec, hat, t, th)
            try:
                lam = nehari_scaling_from_norms(spec, nt)
            except NoRootError:
                lam = None
            if lam is not None:
                nt = nt.scaled(lam, spec.p, spec.q)
                s_new = fn.action_from_norms(spec, nt)
                if s_new <= s_old + 1e-13 * abs(s_old):
                    break
            tau *= 0.5
            halvings += 1
            log.info("nehari descent: step halved to %g at iteration %d", tau, it)
            if tau < 1e-12:
                return _finish_report(spec, Field(grid, v), it, False, "nehari", halvings,
                                      notes=["step underflow"])
        v, uh, s_old = lam * t, lam * th, s_new
        if config.recenter_every and it % config.recenter_every == 0:
            w = Field(grid, v)
            w = rearrangement(w) if spec.variant != "integer_sp" else recenter(w)
            uh = hat.hat(w.values)
            if config.symmetrize:
                uh = hat.even(uh)
            v = hat.real(uh)
            n = _norms(spec, hat, v, uh)
            lam = nehari_scaling_from_norms(spec, n)
            v, uh = lam * v, lam * uh
            s_old = fn.action_from_norms(spec, n.scaled(lam, spec.p, spec.q))
    return _finish_report(spec, Field(grid, v), it, converged, "nehari", halvings)


# -- Petviashvili -------------------------------------------------------------------

def petviashvili(spec: ProblemSpec, grid: GridSpec, config: Optional[SolverConfig] = None,
                 start: Optional[Field] = None) -> GroundStateReport:
    """Stabilised fixed-point iteration ``u <- M^gamma (D^s + c)^{-1} f(u)``."""
    config = config or SolverConfig()
    if spec.variant != "single":
        raise UnsupportedVariantError("petviashvili handles single-power problems only")
    u = start if start is not None else _start(spec, grid, config)
    if config.symmetrize:
        u = u.symmetrize()
    gamma = spec.p / (spec.p - 1.0)
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        fu = Field(grid, fn.nonlinearity(spec, u.values))
        lin = apply_symbol(u, spec.sigma) + spec.c * u
        den = float(np.dot(u.values, fu.values))
        if den == 0:
            raise DivergenceError("stabilising quotient undefined")
        m = float(np.dot(u.values, lin.values)) / den
        if not 1e-6 <= m <= 1e6:
            raise DivergenceError(f"stabilising factor left [1e-6, 1e6]: {m}")
        new = m**gamma * resolvent(fu, spec.sigma, spec.c)
        if config.symmetrize:
            new = new.symmetrize()
        change = lp_norm(new - u, 2) / lp_norm(u, 2)
        u = new
        if change <= config.grad_tol:
            converged = True
            break
    return _finish_report(spec, u, it, converged, "petviashvili")


# -- Pohozaev-constrained minimisation ----------------------------------------------

def _pc_scaled(spec, n: fn.Norms, lam):
    p, q = spec.p, spec.q
    return (-0.5 * spec.c * lam**2 * n.mass + lam ** (p + 1) * n.lower / (p + 1)
            - lam ** (q + 1) * n.upper / (q + 1))


def pohozaev_amplitude(spec: ProblemSpec, n: fn.Norms, level: float) -> float:
    """Smaller positive root of ``P_c(lam u) = level``.

    ``level = 0`` for sigma = 1, ``level > 0`` otherwise. Raises
    :class:`ThresholdError` when ``max_lam P_c(lam u) < level``.
    """
    p, q, c = spec.p, spec.q, spec.c
    B, G, m = n.lower, n.upper, n.mass
    if not (B > 0 and G > 0 and m > 0):
        raise DomainError("degenerate field in Pohozaev projection")
    # d/dlam P(lam u) = lam (-c m + lam^{p-1} B - lam^{q-1} G)
    lam_k = ((p - 1) * B / ((q - 1) * G)) ** (1.0 / (q - p))

    def kfun(lam):
        return -c * m + lam ** (p - 1) * B - lam ** (q - 1) * G

    if kfun(lam_k) <= 0:
        raise ThresholdError("P_c(lam u) < 0 for every lam: the profile cannot reach the constraint")
    hi = 2.0 * lam_k
    while kfun(hi) > 0:
        hi *= 2.0
    lam_peak = brentq(kfun, lam_k, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    if level == 0:
        # P(lam u)/lam^2 is increasing on (0, lam_h), lam_h its maximiser
        lam_h = ((p - 1) * (q + 1) * B / ((q - 1) * (p + 1) * G)) ** (1.0 / (q - p))

        def h(lam):
            return -0.5 * c * m + lam ** (p - 1) * B / (p + 1) - lam ** (q - 1) * G / (q + 1)

        if h(lam_h) <= 0:
            raise ThresholdError("P_c(lam u) <= 0 for every lam")
        lo = lam_h
        while h(lo) > 0:
            lo *= 0.5
        return brentq(h, lo, lam_h, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    top = _pc_scaled(spec, n, lam_peak)
    if top < level:
        raise ThresholdError(f"max P_c(lam u) = {top:.6g} below level {level:.6g}")
    return brentq(lambda lam: _pc_scaled(spec, n, lam) - level, lam_peak * 1e-12,
                  lam_peak, xtol=1e-300, rtol=4 * np.finfo(float).eps)


def _boundary_mass_fraction(u: Field) -> float:
    x = np.abs(u.grid.x)
    sq = u.values**2
    total = float(np.sum(sq))
    return float(np.sum(sq[x >= 0.9 * u.grid.L]) / total) if total > 0 else 0.0


def _sp3_start(spec: ProblemSpec, grid: GridSpec, config: SolverConfig, hat: _Hat):
    """Analytic starting profile on a Pohozaev level set with ``k`` close to 1.

    The amplitude sits where the Pohozaev density ``F(s) - c s^2/2`` peaks.
    The width is then corrected using ``k(u(x/w)) = w^{-sigma} k(u)``, which
    is exact for a fixed shape, re-sampling the analytic profile each time.
    """
    p, q, c, sigma = spec.p, spec.q, spec.c, spec.sigma
    s = np.linspace(1e-4, 4.0, 40000)
    dens = s ** (p + 1) / (p + 1) - s ** (q + 1) / (q + 1) - 0.5 * c * s**2
    amp = config.init_amplitude or float(s[np.argmax(dens)])
    kinds = [config.initial_profile]
    if config.initial_profile != "file":
        kinds.append("supergaussian")
    for kind in kinds:
        cfg = replace(config, initial_profile=kind)
        wid = config.init_width or _default_width(spec, amp)
        for _ in range(20):
            u = _start(spec, grid, cfg, amplitude=amp, width=wid)
            uh = hat.hat(u.values)
            if config.symmetrize:
                uh = hat.even(uh)
            v = hat.real(uh)
            n = _norms(spec, hat, v, uh)
            if not fn.pohozaev_from_norms(spec, n) > 0:
                break
            pair = -c * n.mass + n.lower - n.upper
            if kind == "file" or config.init_width or not pair > 0:
                return v, uh, n
            k = n.kinetic / pair
            if abs(k - 1.0) < 1e-3:
                return v, uh, n
            wid *= k ** (1.0 / sigma)
            if not (4 * grid.h < wid < 0.2 * grid.L):
                raise DomainError(f"starting width {wid:.3g} does not fit the grid (h={grid.h:.3g}, L={grid.L})")
    raise ThresholdError("no admissible starting profile with P_c > 0", c, fn.c_zero(p, q).c0)


def minimize_pohozaev(spec: ProblemSpec, grid: GridSpec, config: Optional[SolverConfig] = None,
                      start: Optional[Field] = None) -> GroundStateReport:
    """Ground state of sp3 through the Pohozaev-constrained problem.

    Stage one minimises ``J_3 = sigma/2 ||D^{sigma/2}u||^2`` on a Pohozaev
    level set (``P_c = 0`` for sigma = 1, ``P_c = level > 0`` otherwise),
    pulling every step back with the smaller amplitude root. A constrained
    critical point solves ``D^sigma u = k P_c'(u)``; the iterate is kept at
    the dilation where ``k = 1``, which is a solution of sp3 itself. On the
    truncated periodic box ``J_3`` is only approximately dilation
    invariant, so the descent settles slightly off the solution; stage two
    finishes with :func:`newton_polish` on the sp3 equation.

    ``multiplier`` and ``j3_value`` refer to the normalised constrained
    problem (``P_c = 1`` for sigma < 1; ``P_c = 0`` and ``||v||_2 = 1`` for
    sigma = 1) whose minimiser ``v`` gives ``phi(x) = v(mu^{1/sigma} x)``.
    """
    config = config or SolverConfig()
    if spec.variant != "sp3":
        raise UnsupportedVariantError(f"minimize_pohozaev solves sp3, got {spec.variant}")
    c0 = fn.c_zero(spec.p, spec.q).c0
    if not spec.c < c0:
        raise ThresholdError(f"need c < c0(p, q) = {c0:.17g}, got c = {spec.c}", spec.c, c0)
    sigma, c = spec.sigma, spec.c
    hat = _Hat(grid, sigma)
    sym = hat.sym

    if start is not None:
        uh = hat.hat(start.values)
        if config.symmetrize:
            uh = hat.even(uh)
        v = hat.real(uh)
        n = _norms(spec, hat, v, uh)
    else:
        v, uh, n = _sp3_start(spec, grid, config, hat)
    level = 0.0 if sigma == 1 else fn.pohozaev_from_norms(spec, n)
    if level < 0:
        raise ThresholdError("starting profile has P_c < 0", c, c0)
    lam = pohozaev_amplitude(spec, n, level)
    v, uh, n = lam * v, lam * uh, n.scaled(lam, spec.p, spec.q)

    def multiplier_k(nn):
        pair = -c * nn.mass + nn.lower - nn.upper
        if not pair > 0:
            raise StationarityError(f"<P_c'(u), u> = {pair:.3g} is not positive")
        return nn.kinetic / pair

    def normalised(nn, lev):
        # J_3 of the level-one dilate (dilation invariant on the line)
        j = 0.5 * sigma * nn.kinetic
        return j if sigma == 1 else j * lev ** (sigma - 1)

    def regauge(v, kappa, lev):
        w = dilate(Field(grid, v), kappa)
        uh = hat.hat(w.values)
        if config.symmetrize:
            uh = hat.even(uh)
        v = hat.real(uh)
        if sigma != 1:
            lev = lev / kappa
        n = _norms(spec, hat, v, uh)
        lam = pohozaev_amplitude(spec, n, lev)
        return lam * v, lam * uh, n.scaled(lam, spec.p, spec.q), lev

    switch_tol = max(config.grad_tol, 1e-4)
    tau = config.step
    it = 0
    halvings = 0
    rescales = 0
    best, since_best = math.inf, 0
    j_old = normalised(n, level)
    while True:
        k = multiplier_k(n)
        kappa = k ** (-1.0 / sigma)
        fh = hat.hat(fn.nonlinearity(spec, v))
        shift = sym + k * c
        rh = shift * uh - k * fh
        res = math.sqrt(hat.sq(rh) / hat.sq(uh)) / k
        if abs(kappa - 1.0) > 0.02:
            # stay at the dilation where k = 1; this also pins the scale,
            # which the box would otherwise let drift toward a flat profile
            rescales += 1
            log.debug("pohozaev descent: it=%d regauge by %.6g (k=%.6g, level=%.6g)", it, kappa, k, level)
            v, uh, n, level = regauge(v, kappa, level)
            j_old = normalised(n, level)
            continue
        if res < 0.99 * best:
            best, since_best = res, 0
        else:
            since_best += 1
        if res <= switch_tol or since_best > 500 or it >= config.max_iter:
            break
        it += 1
        if it % 200 == 0:
            log.debug("pohozaev descent: it=%d res=%.3e k=%.8f j=%.12g", it, res, k, j_old)
        dh = rh / shift
        while True:
            th = uh - tau * dh
            if config.symmetrize:
                th = hat.even(th)
            t = hat.real(th)
            nt = _norms(spec, hat, t, th)
            try:
                lam = pohozaev_amplitude(spec, nt, level)
            except (ThresholdError, DomainError):
                lam = None
            if lam is not None:
                nt = nt.scaled(lam, spec.p, spec.q)
                j_new = normalised(nt, level)
                pair_t = -c * nt.mass + nt.lower - nt.upper
                # a step may not slide far along the (nearly flat) dilation
                # direction; those are undone by the regauge anyway
                if (j_new <= j_old * (1 + 1e-13) and pair_t > 0
                        and abs(nt.kinetic / pair_t / k - 1.0) <= 0.05):
                    break
            tau *= 0.5
            halvings += 1
            log.info("pohozaev descent: step halved to %g at iteration %d", tau, it)
            if tau < 1e-12:
                break
        if tau < 1e-12:
            break
        v, uh, n, j_old = lam * t, lam * th, nt, j_new
        tau = min(config.step, 2.0 * tau)

    descent_level = j_old
    kappa = multiplier_k(n) ** (-1.0 / sigma)
    phi = dilate(Field(grid, v), kappa)
    frac = _boundary_mass_fraction(phi)
    if frac > 1e-6:
        raise DomainError(f"rescaled profile carries {frac:.2e} of its mass near the boundary; enlarge L")
    newton_steps = 0
    if it < config.max_iter:
        phi, rel, newton_steps = newton_polish(spec, phi, config.grad_tol, symmetrize=config.symmetrize)

    # phi now (approximately) solves sp3, i.e. k = 1 at level P_c(phi)
    nphi = fn.norms(spec, phi)
    pc = fn.pohozaev_from_norms(spec, nphi)
    j_phi = 0.5 * sigma * nphi.kinetic
    if sigma == 1:
        mu = 1.0 / nphi.mass
        j3 = j_phi
    else:
        if not pc > 0:
            raise StationarityError(f"P_c(phi) = {pc:.3g} <= 0: no positive multiplier")
        mu = pc ** (-sigma)
        j3 = j_phi * pc ** (sigma - 1)
    if not mu > 0:
        raise StationarityError(f"multiplier {mu} is not positive")
    notes = [f"boundary_mass_fraction={frac:.3e}", f"descent_level={descent_level:.17g}",
             f"rescales={rescales}", f"newton_steps={newton_steps}"]
    report = _finish_report(spec, phi, it + newton_steps, False, "pohozaev", halvings,
                            multiplier=mu, j3_value=j3, notes=notes)
    report.converged = bool(report.el_residual <= config.grad_tol and np.min(phi.values) > 0)
    return report
