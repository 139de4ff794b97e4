"""Acceptance criteria 1-10, one test each.

Every test records a one-line summary; the terminal summary prints a
PASS/FAIL line per criterion (see conftest.py).
"""

import math
import time

import numpy as np
import pytest

from fracground.functionals import (
    ProblemSpec,
    action,
    action_gradient,
    c_zero,
    c_zero_bruteforce,
    g_c,
    i_one,
    nehari,
    norms,
)
from fracground.rearrange import decay_bound_check, modulus_energy_check, rearrangement, rearrange_values
from fracground.solvers import SolverConfig, minimize_nehari, petviashvili
from fracground.spectral import GridSpec, dirichlet_energy, kernel, kernel_properties, lp_norm, quadrature
from fracground.verify import classify, sp4_triviality_audit

from helpers import (
    BENJAMIN_GRID,
    SP3_GRID,
    benjamin,
    benjamin_pair,
    criterion_cases,
    ground_state,
    smooth_field,
    sp3_state,
)

CLASSIFY_GRID = GridSpec(3200.0, 2**16)
SP3_CASE = (0.5, 2.0, 2.5, 0.05)


@pytest.fixture
def criterion(record_property):
    def mark(number, title):
        record_property("criterion", f"criterion {number:2d} {title}")

    def summary(text):
        record_property("summary", text)

    mark.summary = summary
    return mark


def _pohozaev_ratio(rep):
    n = norms(rep.spec, rep.profile)
    return abs(rep.pohozaev) / (n.kinetic + n.mass)


def test_criterion_01_benjamin(criterion):
    criterion(1, "Benjamin soliton")
    spec = ProblemSpec(1.0, 1.0, 2.0, None, "single")
    cfg = SolverConfig(grad_tol=1e-10, max_iter=5000)
    t0 = time.perf_counter()
    nm = minimize_nehari(spec, BENJAMIN_GRID, cfg)
    t1 = time.perf_counter()
    pv = petviashvili(spec, BENJAMIN_GRID, cfg)
    t2 = time.perf_counter()
    exact = benjamin(BENJAMIN_GRID.x)
    err_nm = np.max(np.abs(nm.profile.values - exact))
    err_pv = np.max(np.abs(pv.profile.values - exact))
    mutual = lp_norm(nm.profile - pv.profile, 2) / lp_norm(pv.profile, 2)
    criterion.summary(f"max err {err_nm:.1e}/{err_pv:.1e}, mutual {mutual:.1e}, "
                      f"{t1 - t0:.1f}s/{t2 - t1:.1f}s")
    assert nm.converged and pv.converged
    assert err_nm <= 1e-3 and err_pv <= 1e-3
    assert mutual <= 1e-6
    assert t1 - t0 <= 60 and t2 - t1 <= 60


def test_criterion_02_residuals(criterion):
    criterion(2, "Euler-Lagrange and Nehari residuals")
    worst_el, worst_k, bad = 0.0, 0.0, []
    for case in criterion_cases():
        rep = ground_state(*case)
        el = rep.el_residual
        k = abs(rep.nehari_value) / rep.scale
        worst_el, worst_k = max(worst_el, el), max(worst_k, k)
        if not (rep.converged and el <= 1e-6 and k <= 1e-8):
            bad.append((case, rep.converged, el, k))
    criterion.summary(f"{len(criterion_cases())} runs, max el {worst_el:.1e}, max |K|/scale {worst_k:.1e}")
    assert not bad, bad


def test_criterion_03_pohozaev(criterion):
    criterion(3, "Pohozaev identity")
    reports = {case: ground_state(*case) for case in criterion_cases()}
    reports.update({"benjamin nehari": benjamin_pair()[0], "benjamin petviashvili": benjamin_pair()[1],
                    "sp3": sp3_state(*SP3_CASE, SP3_GRID.L, SP3_GRID.N)})
    ratios = {k: _pohozaev_ratio(r) for k, r in reports.items() if r.converged}
    worst = max(ratios, key=ratios.get)
    criterion.summary(f"{len(ratios)} converged runs, worst {ratios[worst]:.1e} at {worst}")
    assert len(ratios) == len(reports)
    assert all(v <= 1e-5 for v in ratios.values()), {k: v for k, v in ratios.items() if v > 1e-5}


def _min_g(c, p, q):
    from scipy.optimize import minimize_scalar

    smax = 2.0 * (((p - 1) * (q + 1)) / ((q - 1) * (p + 1))) ** (1 / (q - p))
    s = np.linspace(0.0, smax, 20001)[1:]
    vals = g_c(c, s, p, q)
    i = int(np.argmin(vals))
    res = minimize_scalar(lambda t: g_c(c, t, p, q), bounds=(s[max(i - 1, 0)], s[min(i + 1, s.size - 1)]),
                          method="bounded", options={"xatol": 1e-14})
    return min(float(res.fun), float(vals[i]))


def test_criterion_04_threshold(criterion):
    criterion(4, "threshold constant")
    diffs = {}
    for (p, q), exact in {(2, 3): 2 / 9, (3, 5): 3 / 16}.items():
        c0 = c_zero(p, q).c0
        diffs[(p, q)] = max(abs(c0 - exact), abs(c0 - c_zero_bruteforce(p, q)))
    sign_errors = []
    for p, q in ((2, 3), (3, 5)):
        c0 = c_zero(p, q).c0
        grid = np.concatenate([np.linspace(0.5 * c0, c0 - 1e-6, 10), np.linspace(c0 + 1e-6, 1.5 * c0, 10)])
        for c in grid:
            m = _min_g(c, p, q)
            if (c < c0 and not m < 0) or (c > c0 and m < -1e-10):
                sign_errors.append((p, q, c, m))
    criterion.summary(f"max |c0 - oracle| {max(diffs.values()):.1e}, sign audit 40 points, "
                      f"{len(sign_errors)} errors")
    assert all(d <= 1e-10 for d in diffs.values())
    assert not sign_errors


def test_criterion_05_sp3_multiplier(criterion):
    criterion(5, "SP3 multiplier identities")
    sigma, p, q, c = SP3_CASE
    t0 = time.perf_counter()
    rep = sp3_state.__wrapped__(sigma, p, q, c, SP3_GRID.L, SP3_GRID.N)
    elapsed = time.perf_counter() - t0
    r = (1 - sigma) / sigma
    mult_err = abs(rep.multiplier * r * rep.j3_value - 1)
    action_err = abs(rep.action * r ** (-r) * rep.j3_value ** (-1 / sigma) - 1)
    criterion.summary(f"multiplier identity {mult_err:.1e}, action identity {action_err:.1e}, {elapsed:.0f}s, converged={rep.converged}")
    assert rep.converged
    assert mult_err <= 1e-3 and action_err <= 1e-3
    assert elapsed <= 300


def test_criterion_06_classification(criterion):
    criterion(6, "parity classification")
    cfg = SolverConfig(grad_tol=1e-9)
    even_odd = classify(2, 3, 0.1, CLASSIFY_GRID, cfg)
    odd_odd = classify(3, 5, 0.1, CLASSIFY_GRID, cfg)
    odd_even = classify(3, 4, 1.0, GridSpec(400.0, 2**14), cfg)
    margin = even_odd.verdict("psi1_below_positive").margin
    eq = odd_odd.verdict("signed_actions_equal")
    criterion.summary(f"even_odd margin {margin:.4g}, odd_odd |diff| {eq.margin:.1e}, "
                      f"odd_even negative branch {odd_even.verdict('no_negative_solution').status}")
    assert even_odd.case_label == "even_odd" and margin > 0
    assert all(v.passed for v in even_odd.verdicts)
    assert odd_odd.case_label == "odd_odd" and eq.passed and eq.margin <= 1e-10 * abs(eq.lhs)
    assert odd_even.case_label == "odd_even" and odd_even.negative_solution is None
    assert odd_even.verdict("no_negative_solution").passed


def test_criterion_07_sp4(criterion):
    criterion(7, "SP4 triviality")
    rep = sp4_triviality_audit(ProblemSpec(1.0, 1.0, 2, 3, "sp4"), trials=100)
    criterion.summary(f"min K4/bound {rep.min_ratio:.3f} over {rep.trials} fields, "
                      f"collapse ratios <= {max(rep.collapse_ratios):.1e}")
    assert rep.bound_holds and rep.min_ratio >= 1.0
    assert not rep.fixed_point_found


def test_criterion_08_structural_identities(criterion):
    criterion(8, "structural identities")
    grid = GridSpec(30.0, 512)
    rng = np.random.default_rng(8)
    spec = ProblemSpec(0.8, 0.7, 2, 3.5, "sp1")
    worst = 0.0
    for _ in range(50):
        u = smooth_field(grid, rng)
        n = norms(spec, u)
        s = action(spec, u)
        via_i_one = nehari(spec, u) / (spec.q + 1) + i_one(spec, u)
        via_norms = 0.5 * nehari(spec, u) - (0.5 - 1 / (spec.p + 1)) * n.lower + (0.5 - 1 / (spec.q + 1)) * n.upper
        worst = max(worst, abs(s - via_i_one) / abs(s), abs(s - via_norms) / abs(s))
    orders = []
    fd_spec = ProblemSpec(1.0, 0.6, 3, 5, "sp1")
    for _ in range(10):
        u, v = smooth_field(grid, rng), smooth_field(grid, rng)
        exact = quadrature(action_gradient(fd_spec, u) * v)
        errs = [abs((action(fd_spec, u + e * v) - action(fd_spec, u - e * v)) / (2 * e) - exact)
                for e in (4e-2, 1e-2)]
        orders.append(math.log(errs[0] / errs[1], 4))
    criterion.summary(f"identities worst rel {worst:.1e}, FD orders {min(orders):.2f}..{max(orders):.2f}")
    assert worst <= 1e-12
    assert all(1.8 <= o <= 2.2 for o in orders)


def test_criterion_09_rearrangement(criterion):
    criterion(9, "rearrangement suite")
    rng = np.random.default_rng(9)
    grid = GridSpec(40.0, 4096)
    slack = 0.0
    for _ in range(25):
        u = smooth_field(grid, rng)
        star = rearrangement(u)
        assert np.array_equal(np.sort(star.values), np.sort(np.abs(u.values)))
        assert np.array_equal(rearrange_values(star.values), star.values)
        for sigma in (0.4, 1.0, 1.6):
            mod, full = modulus_energy_check(u, sigma)
            st = math.sqrt(dirichlet_energy(star, sigma))
            slack = max(slack, mod / full - 1, st / mod - 1)
    checked, failures = 0, []
    states = [ground_state(*case) for case in criterion_cases()] + [benjamin_pair()[0]]
    for rep in states:
        if not rep.converged:
            continue
        p, q = rep.spec.p, rep.spec.q
        for r in {2.0, p + 1, q + 1 if q is not None else p + 1}:
            checked += 1
            res = decay_bound_check(rep.profile, r)
            if not res.holds:
                failures.append((rep.spec, r, res.max_violation))
    criterion.summary(f"worst energy slack {slack:.1e}, decay bound on {checked} (state, r) pairs")
    assert slack <= 1e-6
    assert not failures, failures


def test_criterion_10_kernel(criterion):
    criterion(10, "kernel suite")
    grid = GridSpec(400.0, 2**15)
    worst, bad = 0.0, []
    for sigma in (0.5, 1.0, 1.5):
        for nu in (0.5, 1.0, 2.0):
            props = kernel_properties(kernel(sigma, nu, grid))
            worst = max(worst, abs(props["quadrature"] - 1 / nu))
            if not (props["positive"] and props["even"] and props["decreasing"]):
                bad.append((sigma, nu, props))
    criterion.summary(f"9 (sigma, nu) pairs, max |quadrature - 1/nu| {worst:.1e}")
    assert worst <= 1e-6
    assert not bad, bad
